#include "latloc/json_io.hpp"

#include "latloc/error.hpp"

namespace latloc::json_io {

namespace {

std::optional<std::string> rational_text(const std::optional<Rational>& r) {
  if (!r) return std::nullopt;
  return to_string(*r);
}

nlohmann::json nullable(const std::optional<std::string>& s) {
  return s ? nlohmann::json(*s) : nlohmann::json(nullptr);
}

std::optional<Rational> rational_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return parse_rational(j.at(key).get<std::string>());
}

void check_format(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", 0) != kFormat) schema_error("missing or unsupported \"format\"");
}

nlohmann::json annotation_to_json(const std::optional<ConceptAnnotation>& a) {
  if (!a) return nullptr;
  return {{"rule", a->rule}, {"support", a->support}, {"lift", to_string(a->lift)}};
}

nlohmann::json decision_to_json(const Decision& d) {
  nlohmann::json j{{"decision", d.kind == Decision::Kind::no_fault ? "no_fault" : "fault_located"}};
  if (d.kind == Decision::Kind::fault_located) j["items"] = items_to_json(d.items);
  return j;
}

}  // namespace

void schema_error(const std::string& what) { throw Error("invalid document: " + what); }

nlohmann::json items_to_json(const std::vector<ItemId>& items) {
  auto arr = nlohmann::json::array();
  for (const auto& i : items) arr.push_back(i.id);
  return arr;
}

std::vector<ItemId> items_from_json(const nlohmann::json& j, ItemKind kind) {
  if (!j.is_array()) schema_error("item list must be an array");
  std::vector<ItemId> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) schema_error("item ids must be non-negative integers");
    out.push_back(make_item(kind, v.get<std::uint32_t>()));
  }
  return out;
}

ItemKind parse_item_kind(std::string_view text) {
  if (text == "line") return ItemKind::line;
  if (text == "event") return ItemKind::event;
  if (text == "block") return ItemKind::block;
  schema_error("unknown item kind '" + std::string(text) + "'");
}

nlohmann::json rule_to_json(const FailureRule& rule) {
  return {{"premise", items_to_json(rule.premise)},
          {"support", rule.stats.support},
          {"normalized_support", to_string(rule.stats.normalized_support)},
          {"confidence", nullable(rational_text(rule.stats.confidence))},
          {"lift", nullable(rational_text(rule.stats.lift))}};
}

nlohmann::json rules_to_json(const std::vector<FailureRule>& rules, ItemKind kind) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rules) arr.push_back(rule_to_json(r));
  return {{"format", kFormat}, {"item_kind", std::string(to_string(kind))}, {"rules", std::move(arr)}};
}

namespace {

std::vector<FailureRule> parse_rules(const nlohmann::json& arr, ItemKind kind) {
  if (!arr.is_array()) schema_error("\"rules\" must be an array");
  std::vector<FailureRule> rules;
  for (const auto& r : arr) {
    FailureRule rule;
    rule.premise = items_from_json(r.at("premise"), kind);
    std::sort(rule.premise.begin(), rule.premise.end());
    rule.stats.support = r.at("support").get<std::size_t>();
    rule.stats.normalized_support = rational_field(r, "normalized_support").value_or(Rational(0));
    rule.stats.confidence = rational_field(r, "confidence");
    rule.stats.lift = rational_field(r, "lift");
    rules.push_back(std::move(rule));
  }
  return rules;
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    schema_error(e.what());
  }
}

}  // namespace

RuleFile rules_from_json(const nlohmann::json& j) {
  return guarded([&] {
    check_format(j);
    RuleFile f;
    f.kind = parse_item_kind(j.value("item_kind", "line"));
    f.rules = parse_rules(j.at("rules"), f.kind);
    return f;
  });
}

nlohmann::json lattice_to_json(const FailureLattice& fl, const std::vector<std::vector<ItemId>>& failing_coverage,
                               ItemKind kind) {
  const auto& items = fl.items();
  auto j = fca::export_json(
      fl.lattice(), fl.context(), [](std::size_t o) { return nlohmann::json(o); },
      [&](std::size_t a) { return nlohmann::json(items.at(a).id); });
  auto clusters = support_clusters(fl);
  auto cluster_of = cluster_index(fl, clusters);
  auto failure = failure_concepts(fl, failing_coverage);
  std::set<std::size_t> failure_set(failure.begin(), failure.end());
  auto& concepts = j["concepts"];
  for (std::size_t c = 0; c < fl.size(); ++c) {
    auto& node = concepts[c];
    node["id"] = c;
    const auto& a = fl.annotation(c);
    node["support"] = a ? nlohmann::json(a->support) : nlohmann::json(nullptr);
    node["lift"] = a ? nlohmann::json(to_string(a->lift)) : nlohmann::json(nullptr);
    node["is_failure_concept"] = failure_set.contains(c);
    node["cluster_id"] = cluster_of[c] ? nlohmann::json(*cluster_of[c]) : nlohmann::json(nullptr);
    node["is_head"] = cluster_of[c] && clusters[*cluster_of[c]].head == c;
  }
  j["format"] = kFormat;
  j["item_kind"] = std::string(to_string(kind));
  j["top"] = fl.lattice().top();
  j["bottom"] = fl.lattice().bottom();
  auto& cl = j["clusters"] = nlohmann::json::array();
  for (const auto& c : clusters) cl.push_back({{"concepts", c.concepts}, {"support", c.support}, {"head", c.head}});
  j["failure_concepts"] = failure;
  auto& rules = j["rules"] = nlohmann::json::array();
  for (const auto& r : fl.rules()) rules.push_back(rule_to_json(r));
  auto& cov = j["failing_coverage"] = nlohmann::json::array();
  for (const auto& c : failing_coverage) cov.push_back(items_to_json(c));
  return j;
}

LatticeFile lattice_file_from_json(const nlohmann::json& j) {
  return guarded([&] {
    check_format(j);
    LatticeFile f;
    f.kind = parse_item_kind(j.value("item_kind", "line"));
    f.rules = parse_rules(j.at("rules"), f.kind);
    for (const auto& c : j.at("failing_coverage")) {
      auto items = items_from_json(c, f.kind);
      std::sort(items.begin(), items.end());
      f.failing_coverage.push_back(std::move(items));
    }
    return f;
  });
}

nlohmann::json presentation_to_json(const Presentation& p) {
  return {{"concept", p.concept_id},
          {"label", items_to_json(p.label)},
          {"fault_context", items_to_json(p.fault_context)},
          {"annotation", annotation_to_json(p.annotation)}};
}

nlohmann::json session_to_json(const ExplorationSession& session,
                               const std::optional<Presentation>& current) {
  nlohmann::json j{{"format", kFormat},
                   {"strategy", std::string(to_string(session.strategy()))},
                   {"frontier", std::vector<std::size_t>(session.frontier().begin(), session.frontier().end())},
                   {"failures_to_explain", session.failures_to_explain()},
                   {"explained", session.explained()},
                   {"explored", session.explored()},
                   {"fault_context", items_to_json(session.fault_context())},
                   {"finished", session.finished()}};
  auto& log = j["log"] = nlohmann::json::array();
  for (const auto& r : session.log()) {
    auto entry = decision_to_json(r.decision);
    entry["concept"] = r.concept_id;
    entry["label"] = items_to_json(r.label);
    entry["added"] = r.added;
    entry["explained"] = r.explained;
    entry["frontier_size"] = r.frontier_size;
    entry["failures_to_explain"] = r.failures_to_explain;
    log.push_back(std::move(entry));
  }
  j["current"] = current ? presentation_to_json(*current) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json report_to_json(const ngram::RankedReport& report, std::string_view mode,
                              const std::optional<ngram::BestWorst>& envelope) {
  nlohmann::json j{{"format", kFormat},
                   {"mode", std::string(mode)},
                   {"failing", report.failing},
                   {"min_support_count", report.min_support_count},
                   {"relevant", report.relevant}};
  if (mode == "line") {
    auto& blocks = j["blocks"] = nlohmann::json::array();
    for (const auto& b : report.blocks) blocks.push_back({{"id", b.block_id}, {"items", b.items}});
  }
  auto& grams = j["grams"] = nlohmann::json::array();
  for (const auto& g : report.grams) {
    grams.push_back({{"gram", g.gram},
                     {"items", g.items},
                     {"support", g.support},
                     {"total", g.total},
                     {"confidence", to_string(g.confidence)}});
  }
  auto& ranking = j["ranking"] = nlohmann::json::array();
  for (const auto& r : report.ranking) ranking.push_back({{"item", r.item}, {"rank", r.rank}, {"gram", r.gram_index}});
  auto& ties = j["tie_groups"] = nlohmann::json::array();
  for (const auto& t : report.tie_groups) {
    ties.push_back({{"confidence", to_string(t.confidence)},
                    {"grams", t.grams},
                    {"new_items", t.new_items},
                    {"first_rank", t.first_rank}});
  }
  j["diagnostic"] = report.diagnostic ? nlohmann::json(*report.diagnostic) : nlohmann::json(nullptr);
  if (envelope) {
    auto& env = j["best_worst"];
    env["best_order"] = envelope->best_order;
    env["worst_order"] = envelope->worst_order;
    env["not_localized"] = envelope->not_localized;
    auto& items = env["items"] = nlohmann::json::array();
    for (const auto& [item, e] : envelope->envelope) items.push_back({{"item", item}, {"best", e.best}, {"worst", e.worst}});
  }
  return j;
}

}  // namespace latloc::json_io
