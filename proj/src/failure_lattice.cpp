#include "latloc/failure_lattice.hpp"

#include <algorithm>
#include <numeric>

#include "latloc/error.hpp"

namespace latloc {

FailureLattice FailureLattice::build(std::vector<FailureRule> rules, const fca::LatticeOptions& options) {
  if (rules.empty()) throw Error("no failure rules to build a lattice from");

  std::vector<std::vector<ItemId>> premises;
  premises.reserve(rules.size());
  for (auto& rule : rules) {
    rule.premise = coverage_of(rule.premise);
    if (rule.premise.empty()) throw Error("failure rule with an empty premise");
    premises.push_back(rule.premise);
  }
  std::sort(premises.begin(), premises.end());
  if (std::adjacent_find(premises.begin(), premises.end()) != premises.end()) {
    throw Error("duplicate failure rule premises");
  }

  FailureLattice fl;
  std::vector<ItemId> universe;
  for (const auto& p : premises) universe.insert(universe.end(), p.begin(), p.end());
  fl.items_ = coverage_of(universe);

  std::vector<std::string> objects;
  for (std::size_t r = 0; r < rules.size(); ++r) objects.push_back("r" + std::to_string(r + 1));
  std::vector<std::string> attributes;
  for (const auto& item : fl.items_) attributes.push_back(item.display);
  fl.context_ = fca::Context(std::move(objects), std::move(attributes));
  for (std::size_t r = 0; r < rules.size(); ++r) {
    for (const auto& item : rules[r].premise) fl.context_.set(r, *fl.item_index(item));
  }

  fl.lattice_ = fca::build_lattice(fl.context_, options);
  fl.annotations_.assign(fl.lattice_.size(), std::nullopt);
  for (std::size_t r = 0; r < rules.size(); ++r) {
    if (!rules[r].stats.lift) throw Error("failure rule without a defined lift");
    fl.annotations_[fl.lattice_.object_concept(r)] = ConceptAnnotation{r, rules[r].stats.support, *rules[r].stats.lift};
  }
  fl.rules_ = std::move(rules);
  return fl;
}

std::optional<std::size_t> FailureLattice::item_index(const ItemId& item) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), item);
  if (it == items_.end() || !(*it == item)) return std::nullopt;
  return static_cast<std::size_t>(it - items_.begin());
}

std::vector<ItemId> FailureLattice::intent_items(Index c) const {
  std::vector<ItemId> out;
  for (auto a : members(lattice_.at(c).intent)) out.push_back(items_[a]);
  return out;
}

std::vector<ItemId> FailureLattice::label_items(Index c) const {
  std::vector<ItemId> out;
  for (auto a : lattice_.attribute_label(c)) out.push_back(items_[a]);
  return out;
}

std::vector<SupportCluster> support_clusters(const FailureLattice& fl) {
  const auto& lat = fl.lattice();
  std::vector<std::size_t> annotated;
  for (std::size_t c = 0; c < fl.size(); ++c) {
    if (fl.annotation(c)) annotated.push_back(c);
  }

  std::vector<std::size_t> parent(annotated.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < annotated.size(); ++i) {
    for (std::size_t j = i + 1; j < annotated.size(); ++j) {
      auto a = annotated[i];
      auto b = annotated[j];
      if (fl.annotation(a)->support != fl.annotation(b)->support) continue;
      if (lat.leq(a, b) || lat.leq(b, a)) parent[find(i)] = find(j);
    }
  }

  std::vector<SupportCluster> clusters;
  std::vector<std::optional<std::size_t>> slot(annotated.size());
  for (std::size_t i = 0; i < annotated.size(); ++i) {
    auto root = find(i);
    if (!slot[root]) {
      slot[root] = clusters.size();
      clusters.push_back({{}, fl.annotation(annotated[i])->support, annotated[i]});
    }
    auto& cl = clusters[*slot[root]];
    cl.concepts.push_back(annotated[i]);
    auto size = lat.at(annotated[i]).extent.count();
    auto head_size = lat.at(cl.head).extent.count();
    if (size > head_size) cl.head = annotated[i];
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const SupportCluster& a, const SupportCluster& b) { return a.head < b.head; });
  return clusters;
}

std::vector<std::optional<std::size_t>> cluster_index(const FailureLattice& fl,
                                                      const std::vector<SupportCluster>& clusters) {
  std::vector<std::optional<std::size_t>> out(fl.size());
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    for (auto c : clusters[k].concepts) out[c] = k;
  }
  return out;
}

std::vector<std::size_t> failure_concepts(const FailureLattice& fl,
                                          const std::vector<std::vector<ItemId>>& failing_coverage) {
  const auto& lat = fl.lattice();
  std::vector<Bitset> traces;
  for (const auto& cov : failing_coverage) {
    Bitset t(fl.items().size());
    for (const auto& item : cov) {
      if (auto idx = fl.item_index(item)) t.set(*idx);
    }
    traces.push_back(std::move(t));
  }

  std::vector<std::size_t> qualifying;
  for (std::size_t c = 0; c < fl.size(); ++c) {
    const auto& intent = lat.at(c).intent;
    if (std::any_of(traces.begin(), traces.end(), [&](const Bitset& t) { return intent.is_subset_of(t); })) {
      qualifying.push_back(c);
    }
  }
  std::vector<std::size_t> out;
  for (auto c : qualifying) {
    bool has_lower = std::any_of(qualifying.begin(), qualifying.end(), [&](std::size_t d) { return lat.less(d, c); });
    if (!has_lower) out.push_back(c);
  }
  return out;
}

std::string_view to_string(DependencyKind kind) {
  switch (kind) {
    case DependencyKind::MSD: return "MSD";
    case DependencyKind::SD: return "SD";
    case DependencyKind::LD: return "LD";
    case DependencyKind::ID: return "ID";
  }
  return "?";
}

FaultDependency classify_dependency(const std::set<std::string>& fail1, const std::set<std::string>& fail2) {
  if (fail1.empty() || fail2.empty()) return {DependencyKind::ID, std::nullopt};
  if (fail1 == fail2) return {DependencyKind::MSD, std::nullopt};
  bool one_in_two = std::includes(fail2.begin(), fail2.end(), fail1.begin(), fail1.end());
  bool two_in_one = std::includes(fail1.begin(), fail1.end(), fail2.begin(), fail2.end());
  if (one_in_two || two_in_one) return {DependencyKind::SD, one_in_two};
  bool overlap = std::any_of(fail1.begin(), fail1.end(), [&](const std::string& t) { return fail2.contains(t); });
  return {overlap ? DependencyKind::LD : DependencyKind::ID, std::nullopt};
}

bool dependency_transition_allowed(DependencyKind from, DependencyKind to) {
  if (from == to) return true;
  switch (from) {
    case DependencyKind::ID: return to == DependencyKind::LD;
    case DependencyKind::SD: return to == DependencyKind::LD;
    case DependencyKind::MSD: return to == DependencyKind::SD || to == DependencyKind::LD;
    case DependencyKind::LD: return false;
  }
  return false;
}

std::string_view to_string(FrontierStrategy s) { return s == FrontierStrategy::queue ? "queue" : "stack"; }

FrontierStrategy parse_strategy(std::string_view text) {
  if (text == "queue") return FrontierStrategy::queue;
  if (text == "stack") return FrontierStrategy::stack;
  throw Error("unknown strategy '" + std::string(text) + "' (expected queue or stack)");
}

ExplorationSession ExplorationSession::start(const FailureLattice& fl,
                                             const std::vector<std::vector<ItemId>>& failing_coverage,
                                             FrontierStrategy strategy) {
  return start(fl, failure_concepts(fl, failing_coverage), strategy);
}

ExplorationSession ExplorationSession::start(const FailureLattice& fl, std::vector<std::size_t> initial_order,
                                             FrontierStrategy strategy) {
  if (initial_order.empty()) {
    throw Error("no failure concept to explain (no failing execution, or thresholds too high)");
  }
  ExplorationSession s;
  s.strategy_ = strategy;
  for (auto c : initial_order) {
    if (c >= fl.size()) throw Error("concept " + std::to_string(c) + " is not in the lattice");
    if (!s.failure_concepts_.insert(c).second) throw Error("concept " + std::to_string(c) + " listed twice");
    s.frontier_.push_back(c);
  }
  s.to_explain_ = s.failure_concepts_;
  s.clusters_ = support_clusters(fl);
  s.cluster_of_ = cluster_index(fl, s.clusters_);
  return s;
}

Presentation ExplorationSession::next_concept(const FailureLattice& fl) {
  if (presented_) throw Error("concept " + std::to_string(*presented_) + " still awaits a decision");
  if (frontier_.empty()) throw Error("nothing left to explore");
  std::size_t c = 0;
  if (strategy_ == FrontierStrategy::queue) {
    c = frontier_.front();
    frontier_.pop_front();
  } else {
    c = frontier_.back();
    frontier_.pop_back();
  }
  explored_.insert(c);
  presented_ = c;

  Presentation p{c, fl.label_items(c), fault_context_, fl.annotation(c)};
  for (const auto& item : p.label) {
    if (std::find(fault_context_.begin(), fault_context_.end(), item) == fault_context_.end()) {
      fault_context_.push_back(item);
    }
  }
  return p;
}

void ExplorationSession::apply_decision(const FailureLattice& fl, std::size_t concept_id, const Decision& decision) {
  if (!presented_ || *presented_ != concept_id) {
    throw Error("decision for concept " + std::to_string(concept_id) + " which is not the presented concept");
  }
  presented_.reset();

  DecisionRecord record;
  record.concept_id = concept_id;
  record.label = fl.label_items(concept_id);
  record.decision = decision;

  if (decision.kind == Decision::Kind::no_fault) {
    for (auto up : fl.lattice().upper_neighbours(concept_id)) {
      if (explored_.contains(up) || explained_.contains(up)) continue;
      if (std::find(frontier_.begin(), frontier_.end(), up) != frontier_.end()) continue;
      frontier_.push_back(up);
      record.added.push_back(up);
    }
  } else {
    std::set<std::size_t> now_explained;
    for (auto d : fl.lattice().down_set(concept_id)) now_explained.insert(d);
    if (auto k = cluster_of_.at(concept_id)) {
      now_explained.insert(clusters_[*k].concepts.begin(), clusters_[*k].concepts.end());
    }
    for (auto d : now_explained) {
      if (explained_.insert(d).second) record.explained.push_back(d);
      to_explain_.erase(d);
    }
    std::erase_if(frontier_, [&](std::size_t d) { return now_explained.contains(d); });
  }
  record.frontier_size = frontier_.size();
  record.failures_to_explain = to_explain_.size();
  log_.push_back(std::move(record));
}

ScriptedRun run_scripted(const FailureLattice& fl, const std::vector<std::vector<ItemId>>& failing_coverage,
                         const std::set<ItemId>& fault_items, FrontierStrategy strategy) {
  ScriptedRun run{ExplorationSession::start(fl, failing_coverage, strategy), {}, {}};
  auto& session = run.session;
  while (!session.finished()) {
    auto shown = session.next_concept(fl);
    std::vector<ItemId> hits;
    for (const auto& item : shown.label) {
      if (fault_items.contains(item)) hits.push_back(item);
    }
    if (hits.empty()) {
      session.apply_decision(fl, shown.concept_id, Decision::no_fault());
    } else {
      run.located.insert(run.located.end(), hits.begin(), hits.end());
      session.apply_decision(fl, shown.concept_id, Decision::fault_located(std::move(hits)));
    }
  }
  run.inspected = session.fault_context();
  return run;
}

}  // namespace latloc
