#include "latloc/trace_model.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "latloc/error.hpp"

namespace latloc {

std::string_view to_string(ItemKind kind) {
  switch (kind) {
    case ItemKind::line: return "line";
    case ItemKind::event: return "event";
    case ItemKind::block: return "block";
    case ItemKind::verdict_pass: return "verdict-pass";
    case ItemKind::verdict_fail: return "verdict-fail";
  }
  return "?";
}

std::string_view to_string(Verdict v) { return v == Verdict::pass ? "pass" : "fail"; }

ItemId make_item(ItemKind kind, std::uint32_t id) {
  switch (kind) {
    case ItemKind::verdict_pass: return {kind, 0, "PASS"};
    case ItemKind::verdict_fail: return {kind, 0, "FAIL"};
    case ItemKind::event: return {kind, id, "e" + std::to_string(id)};
    case ItemKind::block: return {kind, id, "b" + std::to_string(id)};
    case ItemKind::line: break;
  }
  return {kind, id, std::to_string(id)};
}

std::vector<ItemId> coverage_of(const std::vector<ItemId>& sequence) {
  std::vector<ItemId> out = sequence;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ItemId> coverage_of(const TestExecution& exec) {
  return exec.sequence.empty() ? coverage_of(exec.coverage) : coverage_of(exec.sequence);
}

TraceContext TraceContext::from_executions(std::vector<TestExecution> executions, TraceMode mode) {
  if (executions.empty()) throw Error("no executions");

  std::unordered_set<std::string> seen;
  std::set<ItemId> universe;
  for (auto& exec : executions) {
    if (!seen.insert(exec.test_id).second) throw Error("duplicate test id '" + exec.test_id + "'");
    for (const auto& item : exec.sequence.empty() ? exec.coverage : exec.sequence) {
      if (item.kind == ItemKind::verdict_pass || item.kind == ItemKind::verdict_fail) {
        throw Error("test '" + exec.test_id + "' lists a verdict item in its trace");
      }
    }
    exec.coverage = coverage_of(exec);
    if (exec.coverage.empty()) throw Error("test '" + exec.test_id + "' has an empty trace");
    if (mode == TraceMode::coverage) exec.sequence.clear();
    universe.insert(exec.coverage.begin(), exec.coverage.end());
  }

  TraceContext ctx;
  ctx.mode_ = mode;
  ctx.attributes_.assign(universe.begin(), universe.end());
  ctx.attributes_.push_back(make_item(ItemKind::verdict_pass, 0));
  ctx.attributes_.push_back(make_item(ItemKind::verdict_fail, 0));

  std::vector<std::string> object_names;
  object_names.reserve(executions.size());
  for (const auto& exec : executions) object_names.push_back(exec.test_id);
  std::vector<std::string> attribute_names;
  attribute_names.reserve(ctx.attributes_.size());
  for (const auto& item : ctx.attributes_) attribute_names.push_back(item.display);

  ctx.formal_ = fca::Context(std::move(object_names), std::move(attribute_names));
  for (std::size_t o = 0; o < executions.size(); ++o) {
    for (const auto& item : executions[o].coverage) ctx.formal_.set(o, ctx.attribute_index(item));
    ctx.formal_.set(o, executions[o].verdict == Verdict::pass ? ctx.pass_attribute() : ctx.fail_attribute());
  }
  ctx.executions_ = std::move(executions);
  return ctx;
}

std::size_t TraceContext::attribute_index(const ItemId& item) const {
  if (item.kind == ItemKind::verdict_pass) return pass_attribute();
  if (item.kind == ItemKind::verdict_fail) return fail_attribute();
  auto end = attributes_.end() - 2;
  auto it = std::lower_bound(attributes_.begin(), end, item);
  if (it == end || !(*it == item)) {
    throw Error("unknown item " + std::string(to_string(item.kind)) + " " + std::to_string(item.id));
  }
  return static_cast<std::size_t>(it - attributes_.begin());
}

bool TraceContext::has_attribute(const ItemId& item) const {
  if (item.kind == ItemKind::verdict_pass || item.kind == ItemKind::verdict_fail) return true;
  return std::binary_search(attributes_.begin(), attributes_.end() - 2, item);
}

Bitset TraceContext::failing_objects() const { return formal_.column(fail_attribute()); }
Bitset TraceContext::passing_objects() const { return formal_.column(pass_attribute()); }
std::size_t TraceContext::failing_count() const { return failing_objects().count(); }

Bitset TraceContext::attribute_set(const std::vector<ItemId>& items) const {
  Bitset set = formal_.no_attributes();
  for (const auto& item : items) set.set(attribute_index(item));
  return set;
}

std::vector<ItemId> TraceContext::items_of(const Bitset& attrs) const {
  std::vector<ItemId> out;
  for (auto a : members(attrs)) out.push_back(attributes_.at(a));
  return out;
}

namespace {

Verdict parse_verdict(std::string_view token, std::size_t line) {
  if (token == "pass" || token == "PASS") return Verdict::pass;
  if (token == "fail" || token == "FAIL") return Verdict::fail;
  throw ParseError(line, "unknown verdict '" + std::string(token) + "'");
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::uint32_t parse_item_id(const std::string& token, std::size_t line) {
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos || token.size() > 9) {
    throw ParseError(line, "item '" + token + "' is not a non-negative integer");
  }
  return static_cast<std::uint32_t>(std::stoul(token));
}

TestExecution parse_json_record(const std::string& text, std::size_t line, ItemKind kind) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line, std::string("malformed record: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(line, "malformed record: expected an object");
  if (!j.contains("test") || !j["test"].is_string()) throw ParseError(line, "malformed record: missing \"test\"");
  if (!j.contains("verdict") || !j["verdict"].is_string()) {
    throw ParseError(line, "malformed record: missing \"verdict\"");
  }
  if (!j.contains("trace") || !j["trace"].is_array()) throw ParseError(line, "malformed record: missing \"trace\"");

  TestExecution exec;
  exec.test_id = j["test"].get<std::string>();
  exec.verdict = parse_verdict(j["verdict"].get<std::string>(), line);
  for (const auto& v : j["trace"]) {
    if (!v.is_number_unsigned()) throw ParseError(line, "malformed record: trace items must be non-negative integers");
    auto id = v.get<std::uint64_t>();
    if (id > 0xffffffffu) throw ParseError(line, "item id out of range");
    exec.sequence.push_back(make_item(kind, static_cast<std::uint32_t>(id)));
  }
  if (exec.sequence.empty()) throw ParseError(line, "empty trace for test '" + exec.test_id + "'");
  return exec;
}

TestExecution parse_csv_record(const std::string& text, std::size_t line, ItemKind kind) {
  std::vector<std::string> fields;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (fields.size() < 3) throw ParseError(line, "malformed record: expected test,verdict,items...");
  TestExecution exec;
  exec.test_id = fields[0];
  if (exec.test_id.empty()) throw ParseError(line, "malformed record: empty test id");
  exec.verdict = parse_verdict(fields[1], line);
  for (std::size_t i = 2; i < fields.size(); ++i) {
    if (fields[i].empty()) continue;
    exec.coverage.push_back(make_item(kind, parse_item_id(fields[i], line)));
  }
  if (exec.coverage.empty()) throw ParseError(line, "empty trace for test '" + exec.test_id + "'");
  return exec;
}

}  // namespace

TraceContext parse_trace_context(std::istream& in, TraceMode mode, ItemKind kind) {
  std::vector<TestExecution> executions;
  std::unordered_set<std::string> ids;
  std::optional<bool> csv;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto text = trim(raw);
    if (text.empty()) continue;
    if (!csv) {
      csv = text.front() != '{';
      if (*csv && mode == TraceMode::sequence) {
        throw ParseError(line, "the CSV trace format carries no order; use coverage mode");
      }
    }
    if (*csv && text.front() == '#') continue;
    auto exec = *csv ? parse_csv_record(text, line, kind) : parse_json_record(text, line, kind);
    if (!ids.insert(exec.test_id).second) throw ParseError(line, "duplicate test id '" + exec.test_id + "'");
    executions.push_back(std::move(exec));
  }
  if (executions.empty()) throw Error("no executions");
  return TraceContext::from_executions(std::move(executions), mode);
}

TraceContext load_trace_context(const std::filesystem::path& path, TraceMode mode, ItemKind kind) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trace file '" + path.string() + "'");
  return parse_trace_context(in, mode, kind);
}

void write_trace_context(std::ostream& out, const TraceContext& ctx) {
  for (const auto& exec : ctx.executions()) {
    nlohmann::json j;
    j["test"] = exec.test_id;
    j["verdict"] = std::string(to_string(exec.verdict));
    auto& trace = j["trace"] = nlohmann::json::array();
    for (const auto& item : exec.sequence.empty() ? exec.coverage : exec.sequence) trace.push_back(item.id);
    out << j.dump() << '\n';
  }
}

bool equivalent(const TraceContext& a, const TraceContext& b) {
  auto rows = [](const TraceContext& ctx) {
    std::map<std::string, std::pair<Verdict, std::vector<ItemId>>> out;
    for (const auto& exec : ctx.executions()) out[exec.test_id] = {exec.verdict, exec.coverage};
    return out;
  };
  if (a.attributes() != b.attributes()) return false;
  return rows(a) == rows(b);
}

}  // namespace latloc
