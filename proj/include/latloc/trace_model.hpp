#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "latloc/fca.hpp"

namespace latloc {

enum class ItemKind : std::uint8_t { line, event, block, verdict_pass, verdict_fail };

std::string_view to_string(ItemKind kind);

// Identity is (kind, id); display is presentation only.
struct ItemId {
  ItemKind kind = ItemKind::line;
  std::uint32_t id = 0;
  std::string display;

  friend bool operator==(const ItemId& a, const ItemId& b) {
    return a.kind == b.kind && a.id == b.id;
  }
  friend auto operator<=>(const ItemId& a, const ItemId& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    return a.id <=> b.id;
  }
};

ItemId make_item(ItemKind kind, std::uint32_t id);

enum class Verdict : std::uint8_t { pass, fail };

std::string_view to_string(Verdict v);

struct TestExecution {
  std::string test_id;
  Verdict verdict = Verdict::pass;
  // Ordered, possibly with repeats. Empty when loaded in coverage mode from CSV.
  std::vector<ItemId> sequence;
  // Distinct items sorted by id.
  std::vector<ItemId> coverage;
};

// Distinct items of a sequence, sorted by (kind, id).
std::vector<ItemId> coverage_of(const std::vector<ItemId>& sequence);
std::vector<ItemId> coverage_of(const TestExecution& exec);

enum class TraceMode : std::uint8_t { coverage, sequence };

// Tests (objects) x items (attributes) plus the injected PASS/FAIL columns.
// Immutable once built.
class TraceContext {
 public:
  // Validates and indexes. Throws latloc::Error on empty input, duplicate
  // test ids or empty executions.
  static TraceContext from_executions(std::vector<TestExecution> executions, TraceMode mode);

  TraceMode mode() const noexcept { return mode_; }
  const std::vector<TestExecution>& executions() const noexcept { return executions_; }
  std::size_t object_count() const noexcept { return executions_.size(); }

  // Item attributes sorted by id, followed by verdict-pass then verdict-fail.
  const std::vector<ItemId>& attributes() const noexcept { return attributes_; }
  std::size_t item_count() const noexcept { return attributes_.size() - 2; }
  std::size_t pass_attribute() const noexcept { return attributes_.size() - 2; }
  std::size_t fail_attribute() const noexcept { return attributes_.size() - 1; }

  // Throws latloc::Error when the item is not an attribute of this context.
  std::size_t attribute_index(const ItemId& item) const;
  bool has_attribute(const ItemId& item) const;

  const fca::Context& formal() const noexcept { return formal_; }

  Bitset failing_objects() const;
  Bitset passing_objects() const;
  std::size_t failing_count() const;

  // Attribute set for a list of items (item columns only).
  Bitset attribute_set(const std::vector<ItemId>& items) const;
  std::vector<ItemId> items_of(const Bitset& attrs) const;

 private:
  TraceMode mode_ = TraceMode::coverage;
  std::vector<TestExecution> executions_;
  std::vector<ItemId> attributes_;
  fca::Context formal_;
};

// JSON-lines reader; a line starting with something other than '{' switches
// the whole file to the CSV variant (coverage mode only).
TraceContext load_trace_context(const std::filesystem::path& path, TraceMode mode,
                                ItemKind kind = ItemKind::line);
TraceContext parse_trace_context(std::istream& in, TraceMode mode, ItemKind kind = ItemKind::line);

// One JSON object per execution. Coverage-mode contexts emit coverage as the trace.
void write_trace_context(std::ostream& out, const TraceContext& ctx);

// Unordered comparison of rows and columns (test ids, verdicts, coverage).
bool equivalent(const TraceContext& a, const TraceContext& b);

}  // namespace latloc
