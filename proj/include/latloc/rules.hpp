#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "latloc/fca.hpp"
#include "latloc/rational.hpp"
#include "latloc/trace_model.hpp"

namespace latloc {

// Association-rule indicators. Confidence is absent when no object has the
// premise; lift is absent when additionally no object has the conclusion.
struct RuleStats {
  std::size_t support = 0;
  Rational normalized_support{0};
  std::optional<Rational> confidence;
  std::optional<Rational> lift;

  friend bool operator==(const RuleStats&, const RuleStats&) = default;
};

RuleStats rule_stats(const fca::Context& ctx, const Bitset& premise, const Bitset& conclusion);
// Conclusion items may include verdict items (kind verdict_pass / verdict_fail).
RuleStats rule_stats(const TraceContext& ctx, const std::vector<ItemId>& premise,
                     const std::vector<ItemId>& conclusion);

// Conclusion fixed to FAIL. Throws latloc::Error when the context has no
// failing execution.
RuleStats failure_rule_stats(const TraceContext& ctx, const std::vector<ItemId>& premise);

struct FailureRule {
  std::vector<ItemId> premise;  // sorted, no verdict items
  RuleStats stats;
};

struct MiningOptions {
  std::size_t min_support = 1;
  Rational min_lift{1};
  std::size_t max_rules = 100'000;
};

// Premises closed w.r.t. the failing executions, support >= min_support and
// lift >= min_lift; ordered by support descending, then premise ascending.
// Throws latloc::Error when min_support is outside [1, failing count] or there
// is no failing execution, ResourceLimitError past max_rules candidates.
std::vector<FailureRule> mine_failure_rules(const TraceContext& ctx, const MiningOptions& options);

}  // namespace latloc
