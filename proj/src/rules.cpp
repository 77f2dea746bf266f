#include "latloc/rules.hpp"

#include <algorithm>
#include <unordered_set>

#include "latloc/error.hpp"

namespace latloc {

RuleStats rule_stats(const fca::Context& ctx, const Bitset& premise, const Bitset& conclusion) {
  const auto n = static_cast<std::int64_t>(ctx.object_count());
  if (n == 0) throw Error("rule indicators need at least one object");
  const auto with_premise = static_cast<std::int64_t>(ctx.extent(premise).count());
  const auto with_conclusion = static_cast<std::int64_t>(ctx.extent(conclusion).count());
  const auto with_both = static_cast<std::int64_t>(ctx.extent(premise | conclusion).count());

  RuleStats stats;
  stats.support = static_cast<std::size_t>(with_both);
  stats.normalized_support = Rational(with_both, n);
  if (with_premise > 0) {
    stats.confidence = Rational(with_both, with_premise);
    if (with_conclusion > 0) stats.lift = Rational(with_both * n, with_premise * with_conclusion);
  }
  return stats;
}

RuleStats rule_stats(const TraceContext& ctx, const std::vector<ItemId>& premise,
                     const std::vector<ItemId>& conclusion) {
  return rule_stats(ctx.formal(), ctx.attribute_set(premise), ctx.attribute_set(conclusion));
}

RuleStats failure_rule_stats(const TraceContext& ctx, const std::vector<ItemId>& premise) {
  if (ctx.failing_count() == 0) throw Error("the context has no failing execution");
  Bitset p = ctx.attribute_set(premise);
  Bitset fail = ctx.formal().no_attributes();
  fail.set(ctx.fail_attribute());
  return rule_stats(ctx.formal(), p, fail);
}

std::vector<FailureRule> mine_failure_rules(const TraceContext& ctx, const MiningOptions& options) {
  const std::size_t failing = ctx.failing_count();
  if (failing == 0) throw Error("the context has no failing execution");
  if (options.min_support < 1 || options.min_support > failing) {
    throw Error("min support " + std::to_string(options.min_support) + " outside [1, " + std::to_string(failing) +
                "] (number of failing tests)");
  }

  const auto& formal = ctx.formal();
  Bitset item_mask = formal.all_attributes();
  item_mask.reset(ctx.pass_attribute());
  item_mask.reset(ctx.fail_attribute());

  // Closed itemsets of the failing sub-context are exactly the intersections
  // of non-empty sets of failing rows.
  std::vector<Bitset> failing_rows;
  {
    std::unordered_set<Bitset> distinct;
    auto fail_objects = ctx.failing_objects();
    for (auto o = fail_objects.find_first(); o != Bitset::npos; o = fail_objects.find_next(o)) {
      auto row = formal.row(o) & item_mask;
      if (distinct.insert(row).second) failing_rows.push_back(std::move(row));
    }
  }
  std::unordered_set<Bitset> closed;
  for (const auto& row : failing_rows) {
    std::vector<Bitset> fresh;
    fresh.push_back(row);
    for (const auto& s : closed) fresh.push_back(s & row);
    for (auto& f : fresh) closed.insert(std::move(f));
    if (closed.size() > options.max_rules) {
      throw ResourceLimitError("more than " + std::to_string(options.max_rules) + " candidate premises");
    }
  }

  Bitset fail = formal.no_attributes();
  fail.set(ctx.fail_attribute());
  std::vector<FailureRule> rules;
  for (const auto& premise : closed) {
    if (premise.none()) continue;
    auto stats = rule_stats(formal, premise, fail);
    if (stats.support < options.min_support) continue;
    if (!stats.lift || *stats.lift < options.min_lift) continue;
    rules.push_back({ctx.items_of(premise), std::move(stats)});
  }
  std::sort(rules.begin(), rules.end(), [](const FailureRule& a, const FailureRule& b) {
    if (a.stats.support != b.stats.support) return a.stats.support > b.stats.support;
    return a.premise < b.premise;
  });
  return rules;
}

}  // namespace latloc
