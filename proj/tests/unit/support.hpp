#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "latloc/corpus.hpp"
#include "latloc/fca.hpp"
#include "latloc/ngram.hpp"
#include "latloc/trace_model.hpp"

namespace testing {

using latloc::Bitset;
using latloc::ItemId;
using latloc::ItemKind;

inline ItemId line(std::uint32_t n) { return latloc::make_item(ItemKind::line, n); }

inline std::vector<ItemId> lines(std::initializer_list<std::uint32_t> ns) {
  std::vector<ItemId> out;
  for (auto n : ns) out.push_back(line(n));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string data_path(const std::string& name) { return std::string(LATLOC_TEST_DATA) + "/" + name; }

// Planets and their properties.
inline latloc::fca::Context solar() {
  latloc::fca::Context ctx({"Mercury", "Venus", "Earth", "Mars", "Jupiter", "Saturn", "Uranus", "Neptune"},
                           {"small", "medium", "large", "near sun", "far from sun", "with moons", "without moons"});
  auto row = [&](const char* planet, std::initializer_list<const char*> attrs) {
    for (auto a : attrs) ctx.set(ctx.object_index(planet), ctx.attribute_index(a));
  };
  row("Mercury", {"small", "near sun", "without moons"});
  row("Venus", {"small", "near sun", "without moons"});
  row("Earth", {"small", "near sun", "with moons"});
  row("Mars", {"small", "near sun", "with moons"});
  row("Jupiter", {"large", "far from sun", "with moons"});
  row("Saturn", {"large", "far from sun", "with moons"});
  row("Uranus", {"medium", "far from sun", "with moons"});
  row("Neptune", {"medium", "far from sun", "with moons"});
  return ctx;
}

inline latloc::fca::Context random_context(std::mt19937_64& rng, std::size_t objects, std::size_t attributes,
                                           double density = 0.4) {
  std::vector<std::string> o, a;
  for (std::size_t i = 0; i < objects; ++i) o.push_back("o" + std::to_string(i));
  for (std::size_t i = 0; i < attributes; ++i) a.push_back("a" + std::to_string(i));
  latloc::fca::Context ctx(o, a);
  std::bernoulli_distribution coin(density);
  for (std::size_t i = 0; i < objects; ++i) {
    for (std::size_t j = 0; j < attributes; ++j) {
      if (coin(rng)) ctx.set(i, j);
    }
  }
  return ctx;
}

// Closes every attribute subset directly from the incidence table.
inline std::set<std::vector<std::size_t>> brute_force_intents(const latloc::fca::Context& ctx) {
  const auto n = ctx.attribute_count();
  const auto m = ctx.object_count();
  std::set<std::vector<std::size_t>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<bool> in_extent(m, true);
    for (std::size_t o = 0; o < m; ++o) {
      for (std::size_t a = 0; a < n; ++a) {
        if ((mask >> a & 1) && !ctx.has(o, a)) in_extent[o] = false;
      }
    }
    std::vector<std::size_t> intent;
    for (std::size_t a = 0; a < n; ++a) {
      bool all = true;
      for (std::size_t o = 0; o < m; ++o) {
        if (in_extent[o] && !ctx.has(o, a)) all = false;
      }
      if (all) intent.push_back(a);
    }
    out.insert(intent);
  }
  return out;
}

inline latloc::TestExecution execution(std::string id, bool failing, std::vector<std::uint32_t> trace,
                                       ItemKind kind = ItemKind::line) {
  latloc::TestExecution e;
  e.test_id = std::move(id);
  e.verdict = failing ? latloc::Verdict::fail : latloc::Verdict::pass;
  for (auto n : trace) e.sequence.push_back(latloc::make_item(kind, n));
  return e;
}

// Six executions of mid; the last one fails.
inline std::vector<latloc::ngram::Sequence> mid_traces() {
  return {{4, 4, 5, 10, 11, 12, 14, 15, 24, 6}, {4, 4, 5, 10, 11, 12, 13, 24, 6}, {4, 4, 5, 10, 11, 18, 13, 24, 6},
          {4, 4, 5, 10, 11, 18, 13, 24, 6},     {4, 4, 5, 10, 11, 12, 13, 24, 6}, {4, 4, 5, 10, 11, 12, 14, 15, 24, 6}};
}

inline std::vector<latloc::Verdict> mid_verdicts() {
  using latloc::Verdict;
  return {Verdict::pass, Verdict::pass, Verdict::pass, Verdict::pass, Verdict::pass, Verdict::fail};
}

inline latloc::TraceContext context_of(std::vector<latloc::TestExecution> execs,
                                       latloc::TraceMode mode = latloc::TraceMode::coverage) {
  return latloc::TraceContext::from_executions(std::move(execs), mode);
}

// Block traces rebuilt from scratch: a block starts wherever its head item
// occurs.
inline std::vector<latloc::ngram::Sequence> naive_block_traces(
    const std::vector<latloc::ngram::Sequence>& traces, const std::vector<latloc::ngram::LinearExecutionBlock>& blocks) {
  std::map<latloc::ngram::Symbol, std::uint32_t> head;
  for (const auto& b : blocks) head[b.items.front()] = b.block_id;
  std::vector<latloc::ngram::Sequence> out;
  for (const auto& t : traces) {
    latloc::ngram::Sequence s;
    for (auto item : t) {
      if (auto it = head.find(item); it != head.end()) s.push_back(it->second);
    }
    out.push_back(s);
  }
  return out;
}

inline bool occurs(const latloc::ngram::Sequence& trace, const latloc::ngram::Gram& gram) {
  if (gram.size() > trace.size()) return false;
  for (std::size_t i = 0; i + gram.size() <= trace.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < gram.size(); ++k) match = match && trace[i + k] == gram[k];
    if (match) return true;
  }
  return false;
}

inline std::vector<std::vector<ItemId>> failing_coverage(const latloc::TraceContext& ctx) {
  std::vector<std::vector<ItemId>> out;
  for (const auto& e : ctx.executions()) {
    if (e.verdict == latloc::Verdict::fail) out.push_back(e.coverage);
  }
  return out;
}

}  // namespace testing
