#include "latloc/ngram.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <unordered_map>

#include "latloc/error.hpp"

namespace latloc::ngram {

std::vector<Symbol> Xsg::predecessors(Symbol v) const {
  std::vector<Symbol> out;
  for (const auto& [a, b] : edges) {
    if (b == v) out.push_back(a);
  }
  return out;
}

std::vector<Symbol> Xsg::successors(Symbol v) const {
  std::vector<Symbol> out;
  for (auto it = edges.lower_bound({v, 0}); it != edges.end() && it->first == v; ++it) out.push_back(it->second);
  return out;
}

Xsg build_xsg(const std::vector<Sequence>& sequences) {
  Xsg g;
  for (const auto& seq : sequences) {
    if (!seq.empty()) g.entries.insert(seq.front());
    for (std::size_t i = 0; i < seq.size(); ++i) {
      g.vertices.insert(seq[i]);
      if (i + 1 < seq.size()) g.edges.emplace(seq[i], seq[i + 1]);
    }
  }
  return g;
}

std::vector<LinearExecutionBlock> linear_blocks(const Xsg& xsg) {
  std::map<Symbol, std::vector<Symbol>> preds;
  std::map<Symbol, std::vector<Symbol>> succs;
  for (const auto& [u, v] : xsg.edges) {
    preds[v].push_back(u);
    succs[u].push_back(v);
  }
  auto is_head = [&](Symbol v) {
    if (xsg.entries.contains(v)) return true;
    const auto& p = preds[v];
    if (p.size() != 1) return true;
    return p.front() == v || succs[p.front()].size() != 1;
  };

  std::map<Symbol, bool> assigned;
  std::vector<LinearExecutionBlock> blocks;
  auto grow = [&](Symbol head) {
    LinearExecutionBlock block;
    block.items.push_back(head);
    assigned[head] = true;
    Symbol cur = head;
    while (succs[cur].size() == 1) {
      Symbol next = succs[cur].front();
      if (assigned[next] || is_head(next)) break;
      block.items.push_back(next);
      assigned[next] = true;
      cur = next;
    }
    blocks.push_back(std::move(block));
  };

  for (auto v : xsg.vertices) {
    if (is_head(v)) grow(v);
  }
  // Cycles made only of single-entry vertices have no natural head.
  for (auto v : xsg.vertices) {
    if (!assigned[v]) grow(v);
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const LinearExecutionBlock& a, const LinearExecutionBlock& b) { return a.items.front() < b.items.front(); });
  for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i].block_id = static_cast<std::uint32_t>(i + 1);
  return blocks;
}

BlockTrace to_block_trace(const Sequence& sequence, const std::vector<LinearExecutionBlock>& blocks) {
  std::unordered_map<Symbol, std::size_t> by_head;
  std::unordered_map<Symbol, std::size_t> owner;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    by_head.emplace(blocks[b].items.front(), b);
    for (auto item : blocks[b].items) owner.emplace(item, b);
  }

  BlockTrace out;
  std::size_t i = 0;
  while (i < sequence.size()) {
    auto item = sequence[i];
    auto head = by_head.find(item);
    if (head == by_head.end()) {
      auto own = owner.find(item);
      if (own == owner.end()) throw Error("item " + std::to_string(item) + " belongs to no block");
      throw Error("item " + std::to_string(item) + " at position " + std::to_string(i) + " enters block b" +
                  std::to_string(blocks[own->second].block_id) + " without its head");
    }
    const auto& block = blocks[head->second];
    std::size_t k = 1;
    for (; k < block.items.size() && i + k < sequence.size(); ++k) {
      if (sequence[i + k] != block.items[k]) {
        throw Error("sequence leaves block b" + std::to_string(block.block_id) + " at position " +
                    std::to_string(i + k));
      }
    }
    out.blocks.push_back(block.block_id);
    out.tail_length = k;
    i += k;
  }
  return out;
}

Sequence expand_block_trace(const BlockTrace& trace, const std::vector<LinearExecutionBlock>& blocks) {
  std::unordered_map<std::uint32_t, const LinearExecutionBlock*> by_id;
  for (const auto& b : blocks) by_id.emplace(b.block_id, &b);
  Sequence out;
  for (std::size_t i = 0; i < trace.blocks.size(); ++i) {
    auto it = by_id.find(trace.blocks[i]);
    if (it == by_id.end()) throw Error("unknown block b" + std::to_string(trace.blocks[i]));
    const auto& items = it->second->items;
    std::size_t take = (i + 1 == trace.blocks.size()) ? std::min(trace.tail_length, items.size()) : items.size();
    out.insert(out.end(), items.begin(), items.begin() + static_cast<std::ptrdiff_t>(take));
  }
  return out;
}

std::set<Gram> generate_ngrams(const std::vector<Sequence>& traces, std::size_t n) {
  std::set<Gram> out;
  if (n == 0) return out;
  for (const auto& t : traces) {
    for (std::size_t a = 0; a + n <= t.size(); ++a) out.emplace(t.begin() + a, t.begin() + a + n);
  }
  return out;
}

bool contains_gram(const Sequence& trace, const Gram& gram) {
  if (gram.empty()) return true;
  return std::search(trace.begin(), trace.end(), gram.begin(), gram.end()) != trace.end();
}

std::optional<std::size_t> RankedReport::rank_of(Symbol item) const {
  for (const auto& r : ranking) {
    if (r.item == item) return r.rank;
  }
  return std::nullopt;
}

RankedReport rank_records(std::vector<NGramRecord> records) {
  std::sort(records.begin(), records.end(), [](const NGramRecord& a, const NGramRecord& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.gram.size() != b.gram.size()) return a.gram.size() > b.gram.size();
    return a.gram < b.gram;
  });
  RankedReport report;
  report.grams = std::move(records);
  std::set<Symbol> seen;
  for (std::size_t g = 0; g < report.grams.size(); ++g) {
    const auto& rec = report.grams[g];
    if (report.tie_groups.empty() || report.tie_groups.back().confidence != rec.confidence) {
      report.tie_groups.push_back({rec.confidence, {}, {}, 0});
    }
    auto& group = report.tie_groups.back();
    group.grams.push_back(g);
    for (auto item : rec.items) {
      if (!seen.insert(item).second) continue;
      report.ranking.push_back({item, report.ranking.size() + 1, g});
      if (group.new_items.empty()) group.first_rank = report.ranking.size();
      group.new_items.push_back(item);
    }
  }
  return report;
}

namespace {

enum class Relevance { every_failing, some_failing };

struct GramCounts {
  std::size_t failing = 0;
  std::size_t total = 0;
};

RankedReport localize(const std::vector<Sequence>& traces, const std::vector<Verdict>& verdicts,
                      const NGramOptions& options, Relevance relevance,
                      const std::function<std::vector<Symbol>(const Gram&)>& expand) {
  if (traces.size() != verdicts.size()) throw Error("trace and verdict counts differ");
  if (options.n_max == 0) throw Error("n_max must be at least 1");
  if (options.min_support < 0 || options.min_support > 1) throw Error("min support must lie in [0, 1]");
  const auto failing = static_cast<std::size_t>(std::count(verdicts.begin(), verdicts.end(), Verdict::fail));
  if (failing == 0) throw Error("no failing trace to localize");

  std::map<Gram, GramCounts> counts;
  for (std::size_t t = 0; t < traces.size(); ++t) {
    std::set<Gram> mine;
    for (std::size_t n = 1; n <= options.n_max; ++n) {
      auto grams = generate_ngrams({traces[t]}, n);
      mine.insert(grams.begin(), grams.end());
    }
    for (const auto& g : mine) {
      auto& c = counts[g];
      ++c.total;
      if (verdicts[t] == Verdict::fail) ++c.failing;
    }
  }

  std::set<Symbol> relevant;
  for (const auto& [gram, c] : counts) {
    if (gram.size() != 1) continue;
    bool keep = relevance == Relevance::every_failing ? c.failing == failing : c.failing > 0;
    if (keep) relevant.insert(gram.front());
  }

  const auto threshold = static_cast<std::size_t>(ceil(options.min_support * Rational(static_cast<std::int64_t>(failing))));
  std::vector<NGramRecord> records;
  for (const auto& [gram, c] : counts) {
    if (std::none_of(gram.begin(), gram.end(), [&](Symbol s) { return relevant.contains(s); })) continue;
    if (c.failing < threshold) continue;
    records.push_back({gram, expand(gram), c.failing, c.total,
                       Rational(static_cast<std::int64_t>(c.failing), static_cast<std::int64_t>(c.total))});
  }

  auto report = rank_records(std::move(records));
  report.relevant.assign(relevant.begin(), relevant.end());
  report.failing = failing;
  report.min_support_count = threshold;
  if (relevant.empty()) {
    report.diagnostic = relevance == Relevance::every_failing ? "no block is common to all failing traces"
                                                              : "no event occurs in a failing sequence";
  } else if (report.grams.empty()) {
    report.diagnostic = "no relevant N-gram reaches the minimum support";
  }
  return report;
}

}  // namespace

RankedReport localize_lines(const std::vector<Sequence>& traces, const std::vector<Verdict>& verdicts,
                            const NGramOptions& options) {
  if (traces.empty()) throw Error("no traces");
  auto blocks = linear_blocks(build_xsg(traces));
  std::vector<Sequence> block_traces;
  block_traces.reserve(traces.size());
  for (const auto& t : traces) block_traces.push_back(to_block_trace(t, blocks).blocks);

  std::unordered_map<Symbol, const LinearExecutionBlock*> by_id;
  for (const auto& b : blocks) by_id.emplace(b.block_id, &b);
  auto expand = [&](const Gram& gram) {
    std::vector<Symbol> lines;
    for (auto b : gram) {
      const auto& items = by_id.at(b)->items;
      lines.insert(lines.end(), items.begin(), items.end());
    }
    return lines;
  };
  auto report = localize(block_traces, verdicts, options, Relevance::every_failing, expand);
  report.blocks = std::move(blocks);
  return report;
}

RankedReport localize_events(const std::vector<Sequence>& sequences, const std::vector<Verdict>& verdicts,
                             const NGramOptions& options) {
  if (sequences.empty()) throw Error("no sequences");
  return localize(sequences, verdicts, options, Relevance::some_failing, [](const Gram& g) { return g; });
}

BestWorst best_worst_ranks(const RankedReport& report, const HandlerFaults& ground_truth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BestWorst out;
  std::set<std::string> covered;
  auto faults_of = [&](Symbol item) -> const std::set<std::string>& {
    static const std::set<std::string> none;
    auto it = ground_truth.find(item);
    return it == ground_truth.end() ? none : it->second;
  };

  for (const auto& group : report.tie_groups) {
    if (group.new_items.empty()) continue;
    std::map<Symbol, std::size_t> fresh;
    for (auto item : group.new_items) {
      std::size_t n = 0;
      for (const auto& f : faults_of(item)) n += covered.contains(f) ? 0 : 1;
      fresh[item] = n;
    }
    auto ordered = [&](bool descending) {
      std::vector<Symbol> order = group.new_items;
      std::shuffle(order.begin(), order.end(), rng);
      std::stable_sort(order.begin(), order.end(), [&](Symbol a, Symbol b) {
        return descending ? fresh[a] > fresh[b] : fresh[a] < fresh[b];
      });
      return order;
    };
    auto best = ordered(true);
    auto worst = ordered(false);
    out.best_order.insert(out.best_order.end(), best.begin(), best.end());
    out.worst_order.insert(out.worst_order.end(), worst.begin(), worst.end());

    for (auto item : group.new_items) {
      std::size_t above = 0;
      std::size_t at_or_below = 0;
      for (auto other : group.new_items) {
        if (fresh[other] > fresh[item]) ++above;
        if (fresh[other] <= fresh[item]) ++at_or_below;
      }
      out.envelope[item] = {group.first_rank + above, group.first_rank + at_or_below - 1};
    }
    for (auto item : group.new_items) {
      const auto& f = faults_of(item);
      covered.insert(f.begin(), f.end());
    }
  }

  for (const auto& [item, faults] : ground_truth) {
    if (!faults.empty() && !out.envelope.contains(item)) out.not_localized.push_back(item);
  }
  return out;
}

BestWorst best_worst_ranks(const RankedReport& report, const std::set<Symbol>& faulty_items, std::uint64_t seed) {
  HandlerFaults truth;
  for (auto item : faulty_items) truth[item] = {std::to_string(item)};
  return best_worst_ranks(report, truth, seed);
}

}  // namespace latloc::ngram
