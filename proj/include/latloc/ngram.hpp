#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "latloc/rational.hpp"
#include "latloc/trace_model.hpp"

namespace latloc::ngram {

// A line number, block id or event id depending on the stage.
using Symbol = std::uint32_t;
using Sequence = std::vector<Symbol>;
using Gram = std::vector<Symbol>;

// Execution sequence graph: an edge for each immediate succession seen in
// some input sequence (self-edges included).
struct Xsg {
  std::set<Symbol> vertices;
  std::set<std::pair<Symbol, Symbol>> edges;
  std::set<Symbol> entries;  // first item of each sequence

  std::vector<Symbol> predecessors(Symbol v) const;
  std::vector<Symbol> successors(Symbol v) const;
  std::size_t in_degree(Symbol v) const { return predecessors(v).size(); }
  std::size_t out_degree(Symbol v) const { return successors(v).size(); }
  bool has_edge(Symbol u, Symbol v) const { return edges.contains({u, v}); }
};

Xsg build_xsg(const std::vector<Sequence>& sequences);

struct LinearExecutionBlock {
  std::uint32_t block_id = 0;
  std::vector<Symbol> items;
};

// Splits the XSG at every vertex with in-degree != 1, every vertex whose
// unique predecessor has out-degree != 1, at self-loops and at entries.
// Blocks are the maximal chains left, numbered from 1 by head item. A cycle
// with no such vertex is opened at its smallest item.
std::vector<LinearExecutionBlock> linear_blocks(const Xsg& xsg);

struct BlockTrace {
  std::vector<std::uint32_t> blocks;
  // Items of the last block actually executed (a run may stop mid-block).
  std::size_t tail_length = 0;

  friend bool operator==(const BlockTrace&, const BlockTrace&) = default;
};

// Throws latloc::Error when the sequence enters a block anywhere but its
// head or leaves a block before its end (other than at the trace end).
BlockTrace to_block_trace(const Sequence& sequence, const std::vector<LinearExecutionBlock>& blocks);
Sequence expand_block_trace(const BlockTrace& trace, const std::vector<LinearExecutionBlock>& blocks);

// Distinct contiguous length-n subsequences over all traces.
std::set<Gram> generate_ngrams(const std::vector<Sequence>& traces, std::size_t n);

bool contains_gram(const Sequence& trace, const Gram& gram);

struct NGramRecord {
  Gram gram;                 // block ids (line mode) or events
  std::vector<Symbol> items; // gram expanded to lines; equals gram in event mode
  std::size_t support = 0;   // failing traces containing the gram
  std::size_t total = 0;     // traces containing the gram
  Rational confidence{0};
};

struct RankedItem {
  Symbol item = 0;
  std::size_t rank = 0;        // 1-based
  std::size_t gram_index = 0;  // first gram (in sorted order) holding it
};

struct TieGroup {
  Rational confidence{0};
  std::vector<std::size_t> grams;  // indices into RankedReport::grams
  std::vector<Symbol> new_items;   // items first reported by this group
  std::size_t first_rank = 0;      // rank of new_items.front(), 0 if none
};

struct RankedReport {
  std::vector<NGramRecord> grams;  // sorted by confidence descending
  std::vector<RankedItem> ranking;
  std::vector<TieGroup> tie_groups;
  std::vector<Symbol> relevant;    // relevant blocks / events
  std::vector<LinearExecutionBlock> blocks;  // line mode only
  std::size_t failing = 0;
  std::size_t min_support_count = 0;
  std::optional<std::string> diagnostic;  // set when nothing could be ranked

  std::optional<std::size_t> rank_of(Symbol item) const;
};

struct NGramOptions {
  Rational min_support{9, 10};  // fraction of failing traces
  std::size_t n_max = 3;
};

// Throws latloc::Error on mismatched lengths, no failing trace, n_max == 0
// or min_support outside [0, 1].
RankedReport localize_lines(const std::vector<Sequence>& traces, const std::vector<Verdict>& verdicts,
                            const NGramOptions& options = {});
RankedReport localize_events(const std::vector<Sequence>& sequences, const std::vector<Verdict>& verdicts,
                             const NGramOptions& options = {});

// Sorts records (confidence desc, longer first, then lexicographic) and
// derives the item ranking and tie groups.
RankedReport rank_records(std::vector<NGramRecord> records);

struct RankEnvelope {
  std::size_t best = 0;
  std::size_t worst = 0;

  friend bool operator==(const RankEnvelope&, const RankEnvelope&) = default;
};

struct BestWorst {
  std::map<Symbol, RankEnvelope> envelope;  // every ranked item
  std::vector<Symbol> best_order;           // full ranking, best situation
  std::vector<Symbol> worst_order;          // full ranking, worst situation
  std::vector<Symbol> not_localized;        // ground-truth items absent from the report
};

// Faults contained in each item's handler (an item maps to itself in line mode).
using HandlerFaults = std::map<Symbol, std::set<std::string>>;

// Within each tie group, new items are ordered by the number of new faults
// their handler contains (descending for best, ascending for worst); equal
// counts are shuffled with `seed`.
BestWorst best_worst_ranks(const RankedReport& report, const HandlerFaults& ground_truth, std::uint64_t seed = 0);
BestWorst best_worst_ranks(const RankedReport& report, const std::set<Symbol>& faulty_items,
                           std::uint64_t seed = 0);

}  // namespace latloc::ngram
