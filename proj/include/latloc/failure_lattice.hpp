#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "latloc/fca.hpp"
#include "latloc/rules.hpp"

namespace latloc {

struct ConceptAnnotation {
  std::size_t rule = 0;  // index into FailureLattice::rules()
  std::size_t support = 0;
  Rational lift{0};
};

// Concept lattice of the failure context: one object per rule, the rule's
// premise items as its row.
class FailureLattice {
 public:
  using Index = fca::ConceptLattice::Index;

  // Throws latloc::Error on an empty rule list or duplicate premises.
  static FailureLattice build(std::vector<FailureRule> rules, const fca::LatticeOptions& options = {});

  const std::vector<FailureRule>& rules() const noexcept { return rules_; }
  const std::vector<ItemId>& items() const noexcept { return items_; }
  const fca::Context& context() const noexcept { return context_; }
  const fca::ConceptLattice& lattice() const noexcept { return lattice_; }
  std::size_t size() const noexcept { return lattice_.size(); }

  const std::optional<ConceptAnnotation>& annotation(Index c) const { return annotations_.at(c); }
  std::vector<ItemId> intent_items(Index c) const;
  std::vector<ItemId> label_items(Index c) const;

  // Item positions in items(); nullopt when the item is in no premise.
  std::optional<std::size_t> item_index(const ItemId& item) const;

 private:
  std::vector<FailureRule> rules_;
  std::vector<ItemId> items_;
  fca::Context context_;
  fca::ConceptLattice lattice_;
  std::vector<std::optional<ConceptAnnotation>> annotations_;
};

inline FailureLattice build_failure_lattice(std::vector<FailureRule> rules) {
  return FailureLattice::build(std::move(rules));
}

struct SupportCluster {
  std::vector<std::size_t> concepts;  // ascending
  std::size_t support = 0;
  std::size_t head = 0;
};

// Connected components of annotated concepts under "comparable and equal
// support". Head = member with the largest extent (ties: lowest index).
// Ordered by head index.
std::vector<SupportCluster> support_clusters(const FailureLattice& fl);

// cluster id per concept, nullopt for unannotated concepts.
std::vector<std::optional<std::size_t>> cluster_index(const FailureLattice& fl,
                                                      const std::vector<SupportCluster>& clusters);

// Most specific concepts whose intent is contained in at least one failing
// coverage set. Always an antichain; ascending indices.
std::vector<std::size_t> failure_concepts(const FailureLattice& fl,
                                          const std::vector<std::vector<ItemId>>& failing_coverage);

enum class DependencyKind { MSD, SD, LD, ID };

std::string_view to_string(DependencyKind kind);

struct FaultDependency {
  DependencyKind kind = DependencyKind::ID;
  // For SD: true when the first fault's failing set is strictly inside the
  // second's, i.e. the first fault depends on the second.
  std::optional<bool> first_depends_on_second;
};

// An empty failing set (undetected fault) is classified ID.
FaultDependency classify_dependency(const std::set<std::string>& fail1, const std::set<std::string>& fail2);

// Allowed evolutions as the test suite grows: ID->LD, SD->LD, MSD->{SD,LD}, or unchanged.
bool dependency_transition_allowed(DependencyKind from, DependencyKind to);

enum class FrontierStrategy { queue, stack };

std::string_view to_string(FrontierStrategy s);
FrontierStrategy parse_strategy(std::string_view text);

struct Decision {
  enum class Kind { no_fault, fault_located };
  Kind kind = Kind::no_fault;
  std::vector<ItemId> items;  // fault_located only

  static Decision no_fault() { return {}; }
  static Decision fault_located(std::vector<ItemId> items) {
    return {Kind::fault_located, std::move(items)};
  }
};

struct Presentation {
  std::size_t concept_id = 0;
  std::vector<ItemId> label;
  std::vector<ItemId> fault_context;  // before this label was added
  std::optional<ConceptAnnotation> annotation;
};

struct DecisionRecord {
  std::size_t concept_id = 0;
  std::vector<ItemId> label;
  Decision decision;
  std::vector<std::size_t> added;      // pushed onto the frontier
  std::vector<std::size_t> explained;  // newly explained concepts
  std::size_t frontier_size = 0;       // after the decision
  std::size_t failures_to_explain = 0; // after the decision
};

// Failure lattice traversal state. The FailureLattice passed to each call
// must be the one the session was started on.
class ExplorationSession {
 public:
  // Throws latloc::Error when there is no failure concept to explain.
  static ExplorationSession start(const FailureLattice& fl,
                                  const std::vector<std::vector<ItemId>>& failing_coverage,
                                  FrontierStrategy strategy = FrontierStrategy::queue);
  // Explicit initial frontier order; must be a permutation of the failure concepts.
  static ExplorationSession start(const FailureLattice& fl, std::vector<std::size_t> initial_order,
                                  FrontierStrategy strategy);

  FrontierStrategy strategy() const noexcept { return strategy_; }
  const std::deque<std::size_t>& frontier() const noexcept { return frontier_; }
  const std::set<std::size_t>& failures_to_explain() const noexcept { return to_explain_; }
  const std::set<std::size_t>& initial_failure_concepts() const noexcept { return failure_concepts_; }
  const std::set<std::size_t>& explained() const noexcept { return explained_; }
  const std::set<std::size_t>& explored() const noexcept { return explored_; }
  const std::vector<ItemId>& fault_context() const noexcept { return fault_context_; }
  const std::vector<DecisionRecord>& log() const noexcept { return log_; }
  std::optional<std::size_t> presented() const noexcept { return presented_; }

  // Loop condition of the traversal no longer holds.
  bool finished() const noexcept { return to_explain_.empty() || frontier_.empty(); }

  // Pops per strategy. Throws latloc::Error on an empty frontier or while a
  // presented concept still awaits its decision.
  Presentation next_concept(const FailureLattice& fl);

  // Throws latloc::Error if `concept_id` is not the presented one.
  void apply_decision(const FailureLattice& fl, std::size_t concept_id, const Decision& decision);

 private:
  ExplorationSession() = default;

  FrontierStrategy strategy_ = FrontierStrategy::queue;
  std::deque<std::size_t> frontier_;
  std::set<std::size_t> failure_concepts_;
  std::set<std::size_t> to_explain_;
  std::set<std::size_t> explained_;
  std::set<std::size_t> explored_;
  std::vector<ItemId> fault_context_;
  std::vector<DecisionRecord> log_;
  std::optional<std::size_t> presented_;
  std::vector<std::optional<std::size_t>> cluster_of_;
  std::vector<SupportCluster> clusters_;
};

struct ScriptedRun {
  ExplorationSession session;
  std::vector<ItemId> inspected;  // distinct items shown to the oracle, in order
  std::vector<ItemId> located;    // fault items the oracle confirmed
};

// Oracle confirms a fault whenever the presented label holds a fault item.
ScriptedRun run_scripted(const FailureLattice& fl, const std::vector<std::vector<ItemId>>& failing_coverage,
                         const std::set<ItemId>& fault_items,
                         FrontierStrategy strategy = FrontierStrategy::queue);

}  // namespace latloc
