#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <nlohmann/json.hpp>

namespace latloc {

using Bitset = boost::dynamic_bitset<std::uint64_t>;

// Indices of the set bits, ascending.
std::vector<std::size_t> members(const Bitset& set);
Bitset make_set(std::size_t size, const std::vector<std::size_t>& indices);

namespace fca {

// Objects x attributes incidence table. Rows and columns are both kept so
// that extent and intent are each a fold of ANDs.
class Context {
 public:
  Context() = default;
  Context(std::vector<std::string> objects, std::vector<std::string> attributes);

  std::size_t object_count() const noexcept { return objects_.size(); }
  std::size_t attribute_count() const noexcept { return attributes_.size(); }

  const std::string& object_name(std::size_t o) const { return objects_.at(o); }
  const std::string& attribute_name(std::size_t a) const { return attributes_.at(a); }
  const std::vector<std::string>& object_names() const noexcept { return objects_; }
  const std::vector<std::string>& attribute_names() const noexcept { return attributes_; }

  // Throw latloc::Error for unknown names.
  std::size_t object_index(std::string_view name) const;
  std::size_t attribute_index(std::string_view name) const;
  Bitset objects_named(const std::vector<std::string>& names) const;
  Bitset attributes_named(const std::vector<std::string>& names) const;

  void set(std::size_t object, std::size_t attribute, bool value = true);
  bool has(std::size_t object, std::size_t attribute) const;

  const Bitset& row(std::size_t object) const { return rows_.at(object); }
  const Bitset& column(std::size_t attribute) const { return columns_.at(attribute); }

  Bitset all_objects() const;
  Bitset all_attributes() const;
  Bitset no_objects() const { return Bitset(object_count()); }
  Bitset no_attributes() const { return Bitset(attribute_count()); }

  // Objects having every attribute of `attributes`; all objects for the empty set.
  Bitset extent(const Bitset& attributes) const;
  // Attributes shared by every object of `objects`; all attributes for the empty set.
  Bitset intent(const Bitset& objects) const;

 private:
  std::vector<std::string> objects_;
  std::vector<std::string> attributes_;
  std::vector<Bitset> rows_;
  std::vector<Bitset> columns_;
};

struct FormalConcept {
  Bitset extent;
  Bitset intent;

  friend bool operator==(const FormalConcept&, const FormalConcept&) = default;
};

FormalConcept concept_of_attributes(const Context& ctx, const Bitset& attributes);
FormalConcept concept_of_objects(const Context& ctx, const Bitset& objects);
bool is_concept(const Context& ctx, const FormalConcept& c);

struct LatticeOptions {
  std::size_t max_concepts = 100'000;
};

// All closed attribute sets in lectic (NextClosure) order. Throws
// ResourceLimitError once more than `max_concepts` have been produced.
std::vector<Bitset> closed_intents(const Context& ctx, std::size_t max_concepts);

class ConceptLattice {
 public:
  using Index = std::size_t;

  // Sorted by (|intent|, intent indices lexicographically); the top is
  // always index 0 and the bottom the last index.
  const std::vector<FormalConcept>& concepts() const noexcept { return concepts_; }
  const FormalConcept& at(Index c) const { return concepts_.at(c); }
  std::size_t size() const noexcept { return concepts_.size(); }
  Index top() const noexcept { return 0; }
  Index bottom() const noexcept { return concepts_.size() - 1; }

  // Covering pairs (child, parent), sorted.
  const std::vector<std::pair<Index, Index>>& edges() const noexcept { return edges_; }
  const std::vector<Index>& upper_neighbours(Index c) const { return upper_.at(c); }
  const std::vector<Index>& lower_neighbours(Index c) const { return lower_.at(c); }

  // Standard-representation labels, as attribute / object indices.
  const std::vector<std::size_t>& attribute_label(Index c) const { return attr_labels_.at(c); }
  const std::vector<std::size_t>& object_label(Index c) const { return obj_labels_.at(c); }
  Index attribute_concept(std::size_t attribute) const { return attr_concept_.at(attribute); }
  Index object_concept(std::size_t object) const { return obj_concept_.at(object); }

  // a <= b iff extent(a) is a subset of extent(b).
  bool leq(Index a, Index b) const;
  bool less(Index a, Index b) const { return a != b && leq(a, b); }
  // Every concept below (resp. above) c, c included, ascending.
  std::vector<Index> down_set(Index c) const;
  std::vector<Index> up_set(Index c) const;

  std::optional<Index> find_intent(const Bitset& intent) const;

 private:
  friend ConceptLattice build_lattice(const Context&, const LatticeOptions&);

  std::vector<FormalConcept> concepts_;
  std::vector<std::pair<Index, Index>> edges_;
  std::vector<std::vector<Index>> upper_;
  std::vector<std::vector<Index>> lower_;
  std::vector<std::vector<std::size_t>> attr_labels_;
  std::vector<std::vector<std::size_t>> obj_labels_;
  std::vector<Index> attr_concept_;
  std::vector<Index> obj_concept_;
};

// Throws latloc::Error for a context without objects or attributes and
// ResourceLimitError past options.max_concepts.
ConceptLattice build_lattice(const Context& ctx, const LatticeOptions& options = {});

using Namer = std::function<nlohmann::json(std::size_t)>;

// Node per concept carrying its labels, edge per cover (child -> parent).
std::string export_dot(const ConceptLattice& lattice, const Context& ctx);

// {"concepts":[{"extent","intent","attr_labels","obj_labels"}],"edges":[[child,parent]]}.
// Default namers emit the context's names.
nlohmann::json export_json(const ConceptLattice& lattice, const Context& ctx,
                           const Namer& object_namer = {}, const Namer& attribute_namer = {});

}  // namespace fca
}  // namespace latloc
