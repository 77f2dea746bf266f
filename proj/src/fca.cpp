#include "latloc/fca.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "latloc/error.hpp"

namespace latloc {

std::vector<std::size_t> members(const Bitset& set) {
  std::vector<std::size_t> out;
  out.reserve(set.count());
  for (auto i = set.find_first(); i != Bitset::npos; i = set.find_next(i)) out.push_back(i);
  return out;
}

Bitset make_set(std::size_t size, const std::vector<std::size_t>& indices) {
  Bitset set(size);
  for (auto i : indices) set.set(i);
  return set;
}

namespace fca {

Context::Context(std::vector<std::string> objects, std::vector<std::string> attributes)
    : objects_(std::move(objects)),
      attributes_(std::move(attributes)),
      rows_(objects_.size(), Bitset(attributes_.size())),
      columns_(attributes_.size(), Bitset(objects_.size())) {}

std::size_t Context::object_index(std::string_view name) const {
  auto it = std::find(objects_.begin(), objects_.end(), name);
  if (it == objects_.end()) throw Error("unknown object '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - objects_.begin());
}

std::size_t Context::attribute_index(std::string_view name) const {
  auto it = std::find(attributes_.begin(), attributes_.end(), name);
  if (it == attributes_.end()) throw Error("unknown attribute '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - attributes_.begin());
}

Bitset Context::objects_named(const std::vector<std::string>& names) const {
  Bitset set = no_objects();
  for (const auto& n : names) set.set(object_index(n));
  return set;
}

Bitset Context::attributes_named(const std::vector<std::string>& names) const {
  Bitset set = no_attributes();
  for (const auto& n : names) set.set(attribute_index(n));
  return set;
}

void Context::set(std::size_t object, std::size_t attribute, bool value) {
  rows_.at(object).set(attribute, value);
  columns_.at(attribute).set(object, value);
}

bool Context::has(std::size_t object, std::size_t attribute) const { return rows_.at(object).test(attribute); }

Bitset Context::all_objects() const { return Bitset(object_count()).set(); }
Bitset Context::all_attributes() const { return Bitset(attribute_count()).set(); }

Bitset Context::extent(const Bitset& attributes) const {
  if (attributes.size() != attribute_count()) throw Error("attribute set does not match the context");
  Bitset out = all_objects();
  for (auto a = attributes.find_first(); a != Bitset::npos; a = attributes.find_next(a)) {
    out &= columns_[a];
    if (out.none()) break;
  }
  return out;
}

Bitset Context::intent(const Bitset& objects) const {
  if (objects.size() != object_count()) throw Error("object set does not match the context");
  Bitset out = all_attributes();
  for (auto o = objects.find_first(); o != Bitset::npos; o = objects.find_next(o)) {
    out &= rows_[o];
    if (out.none()) break;
  }
  return out;
}

FormalConcept concept_of_attributes(const Context& ctx, const Bitset& attributes) {
  auto ext = ctx.extent(attributes);
  auto in = ctx.intent(ext);
  return {std::move(ext), std::move(in)};
}

FormalConcept concept_of_objects(const Context& ctx, const Bitset& objects) {
  auto in = ctx.intent(objects);
  auto ext = ctx.extent(in);
  return {std::move(ext), std::move(in)};
}

bool is_concept(const Context& ctx, const FormalConcept& c) {
  return ctx.intent(c.extent) == c.intent && ctx.extent(c.intent) == c.extent;
}

std::vector<Bitset> closed_intents(const Context& ctx, std::size_t max_concepts) {
  const std::size_t m = ctx.attribute_count();
  auto closure = [&](const Bitset& a) { return ctx.intent(ctx.extent(a)); };

  std::vector<Bitset> out;
  Bitset current = closure(ctx.no_attributes());
  out.push_back(current);
  // Ganter's NextClosure: the lectically next closed set after `current`.
  while (current.count() < m) {
    bool advanced = false;
    Bitset prefix_mask(m);
    for (std::size_t i = m; i-- > 0;) {
      if (current.test(i)) continue;
      prefix_mask.reset();
      for (std::size_t k = 0; k < i; ++k) prefix_mask.set(k);
      Bitset seed = current & prefix_mask;
      seed.set(i);
      Bitset next = closure(seed);
      if ((next & prefix_mask) == (current & prefix_mask)) {
        current = std::move(next);
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
    out.push_back(current);
    if (out.size() > max_concepts) {
      throw ResourceLimitError("concept lattice exceeds " + std::to_string(max_concepts) + " concepts");
    }
  }
  return out;
}

namespace {

bool intent_order(const FormalConcept& a, const FormalConcept& b) {
  auto ca = a.intent.count();
  auto cb = b.intent.count();
  if (ca != cb) return ca < cb;
  auto ma = members(a.intent);
  auto mb = members(b.intent);
  return ma < mb;
}

}  // namespace

ConceptLattice build_lattice(const Context& ctx, const LatticeOptions& options) {
  if (ctx.object_count() == 0 || ctx.attribute_count() == 0) {
    throw Error("cannot build a lattice over a context without objects or attributes");
  }
  ConceptLattice lat;
  for (auto& intent : closed_intents(ctx, options.max_concepts)) {
    auto extent = ctx.extent(intent);
    lat.concepts_.push_back({std::move(extent), std::move(intent)});
  }
  std::sort(lat.concepts_.begin(), lat.concepts_.end(), intent_order);

  const std::size_t n = lat.concepts_.size();
  std::unordered_map<Bitset, std::size_t> by_intent;
  by_intent.reserve(n);
  for (std::size_t c = 0; c < n; ++c) by_intent.emplace(lat.concepts_[c].intent, c);

  // Upper covers after Lindig: adding object g to the extent yields a cover
  // exactly when every object the resulting concept adds generates it too.
  lat.upper_.assign(n, {});
  lat.lower_.assign(n, {});
  for (std::size_t c = 0; c < n; ++c) {
    const auto& ext = lat.concepts_[c].extent;
    const auto& in = lat.concepts_[c].intent;
    std::unordered_map<Bitset, std::size_t> generated;
    for (std::size_t g = 0; g < ctx.object_count(); ++g) {
      if (ext.test(g)) continue;
      Bitset up_intent = in & ctx.row(g);
      ++generated[up_intent];
    }
    for (const auto& [up_intent, count] : generated) {
      std::size_t parent = by_intent.at(up_intent);
      const auto& up_ext = lat.concepts_[parent].extent;
      if ((up_ext - ext).count() == count) {
        lat.upper_[c].push_back(parent);
        lat.lower_[parent].push_back(c);
      }
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::sort(lat.upper_[c].begin(), lat.upper_[c].end());
    std::sort(lat.lower_[c].begin(), lat.lower_[c].end());
    for (auto p : lat.upper_[c]) lat.edges_.emplace_back(c, p);
  }

  lat.attr_labels_.assign(n, {});
  lat.obj_labels_.assign(n, {});
  lat.attr_concept_.resize(ctx.attribute_count());
  lat.obj_concept_.resize(ctx.object_count());
  for (std::size_t a = 0; a < ctx.attribute_count(); ++a) {
    auto c = by_intent.at(concept_of_attributes(ctx, make_set(ctx.attribute_count(), {a})).intent);
    lat.attr_concept_[a] = c;
    lat.attr_labels_[c].push_back(a);
  }
  for (std::size_t o = 0; o < ctx.object_count(); ++o) {
    auto c = by_intent.at(ctx.row(o));
    lat.obj_concept_[o] = c;
    lat.obj_labels_[c].push_back(o);
  }
  return lat;
}

bool ConceptLattice::leq(Index a, Index b) const {
  return concepts_.at(a).extent.is_subset_of(concepts_.at(b).extent);
}

std::vector<ConceptLattice::Index> ConceptLattice::down_set(Index c) const {
  std::vector<Index> out;
  for (Index d = 0; d < concepts_.size(); ++d) {
    if (leq(d, c)) out.push_back(d);
  }
  return out;
}

std::vector<ConceptLattice::Index> ConceptLattice::up_set(Index c) const {
  std::vector<Index> out;
  for (Index d = 0; d < concepts_.size(); ++d) {
    if (leq(c, d)) out.push_back(d);
  }
  return out;
}

std::optional<ConceptLattice::Index> ConceptLattice::find_intent(const Bitset& intent) const {
  for (Index c = 0; c < concepts_.size(); ++c) {
    if (concepts_[c].intent == intent) return c;
  }
  return std::nullopt;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out;
}

std::string joined(const std::vector<std::size_t>& idx, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ", ";
    out += names[idx[i]];
  }
  return out;
}

}  // namespace

std::string export_dot(const ConceptLattice& lattice, const Context& ctx) {
  std::ostringstream out;
  out << "digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n";
  for (std::size_t c = 0; c < lattice.size(); ++c) {
    auto attrs = joined(lattice.attribute_label(c), ctx.attribute_names());
    auto objs = joined(lattice.object_label(c), ctx.object_names());
    out << "  c" << c << " [label=\"c" << c;
    if (!attrs.empty()) out << "\\n[" << dot_escape(attrs) << "]";
    if (!objs.empty()) out << "\\n{" << dot_escape(objs) << "}";
    out << "\"];\n";
  }
  for (const auto& [child, parent] : lattice.edges()) out << "  c" << child << " -> c" << parent << ";\n";
  out << "}\n";
  return out.str();
}

nlohmann::json export_json(const ConceptLattice& lattice, const Context& ctx, const Namer& object_namer,
                           const Namer& attribute_namer) {
  Namer obj = object_namer ? object_namer : Namer([&](std::size_t o) { return nlohmann::json(ctx.object_name(o)); });
  Namer attr = attribute_namer ? attribute_namer
                               : Namer([&](std::size_t a) { return nlohmann::json(ctx.attribute_name(a)); });
  auto list = [](const std::vector<std::size_t>& idx, const Namer& name) {
    auto arr = nlohmann::json::array();
    for (auto i : idx) arr.push_back(name(i));
    return arr;
  };
  nlohmann::json j;
  auto& concepts = j["concepts"] = nlohmann::json::array();
  for (std::size_t c = 0; c < lattice.size(); ++c) {
    const auto& fc = lattice.at(c);
    concepts.push_back({{"extent", list(members(fc.extent), obj)},
                        {"intent", list(members(fc.intent), attr)},
                        {"attr_labels", list(lattice.attribute_label(c), attr)},
                        {"obj_labels", list(lattice.object_label(c), obj)}});
  }
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const auto& [child, parent] : lattice.edges()) edges.push_back({child, parent});
  return j;
}

}  // namespace fca
}  // namespace latloc
