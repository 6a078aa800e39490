#pragma once

// Labeled Cayley multigraphs of finite groups, built by BFS closure of a
// symmetric generating multiset.

#include <array>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "taulab/groups.hpp"
#include "taulab/reduction.hpp"

namespace taulab {

/// A symmetric generating multiset: elements[i]^-1 == elements[inverse_of[i]].
/// Coincident elements stay separate slots.
template <class Element>
struct LabeledGenerators {
  std::vector<Element> elements;
  std::vector<std::uint8_t> inverse_of;
  std::vector<std::string> names;
};

/// k-regular labeled multigraph on the subgroup generated by the labels.
///
/// Vertex 0 is the identity. Slot (u, l) leads to u * s_l, and
/// neighbor(neighbor(u, l), inverse_label(l)) == u.
class CayleyGraph {
 public:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  std::size_t vertex_count() const { return element_rank_.size(); }
  std::size_t k_reg() const { return inverse_of_.size(); }

  std::uint32_t neighbor(std::uint32_t v, std::size_t label) const { return adj_[v * k_reg() + label]; }
  std::span<const std::uint32_t> neighbors(std::uint32_t v) const { return {adj_.data() + v * k_reg(), k_reg()}; }
  std::uint8_t inverse_label(std::size_t label) const { return inverse_of_[label]; }
  const std::vector<std::string>& label_names() const { return names_; }

  const std::string& group_desc() const { return group_desc_; }
  std::uint64_t group_order() const { return group_order_; }
  /// Rank of the group element at each vertex (see FiniteGroup::rank).
  const std::vector<std::uint64_t>& element_ranks() const { return element_rank_; }
  /// Vertex holding the element of the given rank, or kNone outside the closure.
  std::uint32_t vertex_of_rank(std::uint64_t rank) const {
    return rank < vertex_of_rank_.size() ? vertex_of_rank_[rank] : kNone;
  }
  bool surjective() const { return vertex_count() == group_order_; }

  /// One line "u v label" per undirected labeled edge; the slot pair
  /// (u,l) <-> (v,l^-1) is written once, from its lexicographically smaller end.
  std::size_t write_edge_list(std::ostream& out) const {
    std::size_t edges = 0;
    for (std::uint32_t u = 0; u < vertex_count(); ++u) {
      for (std::size_t l = 0; l < k_reg(); ++l) {
        const std::uint32_t v = neighbor(u, l);
        const std::size_t back = inverse_label(l);
        if (u < v || (u == v && l <= back)) {
          out << u << ' ' << v << ' ' << names_[l] << '\n';
          ++edges;
        }
      }
    }
    return edges;
  }

  template <FiniteGroup G>
  friend CayleyGraph build_graph(const G& group, const LabeledGenerators<typename G::Element>& gens,
                                 std::uint64_t vertex_budget);

 private:
  std::string group_desc_;
  std::uint64_t group_order_ = 0;
  std::vector<std::uint8_t> inverse_of_;
  std::vector<std::string> names_;
  std::vector<std::uint32_t> adj_;
  std::vector<std::uint64_t> element_rank_;
  std::vector<std::uint32_t> vertex_of_rank_;
};

/// BFS closure from the identity under right multiplication by the labels.
/// Throws CapacityExceeded when the ambient group order exceeds vertex_budget.
template <FiniteGroup G>
CayleyGraph build_graph(const G& group, const LabeledGenerators<typename G::Element>& gens,
                        std::uint64_t vertex_budget) {
  const std::size_t k = gens.elements.size();
  if (gens.inverse_of.size() != k || gens.names.size() != k)
    throw Error("build_graph: generator, inverse and name lists differ in length");
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = gens.inverse_of[i];
    if (j >= k || gens.inverse_of[j] != i || gens.elements[j] != group.inverse(gens.elements[i]))
      throw Error("build_graph: generating multiset is not closed under inverses");
  }
  if (group.order() > vertex_budget)
    throw CapacityExceeded(group.describe() + " has order " + std::to_string(group.order()) +
                           ", above the vertex budget " + std::to_string(vertex_budget));
  if (group.order() >= CayleyGraph::kNone) throw CapacityExceeded("group order does not fit 32-bit vertex ids");

  CayleyGraph g;
  g.group_desc_ = group.describe();
  g.group_order_ = group.order();
  g.inverse_of_ = gens.inverse_of;
  g.names_ = gens.names;
  g.vertex_of_rank_.assign(group.order(), CayleyGraph::kNone);

  std::vector<typename G::Element> elems;
  const auto id = group.identity();
  elems.push_back(id);
  g.element_rank_.push_back(group.rank(id));
  g.vertex_of_rank_[g.element_rank_[0]] = 0;
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (std::size_t l = 0; l < k; ++l) {
      const auto next = group.multiply(elems[head], gens.elements[l]);
      const std::uint64_t r = group.rank(next);
      std::uint32_t v = g.vertex_of_rank_[r];
      if (v == CayleyGraph::kNone) {
        v = static_cast<std::uint32_t>(elems.size());
        g.vertex_of_rank_[r] = v;
        elems.push_back(next);
        g.element_rank_.push_back(r);
      }
      g.adj_.push_back(v);
    }
  }
  return g;
}

/// The Sanov-style labeling a, A, b, B of a reduced generator multiset.
inline LabeledGenerators<Residues> labeled(const ReducedGenerators& r) {
  LabeledGenerators<Residues> out;
  for (Letter l : kLetters) {
    out.elements.push_back(r.images[index(l)].entries);
    out.inverse_of.push_back(static_cast<std::uint8_t>(index(inverse(l))));
    out.names.emplace_back(1, to_char(l));
  }
  return out;
}

/// Labeling of CRT-reduced generators in a product group.
inline LabeledGenerators<SL2ProductGroup::Element> labeled(const std::array<std::vector<ModpMatrix>, 4>& images) {
  LabeledGenerators<SL2ProductGroup::Element> out;
  for (Letter l : kLetters) {
    SL2ProductGroup::Element e;
    for (const auto& m : images[index(l)]) e.push_back(m.entries);
    out.elements.push_back(std::move(e));
    out.inverse_of.push_back(static_cast<std::uint8_t>(index(inverse(l))));
    out.names.emplace_back(1, to_char(l));
  }
  return out;
}

/// Cayley graph of SL(2,p) for the reduced generators.
inline CayleyGraph build_graph(const ReducedGenerators& r, std::uint64_t vertex_budget) {
  return build_graph(SL2Group(r.p), labeled(r), vertex_budget);
}

namespace diagnostic {

/// Cycle C_m as Cayley(Z/m, {1, -1}), labels "a", "A".
inline CayleyGraph cycle(std::uint32_t m) {
  const CyclicProductGroup g({m});
  return build_graph(g, {{{1 % m}, {(m - 1) % m}}, {1, 0}, {"a", "A"}}, g.order());
}

/// Complete graph K_4 as Cayley(Z/2 x Z/2) with its three involutions.
inline CayleyGraph k4() {
  const CyclicProductGroup g({2, 2});
  return build_graph(g, {{{1, 0}, {0, 1}, {1, 1}}, {0, 1, 2}, {"x", "y", "z"}}, g.order());
}

/// Single edge K_2 as Cayley(Z/2, {1}).
inline CayleyGraph k2() {
  const CyclicProductGroup g({2});
  return build_graph(g, {{{1}}, {0}, {"x"}}, g.order());
}

}  // namespace diagnostic

}  // namespace taulab
