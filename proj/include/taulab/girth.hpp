#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "taulab/cayley_graph.hpp"

namespace taulab {

struct GirthReport {
  /// False only when no reduced word returns to the identity (e.g. K_2).
  bool found = false;
  std::size_t girth = 0;
  /// Label indices of a shortest nonempty label-reduced word equal to the identity.
  std::vector<std::uint8_t> witness;

  std::string witness_string(const CayleyGraph& g) const {
    std::string s;
    for (auto l : witness) s += g.label_names()[l];
    return s;
  }
};

/// Shortest nonempty word in the labels, with no label followed by its
/// inverse label, that evaluates to the identity.
///
/// BFS over directed-edge states (vertex, incoming label); each of the
/// n * k states is expanded at most once, and the search stops at the first
/// arrival back at vertex 0. By vertex transitivity this is the girth.
inline GirthReport girth(const CayleyGraph& g) {
  const std::size_t k = g.k_reg();
  const std::size_t states = g.vertex_count() * k;
  constexpr std::uint32_t kUnseen = CayleyGraph::kNone;
  constexpr std::uint32_t kStart = kUnseen - 1;
  std::vector<std::uint32_t> parent(states, kUnseen);

  auto finish = [&](std::uint32_t last_state, std::uint8_t closing_label) {
    GirthReport r;
    r.found = true;
    r.witness.push_back(closing_label);
    for (std::uint32_t s = last_state; s != kStart; s = parent[s]) r.witness.push_back(static_cast<std::uint8_t>(s % k));
    std::reverse(r.witness.begin(), r.witness.end());
    r.girth = r.witness.size();
    return r;
  };

  std::vector<std::uint32_t> frontier, next;
  for (std::size_t l = 0; l < k; ++l) {
    const std::uint32_t v = g.neighbor(0, l);
    if (v == 0) {
      GirthReport r;
      r.found = true;
      r.girth = 1;
      r.witness = {static_cast<std::uint8_t>(l)};
      return r;
    }
    const auto s = static_cast<std::uint32_t>(v * k + l);
    parent[s] = kStart;
    frontier.push_back(s);
  }
  while (!frontier.empty()) {
    next.clear();
    for (const std::uint32_t s : frontier) {
      const std::uint32_t v = s / static_cast<std::uint32_t>(k);
      const std::size_t back = g.inverse_label(s % k);
      for (std::size_t l = 0; l < k; ++l) {
        if (l == back) continue;
        const std::uint32_t w = g.neighbor(v, l);
        if (w == 0) return finish(s, static_cast<std::uint8_t>(l));
        const auto t = static_cast<std::uint32_t>(w * k + l);
        if (parent[t] != kUnseen) continue;
        parent[t] = s;
        next.push_back(t);
      }
    }
    frontier.swap(next);
  }
  return {};
}

}  // namespace taulab
