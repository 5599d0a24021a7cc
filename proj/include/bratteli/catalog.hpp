#pragma once

// Ready-made diagrams used throughout the tests, the CLI fixtures and the
// acceptance suite.

#include <bratteli/diagram.hpp>

#include <functional>
#include <vector>

namespace bratteli::catalog {

/// Pascal's triangle truncated at `levels`: V(n) = {0..n}; each k of level
/// n-1 emits k -> k (increment 0) then k -> k+1 (increment 1).
inline BratteliDiagram pascal(std::size_t levels) {
  std::vector<std::size_t> counts;
  std::vector<std::vector<Edge>> edges(levels);
  for (std::size_t n = 0; n <= levels; ++n) counts.push_back(n + 1);
  for (std::size_t n = 1; n <= levels; ++n) {
    for (std::size_t k = 0; k < n; ++k) {
      edges[n - 1].push_back({k, k, 1.0});
      edges[n - 1].push_back({k, k + 1, 1.0});
    }
  }
  return BratteliDiagram::from_counts(counts, std::move(edges));
}

/// The same vertex set and edge list (with weights) repeated on every level.
inline BratteliDiagram stationary(std::size_t vertices, const std::vector<Edge>& edges,
                                  std::size_t levels) {
  std::vector<std::size_t> counts(levels + 1, vertices);
  return BratteliDiagram::from_counts(
      counts, std::vector<std::vector<Edge>>(levels, edges));
}

/// Stationary diagram whose level matrix is A (A(w, v) = weight of the single
/// edge v -> w); zero entries get no edge.
inline BratteliDiagram stationary_from_matrix(
    const std::vector<std::vector<double>>& a, std::size_t levels) {
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < a.size(); ++v) {
    for (std::size_t w = 0; w < a.size(); ++w) {
      if (a[w][v] > 0.0) edges.push_back({v, w, a[w][v]});
    }
  }
  return stationary(a.size(), edges, levels);
}

/// Two vertices per level with A_n = [[p_n, r_n], [r_n, p_n]]. Each block is
/// one edge carrying the full multiplicity as its weight, which gives the
/// same A_n as p_n (resp. r_n) parallel unit edges.
inline BratteliDiagram fack_marechal(const std::function<double(std::size_t)>& p,
                                     const std::function<double(std::size_t)>& r,
                                     std::size_t levels) {
  std::vector<std::size_t> counts(levels + 1, 2);
  std::vector<std::vector<Edge>> edges(levels);
  for (std::size_t n = 1; n <= levels; ++n) {
    const double loop = p(n);
    const double cross = r(n);
    edges[n - 1] = {{0, 0, loop}, {0, 1, cross}, {1, 1, loop}, {1, 0, cross}};
  }
  return BratteliDiagram::from_counts(counts, std::move(edges));
}

/// Fack-Marechal with literal multiplicities: p_n parallel unit edges v -> v
/// and r_n unit edges v -> w crosswise.
inline BratteliDiagram fack_marechal_multigraph(const std::vector<std::size_t>& p,
                                                const std::vector<std::size_t>& r) {
  const std::size_t levels = p.size();
  std::vector<std::size_t> counts(levels + 1, 2);
  std::vector<std::vector<Edge>> edges(levels);
  for (std::size_t n = 1; n <= levels; ++n) {
    for (std::size_t v = 0; v < 2; ++v) {
      for (std::size_t i = 0; i < p[n - 1]; ++i) edges[n - 1].push_back({v, v, 1.0});
      for (std::size_t i = 0; i < r[n - 1]; ++i) edges[n - 1].push_back({v, 1 - v, 1.0});
    }
  }
  return BratteliDiagram::from_counts(counts, std::move(edges));
}

/// One vertex per level with a loop per weight.
inline BratteliDiagram single_vertex(const std::vector<double>& loop_weights,
                                     std::size_t levels) {
  std::vector<Edge> edges;
  for (double w : loop_weights) edges.push_back({0, 0, w});
  return stationary(1, edges, levels);
}

}  // namespace bratteli::catalog
