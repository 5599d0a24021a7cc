#pragma once

// Random generators and brute-force oracles shared by the unit tests and the
// acceptance binary. Oracles work from raw path enumeration in long double
// and never call the library code they check.

#include <bratteli/bratteli.hpp>

#include <cmath>
#include <map>
#include <random>
#include <vector>

namespace bratteli::support {

struct RandomDiagramShape {
  std::size_t levels = 4;
  std::size_t max_vertices = 4;
  std::size_t extra_edges = 3;
  double min_weight = 0.2;
  double max_weight = 3.0;
  /// Number of vertices on level 0 (0 picks at random).
  std::size_t root_vertices = 0;
};

/// A valid weighted diagram: every vertex emits and receives an edge.
inline BratteliDiagram random_diagram(std::mt19937& rng, const RandomDiagramShape& shape) {
  std::uniform_int_distribution<std::size_t> width(1, shape.max_vertices);
  std::uniform_real_distribution<double> weight(shape.min_weight, shape.max_weight);
  std::uniform_int_distribution<std::size_t> extra(0, shape.extra_edges);
  std::vector<std::size_t> counts{shape.root_vertices ? shape.root_vertices : width(rng)};
  std::vector<std::vector<Edge>> edges(shape.levels);
  for (std::size_t n = 1; n <= shape.levels; ++n) {
    counts.push_back(width(rng));
    const std::size_t below = counts[n - 1];
    const std::size_t above = counts[n];
    std::uniform_int_distribution<std::size_t> pick_below(0, below - 1);
    std::uniform_int_distribution<std::size_t> pick_above(0, above - 1);
    std::vector<bool> reached(above, false);
    auto& level = edges[n - 1];
    for (std::size_t v = 0; v < below; ++v) {
      const std::size_t w = pick_above(rng);
      level.push_back({v, w, weight(rng)});
      reached[w] = true;
    }
    for (std::size_t w = 0; w < above; ++w) {
      if (!reached[w]) level.push_back({pick_below(rng), w, weight(rng)});
    }
    for (std::size_t i = extra(rng); i > 0; --i) {
      level.push_back({pick_below(rng), pick_above(rng), weight(rng)});
    }
    std::shuffle(level.begin(), level.end(), rng);
  }
  return BratteliDiagram::from_counts(counts, std::move(edges));
}

/// Random row-stochastic matrix; about a quarter of the entries are zero
/// when `sparse` is set.
inline Matrix random_stochastic(std::mt19937& rng, Eigen::Index rows, Eigen::Index cols,
                                bool sparse = true) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < rows; ++j) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < cols; ++i) {
      m(j, i) = (sparse && u(rng) < 0.25) ? 0.0 : u(rng);
      total += m(j, i);
    }
    if (total == 0.0) {
      m(j, 0) = 1.0;
      total = 1.0;
    }
    for (Eigen::Index i = 0; i < cols; ++i) m(j, i) /= total;
    // Re-sum so the row is exactly within the library's tolerance.
    double s = 0.0;
    for (Eigen::Index i = 0; i < cols; ++i) s += m(j, i);
    m(j, cols - 1) += 1.0 - s;
    if (m(j, cols - 1) < 0.0) m(j, cols - 1) = 0.0;
  }
  return m;
}

inline Vector random_vector(std::mt19937& rng, Eigen::Index size, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = u(rng);
  return v;
}

inline Matrix random_positive(std::mt19937& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (Eigen::Index j = 0; j < rows; ++j) {
    for (Eigen::Index i = 0; i < cols; ++i) m(j, i) = u(rng);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Path-enumeration oracles
// ---------------------------------------------------------------------------

struct RawPath {
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<std::size_t> edges;
  long double weight = 1.0L;
};

/// Every path from level 0 to level n, by explicit depth-first extension.
inline std::vector<RawPath> all_paths(const BratteliDiagram& d, std::size_t n) {
  std::vector<RawPath> frontier;
  for (std::size_t v = 0; v < d.vertex_count(0); ++v) frontier.push_back({v, v, {}, 1.0L});
  for (std::size_t level = 1; level <= n; ++level) {
    std::vector<RawPath> next;
    for (const RawPath& p : frontier) {
      const auto edges = d.edges(level);
      for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].source != p.end) continue;
        RawPath q = p;
        q.edges.push_back(i);
        q.end = edges[i].range;
        q.weight *= edges[i].weight;
        next.push_back(std::move(q));
      }
    }
    frontier = std::move(next);
  }
  return frontier;
}

/// Z_n(v): total weight of the level-0 paths ending at v.
inline std::vector<long double> partition_oracle(const BratteliDiagram& d, std::size_t n) {
  std::vector<long double> z(d.vertex_count(n), 0.0L);
  for (const RawPath& p : all_paths(d, n)) z[p.end] += p.weight;
  return z;
}

/// E_n(f)(v) = sum over paths y ending at v of rho_n(y) f(y_1 .. y_d), with f
/// given as a map from depth-d edge words to values.
inline std::vector<long double> expectation_oracle(
    const BratteliDiagram& d, std::size_t n, std::size_t depth,
    const std::map<std::vector<std::size_t>, double>& f) {
  const auto z = partition_oracle(d, n);
  std::vector<long double> e(d.vertex_count(n), 0.0L);
  for (const RawPath& p : all_paths(d, n)) {
    const std::vector<std::size_t> key(p.edges.begin(), p.edges.begin() + depth);
    e[p.end] += p.weight / z[p.end] * f.at(key);
  }
  return e;
}

inline std::map<std::vector<std::size_t>, double> random_word_values(
    std::mt19937& rng, const BratteliDiagram& d, std::size_t depth) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::map<std::vector<std::size_t>, double> out;
  for (const RawPath& p : all_paths(d, depth)) out[p.edges] = u(rng);
  return out;
}

inline CylinderFunction cylinder_from_map(const BratteliDiagram& d, std::size_t depth,
                                          const std::map<std::vector<std::size_t>, double>& f) {
  return CylinderFunction::tabulate(
      d, depth, [&](std::span<const std::size_t> edges, std::size_t, std::size_t) {
        return f.at(std::vector<std::size_t>(edges.begin(), edges.end()));
      });
}

inline double binomial(unsigned n, unsigned k) {
  double c = 1.0;
  for (unsigned i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace bratteli::support
