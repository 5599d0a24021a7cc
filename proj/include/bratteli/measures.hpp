#pragma once

// States of the dimension group of (A_n) and the Markov measures they define.
//
// A state is a positive sequence (rho_n) with
//   rho_{n-1}(v) = sum_{s(e)=v} Phi(e) rho_n(r(e)),   sum_{V(0)} rho_0 = 1,
// and its Markov measure has transition probabilities
//   p_n(e) = Phi(e) rho_n(r(e)) / rho_{n-1}(s(e)).

#include <bratteli/cocycle.hpp>
#include <bratteli/diagram.hpp>
#include <bratteli/errors.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bratteli {

struct StateSequence {
  /// rho[n] for n = 0 .. truncation.
  std::vector<LogScaledVector> rho;
  std::size_t truncation = 0;
  /// Max relative disagreement of the level masses against the probe solve.
  double convergence_estimate = 0.0;
  bool converged = true;

  double value(std::size_t n, std::size_t v) const {
    return rho.at(n).value(static_cast<Eigen::Index>(v));
  }

  /// Wraps explicit positive level vectors rho_0 .. rho_N.
  static StateSequence from_levels(const std::vector<Vector>& levels) {
    if (levels.empty()) throw InvalidArgument("state needs at least level 0");
    StateSequence s;
    for (const Vector& level : levels) {
      for (Eigen::Index i = 0; i < level.size(); ++i) {
        if (!(level(i) > 0.0)) throw InvalidArgument("state entries must be positive");
      }
      s.rho.push_back(LogScaledVector::normalized(level, 0.0));
    }
    s.truncation = levels.size() - 1;
    return s;
  }
};

/// Seed for the backward recursion: the (positive) vector placed on the
/// given level. Defaults to the uniform vector.
using StateSeed = std::function<Vector(std::size_t level, std::size_t width)>;

struct StateOptions {
  std::size_t seed_depth = 0;
  std::size_t probe_delta = 5;
  double tol = 1e-8;
  /// Level masses of levels 0 .. compare_depth enter the convergence estimate.
  std::size_t compare_depth = 0;
  StateSeed seed;
};

namespace detail {

inline Vector uniform_seed(std::size_t, std::size_t width) {
  return Vector::Ones(static_cast<Eigen::Index>(width));
}

inline std::vector<LogScaledVector> backward_state(const WeightedSystem& s,
                                                   std::size_t depth,
                                                   const StateSeed& seed) {
  const BratteliDiagram& d = s.diagram();
  Vector top = seed(depth, d.vertex_count(depth));
  if (top.size() != static_cast<Eigen::Index>(d.vertex_count(depth))) {
    throw InvalidArgument("seed vector has the wrong size for level " +
                          std::to_string(depth));
  }
  for (Eigen::Index i = 0; i < top.size(); ++i) {
    if (!(top(i) > 0.0)) throw InvalidArgument("seed vector must be strictly positive");
  }
  std::vector<LogScaledVector> levels(depth + 1);
  levels[depth] = LogScaledVector::normalized(top, 0.0);
  for (std::size_t n = depth; n >= 1; --n) {
    const Matrix& a = s.transition_matrix(n);
    const Vector& next = levels[n].mantissa;
    Vector raw(a.cols());
    for (Eigen::Index v = 0; v < a.cols(); ++v) {
      double acc = 0.0;
      for (Eigen::Index w = 0; w < a.rows(); ++w) acc += a(w, v) * next(w);
      raw(v) = acc;
    }
    levels[n - 1] = LogScaledVector::normalized(raw, levels[n].log_scale);
  }
  const double log_total = std::log(levels[0].mantissa.sum()) + levels[0].log_scale;
  for (auto& level : levels) level.log_scale -= log_total;
  return levels;
}

/// rho_n(v) u_n(v): the mass of the paths through v at level n.
inline double level_mass(const WeightedSystem& s, const LogScaledVector& rho,
                         std::size_t n, Eigen::Index v) {
  return std::exp(rho.log_value(v) + s.path_sums(n).log_value(v));
}

inline void check_state_shape(const WeightedSystem& s, const StateSequence& state) {
  if (state.rho.size() != state.truncation + 1 || state.truncation > s.level_count()) {
    throw InvalidArgument("state truncation does not fit the system");
  }
  for (std::size_t n = 0; n <= state.truncation; ++n) {
    const auto& level = state.rho[n];
    if (level.size() != static_cast<Eigen::Index>(s.diagram().vertex_count(n))) {
      throw InvalidArgument("state level " + std::to_string(n) + " has the wrong size");
    }
    for (Eigen::Index v = 0; v < level.size(); ++v) {
      if (!(level.mantissa(v) > 0.0)) {
        throw InvalidArgument("state entries must be strictly positive");
      }
    }
  }
}

}  // namespace detail

/// Approximates a state by backward recursion from a seed at level N, then
/// repeats from level N + probe_delta and compares the level masses of
/// levels 0 .. compare_depth. A disagreement above tol is reported in the
/// result (converged = false), not thrown.
inline StateSequence solve_state(const WeightedSystem& s, const StateOptions& options) {
  const std::size_t depth = options.seed_depth;
  const std::size_t probe = depth + options.probe_delta;
  if (probe > s.level_count()) {
    throw InvalidArgument("seed depth " + std::to_string(depth) + " + probe delta " +
                          std::to_string(options.probe_delta) + " exceeds diagram depth " +
                          std::to_string(s.level_count()));
  }
  const StateSeed seed = options.seed ? options.seed : StateSeed(detail::uniform_seed);
  StateSequence out;
  out.rho = detail::backward_state(s, depth, seed);
  out.truncation = depth;

  const auto probed = detail::backward_state(s, probe, seed);
  const std::size_t compared = std::min(options.compare_depth, depth);
  double worst = 0.0;
  for (std::size_t n = 0; n <= compared; ++n) {
    for (Eigen::Index v = 0; v < out.rho[n].size(); ++v) {
      const double a = detail::level_mass(s, out.rho[n], n, v);
      const double b = detail::level_mass(s, probed[n], n, v);
      worst = std::max(worst, std::abs(a - b) / b);
    }
  }
  out.convergence_estimate = worst;
  out.converged = worst <= options.tol;
  return out;
}

struct StateResidual {
  /// max over n, v of |sum_{s(e)=v} Phi(e) rho_n(r(e)) / rho_{n-1}(v) - 1|
  double equation = 0.0;
  /// |sum_{V(0)} rho_0 - 1|
  double normalization = 0.0;
};

/// How far `state` is from satisfying the state equations, summed edge by
/// edge (independently of the aggregated A_n).
inline StateResidual state_equation_residual(const WeightedSystem& s,
                                             const StateSequence& state) {
  detail::check_state_shape(s, state);
  StateResidual r;
  for (std::size_t n = 1; n <= state.truncation; ++n) {
    const auto& lower = state.rho[n - 1];
    const auto& upper = state.rho[n];
    Vector sums = Vector::Zero(lower.size());
    for (const Edge& e : s.diagram().edges(n)) {
      sums(static_cast<Eigen::Index>(e.source)) +=
          e.weight * upper.mantissa(static_cast<Eigen::Index>(e.range));
    }
    const double shift = std::exp(upper.log_scale - lower.log_scale);
    for (Eigen::Index v = 0; v < lower.size(); ++v) {
      r.equation = std::max(r.equation, std::abs(sums(v) * shift / lower.mantissa(v) - 1.0));
    }
  }
  r.normalization = std::abs(state.rho[0].values().sum() - 1.0);
  return r;
}

/// Initial distribution on V(0) plus p_n(e) for n = 1 .. depth().
struct MarkovMeasure {
  std::shared_ptr<const BratteliDiagram> diagram;
  Vector initial;
  std::vector<std::vector<double>> edge_probs;

  std::size_t depth() const noexcept { return edge_probs.size(); }
};

inline MarkovMeasure edge_probabilities(const WeightedSystem& s,
                                        const StateSequence& state) {
  detail::check_state_shape(s, state);
  MarkovMeasure m;
  m.diagram = s.shared_diagram();
  m.initial = state.rho[0].values();
  for (std::size_t n = 1; n <= state.truncation; ++n) {
    const auto& lower = state.rho[n - 1];
    const auto& upper = state.rho[n];
    const double shift = std::exp(upper.log_scale - lower.log_scale);
    const auto edges = s.diagram().edges(n);
    std::vector<double> probs(edges.size());
    Vector totals = Vector::Zero(lower.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Edge& e = edges[i];
      probs[i] = e.weight * upper.mantissa(static_cast<Eigen::Index>(e.range)) * shift /
                 lower.mantissa(static_cast<Eigen::Index>(e.source));
      totals(static_cast<Eigen::Index>(e.source)) += probs[i];
    }
    for (Eigen::Index v = 0; v < totals.size(); ++v) {
      if (std::abs(totals(v) - 1.0) > 1e-10) {
        throw InvalidArgument("state violates the state equation at level " +
                              std::to_string(n - 1) + ", vertex " + std::to_string(v));
      }
    }
    m.edge_probs.push_back(std::move(probs));
  }
  return m;
}

/// mu(Z(x_1 ... x_n)) = rho_0(s(x_1)) p_1(x_1) ... p_n(x_n), accumulated in
/// log space.
inline double cylinder_mass(const MarkovMeasure& m, const FinitePath& path) {
  if (path.start_level != 0 || path.edges.size() > m.depth() ||
      !is_admissible(*m.diagram, path)) {
    throw InvalidArgument("path is not an admissible cylinder of the measure");
  }
  double acc = std::log(m.initial(static_cast<Eigen::Index>(path.start_vertex)));
  for (std::size_t k = 0; k < path.edges.size(); ++k) {
    acc += std::log(m.edge_probs[k][path.edges[k]]);
  }
  return std::exp(acc);
}

/// Mass of the paths through each vertex of level n.
inline Vector level_masses(const MarkovMeasure& m, std::size_t n) {
  if (n > m.depth()) throw InvalidArgument("level beyond the measure's depth");
  Vector mass = m.initial;
  for (std::size_t k = 1; k <= n; ++k) {
    Vector next = Vector::Zero(static_cast<Eigen::Index>(m.diagram->vertex_count(k)));
    const auto edges = m.diagram->edges(k);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      next(static_cast<Eigen::Index>(edges[i].range)) +=
          mass(static_cast<Eigen::Index>(edges[i].source)) * m.edge_probs[k - 1][i];
    }
    mass = std::move(next);
  }
  return mass;
}

/// mu(f) for a cylinder function of depth <= depth().
inline double integrate(const MarkovMeasure& m, const CylinderFunction& f) {
  if (f.depth() > m.depth()) {
    throw InvalidArgument("function depth exceeds the measure's depth");
  }
  double total = 0.0;
  f.for_each_value(*m.diagram, [&](std::span<const std::size_t> edges, std::size_t start,
                                   std::size_t, double value) {
    double mass = m.initial(static_cast<Eigen::Index>(start));
    for (std::size_t k = 0; k < edges.size(); ++k) mass *= m.edge_probs[k][edges[k]];
    total += mass * value;
  });
  return total;
}

/// |mu(f) - mu(E_n f)|; zero for every f exactly when mu is fixed by E_n.
inline double g_measure_residual(const MarkovMeasure& m, const WeightedSystem& s,
                                 const CylinderFunction& f, std::size_t n) {
  if (f.depth() > n || n > m.depth()) {
    throw InvalidArgument("need depth(f) <= n <= measure depth");
  }
  const Vector conditioned = expectation(s, f, n);
  const Vector mass = level_masses(m, n);
  return std::abs(integrate(m, f) - mass.dot(conditioned));
}

}  // namespace bratteli
