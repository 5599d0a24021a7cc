#pragma once

// Quasi-product cocycles on the path space of a weighted Bratteli diagram:
// level matrices A_n, partition functions u_n = Z_n, their Markovianizations
// B_n, normalized and local potentials, and the conditional expectations E_n
// restricted to cylinder functions.

#include <bratteli/contraction.hpp>
#include <bratteli/diagram.hpp>
#include <bratteli/errors.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace bratteli {

/// Positive vector stored as mantissa * exp(log_scale), max mantissa 1.
struct LogScaledVector {
  Vector mantissa;
  double log_scale = 0.0;

  /// Rescales `raw` (strictly positive) so its largest entry is 1.
  static LogScaledVector normalized(const Vector& raw, double log_scale) {
    const double top = raw.maxCoeff();
    if (!(top > 0.0) || !std::isfinite(top)) {
      throw InvalidArgument("log-scaled vector needs a positive finite maximum");
    }
    return {raw / top, log_scale + std::log(top)};
  }

  Eigen::Index size() const noexcept { return mantissa.size(); }
  double value(Eigen::Index i) const { return mantissa(i) * std::exp(log_scale); }
  double log_value(Eigen::Index i) const { return std::log(mantissa(i)) + log_scale; }
  Vector values() const { return mantissa * std::exp(log_scale); }
};

/// Locally constant function depending on the first `depth` edges of a path
/// from level 0. values()[i] belongs to the i-th depth-`depth` path in the
/// order of for_each_path(d, 0, depth); a depth-0 function is one constant.
class CylinderFunction {
 public:
  static CylinderFunction constant(double c) { return CylinderFunction(0, {c}); }

  /// f(edges, start_vertex, end_vertex) for every depth-`depth` path.
  template <class F>
  static CylinderFunction tabulate(const BratteliDiagram& d, std::size_t depth, F&& f) {
    std::vector<double> values;
    for_each_path(d, 0, depth,
                  [&](std::span<const std::size_t> edges, std::size_t start,
                      std::size_t end) { values.push_back(f(edges, start, end)); });
    if (depth == 0) {
      for (double v : values) {
        if (v != values.front()) {
          throw InvalidArgument("a depth-0 cylinder function must be constant");
        }
      }
      values.resize(1);
    }
    return CylinderFunction(depth, std::move(values));
  }

  static CylinderFunction from_values(const BratteliDiagram& d, std::size_t depth,
                                      std::vector<double> values) {
    CylinderFunction f(depth, std::move(values));
    f.check_against(d);
    return f;
  }

  std::size_t depth() const noexcept { return depth_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// visit(edges, start, end, value) over the depth-d paths of `d`.
  template <class Visitor>
  void for_each_value(const BratteliDiagram& d, Visitor&& visit) const {
    check_against(d);
    if (depth_ == 0) {
      for (std::size_t v = 0; v < d.vertex_count(0); ++v) {
        visit(std::span<const std::size_t>(), v, v, values_.front());
      }
      return;
    }
    std::size_t i = 0;
    for_each_path(d, 0, depth_,
                  [&](std::span<const std::size_t> edges, std::size_t start,
                      std::size_t end) { visit(edges, start, end, values_[i++]); });
  }

  void check_against(const BratteliDiagram& d) const {
    if (depth_ > d.level_count()) {
      throw InvalidArgument("cylinder function depth " + std::to_string(depth_) +
                            " exceeds diagram depth");
    }
    std::size_t expected = 1;
    if (depth_ > 0) {
      expected = 0;
      for (std::size_t v = 0; v < d.vertex_count(depth_); ++v) {
        expected += static_cast<std::size_t>(count_paths(d, 0, depth_, v));
      }
    }
    if (values_.size() != expected) {
      throw InvalidArgument("cylinder function of depth " + std::to_string(depth_) +
                            " has " + std::to_string(values_.size()) +
                            " values; the diagram has " + std::to_string(expected) +
                            " such paths");
    }
  }

 private:
  CylinderFunction(std::size_t depth, std::vector<double> values)
      : depth_(depth), values_(std::move(values)) {}

  std::size_t depth_;
  std::vector<double> values_;
};

/// A valid diagram together with its edge weighting Phi (the edge weights)
/// and every per-level quantity derived from it, built eagerly. Immutable.
class WeightedSystem {
 public:
  explicit WeightedSystem(BratteliDiagram diagram)
      : diagram_(std::make_shared<const BratteliDiagram>(std::move(diagram))) {
    require_valid(*diagram_);
    build();
  }

  const BratteliDiagram& diagram() const noexcept { return *diagram_; }
  std::shared_ptr<const BratteliDiagram> shared_diagram() const noexcept {
    return diagram_;
  }
  std::size_t level_count() const noexcept { return diagram_->level_count(); }
  bool stationary() const noexcept { return stationary_; }

  double phi(std::size_t level, std::size_t edge) const {
    return diagram_->edge(level, edge).weight;
  }

  /// A_n(w, v) = sum of Phi(e) over e in E(n) from v to w, n in [1, N].
  const Matrix& transition_matrix(std::size_t n) const {
    check_level(n, 1);
    return a_[n - 1];
  }
  const std::vector<Matrix>& transition_matrices() const noexcept { return a_; }

  /// u_n = A_n ... A_1 1, n in [0, N].
  const LogScaledVector& path_sums(std::size_t n) const {
    check_level(n, 0);
    return u_[n];
  }

  /// B_n = D_n^{-1} A_n D_{n-1}, D_n = diag(u_n).
  const MarkovianMatrix& markov_matrix(std::size_t n) const {
    check_level(n, 1);
    return b_[n - 1];
  }

  /// u_n(r(e))^{-1} Phi(e) u_{n-1}(s(e)).
  double local_potential(std::size_t n, std::size_t edge) const {
    check_level(n, 1);
    const Edge& e = diagram_->edge(n, edge);
    return e.weight * u_[n - 1].mantissa(static_cast<Eigen::Index>(e.source)) /
           unscaled_[n - 1](static_cast<Eigen::Index>(e.range));
  }

 private:
  void check_level(std::size_t n, std::size_t lowest) const {
    if (n < lowest || n > level_count()) {
      throw InvalidArgument("level " + std::to_string(n) + " outside [" +
                            std::to_string(lowest) + ", " +
                            std::to_string(level_count()) + "]");
    }
  }

  void build() {
    const BratteliDiagram& d = *diagram_;
    stationary_ = is_stationary(d);
    u_.push_back({Vector::Ones(static_cast<Eigen::Index>(d.vertex_count(0))), 0.0});
    for (std::size_t n = 1; n <= d.level_count(); ++n) {
      Matrix a = Matrix::Zero(static_cast<Eigen::Index>(d.vertex_count(n)),
                              static_cast<Eigen::Index>(d.vertex_count(n - 1)));
      for (const Edge& e : d.edges(n)) {
        a(static_cast<Eigen::Index>(e.range), static_cast<Eigen::Index>(e.source)) +=
            e.weight;
      }
      const Vector& prev = u_.back().mantissa;
      Vector raw(a.rows());
      for (Eigen::Index w = 0; w < a.rows(); ++w) {
        double s = 0.0;
        for (Eigen::Index v = 0; v < a.cols(); ++v) s += a(w, v) * prev(v);
        raw(w) = s;
      }
      b_.push_back(bratteli::markovianize(a, prev));
      u_.push_back(LogScaledVector::normalized(raw, u_.back().log_scale));
      unscaled_.push_back(std::move(raw));
      a_.push_back(std::move(a));
    }
  }

  std::shared_ptr<const BratteliDiagram> diagram_;
  bool stationary_ = false;
  std::vector<Matrix> a_;
  std::vector<LogScaledVector> u_;
  // A_n applied to the mantissa of u_{n-1}: u_n(w) = unscaled_(w) * exp(scale_{n-1}).
  std::vector<Vector> unscaled_;
  std::vector<MarkovianMatrix> b_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

inline const std::vector<Matrix>& transition_matrices(const WeightedSystem& s) {
  return s.transition_matrices();
}

inline const LogScaledVector& scaled_path_sums(const WeightedSystem& s, std::size_t n) {
  return s.path_sums(n);
}

inline const MarkovianMatrix& markovianize(const WeightedSystem& s, std::size_t n) {
  return s.markov_matrix(n);
}

inline double local_potential(const WeightedSystem& s, std::size_t n, std::size_t edge) {
  return s.local_potential(n, edge);
}

namespace detail {

inline double log_weight(const WeightedSystem& s, const FinitePath& p) {
  double acc = 0.0;
  for (std::size_t k = 0; k < p.edges.size(); ++k) {
    acc += std::log(s.phi(p.start_level + k + 1, p.edges[k]));
  }
  return acc;
}

inline void require_rooted(const WeightedSystem& s, const FinitePath& p) {
  if (p.start_level != 0) throw InvalidArgument("path must start at level 0");
  if (!is_admissible(s.diagram(), p)) {
    throw InvalidArgument("path is not admissible in the diagram");
  }
}

}  // namespace detail

/// D(x, y) = prod Phi(x_i) / prod Phi(y_i) for paths from level 0 of equal
/// length that end at the same vertex.
inline double cocycle_value(const WeightedSystem& s, const FinitePath& x,
                            const FinitePath& y) {
  detail::require_rooted(s, x);
  detail::require_rooted(s, y);
  if (x.edges.size() != y.edges.size()) {
    throw InvalidArgument("cocycle needs paths of equal length");
  }
  if (end_vertex(s.diagram(), x) != end_vertex(s.diagram(), y)) {
    throw InvalidArgument("cocycle needs paths ending at the same vertex");
  }
  return std::exp(detail::log_weight(s, x) - detail::log_weight(s, y));
}

/// rho_n(x) = Phi(x_1) ... Phi(x_n) / Z_n(r(x_n)).
inline double normalized_potential(const WeightedSystem& s, const FinitePath& x) {
  detail::require_rooted(s, x);
  const std::size_t n = x.edges.size();
  const auto w = static_cast<Eigen::Index>(end_vertex(s.diagram(), x));
  return std::exp(detail::log_weight(s, x) - s.path_sums(n).log_value(w));
}

/// E_n(f) as a function on V(n): the rho_n-weighted average of f over the
/// paths from level 0 ending at each vertex. Computed as B_n ... B_{d+1}
/// applied to E_d(f), never by enumerating paths deeper than f.
inline Vector expectation(const WeightedSystem& s, const CylinderFunction& f,
                          std::size_t n) {
  const BratteliDiagram& d = s.diagram();
  if (n > s.level_count()) {
    throw InvalidArgument("expectation level " + std::to_string(n) +
                          " exceeds diagram depth " + std::to_string(s.level_count()));
  }
  const std::size_t depth = f.depth();
  if (depth > n) {
    throw InvalidArgument("cylinder function depth " + std::to_string(depth) +
                          " exceeds expectation level " + std::to_string(n));
  }
  if (depth == 0) {
    f.check_against(d);
    return Vector::Constant(static_cast<Eigen::Index>(d.vertex_count(n)),
                            f.values().front());
  }
  Vector g = Vector::Zero(static_cast<Eigen::Index>(d.vertex_count(depth)));
  f.for_each_value(d, [&](std::span<const std::size_t> edges, std::size_t,
                          std::size_t end, double value) {
    double rho = 1.0;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      rho *= s.local_potential(k + 1, edges[k]);
    }
    g(static_cast<Eigen::Index>(end)) += rho * value;
  });
  for (std::size_t k = depth + 1; k <= n; ++k) g = s.markov_matrix(k).apply(g);
  return g;
}

}  // namespace bratteli
