#pragma once

// Perron-Frobenius data of a primitive nonnegative matrix through the
// stationary state sequence mu_{n-1} = A^T mu_n: normalized power iteration
// on A^T, certified by the contraction ratio of the first positive power.

#include <bratteli/contraction.hpp>
#include <bratteli/errors.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace bratteli {

namespace detail {

inline void require_square_nonnegative(const Matrix& a) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw InvalidArgument("expected a nonempty square matrix");
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    bool row = false;
    bool col = false;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (!(a(i, j) >= 0.0) || !std::isfinite(a(i, j))) {
        throw InvalidArgument("matrix entries must be finite and nonnegative");
      }
      row = row || a(i, j) > 0.0;
      col = col || a(j, i) > 0.0;
    }
    if (!row) throw InvalidArgument("row " + std::to_string(i) + " is zero");
    if (!col) throw InvalidArgument("column " + std::to_string(i) + " is zero");
  }
}

}  // namespace detail

/// Smallest L <= (dim - 1)^2 + 1 with A^L entrywise positive, computed on the
/// boolean support; empty when A is not primitive.
inline std::optional<std::size_t> primitivity_exponent(const Matrix& a) {
  detail::require_square_nonnegative(a);
  const Eigen::Index dim = a.rows();
  using Support = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
  const Support base = (a.array() > 0.0).matrix();
  Support power = base;
  const auto bound = static_cast<std::size_t>((dim - 1) * (dim - 1) + 1);
  for (std::size_t l = 1; l <= bound; ++l) {
    if (power.all()) return l;
    Support next = Support::Constant(dim, dim, false);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index k = 0; k < dim; ++k) {
        if (!power(i, k)) continue;
        for (Eigen::Index j = 0; j < dim; ++j) next(i, j) = next(i, j) || base(k, j);
      }
    }
    power = std::move(next);
  }
  return std::nullopt;
}

/// A^L rescaled so its largest entry is 1 (ratios are all that matter).
inline Matrix normalized_power(const Matrix& a, std::size_t exponent) {
  Matrix p = a / a.maxCoeff();
  for (std::size_t l = 1; l < exponent; ++l) {
    p = p * a;
    p /= p.maxCoeff();
  }
  return p;
}

struct PerronResult {
  double lambda = 0.0;
  /// Probability vector with A^T mu = lambda mu.
  Vector left_vector;
  /// ||A^T mu - lambda mu||_1 at the returned iterate.
  double residual = 0.0;
  std::size_t iterations = 0;
  /// Primitivity exponent L.
  std::size_t exponent = 0;
  /// 1 - min(A^L) / max(A^L): every L steps the variation of the iterate,
  /// measured against the limit, contracts at least by this factor.
  double contraction_bound = 1.0;
  bool converged = false;
};

/// Power iteration mu <- A^T mu / |A^T mu|_1 from `start` (uniform by
/// default). lambda is the pre-normalization mass |A^T mu|_1. Stops once the
/// residual is at most tol or after max_iter updates (converged = false).
inline PerronResult perron(const Matrix& a, double tol, std::size_t max_iter,
                           const std::optional<Vector>& start = std::nullopt) {
  const auto exponent = primitivity_exponent(a);
  if (!exponent) throw UnsupportedInput("matrix is not primitive");
  const Eigen::Index dim = a.rows();

  Vector mu = start ? *start : Vector::Ones(dim);
  if (mu.size() != dim) throw InvalidArgument("start vector has the wrong size");
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (!(mu(i) > 0.0)) throw InvalidArgument("start vector must be strictly positive");
  }
  mu /= mu.sum();

  PerronResult out;
  out.exponent = *exponent;
  out.contraction_bound = 1.0 - ratio_bound(normalized_power(a, *exponent));

  Vector image(dim);
  for (;;) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < dim; ++i) s += a(i, j) * mu(i);
      image(j) = s;
    }
    out.lambda = image.sum();
    out.residual = (image - out.lambda * mu).lpNorm<1>();
    if (out.residual <= tol) {
      out.converged = true;
      break;
    }
    if (out.iterations == max_iter) break;
    mu = image / out.lambda;
    ++out.iterations;
  }
  out.left_vector = std::move(mu);
  return out;
}

}  // namespace bratteli
