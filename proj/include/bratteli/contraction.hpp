#pragma once

// Variation seminorm and contraction coefficients of Markovian (row
// stochastic) matrices.

#include <bratteli/errors.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>

namespace bratteli {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// var(f) = max f - min f.
inline double variation(std::span<const double> f) {
  if (f.empty()) throw InvalidArgument("variation of an empty vector");
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  return *hi - *lo;
}

inline double variation(const Vector& f) {
  return variation(std::span<const double>(f.data(), static_cast<std::size_t>(f.size())));
}

/// Nonnegative matrix b(j, i) whose rows sum to 1 within kRowSumTolerance.
/// Rows are indexed by J (target), columns by I (source): (Bf)(j) = sum_i
/// b(j, i) f(i).
class MarkovianMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-12;

  explicit MarkovianMatrix(Matrix entries) : b_(std::move(entries)) {
    if (b_.rows() == 0 || b_.cols() == 0) {
      throw InvalidArgument("Markovian matrix must be nonempty");
    }
    for (Eigen::Index j = 0; j < b_.rows(); ++j) {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < b_.cols(); ++i) {
        const double x = b_(j, i);
        if (!(x >= 0.0) || !std::isfinite(x)) {
          throw InvalidArgument("Markovian matrix entry (" + std::to_string(j) +
                                ", " + std::to_string(i) + ") is " +
                                std::to_string(x));
        }
        sum += x;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        throw InvalidArgument("row " + std::to_string(j) + " sums to " +
                              std::to_string(sum) + ", not 1");
      }
    }
  }

  const Matrix& entries() const noexcept { return b_; }
  Eigen::Index rows() const noexcept { return b_.rows(); }
  Eigen::Index cols() const noexcept { return b_.cols(); }
  double operator()(Eigen::Index j, Eigen::Index i) const { return b_(j, i); }

  Vector apply(const Vector& f) const {
    if (f.size() != b_.cols()) {
      throw InvalidArgument("vector of size " + std::to_string(f.size()) +
                            " does not match " + std::to_string(b_.cols()) +
                            " columns");
    }
    Vector out(b_.rows());
    for (Eigen::Index j = 0; j < b_.rows(); ++j) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < b_.cols(); ++i) s += b_(j, i) * f(i);
      out(j) = s;
    }
    return out;
  }

 private:
  Matrix b_;
};

/// Contraction coefficient
///   eps = min over j, j' in J and I1 subset of I of
///         sum_{i in I1} b(j, i) + sum_{i not in I1} b(j', i),
/// evaluated through its pointwise form min_{j,j'} sum_i min(b(j,i), b(j',i)):
/// for fixed rows the subset minimum picks the smaller entry at every i.
/// Guarantees var(Bf) <= (1 - eps) var(f).
inline double contraction_epsilon(const MarkovianMatrix& b) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    for (Eigen::Index k = j; k < b.rows(); ++k) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < b.cols(); ++i) s += std::min(b(j, i), b(k, i));
      best = std::min(best, s);
    }
  }
  return std::clamp(best, 0.0, 1.0);
}

/// Literal subset scan over all 2^|I| subsets and all ordered row pairs.
/// Sums run in column order, so the minimizing subset reproduces the
/// pointwise form operand for operand.
inline double contraction_epsilon_bruteforce(const MarkovianMatrix& b) {
  constexpr Eigen::Index kMaxColumns = 16;
  if (b.cols() > kMaxColumns) {
    throw CapacityError("subset scan over " + std::to_string(b.cols()) +
                            " columns exceeds the limit of 16",
                        static_cast<std::size_t>(b.cols()));
  }
  const std::uint32_t subsets = std::uint32_t{1} << b.cols();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    for (Eigen::Index k = 0; k < b.rows(); ++k) {
      for (std::uint32_t mask = 0; mask < subsets; ++mask) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < b.cols(); ++i) {
          s += (mask >> i) & 1U ? b(j, i) : b(k, i);
        }
        best = std::min(best, s);
      }
    }
  }
  return std::clamp(best, 0.0, 1.0);
}

/// eps > 0 exactly when no two rows of B have disjoint supports.
inline bool has_no_orthogonal_rows(const MarkovianMatrix& b) {
  return contraction_epsilon(b) > 0.0;
}

/// a_min / a_max for a strictly positive matrix; a lower bound for the
/// contraction coefficient of every Markovianization of A.
inline double ratio_bound(const Matrix& a) {
  if (a.size() == 0) throw InvalidArgument("ratio bound of an empty matrix");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
      const double x = a(j, i);
      if (!(x > 0.0) || !std::isfinite(x)) {
        throw InvalidArgument("ratio bound needs strictly positive entries; (" +
                              std::to_string(j) + ", " + std::to_string(i) +
                              ") is " + std::to_string(x));
      }
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  return lo / hi;
}

/// b(j, i) = (Au)(j)^{-1} a(j, i) u(i) for a nonnegative A without zero rows
/// and a strictly positive u.
inline MarkovianMatrix markovianize(const Matrix& a, const Vector& u) {
  if (u.size() != a.cols()) {
    throw InvalidArgument("scaling vector size does not match the matrix");
  }
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!(u(i) > 0.0)) throw InvalidArgument("scaling vector must be strictly positive");
  }
  Matrix b(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
      if (!(a(j, i) >= 0.0)) throw InvalidArgument("matrix has a negative entry");
      total += a(j, i) * u(i);
    }
    if (!(total > 0.0)) {
      throw InvalidArgument("row " + std::to_string(j) + " of the matrix is zero");
    }
    for (Eigen::Index i = 0; i < a.cols(); ++i) b(j, i) = a(j, i) * u(i) / total;
  }
  return MarkovianMatrix(std::move(b));
}

}  // namespace bratteli
