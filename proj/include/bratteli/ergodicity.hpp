#pragma once

// Unique-ergodicity checks for quasi-product cocycles. Verdicts are always
// qualified by a horizon and a tolerance: a finite computation certifies
// numerical decay, never the limit itself.

#include <bratteli/cocycle.hpp>
#include <bratteli/contraction.hpp>
#include <bratteli/errors.hpp>

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

namespace bratteli {

enum class VerdictStatus { UniqueAtTolerance, SufficientConditionMet, Inconclusive };

inline std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::UniqueAtTolerance: return "UniqueAtTolerance";
    case VerdictStatus::SufficientConditionMet: return "SufficientConditionMet";
    case VerdictStatus::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

struct TracePoint {
  std::size_t level;
  double value;
};

struct ErgodicityVerdict {
  VerdictStatus status = VerdictStatus::Inconclusive;
  std::vector<TracePoint> trace;
  std::size_t base_level = 0;
  std::size_t horizon = 0;
  double tolerance = 0.0;

  bool certified() const noexcept { return status != VerdictStatus::Inconclusive; }
};

/// Necessary and sufficient test: for every v in V(m) push the indicator
/// delta_v through B_{m+1}, ..., B_n and record max_v var(B_n ... B_{m+1}
/// delta_v) for n = m+1 .. horizon. The entries of that vector are the
/// product matrix entries (w, v), so this is the variation of w ->
/// B_n ... B_{m+1}(w, v).
inline ErgodicityVerdict check_variation_condition(const WeightedSystem& s,
                                                   std::size_t base, std::size_t horizon,
                                                   double tol) {
  if (base >= horizon || horizon > s.level_count()) {
    throw InvalidArgument("need base < horizon <= " + std::to_string(s.level_count()) +
                          ", got base " + std::to_string(base) + " and horizon " +
                          std::to_string(horizon));
  }
  if (!(tol >= 0.0)) throw InvalidArgument("tolerance must be nonnegative");

  const auto width = static_cast<Eigen::Index>(s.diagram().vertex_count(base));
  std::vector<Vector> columns;
  for (Eigen::Index v = 0; v < width; ++v) {
    columns.push_back(Vector::Unit(width, v));
  }

  ErgodicityVerdict verdict;
  verdict.base_level = base;
  verdict.horizon = horizon;
  verdict.tolerance = tol;
  for (std::size_t n = base + 1; n <= horizon; ++n) {
    const MarkovianMatrix& b = s.markov_matrix(n);
    double worst = 0.0;
    for (Vector& f : columns) {
      f = b.apply(f);
      worst = std::max(worst, variation(f));
    }
    verdict.trace.push_back({n, worst});
  }
  verdict.status = verdict.trace.back().value <= tol ? VerdictStatus::UniqueAtTolerance
                                                     : VerdictStatus::Inconclusive;
  return verdict;
}

/// Ratio of the smallest to the largest entry of A_n, 0 if some entry is 0.
inline double level_ratio(const WeightedSystem& s, std::size_t n) {
  const Matrix& a = s.transition_matrix(n);
  const double lo = a.minCoeff();
  return lo > 0.0 ? lo / a.maxCoeff() : 0.0;
}

/// Sufficient test: partial sums of eps_n = min A_n / max A_n. Divergence is
/// never inferred from finitely many terms; the condition is reported met
/// only for a stationary system with eps_1 > 0 or when the caller declares
/// the series divergent (and some term is positive).
inline ErgodicityVerdict check_series_condition(const WeightedSystem& s,
                                                std::size_t horizon,
                                                bool declared_divergent = false) {
  if (horizon == 0 || horizon > s.level_count()) {
    throw InvalidArgument("horizon must lie in [1, " + std::to_string(s.level_count()) +
                          "]");
  }
  ErgodicityVerdict verdict;
  verdict.horizon = horizon;
  double sum = 0.0;
  for (std::size_t n = 1; n <= horizon; ++n) {
    sum += level_ratio(s, n);
    verdict.trace.push_back({n, sum});
  }
  const bool stationary_positive = s.stationary() && level_ratio(s, 1) > 0.0;
  const bool declared = declared_divergent && sum > 0.0;
  verdict.status = stationary_positive || declared ? VerdictStatus::SufficientConditionMet
                                                   : VerdictStatus::Inconclusive;
  return verdict;
}

/// var(E_n f) for n = base .. horizon.
inline std::vector<TracePoint> variation_decay(const WeightedSystem& s,
                                               const CylinderFunction& f,
                                               std::size_t base, std::size_t horizon) {
  if (f.depth() > base) {
    throw InvalidArgument("function depth " + std::to_string(f.depth()) +
                          " exceeds base level " + std::to_string(base));
  }
  if (base > horizon || horizon > s.level_count()) {
    throw InvalidArgument("need base <= horizon <= diagram depth");
  }
  std::vector<TracePoint> out;
  Vector g = expectation(s, f, base);
  out.push_back({base, variation(g)});
  for (std::size_t n = base + 1; n <= horizon; ++n) {
    g = s.markov_matrix(n).apply(g);
    out.push_back({n, variation(g)});
  }
  return out;
}

}  // namespace bratteli
