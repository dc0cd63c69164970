#pragma once
// Least-squares fits of finite-size series to value = a + b/N + c/N^2 + d/N^3.

#include <span>
#include <vector>

namespace pairing {

struct SeriesPoint {
  double n = 0.0;  // particle number or size proxy, >= 1
  double value = 0.0;
};

struct FitResult {
  // coefficients[k] multiplies N^-k; degree + 1 entries (a, b, c, d for the
  // default cubic).
  std::vector<double> coefficients;
  double rms_residual = 0.0;
  double max_abs_residual = 0.0;
  // Condition number of the normal system A^T A (square of that of the
  // column-equilibrated design matrix).
  double condition = 0.0;
  bool ill_conditioned = false;  // condition > 1e10

  double a() const { return coefficients.at(0); }
  double evaluate(double n) const;
};

// Ordinary least squares via column-pivoted Householder QR. Needs at least
// degree + 1 points with distinct n >= 1; degree in [1, 4]. Throws DomainError
// on invalid input and on a rank-deficient design.
FitResult fit_cubic_inverse(std::span<const SeriesPoint> points, int degree = 3);

// N -> infinity intercept a.
double extrapolate_to_bulk(const FitResult& fit);

}  // namespace pairing
