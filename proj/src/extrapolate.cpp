#include "pairing/extrapolate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairing/errors.hpp"

namespace pairing {

double FitResult::evaluate(double n) const {
  double value = 0.0;
  for (auto k = coefficients.size(); k-- > 0;) value = value / n + coefficients[k];
  return value;
}

FitResult fit_cubic_inverse(std::span<const SeriesPoint> points, int degree) {
  if (degree < 1 || degree > 4) throw DomainError("fit degree must be between 1 and 4");
  const auto terms = static_cast<std::size_t>(degree) + 1;
  if (points.size() < terms) {
    std::ostringstream msg;
    msg << "fit of degree " << degree << " needs at least " << terms << " points, got " << points.size();
    throw DomainError(msg.str());
  }
  // Sorting makes the result independent of input order.
  std::vector<SeriesPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const SeriesPoint& x, const SeriesPoint& y) { return x.n < y.n; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!(sorted[i].n >= 1.0) || !std::isfinite(sorted[i].value)) {
      throw DomainError("series points need n >= 1 and finite values");
    }
    if (i > 0 && sorted[i].n == sorted[i - 1].n) throw DomainError("series points need distinct n");
  }

  const auto rows = static_cast<Eigen::Index>(sorted.size());
  const auto cols = static_cast<Eigen::Index>(terms);
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double inv = 1.0 / sorted[static_cast<std::size_t>(r)].n;
    double power = 1.0;
    for (Eigen::Index c = 0; c < cols; ++c, power *= inv) design(r, c) = power;
    rhs(r) = sorted[static_cast<std::size_t>(r)].value;
  }
  // Column equilibration: the 1/N^3 column is orders of magnitude smaller.
  const Eigen::VectorXd scale = design.colwise().norm().transpose();
  const Eigen::MatrixXd scaled = design * scale.cwiseInverse().asDiagonal();

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  if (qr.rank() < cols) throw DomainError("fit design matrix is rank deficient");
  const Eigen::VectorXd solution = qr.solve(rhs).cwiseQuotient(scale);

  FitResult fit;
  fit.coefficients.assign(solution.data(), solution.data() + cols);
  const Eigen::VectorXd residual = design * solution - rhs;
  fit.rms_residual = std::sqrt(residual.squaredNorm() / static_cast<double>(rows));
  fit.max_abs_residual = residual.cwiseAbs().maxCoeff();

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  fit.condition = cond * cond;
  fit.ill_conditioned = fit.condition > 1e10;
  return fit;
}

double extrapolate_to_bulk(const FitResult& fit) { return fit.a(); }

}  // namespace pairing
