#include "pairing/kernels.hpp"

namespace pairing::kernels::scalar {

double dot(std::span<const double> x, std::span<const double> y) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(double alpha, std::span<double> x) noexcept {
  for (double& v : x) v *= alpha;
}

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y,
          std::size_t row_begin, std::size_t row_end) noexcept {
  for (std::size_t r = row_begin; r < row_end; ++r) {
    double sum = 0.0;
    for (std::size_t k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      sum += a.values[k] * x[a.col_indices[k]];
    }
    y[r] = sum;
  }
}

}  // namespace pairing::kernels::scalar
