#pragma once
// Dense/sparse vector kernels used by the eigensolver.
//
// Every kernel has a portable scalar reference in `kernels::scalar` and, on
// x86-64 builds, an AVX2+FMA variant in `kernels::avx2`. The free functions in
// `kernels` dispatch at runtime to the best variant the CPU supports. Results
// of the two variants agree to rounding (reduction order differs), and each
// variant is deterministic for fixed inputs.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace pairing::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa) noexcept;

// True when the AVX2 variants were compiled in and the CPU supports AVX2+FMA.
bool avx2_available() noexcept;

// Currently selected variant. Defaults to the best available one; the
// PAIRING_ISA environment variable ("scalar" or "avx2") overrides at startup.
Isa active_isa() noexcept;

// Forces a variant (falls back to scalar when `isa` is unavailable). Returns
// the variant actually selected.
Isa set_active_isa(Isa isa) noexcept;

// Read-only view of a CSR matrix. `row_offsets` has rows+1 entries.
struct CsrView {
  std::span<const std::size_t> row_offsets;
  std::span<const std::uint32_t> col_indices;
  std::span<const double> values;
  std::size_t rows() const noexcept { return row_offsets.empty() ? 0 : row_offsets.size() - 1; }
};

double dot(std::span<const double> x, std::span<const double> y) noexcept;
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;
void scale(double alpha, std::span<double> x) noexcept;
// y[r] = sum_k A[r, k] x[k] for r in [row_begin, row_end).
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y,
          std::size_t row_begin, std::size_t row_end) noexcept;

namespace scalar {
double dot(std::span<const double> x, std::span<const double> y) noexcept;
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;
void scale(double alpha, std::span<double> x) noexcept;
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y,
          std::size_t row_begin, std::size_t row_end) noexcept;
}  // namespace scalar

namespace avx2 {
// Only callable when avx2_available() is true.
double dot(std::span<const double> x, std::span<const double> y) noexcept;
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;
void scale(double alpha, std::span<double> x) noexcept;
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y,
          std::size_t row_begin, std::size_t row_end) noexcept;
}  // namespace avx2

}  // namespace pairing::kernels
