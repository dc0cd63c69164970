#include "pairing/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace pairing::kernels {

namespace {

bool detect_avx2() noexcept {
#if defined(PAIRING_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  const bool have_avx2 = detect_avx2();
  if (const char* env = std::getenv("PAIRING_ISA")) {
    const std::string_view requested(env);
    if (requested == "scalar") return Isa::kScalar;
    if (requested == "avx2" && have_avx2) return Isa::kAvx2;
  }
  return have_avx2 ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& selected() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::kAvx2:
      return "avx2";
    case Isa::kScalar:
      break;
  }
  return "scalar";
}

bool avx2_available() noexcept {
  static const bool available = detect_avx2();
  return available;
}

Isa active_isa() noexcept { return selected().load(std::memory_order_relaxed); }

Isa set_active_isa(Isa isa) noexcept {
  if (isa == Isa::kAvx2 && !avx2_available()) isa = Isa::kScalar;
  selected().store(isa, std::memory_order_relaxed);
  return isa;
}

#if defined(PAIRING_HAVE_AVX2)
#define PAIRING_DISPATCH(call)                                   \
  do {                                                           \
    if (active_isa() == Isa::kAvx2) return avx2::call;           \
    return scalar::call;                                         \
  } while (0)
#else
#define PAIRING_DISPATCH(call) return scalar::call
#endif

double dot(std::span<const double> x, std::span<const double> y) noexcept {
  PAIRING_DISPATCH(dot(x, y));
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  PAIRING_DISPATCH(axpy(alpha, x, y));
}

void scale(double alpha, std::span<double> x) noexcept { PAIRING_DISPATCH(scale(alpha, x)); }

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y,
          std::size_t row_begin, std::size_t row_end) noexcept {
  PAIRING_DISPATCH(spmv(a, x, y, row_begin, row_end));
}

#undef PAIRING_DISPATCH

#if !defined(PAIRING_HAVE_AVX2)
// Non-x86 builds: keep the avx2 symbols linkable; they are never selected.
namespace avx2 {
double dot(std::span<const double> x, std::span<const double> y) noexcept { return scalar::dot(x, y); }
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept { scalar::axpy(alpha, x, y); }
void scale(double alpha, std::span<double> x) noexcept { scalar::scale(alpha, x); }
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y, std::size_t b,
          std::size_t e) noexcept {
  scalar::spmv(a, x, y, b, e);
}
}  // namespace avx2
#endif

}  // namespace pairing::kernels
