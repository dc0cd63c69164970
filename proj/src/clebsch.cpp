#include "pairing/clebsch.hpp"

#include <cmath>
#include <cstdlib>

namespace pairing {

namespace {

// Exact in double up to 22!.
double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

bool is_even(int x) { return (x & 1) == 0; }

}  // namespace

// Racah's closed form.
double clebsch_gordan(int j1x2, int m1x2, int j2x2, int m2x2, int jx2, int mx2) {
  if (m1x2 + m2x2 != mx2) return 0.0;
  if (std::abs(m1x2) > j1x2 || std::abs(m2x2) > j2x2 || std::abs(mx2) > jx2) return 0.0;
  if (!is_even(j1x2 + m1x2) || !is_even(j2x2 + m2x2) || !is_even(jx2 + mx2)) return 0.0;
  if (jx2 < std::abs(j1x2 - j2x2) || jx2 > j1x2 + j2x2 || !is_even(j1x2 + j2x2 + jx2)) return 0.0;

  const int a = (j1x2 + j2x2 - jx2) / 2;
  const int b = (j1x2 - j2x2 + jx2) / 2;
  const int c = (-j1x2 + j2x2 + jx2) / 2;
  const int d = (j1x2 + j2x2 + jx2) / 2 + 1;

  const double prefactor_squared =
      (jx2 + 1.0) * factorial(a) * factorial(b) * factorial(c) / factorial(d) *
      factorial((j1x2 + m1x2) / 2) * factorial((j1x2 - m1x2) / 2) * factorial((j2x2 + m2x2) / 2) *
      factorial((j2x2 - m2x2) / 2) * factorial((jx2 + mx2) / 2) * factorial((jx2 - mx2) / 2);

  double sum = 0.0;
  for (int k = 0;; ++k) {
    const int t1 = a - k;
    const int t2 = (j1x2 - m1x2) / 2 - k;
    const int t3 = (j2x2 + m2x2) / 2 - k;
    const int t4 = (jx2 - j2x2 + m1x2) / 2 + k;
    const int t5 = (jx2 - j1x2 - m2x2) / 2 + k;
    if (t1 < 0 || t2 < 0 || t3 < 0) break;
    if (t4 < 0 || t5 < 0) continue;
    const double denom = factorial(k) * factorial(t1) * factorial(t2) * factorial(t3) * factorial(t4) * factorial(t5);
    sum += (is_even(k) ? 1.0 : -1.0) / denom;
  }
  // Square before the root so that e.g. 1/sqrt(2) comes out correctly rounded.
  const double magnitude = std::sqrt(prefactor_squared * sum * sum);
  return sum < 0.0 ? -magnitude : magnitude;

}

}  // namespace pairing
