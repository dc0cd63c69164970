#pragma once

namespace pairing {

// <j1 m1 j2 m2 | J M> (Condon-Shortley phases). All arguments are doubled so
// half-integer spins stay integral: clebsch_gordan(1, 1, 1, -1, 0, 0) is
// <1/2 1/2 1/2 -1/2 | 0 0> = 1/sqrt(2). Returns 0 for forbidden couplings.
double clebsch_gordan(int j1x2, int m1x2, int j2x2, int m2x2, int jx2, int mx2);

}  // namespace pairing
