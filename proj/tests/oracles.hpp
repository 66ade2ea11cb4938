#pragma once

// Independent reference computations used to check the library. None of
// them shares code with the routines under test.

#include <complex>

namespace oracle {

using complex = std::complex<double>;

/// sn(u, k) by classical RK4 on the system sn' = cn dn, cn' = -sn dn,
/// dn' = -k^2 sn cn along the straight path 0 -> u. Returns NaN if |sn|
/// exceeds `blowup` anywhere on the path (a pole is nearby).
complex sn_by_ode(complex u, complex k, int steps = 4000, double blowup = 1e3);

/// K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt by the trapezoid rule,
/// which converges geometrically for this smooth periodic integrand.
complex k_by_quadrature(complex m, int panels = 4000);

}  // namespace oracle
