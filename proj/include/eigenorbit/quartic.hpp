#pragma once

#include <complex>

#include "eigenorbit/elliptic.hpp"

namespace eigenorbit::quartic {

using complex = std::complex<double>;

/// Coefficient c of the double well V(x) = x^4 - c x^2.
inline constexpr double kWellCoefficient = 5.0;

/// Reduced winding pair (n, m) labelling an eigencurve: n counts midline
/// crossings and m imaginary-axis crossings per period. m = 0 denotes the
/// negative real axis (n/m = infinity), stored as (1, 0).
class WindingPair {
 public:
  /// Reduces by gcd. Throws ErrorCode::admissibility unless n >= 1, m >= 0
  /// and n >= 2m.
  WindingPair(int n, int m);

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  double ratio() const noexcept;

  friend bool operator==(const WindingPair&, const WindingPair&) = default;

 private:
  int n_;
  int m_;
};

enum class HalfPlane { upper, lower };

struct QuarticParams {
  complex a_squared;
  complex b_squared;
  complex a;  // inner turning point, principal root
  complex b;  // outer turning point, principal root
  elliptic::Modulus k;
  complex k_prime;
  complex K;        // K(k)
  complex K_prime;  // K(k'); upper-side limit when E is real and positive
};

/// Turning-point factorisation E + c x^2 - x^4 = -(a^2 - x^2)(b^2 - x^2) and
/// k^2 = a^2 / b^2. Throws ErrorCode::degenerate_energy within 1e-10 of E = 0
/// (a = 0) or E = -c^2/4 (a = b).
QuarticParams quartic_params(complex energy, double well = kWellCoefficient);

struct PhasePoint {
  complex x;
  complex v;
};

/// Closed-form orbit x(t) = a sn(i b t, k) starting at the origin, with
/// velocity i a b cn dn.
class ExactOrbit {
 public:
  explicit ExactOrbit(complex energy, double well = kWellCoefficient);

  PhasePoint operator()(double t) const;
  const QuarticParams& params() const noexcept { return params_; }
  complex energy() const noexcept { return energy_; }
  /// x'(0) = i a b, one of the two square roots of E.
  complex initial_velocity() const noexcept;

 private:
  complex energy_;
  QuarticParams params_;
  elliptic::JacobiElliptic sn_;
};

complex exact_trajectory(complex energy, double t, double well = kWellCoefficient);

/// The two sides of the closure condition: numerator Im[2iK/b] and
/// denominator s Im[K'/b], where s = -1 below the real axis and +1 otherwise.
/// The sign makes both half-planes share positive (n, m) labels; the lower
/// half-plane orbits are mirror images of the upper ones.
struct ClosureTerms {
  double numerator;
  double denominator;
};

ClosureTerms closure_terms(complex energy);

/// f(E) = m Im[2iK/b] - n s Im[K'/b]; zero on the (n, m) eigencurve.
double periodicity_residual(complex energy, const WindingPair& w);

/// Im[2iK/b] / (s Im[K'/b]); +/-infinity when the denominator vanishes.
double winding_ratio(complex energy);

struct PeriodPrediction {
  double period;
  double imaginary_defect;  // |Im| of the closure time, zero on the curve
};

/// T = Re[(4mK + 2 s n i K') / (i b)] taken positive. Throws
/// ErrorCode::off_curve when |Im| >= 1e-6 T.
PeriodPrediction predicted_period(complex energy, const WindingPair& w);

/// Small-|E| straight-line asymptote E = r exp(+/- i pi (1 - 2m/n)).
complex asymptotic_seed(const WindingPair& w, double radius, HalfPlane half_plane);

}  // namespace eigenorbit::quartic
