#include "eigenorbit/quartic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "eigenorbit/error.hpp"

namespace eigenorbit::quartic {
namespace {

constexpr double kDegeneracyRadius = 1e-10;
constexpr double kOffCurveTolerance = 1e-6;

const complex I(0.0, 1.0);

double half_plane_sign(complex energy) { return energy.imag() < 0.0 ? -1.0 : 1.0; }

// K(k') with the convention that a real energy is the limit from Im E > 0.
// For real E > 0 the parameter 1 - k^2 sits on the cut, approached from above.
complex complementary_k(complex m) {
  return elliptic::complete_elliptic_k_parameter(1.0 - m, elliptic::CutSide::upper);
}

}  // namespace

WindingPair::WindingPair(int n, int m) {
  if (n < 1 || m < 0 || n < 2 * m) {
    throw Error(ErrorCode::admissibility, "winding pair (" + std::to_string(n) + ", " +
                                              std::to_string(m) + ") violates n >= 2m, n >= 1, m >= 0");
  }
  const int g = std::gcd(n, m);
  n_ = n / g;
  m_ = m / g;
}

double WindingPair::ratio() const noexcept {
  return m_ == 0 ? std::numeric_limits<double>::infinity() : static_cast<double>(n_) / m_;
}

QuarticParams quartic_params(complex energy, double well) {
  if (std::abs(energy) < kDegeneracyRadius) {
    throw Error(ErrorCode::degenerate_energy, "degenerate energy E = 0: inner turning points collide (a = 0)");
  }
  if (std::abs(energy + 0.25 * well * well) < kDegeneracyRadius) {
    throw Error(ErrorCode::degenerate_energy,
                "degenerate energy E = -c^2/4: turning points collide (a = b)");
  }
  const complex disc = std::sqrt(well * well + 4.0 * energy);
  const complex a2 = 0.5 * (well - disc);
  const complex b2 = 0.5 * (well + disc);
  const complex m = a2 / b2;
  auto k = elliptic::Modulus::from_parameter(m);
  return QuarticParams{
      .a_squared = a2,
      .b_squared = b2,
      .a = std::sqrt(a2),
      .b = std::sqrt(b2),
      .k = k,
      .k_prime = k.complementary(),
      .K = elliptic::complete_elliptic_k(k),
      .K_prime = complementary_k(m),
  };
}

ExactOrbit::ExactOrbit(complex energy, double well)
    : energy_(energy), params_(quartic_params(energy, well)), sn_(params_.k) {}

PhasePoint ExactOrbit::operator()(double t) const {
  const complex scale = I * params_.b;
  const auto [sn, cn, dn] = sn_(scale * t);
  return {params_.a * sn, params_.a * scale * cn * dn};
}

complex ExactOrbit::initial_velocity() const noexcept { return I * params_.a * params_.b; }

complex exact_trajectory(complex energy, double t, double well) { return ExactOrbit(energy, well)(t).x; }

ClosureTerms closure_terms(complex energy) {
  const QuarticParams p = quartic_params(energy);
  return {(2.0 * I * p.K / p.b).imag(), half_plane_sign(energy) * (p.K_prime / p.b).imag()};
}

double periodicity_residual(complex energy, const WindingPair& w) {
  const ClosureTerms terms = closure_terms(energy);
  return w.m() * terms.numerator - w.n() * terms.denominator;
}

double winding_ratio(complex energy) {
  const ClosureTerms terms = closure_terms(energy);
  if (terms.denominator == 0.0) {
    return std::copysign(std::numeric_limits<double>::infinity(), terms.numerator);
  }
  return terms.numerator / terms.denominator;
}

PeriodPrediction predicted_period(complex energy, const WindingPair& w) {
  const QuarticParams p = quartic_params(energy);
  const double s = half_plane_sign(energy);
  const complex closure = (4.0 * w.m() * p.K + 2.0 * s * w.n() * I * p.K_prime) / (I * p.b);
  const double period = std::abs(closure.real());
  const double defect = std::abs(closure.imag());
  if (!(defect < kOffCurveTolerance * period)) {
    std::ostringstream os;
    os.precision(3);
    os << "energy is off the (" << w.n() << ", " << w.m() << ") eigencurve: closure time has imaginary part "
       << std::scientific << defect << " against period " << period;
    throw Error(ErrorCode::off_curve, os.str());
  }
  return {period, defect};
}

complex asymptotic_seed(const WindingPair& w, double radius, HalfPlane half_plane) {
  if (!(radius > 0.0)) throw Error(ErrorCode::precondition, "seed radius must be positive");
  const double angle = std::numbers::pi * (1.0 - 2.0 * w.m() / static_cast<double>(w.n()));
  return std::polar(radius, half_plane == HalfPlane::upper ? angle : -angle);
}

}  // namespace eigenorbit::quartic
