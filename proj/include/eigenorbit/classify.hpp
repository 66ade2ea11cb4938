#pragma once

#include <complex>
#include <optional>
#include <string>

#include "eigenorbit/dynamics.hpp"
#include "eigenorbit/potential.hpp"
#include "eigenorbit/quartic.hpp"

namespace eigenorbit::classify {

using complex = std::complex<double>;
using quartic::WindingPair;

enum class Verdict { periodic, open, undetermined };

std::string_view to_string(Verdict verdict);

struct Classification {
  Verdict verdict = Verdict::undetermined;
  std::optional<double> period;
  std::optional<WindingPair> winding;  // set for periodic orbits with a quartic-type layout
  double closure_defect = 0.0;         // smallest phase-space return distance examined
  double horizon = 0.0;                // time span actually searched
  std::string cause;                   // why the verdict is undetermined
};

/// Closure tolerance matched to the integrator tolerance: 1e-4 at the
/// default 1e-10, scaled down proportionally for tighter runs.
double default_closure_tolerance(double integrator_tol);

struct PeriodicityOptions {
  double closure_tol = 1e-4;
  dynamics::IntegrationOptions integration{};
  /// The orbit must first move this far from its start (phase-space
  /// distance) before returns are examined.
  double departure = 1e-2;
};

/// Integrates from x0 for `horizon` and looks for the earliest return to the
/// starting phase point, |x - x0| + |v - v0| < closure_tol, refining each
/// local minimum of the sampled distance on the dense output. Integration
/// failures and escapes before the horizon give `undetermined`.
Classification detect_periodicity(const PolynomialPotential& v, complex energy, complex x0, double horizon,
                                  const PeriodicityOptions& options = {});

struct CrossingCounts {
  int axis = 0;      // sign changes of Re x
  int midlines = 0;  // crossings of the two vertical lines through the turning-point pairs
};

/// Crossing counts over one period. The trajectory must span exactly one
/// period (its end state equal to its start); counting is cyclic.
///
/// The four turning points must split two and two across the imaginary
/// axis. Each midline is the full vertical line at the mean real part of
/// one pair. With dense output every sign change is located by root
/// finding and grazing approaches are resolved by minimisation; a crossing
/// whose transversal speed is below 1e-9 |v|, or a graze within 1e-9 of a
/// line, throws ErrorCode::ambiguous_crossing. A passage through x =
/// infinity (where every vertical line meets) counts as one axis crossing
/// when Re x changes sign across it, plus two midline crossings, which is
/// the count of every neighbouring orbit. A libration covers its arc twice
/// per period, so its raw counts are twice those of the drawn curve.
CrossingCounts crossing_counts(const dynamics::Trajectory& trajectory, const TurningPointSet& turning_points);

/// crossing_counts reduced to a winding pair (n, m) = (midlines, axis) / gcd.
WindingPair winding_counts(const dynamics::Trajectory& trajectory, const TurningPointSet& turning_points);

struct SeparatrixOptions {
  double horizon = 200.0;
  PeriodicityOptions periodicity{};
  int max_bisections = 60;
};

struct SeparatrixPoint {
  complex point;    // midpoint of the final bracket
  complex inside;   // periodic end of the final bracket
  complex outside;  // open end
  int bisections = 0;
};

/// Bisects [inside, outside] until the bracket is shorter than tol.
/// Throws ErrorCode::precondition unless `inside` classifies periodic and
/// `outside` open; an undetermined midpoint throws ErrorCode::stall with the
/// current bracket in the message.
SeparatrixPoint find_separatrix(const PolynomialPotential& v, complex energy, complex inside, complex outside,
                                double tol, const SeparatrixOptions& options = {});

}  // namespace eigenorbit::classify
