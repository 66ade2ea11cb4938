#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "eigenorbit/quartic.hpp"

namespace eigenorbit::eigencurve {

using complex = std::complex<double>;
using quartic::HalfPlane;
using quartic::WindingPair;

/// One-real-parameter slice of the energy plane on which refine_energy
/// searches. The free coordinate is Re E, Im E or |E| respectively.
enum class Slice { fixed_im, fixed_re, fixed_arg };

/// Zero of the periodicity residual on a slice, |f| < 1e-10. Safeguarded
/// secant on the free coordinate, falling back to bisection once a sign
/// change is bracketed. Throws ErrorCode::basin after 100 iterations and
/// ErrorCode::degenerate_energy if the iteration lands on E = 0 or E = -c^2/4.
complex refine_energy(complex guess, const WindingPair& w, Slice slice, double value);

/// Same search on the line origin + s * direction, starting from s = s0.
/// `max_move` caps |s - s0| (trust region); exceeding it throws basin.
complex refine_on_line(const WindingPair& w, complex origin, complex direction, double s0,
                       double max_move);

enum class TraceStatus {
  reached_radius,  // last point has |E| >= max_radius
  degenerate,      // stopped at a turning-point collision
};

struct Eigencurve {
  WindingPair winding;
  std::vector<complex> points;  // ordered along the curve, starting near E = 0
  std::vector<double> residuals;
  TraceStatus status = TraceStatus::reached_radius;
  double step = 0.0;  // configured step; consecutive points are closer than this
};

struct TraceOptions {
  double seed_radius = 1e-3;
  double min_step = 1e-6;
  HalfPlane half_plane = HalfPlane::upper;
};

/// Arc-length continuation of the (n, m) curve from the small-|E|
/// asymptote out to |E| >= max_radius. Each step predicts along the secant
/// through the two latest points and corrects on the normal line; a failed
/// or jumping correction halves the step. Throws ErrorCode::stall when the
/// step falls below options.min_step.
Eigencurve trace_curve(const WindingPair& w, double max_radius, double step,
                       const TraceOptions& options = {});

/// Linear interpolation of the polyline where it first crosses |E| = radius.
std::optional<complex> point_at_radius(const Eigencurve& curve, double radius);

/// Distance from z to the polyline.
double distance_to_polyline(const Eigencurve& curve, complex z);

}  // namespace eigenorbit::eigencurve
