#include "eigenorbit/eigencurve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eigenorbit/error.hpp"

namespace eigenorbit::eigencurve {
namespace {

constexpr double kResidualTol = 1e-10;
constexpr int kMaxIterations = 100;

// Predictor length and corrector reach as fractions of the step, chosen so
// that consecutive points stay closer than the step: 0.85 * sqrt(1 + 0.5^2) < 1.
constexpr double kPredictorFraction = 0.85;
constexpr double kCorrectorReach = 0.5;
constexpr double kMinTurnCosine = 0.9;

const complex I(0.0, 1.0);

std::string describe(complex z) {
  std::ostringstream os;
  os.precision(10);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

}  // namespace

complex refine_on_line(const WindingPair& w, complex origin, complex direction, double s0,
                       double max_move) {
  direction /= std::abs(direction);
  auto at = [&](double s) { return origin + s * direction; };
  auto f = [&](double s) { return quartic::periodicity_residual(at(s), w); };

  double s_prev = s0;
  double f_prev = f(s0);
  if (std::abs(f_prev) < kResidualTol) return at(s0);

  double s = s0 + 1e-4 * std::max(std::abs(at(s0)), 1e-12);
  double fs = f(s);

  // Sign-change bracket, once one is known.
  bool bracketed = false;
  double lo = 0.0, hi = 0.0, f_lo = 0.0;
  auto update_bracket = [&](double a, double fa, double b, double fb) {
    if (fa == 0.0 || fb == 0.0 || (fa < 0.0) == (fb < 0.0)) return;
    if (bracketed && std::abs(b - a) >= std::abs(hi - lo)) return;
    bracketed = true;
    lo = a;
    hi = b;
    f_lo = fa;
  };
  update_bracket(s_prev, f_prev, s, fs);

  for (int it = 0; it < kMaxIterations; ++it) {
    if (std::abs(fs) < kResidualTol) return at(s);

    double next = std::numeric_limits<double>::quiet_NaN();
    if (fs != f_prev) next = s - fs * (s - s_prev) / (fs - f_prev);
    const bool inside = bracketed && next > std::min(lo, hi) && next < std::max(lo, hi);
    if (bracketed && !inside) next = 0.5 * (lo + hi);
    if (!std::isfinite(next)) {
      throw Error(ErrorCode::basin, "secant stagnated near E = " + describe(at(s)));
    }
    if (std::abs(next - s0) > max_move) {
      throw Error(ErrorCode::basin, "refinement left the search region around E = " + describe(at(s0)));
    }

    const double f_next = f(next);
    if (bracketed) {
      // Keep the half that still changes sign.
      if ((f_next < 0.0) == (f_lo < 0.0)) {
        lo = next;
        f_lo = f_next;
      } else {
        hi = next;
      }
    } else {
      update_bracket(s, fs, next, f_next);
    }
    s_prev = s;
    f_prev = fs;
    s = next;
    fs = f_next;
  }
  throw Error(ErrorCode::basin, "no convergence in " + std::to_string(kMaxIterations) +
                                    " iterations from E = " + describe(at(s0)) + " (last |f| = " +
                                    std::to_string(std::abs(fs)) + ")");
}

complex refine_energy(complex guess, const WindingPair& w, Slice slice, double value) {
  switch (slice) {
    case Slice::fixed_im:
      return refine_on_line(w, complex(0.0, value), 1.0, guess.real(), 0.5 * (1.0 + std::abs(guess)));
    case Slice::fixed_re:
      return refine_on_line(w, complex(value, 0.0), I, guess.imag(), 0.5 * (1.0 + std::abs(guess)));
    case Slice::fixed_arg: {
      const double r = std::abs(guess);
      if (!(r > 0.0)) throw Error(ErrorCode::precondition, "fixed-argument refinement needs a nonzero guess");
      return refine_on_line(w, 0.0, std::polar(1.0, value), r, 0.9 * r);
    }
  }
  throw Error(ErrorCode::precondition, "unknown slice");
}

Eigencurve trace_curve(const WindingPair& w, double max_radius, double step, const TraceOptions& options) {
  if (!(step > 0.0)) throw Error(ErrorCode::precondition, "trace step must be positive");
  if (!(max_radius > options.seed_radius)) {
    throw Error(ErrorCode::precondition, "max radius must exceed the seed radius");
  }

  Eigencurve curve{.winding = w, .points = {}, .residuals = {}, .status = TraceStatus::reached_radius, .step = step};
  auto push = [&](complex e) {
    curve.points.push_back(e);
    curve.residuals.push_back(quartic::periodicity_residual(e, w));
  };

  // Seed: the straight-line asymptote, corrected across the ray.
  const complex seed = quartic::asymptotic_seed(w, options.seed_radius, options.half_plane);
  const complex radial = seed / std::abs(seed);
  push(refine_on_line(w, seed, I * radial, 0.0, 0.5 * options.seed_radius));

  double h = step;
  while (std::abs(curve.points.back()) < max_radius) {
    const complex last = curve.points.back();
    complex tangent = radial;
    if (curve.points.size() > 1) {
      const complex chord = last - curve.points[curve.points.size() - 2];
      tangent = chord / std::abs(chord);
    }
    const complex predicted = last + kPredictorFraction * h * tangent;

    complex next;
    bool accepted = false;
    try {
      next = refine_on_line(w, predicted, I * tangent, 0.0, kCorrectorReach * kPredictorFraction * h);
      const complex chord = next - last;
      const double turn = (std::conj(tangent) * chord).real() / std::abs(chord);
      accepted = turn > kMinTurnCosine;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::degenerate_energy) {
        curve.status = TraceStatus::degenerate;
        break;
      }
      if (e.code() != ErrorCode::basin) throw;
    }

    if (!accepted) {
      h *= 0.5;
      if (h < options.min_step) {
        throw Error(ErrorCode::stall, "continuation of the (" + std::to_string(w.n()) + ", " +
                                          std::to_string(w.m()) + ") curve stalled near E = " +
                                          describe(last));
      }
      continue;
    }
    push(next);
    h = std::min(step, 1.5 * h);
  }
  return curve;
}

std::optional<complex> point_at_radius(const Eigencurve& curve, double radius) {
  const auto& p = curve.points;
  for (std::size_t i = 1; i < p.size(); ++i) {
    const double r0 = std::abs(p[i - 1]);
    const double r1 = std::abs(p[i]);
    if ((r0 - radius) * (r1 - radius) <= 0.0 && r0 != r1) {
      const double lambda = (radius - r0) / (r1 - r0);
      return p[i - 1] + lambda * (p[i] - p[i - 1]);
    }
  }
  return std::nullopt;
}

double distance_to_polyline(const Eigencurve& curve, complex z) {
  const auto& p = curve.points;
  if (p.empty()) return std::numeric_limits<double>::infinity();
  double best = std::abs(z - p.front());
  for (std::size_t i = 1; i < p.size(); ++i) {
    const complex d = p[i] - p[i - 1];
    const double len2 = std::norm(d);
    double lambda = len2 > 0.0 ? (std::conj(d) * (z - p[i - 1])).real() / len2 : 0.0;
    lambda = std::clamp(lambda, 0.0, 1.0);
    best = std::min(best, std::abs(z - (p[i - 1] + lambda * d)));
  }
  return best;
}

}  // namespace eigenorbit::eigencurve
