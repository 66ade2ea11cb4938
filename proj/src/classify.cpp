#include "eigenorbit/classify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "eigenorbit/error.hpp"

namespace eigenorbit::classify {
namespace {

constexpr double kTangency = 1e-9;
constexpr int kBrentBits = 40;
constexpr int kSubdivisions = 4;     // dense evaluations per stored sample interval
constexpr double kFarField = 1e2;    // |x| beyond which a sample belongs to a far-field window
constexpr double kThroughInfinity = 1e-6;  // max |1/x| of a passage treated as going through infinity

std::string format_point(complex z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

double phase_distance(const dynamics::State& s, const dynamics::State& start) {
  return std::abs(s.x - start.x) + std::abs(s.v - start.v);
}

// Cyclic time: u in [delta, T + delta] maps to u or u - T, so the start of
// the period sits in the interior of the parameter range.
class CyclicOrbit {
 public:
  explicit CyclicOrbit(const dynamics::Trajectory& t) : traj_(t), t0_(t.times().front()), period_(t.end_time() - t0_) {}

  dynamics::State at(double u) const {
    double t = u;
    if (t > t0_ + period_) t -= period_;
    return traj_.state_at(std::clamp(t, t0_, t0_ + period_));
  }

 private:
  const dynamics::Trajectory& traj_;
  double t0_;
  double period_;
};

struct Grid {
  std::vector<double> u;
  std::vector<complex> x;
};

Grid dense_grid(const dynamics::Trajectory& traj, const CyclicOrbit& orbit) {
  const auto t = traj.times();
  const std::size_t n = t.size();
  const double period = traj.end_time() - t.front();
  const double delta = 1e-3 * std::min(t[1] - t[0], t[n - 1] - t[n - 2]);
  Grid g;
  auto add = [&](double u) {
    g.u.push_back(u);
    g.x.push_back(orbit.at(u).x);
  };
  add(t.front() + delta);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = i == 0 ? t.front() + delta : t[i];
    for (int k = 1; k <= kSubdivisions; ++k) add(a + (t[i + 1] - a) * k / kSubdivisions);
  }
  add(t.front() + period + delta);
  return g;
}

Grid sample_grid(const dynamics::Trajectory& traj) {
  Grid g;
  g.u.assign(traj.times().begin(), traj.times().end());
  g.x.assign(traj.positions().begin(), traj.positions().end());
  return g;
}

[[noreturn]] void ambiguous(const char* what, double line, double u) {
  std::ostringstream os;
  os.precision(6);
  os << what << " of the vertical line Re x = " << line << " at t = " << u
     << "; tighten the integration tolerance and re-run";
  throw Error(ErrorCode::ambiguous_crossing, os.str());
}

// Crossings of Re x = line along the grid, ignoring pairs that touch a
// skipped point; refined on the dense output when available.
int count_line(const Grid& g, const CyclicOrbit* orbit, double line, const std::vector<bool>& skip) {
  auto value = [&](std::size_t i) { return g.x[i].real() - line; };
  auto along = [&](double u) { return orbit->at(u).x.real() - line; };
  int count = 0;
  for (std::size_t i = 0; i + 1 < g.u.size(); ++i) {
    if (skip[i] || skip[i + 1]) continue;
    const double a = value(i);
    const double b = value(i + 1);
    if ((a < 0.0) != (b < 0.0)) {
      ++count;
      if (orbit == nullptr) {
        const complex d = g.x[i + 1] - g.x[i];
        if (std::abs(d.real()) < kTangency * std::abs(d)) ambiguous("tangential crossing", line, g.u[i]);
        continue;
      }
      boost::uintmax_t iters = 100;
      auto tol = boost::math::tools::eps_tolerance<double>(kBrentBits);
      const auto [r0, r1] = boost::math::tools::toms748_solve(along, g.u[i], g.u[i + 1], a, b, tol, iters);
      const dynamics::State s = orbit->at(0.5 * (r0 + r1));
      if (std::abs(s.v.real()) < kTangency * std::abs(s.v)) ambiguous("tangential crossing", line, 0.5 * (r0 + r1));
      continue;
    }
    // Grazing approach: a local minimum of |Re x - line| with no sign change.
    if (orbit == nullptr || i == 0 || skip[i - 1]) continue;
    const double prev = value(i - 1);
    if ((prev < 0.0) != (a < 0.0)) continue;
    if (!(std::abs(a) < std::abs(prev) && std::abs(a) <= std::abs(b))) continue;
    const double sign = a < 0.0 ? -1.0 : 1.0;
    const auto [u_min, g_min] = boost::math::tools::brent_find_minima(
        [&](double u) { return sign * along(u); }, g.u[i - 1], g.u[i + 1], kBrentBits);
    if (std::abs(g_min) < kTangency) ambiguous("grazing approach", line, u_min);
    if (g_min < 0.0) count += 2;
  }
  return count;
}

}  // namespace

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::periodic:
      return "periodic";
    case Verdict::open:
      return "open";
    case Verdict::undetermined:
      return "undetermined";
  }
  return "undetermined";
}

double default_closure_tolerance(double integrator_tol) { return 1e-4 * std::min(1.0, integrator_tol / 1e-10); }

Classification detect_periodicity(const PolynomialPotential& v, complex energy, complex x0, double horizon,
                                  const PeriodicityOptions& options) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::precondition, "classification horizon must be positive");
  Classification result;
  result.horizon = horizon;

  std::optional<dynamics::Trajectory> traj;
  try {
    traj.emplace(dynamics::integrate(v, energy, x0, horizon, options.integration));
  } catch (const Error& e) {
    result.cause = e.what();
    result.horizon = 0.0;
    return result;
  }

  const dynamics::State start = traj->start();
  const auto ts = traj->times();
  const auto xs = traj->positions();
  const auto vs = traj->velocities();
  std::vector<double> d(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) d[i] = phase_distance({xs[i], vs[i]}, start);

  double best = std::numeric_limits<double>::infinity();
  std::size_t departure = 0;  // first sample beyond the departure distance
  for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
    if (departure == 0) {
      if (d[i] > options.departure) departure = i;
      continue;
    }
    if (!(d[i] <= d[i - 1] && d[i] < d[i + 1])) continue;
    const auto [t_star, d_star] = boost::math::tools::brent_find_minima(
        [&](double t) { return phase_distance(traj->state_at(t), start); }, ts[i - 1], ts[i + 1], kBrentBits);
    best = std::min(best, d_star);
    if (d_star < options.closure_tol) {
      result.verdict = Verdict::periodic;
      result.period = t_star;
      result.closure_defect = d_star;
      if (v.degree() == 4) {
        try {
          const auto one_period = dynamics::integrate(v, energy, x0, t_star, options.integration);
          result.winding = winding_counts(one_period, turning_points(v, energy));
        } catch (const Error&) {
          // Layout not quartic-type or counts ambiguous: leave the pair unset.
        }
      }
      return result;
    }
  }
  if (!std::isfinite(best) && departure > 0) {
    // No interior minimum: report the closest post-departure sample.
    for (std::size_t i = departure; i < d.size(); ++i) best = std::min(best, d[i]);
  }
  result.closure_defect = std::isfinite(best) ? best : 0.0;

  if (traj->termination() == dynamics::Termination::escaped) {
    std::ostringstream os;
    os << "orbit escaped beyond |x| = " << options.integration.escape_radius << " at t = " << traj->end_time()
       << " without returning";
    result.cause = os.str();
    result.horizon = traj->end_time();
    return result;
  }
  result.verdict = Verdict::open;
  return result;
}

CrossingCounts crossing_counts(const dynamics::Trajectory& trajectory, const TurningPointSet& turning_points) {
  const auto& tp = turning_points.points;
  const bool simple = std::all_of(turning_points.multiplicities.begin(), turning_points.multiplicities.end(),
                                  [](int m) { return m == 1; });
  if (tp.size() != 4 || !simple || !(tp[1].real() < 0.0) || !(tp[2].real() > 0.0)) {
    throw Error(ErrorCode::precondition,
                "crossing counts need four simple turning points, two on each side of the imaginary axis");
  }
  if (trajectory.size() < 3) throw Error(ErrorCode::precondition, "trajectory has too few samples");

  const std::array<double, 2> midlines = {0.5 * (tp[0].real() + tp[1].real()), 0.5 * (tp[2].real() + tp[3].real())};

  std::optional<CyclicOrbit> orbit;
  Grid grid;
  if (trajectory.has_dense_output()) {
    orbit.emplace(trajectory);
    grid = dense_grid(trajectory, *orbit);
  } else {
    grid = sample_grid(trajectory);
  }
  const std::size_t n = grid.u.size();

  CrossingCounts counts;
  std::vector<bool> skip(n, false);
  if (orbit) {
    // Far-field windows: maximal runs of grid points with |x| > kFarField.
    for (std::size_t i = 0; i < n;) {
      if (std::abs(grid.x[i]) <= kFarField) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j + 1 < n && std::abs(grid.x[j + 1]) > kFarField) ++j;
      if (i == 0 || j + 1 == n) {
        throw Error(ErrorCode::precondition, "crossing counts need the period to start away from infinity");
      }
      const std::size_t entry = i - 1;
      const std::size_t exit = j + 1;
      const auto [u_far, w_min] = boost::math::tools::brent_find_minima(
          [&](double u) { return 1.0 / std::abs(orbit->at(u).x); }, grid.u[entry], grid.u[exit], kBrentBits);
      if (w_min < kThroughInfinity) {
        for (std::size_t k = i; k <= j; ++k) skip[k] = true;
        if ((grid.x[entry].real() < 0.0) != (grid.x[exit].real() < 0.0)) ++counts.axis;
        counts.midlines += 2;
      }
      i = j + 1;
    }
  }

  const CyclicOrbit* dense = orbit ? &*orbit : nullptr;
  counts.axis += count_line(grid, dense, 0.0, skip);
  for (double line : midlines) counts.midlines += count_line(grid, dense, line, skip);
  return counts;
}

WindingPair winding_counts(const dynamics::Trajectory& trajectory, const TurningPointSet& turning_points) {
  const CrossingCounts c = crossing_counts(trajectory, turning_points);
  try {
    return WindingPair(c.midlines, c.axis);
  } catch (const Error&) {
    throw Error(ErrorCode::admissibility, "crossing counts (midlines " + std::to_string(c.midlines) + ", axis " +
                                              std::to_string(c.axis) + ") do not form an admissible winding pair");
  }
}

SeparatrixPoint find_separatrix(const PolynomialPotential& v, complex energy, complex inside, complex outside,
                                double tol, const SeparatrixOptions& options) {
  if (!(tol > 0.0)) throw Error(ErrorCode::precondition, "separatrix tolerance must be positive");
  auto verdict_at = [&](complex x) { return detect_periodicity(v, energy, x, options.horizon, options.periodicity).verdict; };

  const Verdict vin = verdict_at(inside);
  if (vin != Verdict::periodic) {
    throw Error(ErrorCode::precondition, "separatrix start " + format_point(inside) + " classifies as " +
                                             std::string(to_string(vin)) + ", expected periodic");
  }
  const Verdict vout = verdict_at(outside);
  if (vout != Verdict::open) {
    throw Error(ErrorCode::precondition, "separatrix end " + format_point(outside) + " classifies as " +
                                             std::string(to_string(vout)) + ", expected open");
  }

  SeparatrixPoint r{.point = {}, .inside = inside, .outside = outside, .bisections = 0};
  while (std::abs(r.outside - r.inside) >= tol) {
    if (r.bisections >= options.max_bisections) break;
    const complex mid = 0.5 * (r.inside + r.outside);
    const Verdict vm = verdict_at(mid);
    ++r.bisections;
    if (vm == Verdict::periodic) {
      r.inside = mid;
    } else if (vm == Verdict::open) {
      r.outside = mid;
    } else {
      throw Error(ErrorCode::stall, "separatrix bisection stalled: midpoint " + format_point(mid) +
                                        " is undetermined; bracket [" + format_point(r.inside) + ", " +
                                        format_point(r.outside) + "]");
    }
  }
  if (std::abs(r.outside - r.inside) >= tol) {
    throw Error(ErrorCode::stall, "separatrix bisection did not reach the tolerance; bracket [" +
                                      format_point(r.inside) + ", " + format_point(r.outside) + "]");
  }
  r.point = 0.5 * (r.inside + r.outside);
  return r;
}

}  // namespace eigenorbit::classify
