#include "eigenorbit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eigenorbit/error.hpp"

namespace eigenorbit::dynamics {
namespace {

using Vec = std::array<complex, 2>;

Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1]}; }
Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1]}; }
Vec operator*(double s, const Vec& a) { return {s * a[0], s * a[1]}; }

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer & Wanner, DOPRI5 dense output).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

// PI controller constants.
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - 0.75 * kBeta;
constexpr double kMaxShrink = 5.0;  // h_new >= h / 5
constexpr double kMaxGrow = 10.0;   // h_new <= 10 h

// Right-hand sides of x'' = -V'(x)/2 and, for quartics, of the inverted
// chart w = 1/x: w'^2 = P(w) = (E - c0) w^4 - c1 w^3 - c2 w^2 - c3 w - c4,
// hence w'' = P'(w)/2.
class Flow {
 public:
  Flow(const PolynomialPotential& v, complex energy, bool invertible)
      : slope_(v.derivative()), invertible_(invertible) {
    if (invertible_) {
      const auto c = v.coefficients();
      inverted_ = Polynomial({-c[4], -c[3], -c[2], -c[1], energy - c[0]}).derivative();
    }
  }

  bool invertible() const noexcept { return invertible_; }

  Vec operator()(const Vec& y, bool inverted) const {
    if (inverted) return {y[1], 0.5 * inverted_(y[0])};
    return {y[1], -0.5 * slope_(y[0])};
  }

 private:
  Polynomial slope_;
  Polynomial inverted_;
  bool invertible_;
};

constexpr double kInvertAbove = 4.0;  // switch x -> 1/x when |x| exceeds this
constexpr double kRevertAbove = 0.5;  // switch back when |w| exceeds this

Vec invert(const Vec& y) {
  const complex w = 1.0 / y[0];
  return {w, -y[1] * w * w};
}

// Error per unit step: the local bound is tol * min(1, h), so the global
// error grows at most like tol * t.
double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double tol, double h) {
  double sum = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    const double scale = tol * std::min(1.0, h) * (1.0 + std::max(std::abs(y0[i]), std::abs(y1[i])));
    const double r = std::abs(err[i]) / scale;
    sum += r * r;
  }
  return std::sqrt(0.5 * sum);
}

}  // namespace

State Trajectory::Segment::at(double theta) const {
  const double theta1 = 1.0 - theta;
  State s;
  complex* out[2] = {&s.x, &s.v};
  for (std::size_t i = 0; i < 2; ++i) {
    *out[i] = coeff[0][i] +
              theta * (coeff[1][i] + theta1 * (coeff[2][i] + theta * (coeff[3][i] + theta1 * coeff[4][i])));
  }
  if (inverted) {
    const complex x = 1.0 / s.x;
    return {x, -s.v * x * x};
  }
  return s;
}

Trajectory::Trajectory(complex energy, PolynomialPotential potential)
    : energy_(energy), potential_(std::move(potential)) {}

Trajectory::Trajectory(std::vector<double> times, std::vector<complex> positions,
                       std::vector<complex> velocities, complex energy, PolynomialPotential potential)
    : times_(std::move(times)),
      positions_(std::move(positions)),
      velocities_(std::move(velocities)),
      energy_(energy),
      potential_(std::move(potential)) {
  if (times_.empty() || times_.size() != positions_.size() || times_.size() != velocities_.size()) {
    throw Error(ErrorCode::precondition, "trajectory sample lists must be non-empty and of equal length");
  }
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw Error(ErrorCode::precondition, "trajectory times must be strictly increasing");
    }
  }
}

State Trajectory::state_at(double t) const {
  if (segments_.empty()) throw Error(ErrorCode::precondition, "trajectory has no dense output");
  if (t < times_.front() || t > end_time()) {
    throw Error(ErrorCode::precondition, "dense output requested outside the integrated interval");
  }
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double value, const Segment& s) { return value < s.t0; });
  const Segment& seg = it == segments_.begin() ? *it : *std::prev(it);
  return seg.at(std::clamp((t - seg.t0) / seg.h, 0.0, 1.0));
}

namespace {

bool inverts(const PolynomialPotential& v, const IntegrationOptions& options) {
  return options.through_infinity && v.degree() == 4;
}

}  // namespace

Trajectory integrate(const PolynomialPotential& v, complex energy, complex x0, double t_max,
                     const IntegrationOptions& options) {
  complex v0 = std::sqrt(energy - v(x0));
  if (options.branch == Branch::minus) v0 = -v0;
  Trajectory out = integrate_from(v, {x0, v0}, t_max, options);
  // Keep the caller's energy rather than the rounded v0^2 + V(x0).
  out.energy_ = energy;
  return out;
}

Trajectory integrate_from(const PolynomialPotential& v, State start, double t_max,
                          const IntegrationOptions& options) {
  if (!(t_max > 0.0)) throw Error(ErrorCode::precondition, "t_max must be positive");
  if (!(options.tol > 0.0)) throw Error(ErrorCode::precondition, "tol must be positive");

  const complex energy = start.v * start.v + v(start.x);
  Trajectory traj(energy, v);
  const Flow flow(v, energy, inverts(v, options));
  const double tol = options.tol;

  bool inverted = false;
  Vec y{start.x, start.v};
  if (flow.invertible() && std::abs(y[0]) > kInvertAbove) {
    y = invert(y);
    inverted = true;
  }
  Vec k1 = flow(y, inverted);
  double t = 0.0;

  traj.times_.push_back(t);
  traj.positions_.push_back(start.x);
  traj.velocities_.push_back(start.v);

  // Initial step from the local time scale of the flow.
  const double speed = std::abs(k1[0]) + std::abs(k1[1]);
  double h = std::min({t_max, 0.1, speed > 0.0 ? 0.01 * (1.0 + std::abs(y[0])) / speed : 0.1});
  h = std::max(h, 1e-8);
  double facold = 1e-4;
  bool rejected = false;

  for (std::size_t step = 0; t < t_max; ++step) {
    if (step >= options.max_steps) {
      throw Error(ErrorCode::stiffness, "integrator exceeded the maximum number of steps");
    }
    if (h < 1e-12 * std::max(1.0, std::abs(t))) {
      std::ostringstream os;
      os << "integrator step size collapsed to " << h << " at t = " << t;
      throw Error(ErrorCode::stiffness, os.str());
    }
    const bool last = t + h >= t_max;
    if (last) h = t_max - t;

    auto f = [&](const Vec& z) { return flow(z, inverted); };
    const Vec k2 = f(y + (h * a21) * k1);
    const Vec k3 = f(y + h * (a31 * k1 + a32 * k2));
    const Vec k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const Vec k7 = f(y1);
    const Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = error_norm(err, y, y1, tol, h);

    const double fac11 = std::pow(std::max(en, 1e-300), kExpo);
    if (!(en <= 1.0)) {
      h /= std::min(kMaxShrink, fac11 / kSafety);
      rejected = true;
      continue;
    }

    double fac = fac11 / std::pow(facold, kBeta);
    fac = std::clamp(fac / kSafety, 1.0 / kMaxGrow, kMaxShrink);
    double h_new = h / fac;
    if (rejected) h_new = std::min(h_new, h);
    facold = std::max(en, 1e-4);
    rejected = false;

    Trajectory::Segment seg{t, h, inverted, {}};
    const Vec diff = y1 - y;
    const Vec bspl = h * k1 - diff;
    seg.coeff[0] = y;
    seg.coeff[1] = diff;
    seg.coeff[2] = bspl;
    seg.coeff[3] = diff - h * k7 - bspl;
    seg.coeff[4] = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
    traj.segments_.push_back(seg);

    // Subdivide so that stored samples are closer than max_sample_gap in the
    // active chart.
    double vmax = std::max(std::abs(y[1]), std::abs(y1[1]));
    for (double theta : {0.25, 0.5, 0.75}) {
      Trajectory::Segment local = seg;
      local.inverted = false;
      vmax = std::max(vmax, std::abs(local.at(theta).v));
    }
    const double sub = std::ceil(vmax * h / (0.8 * options.max_sample_gap));
    const int pieces = static_cast<int>(std::clamp(sub, 1.0, 1e6));
    for (int j = 1; j <= pieces; ++j) {
      const double theta = static_cast<double>(j) / pieces;
      const State s = j == pieces ? seg.at(1.0) : seg.at(theta);
      traj.times_.push_back(j == pieces && last ? t_max : t + theta * h);
      traj.positions_.push_back(s.x);
      traj.velocities_.push_back(s.v);
    }

    t = last ? t_max : t + h;
    y = y1;
    k1 = k7;
    if (flow.invertible()) {
      if (!inverted && std::abs(y[0]) > kInvertAbove) {
        y = invert(y);
        inverted = true;
        k1 = flow(y, inverted);
      } else if (inverted && std::abs(y[0]) > kRevertAbove) {
        y = invert(y);
        inverted = false;
        k1 = flow(y, inverted);
      }
    } else if (std::abs(y[0]) > options.escape_radius) {
      traj.termination_ = Termination::escaped;
      break;
    }
    h = h_new;
  }
  return traj;
}

double energy_drift(const Trajectory& trajectory) {
  if (trajectory.size() == 0) throw Error(ErrorCode::precondition, "empty trajectory");
  const PolynomialPotential& v = trajectory.potential();
  const complex energy = trajectory.energy();
  Polynomial inverted;
  if (v.degree() == 4) {
    const auto c = v.coefficients();
    inverted = Polynomial({-c[4], -c[3], -c[2], -c[1], energy - c[0]});
  }
  double drift = 0.0;
  const auto xs = trajectory.positions();
  const auto vs = trajectory.velocities();
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    double residual;
    if (v.degree() == 4 && std::abs(xs[i]) > 2.0) {
      const complex w = 1.0 / xs[i];
      const complex wdot = -vs[i] * w * w;
      residual = std::abs(wdot * wdot - inverted(w));
    } else {
      residual = std::abs(vs[i] * vs[i] + v(xs[i]) - energy);
    }
    drift = std::max(drift, residual);
  }
  return drift;
}

}  // namespace eigenorbit::dynamics
