#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "eigenorbit/potential.hpp"

namespace eigenorbit::dynamics {

using complex = std::complex<double>;

struct State {
  complex x;
  complex v;
};

/// Sign of the initial velocity v(0) = +/- sqrt(E - V(x0)) (principal root).
enum class Branch { plus, minus };

enum class Termination { completed, escaped };

struct IntegrationOptions {
  double tol = 1e-10;             // per-step local error bound
  double escape_radius = 50.0;    // |x| beyond which the run stops as escaped
  double max_sample_gap = 0.05;   // max distance between stored samples, in the active chart
  Branch branch = Branch::plus;
  std::size_t max_steps = 20'000'000;
  /// Quartic potentials only: continue through x = infinity in the chart
  /// w = 1/x, where w'^2 is a polynomial and the flow is regular. The escape
  /// radius is not applied while this is in effect.
  bool through_infinity = true;
};

/// Time-ordered samples of a complex orbit plus, for integrated orbits, the
/// piecewise dense interpolant of every accepted step.
class Trajectory {
 public:
  /// Interpolation data for one accepted Dormand-Prince step.
  struct Segment {
    double t0;
    double h;
    bool inverted;  // coefficients describe (w, w') with w = 1/x
    std::array<std::array<complex, 2>, 5> coeff;

    State at(double theta) const;
  };

  /// Builds a sampled trajectory (no dense output). Throws
  /// ErrorCode::precondition on length mismatch or non-increasing times.
  Trajectory(std::vector<double> times, std::vector<complex> positions, std::vector<complex> velocities,
             complex energy, PolynomialPotential potential);

  std::span<const double> times() const noexcept { return times_; }
  std::span<const complex> positions() const noexcept { return positions_; }
  std::span<const complex> velocities() const noexcept { return velocities_; }
  std::size_t size() const noexcept { return times_.size(); }
  complex energy() const noexcept { return energy_; }
  const PolynomialPotential& potential() const noexcept { return potential_; }
  Termination termination() const noexcept { return termination_; }
  double end_time() const noexcept { return times_.back(); }
  State start() const noexcept { return {positions_.front(), velocities_.front()}; }

  bool has_dense_output() const noexcept { return !segments_.empty(); }
  /// Dense-output state for t in [times().front(), end_time()].
  State state_at(double t) const;

 private:
  friend Trajectory integrate(const PolynomialPotential&, complex, complex, double, const IntegrationOptions&);
  friend Trajectory integrate_from(const PolynomialPotential&, State, double, const IntegrationOptions&);
  Trajectory(complex energy, PolynomialPotential potential);

  std::vector<double> times_;
  std::vector<complex> positions_;
  std::vector<complex> velocities_;
  std::vector<Segment> segments_;
  complex energy_;
  PolynomialPotential potential_;
  Termination termination_ = Termination::completed;
};

/// Integrates x'' = -V'(x)/2 from x0 with v0 = +/- sqrt(E - V(x0)).
Trajectory integrate(const PolynomialPotential& v, complex energy, complex x0, double t_max,
                     const IntegrationOptions& options = {});

/// Same, from an explicit phase-space start; the energy is v0^2 + V(x0).
Trajectory integrate_from(const PolynomialPotential& v, State start, double t_max,
                          const IntegrationOptions& options = {});

/// max over samples of |v^2 + V(x) - E|. Samples with |x| > 2 on a quartic
/// are measured in the w = 1/x chart as |w'^2 - P(w)|, P(w) = w^4 (E - V(1/w)),
/// which is the same residual scaled by |x|^-4.
double energy_drift(const Trajectory& trajectory);

}  // namespace eigenorbit::dynamics
