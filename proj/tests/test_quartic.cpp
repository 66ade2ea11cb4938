#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "eigenorbit/error.hpp"
#include "eigenorbit/quartic.hpp"

using namespace eigenorbit;
using namespace eigenorbit::quartic;

namespace {

const complex kFig4(0.6725431089, 1.0);
const complex kFig5(1.5402880946, 1.0);

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an eigenorbit::Error");
  return ErrorCode::parse;
}

}  // namespace

TEST_CASE("winding pair") {
  CHECK(WindingPair(6, 2) == WindingPair(3, 1));
  CHECK(WindingPair(10, 4).n() == 5);
  CHECK(WindingPair(10, 4).m() == 2);
  CHECK(WindingPair(2, 1).ratio() == 2.0);
  CHECK(WindingPair(5, 0) == WindingPair(1, 0));
  CHECK(std::isinf(WindingPair(1, 0).ratio()));
  CHECK(code_of([] { WindingPair(1, 1); }) == ErrorCode::admissibility);
  CHECK(code_of([] { WindingPair(0, 0); }) == ErrorCode::admissibility);
  CHECK(code_of([] { WindingPair(3, -1); }) == ErrorCode::admissibility);
}

TEST_CASE("parameters at E = -1") {
  const QuarticParams p = quartic_params(-1.0);
  CHECK(std::abs(p.a_squared - 0.5 * (5.0 - std::sqrt(21.0))) < 1e-15);
  CHECK(std::abs(p.a - 0.456850) < 1e-6);
  CHECK(std::abs(p.b - 2.188901) < 1e-6);
}

TEST_CASE("parameter invariants") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const complex energy(coord(rng), coord(rng));
    const QuarticParams p = quartic_params(energy);
    CHECK(std::abs(p.a_squared + p.b_squared - 5.0) < 1e-12 * 5.0);
    CHECK(std::abs(p.a_squared * p.b_squared + energy) < 1e-12 * std::abs(energy));
    CHECK(std::abs(p.k.parameter() - p.a_squared / p.b_squared) < 1e-12 * std::abs(p.k.parameter()));
    CHECK(std::abs(p.k_prime * p.k_prime + p.k.parameter() - 1.0) < 1e-12);
    CHECK(p.k_prime.real() >= 0.0);
  }
}

TEST_CASE("small energies approach the decoupled limit") {
  const QuarticParams p = quartic_params(complex(1e-9, 1e-9));
  CHECK(std::abs(p.a) < 1e-4);
  CHECK(std::abs(p.b - std::sqrt(5.0)) < 1e-8);
  CHECK(std::abs(p.k.k()) < 1e-4);
}

TEST_CASE("degenerate energies") {
  CHECK(code_of([] { quartic_params(0.0); }) == ErrorCode::degenerate_energy);
  CHECK(code_of([] { quartic_params(-6.25); }) == ErrorCode::degenerate_energy);
  CHECK(code_of([] { periodicity_residual(complex(-6.25, 1e-11), WindingPair(3, 1)); }) ==
        ErrorCode::degenerate_energy);
  CHECK_NOTHROW(quartic_params(complex(-6.25, 1e-8)));
}

TEST_CASE("exact orbit starts at the origin") {
  for (const complex energy : {complex(-1.0), kFig4, complex(2.0, -3.0)}) {
    const ExactOrbit orbit(energy);
    CHECK(std::abs(orbit(0.0).x) < 1e-15);
    CHECK(std::abs(orbit(0.0).v - orbit.initial_velocity()) < 1e-14);
    CHECK(std::abs(orbit.initial_velocity() * orbit.initial_velocity() - energy) < 1e-13 * std::abs(energy));
    CHECK(exact_trajectory(energy, 0.0) == complex(0.0));
  }
}

TEST_CASE("exact orbit satisfies the energy equation") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coord(-4.0, 4.0);
  std::uniform_real_distribution<double> time(0.0, 10.0);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const complex energy(coord(rng), coord(rng));
    const double t = time(rng);
    const double h = 1e-6;
    try {
      const complex x = exact_trajectory(energy, t);
      if (std::abs(x) > 5.0) continue;  // finite differences lose accuracy near a pole
      const complex v = (exact_trajectory(energy, t + h) - exact_trajectory(energy, t - h)) / (2.0 * h);
      CHECK(std::abs(v * v + x * x * x * x - 5.0 * x * x - energy) < 1e-6 * (1.0 + std::abs(energy)));
      ++checked;
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::pole_proximity);
    }
  }
  CHECK(checked >= 80);
}

TEST_CASE("real negative energy gives a closed orbit") {
  const ExactOrbit orbit(-1.0);
  double best = 1e300;
  for (double t = 2.0; t <= 20.0; t += 1e-3) {
    const PhasePoint p = orbit(t);
    best = std::min(best, std::abs(p.x) + std::abs(p.v - orbit.initial_velocity()));
  }
  CHECK(best < 1e-2);  // sampling resolution; exact closure is checked at the period below
  const double period = predicted_period(-1.0, WindingPair(1, 0)).period;
  const PhasePoint back = orbit(period);
  CHECK(std::abs(back.x) + std::abs(back.v - orbit.initial_velocity()) < 1e-6);
  CHECK(std::abs(period - 2.0 * std::real(quartic_params(-1.0).K_prime / quartic_params(-1.0).b)) < 1e-12);
}

TEST_CASE("residual on the paper energies") {
  CHECK(std::abs(periodicity_residual(kFig4, WindingPair(3, 1))) < 1e-6);
  CHECK(std::abs(periodicity_residual(kFig5, WindingPair(5, 2))) < 1e-6);
  CHECK(std::abs(periodicity_residual(complex(-0.8529588246, 1.0), WindingPair(8, 1))) < 1e-6);
  CHECK(std::abs(periodicity_residual(complex(-0.1449845955, 1.0), WindingPair(14, 3))) < 1e-6);
  CHECK(std::abs(periodicity_residual(kFig4, WindingPair(5, 2))) > 1e-2);
}

TEST_CASE("closure numerator identity") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  for (int i = 0; i < 30; ++i) {
    const complex energy(coord(rng), coord(rng));
    const QuarticParams p = quartic_params(energy);
    CHECK(std::abs(closure_terms(energy).numerator - 2.0 * (p.K / p.b).real()) < 1e-12);
  }
}

TEST_CASE("ratio on the real axis") {
  CHECK(std::abs(winding_ratio(1.0) - 2.0) < 1e-8);
  CHECK(std::abs(winding_ratio(3.7) - 2.0) < 1e-8);
  for (const double e : {-1.0, -3.0, -0.2}) {
    const ClosureTerms terms = closure_terms(e);
    CHECK(std::abs(terms.denominator) < 1e-14);
    CHECK(std::abs(terms.numerator) > 0.1);
  }
  CHECK(std::abs(winding_ratio(complex(-1.0, 1e-9))) > 1e6);
}

TEST_CASE("conjugate symmetry of the residual") {
  for (const auto& [energy, w] : {std::pair{kFig4, WindingPair(3, 1)}, std::pair{kFig5, WindingPair(5, 2)}}) {
    CHECK(std::abs(periodicity_residual(std::conj(energy), w)) < 1e-6);
  }
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> coord(-4.0, 4.0);
  for (int i = 0; i < 20; ++i) {
    const complex energy(coord(rng), std::abs(coord(rng)) + 0.1);
    CHECK(std::abs(periodicity_residual(energy, WindingPair(4, 1)) -
                   periodicity_residual(std::conj(energy), WindingPair(4, 1))) < 1e-10);
  }
}

TEST_CASE("predicted period closes the exact orbit") {
  const WindingPair w(3, 1);
  const PeriodPrediction pred = predicted_period(kFig4, w);
  CHECK(pred.period > 0.0);
  CHECK(pred.imaginary_defect < 1e-6 * pred.period);
  const ExactOrbit orbit(kFig4);
  CHECK(std::abs(orbit(pred.period).x) < 1e-5);
  CHECK(code_of([] { predicted_period(complex(-1.0, -1.0), WindingPair(3, 1)); }) == ErrorCode::off_curve);
}

TEST_CASE("same energy, doubled winding gives a commensurate period") {
  const double single = predicted_period(kFig4, WindingPair(3, 1)).period;
  // A (6, 2) closure is the same reduced pair; its unreduced period is twice as long.
  const QuarticParams p = quartic_params(kFig4);
  const complex doubled = (8.0 * p.K + 12.0 * complex(0, 1) * p.K_prime) / (complex(0, 1) * p.b);
  CHECK(std::abs(std::abs(doubled.real()) / single - 2.0) < 1e-9);
  const ExactOrbit orbit(kFig4);
  CHECK(std::abs(orbit(std::abs(doubled.real())).x) < 1e-5);
}

TEST_CASE("asymptotic seeds") {
  const complex seed = asymptotic_seed(WindingPair(3, 1), 1e-3, HalfPlane::upper);
  CHECK(std::abs(std::arg(seed) - std::numbers::pi / 3) < 1e-14);
  CHECK(std::abs(std::abs(seed) - 1e-3) < 1e-18);
  CHECK(std::abs(std::arg(asymptotic_seed(WindingPair(2, 1), 1e-3, HalfPlane::upper))) < 1e-14);
  CHECK(std::abs(std::arg(asymptotic_seed(WindingPair(3, 1), 1e-3, HalfPlane::lower)) + std::numbers::pi / 3) < 1e-14);
  CHECK(code_of([] { asymptotic_seed(WindingPair(1, 1), 1e-3, HalfPlane::upper); }) == ErrorCode::admissibility);
}

TEST_CASE("seeds sit closer to the curve than rotated points") {
  for (const WindingPair w : {WindingPair(3, 1), WindingPair(4, 1), WindingPair(5, 2)}) {
    const complex seed = asymptotic_seed(w, 1e-4, HalfPlane::upper);
    const complex rotated = seed * std::polar(1.0, 0.1);
    CHECK(std::abs(periodicity_residual(seed, w)) < std::abs(periodicity_residual(rotated, w)));
  }
}
