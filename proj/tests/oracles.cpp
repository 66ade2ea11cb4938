#include "oracles.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace oracle {

complex sn_by_ode(complex u, complex k, int steps, double blowup) {
  using State = std::array<complex, 3>;
  const complex k2 = k * k;
  const complex h = u / static_cast<double>(steps);
  auto f = [&](const State& y) -> State {
    return {y[1] * y[2], -y[0] * y[2], -k2 * y[0] * y[1]};
  };
  auto axpy = [](const State& y, complex a, const State& d) {
    return State{y[0] + a * d[0], y[1] + a * d[1], y[2] + a * d[2]};
  };
  State y{0.0, 1.0, 1.0};
  for (int i = 0; i < steps; ++i) {
    const State k1 = f(y);
    const State k2s = f(axpy(y, 0.5 * h, k1));
    const State k3 = f(axpy(y, 0.5 * h, k2s));
    const State k4 = f(axpy(y, h, k3));
    for (int j = 0; j < 3; ++j) y[j] += h / 6.0 * (k1[j] + 2.0 * k2s[j] + 2.0 * k3[j] + k4[j]);
    if (!(std::abs(y[0]) < blowup)) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
  }
  return y[0];
}

complex k_by_quadrature(complex m, int panels) {
  const double h = 0.5 * std::numbers::pi / panels;
  complex sum = 0.0;
  for (int i = 0; i <= panels; ++i) {
    const double s = std::sin(i * h);
    const complex term = 1.0 / std::sqrt(1.0 - m * s * s);
    sum += (i == 0 || i == panels) ? 0.5 * term : term;
  }
  return h * sum;
}

}  // namespace oracle
