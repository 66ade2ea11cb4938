#include "eigenorbit/elliptic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "eigenorbit/error.hpp"

namespace eigenorbit::elliptic {
namespace {

constexpr int kMaxAgmIterations = 64;
constexpr double kAgmTolerance = 1e-14;
constexpr double kLandenCutoff = 1e-12;
constexpr double kPoleDistance = 1e-6;

bool on_cut(complex m) { return m.imag() == 0.0 && m.real() >= 1.0; }

std::string describe(complex z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

}  // namespace

Modulus::Modulus(complex k) : Modulus(k, k * k) {}

Modulus::Modulus(complex k, complex m) : k_(k), m_(m), kprime_(std::sqrt(1.0 - m)) {
  if (on_cut(m_)) {
    throw Error(ErrorCode::branch_cut,
                "elliptic parameter k^2 = " + describe(m_) + " lies on the cut [1, inf)");
  }
}

Modulus Modulus::from_parameter(complex m) { return Modulus(std::sqrt(m), m); }

complex agm(complex a, complex b) {
  if (a == 0.0 || b == 0.0) {
    throw Error(ErrorCode::precondition, "agm requires nonzero arguments");
  }
  for (int i = 0; i < kMaxAgmIterations; ++i) {
    if (std::abs(a - b) < kAgmTolerance * std::abs(a)) return a;
    const complex mean = 0.5 * (a + b);
    complex geo = std::sqrt(a * b);
    if (std::abs(mean - geo) > std::abs(mean + geo)) geo = -geo;
    a = mean;
    b = geo;
  }
  throw Error(ErrorCode::divergence,
              "agm did not converge in 64 iterations (a = " + describe(a) +
                  ", b = " + describe(b) + ")");
}

complex complete_elliptic_k(const Modulus& k) {
  return std::numbers::pi / (2.0 * agm(1.0, k.complementary()));
}

complex complete_elliptic_k_parameter(complex m, CutSide side) {
  complex kprime;
  if (on_cut(m)) {
    if (side == CutSide::reject || m.real() == 1.0) {
      throw Error(ErrorCode::branch_cut,
                  "elliptic parameter " + describe(m) + " lies on the cut [1, inf)");
    }
    const double s = std::sqrt(m.real() - 1.0);
    kprime = side == CutSide::upper ? complex(0.0, -s) : complex(0.0, s);
  } else {
    kprime = std::sqrt(1.0 - m);
  }
  return std::numbers::pi / (2.0 * agm(1.0, kprime));
}

JacobiElliptic::JacobiElliptic(const Modulus& k)
    : modulus_(k),
      K_(complete_elliptic_k(k)),
      Kp_(1.0 - k.parameter() == 1.0 ? complex(std::numeric_limits<double>::infinity())
                                      : complete_elliptic_k_parameter(1.0 - k.parameter(), CutSide::upper)),
      argument_scale_(1.0) {
  complex m = k.parameter();
  while (std::abs(m) >= kLandenCutoff * kLandenCutoff) {
    // k_{n+1} = (1 - k'_n) / (1 + k'_n), written without the cancellation.
    const complex kp = std::sqrt(1.0 - m);
    const complex next = m / ((1.0 + kp) * (1.0 + kp));
    descent_.push_back(next);
    argument_scale_ /= 1.0 + next;
    m = next * next;
  }
}

JacobiTriple JacobiElliptic::operator()(complex u) const {
  // Coordinates of u in the basis (2K, 2iK'). With k^2 below roundoff the
  // imaginary period is infinite and only the real one is reduced.
  const complex w1 = 2.0 * K_;
  double p = 0.0;
  double q = 0.0;
  complex reduced = u;
  if (std::isfinite(Kp_.real())) {
    const complex w2 = complex(0.0, 2.0) * Kp_;
    const double det = w1.real() * w2.imag() - w2.real() * w1.imag();
    p = std::nearbyint((u.real() * w2.imag() - w2.real() * u.imag()) / det);
    q = std::nearbyint((w1.real() * u.imag() - u.real() * w1.imag()) / det);
    reduced = u - p * w1 - q * w2;
    const complex pole = complex(0.0, 1.0) * Kp_;
    if (std::abs(reduced - pole) < kPoleDistance || std::abs(reduced + pole) < kPoleDistance) {
      throw Error(ErrorCode::pole_proximity, "sn argument " + describe(u) + " is within 1e-6 of a pole");
    }
  } else {
    p = std::nearbyint((std::conj(w1) * u).real() / std::norm(w1));
    reduced = u - p * w1;
  }

  complex s = std::sin(reduced * argument_scale_);
  complex c = std::cos(reduced * argument_scale_);
  complex d = 1.0;
  for (auto it = descent_.rbegin(); it != descent_.rend(); ++it) {
    const complex mu = *it;
    const complex denom = 1.0 + mu * s * s;
    const complex sn = (1.0 + mu) * s / denom;
    const complex cn = c * d / denom;
    const complex dn = (1.0 - mu * s * s) / denom;
    s = sn;
    c = cn;
    d = dn;
  }

  const bool odd_p = std::fmod(std::abs(p), 2.0) == 1.0;
  const bool odd_q = std::fmod(std::abs(q), 2.0) == 1.0;
  if (odd_p) s = -s;
  if (odd_p != odd_q) c = -c;
  if (odd_q) d = -d;
  return {s, c, d};
}

JacobiTriple jacobi_sncndn(complex u, const Modulus& k) { return JacobiElliptic(k)(u); }

complex jacobi_sn(complex u, const Modulus& k) { return JacobiElliptic(k)(u).sn; }

}  // namespace eigenorbit::elliptic
