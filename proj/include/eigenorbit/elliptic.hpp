#pragma once

#include <complex>
#include <vector>

namespace eigenorbit::elliptic {

using complex = std::complex<double>;

/// Elliptic modulus k for complex arguments. Only k^2 enters sn and K, so
/// the sign of k is immaterial; k^2 on the real ray [1, inf) is rejected.
class Modulus {
 public:
  explicit Modulus(complex k);

  /// Builds the modulus from the parameter m = k^2 (principal root for k).
  static Modulus from_parameter(complex m);

  complex k() const noexcept { return k_; }
  complex parameter() const noexcept { return m_; }
  /// k' = sqrt(1 - k^2), principal branch (Re k' >= 0).
  complex complementary() const noexcept { return kprime_; }

 private:
  Modulus(complex k, complex m);

  complex k_;
  complex m_;
  complex kprime_;
};

/// Which one-sided limit to take when the parameter lies on the cut [1, inf).
enum class CutSide { reject, upper, lower };

/// Arithmetic-geometric mean with the optimal sign choice for each geometric
/// mean (|a_n - g_n| minimal). Throws ErrorCode::divergence after 64 rounds.
complex agm(complex a, complex b);

/// K(k) = pi / (2 agm(1, k')).
complex complete_elliptic_k(const Modulus& k);

/// K as a function of the parameter m = k^2. On the cut, `side` selects the
/// limit from m + i0 (upper) or m - i0 (lower); `reject` throws branch_cut.
complex complete_elliptic_k_parameter(complex m, CutSide side = CutSide::reject);

struct JacobiTriple {
  complex sn;
  complex cn;
  complex dn;
};

/// Jacobi sn, cn, dn for a fixed modulus.
///
/// The argument is first reduced into the period cell spanned by 2K and 2iK'
/// (sn changes sign under u -> u + 2K), then evaluated by the descending
/// Landen (Gauss) transformation down to |k_n| < 1e-12, where sn = sin.
/// Arguments within 1e-6 of a pole throw ErrorCode::pole_proximity.
class JacobiElliptic {
 public:
  explicit JacobiElliptic(const Modulus& k);

  JacobiTriple operator()(complex u) const;

  const Modulus& modulus() const noexcept { return modulus_; }
  complex quarter_period() const noexcept { return K_; }
  /// K(k'); when k^2 is real and negative this is the upper-side limit, and
  /// it is infinite when k^2 rounds to zero.
  complex complementary_quarter_period() const noexcept { return Kp_; }

 private:
  Modulus modulus_;
  complex K_;
  complex Kp_;
  std::vector<complex> descent_;  // k_1, k_2, ... of the Landen sequence
  complex argument_scale_;        // prod 1 / (1 + k_j)
};

JacobiTriple jacobi_sncndn(complex u, const Modulus& k);
complex jacobi_sn(complex u, const Modulus& k);

}  // namespace eigenorbit::elliptic
