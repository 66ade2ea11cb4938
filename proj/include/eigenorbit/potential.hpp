#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eigenorbit {

using complex = std::complex<double>;

/// Polynomial in x with complex coefficients stored constant term first.
/// Trailing (leading-order) zeros are trimmed on construction.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<complex> coefficients);

  int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }
  std::span<const complex> coefficients() const noexcept { return coefficients_; }
  complex leading() const { return coefficients_.back(); }

  /// Horner evaluation.
  complex operator()(complex x) const;
  Polynomial derivative() const;

 private:
  std::vector<complex> coefficients_{complex(0.0)};
};

/// A potential V(x): a polynomial of degree >= 2 with nonzero leading term.
/// Caches V' for the equations of motion.
class PolynomialPotential {
 public:
  explicit PolynomialPotential(Polynomial p);
  static PolynomialPotential from_coefficients(std::vector<complex> coefficients);

  int degree() const noexcept { return poly_.degree(); }
  std::span<const complex> coefficients() const noexcept { return poly_.coefficients(); }
  const Polynomial& polynomial() const noexcept { return poly_; }
  const Polynomial& derivative() const noexcept { return slope_; }

  complex operator()(complex x) const { return poly_(x); }

  /// Canonical text form, e.g. "x^4 - 5*x^2"; reparses to the same coefficients.
  std::string to_string() const;

 private:
  Polynomial poly_;
  Polynomial slope_;
};

/// Parses a real polynomial expression in x. Coefficients are accumulated in
/// exact rational arithmetic and converted to double at the end. Grammar:
///
///   expr    = term { ("+" | "-") term }
///   term    = unary { ["*" | "/"] unary }      (juxtaposition multiplies)
///   unary   = ("+" | "-") unary | power
///   power   = primary [ "^" integer ]
///   primary = number | "x" | "(" expr ")"
///   number  = digits [ "." digits ] | "." digits
///
/// Division is only allowed by a nonzero constant. Throws ParseError.
PolynomialPotential parse_potential(std::string_view text);

complex eval(const PolynomialPotential& v, complex x);
Polynomial derivative(const PolynomialPotential& v);

struct TurningPointSet {
  std::vector<complex> points;     // distinct roots, sorted by (re, im)
  std::vector<int> multiplicities;

  int count() const;
};

/// Roots of E - V(x): Aberth-Ehrlich simultaneous iteration followed by a
/// Newton polish on the undeflated polynomial. Throws ErrorCode::divergence
/// if any root's residual |E - V(r)| exceeds 1e-9 (1 + |E|).
TurningPointSet turning_points(const PolynomialPotential& v, complex energy);

/// Every root of p listed with multiplicity, sorted by (re, im).
std::vector<complex> polynomial_roots(const Polynomial& p);

}  // namespace eigenorbit
