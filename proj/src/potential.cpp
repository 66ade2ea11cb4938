#include "eigenorbit/potential.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "eigenorbit/error.hpp"

namespace eigenorbit {

Polynomial::Polynomial(std::vector<complex> coefficients) : coefficients_(std::move(coefficients)) {
  while (coefficients_.size() > 1 && coefficients_.back() == 0.0) coefficients_.pop_back();
  if (coefficients_.empty()) coefficients_.push_back(0.0);
}

complex Polynomial::operator()(complex x) const {
  complex acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coefficients_.size() <= 1) return Polynomial();
  std::vector<complex> out(coefficients_.size() - 1);
  for (std::size_t i = 1; i < coefficients_.size(); ++i) {
    out[i - 1] = static_cast<double>(i) * coefficients_[i];
  }
  return Polynomial(std::move(out));
}

PolynomialPotential::PolynomialPotential(Polynomial p) : poly_(std::move(p)), slope_(poly_.derivative()) {
  if (poly_.degree() < 2) {
    throw Error(ErrorCode::precondition,
                "potential must have degree >= 2, got degree " + std::to_string(poly_.degree()));
  }
}

PolynomialPotential PolynomialPotential::from_coefficients(std::vector<complex> coefficients) {
  return PolynomialPotential(Polynomial(std::move(coefficients)));
}

std::string PolynomialPotential::to_string() const {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  const auto coeffs = coefficients();
  for (int i = degree(); i >= 0; --i) {
    const complex c = coeffs[static_cast<std::size_t>(i)];
    if (c == 0.0) continue;
    if (c.imag() != 0.0) {
      os << (first ? "" : " + ") << "(" << c.real() << (c.imag() < 0 ? "-" : "+")
         << std::abs(c.imag()) << "i)";
    } else {
      const double r = c.real();
      if (first) {
        if (r < 0) os << "-";
      } else {
        os << (r < 0 ? " - " : " + ");
      }
      const double mag = std::abs(r);
      if (mag != 1.0 || i == 0) {
        os << mag;
        if (i > 0) os << "*";
      }
    }
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

using Rational = boost::multiprecision::cpp_rational;
using RationalPoly = std::vector<Rational>;

constexpr unsigned kMaxExponent = 64;

void trim(RationalPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
  if (p.empty()) p.emplace_back(0);
}

RationalPoly add(const RationalPoly& a, const RationalPoly& b, int sign) {
  RationalPoly out(std::max(a.size(), b.size()), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += sign > 0 ? b[i] : Rational(-b[i]);
  trim(out);
  return out;
}

RationalPoly mul(const RationalPoly& a, const RationalPoly& b) {
  RationalPoly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  RationalPoly parse() {
    skip_space();
    if (at_end()) throw ParseError(pos_, "empty expression");
    RationalPoly p = expr();
    skip_space();
    if (!at_end()) throw ParseError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return p;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  RationalPoly expr() {
    RationalPoly acc = term();
    for (;;) {
      skip_space();
      const char c = peek();
      if (c != '+' && c != '-') return acc;
      ++pos_;
      acc = add(acc, term(), c == '+' ? 1 : -1);
    }
  }

  bool starts_primary() const {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'x' || c == '(';
  }

  RationalPoly term() {
    RationalPoly acc = unary();
    for (;;) {
      skip_space();
      const char c = peek();
      if (c == '*') {
        ++pos_;
        acc = mul(acc, unary());
      } else if (c == '/') {
        ++pos_;
        skip_space();
        const std::size_t at = pos_;
        const RationalPoly divisor = unary();
        if (divisor.size() != 1) throw ParseError(at, "division by a non-constant expression");
        if (divisor[0] == 0) throw ParseError(at, "division by zero");
        for (auto& coeff : acc) coeff /= divisor[0];
      } else if (starts_primary()) {
        acc = mul(acc, power());
      } else {
        return acc;
      }
    }
  }

  RationalPoly unary() {
    skip_space();
    const char c = peek();
    if (c == '+' || c == '-') {
      ++pos_;
      RationalPoly p = unary();
      if (c == '-') {
        for (auto& coeff : p) coeff = -coeff;
      }
      return p;
    }
    return power();
  }

  RationalPoly power() {
    RationalPoly base = primary();
    skip_space();
    if (peek() != '^') return base;
    ++pos_;
    skip_space();
    const std::size_t at = pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) {
      throw ParseError(at, "exponent must be a non-negative integer literal");
    }
    unsigned exponent = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      exponent = exponent * 10 + static_cast<unsigned>(text_[pos_] - '0');
      ++pos_;
      if (exponent > kMaxExponent) throw ParseError(at, "exponent exceeds 64");
    }
    RationalPoly out{Rational(1)};
    for (unsigned i = 0; i < exponent; ++i) out = mul(out, base);
    return out;
  }

  RationalPoly primary() {
    skip_space();
    const char c = peek();
    if (c == 'x') {
      ++pos_;
      return {Rational(0), Rational(1)};
    }
    if (c == '(') {
      ++pos_;
      RationalPoly p = expr();
      skip_space();
      if (peek() != ')') throw ParseError(pos_, "expected ')'");
      ++pos_;
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return {number()};
    if (at_end()) throw ParseError(pos_, "unexpected end of expression");
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t at = pos_;
      std::string name;
      while (std::isalpha(static_cast<unsigned char>(peek()))) name += text_[pos_++];
      throw ParseError(at, "unsupported identifier '" + name + "' (only x is allowed)");
    }
    throw ParseError(pos_, std::string("unexpected '") + c + "'");
  }

  Rational number() {
    const std::size_t at = pos_;
    boost::multiprecision::cpp_int digits = 0;
    boost::multiprecision::cpp_int scale = 1;
    bool any = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      digits = digits * 10 + (text_[pos_++] - '0');
      any = true;
    }
    if (peek() == '.') {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        digits = digits * 10 + (text_[pos_++] - '0');
        scale *= 10;
        any = true;
      }
    }
    if (!any) throw ParseError(at, "malformed number");
    return Rational(digits, scale);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

PolynomialPotential parse_potential(std::string_view text) {
  const RationalPoly exact = Parser(text).parse();
  std::vector<complex> coeffs;
  coeffs.reserve(exact.size());
  for (const auto& c : exact) coeffs.emplace_back(static_cast<double>(c), 0.0);
  if (coeffs.size() < 3) {
    throw ParseError(0, "potential must have degree >= 2, got degree " +
                            std::to_string(static_cast<int>(coeffs.size()) - 1));
  }
  return PolynomialPotential::from_coefficients(std::move(coeffs));
}

complex eval(const PolynomialPotential& v, complex x) { return v(x); }

Polynomial derivative(const PolynomialPotential& v) { return v.derivative(); }

// ---------------------------------------------------------------------------
// Roots

int TurningPointSet::count() const {
  int n = 0;
  for (int m : multiplicities) n += m;
  return n;
}

namespace {

constexpr int kMaxAberthIterations = 500;
constexpr double kClusterTolerance = 1e-5;

bool lex_less(complex a, complex b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

std::pair<complex, complex> eval_with_slope(std::span<const complex> c, complex z) {
  complex p = c.back();
  complex dp = 0.0;
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[i];
  }
  return {p, dp};
}

}  // namespace

std::vector<complex> polynomial_roots(const Polynomial& poly) {
  const int n = poly.degree();
  if (n < 1) throw Error(ErrorCode::precondition, "polynomial has no roots (degree < 1)");
  const auto coeffs = poly.coefficients();
  std::vector<complex> monic(coeffs.begin(), coeffs.end());
  for (auto& c : monic) c /= coeffs.back();

  // Initial guesses on a circle of radius bounded by the Fujiwara estimate.
  double radius = 0.0;
  for (int i = 0; i < n; ++i) {
    const double bound = std::pow(std::abs(monic[static_cast<std::size_t>(i)]), 1.0 / (n - i));
    radius = std::max(radius, bound);
  }
  radius = std::max(radius, 1e-3);
  std::vector<complex> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    z[static_cast<std::size_t>(k)] = std::polar(radius, 2.0 * std::numbers::pi * k / n + 0.4);
  }

  bool converged = false;
  for (int iter = 0; iter < kMaxAberthIterations && !converged; ++iter) {
    converged = true;
    for (std::size_t k = 0; k < z.size(); ++k) {
      const auto [p, dp] = eval_with_slope(monic, z[k]);
      if (p == 0.0) continue;
      const complex ratio = p / dp;
      complex repulsion = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      }
      const complex step = ratio / (1.0 - ratio * repulsion);
      z[k] -= step;
      if (std::abs(step) > 1e-15 * (1.0 + std::abs(z[k]))) converged = false;
    }
  }

  // Newton polish on the original coefficients, kept only when it helps.
  for (auto& root : z) {
    for (int i = 0; i < 3; ++i) {
      const auto [p, dp] = eval_with_slope(monic, root);
      if (dp == 0.0) break;
      const complex next = root - p / dp;
      if (std::abs(eval_with_slope(monic, next).first) >= std::abs(p)) break;
      root = next;
    }
  }
  std::sort(z.begin(), z.end(), lex_less);
  return z;
}

TurningPointSet turning_points(const PolynomialPotential& v, complex energy) {
  std::vector<complex> shifted(v.coefficients().begin(), v.coefficients().end());
  for (auto& c : shifted) c = -c;
  shifted[0] += energy;
  const std::vector<complex> roots = polynomial_roots(Polynomial(shifted));

  const double limit = 1e-9 * (1.0 + std::abs(energy));
  for (const complex r : roots) {
    const double residual = std::abs(energy - v(r));
    if (!(residual < limit)) {
      std::ostringstream os;
      os.precision(3);
      os << "turning-point solver did not converge: residual " << std::scientific << residual
         << " at x = " << r << " exceeds " << limit;
      throw Error(ErrorCode::divergence, os.str());
    }
  }

  // Merge clusters produced by multiple roots.
  TurningPointSet out;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    complex sum = roots[i];
    int mult = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (!used[j] && std::abs(roots[j] - roots[i]) < kClusterTolerance * (1.0 + std::abs(roots[i]))) {
        sum += roots[j];
        ++mult;
        used[j] = true;
      }
    }
    out.points.push_back(sum / static_cast<double>(mult));
    out.multiplicities.push_back(mult);
  }
  return out;
}

}  // namespace eigenorbit
