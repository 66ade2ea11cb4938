#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eigenorbit {

enum class ErrorCode {
  branch_cut,          // modulus on the principal-branch cut
  divergence,          // iteration failed to converge (AGM, root finder)
  pole_proximity,      // argument too close to a pole of sn
  degenerate_energy,   // turning-point collision
  admissibility,       // winding pair violates n >= 2m
  off_curve,           // energy not on the requested eigencurve
  basin,               // refinement did not converge from the guess
  stall,               // continuation step collapsed
  stiffness,           // integrator step collapsed
  ambiguous_crossing,  // crossing count too close to tangency
  precondition,        // caller-supplied inputs violate an operation's contract
  parse,               // malformed text input
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Malformed potential or complex-number text; `position` is a 0-based
/// character offset into the input.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(ErrorCode::parse,
              what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace eigenorbit
