#include "eigenorbit/error.hpp"

namespace eigenorbit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::branch_cut: return "branch_cut";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::pole_proximity: return "pole_proximity";
    case ErrorCode::degenerate_energy: return "degenerate_energy";
    case ErrorCode::admissibility: return "admissibility";
    case ErrorCode::off_curve: return "off_curve";
    case ErrorCode::basin: return "basin";
    case ErrorCode::stall: return "stall";
    case ErrorCode::stiffness: return "stiffness";
    case ErrorCode::ambiguous_crossing: return "ambiguous_crossing";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::parse: return "parse";
  }
  return "unknown";
}

}  // namespace eigenorbit
