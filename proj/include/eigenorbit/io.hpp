#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "eigenorbit/classify.hpp"
#include "eigenorbit/dynamics.hpp"
#include "eigenorbit/eigencurve.hpp"

namespace eigenorbit::io {

using complex = std::complex<double>;
using nlohmann::json;

/// Parses "a", "ai", "a+bi" or "a-bi" (a, b decimal, optional exponent;
/// a bare "i" means 1i). Throws ParseError with the offending offset.
complex parse_complex(std::string_view text);

/// "a+bi" with 17 significant digits; parse_complex inverts it exactly.
std::string format_complex(complex z);

/// 17 significant digits, shortest exact form for doubles.
std::string format_real(double x);

struct TrajectoryTable {
  std::vector<double> t;
  std::vector<complex> x;
  std::vector<complex> v;
};

TrajectoryTable to_table(const dynamics::Trajectory& trajectory);

/// Header "t,re_x,im_x,re_v,im_v", one sample per row.
void write_trajectory_csv(std::ostream& out, const TrajectoryTable& table);
/// Inverse of write_trajectory_csv; throws ErrorCode::parse naming the line.
TrajectoryTable read_trajectory_csv(std::istream& in);

struct CurveTable {
  std::vector<complex> energies;
  std::vector<double> residuals;
};

/// Header "re_E,im_E,residual".
void write_curve_csv(std::ostream& out, const eigencurve::Eigencurve& curve);
CurveTable read_curve_csv(std::istream& in);

/// {"verdict", "period", "winding": {"n", "m"}, "closure_defect", "horizon",
/// "cause"}; absent optionals are null and an empty cause is omitted.
json to_json(const classify::Classification& c);
classify::Classification classification_from_json(const json& j);

struct RunManifest {
  std::string command;
  json parameters = json::object();
  std::string version;
  double wall_time_s = 0.0;
  std::vector<std::string> outputs;
};

json to_json(const RunManifest& m);
RunManifest manifest_from_json(const json& j);

}  // namespace eigenorbit::io
