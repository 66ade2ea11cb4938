#include "eigenorbit/io.hpp"

#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "eigenorbit/error.hpp"

namespace eigenorbit::io {
namespace {

// Unsigned decimal starting at `pos`; advances pos past it.
double parse_unsigned(std::string_view text, std::size_t& pos) {
  if (pos >= text.size() || !(std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
    throw ParseError(pos, "expected a number");
  }
  double value = 0.0;
  const char* first = text.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
  if (ec != std::errc()) throw ParseError(pos, "malformed number");
  pos += static_cast<std::size_t>(ptr - first);
  return value;
}

std::vector<double> split_numbers(const std::string& line, std::size_t expected, std::size_t line_no) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    const std::size_t comma = std::min(line.find(',', start), line.size());
    const std::string_view field(line.data() + start, comma - start);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": malformed field '" + std::string(field) + "'");
    }
    out.push_back(v);
    start = comma + 1;
  }
  if (out.size() != expected) {
    throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": expected " + std::to_string(expected) +
                                      " fields, found " + std::to_string(out.size()));
  }
  return out;
}

template <class Row>
void read_rows(std::istream& in, std::string_view header, std::size_t fields, Row&& row) {
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw Error(ErrorCode::parse, "line 1: expected header '" + std::string(header) + "'");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    row(split_numbers(line, fields, line_no));
  }
}

}  // namespace

complex parse_complex(std::string_view text) {
  std::size_t pos = 0;
  auto sign_at = [&](std::size_t p) -> double {
    if (p < text.size() && (text[p] == '+' || text[p] == '-')) return text[p] == '-' ? -1.0 : 1.0;
    return 0.0;
  };
  auto is_i = [&](std::size_t p) { return p < text.size() && text[p] == 'i'; };

  if (text.empty()) throw ParseError(0, "empty complex number");

  // Leading term: a real part or a complete imaginary part.
  double s = sign_at(pos);
  if (s != 0.0) ++pos;
  else s = 1.0;
  double first = 1.0;
  if (!is_i(pos)) first = parse_unsigned(text, pos);
  if (is_i(pos)) {
    ++pos;
    if (pos != text.size()) throw ParseError(pos, "unexpected character after imaginary part");
    return {0.0, s * first};
  }
  const double re = s * first;
  if (pos == text.size()) return {re, 0.0};

  const double s2 = sign_at(pos);
  if (s2 == 0.0) throw ParseError(pos, "expected '+' or '-' before the imaginary part");
  ++pos;
  double second = 1.0;
  if (!is_i(pos)) second = parse_unsigned(text, pos);
  if (!is_i(pos)) throw ParseError(pos, "expected 'i' after the imaginary part");
  ++pos;
  if (pos != text.size()) throw ParseError(pos, "unexpected trailing character");
  return {re, s2 * second};
}

std::string format_real(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string format_complex(complex z) {
  std::string out = format_real(z.real());
  const double im = z.imag();
  out += std::signbit(im) ? "-" : "+";
  out += format_real(std::abs(im));
  out += "i";
  return out;
}

TrajectoryTable to_table(const dynamics::Trajectory& trajectory) {
  return {{trajectory.times().begin(), trajectory.times().end()},
          {trajectory.positions().begin(), trajectory.positions().end()},
          {trajectory.velocities().begin(), trajectory.velocities().end()}};
}

void write_trajectory_csv(std::ostream& out, const TrajectoryTable& table) {
  out << "t,re_x,im_x,re_v,im_v\n";
  for (std::size_t i = 0; i < table.t.size(); ++i) {
    out << format_real(table.t[i]) << ',' << format_real(table.x[i].real()) << ',' << format_real(table.x[i].imag())
        << ',' << format_real(table.v[i].real()) << ',' << format_real(table.v[i].imag()) << '\n';
  }
}

TrajectoryTable read_trajectory_csv(std::istream& in) {
  TrajectoryTable table;
  read_rows(in, "t,re_x,im_x,re_v,im_v", 5, [&](const std::vector<double>& f) {
    table.t.push_back(f[0]);
    table.x.emplace_back(f[1], f[2]);
    table.v.emplace_back(f[3], f[4]);
  });
  return table;
}

void write_curve_csv(std::ostream& out, const eigencurve::Eigencurve& curve) {
  out << "re_E,im_E,residual\n";
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    out << format_real(curve.points[i].real()) << ',' << format_real(curve.points[i].imag()) << ','
        << format_real(curve.residuals[i]) << '\n';
  }
}

CurveTable read_curve_csv(std::istream& in) {
  CurveTable table;
  read_rows(in, "re_E,im_E,residual", 3, [&](const std::vector<double>& f) {
    table.energies.emplace_back(f[0], f[1]);
    table.residuals.push_back(f[2]);
  });
  return table;
}

json to_json(const classify::Classification& c) {
  json j;
  j["verdict"] = std::string(classify::to_string(c.verdict));
  j["period"] = c.period ? json(*c.period) : json(nullptr);
  j["winding"] = c.winding ? json{{"n", c.winding->n()}, {"m", c.winding->m()}} : json(nullptr);
  j["closure_defect"] = c.closure_defect;
  j["horizon"] = c.horizon;
  if (!c.cause.empty()) j["cause"] = c.cause;
  return j;
}

classify::Classification classification_from_json(const json& j) {
  classify::Classification c;
  const std::string verdict = j.at("verdict").get<std::string>();
  if (verdict == "periodic") c.verdict = classify::Verdict::periodic;
  else if (verdict == "open") c.verdict = classify::Verdict::open;
  else if (verdict == "undetermined") c.verdict = classify::Verdict::undetermined;
  else throw Error(ErrorCode::parse, "unknown verdict '" + verdict + "'");
  if (!j.at("period").is_null()) c.period = j.at("period").get<double>();
  if (!j.at("winding").is_null()) {
    c.winding = quartic::WindingPair(j.at("winding").at("n").get<int>(), j.at("winding").at("m").get<int>());
  }
  c.closure_defect = j.at("closure_defect").get<double>();
  c.horizon = j.at("horizon").get<double>();
  if (j.contains("cause")) c.cause = j.at("cause").get<std::string>();
  return c;
}

json to_json(const RunManifest& m) {
  return json{{"command", m.command},
              {"parameters", m.parameters},
              {"version", m.version},
              {"wall_time_s", m.wall_time_s},
              {"outputs", m.outputs}};
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.parameters = j.at("parameters");
  m.version = j.at("version").get<std::string>();
  m.wall_time_s = j.at("wall_time_s").get<double>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  return m;
}

}  // namespace eigenorbit::io
