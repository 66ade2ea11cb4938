// eigenorbit: command-line front end.
//
//   eigenorbit trajectory  --potential "x^4-5x^2" --energy "-1-1i" --x0 0 --tmax 60 --out orbit.csv
//   eigenorbit trace-curve --n 3 --m 1 --max-radius 3 --out curve31.csv
//   eigenorbit classify    --potential "..." --energy "..." --x0 0 --x0 3i
//   eigenorbit separatrix  --potential "..." --energy "..." --from 0.3 --to 1
//
// Exit codes: 0 success, 2 usage or parse error, 3 numerical failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eigenorbit/classify.hpp"
#include "eigenorbit/eigencurve.hpp"
#include "eigenorbit/error.hpp"
#include "eigenorbit/io.hpp"
#include "eigenorbit/quartic.hpp"

namespace fs = std::filesystem;
using namespace eigenorbit;
using io::json;

namespace {

constexpr int kUsage = 2;
constexpr int kNumerical = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

dynamics::Branch parse_branch(const std::string& s) {
  if (s == "+" || s == "plus") return dynamics::Branch::plus;
  if (s == "-" || s == "minus") return dynamics::Branch::minus;
  throw UsageError("--branch must be + or -");
}

fs::path manifest_path(const fs::path& out) {
  fs::path m = out;
  m.replace_extension(".manifest.json");
  return m;
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_filename(out.stem().string() + suffix + out.extension().string());
  return p;
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw UsageError("cannot open " + p.string() + " for writing");
  return f;
}

void write_manifest(const fs::path& out, io::RunManifest m, std::chrono::steady_clock::time_point t0) {
  m.version = EIGENORBIT_VERSION;
  m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto f = open_output(manifest_path(out));
  f << io::to_json(m).dump(2) << '\n';
}

// Well coefficient c when V is exactly x^4 - c x^2 with real c.
std::optional<double> double_well_coefficient(const PolynomialPotential& v) {
  const auto c = v.coefficients();
  if (v.degree() != 4) return std::nullopt;
  if (c[0] != 0.0 || c[1] != 0.0 || c[3] != 0.0 || c[4] != 1.0 || c[2].imag() != 0.0) return std::nullopt;
  return -c[2].real();
}

struct Common {
  std::string potential = "x^4-5x^2";
  std::string energy;
  double tol = 1e-10;
  std::string branch = "+";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--potential", c.potential, "polynomial in x")->capture_default_str();
  cmd->add_option("--energy", c.energy, "complex energy a+bi")->required();
  cmd->add_option("--tol", c.tol, "integrator local error tolerance")->capture_default_str();
  cmd->add_option("--branch", c.branch, "sign of the initial velocity (+ or -)")->capture_default_str();
}

int run_trajectory(const Common& c, const std::string& x0_text, double tmax, bool exact, double dt,
                   const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto v = parse_potential(c.potential);
  const complex energy = io::parse_complex(c.energy);
  const complex x0 = io::parse_complex(x0_text);
  const auto branch = parse_branch(c.branch);
  if (!(tmax > 0.0)) throw UsageError("--tmax must be positive");

  io::TrajectoryTable table;
  json params = {{"potential", v.to_string()}, {"energy", io::format_complex(energy)},
                 {"x0", io::format_complex(x0)},  {"tmax", tmax},
                 {"branch", c.branch},            {"exact", exact}};
  if (exact) {
    const auto well = double_well_coefficient(v);
    if (!well) throw UsageError("--exact needs a potential of the form x^4 - c x^2");
    if (x0 != 0.0) throw UsageError("--exact orbits start at x0 = 0");
    if (!(dt > 0.0)) throw UsageError("--dt must be positive");
    const quartic::ExactOrbit orbit(energy, *well);
    // Orient the closed form to the requested branch of v(0) = +/- sqrt(E).
    complex want = std::sqrt(energy);
    if (branch == dynamics::Branch::minus) want = -want;
    const double s = (want / orbit.initial_velocity()).real() < 0.0 ? -1.0 : 1.0;
    int skipped = 0;
    const auto steps = static_cast<long>(std::floor(tmax / dt + 1e-9));
    for (long k = 0; k <= steps; ++k) {
      const double t = k * dt;
      try {
        const auto p = orbit(t);
        table.t.push_back(t);
        table.x.push_back(s * p.x);
        table.v.push_back(s * p.v);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::pole_proximity) throw;
        ++skipped;  // x is effectively infinite here
      }
    }
    params["dt"] = dt;
    params["skipped_near_pole"] = skipped;
  } else {
    dynamics::IntegrationOptions opts;
    opts.tol = c.tol;
    opts.branch = branch;
    const auto traj = dynamics::integrate(v, energy, x0, tmax, opts);
    table = io::to_table(traj);
    params["tol"] = c.tol;
    params["termination"] = traj.termination() == dynamics::Termination::escaped ? "escaped" : "completed";
    params["end_time"] = traj.end_time();
  }

  if (out.empty()) {
    io::write_trajectory_csv(std::cout, table);
    return 0;
  }
  {
    auto f = open_output(out);
    io::write_trajectory_csv(f, table);
  }
  write_manifest(out, {.command = "trajectory", .parameters = params, .version = {}, .wall_time_s = 0, .outputs = {out}}, t0);
  return 0;
}

int run_trace(int n, int m, double max_radius, double step, const std::string& out, int jobs) {
  const auto t0 = std::chrono::steady_clock::now();
  const quartic::WindingPair w(n, m);
  if (!(step > 0.0)) throw UsageError("--step must be positive");
  eigencurve::TraceOptions lower;
  lower.half_plane = quartic::HalfPlane::lower;
  auto trace = [&](const eigencurve::TraceOptions& o) { return eigencurve::trace_curve(w, max_radius, step, o); };

  std::optional<eigencurve::Eigencurve> up, down;
  if (jobs > 1) {
    auto fu = std::async(std::launch::async, trace, eigencurve::TraceOptions{});
    auto fd = std::async(std::launch::async, trace, lower);
    up = fu.get();
    down = fd.get();
  } else {
    up = trace({});
    down = trace(lower);
  }

  const fs::path upper_path = out;
  const fs::path lower_path = sibling(out, "_conj");
  {
    auto f = open_output(upper_path);
    io::write_curve_csv(f, *up);
  }
  {
    auto f = open_output(lower_path);
    io::write_curve_csv(f, *down);
  }
  auto status = [](const eigencurve::Eigencurve& c) {
    return c.status == eigencurve::TraceStatus::degenerate ? "degenerate" : "reached_radius";
  };
  json params = {{"n", w.n()},
                 {"m", w.m()},
                 {"max_radius", max_radius},
                 {"step", step},
                 {"points", up->points.size()},
                 {"status", status(*up)},
                 {"conjugate_status", status(*down)}};
  write_manifest(upper_path,
                 {.command = "trace-curve", .parameters = params, .version = {}, .wall_time_s = 0,
                  .outputs = {upper_path.string(), lower_path.string()}},
                 t0);
  return 0;
}

classify::PeriodicityOptions periodicity_options(const Common& c, std::optional<double> closure_tol) {
  classify::PeriodicityOptions o;
  o.integration.tol = c.tol;
  o.integration.branch = parse_branch(c.branch);
  o.closure_tol = closure_tol.value_or(classify::default_closure_tolerance(c.tol));
  return o;
}

void emit_json(const json& j, const std::string& out, const std::string& command, json params,
               std::chrono::steady_clock::time_point t0) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  {
    auto f = open_output(out);
    f << j.dump(2) << '\n';
  }
  write_manifest(out, {.command = command, .parameters = std::move(params), .version = {}, .wall_time_s = 0, .outputs = {out}}, t0);
}

int run_classify(const Common& c, const std::vector<std::string>& x0_texts, double horizon,
                 std::optional<double> closure_tol, int jobs, const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto v = parse_potential(c.potential);
  const complex energy = io::parse_complex(c.energy);
  std::vector<complex> starts;
  for (const auto& s : x0_texts) starts.push_back(io::parse_complex(s));
  const auto opts = periodicity_options(c, closure_tol);
  if (!(horizon > 0.0)) throw UsageError("--tmax must be positive");

  auto one = [&](complex x0) { return classify::detect_periodicity(v, energy, x0, horizon, opts); };
  std::vector<classify::Classification> results(starts.size());
  const std::size_t workers = std::max(1, jobs);
  for (std::size_t base = 0; base < starts.size(); base += workers) {
    std::vector<std::future<classify::Classification>> batch;
    for (std::size_t i = base; i < std::min(starts.size(), base + workers); ++i) {
      batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, one, starts[i]));
    }
    for (std::size_t k = 0; k < batch.size(); ++k) results[base + k] = batch[k].get();
  }

  json records = json::array();
  for (std::size_t i = 0; i < starts.size(); ++i) {
    json r = io::to_json(results[i]);
    r["x0"] = io::format_complex(starts[i]);
    records.push_back(std::move(r));
  }
  json doc = {{"potential", v.to_string()},     {"energy", io::format_complex(energy)}, {"branch", c.branch},
              {"closure_tol", opts.closure_tol}, {"tol", c.tol},                       {"records", records}};
  json params = {{"potential", v.to_string()}, {"energy", io::format_complex(energy)}, {"x0", x0_texts},
                 {"tmax", horizon},            {"tol", c.tol},                          {"closure_tol", opts.closure_tol},
                 {"branch", c.branch},         {"jobs", jobs}};
  emit_json(doc, out, "classify", params, t0);
  return 0;
}

int run_separatrix(const Common& c, const std::string& from, const std::string& to, double sep_tol, double horizon,
                   std::optional<double> closure_tol, const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto v = parse_potential(c.potential);
  const complex energy = io::parse_complex(c.energy);
  const complex a = io::parse_complex(from);
  const complex b = io::parse_complex(to);
  classify::SeparatrixOptions opts;
  opts.horizon = horizon;
  opts.periodicity = periodicity_options(c, closure_tol);
  const auto r = classify::find_separatrix(v, energy, a, b, sep_tol, opts);
  json doc = {{"potential", v.to_string()},
              {"energy", io::format_complex(energy)},
              {"from", io::format_complex(a)},
              {"to", io::format_complex(b)},
              {"point", io::format_complex(r.point)},
              {"inside", io::format_complex(r.inside)},
              {"outside", io::format_complex(r.outside)},
              {"bisections", r.bisections},
              {"tolerance", sep_tol},
              {"closure_tol", opts.periodicity.closure_tol},
              {"horizon", horizon}};
  json params = {{"potential", v.to_string()}, {"energy", io::format_complex(energy)}, {"from", from}, {"to", to},
                 {"sep_tol", sep_tol},         {"tmax", horizon},                       {"tol", c.tol},
                 {"closure_tol", opts.periodicity.closure_tol}, {"branch", c.branch}};
  emit_json(doc, out, "separatrix", params, t0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex classical orbits of polynomial potentials"};
  app.set_version_flag("--version", std::string(EIGENORBIT_VERSION));
  app.require_subcommand(1);

  Common common;
  std::string out;
  int jobs = 1;

  auto* traj = app.add_subcommand("trajectory", "integrate (or evaluate in closed form) one orbit; writes CSV");
  add_common(traj, common);
  std::string x0 = "0";
  double tmax = 40.0;
  double dt = 0.01;
  bool exact = false;
  traj->add_option("--x0", x0, "initial position a+bi")->capture_default_str();
  traj->add_option("--tmax", tmax, "final time")->capture_default_str();
  traj->add_flag("--exact", exact, "closed-form quartic orbit x(t) = a sn(i b t, k)");
  traj->add_option("--dt", dt, "sample spacing for --exact")->capture_default_str();
  traj->add_option("--out", out, "CSV path (stdout if omitted)");

  auto* trace = app.add_subcommand("trace-curve", "trace the (n, m) eigencurve and its conjugate; writes CSV");
  int n = 0, m = 0;
  double max_radius = 3.0, step = 0.02;
  std::string curve_out = "curve.csv";
  trace->add_option("--n", n, "midline crossings per period")->required();
  trace->add_option("--m", m, "imaginary-axis crossings per period")->required();
  trace->add_option("--max-radius", max_radius, "stop once |E| reaches this")->capture_default_str();
  trace->add_option("--step", step, "continuation step bound")->capture_default_str();
  trace->add_option("--out", curve_out, "CSV path; the conjugate branch goes to <stem>_conj")->capture_default_str();
  trace->add_option("--jobs", jobs, "trace both branches concurrently when > 1")->capture_default_str();

  auto* cls = app.add_subcommand("classify", "periodic/open verdicts for one or more starting points; writes JSON");
  Common cls_common;
  add_common(cls, cls_common);
  std::vector<std::string> starts{"0"};
  double horizon = 200.0;
  std::optional<double> closure_tol;
  cls->add_option("--x0", starts, "initial position(s) a+bi; repeatable")->capture_default_str();
  cls->add_option("--tmax", horizon, "search horizon")->capture_default_str();
  cls->add_option("--closure-tol", closure_tol, "phase-space return tolerance (default scales with --tol)");
  cls->add_option("--jobs", jobs, "classify starting points concurrently")->capture_default_str();
  cls->add_option("--out", out, "JSON path (stdout if omitted)");

  auto* sep = app.add_subcommand("separatrix", "bisect between a periodic and an open start; writes JSON");
  Common sep_common;
  add_common(sep, sep_common);
  std::string from, to;
  double sep_tol = 1e-3;
  sep->add_option("--from", from, "periodic end a+bi")->required();
  sep->add_option("--to", to, "open end a+bi")->required();
  sep->add_option("--sep-tol", sep_tol, "final bracket length")->capture_default_str();
  sep->add_option("--tmax", horizon, "search horizon per classification")->capture_default_str();
  sep->add_option("--closure-tol", closure_tol, "phase-space return tolerance");
  sep->add_option("--out", out, "JSON path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*traj) return run_trajectory(common, x0, tmax, exact, dt, out);
    if (*trace) return run_trace(n, m, max_radius, step, curve_out, jobs);
    if (*cls) return run_classify(cls_common, starts, horizon, closure_tol, jobs, out);
    if (*sep) return run_separatrix(sep_common, from, to, sep_tol, horizon, closure_tol, out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    const bool usage = e.code() == ErrorCode::parse || e.code() == ErrorCode::admissibility;
    return usage ? kUsage : kNumerical;
  }
  return kUsage;
}
