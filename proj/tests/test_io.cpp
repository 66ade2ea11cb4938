#include <sstream>

#include "doctest.h"
#include "eigenorbit/error.hpp"
#include "eigenorbit/io.hpp"

using namespace eigenorbit;
using namespace eigenorbit::io;

namespace {

std::size_t failure_position(std::string_view text) {
  try {
    parse_complex(text);
  } catch (const ParseError& e) {
    return e.position();
  }
  FAIL("expected ParseError for '" << text << "'");
  return 0;
}

}  // namespace

TEST_CASE("complex parsing") {
  CHECK(parse_complex("-1") == complex(-1, 0));
  CHECK(parse_complex("-1-1i") == complex(-1, -1));
  CHECK(parse_complex("0.6725431089+1i") == complex(0.6725431089, 1));
  CHECK(parse_complex("3i") == complex(0, 3));
  CHECK(parse_complex("-i") == complex(0, -1));
  CHECK(parse_complex("i") == complex(0, 1));
  CHECK(parse_complex("16.489+10i") == complex(16.489, 10));
  CHECK(parse_complex("1e-3-2.5e2i") == complex(1e-3, -250));
  CHECK(parse_complex(".5+i") == complex(0.5, 1));
}

TEST_CASE("complex parsing rejects malformed input") {
  CHECK(failure_position("") == 0);
  CHECK(failure_position("abc") == 0);
  CHECK(failure_position("1+") == 2);
  CHECK(failure_position("1+2") == 3);
  CHECK(failure_position("1 2i") == 1);
  CHECK(failure_position("2ii") == 2);
  CHECK(failure_position("1+2i3") == 4);
  CHECK(failure_position("--1") == 1);
}

TEST_CASE("formatting round trips exactly") {
  for (const complex z : {complex(0.1, -0.2), complex(-4.359375, 1), complex(1e-300, 6.02e23), complex(-0.0, 0.0)}) {
    CHECK(parse_complex(format_complex(z)) == z);
  }
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("trajectory CSV round trip") {
  TrajectoryTable table{{0.0, 0.5, 1.0}, {complex(0, 0), complex(0.1, 0.2), complex(-0.3, 1e-17)},
                        {complex(1, 0), complex(0.9, -0.1), complex(0.7, 0.3)}};
  std::stringstream buffer;
  write_trajectory_csv(buffer, table);
  CHECK(buffer.str().starts_with("t,re_x,im_x,re_v,im_v\n"));
  const TrajectoryTable back = read_trajectory_csv(buffer);
  CHECK(back.t == table.t);
  CHECK(back.x == table.x);
  CHECK(back.v == table.v);
}

TEST_CASE("trajectory CSV from an integration") {
  const auto traj = dynamics::integrate(parse_potential("x^2"), 1.0, 0.0, 1.0);
  std::stringstream buffer;
  write_trajectory_csv(buffer, to_table(traj));
  const TrajectoryTable back = read_trajectory_csv(buffer);
  REQUIRE(back.t.size() == traj.size());
  CHECK(back.x.back() == traj.positions().back());
}

TEST_CASE("CSV errors name the line") {
  std::stringstream bad_header("t,x\n0,0\n");
  CHECK_THROWS_WITH_AS(read_trajectory_csv(bad_header), doctest::Contains("line 1"), Error);
  std::stringstream bad_field("t,re_x,im_x,re_v,im_v\n0,0,0,1,0\n0.5,zz,0,1,0\n");
  CHECK_THROWS_WITH_AS(read_trajectory_csv(bad_field), doctest::Contains("line 3"), Error);
  std::stringstream short_row("re_E,im_E,residual\n1,2\n");
  CHECK_THROWS_WITH_AS(read_curve_csv(short_row), doctest::Contains("line 2"), Error);
}

TEST_CASE("curve CSV round trip") {
  eigencurve::Eigencurve curve{quartic::WindingPair(3, 1), {complex(1e-3, 2e-3), complex(0.67, 1.0)}, {1e-12, -3e-11},
                               eigencurve::TraceStatus::reached_radius, 0.02};
  std::stringstream buffer;
  write_curve_csv(buffer, curve);
  CHECK(buffer.str().starts_with("re_E,im_E,residual\n"));
  const CurveTable back = read_curve_csv(buffer);
  CHECK(back.energies == curve.points);
  CHECK(back.residuals == curve.residuals);
}

TEST_CASE("classification JSON round trip") {
  classify::Classification periodic;
  periodic.verdict = classify::Verdict::periodic;
  periodic.period = 4.25;
  periodic.winding = quartic::WindingPair(5, 2);
  periodic.closure_defect = 3e-7;
  periodic.horizon = 200.0;
  const json j = to_json(periodic);
  CHECK(j.at("verdict") == "periodic");
  CHECK(j.at("winding").at("n") == 5);
  CHECK_FALSE(j.contains("cause"));
  const classify::Classification back = classification_from_json(json::parse(j.dump()));
  CHECK(back.verdict == periodic.verdict);
  CHECK(*back.period == *periodic.period);
  CHECK(*back.winding == *periodic.winding);
  CHECK(back.closure_defect == periodic.closure_defect);

  classify::Classification unknown;
  unknown.cause = "escaped at t = 3";
  const json u = to_json(unknown);
  CHECK(u.at("period").is_null());
  CHECK(u.at("winding").is_null());
  CHECK(classification_from_json(u).cause == unknown.cause);
  CHECK_THROWS_AS(classification_from_json(json{{"verdict", "maybe"}}), Error);
}

TEST_CASE("manifest JSON round trip") {
  RunManifest m{"trajectory", {{"energy", "-1"}, {"tmax", 40.0}}, "1.0.0", 0.25, {"orbit.csv", "orbit.manifest.json"}};
  const RunManifest back = manifest_from_json(json::parse(to_json(m).dump()));
  CHECK(back.command == m.command);
  CHECK(back.parameters == m.parameters);
  CHECK(back.version == m.version);
  CHECK(back.wall_time_s == m.wall_time_s);
  CHECK(back.outputs == m.outputs);
}
