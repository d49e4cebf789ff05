#include <cmath>
#include <sstream>

#include "doctest.h"

#include "conicopf/matpower.hpp"
#include "conicopf/network.hpp"

using namespace conicopf;

namespace {

std::string data_path(const std::string& name) {
  return std::string(CONICOPF_DATA_DIR) + "/" + name;
}

const char* kTinyCase = R"(function mpc = tiny
mpc.baseMVA = 100;
mpc.bus = [
	1	3	0	0	0	0	1	1	0	230	1	1.1	0.9;
	2	1	50	10	0	0	1	1	0	230	1	1.1	0.9;
];
mpc.gen = [
	1	50	0	80	-80	1	100	1	120	0;
];
mpc.branch = [
	1	2	0.01	0.1	0.02	0	0	0	0	0	1	-360	360;
];
mpc.gencost = [
	2	0	0	3	0.1	20	5;
];
)";

}  // namespace

TEST_CASE("case9 parses with expected table sizes") {
  RawCase raw = load_case(data_path("case9.m"));
  CHECK(raw.name == "case9");
  CHECK(raw.base_mva == 100.0);
  CHECK(raw.bus.size() == 9);
  CHECK(raw.gen.size() == 3);
  CHECK(raw.branch.size() == 9);
  CHECK(raw.gencost.size() == 3);
}

TEST_CASE("rateA = 0 is stored verbatim by the parser") {
  RawCase raw = parse_case_string(kTinyCase);
  CHECK(raw.branch[0][5] == 0.0);
}

TEST_CASE("missing gencost is a structural error") {
  std::string text(kTinyCase);
  auto pos = text.find("mpc.gencost");
  text = text.substr(0, pos);
  CHECK_THROWS_AS(parse_case_string(text), ParseError);
}

TEST_CASE("malformed rows carry a line number") {
  std::string text(kTinyCase);
  auto pos = text.find("1	2	0.01");
  text.insert(pos, "1 2;\n");
  try {
    parse_case_string(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
}

TEST_CASE("validate converts case9 to per-unit") {
  RawCase raw = load_case(data_path("case9.m"));
  Network net = validate(raw);
  CHECK(net.buses.size() == 9);
  CHECK(net.generators.size() == 3);
  CHECK(net.branches.size() == 9);
  CHECK(net.reference_bus == 0);
  CHECK(net.buses[0].id == 1);  // bus 1 is the reference in case9

  // Per-unit demand: bus 5 carries 90 MW, 30 MVAr on a 100 MVA base.
  bool found = false;
  for (std::size_t k = 0; k < net.buses.size(); ++k) {
    if (net.buses[k].id == 5) {
      found = true;
      CHECK(net.buses[k].p_demand == doctest::Approx(0.9).epsilon(1e-12));
      CHECK(net.buses[k].q_demand == doctest::Approx(0.3).epsilon(1e-12));
    }
  }
  CHECK(found);

  // Cost conversion: c2 in $/MW^2 h scales by base^2.
  CHECK(net.generators[0].c2 == doctest::Approx(0.11 * 1e4));
  CHECK(net.generators[0].c1 == doctest::Approx(5.0 * 1e2));
  CHECK(net.generators[0].c0 == doctest::Approx(150.0));
}

TEST_CASE("per-unit consistency against raw tables") {
  RawCase raw = load_case(data_path("case14.m"));
  Network net = validate(raw);
  for (const auto& row : raw.bus) {
    int id = static_cast<int>(row[0]);
    for (const auto& b : net.buses)
      if (b.id == id)
        CHECK(b.p_demand * net.base_mva ==
              doctest::Approx(row[2]).epsilon(1e-12));
  }
}

TEST_CASE("out-of-service generators are dropped") {
  std::string text(kTinyCase);
  auto pos = text.find("mpc.gen = [");
  text.insert(text.find(";", text.find("1	50	0	80")) + 1,
              "\n	2	0	0	10	-10	1	100	0	20	0;");
  pos = text.find("mpc.gencost = [");
  text.insert(text.find(";", pos + 10) + 1, "\n	2	0	0	3	0.1	20	5;");
  RawCase raw = parse_case_string(text);
  REQUIRE(raw.gen.size() == 2);
  Network net = validate(raw);
  CHECK(net.generators.size() == 1);
}

TEST_CASE("Vmin = 0 is rejected") {
  std::string text(kTinyCase);
  auto pos = text.find("1.1	0.9;");
  text.replace(pos, std::string("1.1	0.9;").size(), "1.1	0;");
  RawCase raw = parse_case_string(text);
  CHECK_THROWS_AS(validate(raw), ValidationError);
}

TEST_CASE("piecewise-linear costs are rejected") {
  std::string text(kTinyCase);
  auto pos = text.find("2	0	0	3	0.1	20	5;");
  text.replace(pos, std::string("2	0	0	3	0.1	20	5;").size(),
               "1	0	0	2	0	0	100	2000;");
  RawCase raw = parse_case_string(text);
  CHECK_THROWS_AS(validate(raw), UnsupportedFeatureError);
}

TEST_CASE("zero-impedance branches are rejected") {
  std::string text(kTinyCase);
  auto pos = text.find("1	2	0.01	0.1");
  text.replace(pos, std::string("1	2	0.01	0.1").size(), "1	2	0	0");
  RawCase raw = parse_case_string(text);
  CHECK_THROWS_AS(validate(raw), ValidationError);
}

TEST_CASE("reference bus is remapped to internal index 0") {
  RawCase raw = load_case(data_path("case5.m"));
  Network net = validate(raw);
  CHECK(net.buses[0].id == 4);  // case5's reference is bus 4
  for (const auto& br : net.branches) {
    CHECK(br.from >= 0);
    CHECK(br.from < net.n_buses());
    CHECK(br.to >= 0);
    CHECK(br.to < net.n_buses());
  }
}

TEST_CASE("tap ratio 0 means 1.0 and shift is in radians") {
  RawCase raw = load_case(data_path("case14.m"));
  Network net = validate(raw);
  int taps = 0;
  for (const auto& br : net.branches) {
    CHECK(std::abs(br.tap) > 0.0);
    if (std::abs(std::abs(br.tap) - 1.0) > 1e-12) ++taps;
  }
  CHECK(taps == 3);  // case14 has three transformers
}

TEST_CASE("rateA = 0 becomes an absent limit") {
  Network net = validate(load_case(data_path("case14.m")));
  for (const auto& br : net.branches) CHECK(br.s_limit == kUnlimited);
  Network net5 = validate(load_case(data_path("case5.m")));
  int limited = 0;
  for (const auto& br : net5.branches)
    if (br.s_limit != kUnlimited) ++limited;
  CHECK(limited == 2);  // lines 1-2 (400 MVA) and 4-5 (240 MVA)
}

TEST_CASE("network round-trips through raw tables") {
  for (const char* name : {"case5.m", "case9.m", "case30.m"}) {
    Network net = validate(load_case(data_path(name)));
    Network again = validate(raw_from_network(net));
    REQUIRE(again.buses.size() == net.buses.size());
    REQUIRE(again.generators.size() == net.generators.size());
    REQUIRE(again.branches.size() == net.branches.size());
    for (std::size_t k = 0; k < net.buses.size(); ++k) {
      CHECK(again.buses[k].id == net.buses[k].id);
      CHECK(again.buses[k].p_demand ==
            doctest::Approx(net.buses[k].p_demand).epsilon(1e-14));
      CHECK(again.buses[k].v_min == net.buses[k].v_min);
    }
    for (std::size_t g = 0; g < net.generators.size(); ++g) {
      CHECK(again.generators[g].bus == net.generators[g].bus);
      CHECK(again.generators[g].c2 ==
            doctest::Approx(net.generators[g].c2).epsilon(1e-12));
    }
    for (std::size_t l = 0; l < net.branches.size(); ++l) {
      CHECK(again.branches[l].from == net.branches[l].from);
      CHECK(again.branches[l].to == net.branches[l].to);
      CHECK(std::abs(again.branches[l].series_admittance -
                     net.branches[l].series_admittance) < 1e-12);
      CHECK(std::abs(again.branches[l].tap - net.branches[l].tap) < 1e-12);
      CHECK(again.branches[l].s_limit == net.branches[l].s_limit);
    }
  }
}

TEST_CASE("isolated loaded bus produces a warning") {
  std::string text(kTinyCase);
  auto pos = text.find("	2	1	50");
  text.insert(pos, "	3	1	20	5	0	0	1	1	0	230	1	1.1	0.9;\n");
  RawCase raw = parse_case_string(text);
  Network net = validate(raw);
  CHECK(net.warnings.size() == 1);
}

TEST_CASE("json mirror emits all sections") {
  Network net = validate(load_case(data_path("case9.m")));
  std::ostringstream out;
  write_json(net, out);
  std::string s = out.str();
  CHECK(s.find("\"buses\"") != std::string::npos);
  CHECK(s.find("\"generators\"") != std::string::npos);
  CHECK(s.find("\"branches\"") != std::string::npos);
}
