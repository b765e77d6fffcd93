#include "towers/errors.hpp"
#include "towers/io.hpp"
#include "towers/random_lattice.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace towers;

TEST_CASE("parse a lattice file") {
  const auto m = parse_model(R"({"sites": 3, "bonds": [[1, 2, -1], [2, 3, -0.5], [3, 3, 0.25]], "interactions": [-1, -2, -3]})");
  CHECK(m.lattice.n_sites() == 3);
  CHECK(m.lattice.hopping(0, 1) == -1.0);
  CHECK(m.lattice.hopping(2, 1) == -0.5);
  CHECK(m.lattice.hopping(2, 2) == 0.25);
  CHECK(m.lattice.interactions() == std::vector<double>{-1, -2, -3});
  CHECK_FALSE(m.phonons);
  CHECK_FALSE(m.lattice.bipartition());
}

TEST_CASE("scalar interactions are broadcast") {
  const auto m = parse_model(R"({"sites": 4, "bonds": [[1, 2, -1]], "interactions": -2.5})");
  CHECK(m.lattice.interactions() == std::vector<double>(4, -2.5));
}

TEST_CASE("phonon block") {
  const auto m = parse_model(R"({"sites": 2, "bonds": [[1, 2, -1]], "interactions": 0,
    "phonons": {"modes": 2, "mass": 1.5, "omega": [1, 2], "coupling": [[1, 0], [0, 0.5]]}})");
  REQUIRE(m.phonons);
  CHECK(m.phonons->masses == std::vector<double>{1.5, 1.5});
  CHECK(m.phonons->frequencies == std::vector<double>{1, 2});
  CHECK(m.phonons->coupling(1, 1) == 0.5);
  CHECK(m.phonons->quartic == std::vector<double>{0, 0});
  CHECK(m.phonons->n_max == std::vector<int>{4, 4});
}

TEST_CASE("reversed duplicate bonds") {
  const auto same = parse_model(R"({"sites": 2, "bonds": [[1, 2, -1], [2, 1, -1]], "interactions": 0})");
  CHECK(same.lattice.hopping(0, 1) == -1.0);
  CHECK_THROWS_AS(parse_model(R"({"sites": 2, "bonds": [[1, 2, -1], [2, 1, -2]], "interactions": 0})"),
                  InputError);
}

TEST_CASE("malformed input is rejected") {
  const char* bad[] = {
      "not json",
      R"({"bonds": [], "interactions": 0})",
      R"({"sites": 2, "bonds": [[1, 3, -1]], "interactions": 0})",
      R"({"sites": 2, "bonds": [[0, 1, -1]], "interactions": 0})",
      R"({"sites": 2, "bonds": [[1, 2]], "interactions": 0})",
      R"({"sites": 2, "bonds": [[1, 2, -1]], "interactions": [1, 2, 3]})",
      R"({"sites": 2, "bonds": [[1, 2, -1]], "interactions": 0, "colour": 1})",
      R"({"sites": 2, "bonds": [[1, 2, -1]], "interactions": 0, "bipartition": [0, 0]})",
      R"({"sites": 2, "bonds": [[1, 2, -1]], "interactions": 0, "phonons": {"modes": 1, "mass": -1, "omega": 1, "coupling": [[1, 1]]}})",
      R"({"sites": 2, "bonds": [[1, 2, -1]], "interactions": 0, "phonons": {"modes": 1, "mass": 1, "omega": 1, "coupling": [[1]]}})",
      R"({"sites": 2, "bonds": [[1, 2, "x"]], "interactions": 0})",
  };
  for (const char* text : bad) CHECK_THROWS_AS(parse_model(text), InputError);
  CHECK_THROWS_AS(load_model("/nonexistent/model.json"), InputError);
}

TEST_CASE("canonical round trip is byte-identical") {
  for (std::uint64_t i = 0; i < 30; ++i) {
    RandomLatticeOptions o;
    o.diagonal_probability = 0.2;
    const auto spec = random_case(77, i, o);
    const std::string text = serialize_model(spec);
    const auto back = parse_model(text);
    CHECK(back.lattice.hopping() == spec.hopping());
    CHECK(back.lattice.interactions() == spec.interactions());
    CHECK(serialize_model(back.lattice) == text);
  }
  const auto lieb = generate_lieb_chain(2, 1.0, -3.0);
  const LatticeSpec with_parts(lieb.hopping(), lieb.interactions(), detect_bipartition(lieb).assignment);
  auto ph = holstein(6, 0.3, 1.1, 0.9, 2);
  ph.quartic[2] = 0.05;
  const std::string text = serialize_model(with_parts, ph);
  const auto back = parse_model(text);
  REQUIRE(back.phonons);
  REQUIRE(back.lattice.bipartition());
  CHECK(*back.lattice.bipartition() == *with_parts.bipartition());
  CHECK(back.phonons->coupling == ph.coupling);
  CHECK(back.phonons->quartic == ph.quartic);
  CHECK(serialize_model(back.lattice, back.phonons) == text);
}

TEST_CASE("file round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "lieb_towers_io_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "model.json").string();
  const auto spec = generate_chain(4, 1.0, -2.0);
  write_text(path, serialize_model(spec));
  const auto back = load_model(path);
  CHECK(back.lattice.hopping() == spec.hopping());
  std::filesystem::remove_all(dir);
}

TEST_CASE("report fields") {
  SpectrumRecord r;
  r.energy = -2 - 2 * std::sqrt(2.0);
  r.sector = {1, 1};
  r.s = HalfInt::from_twice(0);
  r.j = HalfInt::from_twice(2);
  r.m_j = HalfInt::from_twice(-1);
  const Json j = to_json(r);
  CHECK(j["energy"].get<double>() == r.energy);
  CHECK(j["sector"] == Json::array({1, 1}));
  CHECK(j.contains("casimir_residual"));
  CHECK(j.contains("cluster"));
  TowerReport t;
  t.entries = {{HalfInt::from_twice(0), -1.0}, {HalfInt::from_twice(2), 0.0}};
  t.strict = true;
  const Json rep = spectrum_report({r}, {t});
  CHECK(rep["schema_version"] == kReportSchemaVersion);
  CHECK(rep["records"].size() == 1);
  CHECK(rep["towers"].size() == 1);
  // Doubles survive text serialization exactly.
  CHECK(Json::parse(dump(rep))["records"][0]["energy"].get<double>() == r.energy);
  CHECK(dump(rep).back() == '\n');
  WitnessReport w;
  w.energy_ok = w.trace_ok = w.diagonal_ok = true;
  const Json wj = to_json(w);
  for (const char* key : {"e0", "e_abs_psi", "trace_abs", "max_diag", "psd_min_eig", "pass_flags"})
    CHECK(wj.contains(key));
  CHECK(wj["pass"] == true);
}
