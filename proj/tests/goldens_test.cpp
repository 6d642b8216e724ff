#include <fstream>
#include <map>
#include <set>

#include "doctest.h"
#include "holo/diffraction.hpp"
#include "holo/error.hpp"
#include "holo/goldens.hpp"
#include "holo/io.hpp"
#include "support/test_util.hpp"

using namespace holo;
using holo::testing::TempDir;

namespace {

std::map<std::string, std::string> dir_contents(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) out[e.path().filename().string()] = testing::slurp(e.path());
  return out;
}

}  // namespace

TEST_SUITE("goldens") {
  TEST_CASE("same seed gives byte-identical suites") {
    TempDir a;
    TempDir b;
    TempDir c;
    goldens::emit_goldens(a.path(), 7);
    goldens::emit_goldens(b.path(), 7);
    goldens::emit_goldens(c.path(), 8);
    const auto ca = dir_contents(a.path());
    CHECK(ca == dir_contents(b.path()));
    const auto cc = dir_contents(c.path());
    CHECK(ca.at("propagate_s1.in.cfld") != cc.at("propagate_s1.in.cfld"));
  }

  TEST_CASE("suite content") {
    TempDir dir;
    const auto m = goldens::emit_goldens(dir.path(), 0);
    std::set<std::string> ops;
    std::set<double> scales;
    bool gs3 = false;
    for (const auto& c : m.cases) {
      ops.insert(c.op);
      if (c.op == "propagate") scales.insert(c.number("dest_pitch_x") / c.number("source_pitch_x"));
      if (c.op == "gs") gs3 = c.number("iterations") == 3.0;
    }
    CHECK(ops == std::set<std::string>{"propagate", "propagate_inverse", "convergent_phase", "encode_phase_only",
                                       "encode_bleached", "gs"});
    REQUIRE(scales.size() == 4);
    auto it = scales.begin();
    for (double s : {0.2, 1.0, 2.0, 5.0}) CHECK(*it++ == doctest::Approx(s));
    CHECK(gs3);
  }

  TEST_CASE("manifest loads, validates and replays") {
    TempDir dir;
    const auto written = goldens::emit_goldens(dir.path(), 3);
    const auto m = goldens::load_manifest(dir.path());
    CHECK(m.seed == 3);
    CHECK(m.version == 1);
    REQUIRE(m.cases.size() == written.cases.size());
    for (std::size_t i = 0; i < m.cases.size(); ++i) {
      CHECK(m.cases[i].id == written.cases[i].id);
      CHECK(m.cases[i].params == written.cases[i].params);
      CHECK(m.cases[i].tolerance == written.cases[i].tolerance);
    }
    for (const auto& r : goldens::replay(m)) {
      CAPTURE(r.id);
      CHECK(r.pass);
      CHECK(r.error <= r.tolerance);
    }
    CHECK(goldens::load_manifest(dir / goldens::kManifestName).cases.size() == m.cases.size());
  }

  TEST_CASE("propagation cases agree with the direct sum") {
    // Stand-in for an independent consumer: replay every propagation case
    // through the brute-force oracle using only the manifest parameters.
    TempDir dir;
    goldens::emit_goldens(dir.path(), 11);
    const auto m = goldens::load_manifest(dir.path());
    int checked = 0;
    for (const auto& c : m.cases) {
      if (c.op != "propagate" && c.op != "propagate_inverse") continue;
      const auto input = io::read_field(m.directory / c.input);
      const auto expected = io::read_field(m.directory / c.expected);
      const Pitch src{c.number("source_pitch_x"), c.number("source_pitch_y")};
      const Pitch dst{c.number("dest_pitch_x"), c.number("dest_pitch_y")};
      const Offset shift{c.number("shift_x"), c.number("shift_y")};
      const double z = c.number("z");
      const auto oracle = c.op == "propagate"
                              ? propagate_direct_dft(z, src, dst, c.number("wavelength"), shift, input)
                              : propagate_direct_dft(-z, dst, src, c.number("wavelength"), -shift, input);
      CAPTURE(c.id);
      CHECK(testing::rel_l2(expected.samples(), oracle.samples()) <= c.tolerance);
      ++checked;
    }
    CHECK(checked == 10);
  }

  TEST_CASE("missing files fail validation") {
    TempDir dir;
    const auto m = goldens::emit_goldens(dir.path(), 0);
    std::filesystem::remove(dir / m.cases[2].expected.string());
    try {
      goldens::load_manifest(dir.path());
      FAIL("expected IoFailure");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IoFailure);
    }
  }

  TEST_CASE("grammar errors") {
    TempDir dir;
    auto load = [&](const std::string& text) {
      std::ofstream(dir / "m.txt") << text;
      return goldens::load_manifest(dir / "m.txt");
    };
    CHECK(load("holo-golden-manifest 1\n# comment\nseed 5\n").seed == 5);
    CHECK_THROWS_AS(load("golden 1\n"), Error);
    CHECK_THROWS_AS(load("holo-golden-manifest 2\n"), Error);
    CHECK_THROWS_AS(load(""), Error);
    CHECK_THROWS_AS(load("holo-golden-manifest 1\ncase a\nop gs\n"), Error);
    CHECK_THROWS_AS(load("holo-golden-manifest 1\nop gs\n"), Error);
    CHECK_THROWS_AS(load("holo-golden-manifest 1\ncase a\nbogus 1\nend\n"), Error);
    CHECK_THROWS_AS(goldens::load_manifest(dir / "absent.txt"), Error);
  }

  TEST_CASE("case parameters") {
    goldens::GoldenCase c;
    c.id = "x";
    c.params = {{"z", "0.05"}, {"encoding", "bleached"}};
    CHECK(c.number("z") == 0.05);
    CHECK(c.text("encoding") == "bleached");
    CHECK_THROWS_AS(c.number("encoding"), Error);
    CHECK_THROWS_AS(c.number("absent"), Error);
  }
}
