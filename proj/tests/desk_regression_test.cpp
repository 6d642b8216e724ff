#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "doctest.h"
#include "support/desk_eval.hpp"

#ifndef HOLO_TEST_DATA_DIR
#error "HOLO_TEST_DATA_DIR must point at tests/data"
#endif

using namespace holo;

namespace {

const std::filesystem::path kBaseline = std::filesystem::path(HOLO_TEST_DATA_DIR) / "desk_baseline.txt";

struct Row {
  double random_nonopt, random_gs10, convergent_nonopt, bleached_nonopt, residual_first, residual_last;
};

std::map<std::string, Row> read_baseline() {
  std::ifstream in(kBaseline);
  REQUIRE_MESSAGE(in, "missing " << kBaseline);
  std::map<std::string, Row> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name;
    Row r{};
    ls >> name >> r.random_nonopt >> r.random_gs10 >> r.convergent_nonopt >> r.bleached_nonopt >> r.residual_first >>
        r.residual_last;
    REQUIRE(ls);
    out[name] = r;
  }
  return out;
}

}  // namespace

TEST_SUITE("desk_regression") {
  TEST_CASE("desk scores match the frozen baseline") {
    const auto scores = testing::evaluate_desk();
    if (const char* out = std::getenv("HOLO_WRITE_DESK_BASELINE")) {
      std::ofstream f(out);
      f << "# name random_nonopt random_gs10 convergent_nonopt bleached_nonopt gs_residual_1 gs_residual_10\n"
        << "# 256x256, scaled projection geometry, seed " << testing::kDeskSeed << ", PSNR in dB\n";
      f << std::setprecision(10);
      for (const auto& s : scores) {
        f << s.name << ' ' << s.random_nonopt << ' ' << s.random_gs10 << ' ' << s.convergent_nonopt << ' '
          << s.bleached_nonopt << ' ' << s.gs_residual.front() << ' ' << s.gs_residual.back() << '\n';
      }
      MESSAGE("baseline written to " << out);
    }
    const auto base = read_baseline();
    REQUIRE(base.size() == scores.size());
    for (const auto& s : scores) {
      CAPTURE(s.name);
      const Row& b = base.at(s.name);
      CHECK(std::abs(s.random_nonopt - b.random_nonopt) <= 0.01);
      CHECK(std::abs(s.random_gs10 - b.random_gs10) <= 0.01);
      CHECK(std::abs(s.convergent_nonopt - b.convergent_nonopt) <= 0.01);
      CHECK(std::abs(s.bleached_nonopt - b.bleached_nonopt) <= 0.01);
      CHECK(s.gs_residual.front() == doctest::Approx(b.residual_first).epsilon(1e-6));
      CHECK(s.gs_residual.back() == doctest::Approx(b.residual_last).epsilon(1e-6));
      CHECK(s.gs_residual.back() < s.gs_residual.front());
      for (std::size_t k = 1; k < s.gs_residual.size(); ++k) CHECK(s.gs_residual[k] <= s.gs_residual[k - 1]);
    }
  }
}
