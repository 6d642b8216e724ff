#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "doctest.h"
#include "holo/diffraction.hpp"
#include "holo/error.hpp"
#include "holo/phase_init.hpp"
#include "holo/pipeline.hpp"
#include "support/test_util.hpp"

using namespace holo;
using holo::testing::rel_l2;

namespace {

constexpr double kLambda = 532e-9;
constexpr double kPs = 8e-6;
constexpr double kZ = 0.05;
constexpr double kPi = std::numbers::pi;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

ComplexField gaussian_envelope_field(std::size_t n, Pitch pitch, double sigma_px, std::uint64_t seed) {
  auto f = testing::random_field(n, n, pitch, kLambda, seed);
  std::vector<Complex> s(f.samples().begin(), f.samples().end());
  const double c = static_cast<double>(n / 2);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t q = 0; q < n; ++q) {
      const double d2 = (r - c) * (r - c) + (q - c) * (q - c);
      s[r * n + q] *= std::exp(-d2 / (2.0 * sigma_px * sigma_px));
    }
  }
  return f.with_samples(std::move(s));
}

double rel_l2_region(const ComplexField& a, const ComplexField& b, std::size_t lo, std::size_t hi) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t r = lo; r < hi; ++r) {
    for (std::size_t c = lo; c < hi; ++c) {
      num += std::norm(a(r, c) - b(r, c));
      den += std::norm(b(r, c));
    }
  }
  return std::sqrt(num / den);
}

// Classic single-transform Fresnel integral on a centered grid. Output pitch is
// lambda z / (N p); with z = N p^2 / lambda it equals the input pitch.
ComplexField textbook_fresnel(const ComplexField& u, double z) {
  const std::size_t n = u.rows();
  const double p = u.pitch().x;
  const double lz = u.wavelength() * z;
  const double half = static_cast<double>(n / 2);
  std::vector<Complex> dft(n * n);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      const long long prod = (static_cast<long long>(m) - static_cast<long long>(n / 2)) *
                             (static_cast<long long>(k) - static_cast<long long>(n / 2));
      const long long r = ((prod % static_cast<long long>(n)) + static_cast<long long>(n)) % static_cast<long long>(n);
      dft[m * n + k] = std::polar(1.0, -2.0 * kPi * static_cast<double>(r) / static_cast<double>(n));
    }
  }
  std::vector<Complex> pre(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double y = (r - half) * p;
      const double x = (c - half) * p;
      pre[r * n + c] = u(r, c) * std::polar(1.0, kPi * (x * x + y * y) / lz);
    }
  }
  std::vector<Complex> tmp(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t m = 0; m < n; ++m) {
      Complex acc = 0.0;
      for (std::size_t c = 0; c < n; ++c) acc += dft[m * n + c] * pre[r * n + c];
      tmp[r * n + m] = acc;
    }
  }
  const double pd = lz / (static_cast<double>(n) * p);
  const double carrier = 2.0 * kPi * std::fmod(z / u.wavelength(), 1.0);
  const Complex constant = p * p * std::polar(1.0, carrier) / Complex(0.0, lz);
  std::vector<Complex> out(n * n);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t q = 0; q < n; ++q) {
      Complex acc = 0.0;
      for (std::size_t r = 0; r < n; ++r) acc += dft[m * n + r] * tmp[r * n + q];
      const double y = (m - half) * pd;
      const double x = (q - half) * pd;
      out[m * n + q] = constant * std::polar(1.0, kPi * (x * x + y * y) / lz) * acc;
    }
  }
  return ComplexField(n, n, {pd, pd}, u.wavelength(), std::move(out));
}

}  // namespace

TEST_SUITE("diffraction") {
  TEST_CASE("default projection geometry gives a wide window") {
    const auto plan = make_plan(0.5, {18.7e-6, 18.7e-6}, {3.74e-6, 3.74e-6}, kLambda, {1024, 1024});
    CHECK(plan.scale().x == doctest::Approx(0.2));
    const double k = 532e-9 * 0.5 / (2.0 * 0.2 * 18.7e-6 * 18.7e-6);
    CHECK(k == doctest::Approx(1901.7).epsilon(1e-4));
    CHECK(plan.band_limit_x() == 1901);
    CHECK(plan.band_limit_y() == 1901);
    CHECK(plan.band_limit_x() > 1024);
  }

  TEST_CASE("make_plan rejects invalid geometry") {
    CHECK(code_of([] { make_plan(0.0, {kPs, kPs}, {kPs, kPs}, kLambda, {32, 32}); }) == ErrorCode::InvalidGeometry);
    CHECK(code_of([] { make_plan(kZ, {0.0, kPs}, {kPs, kPs}, kLambda, {32, 32}); }) == ErrorCode::InvalidGeometry);
    CHECK(code_of([] { make_plan(kZ, {kPs, kPs}, {kPs, -kPs}, kLambda, {32, 32}); }) == ErrorCode::InvalidGeometry);
    CHECK(code_of([] { make_plan(kZ, {kPs, kPs}, {kPs, kPs}, 0.0, {32, 32}); }) == ErrorCode::InvalidGeometry);
    CHECK(code_of([] { make_plan(kZ, {kPs, kPs}, {kPs, kPs}, kLambda, {31, 32}); }) == ErrorCode::InvalidGeometry);
    CHECK(code_of([] { make_plan(kZ, {kPs, kPs}, {kPs, kPs}, kLambda, {0, 0}); }) == ErrorCode::InvalidGeometry);
  }

  TEST_CASE("empty band-limit window is degenerate") {
    // K = floor(532e-9 * 1e-3 / (2 * 5 * 1e-8)) = floor(0.0053) = 0
    CHECK(band_limit_half_width(kLambda, 1e-3, 100e-6, 5.0) == 0.0);
    CHECK(band_limit_half_width(kLambda, 0.5, 18.7e-6, 0.2) == 1901.0);
    CHECK(code_of([] { make_plan(1e-3, {100e-6, 100e-6}, {500e-6, 500e-6}, kLambda, {32, 32}); }) ==
          ErrorCode::DegeneratePlan);
    // Negative distances use |z|.
    CHECK(band_limit_half_width(kLambda, -0.05, kPs, 2.0) == band_limit_half_width(kLambda, 0.05, kPs, 2.0));
  }

  TEST_CASE("zero field maps to zero both ways") {
    const auto plan = make_plan(kZ, {kPs, kPs}, {2 * kPs, 2 * kPs}, kLambda, {32, 32});
    for (const Complex& z : propagate(plan, ComplexField(32, 32, {kPs, kPs}, kLambda)).samples()) CHECK(z == Complex{});
    for (const Complex& z : propagate_inverse(plan, ComplexField(32, 32, {2 * kPs, 2 * kPs}, kLambda)).samples()) {
      CHECK(z == Complex{});
    }
  }

  TEST_CASE("output sampling and mismatch checks") {
    const auto plan = make_plan(kZ, {kPs, kPs}, {2 * kPs, 3 * kPs}, kLambda, {16, 32});
    const auto u = testing::random_field(16, 32, {kPs, kPs}, kLambda, 1);
    const auto v = propagate(plan, u);
    CHECK(v.pitch() == Pitch{2 * kPs, 3 * kPs});
    CHECK(v.shape() == Shape{16, 32});
    CHECK(v.wavelength() == kLambda);
    const auto w = propagate_inverse(plan, v);
    CHECK(w.pitch() == Pitch{kPs, kPs});

    CHECK(code_of([&] { propagate(plan, testing::random_field(32, 32, {kPs, kPs}, kLambda, 1)); }) ==
          ErrorCode::PlanMismatch);
    CHECK(code_of([&] { propagate(plan, testing::random_field(16, 32, {kPs, 2 * kPs}, kLambda, 1)); }) ==
          ErrorCode::PlanMismatch);
    CHECK(code_of([&] { propagate(plan, testing::random_field(16, 32, {kPs, kPs}, 633e-9, 1)); }) ==
          ErrorCode::PlanMismatch);
    CHECK(code_of([&] { propagate_inverse(plan, u); }) == ErrorCode::PlanMismatch);
  }

  TEST_CASE("centered impulse matches the direct sum") {
    std::vector<Complex> s(32 * 32);
    s[16 * 32 + 16] = 1.0;
    const ComplexField u(32, 32, {kPs, kPs}, kLambda, s);
    const auto plan = make_plan(kZ, {kPs, kPs}, {2 * kPs, 2 * kPs}, kLambda, {32, 32});
    const auto fast = propagate(plan, u);
    const auto slow = propagate_direct_dft(kZ, {kPs, kPs}, {2 * kPs, 2 * kPs}, kLambda, {}, u);
    CHECK(rel_l2(fast.samples(), slow.samples()) <= 1e-2);
  }

  TEST_CASE("oracle equivalence over scales and shifts") {
    for (double s : {0.2, 1.0, 2.0, 5.0}) {
      for (bool shifted : {false, true}) {
        const double pd = s * kPs;
        const Offset shift = shifted ? Offset{10 * pd, 10 * pd} : Offset{};
        const auto u = testing::random_field(32, 32, {kPs, kPs}, kLambda, 100 + static_cast<int>(10 * s) + shifted);
        const auto plan = make_plan(kZ, {kPs, kPs}, {pd, pd}, kLambda, {32, 32}, shift);
        const double fwd = rel_l2(propagate(plan, u).samples(),
                                  propagate_direct_dft(kZ, {kPs, kPs}, {pd, pd}, kLambda, shift, u).samples());
        CAPTURE(s);
        CAPTURE(shifted);
        CHECK(fwd <= 1e-2);
        // These geometries keep the whole kernel inside the window, so agreement is to rounding.
        CHECK(fwd <= 1e-9);

        const auto v = testing::random_field(32, 32, {pd, pd}, kLambda, 200 + static_cast<int>(10 * s) + shifted);
        const double inv = rel_l2(propagate_inverse(plan, v).samples(),
                                  propagate_direct_dft(-kZ, {pd, pd}, {kPs, kPs}, kLambda, -shift, v).samples());
        CHECK(inv <= 1e-2);
      }
    }
  }

  TEST_CASE("window error stays at the edges") {
    // s = 5, z = 30 mm: K = 24 < 31, so long kernel taps are dropped.
    const double pd = 5 * kPs;
    const auto plan = make_plan(0.03, {kPs, kPs}, {pd, pd}, kLambda, {32, 32});
    REQUIRE(plan.band_limit_x() == 24);
    const auto u = gaussian_envelope_field(32, {kPs, kPs}, 6.0, 42);
    const auto fast = propagate(plan, u);
    const auto slow = propagate_direct_dft(0.03, {kPs, kPs}, {pd, pd}, kLambda, {}, u);
    const double overall = rel_l2(fast.samples(), slow.samples());
    const double central = rel_l2_region(fast, slow, 8, 24);
    CHECK(overall <= 1e-1);
    CHECK(central <= 1e-6);
    CHECK(overall > central);
  }

  TEST_CASE("linearity") {
    const auto plan = make_plan(kZ, {kPs, kPs}, {0.2 * kPs, 0.2 * kPs}, kLambda, {64, 64}, {3e-5, -1e-5});
    const auto u = testing::random_field(64, 64, {kPs, kPs}, kLambda, 1);
    const auto v = testing::random_field(64, 64, {kPs, kPs}, kLambda, 2);
    const Complex a{0.3, -1.2};
    const Complex b{-2.0, 0.5};
    std::vector<Complex> mix(u.samples().size());
    for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = a * u.samples()[k] + b * v.samples()[k];
    const auto lhs = propagate(plan, u.with_samples(mix));
    const auto pu = propagate(plan, u);
    const auto pv = propagate(plan, v);
    std::vector<Complex> rhs(mix.size());
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = a * pu.samples()[k] + b * pv.samples()[k];
    CHECK(rel_l2(lhs.samples(), rhs) <= 1e-10);

    std::vector<Complex> sum(mix.size());
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = u.samples()[k] + v.samples()[k];
    std::vector<Complex> psum(mix.size());
    for (std::size_t k = 0; k < sum.size(); ++k) psum[k] = pu.samples()[k] + pv.samples()[k];
    CHECK(rel_l2(propagate(plan, u.with_samples(sum)).samples(), psum) <= 1e-10);
  }

  TEST_CASE("round trip of a band-limited field") {
    // 128-sample version of the projection geometry; Gaussian amplitude under the
    // convergent illumination keeps the spectrum inside the central half band.
    RunConfig cfg = scaled_config(128);
    cfg.offset = {};
    auto spec = convergent_spec(cfg);
    const auto plan = make_run_plan(cfg);
    std::vector<double> amp(128 * 128);
    for (std::size_t r = 0; r < 128; ++r) {
      for (std::size_t c = 0; c < 128; ++c) {
        const double d2 = (r - 64.0) * (r - 64.0) + (c - 64.0) * (c - 64.0);
        amp[r * 128 + c] = std::exp(-d2 / (2.0 * 8.0 * 8.0));
      }
    }
    const auto u = field_from_amplitude_and_phase(RealImage(128, 128, amp), convergent_phase(spec),
                                                  plan.source_pitch(), cfg.wavelength);
    const auto back = propagate_inverse(plan, propagate(plan, u));
    double mse = 0.0;
    for (std::size_t r = 32; r < 96; ++r) {
      for (std::size_t c = 32; c < 96; ++c) {
        const double d = std::abs(back(r, c)) - amp[r * 128 + c];
        mse += d * d;
      }
    }
    mse /= 64.0 * 64.0;
    const double psnr_db = 10.0 * std::log10(1.0 / mse);
    MESSAGE("round-trip amplitude PSNR " << psnr_db << " dB");
    CHECK(psnr_db >= 40.0);
  }

  TEST_CASE("direct sum of a single sample has the closed-form phase") {
    std::vector<Complex> s(16 * 16);
    s[8 * 16 + 8] = 1.0;
    const ComplexField u(16, 16, {kPs, kPs}, kLambda, s);
    const double pd = 3 * kPs;
    const Offset shift{5e-5, -2e-5};
    const auto out = propagate_direct_dft(kZ, {kPs, kPs}, {pd, pd}, kLambda, shift, u);
    double worst = 0.0;
    for (std::size_t r = 0; r < 16; ++r) {
      for (std::size_t c = 0; c < 16; ++c) {
        const double x = (static_cast<double>(c) - 8.0) * pd + shift.x;
        const double y = (static_cast<double>(r) - 8.0) * pd + shift.y;
        const double expected = kPi * (x * x + y * y) / (kLambda * kZ) + 2.0 * kPi * std::fmod(kZ / kLambda, 1.0) - kPi / 2;
        worst = std::max(worst, std::abs(testing::wrap_pi(std::arg(out(r, c)) - expected)));
        CHECK(std::abs(out(r, c)) == doctest::Approx(kPs * kPs / (kLambda * kZ)).epsilon(1e-12));
      }
    }
    CHECK(worst <= 1e-9);
  }

  TEST_CASE("direct sum basics") {
    const auto zero = propagate_direct_dft(kZ, {kPs, kPs}, {kPs, kPs}, kLambda, {}, ComplexField(8, 8, {kPs, kPs}, kLambda));
    for (const Complex& z : zero.samples()) CHECK(z == Complex{});
    const ComplexField big(130, 130, {kPs, kPs}, kLambda);
    CHECK(code_of([&] { propagate_direct_dft(kZ, {kPs, kPs}, {kPs, kPs}, kLambda, {}, big); }) ==
          ErrorCode::OracleTooLarge);
    CHECK(code_of([&] {
            propagate_direct_dft(kZ, {kPs, kPs}, {kPs, kPs}, kLambda, {}, ComplexField(8, 8, {kPs, kPs}, kLambda),
                                 {4, false});
          }) == ErrorCode::OracleTooLarge);
    const auto allowed = propagate_direct_dft(kZ, {kPs, kPs}, {kPs, kPs}, kLambda, {},
                                              ComplexField(8, 8, {kPs, kPs}, kLambda), {4, true});
    CHECK(allowed.shape() == Shape{8, 8});
  }

  TEST_CASE("direct sum agrees with a single-transform Fresnel integral") {
    const std::size_t n = 32;
    const double z = static_cast<double>(n) * kPs * kPs / kLambda;
    const auto u = testing::random_field(n, n, {kPs, kPs}, kLambda, 77);
    const auto ref = textbook_fresnel(u, z);
    REQUIRE(ref.pitch().x == doctest::Approx(kPs).epsilon(1e-12));
    const auto direct = propagate_direct_dft(z, {kPs, kPs}, {kPs, kPs}, kLambda, {}, u);
    CHECK(rel_l2(direct.samples(), ref.samples()) <= 1e-6);
  }

  TEST_CASE("plans are shareable across threads") {
    const auto plan = make_plan(kZ, {kPs, kPs}, {0.5 * kPs, 0.5 * kPs}, kLambda, {64, 64}, {1e-5, 0.0});
    std::vector<ComplexField> inputs;
    std::vector<ComplexField> expected;
    for (int i = 0; i < 4; ++i) {
      inputs.push_back(testing::random_field(64, 64, {kPs, kPs}, kLambda, 500 + i));
      expected.push_back(propagate(plan, inputs.back()));
    }
    std::vector<std::vector<Complex>> got(4);
    std::vector<std::thread> pool;
    for (int i = 0; i < 4; ++i) {
      pool.emplace_back([&, i] {
        for (int rep = 0; rep < 5; ++rep) {
          const auto out = propagate(plan, inputs[i]);
          got[i].assign(out.samples().begin(), out.samples().end());
        }
      });
    }
    for (auto& t : pool) t.join();
    for (int i = 0; i < 4; ++i) {
      CHECK(std::equal(got[i].begin(), got[i].end(), expected[i].samples().begin()));
    }
  }

  TEST_CASE("runtime grows like N^2 log N") {
    auto seconds = [](std::size_t n) {
      const RunConfig cfg = scaled_config(n);
      const auto plan = make_run_plan(cfg);
      const auto u = testing::random_field(n, n, plan.source_pitch(), cfg.wavelength, 3);
      double best = 1e9;
      for (int rep = 0; rep < 7; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto v = propagate(plan, u);
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      }
      return best;
    };
    const double t256 = seconds(256);
    const double t512 = seconds(512);
    const double t1024 = seconds(1024);
    MESSAGE("propagate: 256 " << t256 << " s, 512 " << t512 << " s, 1024 " << t1024 << " s");
    CHECK(t512 / t256 <= 5.0);
    CHECK(t1024 / t512 <= 5.0);
  }
}
