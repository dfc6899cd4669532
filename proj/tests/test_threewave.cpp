#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "esmix/threewave.hpp"
#include "oracles.hpp"

using namespace esmix::threewave;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector3cd ground() {
  Eigen::Vector3cd v;
  v << 1.0, 0.0, 0.0;
  return v;
}

double p2_of(const Drive& d, double T) {
  return std::norm(propagate(d, 0.0, T, ground()).amplitudes(1));
}

}  // namespace

TEST_CASE("integrator reproduces resonant two-level rotations") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const double h = 0.2 + 0.8 * std::abs(uni(rng));
    const double phi = kPi * uni(rng);
    const double T = 2.0 + 8.0 * std::abs(uni(rng));

    std::complex<double> c0{uni(rng), uni(rng)}, c1{uni(rng), uni(rng)};
    const double n = std::sqrt(std::norm(c0) + std::norm(c1));
    c0 /= n;
    c1 /= n;

    Drive d;
    Pulse p;
    p.leg = 12;
    p.env = Envelope{Shape::flat, 0.0, T};
    p.peak = h;
    p.phase = phi;
    d.pulses = {p};

    Eigen::Vector3cd psi0;
    psi0 << c0, c1, 0.0;
    const auto res = propagate(d, 0.0, T, psi0);

    auto e0 = c0, e1 = c1;
    oracle::two_level_rotation(h, phi, T, e0, e1);
    REQUIRE(std::abs(res.amplitudes(0) - e0) < 1e-10);
    REQUIRE(std::abs(res.amplitudes(1) - e1) < 1e-10);
    REQUIRE(std::abs(res.amplitudes(2)) < 1e-12);
    REQUIRE(res.norm_drift < 1e-10);
  }
}

TEST_CASE("resonant transfer depends only on the pulse area") {
  for (Shape sh : {Shape::flat, Shape::sin2, Shape::smoothtop, Shape::gauss}) {
    for (double area : {0.3, kPi / 4, kPi / 2, 2.0}) {
      Drive d;
      d.pulses = {make_pulse(12, sh, 0.0, 7.0, area)};
      const auto res = propagate(d, 0.0, 7.0, ground());
      REQUIRE(std::norm(res.amplitudes(1)) == Approx(std::sin(area) * std::sin(area)).margin(1e-9));
      REQUIRE(res.norm_drift < 1e-10);
    }
  }
}

TEST_CASE("propagation samples the requested grid exactly") {
  Drive d;
  d.pulses = {make_pulse(12, Shape::sin2, 0.5, 3.5, 1.0)};
  const auto res = propagate(d, 0.0, 5.0, ground(), 50);
  REQUIRE(res.times.size() == 51);
  REQUIRE(res.times.front() == 0.0);
  REQUIRE(res.times.back() == 5.0);
  for (int k = 0; k <= 50; ++k) REQUIRE(res.times[k] == Approx(k * 0.1).margin(1e-12));
  // population monotone bookkeeping: every sample normalized
  for (const auto& p : res.populations)
    REQUIRE(p[0] + p[1] + p[2] == Approx(1.0).margin(1e-9));
}

TEST_CASE("dressed spectrum agrees with the closed-form cubic") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    ThreeLevelParams p;
    p.h12 = std::abs(uni(rng));
    p.h13 = std::abs(uni(rng));
    p.h23 = std::abs(uni(rng));
    p.phi12 = kPi * uni(rng);
    p.phi13 = kPi * uni(rng);
    p.phi23 = kPi * uni(rng);
    p.delta12 = uni(rng);
    p.delta23 = uni(rng);
    const Eigen::Matrix3cd H = rwa_hamiltonian(p);
    std::complex<double> m[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = H(i, j);
    const auto want = oracle::hermitian3_eigenvalues(m);
    const auto got = dressed_spectrum(p);
    for (int i = 0; i < 3; ++i) REQUIRE(got(i) == Approx(want[i]).margin(1e-12));
  }
}

TEST_CASE("dressed spectra of the two mirror forms at zero loop phase") {
  ThreeLevelParams p;
  p.h12 = p.h13 = p.h23 = 1.0;
  const auto plus = dressed_spectrum(p);
  CHECK(plus(0) == Approx(-1.0).margin(1e-12));
  CHECK(plus(1) == Approx(-1.0).margin(1e-12));
  CHECK(plus(2) == Approx(2.0).margin(1e-12));
  const auto minus = dressed_spectrum(p.mirrored());
  CHECK(minus(0) == Approx(-2.0).margin(1e-12));
  CHECK(minus(1) == Approx(1.0).margin(1e-12));
  CHECK(minus(2) == Approx(1.0).margin(1e-12));
}

TEST_CASE("dressed spectra coincide at loop phase pi/2") {
  ThreeLevelParams p;
  p.h12 = p.h13 = p.h23 = 1.0;
  p.phi12 = kPi / 2;
  const auto plus = dressed_spectrum(p);
  const auto minus = dressed_spectrum(p.mirrored());
  const double s3 = std::sqrt(3.0);
  for (int i = 0; i < 3; ++i) CHECK(plus(i) == Approx(minus(i)).margin(1e-12));
  CHECK(plus(0) == Approx(-s3).margin(1e-12));
  CHECK(plus(1) == Approx(0.0).margin(1e-12));
  CHECK(plus(2) == Approx(s3).margin(1e-12));
}

TEST_CASE("sequential composite follows the analytic transfer law") {
  for (Shape sh : {Shape::flat, Shape::sin2}) {
    for (double phi : {0.0, kPi / 6, kPi / 2, 1.0, -0.7}) {
      SchemeParams sp;
      sp.h = 0.4;
      sp.loop_phase = phi;
      sp.shape = sh;
      auto [pulses, T] = make_scheme(Scheme::sequential, sp);
      Drive d;
      d.pulses = pulses;
      REQUIRE(p2_of(d, T) == Approx((1.0 + std::sin(phi)) / 2.0).margin(1e-8));
      REQUIRE(p2_of(d.mirrored(), T) == Approx((1.0 - std::sin(phi)) / 2.0).margin(1e-8));
    }
  }
}

TEST_CASE("simultaneous driving at loop phase pi/2 sorts the mirror forms") {
  for (Shape sh : {Shape::flat, Shape::sin2}) {
    SchemeParams sp;
    sp.h = 0.3;
    sp.loop_phase = kPi / 2;
    sp.shape = sh;
    auto [pulses, T] = make_scheme(Scheme::simultaneous, sp);
    Drive d;
    d.pulses = pulses;
    const double pp = p2_of(d, T);
    const double pm = p2_of(d.mirrored(), T);
    REQUIRE(pp == Approx(0.0).margin(1e-9));
    REQUIRE(pm == Approx(1.0).margin(1e-9));
    REQUIRE(selectivity(pp, pm) == Approx(1.0).margin(1e-8));
  }
}

TEST_CASE("zero loop phase and zero detuning cannot distinguish the forms") {
  // three legs with different areas and envelopes, all phases zero: the
  // Hamiltonian is real, and conjugation maps one form onto the other
  Drive d;
  d.pulses = {make_pulse(12, Shape::sin2, 0.0, 6.0, 1.1),
              make_pulse(13, Shape::flat, 1.0, 5.0, 0.7),
              make_pulse(23, Shape::smoothtop, 0.5, 6.0, 1.9)};
  const auto plus = propagate(d, 0.0, 6.0, ground());
  const auto minus = propagate(d.mirrored(), 0.0, 6.0, ground());
  for (int i = 0; i < 3; ++i)
    REQUIRE(std::norm(plus.amplitudes(i)) ==
            Approx(std::norm(minus.amplitudes(i))).margin(1e-10));
}

TEST_CASE("mirroring equals advancing the loop phase by pi") {
  for (double phi : {0.3, kPi / 2}) {
    SchemeParams sp;
    sp.h = 0.35;
    sp.loop_phase = phi;
    auto [pulses, T] = make_scheme(Scheme::simultaneous, sp);
    Drive d;
    d.pulses = pulses;

    SchemeParams sp_shift = sp;
    sp_shift.loop_phase = phi + kPi;
    auto [pulses2, T2] = make_scheme(Scheme::simultaneous, sp_shift);
    Drive d2;
    d2.pulses = pulses2;

    REQUIRE(T2 == Approx(T).margin(1e-12));
    REQUIRE(p2_of(d.mirrored(), T) == Approx(p2_of(d2, T)).margin(1e-10));
  }
}

TEST_CASE("constant per-state phase shifts leave populations unchanged") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> uni(-kPi, kPi);
  SchemeParams sp;
  sp.h = 0.3;
  sp.loop_phase = 0.8;
  auto [pulses, T] = make_scheme(Scheme::simultaneous, sp);
  Drive d;
  d.pulses = pulses;
  d.delta12 = 0.05;
  d.delta23 = -0.02;
  const auto base = propagate(d, 0.0, T, ground());
  for (int trial = 0; trial < 4; ++trial) {
    const double alpha = uni(rng), beta = uni(rng);
    Drive g = d;
    for (auto& p : g.pulses) {
      if (p.leg == 12) p.phase += alpha;
      if (p.leg == 13) p.phase += alpha + beta;
      if (p.leg == 23) p.phase += beta;
    }
    const auto moved = propagate(g, 0.0, T, ground());
    for (int i = 0; i < 3; ++i)
      REQUIRE(std::norm(moved.amplitudes(i)) ==
              Approx(std::norm(base.amplitudes(i))).margin(1e-10));
  }
}

TEST_CASE("chirped sweep separates the mirror forms at zero loop phase") {
  const double h = 1.0, delta0 = 20.0, T = 450.0;
  std::vector<Pulse> pulses = {make_pulse(12, Shape::flat, 0.0, T, h * T),
                               make_pulse(13, Shape::flat, 0.0, T, h * T),
                               make_pulse(23, Shape::flat, 0.0, T, h * T)};
  Drive d = chirped_drive(pulses, delta0, T);
  const auto plus = propagate(d, 0.0, T, ground());
  const auto minus = propagate(d.mirrored(), 0.0, T, ground());
  // the reference form crosses the exact dressed degeneracy and jumps, the
  // mirror form stays on the isolated adiabatic branch
  REQUIRE(std::norm(plus.amplitudes(1)) > 0.95);
  REQUIRE(std::norm(minus.amplitudes(2)) > 0.95);
  REQUIRE(plus.norm_drift < 1e-8);
  REQUIRE(minus.norm_drift < 1e-8);
}

TEST_CASE("chirped sweep at loop phase pi/2 treats both forms alike") {
  const double h = 1.0, delta0 = 20.0, T = 2000.0;
  std::vector<Pulse> pulses = {make_pulse(12, Shape::flat, 0.0, T, h * T, kPi / 2),
                               make_pulse(13, Shape::flat, 0.0, T, h * T),
                               make_pulse(23, Shape::flat, 0.0, T, h * T)};
  Drive d = chirped_drive(pulses, delta0, T);
  const auto plus = propagate(d, 0.0, T, ground());
  const auto minus = propagate(d.mirrored(), 0.0, T, ground());
  for (int i = 0; i < 3; ++i)
    REQUIRE(std::abs(std::norm(plus.amplitudes(i)) - std::norm(minus.amplitudes(i))) < 1e-3);
}

TEST_CASE("detuning scan is selective away from zero detuning only") {
  SchemeParams sp;
  sp.h = 0.3;
  sp.loop_phase = 0.0;
  const auto scan = detuning_scan(Scheme::sequential, sp, 0.0, 0.9, 46);
  REQUIRE(scan.front().selectivity < 1e-10);
  double best = 0.0;
  for (const auto& pt : scan) {
    REQUIRE(pt.p_plus >= -1e-12);
    REQUIRE(pt.p_plus <= 1.0 + 1e-12);
    REQUIRE(pt.p_minus >= -1e-12);
    REQUIRE(pt.p_minus <= 1.0 + 1e-12);
    best = std::max(best, pt.selectivity);
  }
  REQUIRE(best > 0.3);
}

TEST_CASE("mixed input validation") {
  CHECK_THROWS_AS(make_pulse(21, Shape::flat, 0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_pulse(12, Shape::flat, 1.0, 1.0, 1.0), std::invalid_argument);
  ThreeLevelParams p;
  p.flip_leg = 7;
  CHECK_THROWS_AS(p.mirrored(), std::invalid_argument);
  SchemeParams sp;
  sp.h = -1.0;
  CHECK_THROWS_AS(make_scheme(Scheme::sequential, sp), std::invalid_argument);
  CHECK_THROWS_AS(detuning_scan(Scheme::sequential, SchemeParams{}, 0.0, 1.0, 1),
                  std::invalid_argument);
}
