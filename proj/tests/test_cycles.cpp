#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>

#include "esmix/cycles.hpp"
#include "esmix/molecule_db.hpp"

using esmix::MolAxis;
using esmix::Pol;
using esmix::cycles::classify;
using esmix::cycles::Cycle;
using esmix::cycles::enumerate_cycles;
using esmix::cycles::verify_by_m_average;
using esmix::rotor::Molecule;

namespace {

Molecule menthol() { return esmix::db::load_molecule_by_name("menthol", ESMIX_DATA_DIR); }
Molecule carvone() { return esmix::db::load_molecule_by_name("carvone", ESMIX_DATA_DIR); }

const std::array<Pol, 3> kAllPols = {Pol::x, Pol::y, Pol::z};

bool has_states(const Cycle& c, const std::string& a, const std::string& b,
                const std::string& d) {
  std::array<std::string, 3> got = {c.states[0].label(), c.states[1].label(),
                                    c.states[2].label()};
  std::array<std::string, 3> want = {a, b, d};
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  return got == want;
}

}  // namespace

TEST_CASE("menthol J<=1 enumeration finds exactly the four closed triads") {
  const auto cycles = enumerate_cycles(menthol(), 1);
  REQUIRE(cycles.size() == 4);
  CHECK(std::any_of(cycles.begin(), cycles.end(),
                    [](const Cycle& c) { return has_states(c, "0_00", "1_11", "1_10"); }));
  CHECK(std::any_of(cycles.begin(), cycles.end(),
                    [](const Cycle& c) { return has_states(c, "0_00", "1_01", "1_11"); }));
  CHECK(std::any_of(cycles.begin(), cycles.end(),
                    [](const Cycle& c) { return has_states(c, "0_00", "1_01", "1_10"); }));
  CHECK(std::any_of(cycles.begin(), cycles.end(),
                    [](const Cycle& c) { return has_states(c, "1_01", "1_11", "1_10"); }));
}

TEST_CASE("every closed triad involves all three dipole types") {
  for (const Molecule& mol : {menthol(), carvone()}) {
    const auto cycles = enumerate_cycles(mol, 2);
    REQUIRE(!cycles.empty());
    for (const auto& c : cycles) {
      std::array<MolAxis, 3> t = c.types;
      std::sort(t.begin(), t.end());
      CHECK(t == std::array<MolAxis, 3>{MolAxis::a, MolAxis::b, MolAxis::c});
    }
  }
}

TEST_CASE("molecules without all three dipole components close no loops") {
  Molecule top;
  top.name = "prolate";
  top.constants = {10.0, 2.0, 2.0};
  top.dipole = {1.0, 0.0, 0.0};
  CHECK(enumerate_cycles(top, 3).empty());

  Molecule planarish;
  planarish.name = "two-components";
  planarish.constants = {9.0, 3.0, 2.2};
  planarish.dipole = {1.0, 0.7, 0.0};
  CHECK(enumerate_cycles(planarish, 3).empty());
}

TEST_CASE("canonical menthol cycle with orthogonal polarizations") {
  const Molecule mol = menthol();
  const auto cycles = enumerate_cycles(mol, 1);
  const auto it = std::find_if(cycles.begin(), cycles.end(), [](const Cycle& c) {
    return has_states(c, "0_00", "1_11", "1_10");
  });
  REQUIRE(it != cycles.end());

  // order the triad as (0_00, 1_11, 1_10) to pin the leg types (b, a, c)
  Cycle c = *it;
  std::sort(c.states.begin(), c.states.end(),
            [](const auto& x, const auto& y) { return x.label() < y.label(); });
  REQUIRE(c.states[0].label() == "0_00");
  REQUIRE(c.states[1].label() == "1_10");
  REQUIRE(c.states[2].label() == "1_11");

  // legs (01) c-type, (12) a-type, (20) b-type: drive them y, x, z
  const std::array<Pol, 3> pols = {Pol::y, Pol::x, Pol::z};
  const auto cls = classify(c, pols);
  CHECK(cls.m_closure);
  CHECK(cls.sigma_product == +1);
  CHECK(cls.distinct_pols);
  CHECK(cls.selective);

  const auto avg = verify_by_m_average(mol, c, pols);
  CHECK(avg.realizations == 2);  // M chains (0, +-1, 0)
  CHECK(avg.ratio == Catch::Approx(1.0).margin(1e-12));
  // the whole signal is handedness-odd
  CHECK(std::abs(avg.sum_plus + avg.sum_minus) < 1e-14);
  CHECK(std::abs(avg.sum_plus) == Catch::Approx(2.0 * 1.3 * 0.1 * 0.8 / 12.0).epsilon(1e-10));
}

TEST_CASE("group theory and brute force agree on every cycle and polarization") {
  for (const Molecule& mol : {menthol(), carvone()}) {
    const auto cycles = enumerate_cycles(mol, 2);
    for (const auto& c : cycles) {
      for (Pol p0 : kAllPols)
        for (Pol p1 : kAllPols)
          for (Pol p2 : kAllPols) {
            const std::array<Pol, 3> pols = {p0, p1, p2};
            const auto cls = classify(c, pols);
            const auto avg = verify_by_m_average(mol, c, pols);
            INFO(mol.name << " " << c.label() << " pols " << esmix::pol_name(p0)
                          << esmix::pol_name(p1) << esmix::pol_name(p2) << " ratio " << avg.ratio
                          << " sigma " << cls.sigma_product);
            if (!cls.m_closure) {
              REQUIRE(avg.magnitude == 0.0);
            } else if (cls.selective) {
              REQUIRE(avg.ratio > 1e-3);
            } else {
              REQUIRE(avg.ratio < 1e-10);
            }
            // mirror-form sum is always the sign-flipped reference sum:
            // exactly one leg is c-type
            REQUIRE(std::abs(avg.sum_plus + avg.sum_minus) < 1e-12);
          }
    }
  }
}
