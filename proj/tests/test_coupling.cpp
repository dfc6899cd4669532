#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "esmix/coupling.hpp"
#include "esmix/molecule_db.hpp"

using esmix::MolAxis;
using esmix::Pol;
using esmix::coupling::cycle_product;
using esmix::coupling::Enantiomer;
using esmix::coupling::transition_element;
using esmix::coupling::transition_types;
using esmix::rotor::find_state;
using esmix::rotor::Molecule;
using esmix::rotor::RotState;

namespace {

Molecule menthol() { return esmix::db::load_molecule_by_name("menthol", ESMIX_DATA_DIR); }
Molecule carvone() { return esmix::db::load_molecule_by_name("carvone", ESMIX_DATA_DIR); }
Molecule hsoh() { return esmix::db::load_molecule_by_name("hsoh", ESMIX_DATA_DIR); }

// every eigenstate with J <= Jmax, fanned out over all M
std::vector<RotState> all_states(const Molecule& mol, int Jmax) {
  std::vector<RotState> out;
  for (int J = 0; J <= Jmax; ++J)
    for (const auto& s : esmix::rotor::eigenstates(mol, J))
      for (int M = -J; M <= J; ++M) out.push_back(s.with_m(M));
  return out;
}

const std::vector<Pol> kPols = {Pol::x, Pol::y, Pol::z};

}  // namespace

TEST_CASE("frozen coupling anchors for menthol J<=1 states") {
  const Molecule mol = menthol();
  const Enantiomer plus = Enantiomer::plus();
  const RotState g = find_state(mol, 0, 0, 0).with_m(0);
  const RotState s101 = find_state(mol, 1, 0, 1);
  const RotState s111 = find_state(mol, 1, 1, 1);
  const RotState s110 = find_state(mol, 1, 1, 0);

  // a-type along z: -mu_a/sqrt(3), purely real
  const auto az = transition_element(mol, plus, s101.with_m(0), g, Pol::z);
  CHECK(az.value.real() == Catch::Approx(-1.3 / std::sqrt(3.0)).epsilon(1e-13));
  CHECK(az.value.imag() == 0.0);
  CHECK(az.contributing == std::set<MolAxis>{MolAxis::a});

  // b-type along z: -mu_b/sqrt(3)
  const auto bz = transition_element(mol, plus, s111.with_m(0), g, Pol::z);
  CHECK(bz.value.real() == Catch::Approx(-0.1 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(std::abs(bz.value.imag()) < 1e-15);
  CHECK(bz.contributing == std::set<MolAxis>{MolAxis::b});

  // c-type along y: -mu_c/sqrt(6), real because the y expansion carries
  // the c component with a real weight
  const auto cy = transition_element(mol, plus, s110.with_m(1), g, Pol::y);
  CHECK(cy.value.real() == Catch::Approx(-0.8 / std::sqrt(6.0)).epsilon(1e-12));
  CHECK(std::abs(cy.value.imag()) < 1e-15);
  CHECK(cy.contributing == std::set<MolAxis>{MolAxis::c});

  // a-type along x between the J=1 pair: +mu_a/(2 sqrt(2))
  const auto ax = transition_element(mol, plus, s111.with_m(0), s110.with_m(1), Pol::x);
  CHECK(ax.value.real() == Catch::Approx(1.3 / (2.0 * std::sqrt(2.0))).epsilon(1e-12));
  CHECK(std::abs(ax.value.imag()) < 1e-15);
  CHECK(ax.contributing == std::set<MolAxis>{MolAxis::a});

  // c-type along z picks up the imaginary unit of the expansion
  const auto cz = transition_element(mol, plus, s110.with_m(0), g, Pol::z);
  CHECK(std::abs(cz.value.real()) < 1e-15);
  CHECK(std::abs(cz.value.imag()) > 0.1);
  CHECK(cz.contributing == std::set<MolAxis>{MolAxis::c});
}

TEST_CASE("coupling elements form a Hermitian interaction") {
  for (const Molecule& mol : {menthol(), carvone()}) {
    const auto states = all_states(mol, 2);
    for (const auto en : {Enantiomer::plus(), Enantiomer::minus()})
      for (size_t i = 0; i < states.size(); ++i)
        for (size_t j = i; j < states.size(); ++j)
          for (Pol p : kPols) {
            const auto vij = transition_element(mol, en, states[i], states[j], p).value;
            const auto vji = transition_element(mol, en, states[j], states[i], p).value;
            REQUIRE(std::abs(vij - std::conj(vji)) < 1e-12);
          }
  }
}

TEST_CASE("polarization selection rules on M") {
  const Molecule mol = carvone();
  const auto states = all_states(mol, 2);
  for (size_t i = 0; i < states.size(); ++i)
    for (size_t j = 0; j < states.size(); ++j) {
      const int dm = states[i].M - states[j].M;
      if (dm != 0)
        REQUIRE(std::abs(transition_element(mol, Enantiomer::plus(), states[i], states[j], Pol::z)
                             .value) < 1e-13);
      if (std::abs(dm) != 1) {
        REQUIRE(std::abs(transition_element(mol, Enantiomer::plus(), states[i], states[j], Pol::x)
                             .value) < 1e-13);
        REQUIRE(std::abs(transition_element(mol, Enantiomer::plus(), states[i], states[j], Pol::y)
                             .value) < 1e-13);
      }
    }
}

TEST_CASE("enantiomers differ only in the sign of c-type elements") {
  for (const Molecule& mol : {menthol(), carvone()}) {
    const auto states = all_states(mol, 2);
    for (size_t i = 0; i < states.size(); ++i)
      for (size_t j = 0; j < states.size(); ++j)
        for (Pol p : kPols) {
          const auto vp = transition_element(mol, Enantiomer::plus(), states[i], states[j], p);
          const auto vm = transition_element(mol, Enantiomer::minus(), states[i], states[j], p);
          REQUIRE(std::abs(std::abs(vp.value) - std::abs(vm.value)) < 1e-13);
          if (std::abs(vp.value) < 1e-13) continue;
          if (vp.contributing == std::set<MolAxis>{MolAxis::c})
            REQUIRE(std::abs(vm.value + vp.value) < 1e-13);
          else
            REQUIRE(std::abs(vm.value - vp.value) < 1e-13);
        }
  }
}

TEST_CASE("M reflection multiplies elements by the tabulated sign") {
  for (const Molecule& mol : {menthol(), carvone()}) {
    const auto states = all_states(mol, 2);
    for (size_t i = 0; i < states.size(); ++i)
      for (size_t j = 0; j < states.size(); ++j)
        for (Pol p : kPols) {
          const auto& a = states[i];
          const auto& b = states[j];
          if (std::abs(a.J - b.J) > 1) continue;
          const auto v = transition_element(mol, Enantiomer::plus(), a, b, p).value;
          const auto vr =
              transition_element(mol, Enantiomer::plus(), a.with_m(-a.M), b.with_m(-b.M), p).value;
          const double sigma = esmix::angular::sigma_of_m_reflection(a.J - b.J, p);
          REQUIRE(std::abs(vr - sigma * v) < 1e-12);
        }
  }
}

TEST_CASE("symmetry-allowed dipole types match the irrep product rule") {
  const Molecule mol = menthol();
  const RotState g = find_state(mol, 0, 0, 0);
  const RotState s101 = find_state(mol, 1, 0, 1);
  const RotState s111 = find_state(mol, 1, 1, 1);
  const RotState s110 = find_state(mol, 1, 1, 0);
  CHECK(transition_types(g, s101) == std::set<MolAxis>{MolAxis::a});
  CHECK(transition_types(g, s111) == std::set<MolAxis>{MolAxis::b});
  CHECK(transition_types(g, s110) == std::set<MolAxis>{MolAxis::c});
  CHECK(transition_types(s111, s110) == std::set<MolAxis>{MolAxis::a});
  CHECK(transition_types(s101, s110) == std::set<MolAxis>{MolAxis::b});
  CHECK(transition_types(s101, s111) == std::set<MolAxis>{MolAxis::c});
  CHECK(transition_types(g, g).empty());
  CHECK(transition_types(s110, s110).empty());
}

TEST_CASE("numeric elements agree with the group-theoretic types") {
  for (const Molecule& mol : {menthol(), carvone()}) {
    const auto states = all_states(mol, 2);
    for (size_t i = 0; i < states.size(); ++i)
      for (size_t j = 0; j < states.size(); ++j) {
        const auto types = transition_types(states[i], states[j]);
        for (Pol p : kPols) {
          const auto el = transition_element(mol, Enantiomer::plus(), states[i], states[j], p);
          if (types.empty()) {
            REQUIRE(std::abs(el.value) < 1e-12);
          } else if (std::abs(el.value) > 1e-12) {
            REQUIRE(el.contributing == types);
          }
        }
      }
  }
}

TEST_CASE("cycle products close and flip with handedness") {
  const Molecule mol = menthol();
  const RotState g = find_state(mol, 0, 0, 0).with_m(0);
  const RotState s111 = find_state(mol, 1, 1, 1).with_m(0);

  SECTION("three orthogonal polarizations give a nonzero chiral product") {
    for (int M : {+1, -1}) {
      const RotState s110 = find_state(mol, 1, 1, 0).with_m(M);
      const auto pp = cycle_product(mol, Enantiomer::plus(), {g, s111, s110},
                                    {Pol::z, Pol::x, Pol::y});
      const auto pm = cycle_product(mol, Enantiomer::minus(), {g, s111, s110},
                                    {Pol::z, Pol::x, Pol::y});
      // one c-type leg (z b-type, x a-type, y c-type): product odd in handedness
      CHECK(pp.real() == Catch::Approx(1.3 * 0.1 * 0.8 / 12.0).epsilon(1e-12));
      CHECK(std::abs(pp.imag()) < 1e-15);
      CHECK(std::abs(pm + pp) < 1e-14);
    }
  }

  SECTION("two-polarization cycle cancels between mirrored M realizations") {
    const auto p_up = cycle_product(mol, Enantiomer::plus(),
                                    {g, s111, find_state(mol, 1, 1, 0).with_m(+1)},
                                    {Pol::z, Pol::x, Pol::x});
    const auto p_dn = cycle_product(mol, Enantiomer::plus(),
                                    {g, s111, find_state(mol, 1, 1, 0).with_m(-1)},
                                    {Pol::z, Pol::x, Pol::x});
    CHECK(std::abs(p_up) > 1e-4);
    CHECK(std::abs(p_up + p_dn) < 1e-14);
  }

  SECTION("a vanishing leg zeroes the product") {
    // the z leg fixes equal M on the first pair, so an x leg demanding
    // Delta M = +-1 cannot be satisfied with all three M equal
    const RotState s110 = find_state(mol, 1, 1, 0).with_m(0);
    const auto p = cycle_product(mol, Enantiomer::plus(), {g, s111, s110},
                                 {Pol::z, Pol::x, Pol::y});
    CHECK(std::abs(p) < 1e-13);
  }
}

TEST_CASE("cross-band elements use the declared transition dipole") {
  const Molecule mol = hsoh();
  const RotState g = find_state(mol, 0, 0, 0).with_m(0);
  const RotState e101 = find_state(mol, 1, 0, 1, "nu1").with_m(0);

  const auto v = transition_element(mol, Enantiomer::plus(), e101, g, Pol::z);
  CHECK(v.value.real() == Catch::Approx(-0.052 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(v.contributing == std::set<MolAxis>{MolAxis::a});

  // within the vibrational ground band only mu_b acts
  const RotState g110 = find_state(mol, 1, 1, 0).with_m(1);
  const auto w = transition_element(mol, Enantiomer::plus(), g110, g, Pol::y);
  CHECK(std::abs(w.value) < 1e-13);

  Molecule bare = mol;
  bare.transition_dipoles.clear();
  CHECK_THROWS_AS(transition_element(bare, Enantiomer::plus(), e101, g, Pol::z),
                  std::invalid_argument);
}
