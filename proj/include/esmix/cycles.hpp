#pragma once

// Enumeration of closed three-state dipole loops in the rotational spectrum,
// their group-theoretic classification as enantio-selective or not for a
// given polarization assignment, and a brute-force confirmation that sums
// the loop products over every M realization.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "esmix/coupling.hpp"
#include "esmix/rotor.hpp"

namespace esmix::cycles {

/// A closed triad of rotational states. Legs run (0->1), (1->2), (2->0);
/// each leg carries exactly one symmetry-allowed dipole type, and around a
/// closed loop the three types are always a, b and c in some order.
struct Cycle {
  std::array<rotor::RotState, 3> states;
  std::array<MolAxis, 3> types;  // dipole type of legs (01), (12), (20)

  std::string label() const {
    return states[0].label() + " - " + states[1].label() + " - " + states[2].label();
  }
};

namespace detail {

inline bool leg_allowed(const rotor::Molecule& mol, const rotor::RotState& a,
                        const rotor::RotState& b, MolAxis* type_out) {
  if (std::abs(a.J - b.J) > 1) return false;
  if (a.J == 0 && b.J == 0) return false;
  const auto types = coupling::transition_types(a, b);
  if (types.size() != 1) return false;
  const MolAxis t = *types.begin();
  if (mol.dipole.component(t) == 0.0) return false;
  if (type_out) *type_out = t;
  return true;
}

}  // namespace detail

/// All distinct closed triads among the eigenstates with J <= Jmax of one
/// band, ordered by state energies. A triad qualifies when every leg is
/// dipole-allowed: |Delta J| <= 1, not 0 <-> 0, a symmetry-allowed type, and
/// a nonzero molecular dipole component along it.
inline std::vector<Cycle> enumerate_cycles(const rotor::Molecule& mol, int Jmax,
                                           const std::string& band = std::string()) {
  if (Jmax < 0) throw std::invalid_argument("enumerate_cycles: Jmax < 0");
  std::vector<rotor::RotState> states;
  for (int J = 0; J <= Jmax; ++J)
    for (auto& s : rotor::eigenstates(mol, J, band)) states.push_back(s);

  std::vector<Cycle> out;
  const std::size_t n = states.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Cycle c;
        c.states = {states[i], states[j], states[k]};
        if (detail::leg_allowed(mol, c.states[0], c.states[1], &c.types[0]) &&
            detail::leg_allowed(mol, c.states[1], c.states[2], &c.types[1]) &&
            detail::leg_allowed(mol, c.states[2], c.states[0], &c.types[2]))
          out.push_back(c);
      }
  return out;
}

/// Outcome of the selection-rule classification of one cycle under a given
/// polarization assignment (legs (01), (12), (20)).
struct Classification {
  bool m_closure = false;    // some chain of M quantum numbers closes
  int sigma_product = 0;     // product of the per-leg M-reflection signs
  bool distinct_pols = false;
  bool selective = false;    // chiral signal survives the M average
};

/// Group-theoretic classification. A closed dipole triad always involves
/// all three dipole types, so each leg's sign flip under handedness is
/// fixed; what decides selectivity is the polarization pattern. The loop
/// closes in M only when the number of x/y legs is even, and the mirror
/// pairs (M -> -M) of realizations add rather than cancel only when the
/// product of the per-leg reflection signs is +1. Both conditions together
/// hold exactly for three mutually orthogonal polarizations.
inline Classification classify(const Cycle& c, const std::array<Pol, 3>& pols) {
  Classification r;
  int xy = 0;
  for (Pol p : pols)
    if (p != Pol::z) ++xy;
  r.m_closure = (xy % 2) == 0;
  r.sigma_product = 1;
  const std::array<std::pair<int, int>, 3> legs = {{{0, 1}, {1, 2}, {2, 0}}};
  for (int l = 0; l < 3; ++l) {
    const int dj = c.states[legs[l].first].J - c.states[legs[l].second].J;
    r.sigma_product *= angular::sigma_of_m_reflection(dj, pols[l]);
  }
  r.distinct_pols = pols[0] != pols[1] && pols[1] != pols[2] && pols[0] != pols[2];
  r.selective = r.m_closure && r.sigma_product == +1;
  return r;
}

/// Brute-force check of the classification: sum the directed loop product
/// over every M realization for both mirror forms and compare the chiral
/// difference with the total magnitude.
struct MAverage {
  std::complex<double> sum_plus{0.0, 0.0};   // sum of products, reference form
  std::complex<double> sum_minus{0.0, 0.0};  // sum of products, mirror form
  double signal = 0.0;     // |sum_plus - sum_minus|
  double magnitude = 0.0;  // sum over realizations of |prod+| + |prod-|
  double ratio = 0.0;      // signal / magnitude, 0 when nothing couples
  int realizations = 0;    // M chains with a nonvanishing product
};

inline MAverage verify_by_m_average(const rotor::Molecule& mol, const Cycle& c,
                                    const std::array<Pol, 3>& pols) {
  MAverage r;
  const auto& s = c.states;
  const double mu = std::abs(mol.dipole.a) + std::abs(mol.dipole.b) + std::abs(mol.dipole.c);
  const double floor = 1e-12 * mu * mu * mu;
  for (int m0 = -s[0].J; m0 <= s[0].J; ++m0)
    for (int m1 = -s[1].J; m1 <= s[1].J; ++m1)
      for (int m2 = -s[2].J; m2 <= s[2].J; ++m2) {
        const std::array<rotor::RotState, 3> triad = {s[0].with_m(m0), s[1].with_m(m1),
                                                      s[2].with_m(m2)};
        const auto pp = coupling::cycle_product(mol, coupling::Enantiomer::plus(), triad, pols);
        const auto pm = coupling::cycle_product(mol, coupling::Enantiomer::minus(), triad, pols);
        r.sum_plus += pp;
        r.sum_minus += pm;
        r.magnitude += std::abs(pp) + std::abs(pm);
        if (std::abs(pp) + std::abs(pm) > floor) ++r.realizations;
      }
  r.signal = std::abs(r.sum_plus - r.sum_minus);
  r.ratio = r.magnitude > 0.0 ? r.signal / r.magnitude : 0.0;
  return r;
}

}  // namespace esmix::cycles
