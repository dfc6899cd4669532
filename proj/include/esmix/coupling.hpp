#pragma once

// Polarization-resolved dipole coupling elements between asymmetric-top
// eigenstates, for both enantiomers of a chiral species. The lab-frame
// interaction with a field along e_pol is expanded over rank-1 rotation
// matrix components D^1_{MK} with molecule-fixed dipole components along
// a, b, c. The two enantiomers differ only in the sign of the c component.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <set>
#include <stdexcept>
#include <vector>

#include "esmix/angular.hpp"
#include "esmix/rotor.hpp"

namespace esmix::coupling {

using cplx = std::complex<double>;

struct Enantiomer {
  int sign = +1;  // +1 reference handedness, -1 mirror image
  static Enantiomer plus() { return {+1}; }
  static Enantiomer minus() { return {-1}; }
};

/// One dipole coupling element: value is <bra| -mu.e_pol |ket> per unit field
/// amplitude, in Debye.
struct PolarizedElement {
  cplx value{0.0, 0.0};
  Pol polarization = Pol::z;
  std::set<MolAxis> contributing;  // dipole axes with nonzero contribution
};

namespace detail {

struct DTerm {
  MolAxis axis;
  cplx coeff;
  int M, K;
};

inline const std::vector<DTerm>& pol_terms(Pol p) {
  static const double r2 = 1.0 / std::sqrt(2.0);
  static const cplx I{0.0, 1.0};
  // mu.e_z = mu_a D00 - mu_b/sqrt2 (D01 - D0-1) + i mu_c/sqrt2 (D01 + D0-1)
  static const std::vector<DTerm> z = {
      {MolAxis::a, {1.0, 0.0}, 0, 0},
      {MolAxis::b, {-r2, 0.0}, 0, +1},
      {MolAxis::b, {+r2, 0.0}, 0, -1},
      {MolAxis::c, I * r2, 0, +1},
      {MolAxis::c, I * r2, 0, -1},
  };
  // mu.e_x = mu_a/sqrt2 (D-10 - D10) + mu_b/2 (D11 - D1-1 - D-11 + D-1-1)
  //          - i mu_c/2 (D11 + D1-1 - D-11 - D-1-1)
  static const std::vector<DTerm> x = {
      {MolAxis::a, {+r2, 0.0}, -1, 0}, {MolAxis::a, {-r2, 0.0}, +1, 0},
      {MolAxis::b, {+0.5, 0.0}, +1, +1}, {MolAxis::b, {-0.5, 0.0}, +1, -1},
      {MolAxis::b, {-0.5, 0.0}, -1, +1}, {MolAxis::b, {+0.5, 0.0}, -1, -1},
      {MolAxis::c, -I * 0.5, +1, +1},   {MolAxis::c, -I * 0.5, +1, -1},
      {MolAxis::c, +I * 0.5, -1, +1},   {MolAxis::c, +I * 0.5, -1, -1},
  };
  // mu.e_y = -i mu_a/sqrt2 (D-10 + D10) + i mu_b/2 (D11 - D1-1 + D-11 - D-1-1)
  //          + mu_c/2 (D11 + D1-1 + D-11 + D-1-1)
  static const std::vector<DTerm> y = {
      {MolAxis::a, -I * r2, -1, 0},    {MolAxis::a, -I * r2, +1, 0},
      {MolAxis::b, +I * 0.5, +1, +1},  {MolAxis::b, -I * 0.5, +1, -1},
      {MolAxis::b, +I * 0.5, -1, +1},  {MolAxis::b, -I * 0.5, -1, -1},
      {MolAxis::c, {+0.5, 0.0}, +1, +1}, {MolAxis::c, {+0.5, 0.0}, +1, -1},
      {MolAxis::c, {+0.5, 0.0}, -1, +1}, {MolAxis::c, {+0.5, 0.0}, -1, -1},
  };
  switch (p) {
    case Pol::x: return x;
    case Pol::y: return y;
    default: return z;
  }
}

inline const rotor::DipoleVector& dipole_for(const rotor::Molecule& mol,
                                             const rotor::RotState& bra,
                                             const rotor::RotState& ket) {
  if (bra.band == ket.band) return mol.dipole;
  const auto* mu = mol.band_dipole(bra.band, ket.band);
  if (!mu)
    throw std::invalid_argument("transition_element: no transition dipole declared between bands '" +
                                bra.band + "' and '" + ket.band + "' of " + mol.name);
  return *mu;
}

}  // namespace detail

/// Coupling element <bra| -mu.e_pol |ket> per unit field amplitude (Debye).
/// Both states must belong to the given molecule; states in different bands
/// require a declared transition dipole. Vanishes unless the polarization's
/// Delta M rule holds (z: 0, x/y: +-1) and a symmetry-allowed dipole
/// component connects the pair.
inline PolarizedElement transition_element(const rotor::Molecule& mol, Enantiomer en,
                                           const rotor::RotState& bra,
                                           const rotor::RotState& ket, Pol pol) {
  const auto& mu = detail::dipole_for(mol, bra, ket);
  PolarizedElement out;
  out.polarization = pol;
  if (std::abs(bra.J - ket.J) > 1) return out;
  std::array<cplx, 3> by_axis{};
  for (const auto& term : detail::pol_terms(pol)) {
    if (bra.M != ket.M + term.M) continue;
    double mu_ax = mu.component(term.axis);
    if (mu_ax == 0.0) continue;
    if (term.axis == MolAxis::c) mu_ax *= en.sign;
    double geom = 0.0;
    for (int Kp = -ket.J; Kp <= ket.J; ++Kp) {
      const int Kb = Kp + term.K;
      if (std::abs(Kb) > bra.J) continue;
      const double cb = bra.coeff(Kb), ck = ket.coeff(Kp);
      if (cb == 0.0 || ck == 0.0) continue;
      geom += cb * ck *
              angular::symtop_element(angular::AngularIndex(bra.J, Kb, bra.M), term.M, term.K,
                                      angular::AngularIndex(ket.J, Kp, ket.M));
    }
    by_axis[static_cast<int>(term.axis)] += term.coeff * mu_ax * geom;
  }
  double scale = 0.0;
  for (const auto& v : by_axis) scale = std::max(scale, std::abs(v));
  for (MolAxis ax : {MolAxis::a, MolAxis::b, MolAxis::c}) {
    const cplx v = by_axis[static_cast<int>(ax)];
    out.value -= v;  // interaction is -mu.E
    // keep only axes that matter beyond eigenvector round-off
    if (scale > 0.0 && std::abs(v) > 1e-12 * scale) out.contributing.insert(ax);
  }
  return out;
}

/// Symmetry-allowed dipole types between two rotational states, from the D2
/// product rule: the component along axis i is allowed iff
/// Gamma(bra) x Gamma(i) x Gamma(ket) contains the totally symmetric species.
inline std::set<MolAxis> transition_types(const rotor::RotState& bra,
                                          const rotor::RotState& ket) {
  const rotor::Irrep g = rotor::irrep_product(bra.irrep, ket.irrep);
  std::set<MolAxis> out;
  for (MolAxis ax : {MolAxis::a, MolAxis::b, MolAxis::c})
    if (rotor::dipole_irrep(ax) == g) out.insert(ax);
  return out;
}

/// Directed product of the coupling elements around a closed triad of
/// states with explicit M quantum numbers,
///   <s0|V|s1> <s1|V|s2> <s2|V|s0>,
/// legs polarized as pols = {p01, p12, p20}. The value is independent of
/// the per-state phase convention; it is zero if any leg vanishes.
inline cplx cycle_product(const rotor::Molecule& mol, Enantiomer en,
                          const std::array<rotor::RotState, 3>& s,
                          const std::array<Pol, 3>& pols) {
  const cplx v01 = transition_element(mol, en, s[0], s[1], pols[0]).value;
  const cplx v12 = transition_element(mol, en, s[1], s[2], pols[1]).value;
  const cplx v20 = transition_element(mol, en, s[2], s[0], pols[2]).value;
  return v01 * v12 * v20;
}

}  // namespace esmix::coupling
