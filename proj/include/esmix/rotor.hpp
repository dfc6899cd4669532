#pragma once

// Asymmetric-top rotational structure: rigid-rotor Hamiltonian blocks in the
// prolate symmetric-top basis, field-free eigenstates labelled J_{Ka Kc}, and
// their classification under the D2 rotation group.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace esmix {

/// Molecule-fixed inertial axis carrying a dipole component.
enum class MolAxis { a, b, c };

inline const char* axis_name(MolAxis ax) {
  switch (ax) {
    case MolAxis::a: return "a";
    case MolAxis::b: return "b";
    default: return "c";
  }
}

namespace rotor {

struct RotConstants {
  double A = 0, B = 0, C = 0;  // MHz
};

struct DipoleVector {
  double a = 0, b = 0, c = 0;  // Debye
  double component(MolAxis ax) const {
    switch (ax) {
      case MolAxis::a: return a;
      case MolAxis::b: return b;
      default: return c;
    }
  }
};

/// Rigid rotor data for one species. Energies are stored in MHz throughout;
/// loaders convert cm^-1 input on the way in. `bands` lists additional
/// (e.g. vibrationally excited) states with their own constants; a pair of
/// bands may carry an explicit transition dipole.
struct Molecule {
  std::string name;
  RotConstants constants;  // default band
  DipoleVector dipole;     // permanent dipole, Debye
  struct Band {
    std::string name;
    RotConstants constants;
    double origin = 0.0;  // band origin above the default band, MHz
  };
  std::vector<Band> bands;
  struct BandDipole {
    std::string from, to;
    DipoleVector mu;
  };
  std::vector<BandDipole> transition_dipoles;

  const RotConstants& band_constants(const std::string& band) const {
    if (band.empty()) return constants;
    for (const auto& b : bands)
      if (b.name == band) return b.constants;
    throw std::invalid_argument("Molecule '" + name + "' has no band '" + band + "'");
  }

  double band_origin(const std::string& band) const {  // MHz
    if (band.empty()) return 0.0;
    for (const auto& b : bands)
      if (b.name == band) return b.origin;
    throw std::invalid_argument("Molecule '" + name + "' has no band '" + band + "'");
  }

  const DipoleVector* band_dipole(const std::string& from, const std::string& to) const {
    for (const auto& d : transition_dipoles)
      if ((d.from == from && d.to == to) || (d.from == to && d.to == from)) return &d.mu;
    return nullptr;
  }

  void validate() const {
    auto check = [](const RotConstants& rc, const std::string& where) {
      if (!(rc.A > 0 && rc.B > 0 && rc.C > 0))
        throw std::invalid_argument(where + ": rotational constants must be positive");
      if (!(rc.A >= rc.B && rc.B >= rc.C))
        throw std::invalid_argument(where + ": constants must satisfy A >= B >= C");
    };
    check(constants, name);
    for (const auto& b : bands) check(b.constants, name + ":" + b.name);
    if (dipole.a < 0 || dipole.b < 0 || dipole.c < 0)
      throw std::invalid_argument(name + ": dipole magnitudes must be non-negative");
  }
};

/// D2 rotation-group species of an asymmetric-top state.
enum class Irrep { A, Ba, Bb, Bc };

inline const char* irrep_name(Irrep g) {
  switch (g) {
    case Irrep::A: return "A";
    case Irrep::Ba: return "Ba";
    case Irrep::Bb: return "Bb";
    default: return "Bc";
  }
}

/// Classification by the parities of (Ka, Kc): ee->A, eo->Ba, oo->Bb, oe->Bc.
inline Irrep d2_irrep(int Ka, int Kc) {
  const bool ae = (Ka % 2 == 0), ce = (Kc % 2 == 0);
  if (ae && ce) return Irrep::A;
  if (ae && !ce) return Irrep::Ba;
  if (!ae && !ce) return Irrep::Bb;
  return Irrep::Bc;
}

/// Product table of D2 (A is the identity; Bi * Bi = A; Ba * Bb = Bc, ...).
inline Irrep irrep_product(Irrep x, Irrep y) {
  if (x == Irrep::A) return y;
  if (y == Irrep::A) return x;
  if (x == y) return Irrep::A;
  const bool a = (x == Irrep::Ba || y == Irrep::Ba);
  const bool b = (x == Irrep::Bb || y == Irrep::Bb);
  const bool c = (x == Irrep::Bc || y == Irrep::Bc);
  if (a && b) return Irrep::Bc;
  if (a && c) return Irrep::Bb;
  (void)b;
  return Irrep::Ba;
}

/// Irrep of the dipole component along a molecule-fixed axis.
inline Irrep dipole_irrep(MolAxis ax) {
  switch (ax) {
    case MolAxis::a: return Irrep::Ba;
    case MolAxis::b: return Irrep::Bb;
    default: return Irrep::Bc;
  }
}

/// One field-free rotational eigenstate. The expansion runs over the prolate
/// basis |J, K> with coeffs[K + J]; energies are in MHz. The state is
/// M-independent: `M` tags a specific magnetic sublevel where needed and
/// defaults to 0.
struct RotState {
  int J = 0;
  int tau = 1;  // energy rank within the J block, 1 .. 2J+1
  int M = 0;
  double energy = 0;  // MHz
  std::vector<double> coeffs;
  int Ka = 0, Kc = 0;
  Irrep irrep = Irrep::A;
  std::string band;

  double coeff(int K) const {
    return (std::abs(K) > J) ? 0.0 : coeffs[static_cast<size_t>(K + J)];
  }
  RotState with_m(int m) const {
    if (std::abs(m) > J) throw std::domain_error("RotState::with_m: |M| > J");
    RotState s = *this;
    s.M = m;
    return s;
  }
  std::string label() const {
    return std::to_string(J) + "_" + std::to_string(Ka) + std::to_string(Kc);
  }
};

/// Rigid-rotor Hamiltonian block for fixed J in the prolate basis (a -> z):
/// diagonal (B+C)/2 [J(J+1) - K^2] + A K^2, off-diagonal Delta K = +-2 terms
/// (B-C)/4 sqrt(J(J+1) - K(K+-1)) sqrt(J(J+1) - (K+-1)(K+-2)).
inline Eigen::MatrixXd jblock_hamiltonian(const RotConstants& rc, int J) {
  if (J < 0) throw std::domain_error("jblock_hamiltonian: J must be non-negative");
  const int n = 2 * J + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  const double jj = static_cast<double>(J) * (J + 1);
  for (int K = -J; K <= J; ++K) {
    h(K + J, K + J) = 0.5 * (rc.B + rc.C) * (jj - K * K) + rc.A * K * K;
    if (K + 2 <= J) {
      const double v = 0.25 * (rc.B - rc.C) * std::sqrt(jj - K * (K + 1.0)) *
                       std::sqrt(jj - (K + 1.0) * (K + 2.0));
      h(K + 2 + J, K + J) = v;
      h(K + J, K + 2 + J) = v;
    }
  }
  return h;
}

/// (Ka, Kc) for the tau-th state (by ascending energy) of a J block, from the
/// prolate-oblate correlation diagram: Ka = 0,1,1,2,2,..., Kc = J,J,J-1,J-1,...
inline std::pair<int, int> assign_ka_kc(int J, int tau) {
  if (J < 0 || tau < 1 || tau > 2 * J + 1)
    throw std::domain_error("assign_ka_kc: need 1 <= tau <= 2J+1");
  return {tau / 2, J - (tau - 1) / 2};
}

/// Field-free eigenstates of one J block, ascending in energy. Eigenvector
/// sign convention: the largest-magnitude coefficient is positive, ties broken
/// by the lowest K.
inline std::vector<RotState> eigenstates(const Molecule& mol, int J,
                                         const std::string& band = std::string()) {
  const auto& rc = mol.band_constants(band);
  const Eigen::MatrixXd h = jblock_hamiltonian(rc, J);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigenstates: diagonalization failed");
  const int n = 2 * J + 1;
  std::vector<RotState> out;
  out.reserve(n);
  for (int r = 0; r < n; ++r) {
    RotState s;
    s.J = J;
    s.tau = r + 1;
    s.energy = solver.eigenvalues()(r);
    s.band = band;
    s.coeffs.resize(n);
    Eigen::VectorXd v = solver.eigenvectors().col(r);
    // The block Hamiltonian commutes with K -> -K, so every nondegenerate
    // eigenvector is even or odd under that reflection. Project onto the
    // dominant parity to strip the round-off mixing the solver leaves
    // between the members of a narrow asymmetry doublet.
    double dot = 0.0;
    for (int i = 0; i < n; ++i) dot += v(i) * v(n - 1 - i);
    const double eta = dot >= 0.0 ? 1.0 : -1.0;
    for (int i = 0; i < n / 2; ++i) {
      const double sym = 0.5 * (v(i) + eta * v(n - 1 - i));
      v(i) = sym;
      v(n - 1 - i) = eta * sym;
    }
    v.normalize();
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(v(i)) > std::abs(v(best)) + 1e-12) best = i;
    if (v(best) < 0) v = -v;
    for (int i = 0; i < n; ++i) s.coeffs[i] = v(i);
    const auto kk = assign_ka_kc(J, s.tau);
    s.Ka = kk.first;
    s.Kc = kk.second;
    s.irrep = d2_irrep(s.Ka, s.Kc);
    out.push_back(std::move(s));
  }
  return out;
}

/// Look up the eigenstate with the given J_{Ka Kc} label.
inline RotState find_state(const Molecule& mol, int J, int Ka, int Kc,
                           const std::string& band = std::string()) {
  for (auto& s : eigenstates(mol, J, band))
    if (s.Ka == Ka && s.Kc == Kc) return s;
  throw std::invalid_argument("find_state: no state " + std::to_string(J) + "_" +
                              std::to_string(Ka) + std::to_string(Kc) + " in J block");
}

}  // namespace rotor
}  // namespace esmix
