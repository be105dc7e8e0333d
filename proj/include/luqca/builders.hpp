#pragma once

// Concrete automata: the Ising chain, the Trotterized Heisenberg chain as a
// colored QCA, the quantum-walk lattice gas, the 3D spin-signal
// amplification rule, and the two-register shift-right automaton.

#include "luqca/coloring.hpp"

namespace luqca {

// ---------------------------------------------------------------------------
// Pauli / small-matrix helpers

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix hadamard();

// ---------------------------------------------------------------------------
// Ising chain

/// 1D QCA on qubit cells, neighborhood {0,+1}:
/// U0 = exp(-i J sz(x) sz(x+1) dt), V0 = identity.
QcaDefinition ising_qca(double j, double dt);

/// Coupling term J sz*sz on one bond (4x4).
Matrix ising_bond(double j);

/// Full chain Hamiltonian; all consecutive bonds, wrapping when torus.
Matrix ising_chain_hamiltonian(int cells, double j, bool torus);

// ---------------------------------------------------------------------------
// Heisenberg chain (Trotterized CQCA)

/// Bond coupling J (sx sx + sy sy + sz sz - 1x1) (4x4).
Matrix heisenberg_bond(double j);
Matrix heisenberg_chain_hamiltonian(int cells, double j, bool torus);

/// 2-colored CQCA with T = 2k phases; even phases apply the Trotter factor
/// exp(-i H_bond dt/k) on bonds rooted at even cells (color 0), odd phases
/// on bonds rooted at odd cells.
CqcaDefinition heisenberg_cqca(double j, double dt, int k);

/// ||full CQCA Trotter cycle - exp(-i H dt)||_2 on an open chain, via dense
/// exponentials.
double trotter_error(double j, double dt, int k, int chainLength);

// ---------------------------------------------------------------------------
// Quantum-walk lattice gas

/// Scattering parameters: |p|^2+|q|^2 = 1, p q* + p* q = 0, |phi| = 1.
struct WalkParams {
  Complex p;
  Complex q;
  Complex phi = 1.0;

  /// Throws StructuralError when the constraints fail (tolerance 1e-12).
  void validate() const;
  /// q = 1/sqrt= 2, p = i/sqrt 2, phi = 1.
  static WalkParams standard();
};

/// 1D QCA with qubit registers (up, down) per cell, neighborhood {0,+1}.
/// A lone up particle moves right each step, staying up with amplitude q and
/// flipping with amplitude p; down particles mirror this leftward:
///   psi_u(x,t+1) = q psi_u(x-1,t) + p psi_d(x+1,t)
///   psi_d(x,t+1) = q psi_d(x+1,t) + p psi_u(x-1,t)
QcaDefinition walk_qca(const WalkParams& params);

struct WalkAmplitude {
  Coord cell;
  Complex up;
  Complex down;
};

/// Single-particle occupation amplitudes per site.
std::vector<WalkAmplitude> walk_amplitudes(const RegionState& state);

/// State with one up particle at `site`.
RegionState walk_single_particle(const Region& region, const Coord& site,
                                 bool sparse = false);

// ---------------------------------------------------------------------------
// Spin-signal amplification

/// 3-state cells: 0 = quiescent (no particle), 1 = spin +1, 2 = spin -1.
struct AmplificationSpec {
  int side = 2;                              // cube side s
  std::vector<int> flip_set = {-2, -1, 0};   // neighbor-sum values that flip
  Complex alpha{1.0, 0.0};                   // corner state on {|+1>, |-1>}
  Complex beta{0.0, 0.0};
};

/// Two-color 3D CQCA applying NOT(+1 <-> -1) on cells whose six neighbor
/// values (quiescent = 0) sum into the flip set. The period operator is a
/// basis permutation.
CqcaDefinition amplification_cqca(const AmplificationSpec& spec);

/// Classical configuration on the cube: basis values per cell, x-major.
using AmpConfig = std::vector<int>;

/// All cells -1 except the lowest corner, which holds `corner`.
AmpConfig amplification_initial(int side, int corner);

/// One color phase of the flip rule on a basis configuration (exterior
/// quiescent).
AmpConfig amplification_phase(const AmpConfig& cfg, int side,
                              const std::vector<int>& flipSet, int color);

struct AmplificationReport {
  bool reached_fixed_point = false;
  std::int64_t steps = 0;  // phase applications until the orbit is stationary
  double fidelity = 0.0;   // |<target|final>| with target a|+1...> + b|-1...>
  AmpConfig plus_final;    // orbit of the corner = +1 branch
  AmpConfig minus_final;
  std::vector<std::int64_t> flips_per_step;
};

/// Brute-force classical orbits of the two corner basis configurations; the
/// superposed input follows by linearity of the (permutation) period
/// operator.
AmplificationReport amplification_demo(const AmplificationSpec& spec,
                                       std::int64_t maxSteps = 512);

/// RegionState for the cube input (corner in the alpha/beta superposition).
RegionState amplification_initial_state(const AmplificationSpec& spec);

// ---------------------------------------------------------------------------
// Shift-right

/// Registers (data, buffer) of dimension `dim`; U0 swaps own data into the
/// right neighbor's buffer, V0 swaps buffer into data. After k steps cell x
/// holds the initial data of cell x-k exactly.
QcaDefinition shift_right_qca(int dim = 2);

}  // namespace luqca
