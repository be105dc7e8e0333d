#pragma once

// The two circuit/automaton bridges: compiling the evolution of a finite
// region into a layered circuit whose depth is linear in the step count and
// independent of the region size, and encoding a nearest-neighbor circuit
// into a universal 2D automaton that executes it with linear slowdown.

#include "luqca/circuit.hpp"
#include "luqca/state.hpp"

namespace luqca {

/// Per step: read gates scheduled into residue-class sub-layers (cells
/// grouped by coordinate mod the per-axis neighborhood diameter), then one
/// update layer. Wires are the region cells in lexicographic order, one
/// qudit of the cell dimension each. Torus wires wrap; on quiescent-padded
/// regions only read operators whose neighborhood stays inside are emitted
/// (size the region via required_region for open-boundary fidelity).
Circuit compile_to_circuit(const QcaDefinition& qca, const Region& region,
                           std::int64_t t);

/// Layers added per step by the scheduler (the constant c in depth = c*t).
int layers_per_step(const QcaDefinition& qca, const Region& region);

// ---------------------------------------------------------------------------
// Universal 2D QCA

/// Cell registers of the universal automaton: a state qubit plus classical
/// gate, clock (mod 6), active and column-color (mod 3) registers. Clock
/// phases 0/2/4 operate (own single-qubit gate, or CZ when a CP-lower cell
/// sees CP-upper above, gated on the active flag); phases 1/3/5 carry: a
/// cell whose column color equals the sub-phase index pairs with its right
/// neighbor and the (state, active) pair is swapped iff the active flags
/// differ. The active column advances one column per full clock cycle, so a
/// D-column circuit completes in exactly 2D steps.
QcaDefinition make_universal_qca();

struct UniversalEncoding {
  QcaDefinition qca;
  Region grid;             // rows x columns, torus
  int wires = 0;           // circuit wires (rows 0..wires-1)
  int columns = 0;         // circuit depth D (gate columns 0..D-1)
  std::int64_t steps = 0;  // 2 * D
  std::vector<Coord> output_cells;  // column D, wire rows

  /// Per-cell gate register values of the initial configuration.
  std::vector<std::vector<int>> gate_plan;  // [row][col]
};

/// Encode a qubit circuit with gates from {H, T, X} and vertical
/// nearest-neighbor CZs. Throws StructuralError for other gates.
UniversalEncoding encode_circuit_as_qca(const Circuit& c);

/// Initial region state: column 0 active and loaded with `input`
/// (dimension 2^wires), every other state register |0>.
RegionState encoded_initial_state(const UniversalEncoding& enc,
                                  const Vector& input);

/// Read the state registers of the final active column (all other state
/// registers must have returned to |0>).
Vector extract_output(const RegionState& state, const UniversalEncoding& enc);

/// Gate register values used by the encoding.
enum UniversalGate : int {
  kGateNop = 0,
  kGateCpLower = 1,
  kGateCpUpper = 2,
  kGateH = 3,
  kGateT = 4,
  kGateX = 5,
};

}  // namespace luqca
