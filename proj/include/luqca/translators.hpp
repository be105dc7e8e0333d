#pragma once

// Embeddings of two earlier QCA formalisms as local unitary automata: the
// Watrous partitioned QCA (triple-register cells with a shift permutation)
// and the one-dimensional Generalized Margolus block scheme.

#include "luqca/state.hpp"

namespace luqca {

// ---------------------------------------------------------------------------
// Watrous partitioned QCA

/// Cells are (left, center, right) triples; one step permutes the side
/// registers between neighbors and then applies V to each cell.
struct WatrousPartitionedDef {
  int dim_l = 2;
  int dim_c = 2;
  int dim_r = 2;
  Matrix v;  // over dim_l * dim_c * dim_r
};

/// 1D LUQCA on neighborhood {0,+1}: U0 is the two-cell permutation P1
/// (swap r(x) with l(x+1)), V0 = V * P2 with P2 the in-cell l<->r swap.
/// Unequal side alphabets are padded at the high end so |l| = |r|; padded
/// symbols are unreachable from valid inputs.
QcaDefinition watrous_to_luqca(const WatrousPartitionedDef& def);

/// Layout of the translated automaton (padded register sizes).
CellLayout watrous_layout(const WatrousPartitionedDef& def);

// ---------------------------------------------------------------------------
// Generalized Margolus (d = 1)

/// Stage 0 maps each even-aligned data pair into the two corner factors
/// (dimensions dim_minus * dim_plus = sigma^2); stage 1 maps the factors
/// overlapping each odd-aligned pair back to data. Flattenings are
/// big-endian; the basis pairing between the pair space and the factor
/// space is part of the definition.
struct MargolusDef {
  int dimension = 1;
  int sigma = 2;      // data alphabet
  int dim_minus = 2;  // corner factor shared with the left odd block
  int dim_plus = 2;   // corner factor shared with the right odd block
  Matrix u0;          // sigma^2 -> dim_minus x dim_plus
  Matrix u1;          // dim_plus x dim_minus -> sigma^2
};

/// LUQCA with data plus corner-memory registers and classical parity/clock;
/// two steps implement one full Margolus period and return the memories to
/// |0>. Only d = 1 is materialized.
QcaDefinition margolus_to_luqca(const MargolusDef& def);

CellLayout margolus_layout(const MargolusDef& def);

/// Lift a data-register state (sigma per cell) onto the translated layout
/// (memories |0>, parity x mod 2, clock 0), and project back after an even
/// number of steps.
RegionState margolus_embedded_state(const MargolusDef& def,
                                    const RegionState& data);
RegionState margolus_extract_state(const MargolusDef& def,
                                   const RegionState& translated);

/// Shift-right expressed in the Margolus scheme (sigma = dim, corner
/// dimensions 1 and dim^2, identity stage maps).
MargolusDef margolus_shift_right(int dim = 2);

}  // namespace luqca
