#pragma once

// Correct k-colorings, symmetric update operators, colored-QCA execution and
// the CQCA <-> QCA translations.
//
// A CQCA runs a periodic sequence of phases; phase j applies one operator on
// the Manhattan-radius-1 neighborhood of every cell of color c_j. Because a
// correct coloring keeps same-color cells at distance >= 2, applications
// within a phase commute.

#include "luqca/engine.hpp"

namespace luqca {

/// Periodic cell coloring. `period` gives the per-axis period lengths and
/// `colors` the values on one period block, lexicographic.
class Coloring {
 public:
  Coloring() = default;
  Coloring(int dimension, Coord period, std::vector<int> colors, int k);

  int dimension() const { return dim_; }
  const Coord& period() const { return period_; }
  int num_colors() const { return k_; }
  const std::vector<int>& table() const { return colors_; }

  int color_at(const Coord& c) const;

  /// checkerboard (sum of coordinates mod 2)
  static Coloring checkerboard(int dimension);
  /// 1D coloring x mod k
  static Coloring cyclic(int k);

 private:
  int dim_ = 1;
  Coord period_;
  std::vector<int> colors_;
  int k_ = 1;
};

/// True iff no two cells at Manhattan distance 1 share a color, across one
/// period including the wrap seams.
bool validate_coloring(const Coloring& col);

/// Manhattan-radius-1 neighborhood in d dimensions (2d + 1 offsets).
NeighborhoodScheme manhattan_radius1(int dimension);

struct SymmetryReport {
  bool symmetric = false;
  double swap_residual = 0.0;   // worst ||[U, SWAP_{x,y}]||_F over neighbor pairs
  double block_residual = 0.0;  // weight off the neighbor-basis block diagonal
};

/// Symmetric update operator test: U commutes with every neighbor-pair SWAP
/// and is block-diagonal over the computational basis of the neighbor cells.
SymmetryReport is_symmetric(const Matrix& u, const CellLayout& layout,
                            double tol = 1e-9);

struct CqcaPhase {
  Matrix op;  // on the radius-1 neighborhood, offsets sorted lexicographically
  int color = 0;
};

class CqcaDefinition {
 public:
  CqcaDefinition() = default;
  CqcaDefinition(CellLayout layout, Coloring coloring,
                 std::vector<CqcaPhase> phases,
                 std::optional<int> quiescent = std::nullopt);

  const CellLayout& layout() const { return layout_; }
  const Coloring& coloring() const { return coloring_; }
  const std::vector<CqcaPhase>& phases() const { return phases_; }
  int period() const { return static_cast<int>(phases_.size()); }
  const NeighborhoodScheme& neighborhood() const { return nb_; }
  std::optional<int> quiescent() const { return quiescent_; }

  /// Offsets on which phase j acts non-trivially, and the phase operator
  /// reduced to those factors.
  const std::vector<Coord>& active_offsets(int j) const;
  const Matrix& reduced_op(int j) const;
  const LocalOperator& reduced_operator(int j) const;

  /// Per-phase unitarity and symmetry results (symmetry is advisory: the
  /// execution contract only needs same-color applications to commute).
  std::vector<CheckResult> validate(double tol = 1e-9) const;

 private:
  CellLayout layout_;
  Coloring coloring_;
  std::vector<CqcaPhase> phases_;
  NeighborhoodScheme nb_;
  std::optional<int> quiescent_;
  std::vector<std::vector<Coord>> active_;
  std::vector<LocalOperator> reduced_;
};

/// Apply phase j at every cell of color c_j. On quiescent-padded regions
/// without a declared quiescent state, instances whose nontrivial support
/// leaves the region are skipped (open-boundary semantics); with one, the
/// restricted-operator boundary of the engine applies.
RegionState cqca_step(const RegionState& state, const CqcaDefinition& cqca,
                      int phase, const EngineOptions& opt = {});

/// `phaseCount` consecutive phase applications starting at
/// state.step_count() mod T.
RegionState cqca_run(const RegionState& state, const CqcaDefinition& cqca,
                     std::int64_t phaseCount, const EngineOptions& opt = {});

/// CQCA -> QCA: adds classical color and clock registers; U0 applies the
/// clock's phase operator where the neighborhood color pattern is consistent
/// with the coloring (identity otherwise); V0 increments the clock mod T.
QcaDefinition cqca_to_qca(const CqcaDefinition& cqca);

/// Lift a CQCA state onto the translated layout (colors from the coloring,
/// clocks 0) and project back down.
RegionState cqca_embedded_state(const CqcaDefinition& cqca,
                                const RegionState& base);
RegionState cqca_extract_state(const CqcaDefinition& cqca,
                               const RegionState& translated);

/// Gate for gates_to_cqca: a single-cell unitary, or a controlled-NOT
/// (generalized to qudits: |c,t> -> |c, t+c mod dim>) between offsets at
/// Manhattan distance 1.
struct LocalGate {
  enum class Kind { Single, ControlledNot };
  Kind kind = Kind::Single;
  Matrix u;      // single-cell unitary (Single only)
  Coord control; // offsets relative to the anchor cell (ControlledNot only)
  Coord target;

  static LocalGate single(Matrix u);
  static LocalGate cnot(Coord control, Coord target);
};

/// A CQCA whose full period applies the gate sequence at every lattice cell,
/// one color class at a time. Colorings must distinguish all cells inside
/// any radius-1 neighborhood when the sequence contains controlled gates.
CqcaDefinition gates_to_cqca(const std::vector<LocalGate>& gates,
                             const Coloring& coloring,
                             const CellLayout& layout);

}  // namespace luqca
