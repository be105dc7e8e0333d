#pragma once

// Domain types shared by every module: cell layouts, neighborhood schemes,
// lattice regions, automaton definitions and basis-index arithmetic.
//
// Basis convention used throughout the repository: cells are ordered
// lexicographically by coordinate, most significant first; within a cell,
// registers appear in declaration order, most significant first (big-endian
// mixed radix). Every matrix is expressed in this convention.

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace luqca {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Lattice coordinate or offset, one entry per axis.
using Coord = std::vector<int>;

/// Raised on malformed input files or definitions (CLI exit code 2).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a computation would exceed a configured cap (CLI exit code 3).
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised on dimension mismatches and other structural misuse (exit code 1).
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Cell layout

struct Register {
  std::string name;
  int dim = 2;
  bool classical = false;
};

/// Ordered register list making up one lattice cell. The cell Hilbert space
/// is the tensor product of the register spaces; registers flagged classical
/// are carried outside the amplitude vector by the engine.
class CellLayout {
 public:
  CellLayout() = default;
  explicit CellLayout(std::vector<Register> regs);

  static CellLayout single(int dim, const std::string& name = "cell");

  const std::vector<Register>& registers() const { return regs_; }
  int cell_dim() const { return cell_dim_; }
  int quantum_dim() const { return quantum_dim_; }
  int classical_dim() const { return classical_dim_; }
  bool has_classical() const { return classical_dim_ > 1; }
  std::size_t num_registers() const { return regs_.size(); }

  int register_index(const std::string& name) const;

  /// Full-cell basis index from per-register values (declaration order).
  int pack(const std::vector<int>& values) const;
  std::vector<int> unpack(int index) const;

  /// Split a full cell index into its quantum and classical mixed-radix
  /// sub-indices, or merge them back. Sub-indices run over the quantum
  /// (resp. classical) registers in declaration order, big-endian.
  int quantum_part(int cellIndex) const;
  int classical_part(int cellIndex) const;
  int merge(int quantumIndex, int classicalIndex) const;

  /// Per-classical-register values from a classical sub-index and back.
  std::vector<int> unpack_classical(int classicalIndex) const;
  int pack_classical(const std::vector<int>& values) const;
  std::vector<int> unpack_quantum(int quantumIndex) const;
  int pack_quantum(const std::vector<int>& values) const;

  bool operator==(const CellLayout& other) const;

 private:
  std::vector<Register> regs_;
  int cell_dim_ = 1;
  int quantum_dim_ = 1;
  int classical_dim_ = 1;
};

// ---------------------------------------------------------------------------
// Neighborhood scheme

/// Finite neighborhood N of lattice offsets. The zero offset is required to
/// belong to every scheme. Offsets are kept sorted lexicographically; that
/// order fixes the tensor-factor order of read operators.
class NeighborhoodScheme {
 public:
  NeighborhoodScheme() = default;
  NeighborhoodScheme(int dimension, std::vector<Coord> offsets);

  int dimension() const { return dim_; }
  const std::vector<Coord>& offsets() const { return offsets_; }
  std::size_t size() const { return offsets_.size(); }

  /// Most negative / most positive offset component on one axis.
  int min_extent(int axis) const { return min_[axis]; }
  int max_extent(int axis) const { return max_[axis]; }
  /// max - min + 1 on one axis.
  int diameter(int axis) const { return max_[axis] - min_[axis] + 1; }

  /// All nonzero differences a - b for a, b in N (the translations whose
  /// supports overlap this scheme).
  std::vector<Coord> overlap_offsets() const;

  bool operator==(const NeighborhoodScheme& other) const;

 private:
  int dim_ = 1;
  std::vector<Coord> offsets_;
  Coord min_, max_;
};

// ---------------------------------------------------------------------------
// Local operators

/// One evaluation of a classically controlled kernel: the new classical
/// values of every support cell plus a unitary acting on the quantum factors
/// of the cells listed in `op_cells` (empty matrix means identity).
struct KernelAction {
  std::vector<std::vector<int>> classical_out;
  Matrix op;
  std::vector<int> op_cells;
};

using KernelFn =
    std::function<KernelAction(const std::vector<std::vector<int>>&)>;

/// A local unitary on a fixed number of cells, stored either as a dense
/// matrix over the full cell spaces or as a classically controlled kernel
/// (required when the full matrix would be too large to materialize, e.g.
/// the universal QCA read rule). Copies share the dense storage.
class LocalOperator {
 public:
  LocalOperator() = default;

  static LocalOperator dense(Matrix m);
  static LocalOperator kernel(KernelFn fn, std::string name,
                              std::string params = "");

  bool is_dense() const { return static_cast<bool>(dense_); }
  bool is_kernel() const { return static_cast<bool>(fn_); }
  const Matrix& matrix() const;
  KernelAction evaluate(const std::vector<std::vector<int>>& classicalIn) const;
  const std::string& kernel_name() const { return name_; }
  const std::string& kernel_params() const { return params_; }

  /// Materialize as a dense matrix over `numCells` copies of `layout`.
  /// Throws ResourceError beyond `maxDim`.
  Matrix to_dense(const CellLayout& layout, int numCells,
                  std::int64_t maxDim = 1 << 14) const;

 private:
  std::shared_ptr<const Matrix> dense_;
  KernelFn fn_;
  std::string name_, params_;
};

/// Derive a table-backed kernel from a dense operator by scanning its
/// columns: each classical input configuration must map into exactly one
/// classical output configuration (a basis-controlled permutation).
/// Throws StructuralError if the operator mixes classical configurations.
KernelFn decompose_to_kernel(const Matrix& op, const CellLayout& layout,
                             int numCells, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Regions

enum class BoundaryMode { Quiescent, Torus };

/// Finite axis-aligned box of cells, inclusive corners.
class Region {
 public:
  Region() = default;
  Region(Coord lower, Coord upper, BoundaryMode mode);

  int dimension() const { return static_cast<int>(lower_.size()); }
  const Coord& lower() const { return lower_; }
  const Coord& upper() const { return upper_; }
  BoundaryMode boundary() const { return mode_; }
  int axis_length(int axis) const { return upper_[axis] - lower_[axis] + 1; }
  std::int64_t cell_count() const;

  bool contains(const Coord& c) const;
  /// Lexicographic rank of a coordinate within the region.
  std::int64_t index_of(const Coord& c) const;
  Coord coord_of(std::int64_t index) const;
  /// Torus wrap of an arbitrary coordinate into the region.
  Coord wrap(const Coord& c) const;

  bool operator==(const Region& other) const;

 private:
  Coord lower_, upper_;
  BoundaryMode mode_ = BoundaryMode::Quiescent;
};

// ---------------------------------------------------------------------------
// Automaton definition

/// Local unitary QCA: a read operator U0 on the neighborhood cells followed
/// by a single-cell update operator V0, plus an optional quiescent state.
class QcaDefinition {
 public:
  QcaDefinition() = default;
  QcaDefinition(CellLayout layout, NeighborhoodScheme neighborhood,
                LocalOperator readOp, LocalOperator updateOp,
                std::optional<int> quiescent = std::nullopt);

  const CellLayout& layout() const { return layout_; }
  const NeighborhoodScheme& neighborhood() const { return neighborhood_; }
  const LocalOperator& read_op() const { return read_; }
  const LocalOperator& update_op() const { return update_; }
  std::optional<int> quiescent() const { return quiescent_; }

  /// Kernel forms of U0 / V0. For dense operators on a hybrid layout these
  /// are derived once via decompose_to_kernel; for all-quantum layouts the
  /// dense path is used directly and these stay empty.
  const KernelFn& read_kernel() const { return read_kernel_; }
  const KernelFn& update_kernel() const { return update_kernel_; }
  bool hybrid() const { return layout_.has_classical(); }

 private:
  CellLayout layout_;
  NeighborhoodScheme neighborhood_;
  LocalOperator read_, update_;
  std::optional<int> quiescent_;
  KernelFn read_kernel_, update_kernel_;
};

// ---------------------------------------------------------------------------
// Validation

struct CheckResult {
  std::string name;
  double residual = 0.0;
  bool pass = true;
  std::string note;
};

struct OffsetResidual {
  Coord offset;
  double residual = 0.0;
  bool computed = true;  // false: supports disjoint, trivially commuting
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  std::vector<OffsetResidual> commutation;
  double max_commutation_residual = 0.0;
  bool pass = true;
  std::string structural_error;  // nonempty when validation aborted early

  std::string summary() const;
};

/// Unitarity, quiescence and translation-commutation checks at tolerance
/// `tol` (Frobenius norms). Dimension mismatches surface as a structural
/// error, not a residual.
ValidationReport validate_definition(const QcaDefinition& qca,
                                     double tol = 1e-9);

// ---------------------------------------------------------------------------
// Basis-index arithmetic

/// Flat basis index of a per-cell register assignment over a region.
/// assignment[i] holds the register values (declaration order) of the cell
/// with lexicographic rank i. Throws StructuralError on out-of-range values
/// and ResourceError if the index space exceeds 2^62.
std::uint64_t basis_index(const CellLayout& layout, const Region& region,
                          const std::vector<std::vector<int>>& assignment);

std::vector<std::vector<int>> basis_decode(const CellLayout& layout,
                                           const Region& region,
                                           std::uint64_t index);

// ---------------------------------------------------------------------------
// Block initializers

/// Initial-state function: maps block coordinates to pure states on k^d
/// cells; unspecified blocks get the default fill (quiescent or a named
/// basis state) on every cell.
class BlockInitializer {
 public:
  BlockInitializer() = default;
  BlockInitializer(int blockSide, int defaultCellState);

  int block_side() const { return k_; }
  int default_cell_state() const { return fill_; }

  /// Register a pure state (unit norm, dimension cell_dim^(k^d)) for the
  /// block whose lowest cell is blockCoord * k.
  void set_block(const Coord& blockCoord, Vector state);
  const std::vector<std::pair<Coord, Vector>>& blocks() const {
    return blocks_;
  }

 private:
  int k_ = 1;
  int fill_ = 0;
  std::vector<std::pair<Coord, Vector>> blocks_;
};

// ---------------------------------------------------------------------------
// Small coordinate helpers

Coord coord_add(const Coord& a, const Coord& b);
Coord coord_sub(const Coord& a, const Coord& b);
bool coord_is_zero(const Coord& c);
std::string coord_to_string(const Coord& c);

}  // namespace luqca
