#pragma once

// Region states: complex amplitudes over the quantum registers of a finite
// region plus definite per-cell values for registers flagged classical.
//
// Two interchangeable representations are provided. The dense one stores a
// flat vector over all quantum factors (cells lexicographic, big-endian).
// The sparse one stores a map from per-cell quantum basis values to
// amplitudes and is exact: entries are only dropped when they are zero.
// Large product-like states (a walk particle on a long line, a circuit
// encoding) stay tiny in the sparse form.

#include <cstdint>
#include <map>

#include "luqca/core.hpp"

namespace luqca {

/// Per-cell quantum sub-index, one entry per region cell.
using BasisKey = std::vector<int>;

class RegionState {
 public:
  RegionState() = default;

  /// Product state with every cell in the full-cell basis state `cellState`.
  /// Classical registers take their values from it.
  RegionState(Region region, CellLayout layout, int cellState,
              bool sparse = false,
              std::int64_t denseCap = std::int64_t(1) << 24);

  const Region& region() const { return region_; }
  const CellLayout& layout() const { return layout_; }
  std::int64_t cell_count() const { return cells_; }
  std::int64_t step_count() const { return t_; }
  void set_step_count(std::int64_t t) { t_ = t; }
  void bump_step_count() { ++t_; }

  bool is_sparse() const { return sparse_; }
  /// qdim^cells; throws ResourceError if it does not fit in 62 bits.
  std::int64_t quantum_space_dim() const;

  // -- classical registers ---------------------------------------------------
  bool has_classical() const { return layout_.has_classical(); }
  const std::vector<int>& classical_of(std::int64_t cellIndex) const;
  void set_classical(std::int64_t cellIndex, std::vector<int> values);
  const std::vector<std::vector<int>>& classical_values() const {
    return classical_;
  }

  // -- amplitudes --------------------------------------------------------------
  Complex amplitude(const BasisKey& key) const;
  void set_amplitude(const BasisKey& key, Complex value);
  void clear_amplitudes();
  double norm() const;
  void scale(Complex factor);

  const Vector& dense_amplitudes() const;
  Vector& dense_amplitudes();
  const std::map<BasisKey, Complex>& sparse_amplitudes() const;
  std::map<BasisKey, Complex>& sparse_amplitudes();

  /// Apply `op` to the quantum factors of the listed cells (in the given
  /// order). `op` may be non-unitary (restricted boundary operators); the
  /// caller is responsible for norm checks.
  void apply_quantum(const Matrix& op,
                     const std::vector<std::int64_t>& cellIndices);

  RegionState to_dense(std::int64_t cap = std::int64_t(1) << 24) const;
  RegionState to_sparse() const;

  /// Amplitudes over the full cell spaces (classical registers embedded as
  /// their definite basis states). For comparisons on small instances.
  Vector full_state_vector(std::int64_t cap = std::int64_t(1) << 24) const;

  /// Reduced density matrix over the full cell spaces of the listed cells.
  Matrix reduced_density(const std::vector<std::int64_t>& cellIndices) const;

  /// Torus translation: cell x of the result holds what cell x - shift held.
  RegionState translated(const Coord& shift) const;

  /// Max |amplitude difference| against another state on the same region.
  double max_deviation(const RegionState& other) const;

 private:
  void check_key(const BasisKey& key) const;
  Region region_;
  CellLayout layout_;
  std::int64_t cells_ = 0;
  bool sparse_ = false;
  Vector dense_;
  std::map<BasisKey, Complex> map_;
  std::vector<std::vector<int>> classical_;
  std::int64_t t_ = 0;
};

/// Materialize a block-initialized state on a region. Dense while the
/// quantum space fits under `denseCap`, sparse otherwise (block states then
/// must have limited support). Throws StructuralError when a supplied block
/// is not aligned inside the region or a state has the wrong dimension.
RegionState init_region(const BlockInitializer& init, const Region& region,
                        const CellLayout& layout,
                        std::int64_t denseCap = std::int64_t(1) << 24);

}  // namespace luqca
