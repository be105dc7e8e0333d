#pragma once

// Dense complex matrix services: unitarity checks, Hermitian exponentials,
// embedded translation commutators and strided application of local
// operators to flat state vectors.

#include <cstdint>
#include <random>

#include "luqca/core.hpp"

namespace luqca {

struct UnitarityResult {
  bool unitary = false;
  double residual = 0.0;
};

/// residual = ||M'M - I||_F; unitary iff residual <= tol.
UnitarityResult is_unitary(const Matrix& m, double tol = 1e-9);

/// e^{-iHt} via eigendecomposition. Requires H Hermitian to relative
/// tolerance ||H - H'||_F <= 1e-9 * ||H||_F (throws StructuralError).
Matrix herm_exp(const Matrix& h, double t);

struct CommutationReport {
  std::vector<OffsetResidual> offsets;
  double max_residual = 0.0;
  bool pass = true;
};

struct CommutationOptions {
  double tol = 1e-9;
  /// Dense embeddings are built while joint_dim^2 stays within this cap.
  std::int64_t amplitudes_squared_cap = std::int64_t(1) << 22;
  /// Hybrid block path: cap on the number of joint classical configurations
  /// and on the joint quantum dimension.
  std::int64_t classical_config_cap = std::int64_t(1) << 16;
  std::int64_t block_quantum_dim_cap = 256;
};

/// For each nonzero offset delta with N and N+delta overlapping, embeds U0
/// at 0 and at delta on the joint cell set (identity elsewhere) and reports
/// ||[A,B]||_F. Hybrid definitions whose dense embedding would exceed the
/// cap are checked block-by-block over joint classical configurations.
CommutationReport commutes_with_translations(const QcaDefinition& qca,
                                             double tol = 1e-9);
CommutationReport commutes_with_translations(const QcaDefinition& qca,
                                             const CommutationOptions& opt);

/// Embed `op` on the tensor factors listed in `cells` (positions within a
/// product of `numCells` factors of dimension `cellDim`, identity on the
/// rest). The factor order of `op` is the order of `cells`.
Matrix embed_on_cells(const Matrix& op, const std::vector<int>& cells,
                      int numCells, int cellDim);

/// Apply `op` in place to the factors listed in `supportPos` of a flat state
/// over per-position dimensions `dims` (big-endian mixed radix). Strided
/// iteration over the non-support factors; no global matrix is formed.
void apply_on_factors(Vector& state, const Matrix& op,
                      const std::vector<int>& supportPos,
                      const std::vector<int>& dims);

/// Precomputed flat offsets of every support sub-index (strides helper used
/// by apply_on_factors and the sparse state path).
std::vector<std::int64_t> support_offsets(const std::vector<int>& supportPos,
                                          const std::vector<int>& dims);

/// Reduced density matrix over the factors in `keep` (ascending), tracing
/// out the rest.
Matrix partial_trace(const Vector& state, const std::vector<int>& keep,
                     const std::vector<int>& dims);

/// 0.5 * sum |eig(a - b)| for Hermitian a, b.
double trace_distance(const Matrix& a, const Matrix& b);

/// Haar-ish random unitary (QR of a Ginibre matrix) and random unit vector.
Matrix random_unitary(int n, std::mt19937& rng);
Vector random_state(std::int64_t n, std::mt19937& rng);

}  // namespace luqca
