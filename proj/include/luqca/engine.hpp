#pragma once

// Execution of LUQCA steps on finite regions: the read phase (all U_x in any
// order), the update phase (all V_x), past-lightcone sizing, boundary
// handling and observables.
//
// Boundary semantics. Torus regions wrap. Quiescent-padded regions apply
// boundary-crossing read operators in restricted form: the out-of-region
// tensor factors are fixed to the quiescent state on input and must return
// to it exactly on output. Amplitude that would escape the region shows up
// as a norm deficit and raises an error instead of being silently truncated.

#include <cstdint>
#include <optional>

#include "luqca/state.hpp"

namespace luqca {

struct EngineOptions {
  std::int64_t amplitude_cap = std::int64_t(1) << 24;
  double norm_tol = 1e-9;
};

/// One global update R = VU: U_x for every cell whose neighborhood meets the
/// region, then V_x for every region cell; increments the step counter.
RegionState step(const RegionState& state, const QcaDefinition& qca,
                 const EngineOptions& opt = {});

/// t applications of step.
RegionState run(const RegionState& state, const QcaDefinition& qca,
                std::int64_t t, const EngineOptions& opt = {});

/// step with an explicit application order for the read phase (the result
/// must not depend on it; exposed so tests can permute).
RegionState step_with_read_order(const RegionState& state,
                                 const QcaDefinition& qca,
                                 const std::vector<Coord>& readCenters,
                                 const EngineOptions& opt = {});

/// Canonical (lexicographic) read-phase centers for a region.
std::vector<Coord> read_centers(const Region& region,
                                const NeighborhoodScheme& nb);

struct LightconeSpec {
  Region target;
  std::int64_t steps = 0;
  /// per axis: cells added on the low side / high side
  std::vector<std::pair<int, int>> padding;
  Region padded;
};

/// Past-lightcone padding: t times the one-sided neighborhood extent on each
/// side of each axis.
LightconeSpec required_region(const Region& s, const QcaDefinition& qca,
                              std::int64_t t);

/// Reduced density matrix of one cell (over its full register space).
Matrix observe(const RegionState& state, const Coord& cell);

/// tr(rho * observable) for a Hermitian observable on one cell.
double expectation(const RegionState& state, const Coord& cell,
                   const Matrix& observable);

/// Apply an operator over the full cell spaces of the given support cells
/// (torus wrap allowed; all cells must land inside the region).
void apply_local(RegionState& state, const Matrix& op,
                 const std::vector<Coord>& support);

/// Apply one local rule anchored at `center`: support cells outside a
/// quiescent-padded region are fixed to the quiescent state (restricted
/// operator); torus coordinates wrap. Used by the engine and the CQCA
/// executor.
void apply_anchored(RegionState& state, const LocalOperator& op,
                    const KernelFn& kernel,
                    const std::vector<Coord>& supportOffsets,
                    const Coord& center, std::optional<int> quiescent);

}  // namespace luqca
