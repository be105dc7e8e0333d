#include "luqca/engine.hpp"

#include <algorithm>

#include "luqca/linalg.hpp"

namespace luqca {

namespace {

// Restrict `op` (over `numCells` factors of dimension `dim`, factor order =
// support order) by fixing the factors in `fixedPos` to basis value `value`.
// The result acts on the remaining factors; it is the quiescent-boundary
// operator and may be non-unitary when the rule moves amplitude outward.
Matrix restrict_operator(const Matrix& op, int numCells, int dim,
                         const std::vector<int>& fixedPos, int value) {
  std::vector<bool> fixed(numCells, false);
  for (int p : fixedPos) fixed[p] = true;
  std::vector<int> freePos;
  for (int i = 0; i < numCells; ++i)
    if (!fixed[i]) freePos.push_back(i);

  std::vector<int> dims(numCells, dim);
  std::vector<std::int64_t> stride(numCells, 1);
  for (int i = numCells - 2; i >= 0; --i) stride[i] = stride[i + 1] * dim;

  std::int64_t base = 0;
  for (int p : fixedPos) base += static_cast<std::int64_t>(value) * stride[p];

  const auto freeOff = support_offsets(freePos, dims);
  const std::int64_t fdim = static_cast<std::int64_t>(freeOff.size());
  Matrix out(fdim, fdim);
  for (std::int64_t j = 0; j < fdim; ++j)
    for (std::int64_t i = 0; i < fdim; ++i)
      out(i, j) = op(base + freeOff[i], base + freeOff[j]);
  return out;
}

void check_torus_fits(const Region& region, const NeighborhoodScheme& nb) {
  for (int a = 0; a < region.dimension(); ++a)
    if (region.axis_length(a) < nb.diameter(a))
      throw StructuralError(
          "torus axis shorter than the neighborhood diameter");
}

}  // namespace

void apply_anchored(RegionState& state, const LocalOperator& op,
                    const KernelFn& kernel,
                    const std::vector<Coord>& supportOffsets,
                    const Coord& center, std::optional<int> quiescent) {
  const Region& region = state.region();
  const CellLayout& layout = state.layout();
  const int n = static_cast<int>(supportOffsets.size());

  std::vector<std::int64_t> cellIdx(n, -1);  // -1: outside (quiescent mode)
  std::vector<int> outsidePos;
  for (int i = 0; i < n; ++i) {
    Coord c = coord_add(center, supportOffsets[i]);
    if (region.boundary() == BoundaryMode::Torus) {
      cellIdx[i] = region.index_of(region.wrap(c));
    } else if (region.contains(c)) {
      cellIdx[i] = region.index_of(c);
    } else {
      outsidePos.push_back(i);
    }
  }
  {
    std::vector<std::int64_t> sorted;
    for (auto v : cellIdx)
      if (v >= 0) sorted.push_back(v);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw StructuralError("support cells collide (region too small)");
  }
  if (!outsidePos.empty() && !quiescent)
    throw StructuralError(
        "neighborhood overflows a quiescent-padded region but no quiescent "
        "state is declared");

  if (!layout.has_classical()) {
    // all-quantum: cell space == quantum space
    const Matrix* m = nullptr;
    Matrix holder;
    if (op.is_dense()) {
      m = &op.matrix();
    } else {
      holder = op.to_dense(layout, n, std::int64_t(1) << 14);
      m = &holder;
    }
    std::vector<std::int64_t> cells;
    if (outsidePos.empty()) {
      cells.assign(cellIdx.begin(), cellIdx.end());
    } else {
      holder = restrict_operator(*m, n, layout.cell_dim(), outsidePos,
                                 layout.quantum_part(*quiescent));
      m = &holder;
      for (int i = 0; i < n; ++i)
        if (cellIdx[i] >= 0) cells.push_back(cellIdx[i]);
    }
    if (m->rows() == 1) {
      state.scale((*m)(0, 0));
    } else {
      state.apply_quantum(*m, cells);
    }
    return;
  }

  // hybrid: classical registers are read from (and written back to) the
  // state; out-of-region cells carry the quiescent classical values
  if (!kernel)
    throw StructuralError("hybrid layout requires a kernel operator");
  std::vector<int> quiescentClassical;
  if (quiescent)
    quiescentClassical =
        layout.unpack_classical(layout.classical_part(*quiescent));

  std::vector<std::vector<int>> classicalIn(n);
  for (int i = 0; i < n; ++i)
    classicalIn[i] =
        cellIdx[i] >= 0 ? state.classical_of(cellIdx[i]) : quiescentClassical;

  KernelAction act = kernel(classicalIn);
  if (static_cast<int>(act.classical_out.size()) != n)
    throw StructuralError("kernel returned wrong classical arity");
  for (int i = 0; i < n; ++i) {
    if (cellIdx[i] >= 0) continue;
    if (act.classical_out[i] != quiescentClassical)
      throw StructuralError(
          "rule writes non-quiescent classical values outside the region");
  }

  if (act.op.size() != 0) {
    // split the quantum action into in-region and fixed (outside) factors
    std::vector<int> fixedPos;
    std::vector<std::int64_t> cells;
    for (std::size_t k = 0; k < act.op_cells.size(); ++k) {
      int supportCell = act.op_cells[k];
      if (cellIdx[supportCell] >= 0)
        cells.push_back(cellIdx[supportCell]);
      else
        fixedPos.push_back(static_cast<int>(k));
    }
    Matrix m = act.op;
    if (!fixedPos.empty())
      m = restrict_operator(m, static_cast<int>(act.op_cells.size()),
                            layout.quantum_dim(), fixedPos,
                            layout.quantum_part(*quiescent));
    if (m.rows() == 1) {
      state.scale(m(0, 0));
    } else {
      state.apply_quantum(m, cells);
    }
  }
  for (int i = 0; i < n; ++i)
    if (cellIdx[i] >= 0) state.set_classical(cellIdx[i], act.classical_out[i]);
}

void apply_local(RegionState& state, const Matrix& op,
                 const std::vector<Coord>& support) {
  const Region& region = state.region();
  for (const auto& c : support)
    if (region.boundary() != BoundaryMode::Torus && !region.contains(c))
      throw StructuralError("apply_local: support cell outside region");
  LocalOperator lop = LocalOperator::dense(op);
  KernelFn kernel;
  if (state.layout().has_classical())
    kernel = decompose_to_kernel(op, state.layout(),
                                 static_cast<int>(support.size()));
  const Coord zero(region.dimension(), 0);
  std::vector<Coord> offsets = support;  // anchored at the origin
  apply_anchored(state, lop, kernel, offsets, zero, std::nullopt);
}

std::vector<Coord> read_centers(const Region& region,
                                const NeighborhoodScheme& nb) {
  const int d = region.dimension();
  std::vector<Coord> centers;
  if (region.boundary() == BoundaryMode::Torus) {
    for (std::int64_t i = 0; i < region.cell_count(); ++i)
      centers.push_back(region.coord_of(i));
    return centers;
  }
  // every x whose neighborhood intersects the region
  Coord lo(d), hi(d);
  for (int a = 0; a < d; ++a) {
    lo[a] = region.lower()[a] - nb.max_extent(a);
    hi[a] = region.upper()[a] - nb.min_extent(a);
  }
  Coord c = lo;
  while (true) {
    bool hits = false;
    for (const auto& o : nb.offsets())
      if (region.contains(coord_add(c, o))) {
        hits = true;
        break;
      }
    if (hits) centers.push_back(c);
    int a = d - 1;
    for (; a >= 0; --a) {
      if (++c[a] <= hi[a]) break;
      c[a] = lo[a];
    }
    if (a < 0) break;
  }
  return centers;
}

RegionState step_with_read_order(const RegionState& state,
                                 const QcaDefinition& qca,
                                 const std::vector<Coord>& readCenters,
                                 const EngineOptions& opt) {
  if (!(state.layout() == qca.layout()))
    throw StructuralError("state layout does not match the automaton");
  const Region& region = state.region();
  const auto& nb = qca.neighborhood();
  if (region.dimension() != nb.dimension())
    throw StructuralError("region dimension does not match the automaton");
  if (region.boundary() == BoundaryMode::Torus) check_torus_fits(region, nb);

  RegionState s = state;
  const double normBefore = s.norm();

  for (const Coord& x : readCenters)
    apply_anchored(s, qca.read_op(), qca.read_kernel(), nb.offsets(), x,
                   qca.quiescent());

  const Coord zero(nb.dimension(), 0);
  const std::vector<Coord> vSupport{zero};
  for (std::int64_t i = 0; i < region.cell_count(); ++i)
    apply_anchored(s, qca.update_op(), qca.update_kernel(), vSupport,
                   region.coord_of(i), qca.quiescent());

  if (region.boundary() == BoundaryMode::Quiescent) {
    const double drift = std::abs(s.norm() - normBefore);
    if (drift > opt.norm_tol)
      throw StructuralError(
          "amplitude escaped the region (norm drift " +
          std::to_string(drift) + "); enlarge the region");
  }
  s.bump_step_count();
  return s;
}

RegionState step(const RegionState& state, const QcaDefinition& qca,
                 const EngineOptions& opt) {
  return step_with_read_order(
      state, qca, read_centers(state.region(), qca.neighborhood()), opt);
}

RegionState run(const RegionState& state, const QcaDefinition& qca,
                std::int64_t t, const EngineOptions& opt) {
  if (t < 0) throw StructuralError("negative step count");
  RegionState s = state;
  for (std::int64_t i = 0; i < t; ++i) s = step(s, qca, opt);
  return s;
}

LightconeSpec required_region(const Region& s, const QcaDefinition& qca,
                              std::int64_t t) {
  if (t < 0) throw StructuralError("negative step count");
  const auto& nb = qca.neighborhood();
  LightconeSpec spec;
  spec.target = s;
  spec.steps = t;
  Coord lo = s.lower(), hi = s.upper();
  for (int a = 0; a < s.dimension(); ++a) {
    const int low = static_cast<int>(t) * nb.max_extent(a);
    const int high = static_cast<int>(t) * (-nb.min_extent(a));
    spec.padding.emplace_back(low, high);
    lo[a] -= low;
    hi[a] += high;
  }
  spec.padded = Region(lo, hi, s.boundary());
  return spec;
}

Matrix observe(const RegionState& state, const Coord& cell) {
  if (!state.region().contains(cell))
    throw StructuralError("observe: cell outside region");
  return state.reduced_density({state.region().index_of(cell)});
}

double expectation(const RegionState& state, const Coord& cell,
                   const Matrix& observable) {
  const double hn = observable.norm();
  if ((observable - observable.adjoint()).norm() > 1e-9 * std::max(hn, 1.0))
    throw StructuralError("expectation: observable is not Hermitian");
  Matrix rho = observe(state, cell);
  return (rho * observable).trace().real();
}

}  // namespace luqca
