#include "luqca/coloring.hpp"

#include <algorithm>
#include <memory>
#include <set>

#include "luqca/linalg.hpp"

namespace luqca {

// ---------------------------------------------------------------------------
// Coloring

Coloring::Coloring(int dimension, Coord period, std::vector<int> colors, int k)
    : dim_(dimension), period_(std::move(period)), colors_(std::move(colors)),
      k_(k) {
  if (static_cast<int>(period_.size()) != dim_)
    throw StructuralError("coloring period arity mismatch");
  std::int64_t cells = 1;
  for (int p : period_) {
    if (p < 1) throw StructuralError("coloring period must be positive");
    cells *= p;
  }
  if (static_cast<std::int64_t>(colors_.size()) != cells)
    throw StructuralError("coloring table size mismatch");
  for (int c : colors_)
    if (c < 0 || c >= k_) throw StructuralError("color value out of range");
}

int Coloring::color_at(const Coord& c) const {
  std::int64_t idx = 0;
  for (int a = 0; a < dim_; ++a) {
    int m = c[a] % period_[a];
    if (m < 0) m += period_[a];
    idx = idx * period_[a] + m;
  }
  return colors_[idx];
}

Coloring Coloring::checkerboard(int dimension) {
  Coord period(dimension, 2);
  std::int64_t cells = std::int64_t(1) << dimension;
  std::vector<int> colors(cells);
  for (std::int64_t i = 0; i < cells; ++i) {
    int bits = 0;
    for (std::int64_t b = i; b; b >>= 1) bits += static_cast<int>(b & 1);
    colors[i] = bits % 2;
  }
  return Coloring(dimension, period, colors, 2);
}

Coloring Coloring::cyclic(int k) {
  std::vector<int> colors(k);
  for (int i = 0; i < k; ++i) colors[i] = i;
  return Coloring(1, {k}, colors, k);
}

bool validate_coloring(const Coloring& col) {
  const int d = col.dimension();
  Coord c(d, 0);
  while (true) {
    const int base = col.color_at(c);
    for (int a = 0; a < d; ++a) {
      Coord n = c;
      n[a] += 1;  // wrap seams are covered by the periodic lookup
      if (col.color_at(n) == base) return false;
    }
    int a = d - 1;
    for (; a >= 0; --a) {
      if (++c[a] < col.period()[a]) break;
      c[a] = 0;
    }
    if (a < 0) break;
  }
  return true;
}

NeighborhoodScheme manhattan_radius1(int dimension) {
  std::vector<Coord> offsets{Coord(dimension, 0)};
  for (int a = 0; a < dimension; ++a) {
    Coord plus(dimension, 0), minus(dimension, 0);
    plus[a] = 1;
    minus[a] = -1;
    offsets.push_back(plus);
    offsets.push_back(minus);
  }
  return NeighborhoodScheme(dimension, offsets);
}

// ---------------------------------------------------------------------------
// symmetry test

SymmetryReport is_symmetric(const Matrix& u, const CellLayout& layout,
                            double tol) {
  const int cellDim = layout.cell_dim();
  const std::int64_t dim = u.rows();
  int n = 0;
  std::int64_t p = 1;
  while (p < dim) {
    p *= cellDim;
    ++n;
  }
  if (p != dim || n % 2 == 0)
    throw StructuralError(
        "operator size is not an odd power of the cell dimension");
  const int d = (n - 1) / 2;
  const NeighborhoodScheme nb = manhattan_radius1(d);
  int center = 0;
  for (std::size_t i = 0; i < nb.offsets().size(); ++i)
    if (coord_is_zero(nb.offsets()[i])) center = static_cast<int>(i);

  std::vector<std::int64_t> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * cellDim;
  auto digit = [&](std::int64_t idx, int pos) {
    return static_cast<int>((idx / stride[pos]) % cellDim);
  };

  SymmetryReport rep;

  // (a) commutation with every SWAP of two neighbor cells
  for (int i = 0; i < n; ++i) {
    if (i == center) continue;
    for (int j = i + 1; j < n; ++j) {
      if (j == center) continue;
      auto pi = [&](std::int64_t idx) {
        const int di = digit(idx, i), dj = digit(idx, j);
        return idx + static_cast<std::int64_t>(dj - di) * stride[i] +
               static_cast<std::int64_t>(di - dj) * stride[j];
      };
      double sq = 0.0;
      for (std::int64_t c = 0; c < dim; ++c) {
        const std::int64_t pc = pi(c);
        for (std::int64_t r = 0; r < dim; ++r)
          sq += std::norm(u(r, pc) - u(pi(r), c));
      }
      rep.swap_residual = std::max(rep.swap_residual, std::sqrt(sq));
    }
  }

  // (b) block-diagonal over the neighbors' computational basis
  double sq = 0.0;
  for (std::int64_t c = 0; c < dim; ++c)
    for (std::int64_t r = 0; r < dim; ++r) {
      if (u(r, c) == Complex(0, 0)) continue;
      for (int q = 0; q < n; ++q) {
        if (q == center) continue;
        if (digit(r, q) != digit(c, q)) {
          sq += std::norm(u(r, c));
          break;
        }
      }
    }
  rep.block_residual = std::sqrt(sq);

  rep.symmetric = rep.swap_residual <= tol && rep.block_residual <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// CqcaDefinition

namespace {

// residual of `op` acting as the identity on factor `pos`
double factor_triviality(const Matrix& op, int n, int cellDim, int pos) {
  std::vector<std::int64_t> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * cellDim;
  const std::int64_t dim = op.rows();
  auto digit = [&](std::int64_t idx) {
    return static_cast<int>((idx / stride[pos]) % cellDim);
  };
  double sq = 0.0;
  for (std::int64_t c = 0; c < dim; ++c) {
    const int dc = digit(c);
    for (std::int64_t r = 0; r < dim; ++r) {
      const int dr = digit(r);
      if (dr != dc) {
        sq += std::norm(op(r, c));
      } else if (dr != 0) {
        sq += std::norm(op(r, c) -
                        op(r - static_cast<std::int64_t>(dr) * stride[pos],
                           c - static_cast<std::int64_t>(dc) * stride[pos]));
      }
    }
  }
  return std::sqrt(sq);
}

// slice `op` by fixing the factors in `fixedPos` to value 0
Matrix slice_factors(const Matrix& op, int n, int cellDim,
                     const std::vector<int>& fixedPos) {
  std::vector<bool> fixed(n, false);
  for (int p : fixedPos) fixed[p] = true;
  std::vector<int> freePos;
  for (int i = 0; i < n; ++i)
    if (!fixed[i]) freePos.push_back(i);
  std::vector<int> dims(n, cellDim);
  const auto off = support_offsets(freePos, dims);
  Matrix out(off.size(), off.size());
  for (std::size_t j = 0; j < off.size(); ++j)
    for (std::size_t i = 0; i < off.size(); ++i)
      out(i, j) = op(off[i], off[j]);
  return out;
}

}  // namespace

CqcaDefinition::CqcaDefinition(CellLayout layout, Coloring coloring,
                               std::vector<CqcaPhase> phases,
                               std::optional<int> quiescent)
    : layout_(std::move(layout)),
      coloring_(std::move(coloring)),
      phases_(std::move(phases)),
      quiescent_(quiescent) {
  if (layout_.has_classical())
    throw StructuralError("CQCA layouts must be all-quantum");
  if (!validate_coloring(coloring_))
    throw StructuralError("coloring is not correct (adjacent cells collide)");
  nb_ = manhattan_radius1(coloring_.dimension());
  const int n = static_cast<int>(nb_.size());
  std::int64_t dim = 1;
  for (int i = 0; i < n; ++i) dim *= layout_.cell_dim();
  int center = 0;
  for (int i = 0; i < n; ++i)
    if (coord_is_zero(nb_.offsets()[i])) center = i;

  for (const auto& ph : phases_) {
    if (ph.color < 0 || ph.color >= coloring_.num_colors())
      throw StructuralError("phase color out of range");
    if (ph.op.rows() != dim)
      throw StructuralError("phase operator dimension mismatch");
    std::vector<int> trivial;
    std::vector<Coord> active;
    for (int p = 0; p < n; ++p) {
      if (p != center &&
          factor_triviality(ph.op, n, layout_.cell_dim(), p) <= 1e-12)
        trivial.push_back(p);
      else
        active.push_back(nb_.offsets()[p]);
    }
    reduced_.push_back(LocalOperator::dense(
        slice_factors(ph.op, n, layout_.cell_dim(), trivial)));
    active_.push_back(std::move(active));
  }
}

const std::vector<Coord>& CqcaDefinition::active_offsets(int j) const {
  return active_.at(j);
}

const Matrix& CqcaDefinition::reduced_op(int j) const {
  return reduced_.at(j).matrix();
}

const LocalOperator& CqcaDefinition::reduced_operator(int j) const {
  return reduced_.at(j);
}

std::vector<CheckResult> CqcaDefinition::validate(double tol) const {
  std::vector<CheckResult> out;
  for (int j = 0; j < period(); ++j) {
    auto [unitary, res] = is_unitary(phases_[j].op, tol);
    out.push_back(
        {"unitarity(phase " + std::to_string(j) + ")", res, unitary, ""});
    SymmetryReport sym = is_symmetric(phases_[j].op, layout_, tol);
    out.push_back({"symmetry(phase " + std::to_string(j) + ")",
                   std::max(sym.swap_residual, sym.block_residual),
                   sym.symmetric, "advisory"});
  }
  return out;
}

// ---------------------------------------------------------------------------
// execution

RegionState cqca_step(const RegionState& state, const CqcaDefinition& cqca,
                      int phase, const EngineOptions& opt) {
  if (phase < 0 || phase >= cqca.period())
    throw StructuralError("phase index out of range");
  const Region& region = state.region();
  const Coloring& col = cqca.coloring();
  const int d = region.dimension();
  if (d != col.dimension())
    throw StructuralError("region dimension does not match the coloring");
  if (region.boundary() == BoundaryMode::Torus) {
    for (int a = 0; a < d; ++a)
      if (region.axis_length(a) % col.period()[a] != 0)
        throw StructuralError(
            "torus length is not a multiple of the coloring period");
  }

  const int cj = cqca.phases()[phase].color;
  const auto& offsets = cqca.active_offsets(phase);
  const LocalOperator& op = cqca.reduced_operator(phase);
  KernelFn noKernel;

  RegionState s = state;
  const double normBefore = s.norm();

  if (region.boundary() == BoundaryMode::Torus) {
    for (std::int64_t i = 0; i < region.cell_count(); ++i) {
      Coord x = region.coord_of(i);
      if (col.color_at(x) == cj)
        apply_anchored(s, op, noKernel, offsets, x, cqca.quiescent());
    }
  } else {
    // dilate by the active extents so border-crossing instances are seen
    Coord lo = region.lower(), hi = region.upper();
    for (const auto& o : offsets)
      for (int a = 0; a < d; ++a) {
        lo[a] = std::min(lo[a], region.lower()[a] - o[a]);
        hi[a] = std::max(hi[a], region.upper()[a] - o[a]);
      }
    Coord x = lo;
    while (true) {
      if (col.color_at(x) == cj) {
        bool inside = true, touches = false;
        for (const auto& o : offsets) {
          if (region.contains(coord_add(x, o)))
            touches = true;
          else
            inside = false;
        }
        if (touches) {
          if (inside || cqca.quiescent())
            apply_anchored(s, op, noKernel, offsets, x, cqca.quiescent());
          // without a quiescent state, boundary-crossing instances do not
          // exist on the finite region (open-chain semantics)
        }
      }
      int a = d - 1;
      for (; a >= 0; --a) {
        if (++x[a] <= hi[a]) break;
        x[a] = lo[a];
      }
      if (a < 0) break;
    }
  }

  if (region.boundary() == BoundaryMode::Quiescent) {
    const double drift = std::abs(s.norm() - normBefore);
    if (drift > opt.norm_tol)
      throw StructuralError("amplitude escaped the region (norm drift " +
                            std::to_string(drift) + ")");
  }
  s.bump_step_count();
  return s;
}

RegionState cqca_run(const RegionState& state, const CqcaDefinition& cqca,
                     std::int64_t phaseCount, const EngineOptions& opt) {
  RegionState s = state;
  for (std::int64_t i = 0; i < phaseCount; ++i)
    s = cqca_step(s, cqca, static_cast<int>(s.step_count() % cqca.period()),
                  opt);
  return s;
}

// ---------------------------------------------------------------------------
// CQCA -> QCA

namespace {

CellLayout extended_layout(const CqcaDefinition& cqca) {
  std::vector<Register> regs = cqca.layout().registers();
  regs.push_back(Register{"color", cqca.coloring().num_colors(), true});
  regs.push_back(Register{"clock", std::max(cqca.period(), 1), true});
  return CellLayout(regs);
}

}  // namespace

QcaDefinition cqca_to_qca(const CqcaDefinition& cqca) {
  const Coloring& col = cqca.coloring();
  const int T = cqca.period();
  const int d = col.dimension();
  const NeighborhoodScheme nb = manhattan_radius1(d);
  const int n = static_cast<int>(nb.size());
  CellLayout ext = extended_layout(cqca);

  // color patterns that occur in the canonical coloring
  auto patterns = std::make_shared<std::set<std::vector<int>>>();
  {
    Coord xi(d, 0);
    while (true) {
      std::vector<int> pat(n);
      for (int i = 0; i < n; ++i)
        pat[i] = col.color_at(coord_add(xi, nb.offsets()[i]));
      patterns->insert(std::move(pat));
      int a = d - 1;
      for (; a >= 0; --a) {
        if (++xi[a] < col.period()[a]) break;
        xi[a] = 0;
      }
      if (a < 0) break;
    }
  }

  int center = 0;
  for (int i = 0; i < n; ++i)
    if (coord_is_zero(nb.offsets()[i])) center = i;

  auto phaseOps = std::make_shared<std::vector<Matrix>>();
  auto phaseColors = std::make_shared<std::vector<int>>();
  for (int j = 0; j < T; ++j) {
    phaseOps->push_back(cqca.phases()[j].op);
    phaseColors->push_back(cqca.phases()[j].color);
  }

  KernelFn readKernel = [patterns, phaseOps, phaseColors, n, center,
                         T](const std::vector<std::vector<int>>& in) {
    KernelAction act;
    act.classical_out = in;
    const int clock = in[center][1];
    bool clocksAgree = true;
    for (int i = 0; i < n; ++i)
      if (in[i][1] != clock) clocksAgree = false;
    std::vector<int> pat(n);
    for (int i = 0; i < n; ++i) pat[i] = in[i][0];
    if (clocksAgree && clock < T && pat[center] == (*phaseColors)[clock] &&
        patterns->count(pat)) {
      act.op = (*phaseOps)[clock];
      act.op_cells.resize(n);
      for (int i = 0; i < n; ++i) act.op_cells[i] = i;
    }
    return act;
  };

  KernelFn updateKernel = [T](const std::vector<std::vector<int>>& in) {
    KernelAction act;
    act.classical_out = in;
    act.classical_out[0][1] = (in[0][1] + 1) % std::max(T, 1);
    return act;
  };

  return QcaDefinition(ext, nb, LocalOperator::kernel(readKernel, "cqca_read"),
                       LocalOperator::kernel(updateKernel, "cqca_clock"));
}

RegionState cqca_embedded_state(const CqcaDefinition& cqca,
                                const RegionState& base) {
  CellLayout ext = extended_layout(cqca);
  RegionState out(base.region(), ext, 0, base.is_sparse());
  out.clear_amplitudes();
  if (base.is_sparse()) {
    for (const auto& [key, amp] : base.sparse_amplitudes())
      out.set_amplitude(key, amp);
  } else {
    out.dense_amplitudes() = base.dense_amplitudes();
  }
  const Coloring& col = cqca.coloring();
  for (std::int64_t i = 0; i < base.cell_count(); ++i) {
    Coord c = base.region().coord_of(i);
    out.set_classical(i, {col.color_at(c), 0});
  }
  return out;
}

RegionState cqca_extract_state(const CqcaDefinition& cqca,
                               const RegionState& translated) {
  RegionState out(translated.region(), cqca.layout(), 0,
                  translated.is_sparse());
  out.clear_amplitudes();
  if (translated.is_sparse()) {
    for (const auto& [key, amp] : translated.sparse_amplitudes())
      out.set_amplitude(key, amp);
  } else {
    out.dense_amplitudes() = translated.dense_amplitudes();
  }
  out.set_step_count(translated.step_count());
  return out;
}

// ---------------------------------------------------------------------------
// gate sequences

LocalGate LocalGate::single(Matrix u) {
  LocalGate g;
  g.kind = Kind::Single;
  g.u = std::move(u);
  return g;
}

LocalGate LocalGate::cnot(Coord control, Coord target) {
  LocalGate g;
  g.kind = Kind::ControlledNot;
  g.control = std::move(control);
  g.target = std::move(target);
  return g;
}

CqcaDefinition gates_to_cqca(const std::vector<LocalGate>& gates,
                             const Coloring& coloring,
                             const CellLayout& layout) {
  const int d = coloring.dimension();
  const NeighborhoodScheme nb = manhattan_radius1(d);
  const int n = static_cast<int>(nb.size());
  const int s = layout.cell_dim();
  std::int64_t dim = 1;
  for (int i = 0; i < n; ++i) dim *= s;
  int center = 0;
  for (int i = 0; i < n; ++i)
    if (coord_is_zero(nb.offsets()[i])) center = i;

  const bool hasControlled =
      std::any_of(gates.begin(), gates.end(), [](const LocalGate& g) {
        return g.kind == LocalGate::Kind::ControlledNot;
      });
  if (hasControlled) {
    // every radius-1 neighborhood must see pairwise-distinct colors
    Coord xi(d, 0);
    while (true) {
      std::vector<int> pat(n);
      for (int i = 0; i < n; ++i)
        pat[i] = coloring.color_at(coord_add(xi, nb.offsets()[i]));
      std::sort(pat.begin(), pat.end());
      if (std::adjacent_find(pat.begin(), pat.end()) != pat.end())
        throw StructuralError(
            "coloring repeats a color inside a neighborhood; controlled "
            "gates need pairwise-distinct colors");
      int a = d - 1;
      for (; a >= 0; --a) {
        if (++xi[a] < coloring.period()[a]) break;
        xi[a] = 0;
      }
      if (a < 0) break;
    }
  }

  std::vector<CqcaPhase> phases;
  for (const auto& g : gates) {
    Matrix op;
    if (g.kind == LocalGate::Kind::Single) {
      if (g.u.rows() != s)
        throw StructuralError("single-cell gate dimension mismatch");
      op = embed_on_cells(g.u, {center}, n, s);
    } else {
      Coord delta = coord_sub(g.control, g.target);
      int manhattan = 0;
      for (int v : delta) manhattan += std::abs(v);
      if (manhattan != 1)
        throw StructuralError(
            "controlled-NOT control must be adjacent to its target");
      int controlPos = -1;
      for (int i = 0; i < n; ++i)
        if (nb.offsets()[i] == delta) controlPos = i;
      // generalized controlled-NOT |c,t> -> |c, t+c mod s>
      Matrix cx = Matrix::Zero(std::int64_t(s) * s, std::int64_t(s) * s);
      for (int c = 0; c < s; ++c)
        for (int t = 0; t < s; ++t)
          cx(std::int64_t(c) * s + (t + c) % s, std::int64_t(c) * s + t) = 1.0;
      op = embed_on_cells(cx, {controlPos, center}, n, s);
    }
    for (int color = 0; color < coloring.num_colors(); ++color)
      phases.push_back(CqcaPhase{op, color});
  }
  if (phases.empty())
    phases.push_back(CqcaPhase{Matrix::Identity(dim, dim), 0});
  return CqcaDefinition(layout, coloring, std::move(phases));
}

}  // namespace luqca
