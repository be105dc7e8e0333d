#include "luqca/translators.hpp"

#include <algorithm>
#include <memory>

#include "luqca/linalg.hpp"

namespace luqca {

// ---------------------------------------------------------------------------
// Watrous partitioned QCA

CellLayout watrous_layout(const WatrousPartitionedDef& def) {
  const int side = std::max(def.dim_l, def.dim_r);
  return CellLayout({Register{"l", side, false}, Register{"c", def.dim_c, false},
                     Register{"r", side, false}});
}

QcaDefinition watrous_to_luqca(const WatrousPartitionedDef& def) {
  if (def.dim_l < 1 || def.dim_c < 1 || def.dim_r < 1)
    throw StructuralError("sub-alphabet sizes must be positive");
  const std::int64_t origDim =
      std::int64_t(def.dim_l) * def.dim_c * def.dim_r;
  if (def.v.rows() != origDim)
    throw StructuralError("V dimension does not match the sub-alphabets");

  const int side = std::max(def.dim_l, def.dim_r);
  const CellLayout layout = watrous_layout(def);
  const int cd = layout.cell_dim();

  // P1: swap r(x) with l(x+1)
  Matrix u0 = Matrix::Zero(std::int64_t(cd) * cd, std::int64_t(cd) * cd);
  for (int l0 = 0; l0 < side; ++l0)
    for (int c0 = 0; c0 < def.dim_c; ++c0)
      for (int r0 = 0; r0 < side; ++r0)
        for (int l1 = 0; l1 < side; ++l1)
          for (int c1 = 0; c1 < def.dim_c; ++c1)
            for (int r1 = 0; r1 < side; ++r1) {
              auto cell = [&](int l, int c, int r) {
                return (std::int64_t(l) * def.dim_c + c) * side + r;
              };
              const std::int64_t in = cell(l0, c0, r0) * cd + cell(l1, c1, r1);
              const std::int64_t out = cell(l0, c0, l1) * cd + cell(r0, c1, r1);
              u0(out, in) = 1.0;
            }

  // V padded with identity on the unused high symbols
  Matrix vpad = Matrix::Identity(cd, cd);
  auto padIdx = [&](int l, int c, int r) {
    return (std::int64_t(l) * def.dim_c + c) * side + r;
  };
  auto origIdx = [&](int l, int c, int r) {
    return (std::int64_t(l) * def.dim_c + c) * def.dim_r + r;
  };
  for (int l = 0; l < def.dim_l; ++l)
    for (int c = 0; c < def.dim_c; ++c)
      for (int r = 0; r < def.dim_r; ++r) {
        vpad.col(padIdx(l, c, r)).setZero();
        for (int lo = 0; lo < def.dim_l; ++lo)
          for (int co = 0; co < def.dim_c; ++co)
            for (int ro = 0; ro < def.dim_r; ++ro)
              vpad(padIdx(lo, co, ro), padIdx(l, c, r)) =
                  def.v(origIdx(lo, co, ro), origIdx(l, c, r));
      }

  // P2: swap l and r within the cell
  Matrix p2 = Matrix::Zero(cd, cd);
  for (int l = 0; l < side; ++l)
    for (int c = 0; c < def.dim_c; ++c)
      for (int r = 0; r < side; ++r) p2(padIdx(r, c, l), padIdx(l, c, r)) = 1.0;

  NeighborhoodScheme nb(1, {{0}, {1}});
  return QcaDefinition(layout, nb, LocalOperator::dense(u0),
                       LocalOperator::dense(Matrix(vpad * p2)));
}

// ---------------------------------------------------------------------------
// Generalized Margolus, d = 1

namespace {

struct MargolusDims {
  int sigma;
  int dm, dp;        // corner factor dimensions
  bool hasL, hasR;   // memory registers materialized (dimension >= 2)
  int qcell;         // per-cell quantum dimension
};

MargolusDims dims_of(const MargolusDef& def) {
  MargolusDims d;
  d.sigma = def.sigma;
  d.dm = def.dim_minus;
  d.dp = def.dim_plus;
  d.hasL = d.dm >= 2;
  d.hasR = d.dp >= 2;
  d.qcell = d.sigma * (d.hasL ? d.dm : 1) * (d.hasR ? d.dp : 1);
  return d;
}

// per-cell quantum index from (data, memL, memR)
int cell_q(const MargolusDims& d, int data, int l, int r) {
  int q = data;
  if (d.hasL) q = q * d.dm + l;
  if (d.hasR) q = q * d.dp + r;
  return q;
}

struct CellQ {
  int data, l, r;
};

CellQ split_q(const MargolusDims& d, int q) {
  CellQ c{0, 0, 0};
  if (d.hasR) {
    c.r = q % d.dp;
    q /= d.dp;
  }
  if (d.hasL) {
    c.l = q % d.dm;
    q /= d.dm;
  }
  c.data = q;
  return c;
}

}  // namespace

CellLayout margolus_layout(const MargolusDef& def) {
  const MargolusDims d = dims_of(def);
  std::vector<Register> regs{Register{"data", d.sigma, false}};
  if (d.hasL) regs.push_back(Register{"memL", d.dm, false});
  if (d.hasR) regs.push_back(Register{"memR", d.dp, false});
  regs.push_back(Register{"parity", 2, true});
  regs.push_back(Register{"clock", 2, true});
  return CellLayout(regs);
}

QcaDefinition margolus_to_luqca(const MargolusDef& def) {
  if (def.dimension != 1)
    throw StructuralError(
        "only the one-dimensional Margolus translation is materialized");
  const MargolusDims d = dims_of(def);
  if (std::int64_t(d.dm) * d.dp != std::int64_t(d.sigma) * d.sigma)
    throw StructuralError(
        "corner dimensions must multiply to the squared alphabet");
  const std::int64_t s2 = std::int64_t(d.sigma) * d.sigma;
  if (def.u0.rows() != s2 || def.u1.rows() != s2)
    throw StructuralError("stage maps must be sigma^2-dimensional");
  if (!is_unitary(def.u0, 1e-10).unitary || !is_unitary(def.u1, 1e-10).unitary)
    throw StructuralError("stage maps must be unitary");

  const CellLayout layout = margolus_layout(def);
  const std::int64_t jointQ = std::int64_t(d.qcell) * d.qcell;

  // stage 0 on an even-aligned pair: the corner factors (memL of the left
  // cell, memR of the right cell) receive U0(data pair); the data pair
  // receives the old factors
  Matrix w0 = Matrix::Zero(jointQ, jointQ);
  for (std::int64_t in = 0; in < jointQ; ++in) {
    const CellQ a = split_q(d, static_cast<int>(in / d.qcell));
    const CellQ b = split_q(d, static_cast<int>(in % d.qcell));
    const int pairIn = a.data * d.sigma + b.data;
    const int w = a.l * d.dp + b.r;  // old (memL0, memR1), big-endian
    const int dataA = w / d.sigma, dataB = w % d.sigma;
    for (int m = 0; m < s2; ++m) {
      const Complex amp = def.u0(m, pairIn);
      if (amp == Complex(0, 0)) continue;
      const int lNew = m / d.dp, rNew = m % d.dp;
      const std::int64_t out =
          std::int64_t(cell_q(d, dataA, lNew, a.r)) * d.qcell +
          cell_q(d, dataB, b.l, rNew);
      w0(out, in) += amp;
    }
  }

  // stage 1 on an odd-aligned pair: the data pair receives U1(memR of the
  // left cell, memL of the right cell); those memories receive the old data
  Matrix w1 = Matrix::Zero(jointQ, jointQ);
  for (std::int64_t in = 0; in < jointQ; ++in) {
    const CellQ a = split_q(d, static_cast<int>(in / d.qcell));
    const CellQ b = split_q(d, static_cast<int>(in % d.qcell));
    const int memIn = a.r * d.dm + b.l;  // (memR0, memL1), big-endian
    const int w = a.data * d.sigma + b.data;
    const int rNew = w / d.dm, lNew = w % d.dm;
    for (int p = 0; p < s2; ++p) {
      const Complex amp = def.u1(p, memIn);
      if (amp == Complex(0, 0)) continue;
      const int dataA = p / d.sigma, dataB = p % d.sigma;
      const std::int64_t out =
          std::int64_t(cell_q(d, dataA, a.l, rNew)) * d.qcell +
          cell_q(d, dataB, lNew, b.r);
      w1(out, in) += amp;
    }
  }

  auto w0p = std::make_shared<Matrix>(std::move(w0));
  auto w1p = std::make_shared<Matrix>(std::move(w1));
  KernelFn read = [w0p, w1p](const std::vector<std::vector<int>>& in) {
    KernelAction act;
    act.classical_out = in;
    const int parity0 = in[0][0], parity1 = in[1][0];
    const int clock0 = in[0][1], clock1 = in[1][1];
    if (clock0 != clock1) return act;
    if (clock0 == 0 && parity0 == 0 && parity1 == 1) {
      act.op = *w0p;
      act.op_cells = {0, 1};
    } else if (clock0 == 1 && parity0 == 1 && parity1 == 0) {
      act.op = *w1p;
      act.op_cells = {0, 1};
    }
    return act;
  };
  KernelFn update = [](const std::vector<std::vector<int>>& in) {
    KernelAction act;
    act.classical_out = in;
    act.classical_out[0][1] = 1 - in[0][1];
    return act;
  };

  NeighborhoodScheme nb(1, {{0}, {1}});
  return QcaDefinition(layout, nb, LocalOperator::kernel(read, "margolus_read"),
                       LocalOperator::kernel(update, "margolus_clock"));
}

RegionState margolus_embedded_state(const MargolusDef& def,
                                    const RegionState& data) {
  const MargolusDims d = dims_of(def);
  const CellLayout layout = margolus_layout(def);
  const Region& region = data.region();
  if (region.boundary() == BoundaryMode::Torus && region.axis_length(0) % 2)
    throw StructuralError("Margolus torus length must be even");

  RegionState out(region, layout, 0, data.is_sparse());
  out.clear_amplitudes();
  for (std::int64_t i = 0; i < region.cell_count(); ++i) {
    const int x = region.coord_of(i)[0];
    out.set_classical(i, {((x % 2) + 2) % 2, 0});
  }
  auto lift = [&](const BasisKey& key, Complex amp) {
    BasisKey nk(key.size());
    for (std::size_t i = 0; i < key.size(); ++i)
      nk[i] = cell_q(d, key[i], 0, 0);
    out.set_amplitude(nk, amp);
  };
  if (data.is_sparse()) {
    for (const auto& [key, amp] : data.sparse_amplitudes()) lift(key, amp);
  } else {
    const RegionState sp = data.to_sparse();
    for (const auto& [key, amp] : sp.sparse_amplitudes()) lift(key, amp);
  }
  return out;
}

RegionState margolus_extract_state(const MargolusDef& def,
                                   const RegionState& translated) {
  const MargolusDims d = dims_of(def);
  CellLayout dataLayout = CellLayout::single(d.sigma, "data");
  RegionState out(translated.region(), dataLayout, 0, translated.is_sparse());
  out.clear_amplitudes();
  const RegionState sp =
      translated.is_sparse() ? translated : translated.to_sparse();
  for (const auto& [key, amp] : sp.sparse_amplitudes()) {
    BasisKey nk(key.size());
    for (std::size_t i = 0; i < key.size(); ++i) {
      const CellQ c = split_q(d, key[i]);
      if (c.l != 0 || c.r != 0)
        throw StructuralError(
            "state has amplitude outside the data sector (run an even "
            "number of steps)");
      nk[i] = c.data;
    }
    if (translated.is_sparse() || amp != Complex(0, 0))
      out.set_amplitude(nk, amp);
  }
  out.set_step_count(translated.step_count());
  return out;
}

MargolusDef margolus_shift_right(int dim) {
  MargolusDef def;
  def.dimension = 1;
  def.sigma = dim;
  def.dim_minus = 1;
  def.dim_plus = dim * dim;
  def.u0 = Matrix::Identity(std::int64_t(dim) * dim, std::int64_t(dim) * dim);
  def.u1 = def.u0;
  return def;
}

}  // namespace luqca
