#include "luqca/linalg.hpp"

#include <algorithm>
#include <map>

namespace luqca {

UnitarityResult is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return {false, std::numeric_limits<double>::infinity()};
  Matrix g = m.adjoint() * m;
  g.diagonal().array() -= 1.0;
  double residual = g.norm();
  return {residual <= tol, residual};
}

Matrix herm_exp(const Matrix& h, double t) {
  if (h.rows() != h.cols()) throw StructuralError("herm_exp: matrix not square");
  const double hn = h.norm();
  const double herr = (h - h.adjoint()).norm();
  if (herr > 1e-9 * std::max(hn, 1e-300) && hn > 0)
    throw StructuralError("herm_exp: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
  const auto& lambda = es.eigenvalues();
  Vector phases(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    phases(i) = std::exp(Complex(0.0, -lambda(i) * t));
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------
// strided application

std::vector<std::int64_t> support_offsets(const std::vector<int>& supportPos,
                                          const std::vector<int>& dims) {
  const int n = static_cast<int>(dims.size());
  std::vector<std::int64_t> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

  std::int64_t sdim = 1;
  for (int p : supportPos) sdim *= dims[p];
  std::vector<std::int64_t> offsets(sdim, 0);
  // big-endian odometer over the support digits, in supportPos order
  std::vector<int> digits(supportPos.size(), 0);
  for (std::int64_t s = 0; s < sdim; ++s) {
    std::int64_t off = 0;
    for (std::size_t k = 0; k < supportPos.size(); ++k)
      off += static_cast<std::int64_t>(digits[k]) * stride[supportPos[k]];
    offsets[s] = off;
    for (std::size_t k = supportPos.size(); k-- > 0;) {
      if (++digits[k] < dims[supportPos[k]]) break;
      digits[k] = 0;
    }
  }
  return offsets;
}

void apply_on_factors(Vector& state, const Matrix& op,
                      const std::vector<int>& supportPos,
                      const std::vector<int>& dims) {
  const int n = static_cast<int>(dims.size());
  std::int64_t total = 1;
  for (int d : dims) total *= d;
  if (state.size() != total)
    throw StructuralError("apply_on_factors: state dimension mismatch");

  std::int64_t sdim = 1;
  for (int p : supportPos) {
    if (p < 0 || p >= n) throw StructuralError("support position out of range");
    sdim *= dims[p];
  }
  if (op.rows() != sdim || op.cols() != sdim)
    throw StructuralError("apply_on_factors: operator dimension mismatch");

  const auto soff = support_offsets(supportPos, dims);

  std::vector<bool> inSupport(n, false);
  for (int p : supportPos) {
    if (inSupport[p]) throw StructuralError("duplicate support position");
    inSupport[p] = true;
  }
  std::vector<int> restPos;
  for (int i = 0; i < n; ++i)
    if (!inSupport[i]) restPos.push_back(i);
  std::vector<std::int64_t> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

  std::int64_t restCount = total / sdim;
  std::vector<int> digits(restPos.size(), 0);
  Vector x(sdim), y(sdim);
  for (std::int64_t r = 0; r < restCount; ++r) {
    std::int64_t base = 0;
    for (std::size_t k = 0; k < restPos.size(); ++k)
      base += static_cast<std::int64_t>(digits[k]) * stride[restPos[k]];
    for (std::int64_t s = 0; s < sdim; ++s) x(s) = state(base + soff[s]);
    y.noalias() = op * x;
    for (std::int64_t s = 0; s < sdim; ++s) state(base + soff[s]) = y(s);
    for (std::size_t k = restPos.size(); k-- > 0;) {
      if (++digits[k] < dims[restPos[k]]) break;
      digits[k] = 0;
    }
  }
}

Matrix embed_on_cells(const Matrix& op, const std::vector<int>& cells,
                      int numCells, int cellDim) {
  std::int64_t dim = 1;
  for (int i = 0; i < numCells; ++i) dim *= cellDim;
  std::vector<int> dims(numCells, cellDim);
  const auto soff = support_offsets(cells, dims);
  const std::int64_t sdim = op.rows();
  if (static_cast<std::int64_t>(soff.size()) != sdim)
    throw StructuralError("embed_on_cells: operator dimension mismatch");

  // map flat index -> support sub-index by digit extraction
  std::vector<std::int64_t> stride(numCells, 1);
  for (int i = numCells - 2; i >= 0; --i) stride[i] = stride[i + 1] * cellDim;

  Matrix out = Matrix::Zero(dim, dim);
  for (std::int64_t col = 0; col < dim; ++col) {
    std::int64_t sin = 0;
    for (std::size_t k = 0; k < cells.size(); ++k)
      sin = sin * cellDim + (col / stride[cells[k]]) % cellDim;
    const std::int64_t base = col - soff[sin];
    for (std::int64_t sout = 0; sout < sdim; ++sout) {
      Complex v = op(sout, sin);
      if (v != Complex(0, 0)) out(base + soff[sout], col) = v;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// translation commutation

namespace {

struct EmbeddedAction {
  std::int64_t cfg_out = 0;
  Matrix q;  // embedded on the joint quantum space; empty = identity
};

// Evaluate a kernel on the joint classical configuration `cfg`, where the
// kernel's support occupies `pos` within the joint cell list.
EmbeddedAction eval_embedded(const KernelFn& kernel, const CellLayout& layout,
                             const std::vector<int>& pos, int numCells,
                             std::int64_t cfg) {
  const int cdim = layout.classical_dim();
  const int qdim = layout.quantum_dim();
  std::vector<int> cellCfg(numCells);
  std::int64_t rem = cfg;
  for (int i = numCells - 1; i >= 0; --i) {
    cellCfg[i] = static_cast<int>(rem % cdim);
    rem /= cdim;
  }
  std::vector<std::vector<int>> in(pos.size());
  for (std::size_t k = 0; k < pos.size(); ++k)
    in[k] = layout.unpack_classical(cellCfg[pos[k]]);
  KernelAction act = kernel(in);

  EmbeddedAction out;
  for (std::size_t k = 0; k < pos.size(); ++k)
    cellCfg[pos[k]] = layout.pack_classical(act.classical_out[k]);
  for (int i = 0; i < numCells; ++i)
    out.cfg_out = out.cfg_out * cdim + cellCfg[i];
  if (act.op.size() != 0) {
    std::vector<int> opPos(act.op_cells.size());
    for (std::size_t k = 0; k < act.op_cells.size(); ++k)
      opPos[k] = pos[act.op_cells[k]];
    out.q = embed_on_cells(act.op, opPos, numCells, qdim);
  }
  return out;
}

double block_commutator_sq(const EmbeddedAction& first,
                           const KernelFn& kernel, const CellLayout& layout,
                           const std::vector<int>& pos, int numCells,
                           const EmbeddedAction& firstOther,
                           const KernelFn& kernelOther,
                           const std::vector<int>& posOther,
                           std::int64_t jointQ) {
  // AB e_cfg-path: `first` = B evaluated at cfg; then A at B's output.
  EmbeddedAction second =
      eval_embedded(kernelOther, layout, posOther, numCells, first.cfg_out);
  EmbeddedAction secondOther =
      eval_embedded(kernel, layout, pos, numCells, firstOther.cfg_out);

  const std::int64_t abCfg = second.cfg_out;
  const std::int64_t baCfg = secondOther.cfg_out;

  auto compose = [&](const EmbeddedAction& s, const EmbeddedAction& f) {
    if (s.q.size() == 0 && f.q.size() == 0) return Matrix();
    if (s.q.size() == 0) return f.q;
    if (f.q.size() == 0) return s.q;
    return Matrix(s.q * f.q);
  };
  Matrix ab = compose(second, first);
  Matrix ba = compose(secondOther, firstOther);

  if (abCfg != baCfg) {
    double a2 = ab.size() == 0 ? static_cast<double>(jointQ) : ab.squaredNorm();
    double b2 = ba.size() == 0 ? static_cast<double>(jointQ) : ba.squaredNorm();
    return a2 + b2;
  }
  if (ab.size() == 0 && ba.size() == 0) return 0.0;
  if (ab.size() == 0)
    return (ba - Matrix::Identity(jointQ, jointQ)).squaredNorm();
  if (ba.size() == 0)
    return (ab - Matrix::Identity(jointQ, jointQ)).squaredNorm();
  return (ab - ba).squaredNorm();
}

}  // namespace

CommutationReport commutes_with_translations(const QcaDefinition& qca,
                                             double tol) {
  CommutationOptions opt;
  opt.tol = tol;
  return commutes_with_translations(qca, opt);
}

CommutationReport commutes_with_translations(const QcaDefinition& qca,
                                             const CommutationOptions& opt) {
  CommutationReport rep;
  const auto& nb = qca.neighborhood();
  const auto& layout = qca.layout();
  const int cellDim = layout.cell_dim();

  for (const Coord& delta : nb.overlap_offsets()) {
    // joint support N ∪ (N + delta)
    std::vector<Coord> joint = nb.offsets();
    for (const auto& o : nb.offsets()) joint.push_back(coord_add(o, delta));
    std::sort(joint.begin(), joint.end());
    joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
    const int n = static_cast<int>(joint.size());

    auto posOf = [&](const Coord& shift) {
      std::vector<int> pos;
      for (const auto& o : nb.offsets()) {
        Coord c = coord_add(o, shift);
        pos.push_back(static_cast<int>(
            std::lower_bound(joint.begin(), joint.end(), c) - joint.begin()));
      }
      return pos;
    };
    const std::vector<int> posA = posOf(Coord(nb.dimension(), 0));
    const std::vector<int> posB = posOf(delta);

    double residual = 0.0;
    if (!qca.hybrid() && qca.read_op().is_dense()) {
      std::int64_t dim = 1;
      bool ok = true;
      for (int i = 0; i < n; ++i) {
        dim *= cellDim;
        if (dim * dim > opt.amplitudes_squared_cap) {
          ok = false;
          break;
        }
      }
      if (!ok)
        throw ResourceError(
            "commutation joint support exceeds the dense workload cap");
      Matrix a = embed_on_cells(qca.read_op().matrix(), posA, n, cellDim);
      Matrix b = embed_on_cells(qca.read_op().matrix(), posB, n, cellDim);
      residual = (a * b - b * a).norm();
    } else {
      const int cdim = layout.classical_dim();
      const int qdim = layout.quantum_dim();
      std::int64_t numConfigs = 1, jointQ = 1;
      for (int i = 0; i < n; ++i) {
        numConfigs *= cdim;
        jointQ *= qdim;
        if (numConfigs > opt.classical_config_cap ||
            jointQ > opt.block_quantum_dim_cap)
          throw ResourceError(
              "commutation joint support exceeds the hybrid block caps");
      }
      const KernelFn& kernel = qca.read_kernel();
      double sq = 0.0;
      for (std::int64_t cfg = 0; cfg < numConfigs; ++cfg) {
        EmbeddedAction b = eval_embedded(kernel, layout, posB, n, cfg);
        EmbeddedAction a = eval_embedded(kernel, layout, posA, n, cfg);
        sq += block_commutator_sq(b, kernel, layout, posB, n, a, kernel, posA,
                                  jointQ);
      }
      residual = std::sqrt(sq);
    }
    rep.offsets.push_back(OffsetResidual{delta, residual, true});
    rep.max_residual = std::max(rep.max_residual, residual);
    if (residual > opt.tol) rep.pass = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// partial trace / distances / random

Matrix partial_trace(const Vector& state, const std::vector<int>& keep,
                     const std::vector<int>& dims) {
  const int n = static_cast<int>(dims.size());
  std::int64_t total = 1;
  for (int d : dims) total *= d;
  if (state.size() != total)
    throw StructuralError("partial_trace: state dimension mismatch");

  std::int64_t keepDim = 1;
  for (int p : keep) keepDim *= dims[p];

  // fast path: keep set is a contiguous least-significant block
  bool suffix = static_cast<int>(keep.size()) <= n;
  for (std::size_t k = 0; k < keep.size() && suffix; ++k)
    suffix = keep[k] == n - static_cast<int>(keep.size()) + static_cast<int>(k);
  if (suffix) {
    const std::int64_t restDim = total / keepDim;
    Eigen::Map<const Matrix> m(state.data(), keepDim, restDim);
    return m * m.adjoint();
  }

  const auto soff = support_offsets(keep, dims);
  std::vector<bool> inKeep(n, false);
  for (int p : keep) inKeep[p] = true;
  std::vector<int> restPos;
  for (int i = 0; i < n; ++i)
    if (!inKeep[i]) restPos.push_back(i);
  std::vector<std::int64_t> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

  Matrix rho = Matrix::Zero(keepDim, keepDim);
  std::vector<int> digits(restPos.size(), 0);
  const std::int64_t restCount = total / keepDim;
  Vector x(keepDim);
  for (std::int64_t r = 0; r < restCount; ++r) {
    std::int64_t base = 0;
    for (std::size_t k = 0; k < restPos.size(); ++k)
      base += static_cast<std::int64_t>(digits[k]) * stride[restPos[k]];
    for (std::int64_t s = 0; s < keepDim; ++s) x(s) = state(base + soff[s]);
    rho.noalias() += x * x.adjoint();
    for (std::size_t k = restPos.size(); k-- > 0;) {
      if (++digits[k] < dims[restPos[k]]) break;
      digits[k] = 0;
    }
  }
  return rho;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a - b);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Matrix random_unitary(int n, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    Complex d = r(i, i);
    q.col(i) *= (d == Complex(0, 0)) ? Complex(1, 0) : d / std::abs(d);
  }
  return q;
}

Vector random_state(std::int64_t n, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (std::int64_t i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  v.normalize();
  return v;
}

}  // namespace luqca
