#include "luqca/core.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>

#include "luqca/linalg.hpp"

namespace luqca {

// ---------------------------------------------------------------------------
// CellLayout

CellLayout::CellLayout(std::vector<Register> regs) : regs_(std::move(regs)) {
  if (regs_.empty()) throw StructuralError("cell layout needs registers");
  std::int64_t cell = 1, q = 1, c = 1;
  for (const auto& r : regs_) {
    if (r.dim < 1 || (r.dim < 2 && !r.classical))
      throw StructuralError("register '" + r.name +
                            "': dimension must be >= 2 (>= 1 when classical)");
    cell *= r.dim;
    (r.classical ? c : q) *= r.dim;
    if (cell > (std::int64_t(1) << 30))
      throw ResourceError("cell dimension exceeds 2^30");
  }
  cell_dim_ = static_cast<int>(cell);
  quantum_dim_ = static_cast<int>(q);
  classical_dim_ = static_cast<int>(c);
}

CellLayout CellLayout::single(int dim, const std::string& name) {
  return CellLayout({Register{name, dim, false}});
}

int CellLayout::register_index(const std::string& name) const {
  for (std::size_t i = 0; i < regs_.size(); ++i)
    if (regs_[i].name == name) return static_cast<int>(i);
  throw StructuralError("no register named '" + name + "'");
}

int CellLayout::pack(const std::vector<int>& values) const {
  if (values.size() != regs_.size())
    throw StructuralError("register value count mismatch");
  int idx = 0;
  for (std::size_t i = 0; i < regs_.size(); ++i) {
    if (values[i] < 0 || values[i] >= regs_[i].dim)
      throw StructuralError("register '" + regs_[i].name +
                            "' value out of range");
    idx = idx * regs_[i].dim + values[i];
  }
  return idx;
}

std::vector<int> CellLayout::unpack(int index) const {
  std::vector<int> values(regs_.size());
  for (std::size_t i = regs_.size(); i-- > 0;) {
    values[i] = index % regs_[i].dim;
    index /= regs_[i].dim;
  }
  return values;
}

int CellLayout::quantum_part(int cellIndex) const {
  auto v = unpack(cellIndex);
  int q = 0;
  for (std::size_t i = 0; i < regs_.size(); ++i)
    if (!regs_[i].classical) q = q * regs_[i].dim + v[i];
  return q;
}

int CellLayout::classical_part(int cellIndex) const {
  auto v = unpack(cellIndex);
  int c = 0;
  for (std::size_t i = 0; i < regs_.size(); ++i)
    if (regs_[i].classical) c = c * regs_[i].dim + v[i];
  return c;
}

int CellLayout::merge(int quantumIndex, int classicalIndex) const {
  auto qv = unpack_quantum(quantumIndex);
  auto cv = unpack_classical(classicalIndex);
  std::vector<int> values(regs_.size());
  std::size_t qi = 0, ci = 0;
  for (std::size_t i = 0; i < regs_.size(); ++i)
    values[i] = regs_[i].classical ? cv[ci++] : qv[qi++];
  return pack(values);
}

std::vector<int> CellLayout::unpack_classical(int classicalIndex) const {
  std::vector<int> values;
  for (std::size_t i = regs_.size(); i-- > 0;) {
    if (!regs_[i].classical) continue;
    values.push_back(classicalIndex % regs_[i].dim);
    classicalIndex /= regs_[i].dim;
  }
  std::reverse(values.begin(), values.end());
  return values;
}

int CellLayout::pack_classical(const std::vector<int>& values) const {
  int c = 0;
  std::size_t k = 0;
  for (const auto& r : regs_) {
    if (!r.classical) continue;
    if (k >= values.size() || values[k] < 0 || values[k] >= r.dim)
      throw StructuralError("classical value out of range for '" + r.name +
                            "'");
    c = c * r.dim + values[k++];
  }
  if (k != values.size())
    throw StructuralError("classical value count mismatch");
  return c;
}

std::vector<int> CellLayout::unpack_quantum(int quantumIndex) const {
  std::vector<int> values;
  for (std::size_t i = regs_.size(); i-- > 0;) {
    if (regs_[i].classical) continue;
    values.push_back(quantumIndex % regs_[i].dim);
    quantumIndex /= regs_[i].dim;
  }
  std::reverse(values.begin(), values.end());
  return values;
}

int CellLayout::pack_quantum(const std::vector<int>& values) const {
  int q = 0;
  std::size_t k = 0;
  for (const auto& r : regs_) {
    if (r.classical) continue;
    if (k >= values.size() || values[k] < 0 || values[k] >= r.dim)
      throw StructuralError("quantum value out of range for '" + r.name + "'");
    q = q * r.dim + values[k++];
  }
  if (k != values.size()) throw StructuralError("quantum value count mismatch");
  return q;
}

bool CellLayout::operator==(const CellLayout& other) const {
  if (regs_.size() != other.regs_.size()) return false;
  for (std::size_t i = 0; i < regs_.size(); ++i) {
    const auto& a = regs_[i];
    const auto& b = other.regs_[i];
    if (a.name != b.name || a.dim != b.dim || a.classical != b.classical)
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// NeighborhoodScheme

NeighborhoodScheme::NeighborhoodScheme(int dimension,
                                       std::vector<Coord> offsets)
    : dim_(dimension), offsets_(std::move(offsets)) {
  if (dim_ < 1) throw StructuralError("neighborhood dimension must be >= 1");
  if (offsets_.empty()) throw StructuralError("neighborhood needs offsets");
  for (const auto& o : offsets_)
    if (static_cast<int>(o.size()) != dim_)
      throw StructuralError("offset arity mismatch");
  std::sort(offsets_.begin(), offsets_.end());
  if (std::adjacent_find(offsets_.begin(), offsets_.end()) != offsets_.end())
    throw StructuralError("duplicate neighborhood offsets");
  if (!std::binary_search(offsets_.begin(), offsets_.end(), Coord(dim_, 0)))
    throw StructuralError("neighborhood must contain the zero offset");
  min_.assign(dim_, 0);
  max_.assign(dim_, 0);
  for (const auto& o : offsets_)
    for (int a = 0; a < dim_; ++a) {
      min_[a] = std::min(min_[a], o[a]);
      max_[a] = std::max(max_[a], o[a]);
    }
}

std::vector<Coord> NeighborhoodScheme::overlap_offsets() const {
  std::vector<Coord> deltas;
  for (const auto& a : offsets_)
    for (const auto& b : offsets_) {
      Coord d = coord_sub(a, b);
      if (!coord_is_zero(d)) deltas.push_back(std::move(d));
    }
  std::sort(deltas.begin(), deltas.end());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
  return deltas;
}

bool NeighborhoodScheme::operator==(const NeighborhoodScheme& other) const {
  return dim_ == other.dim_ && offsets_ == other.offsets_;
}

// ---------------------------------------------------------------------------
// LocalOperator

LocalOperator LocalOperator::dense(Matrix m) {
  if (m.rows() != m.cols()) throw StructuralError("local operator not square");
  LocalOperator op;
  op.dense_ = std::make_shared<const Matrix>(std::move(m));
  return op;
}

LocalOperator LocalOperator::kernel(KernelFn fn, std::string name,
                                    std::string params) {
  LocalOperator op;
  op.fn_ = std::move(fn);
  op.name_ = std::move(name);
  op.params_ = std::move(params);
  return op;
}

const Matrix& LocalOperator::matrix() const {
  if (!dense_) throw StructuralError("operator has no dense form");
  return *dense_;
}

KernelAction LocalOperator::evaluate(
    const std::vector<std::vector<int>>& classicalIn) const {
  if (!fn_) throw StructuralError("operator has no kernel form");
  return fn_(classicalIn);
}

Matrix LocalOperator::to_dense(const CellLayout& layout, int numCells,
                               std::int64_t maxDim) const {
  if (dense_) return *dense_;
  std::int64_t dim = 1;
  for (int i = 0; i < numCells; ++i) {
    dim *= layout.cell_dim();
    if (dim > maxDim)
      throw ResourceError("kernel densification exceeds dimension cap");
  }
  const int qdim = layout.quantum_dim();
  std::int64_t jointQ = 1;
  for (int i = 0; i < numCells; ++i) jointQ *= qdim;

  std::int64_t numConfigs = 1;
  for (int i = 0; i < numCells; ++i) numConfigs *= layout.classical_dim();

  Matrix out = Matrix::Zero(dim, dim);
  std::vector<int> cfg(numCells, 0);
  for (std::int64_t flat = 0; flat < numConfigs; ++flat) {
    std::int64_t rem = flat;
    for (int i = numCells - 1; i >= 0; --i) {
      cfg[i] = static_cast<int>(rem % layout.classical_dim());
      rem /= layout.classical_dim();
    }
    std::vector<std::vector<int>> values(numCells);
    for (int i = 0; i < numCells; ++i)
      values[i] = layout.unpack_classical(cfg[i]);
    KernelAction act = fn_(values);
    std::vector<int> cfgOut(numCells);
    for (int i = 0; i < numCells; ++i)
      cfgOut[i] = layout.pack_classical(act.classical_out[i]);

    Matrix q;
    if (act.op.size() == 0) {
      q = Matrix::Identity(jointQ, jointQ);
    } else {
      q = embed_on_cells(act.op, act.op_cells, numCells, qdim);
    }
    // scatter the quantum block into the full-cell index space
    for (std::int64_t qin = 0; qin < jointQ; ++qin) {
      std::int64_t col = 0, qrem = qin;
      std::vector<int> qinCell(numCells);
      for (int i = numCells - 1; i >= 0; --i) {
        qinCell[i] = static_cast<int>(qrem % qdim);
        qrem /= qdim;
      }
      for (int i = 0; i < numCells; ++i)
        col = col * layout.cell_dim() + layout.merge(qinCell[i], cfg[i]);
      for (std::int64_t qout = 0; qout < jointQ; ++qout) {
        Complex v = q(qout, qin);
        if (v == Complex(0, 0)) continue;
        std::int64_t row = 0, rrem = qout;
        std::vector<int> qoutCell(numCells);
        for (int i = numCells - 1; i >= 0; --i) {
          qoutCell[i] = static_cast<int>(rrem % qdim);
          rrem /= qdim;
        }
        for (int i = 0; i < numCells; ++i)
          row = row * layout.cell_dim() + layout.merge(qoutCell[i], cfgOut[i]);
        out(row, col) = v;
      }
    }
  }
  return out;
}

KernelFn decompose_to_kernel(const Matrix& op, const CellLayout& layout,
                             int numCells, double tol) {
  const int cdim = layout.classical_dim();
  const int qdim = layout.quantum_dim();
  std::int64_t numConfigs = 1, jointQ = 1, dim = 1;
  for (int i = 0; i < numCells; ++i) {
    numConfigs *= cdim;
    jointQ *= qdim;
    dim *= layout.cell_dim();
  }
  if (op.rows() != dim)
    throw StructuralError("operator dimension does not match layout/support");

  // full-index <-> (joint quantum, joint classical) maps
  std::vector<std::int64_t> jointOf(dim);
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    std::int64_t rem = idx, jq = 0, jc = 0;
    std::vector<int> cells(numCells);
    for (int i = numCells - 1; i >= 0; --i) {
      cells[i] = static_cast<int>(rem % layout.cell_dim());
      rem /= layout.cell_dim();
    }
    for (int i = 0; i < numCells; ++i) {
      jq = jq * qdim + layout.quantum_part(cells[i]);
      jc = jc * cdim + layout.classical_part(cells[i]);
    }
    jointOf[idx] = jc * jointQ + jq;
  }
  std::vector<std::int64_t> fullOf(dim);
  for (std::int64_t idx = 0; idx < dim; ++idx) fullOf[jointOf[idx]] = idx;

  struct Block {
    std::int64_t cfg_out;
    Matrix q;
  };
  auto table = std::make_shared<std::map<std::int64_t, Block>>();
  for (std::int64_t cfg = 0; cfg < numConfigs; ++cfg) {
    std::int64_t cfgOut = -1;
    Matrix q = Matrix::Zero(jointQ, jointQ);
    for (std::int64_t qin = 0; qin < jointQ; ++qin) {
      std::int64_t col = fullOf[cfg * jointQ + qin];
      for (std::int64_t row = 0; row < dim; ++row) {
        Complex v = op(row, col);
        if (std::abs(v) <= tol) continue;
        std::int64_t joint = jointOf[row];
        std::int64_t rowCfg = joint / jointQ;
        if (cfgOut < 0) cfgOut = rowCfg;
        if (rowCfg != cfgOut)
          throw StructuralError(
              "operator is not a basis-controlled permutation on the "
              "classical registers");
        q(joint % jointQ, qin) = v;
      }
    }
    if (cfgOut < 0) cfgOut = cfg;  // zero column block: keep configuration
    (*table)[cfg] = Block{cfgOut, std::move(q)};
  }

  CellLayout lay = layout;
  int n = numCells;
  return [table, lay, n, cdim](const std::vector<std::vector<int>>& in) {
    std::int64_t cfg = 0;
    for (int i = 0; i < n; ++i) cfg = cfg * cdim + lay.pack_classical(in[i]);
    const Block& b = table->at(cfg);
    KernelAction act;
    act.classical_out.resize(n);
    std::int64_t rem = b.cfg_out;
    for (int i = n - 1; i >= 0; --i) {
      act.classical_out[i] = lay.unpack_classical(static_cast<int>(rem % cdim));
      rem /= cdim;
    }
    act.op = b.q;
    act.op_cells.resize(n);
    for (int i = 0; i < n; ++i) act.op_cells[i] = i;
    return act;
  };
}

// ---------------------------------------------------------------------------
// Region

Region::Region(Coord lower, Coord upper, BoundaryMode mode)
    : lower_(std::move(lower)), upper_(std::move(upper)), mode_(mode) {
  if (lower_.size() != upper_.size() || lower_.empty())
    throw StructuralError("region corner arity mismatch");
  for (std::size_t a = 0; a < lower_.size(); ++a)
    if (lower_[a] > upper_[a])
      throw StructuralError("region lower corner exceeds upper corner");
}

std::int64_t Region::cell_count() const {
  std::int64_t n = 1;
  for (int a = 0; a < dimension(); ++a) {
    n *= axis_length(a);
    if (n > (std::int64_t(1) << 40)) throw ResourceError("region too large");
  }
  return n;
}

bool Region::contains(const Coord& c) const {
  for (int a = 0; a < dimension(); ++a)
    if (c[a] < lower_[a] || c[a] > upper_[a]) return false;
  return true;
}

std::int64_t Region::index_of(const Coord& c) const {
  std::int64_t idx = 0;
  for (int a = 0; a < dimension(); ++a) {
    if (c[a] < lower_[a] || c[a] > upper_[a])
      throw StructuralError("coordinate outside region");
    idx = idx * axis_length(a) + (c[a] - lower_[a]);
  }
  return idx;
}

Coord Region::coord_of(std::int64_t index) const {
  Coord c(dimension());
  for (int a = dimension() - 1; a >= 0; --a) {
    c[a] = lower_[a] + static_cast<int>(index % axis_length(a));
    index /= axis_length(a);
  }
  return c;
}

Coord Region::wrap(const Coord& c) const {
  Coord w(dimension());
  for (int a = 0; a < dimension(); ++a) {
    int len = axis_length(a);
    int off = (c[a] - lower_[a]) % len;
    if (off < 0) off += len;
    w[a] = lower_[a] + off;
  }
  return w;
}

bool Region::operator==(const Region& other) const {
  return lower_ == other.lower_ && upper_ == other.upper_ &&
         mode_ == other.mode_;
}

// ---------------------------------------------------------------------------
// QcaDefinition

QcaDefinition::QcaDefinition(CellLayout layout, NeighborhoodScheme neighborhood,
                             LocalOperator readOp, LocalOperator updateOp,
                             std::optional<int> quiescent)
    : layout_(std::move(layout)),
      neighborhood_(std::move(neighborhood)),
      read_(std::move(readOp)),
      update_(std::move(updateOp)),
      quiescent_(quiescent) {
  std::int64_t udim = 1;
  for (std::size_t i = 0; i < neighborhood_.size(); ++i)
    udim *= layout_.cell_dim();
  if (read_.is_dense() && read_.matrix().rows() != udim)
    throw StructuralError("U0 dimension does not match layout/neighborhood");
  if (update_.is_dense() && update_.matrix().rows() != layout_.cell_dim())
    throw StructuralError("V0 dimension does not match layout");
  if (quiescent_ && (*quiescent_ < 0 || *quiescent_ >= layout_.cell_dim()))
    throw StructuralError("quiescent index out of range");
  if (layout_.has_classical()) {
    read_kernel_ = read_.is_kernel()
                       ? KernelFn([op = read_](const auto& in) {
                           return op.evaluate(in);
                         })
                       : decompose_to_kernel(
                             read_.matrix(), layout_,
                             static_cast<int>(neighborhood_.size()));
    update_kernel_ = update_.is_kernel()
                         ? KernelFn([op = update_](const auto& in) {
                             return op.evaluate(in);
                           })
                         : decompose_to_kernel(update_.matrix(), layout_, 1);
  }
}

// ---------------------------------------------------------------------------
// validate_definition

namespace {

// Leakage of the all-quiescent column out of the quiescent ray, and the
// phase it picks up.
std::pair<double, Complex> quiescence_residual(const Matrix& op,
                                               std::int64_t qIndex) {
  Vector col = op.col(qIndex);
  Complex u = col(qIndex);
  double rest2 = col.squaredNorm() - std::norm(u);
  double offRay = std::sqrt(std::max(0.0, rest2));
  // also penalize |u| != 1 (non-unitary directions)
  double mag = std::abs(std::abs(u) - 1.0);
  return {std::max(offRay, mag), u};
}

}  // namespace

ValidationReport validate_definition(const QcaDefinition& qca, double tol) {
  ValidationReport rep;
  const auto& layout = qca.layout();
  const auto& nb = qca.neighborhood();

  auto add = [&](const std::string& name, double residual,
                 const std::string& note = "") {
    rep.checks.push_back(CheckResult{name, residual, residual <= tol, note});
    if (residual > tol) rep.pass = false;
  };

  std::int64_t udim = 1;
  for (std::size_t i = 0; i < nb.size(); ++i) udim *= layout.cell_dim();

  // unitarity
  if (qca.read_op().is_dense()) {
    add("unitarity(U0)", is_unitary(qca.read_op().matrix(), tol).residual);
  } else {
    // enumerate classical configurations when feasible, else sample
    std::int64_t numConfigs = 1;
    bool enumerable = true;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      numConfigs *= layout.classical_dim();
      if (numConfigs > 4096) {
        enumerable = false;
        break;
      }
    }
    std::mt19937 rng(7);
    const std::int64_t samples = enumerable ? numConfigs : 512;
    double worst = 0.0;
    for (std::int64_t s = 0; s < samples; ++s) {
      std::vector<std::vector<int>> values(nb.size());
      std::int64_t rem = s;
      for (std::size_t i = 0; i < nb.size(); ++i) {
        int cfg = enumerable
                      ? static_cast<int>(rem % layout.classical_dim())
                      : static_cast<int>(rng() % layout.classical_dim());
        rem /= layout.classical_dim();
        values[i] = layout.unpack_classical(cfg);
      }
      KernelAction act = qca.read_kernel()(values);
      if (act.op.size() != 0)
        worst = std::max(worst, is_unitary(act.op, tol).residual);
    }
    add("unitarity(U0)", worst,
        enumerable ? "per classical block" : "sampled classical blocks");
  }
  if (qca.update_op().is_dense()) {
    add("unitarity(V0)", is_unitary(qca.update_op().matrix(), tol).residual);
  } else {
    Matrix v = qca.update_op().to_dense(layout, 1, 1 << 16);
    add("unitarity(V0)", is_unitary(v, tol).residual, "densified kernel");
  }

  // quiescence (up to a global phase per operator; the phase is reported)
  if (qca.quiescent()) {
    const int q = *qca.quiescent();
    if (qca.read_op().is_dense()) {
      std::int64_t jq = 0;
      for (std::size_t i = 0; i < nb.size(); ++i)
        jq = jq * layout.cell_dim() + q;
      auto [res, phase] = quiescence_residual(qca.read_op().matrix(), jq);
      std::ostringstream note;
      note << "phase " << std::arg(phase);
      add("quiescence(U0)", res, note.str());
    }
    Matrix v = qca.update_op().is_dense()
                   ? qca.update_op().matrix()
                   : qca.update_op().to_dense(layout, 1, 1 << 16);
    auto [res, phase] = quiescence_residual(v, q);
    std::ostringstream note;
    note << "phase " << std::arg(phase);
    add("quiescence(V0)", res, note.str());
  }

  // translation commutation
  try {
    CommutationOptions opt;
    opt.tol = tol;
    CommutationReport cr = commutes_with_translations(qca, opt);
    rep.commutation = cr.offsets;
    rep.max_commutation_residual = cr.max_residual;
    if (!cr.pass) rep.pass = false;
  } catch (const ResourceError& e) {
    rep.checks.push_back(
        CheckResult{"commutation", 0.0, true,
                    std::string("skipped (resource): ") + e.what()});
  }

  return rep;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  if (!structural_error.empty()) {
    os << "structural error: " << structural_error << "\n";
    return os.str();
  }
  for (const auto& c : checks) {
    os << (c.pass ? "  ok   " : "  FAIL ") << c.name
       << "  residual=" << c.residual;
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << "\n";
  }
  for (const auto& o : commutation) {
    os << "  " << (o.residual <= max_commutation_residual || true ? "" : "")
       << "commutator delta=" << coord_to_string(o.offset)
       << "  residual=" << o.residual
       << (o.computed ? "" : "  (disjoint, trivial)") << "\n";
  }
  os << (pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// basis-index arithmetic

std::uint64_t basis_index(const CellLayout& layout, const Region& region,
                          const std::vector<std::vector<int>>& assignment) {
  const std::int64_t cells = region.cell_count();
  if (static_cast<std::int64_t>(assignment.size()) != cells)
    throw StructuralError("assignment count does not match region");
  std::uint64_t idx = 0;
  const std::uint64_t limit = std::uint64_t(1) << 62;
  for (std::int64_t i = 0; i < cells; ++i) {
    std::uint64_t cellIdx = layout.pack(assignment[i]);
    if (idx > (limit - cellIdx) / layout.cell_dim())
      throw ResourceError("basis index exceeds 2^62");
    idx = idx * layout.cell_dim() + cellIdx;
  }
  return idx;
}

std::vector<std::vector<int>> basis_decode(const CellLayout& layout,
                                           const Region& region,
                                           std::uint64_t index) {
  const std::int64_t cells = region.cell_count();
  std::vector<std::vector<int>> assignment(cells);
  for (std::int64_t i = cells - 1; i >= 0; --i) {
    assignment[i] = layout.unpack(static_cast<int>(index % layout.cell_dim()));
    index /= layout.cell_dim();
  }
  if (index != 0) throw StructuralError("basis index out of range");
  return assignment;
}

// ---------------------------------------------------------------------------
// BlockInitializer

BlockInitializer::BlockInitializer(int blockSide, int defaultCellState)
    : k_(blockSide), fill_(defaultCellState) {
  if (k_ < 1) throw StructuralError("block side must be >= 1");
}

void BlockInitializer::set_block(const Coord& blockCoord, Vector state) {
  double n = state.norm();
  if (std::abs(n - 1.0) > 1e-9)
    throw StructuralError("block state is not normalized");
  blocks_.emplace_back(blockCoord, std::move(state));
}

// ---------------------------------------------------------------------------
// coordinate helpers

Coord coord_add(const Coord& a, const Coord& b) {
  Coord c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

Coord coord_sub(const Coord& a, const Coord& b) {
  Coord c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

bool coord_is_zero(const Coord& c) {
  for (int v : c)
    if (v != 0) return false;
  return true;
}

std::string coord_to_string(const Coord& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c[i]);
  }
  return s + ")";
}

}  // namespace luqca
