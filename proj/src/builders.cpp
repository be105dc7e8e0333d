#include "luqca/builders.hpp"

#include <algorithm>

#include "luqca/linalg.hpp"

namespace luqca {

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix hadamard() {
  Matrix m(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Ising

Matrix ising_bond(double j) { return j * kron(pauli_z(), pauli_z()); }

QcaDefinition ising_qca(double j, double dt) {
  CellLayout layout = CellLayout::single(2, "spin");
  NeighborhoodScheme nb(1, {{0}, {1}});
  Matrix u0 = herm_exp(ising_bond(j), dt);
  Matrix v0 = Matrix::Identity(2, 2);
  return QcaDefinition(layout, nb, LocalOperator::dense(u0),
                       LocalOperator::dense(v0));
}

Matrix ising_chain_hamiltonian(int cells, double j, bool torus) {
  std::int64_t dim = std::int64_t(1) << cells;
  Matrix h = Matrix::Zero(dim, dim);
  Matrix bond = ising_bond(j);
  for (int n = 0; n + 1 < cells; ++n)
    h += embed_on_cells(bond, {n, n + 1}, cells, 2);
  if (torus && cells > 2) h += embed_on_cells(bond, {cells - 1, 0}, cells, 2);
  return h;
}

// ---------------------------------------------------------------------------
// Heisenberg

Matrix heisenberg_bond(double j) {
  return j * (kron(pauli_x(), pauli_x()) + kron(pauli_y(), pauli_y()) +
              kron(pauli_z(), pauli_z()) - Matrix::Identity(4, 4));
}

Matrix heisenberg_chain_hamiltonian(int cells, double j, bool torus) {
  std::int64_t dim = std::int64_t(1) << cells;
  Matrix h = Matrix::Zero(dim, dim);
  Matrix bond = heisenberg_bond(j);
  for (int n = 0; n + 1 < cells; ++n)
    h += embed_on_cells(bond, {n, n + 1}, cells, 2);
  if (torus && cells > 2) h += embed_on_cells(bond, {cells - 1, 0}, cells, 2);
  return h;
}

CqcaDefinition heisenberg_cqca(double j, double dt, int k) {
  if (k < 1) throw StructuralError("Trotter order k must be >= 1");
  CellLayout layout = CellLayout::single(2, "spin");
  Matrix factor = herm_exp(heisenberg_bond(j), dt / k);
  // offsets sorted: (-1), (0), (+1); the factor couples (center, right)
  Matrix op = embed_on_cells(factor, {1, 2}, 3, 2);
  std::vector<CqcaPhase> phases;
  for (int cycle = 0; cycle < k; ++cycle) {
    phases.push_back(CqcaPhase{op, 0});  // bonds rooted at even cells
    phases.push_back(CqcaPhase{op, 1});  // bonds rooted at odd cells
  }
  return CqcaDefinition(layout, Coloring::cyclic(2), std::move(phases));
}

double trotter_error(double j, double dt, int k, int chainLength) {
  if (chainLength < 2) throw StructuralError("chain too short");
  if (chainLength > 12)
    throw ResourceError("dense Trotter oracle capped at 12 cells");
  const std::int64_t dim = std::int64_t(1) << chainLength;
  Matrix factor = herm_exp(heisenberg_bond(j), dt / k);

  Matrix evenLayer = Matrix::Identity(dim, dim);
  Matrix oddLayer = Matrix::Identity(dim, dim);
  for (int n = 0; n + 1 < chainLength; ++n) {
    Matrix e = embed_on_cells(factor, {n, n + 1}, chainLength, 2);
    if (n % 2 == 0)
      evenLayer = e * evenLayer;
    else
      oddLayer = e * oddLayer;
  }
  Matrix cycle = oddLayer * evenLayer;  // even-rooted bonds act first
  Matrix a = Matrix::Identity(dim, dim);
  for (int i = 0; i < k; ++i) a = cycle * a;

  Matrix b = herm_exp(heisenberg_chain_hamiltonian(chainLength, j, false), dt);
  Eigen::JacobiSVD<Matrix> svd(a - b);
  return svd.singularValues()(0);
}

// ---------------------------------------------------------------------------
// quantum walk

void WalkParams::validate() const {
  const double tol = 1e-12;
  if (std::abs(std::norm(p) + std::norm(q) - 1.0) > tol)
    throw StructuralError("walk params: |p|^2 + |q|^2 != 1");
  if (std::abs(p * std::conj(q) + std::conj(p) * q) > tol)
    throw StructuralError("walk params: p q* + p* q != 0");
  if (std::abs(std::abs(phi) - 1.0) > tol)
    throw StructuralError("walk params: |phi| != 1");
}

WalkParams WalkParams::standard() {
  WalkParams w;
  w.q = 1.0 / std::sqrt(2.0);
  w.p = Complex(0, 1) / std::sqrt(2.0);
  w.phi = 1.0;
  return w;
}

QcaDefinition walk_qca(const WalkParams& params) {
  params.validate();
  CellLayout layout(
      {Register{"up", 2, false}, Register{"down", 2, false}});
  NeighborhoodScheme nb(1, {{0}, {1}});

  // U0: permutation exchanging up(x) with down(x+1); factor order
  // (up0, down0, up1, down1), big-endian
  Matrix u0 = Matrix::Zero(16, 16);
  for (int in = 0; in < 16; ++in) {
    const int u0b = (in >> 3) & 1, d0b = (in >> 2) & 1;
    const int u1b = (in >> 1) & 1, d1b = in & 1;
    const int out = (d1b << 3) | (d0b << 2) | (u1b << 1) | u0b;
    u0(out, in) = 1.0;
  }

  Matrix v0 = Matrix::Zero(4, 4);
  v0(0, 0) = 1.0;
  v0(1, 1) = params.p;  // |01> = down only
  v0(1, 2) = params.q;
  v0(2, 1) = params.q;  // |10> = up only
  v0(2, 2) = params.p;
  v0(3, 3) = params.phi;

  return QcaDefinition(layout, nb, LocalOperator::dense(u0),
                       LocalOperator::dense(v0), 0);
}

RegionState walk_single_particle(const Region& region, const Coord& site,
                                 bool sparse) {
  CellLayout layout(
      {Register{"up", 2, false}, Register{"down", 2, false}});
  RegionState s(region, layout, 0, sparse);
  s.clear_amplitudes();
  BasisKey key(s.cell_count(), 0);
  key[region.index_of(site)] = 2;  // up = 1, down = 0
  s.set_amplitude(key, 1.0);
  return s;
}

std::vector<WalkAmplitude> walk_amplitudes(const RegionState& state) {
  std::vector<WalkAmplitude> out;
  const Region& region = state.region();
  BasisKey key(state.cell_count(), 0);
  for (std::int64_t i = 0; i < state.cell_count(); ++i) {
    WalkAmplitude w;
    w.cell = region.coord_of(i);
    key[i] = 2;
    w.up = state.amplitude(key);
    key[i] = 1;
    w.down = state.amplitude(key);
    key[i] = 0;
    out.push_back(std::move(w));
  }
  return out;
}

// ---------------------------------------------------------------------------
// spin-signal amplification

namespace {

int amp_value(int basis) { return basis == 1 ? 1 : (basis == 2 ? -1 : 0); }

Matrix amplification_phase_op(const std::vector<int>& flipSet) {
  // 7 cells of dimension 3, offsets sorted lex; center at position 3
  const int n = 7, center = 3;
  std::int64_t dim = 1;
  for (int i = 0; i < n; ++i) dim *= 3;
  std::vector<std::int64_t> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * 3;

  Matrix op = Matrix::Zero(dim, dim);
  for (std::int64_t in = 0; in < dim; ++in) {
    int sum = 0;
    for (int pos = 0; pos < n; ++pos) {
      if (pos == center) continue;
      sum += amp_value(static_cast<int>((in / stride[pos]) % 3));
    }
    const int c = static_cast<int>((in / stride[center]) % 3);
    std::int64_t out = in;
    if ((c == 1 || c == 2) &&
        std::find(flipSet.begin(), flipSet.end(), sum) != flipSet.end())
      out = in + static_cast<std::int64_t>((3 - 2 * c)) * stride[center];
    op(out, in) = 1.0;
  }
  return op;
}

}  // namespace

CqcaDefinition amplification_cqca(const AmplificationSpec& spec) {
  if (spec.side < 2) throw StructuralError("cube side must be >= 2");
  CellLayout layout = CellLayout::single(3, "spin3");
  Matrix op = amplification_phase_op(spec.flip_set);
  std::vector<CqcaPhase> phases{CqcaPhase{op, 0}, CqcaPhase{op, 1}};
  return CqcaDefinition(layout, Coloring::checkerboard(3), std::move(phases),
                        0);
}

AmpConfig amplification_initial(int side, int corner) {
  AmpConfig cfg(static_cast<std::size_t>(side) * side * side, 2);
  cfg[0] = corner;
  return cfg;
}

AmpConfig amplification_phase(const AmpConfig& cfg, int side,
                              const std::vector<int>& flipSet, int color) {
  AmpConfig next = cfg;
  auto at = [&](int x, int y, int z) -> int {
    if (x < 0 || x >= side || y < 0 || y >= side || z < 0 || z >= side)
      return 0;  // quiescent exterior
    return amp_value(cfg[(static_cast<std::size_t>(x) * side + y) * side + z]);
  };
  for (int x = 0; x < side; ++x)
    for (int y = 0; y < side; ++y)
      for (int z = 0; z < side; ++z) {
        if ((x + y + z) % 2 != color) continue;
        const std::size_t i = (static_cast<std::size_t>(x) * side + y) * side + z;
        if (cfg[i] != 1 && cfg[i] != 2) continue;
        const int sum = at(x - 1, y, z) + at(x + 1, y, z) + at(x, y - 1, z) +
                        at(x, y + 1, z) + at(x, y, z - 1) + at(x, y, z + 1);
        if (std::find(flipSet.begin(), flipSet.end(), sum) != flipSet.end())
          next[i] = 3 - cfg[i];
      }
  return next;
}

AmplificationReport amplification_demo(const AmplificationSpec& spec,
                                       std::int64_t maxSteps) {
  if (spec.side < 2) throw StructuralError("cube side must be >= 2");
  const double unit = std::norm(spec.alpha) + std::norm(spec.beta);
  if (std::abs(unit - 1.0) > 1e-9)
    throw StructuralError("corner state is not normalized");

  AmplificationReport rep;
  AmpConfig plus = amplification_initial(spec.side, 1);
  AmpConfig minus = amplification_initial(spec.side, 2);
  int quietPhases = 0;
  std::int64_t step = 0;
  for (; step < maxSteps; ++step) {
    const int color = static_cast<int>(step % 2);
    AmpConfig plusNext =
        amplification_phase(plus, spec.side, spec.flip_set, color);
    AmpConfig minusNext =
        amplification_phase(minus, spec.side, spec.flip_set, color);
    std::int64_t flips = 0;
    for (std::size_t i = 0; i < plus.size(); ++i) {
      if (plusNext[i] != plus[i]) ++flips;
      if (minusNext[i] != minus[i]) ++flips;
    }
    if (flips == 0) {
      if (++quietPhases >= 2) {  // a full period without change
        rep.reached_fixed_point = true;
        break;
      }
    } else {
      quietPhases = 0;
    }
    rep.flips_per_step.push_back(flips);
    plus = std::move(plusNext);
    minus = std::move(minusNext);
  }
  rep.steps = rep.reached_fixed_point ? step - quietPhases + 1 : step;
  rep.plus_final = plus;
  rep.minus_final = minus;

  const AmpConfig allPlus(plus.size(), 1), allMinus(plus.size(), 2);
  Complex overlap = std::conj(spec.alpha) * (spec.alpha * double(plus == allPlus) +
                                             spec.beta * double(minus == allPlus)) +
                    std::conj(spec.beta) * (spec.alpha * double(plus == allMinus) +
                                            spec.beta * double(minus == allMinus));
  rep.fidelity = std::abs(overlap);
  return rep;
}

RegionState amplification_initial_state(const AmplificationSpec& spec) {
  const double unit = std::norm(spec.alpha) + std::norm(spec.beta);
  if (std::abs(unit - 1.0) > 1e-9)
    throw StructuralError("corner state is not normalized");
  CellLayout layout = CellLayout::single(3, "spin3");
  Region region(Coord(3, 0), Coord(3, spec.side - 1), BoundaryMode::Quiescent);
  RegionState s(region, layout, 0, /*sparse=*/true);
  s.clear_amplitudes();
  BasisKey plusKey(region.cell_count(), 2), minusKey(region.cell_count(), 2);
  plusKey[0] = 1;
  if (spec.alpha != Complex(0, 0)) s.set_amplitude(plusKey, spec.alpha);
  if (spec.beta != Complex(0, 0)) s.set_amplitude(minusKey, spec.beta);
  return s;
}

// ---------------------------------------------------------------------------
// shift-right

QcaDefinition shift_right_qca(int dim) {
  if (dim < 2) throw StructuralError("shift-right register dimension >= 2");
  CellLayout layout(
      {Register{"data", dim, false}, Register{"buffer", dim, false}});
  NeighborhoodScheme nb(1, {{0}, {1}});

  const std::int64_t cd = std::int64_t(dim) * dim;
  Matrix u0 = Matrix::Zero(cd * cd, cd * cd);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c)
        for (int e = 0; e < dim; ++e) {
          const std::int64_t in = ((std::int64_t(a) * dim + b) * dim + c) * dim + e;
          const std::int64_t out =
              ((std::int64_t(e) * dim + b) * dim + c) * dim + a;
          u0(out, in) = 1.0;  // data(x) <-> buffer(x+1)
        }

  Matrix v0 = Matrix::Zero(cd, cd);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      v0(std::int64_t(b) * dim + a, std::int64_t(a) * dim + b) = 1.0;

  return QcaDefinition(layout, nb, LocalOperator::dense(u0),
                       LocalOperator::dense(v0), 0);
}

}  // namespace luqca
