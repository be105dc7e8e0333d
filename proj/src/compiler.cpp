#include "luqca/compiler.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "luqca/linalg.hpp"

namespace luqca {

// ---------------------------------------------------------------------------
// region -> circuit

namespace {

struct Schedule {
  // per step: sub-layers of read centers with pairwise disjoint supports
  std::vector<std::vector<Coord>> sublayers;
};

Schedule schedule_read_phase(const QcaDefinition& qca, const Region& region) {
  const auto& nb = qca.neighborhood();
  const int d = region.dimension();

  std::vector<Coord> centers;
  if (region.boundary() == BoundaryMode::Torus) {
    for (std::int64_t i = 0; i < region.cell_count(); ++i)
      centers.push_back(region.coord_of(i));
  } else {
    for (std::int64_t i = 0; i < region.cell_count(); ++i) {
      Coord x = region.coord_of(i);
      bool inside = true;
      for (const auto& o : nb.offsets())
        if (!region.contains(coord_add(x, o))) inside = false;
      if (inside) centers.push_back(x);
    }
  }

  // group by coordinates mod the per-axis diameter; wrap conflicts (torus
  // lengths not divisible by the diameter) spill into extra sub-layers
  std::map<std::vector<int>, std::vector<Coord>> classes;
  for (const auto& x : centers) {
    std::vector<int> key(d);
    for (int a = 0; a < d; ++a) {
      int m = (x[a] - region.lower()[a]) % nb.diameter(a);
      key[a] = m < 0 ? m + nb.diameter(a) : m;
    }
    classes[key].push_back(x);
  }

  Schedule sched;
  for (auto& [key, xs] : classes) {
    std::vector<std::vector<Coord>> bins;
    std::vector<std::set<std::int64_t>> used;
    for (const auto& x : xs) {
      std::set<std::int64_t> cells;
      for (const auto& o : nb.offsets()) {
        Coord c = coord_add(x, o);
        if (region.boundary() == BoundaryMode::Torus) c = region.wrap(c);
        cells.insert(region.index_of(c));
      }
      bool placed = false;
      for (std::size_t b = 0; b < bins.size() && !placed; ++b) {
        bool disjoint = true;
        for (std::int64_t c : cells)
          if (used[b].count(c)) disjoint = false;
        if (disjoint) {
          bins[b].push_back(x);
          used[b].insert(cells.begin(), cells.end());
          placed = true;
        }
      }
      if (!placed) {
        bins.push_back({x});
        used.emplace_back(cells.begin(), cells.end());
      }
    }
    for (auto& b : bins) sched.sublayers.push_back(std::move(b));
  }
  return sched;
}

}  // namespace

int layers_per_step(const QcaDefinition& qca, const Region& region) {
  return static_cast<int>(schedule_read_phase(qca, region).sublayers.size()) +
         1;
}

Circuit compile_to_circuit(const QcaDefinition& qca, const Region& region,
                           std::int64_t t) {
  if (t < 0) throw StructuralError("negative step count");
  const auto& nb = qca.neighborhood();
  const Matrix u0 = qca.read_op().to_dense(
      qca.layout(), static_cast<int>(nb.size()), std::int64_t(1) << 14);
  const Matrix v0 =
      qca.update_op().to_dense(qca.layout(), 1, std::int64_t(1) << 14);

  Circuit c;
  c.wire_dims.assign(region.cell_count(), qca.layout().cell_dim());
  const Schedule sched = schedule_read_phase(qca, region);

  for (std::int64_t step = 0; step < t; ++step) {
    for (const auto& sub : sched.sublayers) {
      std::vector<Gate> layer;
      for (const auto& x : sub) {
        Gate g;
        g.u = u0;
        for (const auto& o : nb.offsets()) {
          Coord cell = coord_add(x, o);
          if (region.boundary() == BoundaryMode::Torus)
            cell = region.wrap(cell);
          g.wires.push_back(static_cast<int>(region.index_of(cell)));
        }
        layer.push_back(std::move(g));
      }
      c.layers.push_back(std::move(layer));
    }
    std::vector<Gate> vlayer;
    for (std::int64_t i = 0; i < region.cell_count(); ++i)
      vlayer.push_back(Gate{v0, {static_cast<int>(i)}});
    c.layers.push_back(std::move(vlayer));
  }
  return c;
}

// ---------------------------------------------------------------------------
// universal 2D QCA

namespace {

Matrix single_gate_matrix(int gateValue) {
  Matrix m = Matrix::Identity(2, 2);
  switch (gateValue) {
    case kGateH: {
      const double s = 1.0 / std::sqrt(2.0);
      m << s, s, s, -s;
      break;
    }
    case kGateT:
      m(1, 1) = std::exp(Complex(0, M_PI / 4));
      break;
    case kGateX:
      m << 0, 1, 1, 0;
      break;
    default:
      throw StructuralError("not a single-qubit gate value");
  }
  return m;
}

Matrix cz_matrix() {
  Matrix cz = Matrix::Identity(4, 4);
  cz(3, 3) = -1.0;
  return cz;
}

Matrix swap2_matrix() {
  Matrix s = Matrix::Zero(4, 4);
  s(0, 0) = s(3, 3) = 1.0;
  s(1, 2) = s(2, 1) = 1.0;
  return s;
}

// support positions in the lexicographically sorted von Neumann offsets
constexpr int kUp = 0;      // (-1, 0)
constexpr int kLeft = 1;    // (0, -1)
constexpr int kCenter = 2;  // (0, 0)
constexpr int kRight = 3;   // (0, 1)
constexpr int kDown = 4;    // (1, 0)

// classical register slots (declaration order among classical registers)
constexpr int kGateSlot = 0;
constexpr int kClockSlot = 1;
constexpr int kActiveSlot = 2;
constexpr int kColorSlot = 3;

}  // namespace

QcaDefinition make_universal_qca() {
  CellLayout layout({Register{"state", 2, false}, Register{"gate", 6, true},
                     Register{"clock", 6, true}, Register{"active", 2, true},
                     Register{"colcolor", 3, true}});
  NeighborhoodScheme nb(2, {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}});

  KernelFn read = [](const std::vector<std::vector<int>>& in) {
    KernelAction act;
    act.classical_out = in;
    const int clk = in[kCenter][kClockSlot];
    for (const auto& cell : in)
      if (cell[kClockSlot] != clk) return act;  // desynchronized: identity

    if (clk % 2 == 0) {
      // operate: own gate on own state, gated on the active flag; CZ only
      // with two-sided CP marking
      if (in[kCenter][kActiveSlot] != 1) return act;
      const int g = in[kCenter][kGateSlot];
      if (g >= kGateH) {
        act.op = single_gate_matrix(g);
        act.op_cells = {kCenter};
      } else if (g == kGateCpLower && in[kUp][kGateSlot] == kGateCpUpper) {
        act.op = cz_matrix();
        act.op_cells = {kUp, kCenter};
      }
      return act;
    }

    // carry sub-phase: pair with the right neighbor by column color and
    // swap the (state, active) pair iff the active flags differ
    const int s = (clk - 1) / 2;
    if (in[kCenter][kColorSlot] != s ||
        in[kRight][kColorSlot] != (s + 1) % 3)
      return act;
    const int aOwn = in[kCenter][kActiveSlot];
    const int aRight = in[kRight][kActiveSlot];
    if (aOwn == aRight) return act;
    act.classical_out[kCenter][kActiveSlot] = aRight;
    act.classical_out[kRight][kActiveSlot] = aOwn;
    act.op = swap2_matrix();
    act.op_cells = {kCenter, kRight};
    return act;
  };

  KernelFn update = [](const std::vector<std::vector<int>>& in) {
    KernelAction act;
    act.classical_out = in;
    act.classical_out[0][kClockSlot] = (in[0][kClockSlot] + 1) % 6;
    return act;
  };

  return QcaDefinition(layout, nb,
                       LocalOperator::kernel(read, "universal_read"),
                       LocalOperator::kernel(update, "universal_update"));
}

UniversalEncoding encode_circuit_as_qca(const Circuit& c) {
  c.validate();
  for (int dimw : c.wire_dims)
    if (dimw != 2)
      throw StructuralError("universal encoding takes qubit wires");
  const int wires = c.num_wires();
  const int depth = c.depth();

  const int rows = std::max(wires, 3);
  int cols = depth + 1;
  cols = std::max(3, ((cols + 2) / 3) * 3);

  UniversalEncoding enc;
  enc.qca = make_universal_qca();
  enc.grid = Region({0, 0}, {rows - 1, cols - 1}, BoundaryMode::Torus);
  enc.wires = wires;
  enc.columns = depth;
  enc.steps = 2 * static_cast<std::int64_t>(depth);
  enc.gate_plan.assign(rows, std::vector<int>(cols, kGateNop));

  const Matrix h = single_gate_matrix(kGateH);
  const Matrix t = single_gate_matrix(kGateT);
  const Matrix x = single_gate_matrix(kGateX);
  const Matrix cz = cz_matrix();
  for (int col = 0; col < depth; ++col) {
    for (const auto& g : c.layers[col]) {
      if (g.wires.size() == 1) {
        int value = -1;
        if ((g.u - h).norm() < 1e-12) value = kGateH;
        if ((g.u - t).norm() < 1e-12) value = kGateT;
        if ((g.u - x).norm() < 1e-12) value = kGateX;
        if (value < 0)
          throw StructuralError(
              "single-qubit gate outside the fixed set {H, T, X}");
        enc.gate_plan[g.wires[0]][col] = value;
      } else if (g.wires.size() == 2) {
        if ((g.u - cz).norm() > 1e-12)
          throw StructuralError("two-qubit gates must be CZ");
        const int a = std::min(g.wires[0], g.wires[1]);
        const int b = std::max(g.wires[0], g.wires[1]);
        if (b != a + 1)
          throw StructuralError(
              "CZ must act on adjacent wires; route the circuit first");
        enc.gate_plan[a][col] = kGateCpUpper;
        enc.gate_plan[b][col] = kGateCpLower;
      } else {
        throw StructuralError("universal encoding takes 1- and 2-qubit gates");
      }
    }
  }
  for (int r = 0; r < wires; ++r) enc.output_cells.push_back({r, depth});
  return enc;
}

RegionState encoded_initial_state(const UniversalEncoding& enc,
                                  const Vector& input) {
  const std::int64_t want = std::int64_t(1) << enc.wires;
  if (input.size() != want)
    throw StructuralError("input dimension does not match the wire count");

  RegionState s(enc.grid, enc.qca.layout(), 0, /*sparse=*/true);
  s.clear_amplitudes();
  const int rows = enc.grid.axis_length(0);
  const int cols = enc.grid.axis_length(1);
  for (int r = 0; r < rows; ++r)
    for (int col = 0; col < cols; ++col) {
      const std::int64_t idx = enc.grid.index_of({r, col});
      s.set_classical(idx, {enc.gate_plan[r][col], 0, col == 0 ? 1 : 0,
                            col % 3});
    }
  for (std::int64_t i = 0; i < want; ++i) {
    if (input(i) == Complex(0, 0)) continue;
    BasisKey key(enc.grid.cell_count(), 0);
    for (int r = 0; r < enc.wires; ++r)
      key[enc.grid.index_of({r, 0})] =
          static_cast<int>((i >> (enc.wires - 1 - r)) & 1);
    s.set_amplitude(key, input(i));
  }
  return s;
}

Vector extract_output(const RegionState& state,
                      const UniversalEncoding& enc) {
  const std::int64_t dim = std::int64_t(1) << enc.wires;
  Vector out = Vector::Zero(dim);
  for (std::int64_t i = 0; i < dim; ++i) {
    BasisKey key(state.cell_count(), 0);
    for (int r = 0; r < enc.wires; ++r)
      key[state.region().index_of(enc.output_cells[r])] =
          static_cast<int>((i >> (enc.wires - 1 - r)) & 1);
    out(i) = state.amplitude(key);
  }
  return out;
}

}  // namespace luqca
