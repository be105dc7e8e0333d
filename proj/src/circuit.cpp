#include "luqca/circuit.hpp"

#include <algorithm>

#include "luqca/linalg.hpp"

namespace luqca {

std::int64_t Circuit::state_dim() const {
  std::int64_t dim = 1;
  for (int d : wire_dims) {
    dim *= d;
    if (dim > (std::int64_t(1) << 30))
      throw ResourceError("circuit state dimension too large");
  }
  return dim;
}

void Circuit::validate() const {
  for (int d : wire_dims)
    if (d < 2) throw StructuralError("wire dimension must be >= 2");
  for (const auto& layer : layers) {
    std::vector<int> used;
    for (const auto& g : layer) {
      if (g.wires.empty()) throw StructuralError("gate without wires");
      std::int64_t dim = 1;
      for (int w : g.wires) {
        if (w < 0 || w >= num_wires())
          throw StructuralError("gate wire out of range");
        used.push_back(w);
        dim *= wire_dims[w];
      }
      if (g.u.rows() != dim || g.u.cols() != dim)
        throw StructuralError("gate dimension does not match its wires");
      auto [ok, res] = is_unitary(g.u, 1e-10);
      if (!ok)
        throw StructuralError("gate is not unitary (residual " +
                              std::to_string(res) + ")");
    }
    std::sort(used.begin(), used.end());
    if (std::adjacent_find(used.begin(), used.end()) != used.end())
      throw StructuralError("gates within a layer share a wire");
  }
}

Vector simulate_circuit(const Circuit& c, const Vector& input) {
  if (input.size() != c.state_dim())
    throw StructuralError("simulate_circuit: input dimension mismatch");
  Vector state = input;
  for (const auto& layer : c.layers)
    for (const auto& g : layer)
      apply_on_factors(state, g.u, g.wires, c.wire_dims);
  return state;
}

namespace {

Matrix swap_matrix(int dim) {
  Matrix s = Matrix::Zero(std::int64_t(dim) * dim, std::int64_t(dim) * dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      s(std::int64_t(b) * dim + a, std::int64_t(a) * dim + b) = 1.0;
  return s;
}

}  // namespace

Circuit route_nearest_neighbor(const Circuit& c,
                               const std::vector<int>& order) {
  std::vector<int> pos(c.num_wires());      // wire -> position
  std::vector<int> wireHome(c.num_wires()); // position -> wire
  if (order.empty()) {
    for (int i = 0; i < c.num_wires(); ++i) pos[i] = i, wireHome[i] = i;
  } else {
    if (static_cast<int>(order.size()) != c.num_wires())
      throw StructuralError("wire order arity mismatch");
    for (int i = 0; i < c.num_wires(); ++i) {
      wireHome[i] = order[i];
      pos[order[i]] = i;
    }
  }

  Circuit out;
  out.wire_dims = c.wire_dims;
  auto emit = [&](Gate g) { out.layers.push_back({std::move(g)}); };
  auto emit_swap = [&](int p, int q) {
    const int wa = wireHome[p], wb = wireHome[q];
    if (c.wire_dims[wa] != c.wire_dims[wb])
      throw StructuralError("routing swap needs equal wire dimensions");
    emit(Gate{swap_matrix(c.wire_dims[wa]), {wa, wb}});
  };

  for (const auto& layer : c.layers) {
    for (const auto& g : layer) {
      if (g.wires.size() > 2)
        throw StructuralError("routing supports gates on at most two wires");
      if (g.wires.size() < 2 ||
          std::abs(pos[g.wires[0]] - pos[g.wires[1]]) == 1) {
        emit(g);
        continue;
      }
      // walk the second operand's content next to the first, apply the gate
      // on the wires now holding the operands, walk back
      const int a = pos[g.wires[0]];
      int q = pos[g.wires[1]];
      const int dir = a > q ? 1 : -1;
      std::vector<std::pair<int, int>> swaps;
      while (std::abs(q - a) > 1) {
        swaps.emplace_back(q, q + dir);
        q += dir;
      }
      for (auto [x, y] : swaps) emit_swap(x, y);
      emit(Gate{g.u, {wireHome[a], wireHome[q]}});
      for (auto it = swaps.rbegin(); it != swaps.rend(); ++it)
        emit_swap(it->first, it->second);
    }
  }
  return out;
}

bool Circuit::operator==(const Circuit& other) const {
  if (wire_dims != other.wire_dims || layers.size() != other.layers.size())
    return false;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].size() != other.layers[l].size()) return false;
    for (std::size_t g = 0; g < layers[l].size(); ++g) {
      const Gate& a = layers[l][g];
      const Gate& b = other.layers[l][g];
      if (a.wires != b.wires || a.u.rows() != b.u.rows()) return false;
      if ((a.u - b.u).norm() != 0.0) return false;
    }
  }
  return true;
}

Circuit random_nn_circuit(int wires, int layers, std::mt19937& rng) {
  Circuit c;
  c.wire_dims.assign(wires, 2);
  Matrix h = Matrix(2, 2), t = Matrix::Zero(2, 2), x = Matrix::Zero(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  t(0, 0) = 1.0;
  t(1, 1) = std::exp(Complex(0, M_PI / 4));
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  Matrix cz = Matrix::Identity(4, 4);
  cz(3, 3) = -1.0;

  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_int_distribution<int> wire(0, wires - 1);
  for (int l = 0; l < layers; ++l) {
    std::vector<Gate> layer;
    std::vector<bool> used(wires, false);
    const int attempts = 1 + wire(rng);
    for (int a = 0; a < attempts; ++a) {
      const int kind = pick(rng);
      if (kind == 3 && wires >= 2) {
        const int w = std::uniform_int_distribution<int>(0, wires - 2)(rng);
        if (used[w] || used[w + 1]) continue;
        used[w] = used[w + 1] = true;
        layer.push_back(Gate{cz, {w, w + 1}});
      } else {
        const int w = wire(rng);
        if (used[w]) continue;
        used[w] = true;
        layer.push_back(Gate{kind == 0 ? h : (kind == 1 ? t : x), {w}});
      }
    }
    c.layers.push_back(std::move(layer));
  }
  return c;
}

}  // namespace luqca
