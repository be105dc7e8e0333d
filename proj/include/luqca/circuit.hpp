#pragma once

// Layered circuit IR over qudit wires: explicit unitaries on ordered wire
// lists, gates within a layer on pairwise disjoint wires. Depth = layer
// count. Includes a reference simulator and nearest-neighbor routing.

#include <cstdint>
#include <random>

#include "luqca/core.hpp"

namespace luqca {

struct Gate {
  Matrix u;
  std::vector<int> wires;
};

struct Circuit {
  std::vector<int> wire_dims;
  std::vector<std::vector<Gate>> layers;

  int num_wires() const { return static_cast<int>(wire_dims.size()); }
  int depth() const { return static_cast<int>(layers.size()); }
  std::int64_t state_dim() const;

  /// Layer-disjointness, wire ranges and gate unitarity (1e-10).
  void validate() const;

  bool operator==(const Circuit& other) const;
};

/// Apply the layers in order; within a layer the gate order is irrelevant.
Vector simulate_circuit(const Circuit& c, const Vector& input);

/// Rewrite so that every multi-wire gate acts on adjacent positions in the
/// given 1D order (default: wire-index order), inserting swap chains. Gates
/// on more than two wires are rejected. Semantics are preserved exactly.
Circuit route_nearest_neighbor(const Circuit& c,
                               const std::vector<int>& order = {});

/// Uniformly random layered circuit from the gate set {H, T, X, CZ} with
/// nearest-neighbor CZs; used by demos and the encoding round-trip tests.
Circuit random_nn_circuit(int wires, int layers, std::mt19937& rng);

}  // namespace luqca
