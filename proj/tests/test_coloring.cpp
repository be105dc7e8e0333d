#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "luqca/builders.hpp"
#include "luqca/coloring.hpp"
#include "luqca/engine.hpp"
#include "luqca/linalg.hpp"

using namespace luqca;
using testutil::kron;

TEST_CASE("coloring validity") {
  CHECK(validate_coloring(Coloring::cyclic(2)));
  CHECK(validate_coloring(Coloring::cyclic(3)));
  CHECK_FALSE(validate_coloring(Coloring(1, {1}, {0}, 1)));
  CHECK(validate_coloring(Coloring::checkerboard(3)));
  // odd period wraps onto itself
  CHECK_FALSE(validate_coloring(Coloring(1, {3}, {0, 1, 0}, 2)));
}

TEST_CASE("is_symmetric examples") {
  CellLayout layout = CellLayout::single(2, "spin");

  // NOT on the center controlled by the parity of the neighbor excitation
  // count: symmetric by construction
  Matrix parityCtl = Matrix::Zero(8, 8);
  for (int l = 0; l < 2; ++l)
    for (int c = 0; c < 2; ++c)
      for (int r = 0; r < 2; ++r) {
        const int in = l * 4 + c * 2 + r;  // offsets (-1, 0, +1)
        const int cOut = ((l + r) % 2 == 1) ? 1 - c : c;
        parityCtl(l * 4 + cOut * 2 + r, in) = 1.0;
      }
  SymmetryReport sym = is_symmetric(parityCtl, layout);
  CHECK(sym.symmetric);
  CHECK(sym.swap_residual < 1e-15);
  CHECK(sym.block_residual < 1e-15);

  // SWAP between the center and one fixed neighbor fails both conditions
  Matrix swapLeft = Matrix::Zero(8, 8);
  for (int l = 0; l < 2; ++l)
    for (int c = 0; c < 2; ++c)
      for (int r = 0; r < 2; ++r)
        swapLeft(c * 4 + l * 2 + r, l * 4 + c * 2 + r) = 1.0;
  SymmetryReport bad = is_symmetric(swapLeft, layout);
  CHECK_FALSE(bad.symmetric);
  CHECK(bad.block_residual > 0.5);

  CHECK(is_symmetric(Matrix::Identity(8, 8), layout).symmetric);
}

TEST_CASE("cqca identity phase is a no-op") {
  CellLayout layout = CellLayout::single(2, "spin");
  CqcaDefinition cqca(layout, Coloring::cyclic(2),
                      {CqcaPhase{Matrix::Identity(8, 8), 0}});
  std::mt19937 rng(3);
  Region region({0}, {3}, BoundaryMode::Torus);
  RegionState s(region, layout, 0);
  s.dense_amplitudes() = testutil::random_vec(16, rng);
  RegionState t = cqca_step(s, cqca, 0);
  CHECK(s.max_deviation(t) == 0.0);
  CHECK(t.step_count() == 1);
}

TEST_CASE("heisenberg phase 0 equals the trotter factor oracle") {
  const double j = 1.0, dt = 0.2;
  const int k = 4;
  CqcaDefinition cqca = heisenberg_cqca(j, dt, k);
  CHECK(cqca.period() == 2 * k);

  std::mt19937 rng(5);
  Region region({0}, {3}, BoundaryMode::Quiescent);  // open 4-cell chain
  CellLayout layout = CellLayout::single(2, "spin");
  RegionState s(region, layout, 0);
  s.dense_amplitudes() = testutil::random_vec(16, rng);

  // oracle: exp(-i H_a dt/k) with H_a the bonds rooted at even cells
  Matrix bond = j * (kron(testutil::sx(), testutil::sx()) +
                     kron(testutil::sy(), testutil::sy()) +
                     kron(testutil::sz(), testutil::sz()) - testutil::eye(4));
  Matrix ha = testutil::chain_hamiltonian(bond, 4, {{0, 1}, {2, 3}});
  Vector expect = testutil::expm_i(ha, dt / k) * s.dense_amplitudes();

  RegionState t = cqca_step(s, cqca, 0);
  CHECK((t.dense_amplitudes() - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("amplification phase flips exactly the flip-set cells") {
  AmplificationSpec spec;
  spec.side = 2;
  CqcaDefinition cqca = amplification_cqca(spec);

  CellLayout layout = CellLayout::single(3, "spin3");
  Region region(Coord(3, 0), Coord(3, 1), BoundaryMode::Quiescent);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    AmpConfig cfg(8);
    for (auto& v : cfg) v = static_cast<int>(rng() % 3);
    RegionState s(region, layout, 0, /*sparse=*/true);
    s.clear_amplitudes();
    s.set_amplitude(BasisKey(cfg.begin(), cfg.end()), 1.0);
    RegionState t = cqca_step(s, cqca, 0);
    AmpConfig next = amplification_phase(cfg, 2, spec.flip_set, 0);
    CHECK(std::abs(t.amplitude(BasisKey(next.begin(), next.end())) -
                   Complex(1, 0)) < 1e-15);
  }
}

TEST_CASE("same-color applications commute") {
  const CqcaDefinition cqca = heisenberg_cqca(1.0, 0.3, 2);
  Region region({0}, {5}, BoundaryMode::Torus);
  std::mt19937 rng(11);
  RegionState s(region, cqca.layout(), 0);
  s.dense_amplitudes() = testutil::random_vec(64, rng);

  LocalOperator op = LocalOperator::dense(cqca.reduced_op(0));
  std::vector<Coord> centers{{0}, {2}, {4}};
  RegionState fwd = s, bwd = s;
  KernelFn none;
  for (const Coord& c : centers)
    apply_anchored(fwd, op, none, cqca.active_offsets(0), c, std::nullopt);
  for (auto it = centers.rbegin(); it != centers.rend(); ++it)
    apply_anchored(bwd, op, none, cqca.active_offsets(0), *it, std::nullopt);
  CHECK(fwd.max_deviation(bwd) < 1e-11);
  CHECK(fwd.max_deviation(cqca_step(s, cqca, 0)) < 1e-11);
}

TEST_CASE("cqca_to_qca identity translation") {
  CellLayout layout = CellLayout::single(2, "spin");
  CqcaDefinition cqca(layout, Coloring::cyclic(2),
                      {CqcaPhase{Matrix::Identity(8, 8), 0},
                       CqcaPhase{Matrix::Identity(8, 8), 1}});
  QcaDefinition qca = cqca_to_qca(cqca);

  std::mt19937 rng(13);
  Region region({0}, {3}, BoundaryMode::Torus);
  RegionState base(region, layout, 0);
  base.dense_amplitudes() = testutil::random_vec(16, rng);
  RegionState lifted = cqca_embedded_state(cqca, base);
  RegionState evolved = run(lifted, qca, cqca.period());
  CHECK(cqca_extract_state(cqca, evolved).max_deviation(base) < 1e-13);
}

TEST_CASE("cqca_to_qca reproduces the heisenberg evolution over 3 periods") {
  CqcaDefinition cqca = heisenberg_cqca(1.0, 0.2, 2);
  QcaDefinition qca = cqca_to_qca(cqca);

  std::mt19937 rng(17);
  Region region({0}, {3}, BoundaryMode::Torus);
  RegionState base(region, cqca.layout(), 0);
  base.dense_amplitudes() = testutil::random_vec(16, rng);

  RegionState direct = cqca_run(base, cqca, 3 * cqca.period());
  RegionState lifted = cqca_embedded_state(cqca, base);
  RegionState evolved = run(lifted, qca, 3 * cqca.period());
  CHECK(cqca_extract_state(cqca, evolved).max_deviation(direct) < 1e-11);
}

TEST_CASE("cqca_to_qca output commutes with translations") {
  CqcaDefinition cqca = heisenberg_cqca(1.0, 0.2, 2);
  QcaDefinition qca = cqca_to_qca(cqca);
  CommutationReport rep = commutes_with_translations(qca, 1e-10);
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-10);

  ValidationReport v = validate_definition(qca, 1e-9);
  CHECK(v.pass);
}

TEST_CASE("gates_to_cqca: empty sequence") {
  CellLayout layout = CellLayout::single(2, "spin");
  CqcaDefinition cqca = gates_to_cqca({}, Coloring::cyclic(2), layout);
  CHECK(cqca.period() == 1);
  Region region({0}, {3}, BoundaryMode::Torus);
  std::mt19937 rng(19);
  RegionState s(region, layout, 0);
  s.dense_amplitudes() = testutil::random_vec(16, rng);
  CHECK(cqca_run(s, cqca, 1).max_deviation(s) == 0.0);
}

TEST_CASE("gates_to_cqca: hadamard everywhere") {
  CellLayout layout = CellLayout::single(2, "spin");
  CqcaDefinition cqca = gates_to_cqca({LocalGate::single(hadamard())},
                                      Coloring::cyclic(2), layout);
  CHECK(cqca.period() == 2);

  std::mt19937 rng(23);
  Region region({0}, {3}, BoundaryMode::Torus);
  RegionState s(region, layout, 0);
  s.dense_amplitudes() = testutil::random_vec(16, rng);
  RegionState t = cqca_run(s, cqca, cqca.period());

  Matrix h4 = kron(kron(kron(hadamard(), hadamard()), hadamard()), hadamard());
  Vector expect = h4 * s.dense_amplitudes();
  CHECK((t.dense_amplitudes() - expect).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("gates_to_cqca: cnot chain matches the sequential oracle") {
  CellLayout layout = CellLayout::single(2, "spin");
  // control at the cell, target to its right; anchored at the target the
  // control offset is -1
  CqcaDefinition cqca = gates_to_cqca({LocalGate::cnot({-1}, {0})},
                                      Coloring::cyclic(3), layout);
  CHECK(cqca.period() == 3);

  std::mt19937 rng(29);
  Region region({0}, {5}, BoundaryMode::Torus);
  RegionState s(region, layout, 0);
  s.dense_amplitudes() = testutil::random_vec(64, rng);
  RegionState t = cqca_run(s, cqca, cqca.period());

  // oracle: CNOT(x -> x+1) at targets in color order 0, 1, 2
  Vector expect = s.dense_amplitudes();
  Matrix cx = Matrix::Zero(4, 4);
  cx(0, 0) = cx(1, 1) = cx(3, 2) = cx(2, 3) = 1.0;
  for (int color = 0; color < 3; ++color)
    for (int target = 0; target < 6; ++target) {
      if (target % 3 != color) continue;
      const int control = (target + 5) % 6;
      apply_on_factors(expect, cx, {control, target}, std::vector<int>(6, 2));
    }
  CHECK((t.dense_amplitudes() - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gates_to_cqca rejects a coloring that repeats in a neighborhood") {
  CellLayout layout = CellLayout::single(2, "spin");
  CHECK_THROWS_AS(
      gates_to_cqca({LocalGate::cnot({-1}, {0})}, Coloring::cyclic(2), layout),
      StructuralError);
}
