#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "luqca/builders.hpp"
#include "luqca/coloring.hpp"
#include "luqca/engine.hpp"
#include "luqca/linalg.hpp"

using namespace luqca;
using testutil::kron;

namespace {

RegionState random_dense_state(const Region& region, const CellLayout& layout,
                               std::mt19937& rng) {
  RegionState s(region, layout, 0);
  std::int64_t dim = 1;
  for (std::int64_t i = 0; i < region.cell_count(); ++i)
    dim *= layout.quantum_dim();
  s.dense_amplitudes() = testutil::random_vec(dim, rng);
  return s;
}

QcaDefinition identity_qca() {
  return QcaDefinition(CellLayout::single(2, "spin"),
                       NeighborhoodScheme(1, {{0}, {1}}),
                       LocalOperator::dense(Matrix::Identity(4, 4)),
                       LocalOperator::dense(Matrix::Identity(2, 2)), 0);
}

}  // namespace

TEST_CASE("identity qca leaves the state, bumps the counter") {
  std::mt19937 rng(1);
  Region region({0}, {3}, BoundaryMode::Torus);
  RegionState s =
      random_dense_state(region, CellLayout::single(2, "spin"), rng);
  RegionState t = step(s, identity_qca());
  CHECK(t.step_count() == 1);
  CHECK(s.max_deviation(t) == 0.0);
}

TEST_CASE("ising step equals the dense exponential oracle") {
  std::mt19937 rng(2);
  const double j = 1.0, dt = 0.1;
  Region region({0}, {3}, BoundaryMode::Torus);
  RegionState s =
      random_dense_state(region, CellLayout::single(2, "spin"), rng);

  // oracle: exp(-i H dt) on the 4-cell ring, built independently
  Matrix bond = j * kron(testutil::sz(), testutil::sz());
  Matrix h = testutil::chain_hamiltonian(bond, 4,
                                         {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  Vector expect = testutil::expm_i(h, dt) * s.dense_amplitudes();

  RegionState t = step(s, ising_qca(j, dt));
  CHECK((t.dense_amplitudes() - expect).cwiseAbs().maxCoeff() < 1e-10);

  RegionState t5 = run(s, ising_qca(j, dt), 5);
  Vector expect5 = testutil::expm_i(h, 5 * dt) * s.dense_amplitudes();
  CHECK((t5.dense_amplitudes() - expect5).cwiseAbs().maxCoeff() < 1e-9);

  CHECK(run(s, ising_qca(j, dt), 0).max_deviation(s) == 0.0);
}

TEST_CASE("shift-right moves data one cell per step") {
  QcaDefinition qca = shift_right_qca(2);
  Region region({0}, {2}, BoundaryMode::Torus);

  // basis |abc> on the data registers -> |cab>
  RegionState s(region, qca.layout(), 0);
  s.clear_amplitudes();
  auto key = [&](int a, int b, int c) {
    return BasisKey{a * 2, b * 2, c * 2};  // (data, buffer=0)
  };
  s.set_amplitude(key(1, 0, 1), 1.0);
  RegionState t = step(s, qca);
  CHECK(std::abs(t.amplitude(key(1, 1, 0)) - Complex(1, 0)) < 1e-15);

  // full rotation: identity on the data registers
  RegionState full = run(s, qca, 3);
  CHECK(full.max_deviation(s) < 1e-15);

  // superposed input at cell 0 reaches cell 2 after two steps exactly
  std::mt19937 rng(7);
  RegionState sup(region, qca.layout(), 0);
  sup.clear_amplitudes();
  const Complex a{0.6, 0.0}, b{0.0, 0.8};
  sup.set_amplitude(key(0, 0, 0), a);
  sup.set_amplitude(key(1, 0, 0), b);
  RegionState t2 = run(sup, qca, 2);
  CHECK(std::abs(t2.amplitude(key(0, 0, 0)) - a) < 1e-15);
  CHECK(std::abs(t2.amplitude(key(0, 0, 1)) - b) < 1e-15);
}

TEST_CASE("walk norm is conserved over 50 steps") {
  QcaDefinition qca = walk_qca(WalkParams::standard());
  Region region({-52}, {52}, BoundaryMode::Quiescent);
  RegionState s = walk_single_particle(region, {0}, /*sparse=*/true);
  RegionState t = run(s, qca, 50);
  CHECK(std::abs(t.norm() - 1.0) < 1e-12);
}

TEST_CASE("required_region examples") {
  QcaDefinition symmetric(CellLayout::single(2, "s"),
                          NeighborhoodScheme(1, {{-1}, {0}, {1}}),
                          LocalOperator::dense(Matrix::Identity(8, 8)),
                          LocalOperator::dense(Matrix::Identity(2, 2)), 0);
  Region s({0}, {5}, BoundaryMode::Quiescent);
  LightconeSpec spec = required_region(s, symmetric, 3);
  CHECK(spec.padding[0] == std::pair<int, int>{3, 3});
  CHECK(spec.padded.lower() == Coord{-3});
  CHECK(spec.padded.upper() == Coord{8});

  CHECK(required_region(s, symmetric, 0).padded == s);

  QcaDefinition rightward = shift_right_qca(2);  // neighborhood {0, +1}
  LightconeSpec asym = required_region(s, rightward, 4);
  CHECK(asym.padding[0] == std::pair<int, int>{4, 0});
}

TEST_CASE("lightcone sufficiency for the walk") {
  // amplitude starts at the left edge of S; the padded region must
  // reproduce the reduced state of S exactly
  QcaDefinition qca = walk_qca(WalkParams::standard());
  Region s({0}, {4}, BoundaryMode::Quiescent);
  LightconeSpec spec = required_region(s, qca, 4);

  RegionState padded = walk_single_particle(spec.padded, {0});
  RegionState larger = walk_single_particle(
      Region({-5}, {4}, BoundaryMode::Quiescent), {0});

  padded = run(padded, qca, 4);
  larger = run(larger, qca, 4);

  auto reduce = [&](const RegionState& st) {
    std::vector<std::int64_t> keep;
    for (int x = 0; x <= 4; ++x)
      keep.push_back(st.region().index_of({x}));
    return st.reduced_density(keep);
  };
  CHECK(trace_distance(reduce(padded), reduce(larger)) < 1e-10);
}

TEST_CASE("observe and expectation") {
  CellLayout layout = CellLayout::single(2, "spin");
  Region region({0}, {1}, BoundaryMode::Quiescent);

  RegionState product(region, layout, 0);
  Matrix rho = observe(product, {0});
  Matrix expect = Matrix::Zero(2, 2);
  expect(0, 0) = 1.0;
  CHECK((rho - expect).norm() == 0.0);

  RegionState bell(region, layout, 0);
  bell.clear_amplitudes();
  bell.set_amplitude({0, 0}, 1 / std::sqrt(2.0));
  bell.set_amplitude({1, 1}, 1 / std::sqrt(2.0));
  CHECK(trace_distance(observe(bell, {0}), 0.5 * Matrix::Identity(2, 2)) <
        1e-12);
  CHECK(trace_distance(observe(bell, {1}), 0.5 * Matrix::Identity(2, 2)) <
        1e-12);
  CHECK(std::abs(observe(bell, {0}).trace().real() - 1.0) < 1e-10);

  CHECK(expectation(bell, {0}, testutil::sz()) == doctest::Approx(0.0));
  Matrix notHermitian(2, 2);
  notHermitian << 0, 1, 0, 0;
  CHECK_THROWS_AS(expectation(bell, {0}, notHermitian), StructuralError);
}

TEST_CASE("ising sigma-z expectations match the dense oracle") {
  std::mt19937 rng(13);
  const double j = 1.0, dt = 0.1;
  Region region({0}, {3}, BoundaryMode::Torus);
  RegionState s =
      random_dense_state(region, CellLayout::single(2, "spin"), rng);
  Matrix h = testutil::chain_hamiltonian(kron(testutil::sz(), testutil::sz()),
                                         4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  RegionState t = run(s, ising_qca(j, dt), 3);
  Vector expect = testutil::expm_i(h, 3 * dt) * s.dense_amplitudes();
  for (int cell = 0; cell < 4; ++cell) {
    Matrix szFull = testutil::at_qubits(testutil::sz(), cell, 4);
    const double oracle = (expect.adjoint() * szFull * expect)(0).real();
    CHECK(std::abs(expectation(t, {cell}, testutil::sz()) - oracle) < 1e-9);
  }
}

TEST_CASE("read order independence") {
  std::mt19937 rng(19);
  QcaDefinition qca = walk_qca(WalkParams::standard());
  Region region({0}, {4}, BoundaryMode::Torus);
  RegionState s = random_dense_state(region, qca.layout(), rng);
  std::vector<Coord> centers = read_centers(region, qca.neighborhood());
  RegionState reference = step_with_read_order(s, qca, centers);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(centers.begin(), centers.end(), rng);
    RegionState permuted = step_with_read_order(s, qca, centers);
    CHECK(reference.max_deviation(permuted) < 1e-11);
  }
}

TEST_CASE("space homogeneity on the torus") {
  std::mt19937 rng(29);
  QcaDefinition qca = walk_qca(WalkParams::standard());
  Region region({0}, {5}, BoundaryMode::Torus);
  RegionState s = random_dense_state(region, qca.layout(), rng);
  RegionState direct = run(s, qca, 3);
  RegionState viaShift =
      run(s.translated({2}), qca, 3).translated({-2});
  CHECK(direct.max_deviation(viaShift) < 1e-11);
}

TEST_CASE("quiescent state stays quiescent") {
  QcaDefinition qca = walk_qca(WalkParams::standard());
  Region region({0}, {5}, BoundaryMode::Quiescent);
  RegionState s(region, qca.layout(), 0);
  RegionState t = run(s, qca, 4);
  BasisKey vac(6, 0);
  CHECK(std::abs(std::abs(t.amplitude(vac)) - 1.0) < 1e-12);
}

TEST_CASE("amplitude escaping the region raises") {
  QcaDefinition qca = walk_qca(WalkParams::standard());
  Region region({0}, {3}, BoundaryMode::Quiescent);
  RegionState s = walk_single_particle(region, {3});
  CHECK_THROWS_AS(run(s, qca, 2), StructuralError);
}

TEST_CASE("quiescent mode without a quiescent state raises on overflow") {
  QcaDefinition qca = ising_qca(1.0, 0.1);  // no quiescent state
  Region region({0}, {3}, BoundaryMode::Quiescent);
  RegionState s(region, qca.layout(), 0);
  CHECK_THROWS_AS(step(s, qca), StructuralError);
}

TEST_CASE("sparse and dense evolutions agree") {
  QcaDefinition qca = walk_qca(WalkParams::standard());
  Region region({-4}, {4}, BoundaryMode::Quiescent);
  RegionState dense = run(walk_single_particle(region, {0}, false), qca, 4);
  RegionState sparse = run(walk_single_particle(region, {0}, true), qca, 4);
  CHECK(dense.max_deviation(sparse) < 1e-13);
}

TEST_CASE("hybrid execution equals full dense execution") {
  // translated Heisenberg CQCA: color/clock classical in one run, fully
  // dense (classical flags cleared, kernel densified) in the other
  CqcaDefinition cqca = heisenberg_cqca(1.0, 0.2, 1);
  QcaDefinition hybrid = cqca_to_qca(cqca);

  CellLayout ext = hybrid.layout();
  std::vector<Register> regs = ext.registers();
  for (auto& r : regs) r.classical = false;
  CellLayout flat(regs);
  Matrix u0 = hybrid.read_op().to_dense(ext, 3, 1 << 14);
  Matrix v0 = hybrid.update_op().to_dense(ext, 1, 1 << 14);
  QcaDefinition dense(flat, hybrid.neighborhood(), LocalOperator::dense(u0),
                      LocalOperator::dense(v0));

  Region region({0}, {3}, BoundaryMode::Torus);
  std::mt19937 rng(37);
  RegionState base(region, cqca.layout(), 0);
  base.dense_amplitudes() = testutil::random_vec(16, rng);
  RegionState hybridState = cqca_embedded_state(cqca, base);

  // the same state over the flattened layout
  RegionState denseState(region, flat, 0);
  denseState.clear_amplitudes();
  const RegionState hs = hybridState.to_sparse();
  for (const auto& [key, amp] : hs.sparse_amplitudes()) {
    BasisKey fk(key.size());
    for (std::size_t i = 0; i < key.size(); ++i) {
      const auto& cls = hybridState.classical_of(i);
      fk[i] = ext.merge(key[i], ext.pack_classical(cls));
    }
    denseState.set_amplitude(fk, amp);
  }

  RegionState a = run(hybridState, hybrid, 4);
  RegionState b = run(denseState, dense, 4);
  CHECK((a.full_state_vector() - b.full_state_vector()).cwiseAbs().maxCoeff() <
        1e-12);
}
