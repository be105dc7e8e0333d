#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "helpers.hpp"
#include "luqca/builders.hpp"
#include "luqca/engine.hpp"
#include "luqca/linalg.hpp"

using namespace luqca;
using testutil::kron;

TEST_CASE("every builder passes validation and commutation") {
  for (const QcaDefinition& qca :
       {ising_qca(1.0, 0.1), walk_qca(WalkParams::standard()),
        shift_right_qca(2), shift_right_qca(3)}) {
    ValidationReport rep = validate_definition(qca, 1e-10);
    CHECK(rep.pass);
    CHECK(rep.max_commutation_residual < 1e-10);
  }
  for (const CheckResult& c : heisenberg_cqca(1.0, 0.2, 2).validate(1e-10))
    if (c.name.rfind("unitarity", 0) == 0) CHECK(c.pass);
  // the amplification phases are 2187-dim permutations; check unitarity
  // structurally (one modulus-1 entry per column, hit rows distinct)
  const CqcaDefinition amp = amplification_cqca(AmplificationSpec{});
  for (const CqcaPhase& ph : amp.phases()) {
    std::vector<bool> hit(ph.op.rows(), false);
    for (Eigen::Index col = 0; col < ph.op.cols(); ++col) {
      int nonzeros = 0;
      for (Eigen::Index row = 0; row < ph.op.rows(); ++row) {
        const Complex v = ph.op(row, col);
        if (v == Complex(0, 0)) continue;
        ++nonzeros;
        CHECK(std::abs(std::abs(v) - 1.0) < 1e-15);
        CHECK_FALSE(hit[row]);
        hit[row] = true;
      }
      CHECK(nonzeros == 1);
    }
  }
}

TEST_CASE("ising with zero coupling is trivial") {
  QcaDefinition qca = ising_qca(0.0, 0.1);
  CHECK((qca.read_op().matrix() - Matrix::Identity(4, 4)).norm() < 1e-15);
}

TEST_CASE("heisenberg bond does not commute with its shift") {
  Matrix bond = heisenberg_bond(1.0);
  Matrix h12 = testutil::chain_hamiltonian(bond, 3, {{0, 1}});
  Matrix h23 = testutil::chain_hamiltonian(bond, 3, {{1, 2}});
  CHECK((h12 * h23 - h23 * h12).norm() > 1.0);
}

TEST_CASE("trotter error scaling") {
  CHECK(trotter_error(0.0, 0.2, 4, 4) < 1e-14);

  const double e2 = trotter_error(1.0, 0.2, 2, 4);
  const double e4 = trotter_error(1.0, 0.2, 4, 4);
  const double e8 = trotter_error(1.0, 0.2, 8, 4);
  const double e16 = trotter_error(1.0, 0.2, 16, 4);
  // monotone non-increasing, ratio approaching 2
  CHECK(e2 >= e4);
  CHECK(e4 >= e8);
  CHECK(e8 >= e16);
  CHECK(e4 / e8 > 1.6);
  CHECK(e4 / e8 < 2.4);
  CHECK(e8 / e16 > 1.6);
  CHECK(e8 / e16 < 2.4);
  CHECK(std::abs(e8 / e16 - 2.0) < std::abs(e2 / e4 - 2.0) + 0.2);
}

TEST_CASE("walk parameter validation") {
  CHECK_NOTHROW(WalkParams::standard().validate());
  WalkParams bad;
  bad.p = 0.5;
  bad.q = 0.5;
  CHECK_THROWS_AS(bad.validate(), StructuralError);
  WalkParams crooked;
  crooked.p = 0.6;  // real p with real q breaks p q* + p* q = 0
  crooked.q = 0.8;
  CHECK_THROWS_AS(crooked.validate(), StructuralError);
}

TEST_CASE("walk: one step from a lone up particle") {
  WalkParams params = WalkParams::standard();
  QcaDefinition qca = walk_qca(params);
  Region region({-3}, {3}, BoundaryMode::Quiescent);
  RegionState s = walk_single_particle(region, {0});
  RegionState t = step(s, qca);
  auto amps = walk_amplitudes(t);
  for (const auto& a : amps) {
    if (a.cell == Coord{1}) {
      CHECK(std::abs(a.up - params.q) < 1e-15);
      CHECK(std::abs(a.down - params.p) < 1e-15);
    } else {
      CHECK(std::abs(a.up) < 1e-15);
      CHECK(std::abs(a.down) < 1e-15);
    }
  }
}

TEST_CASE("walk: engine evolution matches the recurrence oracle") {
  WalkParams params = WalkParams::standard();
  QcaDefinition qca = walk_qca(params);
  const int steps = 30;
  Region region({-32}, {32}, BoundaryMode::Quiescent);
  RegionState s = walk_single_particle(region, {0}, /*sparse=*/true);
  RegionState t = run(s, qca, steps);

  // oracle: direct iteration of
  //   psi_u(x,t+1) = q psi_u(x-1,t) + p psi_d(x+1,t)
  //   psi_d(x,t+1) = q psi_d(x+1,t) + p psi_u(x-1,t)
  const int n = 65, origin = 32;
  std::vector<Complex> up(n, 0), down(n, 0);
  up[origin] = 1.0;
  for (int k = 0; k < steps; ++k) {
    std::vector<Complex> u2(n, 0), d2(n, 0);
    for (int x = 0; x < n; ++x) {
      const Complex uL = x > 0 ? up[x - 1] : Complex(0, 0);
      const Complex dR = x + 1 < n ? down[x + 1] : Complex(0, 0);
      u2[x] = params.q * uL + params.p * dR;
      d2[x] = params.q * dR + params.p * uL;
    }
    up = std::move(u2);
    down = std::move(d2);
  }

  double total = 0.0;
  for (const auto& a : walk_amplitudes(t)) {
    const int x = a.cell[0] + origin;
    CHECK(std::abs(a.up - up[x]) < 1e-12);
    CHECK(std::abs(a.down - down[x]) < 1e-12);
    total += std::norm(a.up) + std::norm(a.down);
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("walk: multi-particle sector is handled by the engine") {
  QcaDefinition qca = walk_qca(WalkParams::standard());
  Region region({0}, {5}, BoundaryMode::Torus);
  std::mt19937 rng(41);
  RegionState s(region, qca.layout(), 0);
  s.dense_amplitudes() = testutil::random_vec(4096, rng);
  RegionState t = run(s, qca, 7);
  CHECK(std::abs(t.norm() - 1.0) < 1e-12);
}

TEST_CASE("amplification: all-minus cube is a fixed point") {
  AmplificationSpec spec;
  spec.side = 3;
  for (int step = 0; step < 4; ++step) {
    AmpConfig allMinus(27, 2);
    AmpConfig next =
        amplification_phase(allMinus, 3, spec.flip_set, step % 2);
    CHECK(next == allMinus);
  }
}

TEST_CASE("amplification: quiescent exterior never flips") {
  AmplificationSpec spec;
  spec.side = 2;
  std::mt19937 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    AmpConfig cfg(8);
    for (auto& v : cfg) v = static_cast<int>(rng() % 3);
    AmpConfig next = amplification_phase(cfg, 2, spec.flip_set, trial % 2);
    for (std::size_t i = 0; i < cfg.size(); ++i)
      if (cfg[i] == 0) CHECK(next[i] == 0);
  }
}

TEST_CASE("amplification period operator is an exact basis permutation") {
  // engine evolution of a random s=2 state equals the classically-permuted
  // amplitudes
  AmplificationSpec spec;
  spec.side = 2;
  CqcaDefinition cqca = amplification_cqca(spec);
  CellLayout layout = CellLayout::single(3, "spin3");
  Region region(Coord(3, 0), Coord(3, 1), BoundaryMode::Quiescent);

  std::mt19937 rng(47);
  RegionState s(region, layout, 0);
  s.dense_amplitudes() = testutil::random_vec(6561, rng);
  RegionState t = cqca_run(s, cqca, 2);  // one full period

  Vector expect = Vector::Zero(6561);
  for (int idx = 0; idx < 6561; ++idx) {
    AmpConfig cfg(8);
    int rem = idx;
    for (int i = 7; i >= 0; --i) {
      cfg[i] = rem % 3;
      rem /= 3;
    }
    cfg = amplification_phase(cfg, 2, spec.flip_set, 0);
    cfg = amplification_phase(cfg, 2, spec.flip_set, 1);
    int out = 0;
    for (int i = 0; i < 8; ++i) out = out * 3 + cfg[i];
    expect(out) = s.dense_amplitudes()(idx);
  }
  CHECK((t.dense_amplitudes() - expect).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("amplification demo matches the golden orbits") {
  for (int side : {2, 3}) {
    std::ifstream is(std::string(LUQCA_TEST_DIR) + "/golden/amplify_s" +
                     std::to_string(side) + ".json");
    REQUIRE(is.good());
    nlohmann::json golden = nlohmann::json::parse(is);

    AmplificationSpec spec;
    spec.side = side;
    spec.alpha = 1.0 / std::sqrt(2.0);
    spec.beta = 1.0 / std::sqrt(2.0);
    AmplificationReport rep =
        amplification_demo(spec, golden.at("max_steps").get<std::int64_t>());

    CHECK(rep.reached_fixed_point ==
          golden.at("reached_fixed_point").get<bool>());
    CHECK(rep.steps == golden.at("steps").get<std::int64_t>());
    CHECK(rep.plus_final == golden.at("plus_final").get<AmpConfig>());
    CHECK(rep.minus_final == golden.at("minus_final").get<AmpConfig>());
  }
}

TEST_CASE("amplification: superposition evolves by linearity") {
  AmplificationSpec spec;
  spec.side = 2;
  spec.alpha = Complex(0.6, 0.0);
  spec.beta = Complex(0.0, 0.8);
  CqcaDefinition cqca = amplification_cqca(spec);
  RegionState s = amplification_initial_state(spec);
  RegionState t = cqca_run(s, cqca, 6);  // three periods

  AmpConfig plus = amplification_initial(2, 1);
  AmpConfig minus = amplification_initial(2, 2);
  for (int step = 0; step < 6; ++step) {
    plus = amplification_phase(plus, 2, spec.flip_set, step % 2);
    minus = amplification_phase(minus, 2, spec.flip_set, step % 2);
  }
  CHECK(std::abs(t.amplitude(BasisKey(plus.begin(), plus.end())) -
                 spec.alpha) < 1e-15);
  CHECK(std::abs(t.amplitude(BasisKey(minus.begin(), minus.end())) -
                 spec.beta) < 1e-15);
  CHECK(std::abs(t.norm() - 1.0) < 1e-15);
}

TEST_CASE("shift-right is exact on superpositions") {
  QcaDefinition qca = shift_right_qca(2);
  Region region({0}, {4}, BoundaryMode::Torus);
  std::mt19937 rng(53);
  RegionState s(region, qca.layout(), 0);
  // data-register random state, buffers |0>
  s.clear_amplitudes();
  Vector data = testutil::random_vec(32, rng);
  for (int idx = 0; idx < 32; ++idx) {
    if (data(idx) == Complex(0, 0)) continue;
    BasisKey key(5);
    int rem = idx;
    for (int i = 4; i >= 0; --i) {
      key[i] = (rem % 2) * 2;  // (data, buffer=0)
      rem /= 2;
    }
    s.set_amplitude(key, data(idx));
  }
  RegionState t = run(s, qca, 2);
  CHECK(t.max_deviation(s.translated({2})) < 1e-15);
}
