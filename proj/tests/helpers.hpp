#pragma once

// Shared test utilities and independent oracles. Everything here is written
// against Eigen directly (not against the library's linalg module) so that
// oracle values do not flow through the code paths under test.

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "luqca/core.hpp"

namespace testutil {

using luqca::Complex;
using luqca::Matrix;
using luqca::Vector;

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix sx() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix sy() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

inline Matrix sz() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix eye(Eigen::Index n) { return Matrix::Identity(n, n); }

/// exp(-i H t) via Eigen's self-adjoint eigensolver (oracle-local).
inline Matrix expm_i(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector ph(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < ph.size(); ++i)
    ph(i) = std::exp(Complex(0, -es.eigenvalues()(i) * t));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

/// Operator on `cells` qubits acting as `op` on the (contiguous-from-`at`)
/// factors, identity elsewhere.
inline Matrix at_qubits(const Matrix& op, int at, int cells) {
  int opCells = 0;
  for (Eigen::Index d = 1; d < op.rows(); d <<= 1) ++opCells;
  Matrix m = eye(1);
  for (int i = 0; i < cells;) {
    if (i == at) {
      m = kron(m, op);
      i += opCells;
    } else {
      m = kron(m, eye(2));
      i += 1;
    }
  }
  return m;
}

/// Ising chain Hamiltonian sum_J sz sz on `cells` qubits (bond list given).
inline Matrix chain_hamiltonian(const Matrix& bond, int cells,
                                const std::vector<std::pair<int, int>>& bonds) {
  const Eigen::Index dim = Eigen::Index(1) << cells;
  Matrix h = Matrix::Zero(dim, dim);
  for (auto [a, b] : bonds) {
    // embed a 2-site bond on sites (a, b) of a ring, also non-adjacent
    Matrix term = Matrix::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
      const int va = static_cast<int>((col >> (cells - 1 - a)) & 1);
      const int vb = static_cast<int>((col >> (cells - 1 - b)) & 1);
      const Eigen::Index base = col - (Eigen::Index(va) << (cells - 1 - a)) -
                                (Eigen::Index(vb) << (cells - 1 - b));
      for (int wa = 0; wa < 2; ++wa)
        for (int wb = 0; wb < 2; ++wb) {
          const Complex v = bond(wa * 2 + wb, va * 2 + vb);
          if (v == Complex(0, 0)) continue;
          const Eigen::Index row = base + (Eigen::Index(wa) << (cells - 1 - a)) +
                                   (Eigen::Index(wb) << (cells - 1 - b));
          term(row, col) += v;
        }
    }
    h += term;
  }
  return h;
}

inline Vector random_vec(Eigen::Index n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  v.normalize();
  return v;
}

inline Matrix random_hermitian(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return (a + a.adjoint()) / 2.0;
}

inline Matrix random_unitary_qr(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
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

}  // namespace testutil
