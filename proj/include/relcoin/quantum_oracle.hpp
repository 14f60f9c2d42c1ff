#pragma once

// Numerical search for Alice's best local cheat, used to cross-check
// mlc_attack. It treats the overlap <psi1|(U (x) I)|psi0> as a black box
// evaluated through explicit Kronecker products and climbs it by
// repeated projection onto the unitary group (Newton polar iteration), so
// it shares no decomposition code with the closed-form attack.

#include <Eigen/Dense>
#include <Eigen/LU>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "relcoin/error.hpp"
#include "relcoin/quantum.hpp"

namespace relcoin::quantum {

struct OracleOptions {
  int starts = 4;
  int max_iterations = 400;
  std::uint64_t seed = 7;
};

namespace oracle_detail {

inline Matrix kron_identity(const Matrix& u, Eigen::Index db) {
  Matrix k = Matrix::Zero(u.rows() * db, u.cols() * db);
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) k.block(i * db, j * db, db, db) = u(i, j) * Matrix::Identity(db, db);
  }
  return k;
}

// Unitary factor of x via the scaled Newton iteration
// X <- (g X + X^{-dagger} / g) / 2.
inline Matrix polar_unitary(Matrix x) {
  const auto n = x.rows();
  for (int it = 0; it < 100; ++it) {
    Eigen::FullPivLU<Matrix> lu(x);
    if (!lu.isInvertible()) {
      x += 1e-9 * Matrix::Identity(n, n);
      continue;
    }
    const Matrix inv_adj = lu.inverse().adjoint();
    const double g = std::sqrt(inv_adj.norm() / x.norm());
    const Matrix next = 0.5 * (g * x + inv_adj / g);
    const double change = (next - x).norm();
    x = next;
    if (change < 1e-14 * std::sqrt(double(n))) break;
  }
  return x;
}

inline Matrix random_unitary(Eigen::Index n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(normal(gen), normal(gen));
  }
  return polar_unitary(g);
}

}  // namespace oracle_detail

// Best |<psi1|(U (x) I)|psi0>|^2 found over unitaries U on the first
// `split` subsystems. Total dimension is capped at 64.
inline double optimal_cheat_oracle(const PureState& psi0, const PureState& psi1, std::size_t split,
                                   const OracleOptions& opt = {}) {
  if (psi0.dims() != psi1.dims()) throw DimensionMismatch("oracle: states have different dims");
  if (split < 1 || split >= psi0.subsystems()) throw DimensionMismatch("oracle: invalid split");
  if (psi0.dim() > 64) throw ConfigError("oracle: total dimension exceeds 64");
  const auto da = static_cast<Eigen::Index>(product(psi0.dims(), 0, split));
  const auto db = static_cast<Eigen::Index>(psi0.dim()) / da;
  const Vector& v0 = psi0.amplitudes();
  const Vector& v1 = psi1.amplitudes();

  auto overlap = [&](const Matrix& u) -> Complex { return v1.dot(oracle_detail::kron_identity(u, db) * v0); };

  // The overlap is linear in U: z(U) = sum_ij U_ij G_ij, probed on matrix units.
  Matrix g(da, da);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      Matrix e = Matrix::Zero(da, da);
      e(i, j) = 1.0;
      g(i, j) = overlap(e);
    }
  }
  // d|z|^2 / d conj(U) = z conj(G).
  std::mt19937_64 gen(opt.seed);
  double best = 0.0;
  for (int start = 0; start < opt.starts; ++start) {
    Matrix u = oracle_detail::random_unitary(da, gen);
    double value = std::norm(overlap(u));
    double step = 1.0;
    for (int it = 0; it < opt.max_iterations; ++it) {
      const Complex z = overlap(u);
      if (std::abs(z) == 0.0) break;
      const Matrix candidate = oracle_detail::polar_unitary(u + step * z * g.conjugate());
      const double cv = std::norm(overlap(candidate));
      if (cv >= value) {
        const double gain = cv - value;
        u = candidate;
        value = cv;
        step = std::min(step * 2.0, 1e4);
        if (gain < 1e-15 && it > 8) break;
      } else {
        step /= 4.0;
        if (step < 1e-8) break;
      }
    }
    best = std::max(best, value);
  }
  return std::clamp(best, 0.0, 1.0);
}

}  // namespace relcoin::quantum
