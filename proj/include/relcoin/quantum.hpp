#pragma once

// Finite-dimensional pure and mixed states over an explicit list of
// subsystem dimensions. Basis index convention: the first subsystem is
// the most significant digit.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "relcoin/canonical_json.hpp"
#include "relcoin/error.hpp"
#include "relcoin/random.hpp"

namespace relcoin::quantum {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Dims = std::vector<std::size_t>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;

inline std::size_t product(const Dims& dims, std::size_t begin = 0, std::size_t end = std::size_t(-1)) {
  end = std::min(end, dims.size());
  std::size_t p = 1;
  for (std::size_t i = begin; i < end; ++i) p *= dims[i];
  return p;
}

class PureState {
 public:
  PureState(Vector amplitudes, Dims dims) : amps_(std::move(amplitudes)), dims_(std::move(dims)) {
    if (dims_.empty() || std::any_of(dims_.begin(), dims_.end(), [](std::size_t d) { return d == 0; })) {
      throw DimensionMismatch("PureState: subsystem dimensions must be positive");
    }
    if (product(dims_) != static_cast<std::size_t>(amps_.size())) {
      throw DimensionMismatch("PureState: dims product " + std::to_string(product(dims_)) +
                              " does not match amplitude count " + std::to_string(amps_.size()));
    }
    if (!amps_.allFinite()) throw Error("PureState: non-finite amplitude");
    if (std::abs(amps_.squaredNorm() - 1.0) > kNormTolerance) {
      throw Error("PureState: not unit norm (|psi|^2 = " + format_double(amps_.squaredNorm()) + ")");
    }
  }

  // Scales to unit norm first; rejects the zero vector.
  static PureState normalized(Vector amplitudes, Dims dims) {
    const double n = amplitudes.norm();
    if (!(n > 0.0)) throw Error("PureState: zero vector");
    return PureState(amplitudes / n, std::move(dims));
  }

  static PureState basis(Dims dims, const std::vector<std::size_t>& digits) {
    if (digits.size() != dims.size()) throw DimensionMismatch("basis: digit count differs from subsystem count");
    std::size_t idx = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (digits[k] >= dims[k]) throw DimensionMismatch("basis: digit out of range");
      idx = idx * dims[k] + digits[k];
    }
    Vector v = Vector::Zero(static_cast<Eigen::Index>(product(dims)));
    v[static_cast<Eigen::Index>(idx)] = 1.0;
    return PureState(std::move(v), std::move(dims));
  }

  const Vector& amplitudes() const { return amps_; }
  const Dims& dims() const { return dims_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  std::size_t subsystems() const { return dims_.size(); }

 private:
  Vector amps_;
  Dims dims_;
};

class DensityOperator {
 public:
  DensityOperator(Matrix m, Dims dims) : m_(std::move(m)), dims_(std::move(dims)) {
    const auto n = static_cast<Eigen::Index>(product(dims_));
    if (m_.rows() != n || m_.cols() != n) throw DimensionMismatch("DensityOperator: matrix size does not match dims");
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
      throw Error("DensityOperator: not Hermitian");
    }
    m_ = (m_ + m_.adjoint()) / 2.0;
    if (std::abs(m_.trace().real() - 1.0) > kNormTolerance) throw Error("DensityOperator: trace is not 1");
    const Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPsdTolerance) throw Error("DensityOperator: not positive semidefinite");
  }

  static DensityOperator projector(const PureState& s) {
    return DensityOperator(s.amplitudes() * s.amplitudes().adjoint(), s.dims());
  }

  const Matrix& matrix() const { return m_; }
  const Dims& dims() const { return dims_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

 private:
  Matrix m_;
  Dims dims_;
};

// ---------------------------------------------------------------------------
// Composition and rearrangement

// Haar-random pure state: i.i.d. complex Gaussian amplitudes via Box-Muller
// on the counter RNG, so the draw is identical on every platform.
inline PureState random_state(Dims dims, CounterRng& rng) {
  const auto n = static_cast<Eigen::Index>(product(dims));
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    v[i] = Complex(r * std::cos(2 * std::numbers::pi * u2), r * std::sin(2 * std::numbers::pi * u2));
  }
  return PureState::normalized(std::move(v), std::move(dims));
}

inline PureState tensor(const PureState& a, const PureState& b) {
  const auto na = a.amplitudes().size();
  const auto nb = b.amplitudes().size();
  Vector v(na * nb);
  for (Eigen::Index i = 0; i < na; ++i) v.segment(i * nb, nb) = a.amplitudes()[i] * b.amplitudes();
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  // Product of unit vectors is unit up to rounding; renormalize that away.
  return PureState::normalized(std::move(v), std::move(dims));
}

namespace detail {

inline std::vector<std::size_t> digits_of(std::size_t index, const Dims& dims) {
  std::vector<std::size_t> d(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    d[k] = index % dims[k];
    index /= dims[k];
  }
  return d;
}

inline std::size_t index_of(const std::vector<std::size_t>& digits, const Dims& dims) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + digits[k];
  return idx;
}

inline void check_permutation(const std::vector<std::size_t>& order, std::size_t n) {
  std::vector<bool> seen(n, false);
  if (order.size() != n) throw DimensionMismatch("permutation has wrong length");
  for (const auto k : order) {
    if (k >= n || seen[k]) throw DimensionMismatch("invalid subsystem permutation");
    seen[k] = true;
  }
}

}  // namespace detail

// Reorders subsystems: position k of the result holds old subsystem order[k].
inline PureState permute(const PureState& s, const std::vector<std::size_t>& order) {
  detail::check_permutation(order, s.subsystems());
  Dims new_dims(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) new_dims[k] = s.dims()[order[k]];
  Vector v(s.amplitudes().size());
  std::vector<std::size_t> nd(order.size());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const auto od = detail::digits_of(i, s.dims());
    for (std::size_t k = 0; k < order.size(); ++k) nd[k] = od[order[k]];
    v[static_cast<Eigen::Index>(detail::index_of(nd, new_dims))] = s.amplitudes()[static_cast<Eigen::Index>(i)];
  }
  return PureState(std::move(v), std::move(new_dims));
}

// Applies `u` to the listed subsystems (in the listed order).
inline PureState apply(const PureState& s, const Matrix& u, const std::vector<std::size_t>& targets) {
  std::vector<std::size_t> order = targets;
  for (std::size_t k = 0; k < s.subsystems(); ++k) {
    if (std::find(targets.begin(), targets.end(), k) == targets.end()) order.push_back(k);
  }
  const PureState front = permute(s, order);
  const std::size_t dt = product(front.dims(), 0, targets.size());
  if (static_cast<std::size_t>(u.rows()) != dt || static_cast<std::size_t>(u.cols()) != dt) {
    throw DimensionMismatch("apply: operator size does not match target subsystems");
  }
  const std::size_t dr = front.dim() / dt;
  // Row-major reshape: row = target index, column = remainder.
  Matrix m(static_cast<Eigen::Index>(dt), static_cast<Eigen::Index>(dr));
  for (std::size_t i = 0; i < dt; ++i) {
    for (std::size_t j = 0; j < dr; ++j) m(i, j) = front.amplitudes()[static_cast<Eigen::Index>(i * dr + j)];
  }
  const Matrix out = u * m;
  Vector v(front.amplitudes().size());
  for (std::size_t i = 0; i < dt; ++i) {
    for (std::size_t j = 0; j < dr; ++j) v[static_cast<Eigen::Index>(i * dr + j)] = out(i, j);
  }
  std::vector<std::size_t> inverse(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) inverse[order[k]] = k;
  return permute(PureState::normalized(std::move(v), front.dims()), inverse);
}

namespace gates {

inline Matrix hadamard() {
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

inline Matrix pauli_x() {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

inline Matrix pauli_z() {
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

// Control is the first target, data the second.
inline Matrix cnot() {
  Matrix c = Matrix::Zero(4, 4);
  c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1;
  return c;
}

// |c><c| (x) (c ? u : I)
inline Matrix controlled(const Matrix& u) {
  const auto d = u.rows();
  Matrix c = Matrix::Identity(2 * d, 2 * d);
  c.bottomRightCorner(d, d) = u;
  return c;
}

}  // namespace gates

// ---------------------------------------------------------------------------
// Reduced states

namespace detail {

inline void check_keep(const std::vector<std::size_t>& keep, std::size_t n) {
  if (keep.empty()) throw DimensionMismatch("partial_trace: keep set is empty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= n) throw DimensionMismatch("partial_trace: subsystem index out of range");
    if (i > 0 && keep[i] <= keep[i - 1]) throw DimensionMismatch("partial_trace: keep must be strictly increasing");
  }
}

}  // namespace detail

// Reduced operator on `keep` (strictly increasing subsystem indices).
inline DensityOperator partial_trace(const PureState& s, std::vector<std::size_t> keep) {
  detail::check_keep(keep, s.subsystems());
  std::vector<std::size_t> order = keep;
  for (std::size_t k = 0; k < s.subsystems(); ++k) {
    if (std::find(keep.begin(), keep.end(), k) == keep.end()) order.push_back(k);
  }
  const PureState front = permute(s, order);
  const std::size_t dk = product(front.dims(), 0, keep.size());
  const std::size_t dr = front.dim() / dk;
  Matrix m(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dr));
  for (std::size_t i = 0; i < dk; ++i) {
    for (std::size_t j = 0; j < dr; ++j) m(i, j) = front.amplitudes()[static_cast<Eigen::Index>(i * dr + j)];
  }
  Matrix rho = m * m.adjoint();
  rho /= rho.trace().real();
  Dims kept(front.dims().begin(), front.dims().begin() + static_cast<std::ptrdiff_t>(keep.size()));
  return DensityOperator(std::move(rho), std::move(kept));
}

inline DensityOperator partial_trace(const DensityOperator& r, std::vector<std::size_t> keep) {
  const Dims& dims = r.dims();
  detail::check_keep(keep, dims.size());
  Dims kept_dims, traced_dims;
  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (std::find(keep.begin(), keep.end(), k) != keep.end()) {
      kept_dims.push_back(dims[k]);
    } else {
      traced.push_back(k);
      traced_dims.push_back(dims[k]);
    }
  }
  const std::size_t dk = product(kept_dims);
  const std::size_t dt = product(traced_dims);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  std::vector<std::size_t> full_i(dims.size()), full_j(dims.size());
  for (std::size_t i = 0; i < dk; ++i) {
    const auto ki = detail::digits_of(i, kept_dims);
    for (std::size_t j = 0; j < dk; ++j) {
      const auto kj = detail::digits_of(j, kept_dims);
      Complex sum = 0.0;
      for (std::size_t t = 0; t < dt; ++t) {
        const auto td = detail::digits_of(t, traced_dims);
        for (std::size_t a = 0; a < keep.size(); ++a) {
          full_i[keep[a]] = ki[a];
          full_j[keep[a]] = kj[a];
        }
        for (std::size_t b = 0; b < traced.size(); ++b) full_i[traced[b]] = full_j[traced[b]] = td[b];
        sum += r.matrix()(static_cast<Eigen::Index>(detail::index_of(full_i, dims)),
                          static_cast<Eigen::Index>(detail::index_of(full_j, dims)));
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sum;
    }
  }
  return DensityOperator(std::move(out), std::move(kept_dims));
}

// ---------------------------------------------------------------------------
// Schmidt decomposition

struct Schmidt {
  std::vector<double> coefficients;  // descending, nonnegative, sum of squares 1
  Matrix a_basis;                    // columns: orthonormal vectors on the first factor
  Matrix b_basis;                    // columns: orthonormal vectors on the second factor
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;

  Vector reconstruct() const {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim_a * dim_b));
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
      const auto a = a_basis.col(static_cast<Eigen::Index>(k));
      const auto b = b_basis.col(static_cast<Eigen::Index>(k));
      for (Eigen::Index i = 0; i < a.size(); ++i) v.segment(i * b.size(), b.size()) += coefficients[k] * a[i] * b;
    }
    return v;
  }
};

namespace detail {

inline void check_split(const PureState& s, std::size_t split) {
  if (split < 1 || split >= s.subsystems()) {
    throw DimensionMismatch("split must leave at least one subsystem on each side");
  }
}

// Coefficient matrix M with psi = sum_ij M_ij |i>|j> for the bipartition.
inline Matrix coefficient_matrix(const PureState& s, std::size_t split) {
  const std::size_t da = product(s.dims(), 0, split);
  const std::size_t db = s.dim() / da;
  Matrix m(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(db));
  for (std::size_t i = 0; i < da; ++i) {
    for (std::size_t j = 0; j < db; ++j) m(i, j) = s.amplitudes()[static_cast<Eigen::Index>(i * db + j)];
  }
  return m;
}

}  // namespace detail

inline Schmidt schmidt_decompose(const PureState& s, std::size_t split) {
  detail::check_split(s, split);
  const Matrix m = detail::coefficient_matrix(s, split);
  const Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Schmidt out;
  out.dim_a = static_cast<std::size_t>(m.rows());
  out.dim_b = static_cast<std::size_t>(m.cols());
  const auto& sv = svd.singularValues();
  out.coefficients.assign(sv.data(), sv.data() + sv.size());
  out.a_basis = svd.matrixU();
  // M = U S V^dagger, so psi = sum_k s_k u_k (x) conj(v_k).
  out.b_basis = svd.matrixV().conjugate();
  return out;
}

// ---------------------------------------------------------------------------
// Distance measures

namespace detail {

inline void check_same(const DensityOperator& r, const DensityOperator& s) {
  if (r.dim() != s.dim()) throw DimensionMismatch("density operators have different dimensions");
}

// Eigenvalues below this are treated as exact zeros when taking roots.
inline constexpr double kRootCutoff = 1e-14;

inline Matrix psd_sqrt(const Matrix& m) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = ev[i] > kRootCutoff ? std::sqrt(ev[i]) : 0.0;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

inline double trace_norm(const Matrix& m) {
  const Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

}  // namespace detail

// (1/2) trace norm of r - s; the optimal single-shot distinguishing advantage.
inline double trace_distance(const DensityOperator& r, const DensityOperator& s) {
  detail::check_same(r, s);
  const Eigen::SelfAdjointEigenSolver<Matrix> es(r.matrix() - s.matrix(), Eigen::EigenvaluesOnly);
  return std::clamp(0.5 * es.eigenvalues().cwiseAbs().sum(), 0.0, 1.0);
}

// Root fidelity: trace norm of sqrt(r) sqrt(s).
inline double fidelity(const DensityOperator& r, const DensityOperator& s) {
  detail::check_same(r, s);
  return std::clamp(detail::trace_norm(detail::psd_sqrt(r.matrix()) * detail::psd_sqrt(s.matrix())), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Cheating attack on a committed pure-state pair

inline constexpr double kEqualReducedTolerance = 1e-10;
inline constexpr double kRotationOverlapTolerance = 1e-9;
inline constexpr double kEnvelopeTolerance = 1e-9;

struct AttackReport {
  double bob_distinguishability = 0.0;  // D: trace distance of Bob's reduced states
  double alice_fidelity = 0.0;          // F: fidelity of the same pair
  double alice_cheat_success = 0.0;     // F^2
  std::optional<Matrix> cheat_rotation;  // on Alice's factor; present only when D is negligible
  std::optional<double> rotation_overlap;
  bool tradeoff_ok = false;  // F >= 1 - D
  bool envelope_ok = false;  // 1 - F <= D <= sqrt(1 - F^2)
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  std::optional<double> oracle_value;
  std::optional<double> oracle_gap;
};

inline double overlap_after(const PureState& psi0, const PureState& psi1, const Matrix& u_a, std::size_t split) {
  // Group Alice's subsystems into one factor for the operator.
  const std::size_t da = product(psi0.dims(), 0, split);
  Dims grouped{da};
  grouped.insert(grouped.end(), psi0.dims().begin() + static_cast<std::ptrdiff_t>(split), psi0.dims().end());
  const PureState g0(psi0.amplitudes(), grouped);
  const PureState moved = apply(g0, u_a, {0});
  return std::norm(psi1.amplitudes().dot(moved.amplitudes()));
}

namespace detail {

// Unitary on Alice's factor taking psi0 to psi1, given equal reduced
// states on Bob's side. Both states are expanded against the Schmidt
// vectors of psi0 on Bob's side; the Alice-side vectors of psi1 obtained
// this way are orthonormal, and the map between the two Alice-side sets is
// completed to a full unitary.
inline Matrix rotation_from_schmidt(const PureState& psi0, const PureState& psi1, std::size_t split) {
  const Schmidt s0 = schmidt_decompose(psi0, split);
  const Matrix m1 = coefficient_matrix(psi1, split);
  const auto da = static_cast<Eigen::Index>(s0.dim_a);
  // Keep Schmidt terms that carry weight; the rest only affects overlap at O(lambda^2).
  Eigen::Index rank = 0;
  while (rank < static_cast<Eigen::Index>(s0.coefficients.size()) && s0.coefficients[rank] > 1e-7) ++rank;
  Matrix a1(da, rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    // (I (x) <b_k|) psi1 = M1 conj(b_k)
    a1.col(k) = m1 * s0.b_basis.col(k).conjugate() / s0.coefficients[static_cast<std::size_t>(k)];
  }
  // Orthonormal completion of a1, phases aligned so the first `rank`
  // columns match a1 as closely as possible.
  Matrix seed(da, rank + da);
  seed << a1, Matrix::Identity(da, da);
  const Eigen::HouseholderQR<Matrix> qr(seed);
  Matrix q1 = qr.householderQ() * Matrix::Identity(da, da);
  for (Eigen::Index k = 0; k < rank; ++k) {
    const Complex d = qr.matrixQR()(k, k);
    if (std::abs(d) > 0) q1.col(k) *= d / std::abs(d);
  }
  return q1 * s0.a_basis.adjoint();
}

}  // namespace detail

inline AttackReport mlc_attack(const PureState& psi0, const PureState& psi1, std::size_t split) {
  if (psi0.dims() != psi1.dims()) throw DimensionMismatch("mlc_attack: states have different dims");
  detail::check_split(psi0, split);
  std::vector<std::size_t> bob(psi0.subsystems() - split);
  std::iota(bob.begin(), bob.end(), split);
  const DensityOperator rho0 = partial_trace(psi0, bob);
  const DensityOperator rho1 = partial_trace(psi1, bob);

  AttackReport rep;
  rep.dim_a = product(psi0.dims(), 0, split);
  rep.dim_b = product(psi0.dims(), split);
  rep.bob_distinguishability = trace_distance(rho0, rho1);
  rep.alice_fidelity = fidelity(rho0, rho1);
  rep.alice_cheat_success = rep.alice_fidelity * rep.alice_fidelity;
  const double d = rep.bob_distinguishability;
  const double f = rep.alice_fidelity;
  rep.tradeoff_ok = f >= 1.0 - d - kEnvelopeTolerance;
  rep.envelope_ok = 1.0 - f <= d + kEnvelopeTolerance && d <= std::sqrt(std::max(0.0, 1.0 - f * f)) + kEnvelopeTolerance;

  if (d <= kEqualReducedTolerance) {
    Matrix u = detail::rotation_from_schmidt(psi0, psi1, split);
    const double ov = overlap_after(psi0, psi1, u, split);
    if (ov < 1.0 - kRotationOverlapTolerance) {
      throw Error("mlc_attack: constructed rotation reaches overlap " + format_double(ov));
    }
    rep.cheat_rotation = std::move(u);
    rep.rotation_overlap = ov;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// JSON

inline ojson to_json(const Matrix& m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(ojson::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ojson to_json(const PureState& s) {
  ojson j;
  j["dims"] = s.dims();
  ojson amps = ojson::array();
  for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) {
    amps.push_back(ojson::array({s.amplitudes()[i].real(), s.amplitudes()[i].imag()}));
  }
  j["amplitudes"] = std::move(amps);
  return j;
}

// Amplitudes are [re, im] pairs. Vectors within 1e-6 of unit norm are
// renormalized so hand-written files with rounded decimals load.
inline PureState state_from_json(const nlohmann::json& j) {
  require_known_keys(j, {"dims", "amplitudes"}, "state");
  try {
    const Dims dims = j.at("dims").get<Dims>();
    const auto& amps = j.at("amplitudes");
    Vector v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) {
      const auto& p = amps[i];
      if (!p.is_array() || p.size() != 2) throw ConfigError("state: amplitudes must be [re, im] pairs");
      v[static_cast<Eigen::Index>(i)] = Complex(p[0].get<double>(), p[1].get<double>());
    }
    if (product(dims) != static_cast<std::size_t>(v.size())) throw ConfigError("state: dims do not match amplitudes");
    if (std::abs(v.norm() - 1.0) > 1e-6) throw ConfigError("state: amplitudes are not unit norm");
    return PureState::normalized(std::move(v), dims);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("state: ") + e.what());
  }
}

inline ojson to_json(const AttackReport& r) {
  ojson j;
  j["bob_distinguishability"] = r.bob_distinguishability;
  j["alice_fidelity"] = r.alice_fidelity;
  j["alice_cheat_success"] = r.alice_cheat_success;
  j["tradeoff_ok"] = r.tradeoff_ok;
  j["envelope_ok"] = r.envelope_ok;
  j["dim_a"] = r.dim_a;
  j["dim_b"] = r.dim_b;
  j["cheat_rotation"] = r.cheat_rotation ? to_json(*r.cheat_rotation) : ojson(nullptr);
  j["rotation_overlap"] = r.rotation_overlap ? ojson(*r.rotation_overlap) : ojson(nullptr);
  if (r.oracle_value) {
    j["oracle_value"] = *r.oracle_value;
    j["oracle_gap"] = *r.oracle_gap;
  }
  return j;
}

}  // namespace relcoin::quantum
