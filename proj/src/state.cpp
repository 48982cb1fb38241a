#include "spinchain/state.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace spinchain {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kPsdTol = 1e-10;

int bit_pos(int n, int site) {
  if (site < 1 || site > n) throw std::invalid_argument("site out of range");
  return n - site;
}

}  // namespace

QuantumState QuantumState::pure(int n, Eigen::VectorXcd psi) {
  if (psi.size() != (1L << n))
    throw std::invalid_argument("state vector dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > kNormTol)
    throw std::invalid_argument("state vector is not normalized");
  QuantumState s;
  s.n_ = n;
  s.pure_ = true;
  s.psi_ = std::move(psi);
  return s;
}

QuantumState QuantumState::mixed(int n, Eigen::MatrixXcd rho) {
  if (rho.rows() != (1L << n) || rho.cols() != rho.rows())
    throw std::invalid_argument("density matrix dimension mismatch");
  if (std::abs(rho.trace().real() - 1.0) > kNormTol ||
      std::abs(rho.trace().imag()) > kNormTol)
    throw std::invalid_argument("density matrix trace is not 1");
  if ((rho - rho.adjoint()).norm() > 1e-10)
    throw std::invalid_argument("density matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho);
  if (eig.eigenvalues().minCoeff() < -kPsdTol)
    throw std::invalid_argument("density matrix is not positive");
  QuantumState s;
  s.n_ = n;
  s.pure_ = false;
  s.rho_ = std::move(rho);
  return s;
}

QuantumState QuantumState::basis_state(int n, long index) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(1L << n);
  psi(index) = 1.0;
  return pure(n, std::move(psi));
}

const Eigen::VectorXcd& QuantumState::vector() const {
  if (!pure_) throw std::logic_error("mixed state has no state vector");
  return psi_;
}

const Eigen::MatrixXcd& QuantumState::matrix() const {
  if (pure_) throw std::logic_error("pure state stored as vector");
  return rho_;
}

Eigen::MatrixXcd QuantumState::density() const {
  if (pure_) return psi_ * psi_.adjoint();
  return rho_;
}

std::vector<std::pair<double, Eigen::VectorXcd>> QuantumState::ensemble(
    double cutoff) const {
  std::vector<std::pair<double, Eigen::VectorXcd>> out;
  if (pure_) {
    out.emplace_back(1.0, psi_);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho_);
  for (long i = 0; i < eig.eigenvalues().size(); ++i) {
    double w = eig.eigenvalues()(i);
    if (w > cutoff) out.emplace_back(w, eig.eigenvectors().col(i));
  }
  return out;
}

QuantumState QuantumState::tensor(const QuantumState& a,
                                  const QuantumState& b) {
  const int n = a.n_ + b.n_;
  if (a.pure_ && b.pure_) {
    Eigen::VectorXcd psi(a.dim() * b.dim());
    for (long i = 0; i < a.dim(); ++i)
      psi.segment(i * b.dim(), b.dim()) = a.psi_(i) * b.psi_;
    return pure(n, std::move(psi));
  }
  Eigen::MatrixXcd ra = a.density(), rb = b.density();
  Eigen::MatrixXcd rho(ra.rows() * rb.rows(), ra.cols() * rb.cols());
  for (long i = 0; i < ra.rows(); ++i)
    for (long j = 0; j < ra.cols(); ++j)
      rho.block(i * rb.rows(), j * rb.cols(), rb.rows(), rb.cols()) =
          ra(i, j) * rb;
  return mixed(n, std::move(rho));
}

Eigen::MatrixXcd partial_trace(const QuantumState& state,
                               const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("keep set must be nonempty");
  const int n = state.n_sites();
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 1 || keep[i] > n)
      throw std::invalid_argument("kept site out of range");
    if (i > 0 && keep[i - 1] >= keep[i])
      throw std::invalid_argument("keep sites must be strictly ascending");
  }
  const int m = static_cast<int>(keep.size());
  const long kept_dim = 1L << m;

  // Bit masks to scatter a kept-configuration into a full basis index.
  std::vector<long> kept_bits(keep.size());
  for (int i = 0; i < m; ++i)
    kept_bits[static_cast<std::size_t>(i)] = 1L << bit_pos(n, keep[i]);
  long kept_mask = 0;
  for (long bitv : kept_bits) kept_mask |= bitv;

  auto kept_config = [&](long full) {
    long cfg = 0;
    for (int i = 0; i < m; ++i)
      if (full & kept_bits[static_cast<std::size_t>(i)])
        cfg |= 1L << (m - 1 - i);
    return cfg;
  };
  auto with_config = [&](long full, long cfg) {
    long out = full & ~kept_mask;
    for (int i = 0; i < m; ++i)
      if (cfg & (1L << (m - 1 - i)))
        out |= kept_bits[static_cast<std::size_t>(i)];
    return out;
  };

  Eigen::MatrixXcd red = Eigen::MatrixXcd::Zero(kept_dim, kept_dim);
  if (state.is_pure()) {
    const auto& psi = state.vector();
    for (long full = 0; full < state.dim(); ++full) {
      if (psi(full) == std::complex<double>(0.0, 0.0)) continue;
      long row = kept_config(full);
      for (long col = 0; col < kept_dim; ++col) {
        long other = with_config(full, col);
        red(row, col) += psi(full) * std::conj(psi(other));
      }
    }
  } else {
    const auto& rho = state.matrix();
    for (long full = 0; full < state.dim(); ++full) {
      long row = kept_config(full);
      for (long col = 0; col < kept_dim; ++col)
        red(row, col) += rho(full, with_config(full, col));
    }
  }
  return red;
}

Eigen::Matrix2cd spin_observable(SpinAxis axis) {
  Eigen::Matrix2cd m;
  const std::complex<double> i(0.0, 1.0);
  switch (axis) {
    case SpinAxis::X: m << 0, 0.5, 0.5, 0; break;
    case SpinAxis::Y: m << 0, -0.5 * i, 0.5 * i, 0; break;
    case SpinAxis::Z: m << 0.5, 0, 0, -0.5; break;
  }
  return m;
}

namespace {

// Projector on the +-1/2 eigenvector of a one-site observable, embedded at
// the given site, applied in place to a vector or matrix via bit walking.
Eigen::Matrix2cd branch_projector(const Eigen::Matrix2cd& observable,
                                  int outcome_sign) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(observable);
  if (std::abs(eig.eigenvalues()(0) + 0.5) > 1e-9 ||
      std::abs(eig.eigenvalues()(1) - 0.5) > 1e-9)
    throw std::invalid_argument("observable must have a +-1/2 spectrum");
  Eigen::Vector2cd v = eig.eigenvectors().col(outcome_sign > 0 ? 1 : 0);
  return v * v.adjoint();
}

// Applies a 2x2 operator at one site of a full-register vector.
Eigen::VectorXcd apply_site_op(const Eigen::VectorXcd& psi, int n,
                               const Eigen::Matrix2cd& op, int site) {
  const long bit = 1L << bit_pos(n, site);
  Eigen::VectorXcd out(psi.size());
  for (long idx = 0; idx < psi.size(); ++idx) {
    long base = idx & ~bit;
    int b = (idx & bit) ? 1 : 0;
    out(idx) = op(b, 0) * psi(base) + op(b, 1) * psi(base | bit);
  }
  return out;
}

Eigen::MatrixXcd site_op_matrix(int n, const Eigen::Matrix2cd& op, int site) {
  const long dim = 1L << n;
  const long bit = 1L << bit_pos(n, site);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (long col = 0; col < dim; ++col) {
    long base = col & ~bit;
    int b = (col & bit) ? 1 : 0;
    out(base, col) += op(0, b);
    out(base | bit, col) += op(1, b);
  }
  return out;
}

}  // namespace

MeasurementResult measure_site(const QuantumState& state,
                               const Eigen::Matrix2cd& observable, int site,
                               int outcome_sign) {
  Eigen::Matrix2cd proj = branch_projector(observable, outcome_sign);
  const double outcome = outcome_sign > 0 ? 0.5 : -0.5;
  if (state.is_pure()) {
    Eigen::VectorXcd projected =
        apply_site_op(state.vector(), state.n_sites(), proj, site);
    double p = projected.squaredNorm();
    if (p < 1e-15)
      throw std::runtime_error("forced measurement branch has probability 0");
    return {outcome, p,
            QuantumState::pure(state.n_sites(), projected / std::sqrt(p))};
  }
  Eigen::MatrixXcd pm = site_op_matrix(state.n_sites(), proj, site);
  Eigen::MatrixXcd collapsed = pm * state.matrix() * pm.adjoint();
  double p = collapsed.trace().real();
  if (p < 1e-15)
    throw std::runtime_error("forced measurement branch has probability 0");
  return {outcome, p, QuantumState::mixed(state.n_sites(), collapsed / p)};
}

MeasurementResult measure_site(const QuantumState& state, SpinAxis axis,
                               int site, int outcome_sign) {
  return measure_site(state, spin_observable(axis), site, outcome_sign);
}

MeasurementResult measure_site(const QuantumState& state, SpinAxis axis,
                               int site, std::mt19937_64& rng) {
  MeasurementResult plus = measure_site(state, axis, site, +1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < plus.probability) return plus;
  return measure_site(state, axis, site, -1);
}

QuantumState apply_single_qubit(const QuantumState& state,
                                const Eigen::Matrix2cd& u, int site) {
  if (state.is_pure()) {
    return QuantumState::pure(
        state.n_sites(), apply_site_op(state.vector(), state.n_sites(), u, site));
  }
  Eigen::MatrixXcd um = site_op_matrix(state.n_sites(), u, site);
  return QuantumState::mixed(state.n_sites(),
                             um * state.matrix() * um.adjoint());
}

Eigen::VectorXcd haar_random_vector(long dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (long i = 0; i < dim; ++i) v(i) = std::complex<double>(g(rng), g(rng));
  v /= v.norm();
  return v;
}

Eigen::MatrixXcd random_density_matrix(long dim, int rank,
                                       std::uint64_t seed) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  rank = static_cast<int>(std::min<long>(rank, dim));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd gmat(dim, rank);
  for (long i = 0; i < dim; ++i)
    for (int j = 0; j < rank; ++j)
      gmat(i, j) = std::complex<double>(g(rng), g(rng));
  Eigen::MatrixXcd rho = gmat * gmat.adjoint();
  rho /= rho.trace().real();
  return rho;
}

nlohmann::json to_json(const QuantumState& state) {
  nlohmann::json js;
  js["format"] = "spinchain-state";
  js["n"] = state.n_sites();
  js["kind"] = state.is_pure() ? "pure" : "mixed";
  std::vector<std::vector<double>> data;
  if (state.is_pure()) {
    for (long i = 0; i < state.dim(); ++i)
      data.push_back({state.vector()(i).real(), state.vector()(i).imag()});
  } else {
    const auto& rho = state.matrix();
    for (long r = 0; r < rho.rows(); ++r)
      for (long c = 0; c < rho.cols(); ++c)
        data.push_back({rho(r, c).real(), rho(r, c).imag()});
  }
  js["data"] = data;
  return js;
}

QuantumState state_from_json(const nlohmann::json& js) {
  int n = js.at("n").get<int>();
  std::string kind = js.at("kind").get<std::string>();
  auto data = js.at("data").get<std::vector<std::vector<double>>>();
  const long dim = 1L << n;
  if (kind == "pure") {
    if (static_cast<long>(data.size()) != dim)
      throw std::invalid_argument("state data size mismatch");
    Eigen::VectorXcd psi(dim);
    for (long i = 0; i < dim; ++i)
      psi(i) = std::complex<double>(data[static_cast<std::size_t>(i)][0],
                                    data[static_cast<std::size_t>(i)][1]);
    return QuantumState::pure(n, std::move(psi));
  }
  if (static_cast<long>(data.size()) != dim * dim)
    throw std::invalid_argument("state data size mismatch");
  Eigen::MatrixXcd rho(dim, dim);
  long k = 0;
  for (long r = 0; r < dim; ++r)
    for (long c = 0; c < dim; ++c, ++k)
      rho(r, c) = std::complex<double>(data[static_cast<std::size_t>(k)][0],
                                       data[static_cast<std::size_t>(k)][1]);
  return QuantumState::mixed(n, std::move(rho));
}

}  // namespace spinchain
