#include "spinchain/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "spinchain/errors.hpp"
#include "spinchain/logical_code.hpp"

namespace spinchain {

Propagator::Propagator(const ChainSpec& spec, int max_n) : spec_(spec) {
  spec_.validate();
  if (spec_.n > max_n)
    throw budget_error("propagator capped at n = " + std::to_string(max_n));
  blocks_.reserve(static_cast<std::size_t>(spec_.n) + 1);
  for (int k = 0; k <= spec_.n; ++k) {
    SectorBlock block;
    block.basis = sector_basis(spec_.n, k);
    Eigen::MatrixXd h = hamiltonian_sector(spec_, k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    if (eig.info() != Eigen::Success)
      throw std::runtime_error("eigendecomposition failed");
    double resid = (h * eig.eigenvectors() -
                    eig.eigenvectors() * eig.eigenvalues().asDiagonal())
                       .norm();
    if (resid > 1e-10 * std::max(1.0, h.norm()))
      throw std::runtime_error("eigendecomposition residual too large");
    block.evals = eig.eigenvalues();
    block.evecs = eig.eigenvectors();
    blocks_.push_back(std::move(block));
  }
}

Propagator make_propagator(const ChainSpec& spec, int max_n) {
  return Propagator(spec, max_n);
}

std::vector<double> Propagator::eigenvalues() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(dim()));
  for (const auto& block : blocks_)
    for (long i = 0; i < block.evals.size(); ++i)
      out.push_back(block.evals(i));
  return out;
}

Eigen::VectorXcd Propagator::evolve_vector(const Eigen::VectorXcd& psi,
                                           double t) const {
  if (psi.size() != dim())
    throw std::invalid_argument("state dimension mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (const auto& block : blocks_) {
    const long bdim = static_cast<long>(block.basis.size());
    Eigen::VectorXd re(bdim), im(bdim);
    for (long i = 0; i < bdim; ++i) {
      const auto& amp = psi(block.basis[static_cast<std::size_t>(i)]);
      re(i) = amp.real();
      im(i) = amp.imag();
    }
    Eigen::VectorXd mre = block.evecs.transpose() * re;
    Eigen::VectorXd mim = block.evecs.transpose() * im;
    for (long i = 0; i < bdim; ++i) {
      const double c = std::cos(block.evals(i) * t);
      const double s = std::sin(block.evals(i) * t);
      // multiply by exp(-i E t)
      const double r2 = c * mre(i) + s * mim(i);
      const double i2 = c * mim(i) - s * mre(i);
      mre(i) = r2;
      mim(i) = i2;
    }
    re = block.evecs * mre;
    im = block.evecs * mim;
    for (long i = 0; i < bdim; ++i)
      out(block.basis[static_cast<std::size_t>(i)]) =
          std::complex<double>(re(i), im(i));
  }
  return out;
}

Eigen::MatrixXcd Propagator::unitary(double t) const {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim(), dim());
  const std::complex<double> minus_i(0.0, -1.0);
  for (const auto& block : blocks_) {
    const long bdim = static_cast<long>(block.basis.size());
    Eigen::VectorXcd phases(bdim);
    for (long i = 0; i < bdim; ++i)
      phases(i) = std::exp(minus_i * block.evals(i) * t);
    Eigen::MatrixXcd v = block.evecs.cast<std::complex<double>>();
    Eigen::MatrixXcd ublock = v * phases.asDiagonal() * v.transpose();
    for (long r = 0; r < bdim; ++r)
      for (long c = 0; c < bdim; ++c)
        u(block.basis[static_cast<std::size_t>(r)],
          block.basis[static_cast<std::size_t>(c)]) = ublock(r, c);
  }
  return u;
}

QuantumState evolve(const QuantumState& state, const Propagator& prop,
                    double t) {
  if (state.n_sites() != prop.n_sites())
    throw std::invalid_argument("state dimension mismatch");
  if (state.is_pure())
    return QuantumState::pure(state.n_sites(),
                              prop.evolve_vector(state.vector(), t));
  Eigen::MatrixXcd u = prop.unitary(t);
  return QuantumState::mixed(state.n_sites(),
                             u * state.matrix() * u.adjoint());
}

Eigen::MatrixXcd heisenberg_at(const Eigen::MatrixXcd& op,
                               const Propagator& prop, double t) {
  if (op.rows() != prop.dim() || op.cols() != prop.dim())
    throw std::invalid_argument("operator dimension mismatch");
  Eigen::MatrixXcd u = prop.unitary(t);
  return u.adjoint() * op * u;
}

Eigen::MatrixXcd embed_sigma(int n, int site, char letter) {
  if (site < 1 || site > n) throw std::invalid_argument("site out of range");
  const long dim = 1L << n;
  const long bit = 1L << (n - site);
  const std::complex<double> i(0.0, 1.0);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (long col = 0; col < dim; ++col) {
    bool up = col & bit;
    switch (letter) {
      case 'I': m(col, col) += 1.0; break;
      case 'X': m(col ^ bit, col) += 1.0; break;
      case 'Y': m(col ^ bit, col) += up ? -i : i; break;
      case 'Z': m(col, col) += up ? -1.0 : 1.0; break;
      default: throw std::invalid_argument("bad sigma letter");
    }
  }
  return m;
}

Eigen::MatrixXcd embed_pair(int n, int site, const Eigen::Matrix4cd& op) {
  if (site < 1 || site + 1 > n)
    throw std::invalid_argument("pair site out of range");
  const long left = 1L << (site - 1);
  const long right = 1L << (n - site - 1);
  const long dim = 1L << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (long l = 0; l < left; ++l)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        if (op(a, b) == std::complex<double>(0.0, 0.0)) continue;
        long row_base = (l * 4 + a) * right;
        long col_base = (l * 4 + b) * right;
        for (long r = 0; r < right; ++r)
          m(row_base + r, col_base + r) += op(a, b);
      }
  return m;
}

MirrorReport verify_mirror_relations(const ChainSpec& spec, double tol) {
  spec.validate();
  const int n = spec.n;
  MirrorReport report;
  report.n = n;
  report.branch = (n % 2 == 0) ? "even" : "odd";
  report.tolerance = tol;

  Propagator prop(spec);
  const double tstar = spec.transfer_time();
  Eigen::MatrixXcd u = prop.unitary(tstar);

  auto check = [&](const std::string& name, const Eigen::MatrixXcd& lhs,
                   const Eigen::MatrixXcd& rhs) {
    MirrorRelation rel;
    rel.name = name;
    rel.residual = (u.adjoint() * lhs * u - rhs).norm();
    rel.pass = rel.residual < tol;
    report.relations.push_back(rel);
  };

  // Z_i(t*) = Z_{n+1-i}, all sites.
  for (int i = 1; i <= n; ++i) {
    check("Z" + std::to_string(i) + " -> Z" + std::to_string(n + 1 - i),
          embed_sigma(n, i, 'Z'), embed_sigma(n, n + 1 - i, 'Z'));
  }

  // Parity-split relations for mirrored pairs.
  for (int i = 1; 2 * i < n + 1; ++i) {
    const int m = n + 1 - i;
    Eigen::MatrixXcd xx = embed_sigma(n, i, 'X') * embed_sigma(n, m, 'X');
    Eigen::MatrixXcd xy = embed_sigma(n, i, 'X') * embed_sigma(n, m, 'Y');
    std::string pair = std::to_string(i) + "," + std::to_string(m);
    if (n % 2 == 0) {
      check("X" + pair + " (even)", xx, xx);
      check("XY" + pair + " (even)",
            xy, embed_sigma(n, i, 'Y') * embed_sigma(n, m, 'X'));
    } else {
      check("XX" + pair + " (odd)", xx,
            embed_sigma(n, i, 'Y') * embed_sigma(n, m, 'Y'));
      check("XY" + pair + " (odd)", xy, -xy);
    }
  }

  // Receiver-frame relations: sender code operators at (1,2) evolve onto
  // the receiver set at (n-1, n).
  if (n >= 3) {
    CodeOperators snd = logical_operators(CodeFrame::Sender);
    CodeOperators rcv = logical_operators(CodeFrame::Receiver);
    check("P code", embed_pair(n, 1, snd.P), embed_pair(n, n - 1, rcv.P));
    check("Lx code", embed_pair(n, 1, snd.Lx), embed_pair(n, n - 1, rcv.Lx));
    check("Ly code", embed_pair(n, 1, snd.Ly), embed_pair(n, n - 1, rcv.Ly));
    check("Lz code", embed_pair(n, 1, snd.Lz), embed_pair(n, n - 1, rcv.Lz));
  }

  report.all_pass = true;
  for (const auto& rel : report.relations)
    if (!rel.pass) report.all_pass = false;
  return report;
}

nlohmann::json to_json(const MirrorReport& report) {
  nlohmann::json rels = nlohmann::json::array();
  for (const auto& rel : report.relations)
    rels.push_back({{"name", rel.name},
                    {"residual", rel.residual},
                    {"pass", rel.pass}});
  return nlohmann::json{{"n", report.n},
                        {"branch", report.branch},
                        {"tolerance", report.tolerance},
                        {"relations", rels},
                        {"all_pass", report.all_pass}};
}

std::complex<double> one_excitation_transfer_amplitude(const ChainSpec& spec) {
  spec.validate();
  Eigen::MatrixXd h = hamiltonian_sector(spec, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  const double tstar = spec.transfer_time();
  const std::complex<double> minus_i(0.0, -1.0);
  // Basis order in the k=1 sector is ascending mask, i.e. site n first and
  // site 1 last.
  const long from = spec.n - 1, to = 0;
  std::complex<double> amp(0.0, 0.0);
  for (int m = 0; m < spec.n; ++m)
    amp += eig.eigenvectors()(to, m) *
           std::exp(minus_i * eig.eigenvalues()(m) * tstar) *
           eig.eigenvectors()(from, m);
  return amp;
}

}  // namespace spinchain
