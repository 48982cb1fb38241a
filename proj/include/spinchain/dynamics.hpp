#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <string>
#include <vector>

#include "spinchain/chain.hpp"
#include "spinchain/state.hpp"

namespace spinchain {

// Exact propagator from eigendecomposition. The Hamiltonian conserves total
// magnetization, so the decomposition is stored per excitation sector; this
// keeps the eigensolves small and the spectra exact.
class Propagator {
 public:
  explicit Propagator(const ChainSpec& spec, int max_n = 14);

  const ChainSpec& spec() const { return spec_; }
  int n_sites() const { return spec_.n; }
  long dim() const { return 1L << spec_.n; }

  // All 2^n eigenvalues (sector order, not sorted).
  std::vector<double> eigenvalues() const;

  Eigen::VectorXcd evolve_vector(const Eigen::VectorXcd& psi, double t) const;
  Eigen::MatrixXcd unitary(double t) const;

 private:
  struct SectorBlock {
    std::vector<long> basis;
    Eigen::VectorXd evals;
    Eigen::MatrixXd evecs;
  };
  ChainSpec spec_;
  std::vector<SectorBlock> blocks_;
};

Propagator make_propagator(const ChainSpec& spec, int max_n = 14);

QuantumState evolve(const QuantumState& state, const Propagator& prop,
                    double t);

// Heisenberg picture: U(t)^dag O U(t).
Eigen::MatrixXcd heisenberg_at(const Eigen::MatrixXcd& op,
                               const Propagator& prop, double t);

// sigma letter embedded at one site of an n-site register.
Eigen::MatrixXcd embed_sigma(int n, int site, char letter);

// Two-site operator (4x4) embedded at adjacent sites (site, site+1).
Eigen::MatrixXcd embed_pair(int n, int site, const Eigen::Matrix4cd& op);

struct MirrorRelation {
  std::string name;
  double residual = 0.0;
  bool pass = false;
};

struct MirrorReport {
  int n = 0;
  std::string branch;  // "even" or "odd"
  double tolerance = 0.0;
  std::vector<MirrorRelation> relations;
  bool all_pass = false;
};

// Checks the transfer-time mirror identities: Z_i -> Z_{n+1-i} for all i,
// the parity-split relations for mirrored x/y pairs, and the code-frame
// relations (sender logical operators evolve onto receiver ones).
MirrorReport verify_mirror_relations(const ChainSpec& spec, double tol = 1e-9);

nlohmann::json to_json(const MirrorReport& report);

// Amplitude <e_n| U(t*) |e_1> in the one-excitation sector: the transfer
// phase of a single excitation (modulus 1 for perfect-transfer chains).
std::complex<double> one_excitation_transfer_amplitude(const ChainSpec& spec);

}  // namespace spinchain
