#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <string>
#include <vector>

namespace spinchain {

enum class CouplingProfile { Engineered, Custom };

// J_i = j * sqrt(i (n - i)), the profile that makes the one-excitation
// dynamics a collective spin rotation.
std::vector<double> couplings_engineered(int n, double j);

struct ChainSpec {
  int n = 4;
  double j = 1.0;  // global coupling, energy units with hbar = 1
  double b = 0.0;  // magnetic field
  CouplingProfile profile = CouplingProfile::Engineered;
  std::vector<double> custom;  // length n-1 when profile == Custom

  std::vector<double> couplings() const;
  bool mirror_symmetric(double tol = 1e-12) const;
  double transfer_time() const;  // pi / j

  void validate() const;
};

ChainSpec chain_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ChainSpec& spec);

// Dense 2^n x 2^n Hamiltonian, halved spin convention:
//   H = sum_i J_i/4 (sx sx + sy sy) + b/2 sum_i sz.
// Site 1 is the most significant bit; basis index 0 is all-down.
Eigen::MatrixXcd hamiltonian_dense(const ChainSpec& spec, int max_n = 14);

// Basis masks with exactly k up-spins, ascending.
std::vector<long> sector_basis(int n, int k);

// Restriction of H to the k-excitation sector, in sector_basis order.
Eigen::MatrixXd hamiltonian_sector(const ChainSpec& spec, int k);

struct SpectrumReport {
  bool applicable = false;  // false when couplings are not mirror symmetric
  std::vector<double> eigenvalues;  // one-excitation, ascending
  std::vector<int> parities;        // mirror parity of each eigenvector, +-1
  double fit_offset = 0.0;          // least-squares E_k ~ offset + spacing*k
  double fit_spacing = 0.0;
  double max_fit_residual = 0.0;
  double spacing_min = 0.0;
  double spacing_max = 0.0;
  bool parity_alternates = false;
  bool spmc_pass = false;
  double tolerance = 0.0;
};

// Checks the spectrum parity matching condition on the one-excitation
// sector: eigenvalues affine-map to integers whose parity matches the
// mirror parity of the eigenvector. Reports not-applicable (spmc_pass
// false) for non-mirror-symmetric couplings instead of failing silently.
SpectrumReport spmc_check(const ChainSpec& spec, double tol = 1e-8);

nlohmann::json to_json(const SpectrumReport& report);

}  // namespace spinchain
