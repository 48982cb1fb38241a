#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace spinchain {

// Pure state vector or density matrix over n qubits. Site 1 is the most
// significant bit; basis index 0 is all spins down.
class QuantumState {
 public:
  static QuantumState pure(int n, Eigen::VectorXcd psi);
  static QuantumState mixed(int n, Eigen::MatrixXcd rho);
  static QuantumState basis_state(int n, long index);
  static QuantumState all_down(int n) { return basis_state(n, 0); }

  int n_sites() const { return n_; }
  long dim() const { return 1L << n_; }
  bool is_pure() const { return pure_; }

  const Eigen::VectorXcd& vector() const;
  const Eigen::MatrixXcd& matrix() const;
  Eigen::MatrixXcd density() const;  // psi psi^dag for pure states

  // Spectral decomposition into weighted pure components (weights > cutoff).
  std::vector<std::pair<double, Eigen::VectorXcd>> ensemble(
      double cutoff = 1e-14) const;

  static QuantumState tensor(const QuantumState& a, const QuantumState& b);

 private:
  QuantumState() = default;
  int n_ = 0;
  bool pure_ = true;
  Eigen::VectorXcd psi_;
  Eigen::MatrixXcd rho_;
};

// Reduced density matrix on the kept sites (ascending site order).
Eigen::MatrixXcd partial_trace(const QuantumState& state,
                               const std::vector<int>& keep);

enum class SpinAxis { X, Y, Z };

// Halved spin component along the axis: eigenvalues +-1/2.
Eigen::Matrix2cd spin_observable(SpinAxis axis);

struct MeasurementResult {
  double outcome;      // +-1/2
  double probability;  // of this outcome in the pre-measurement state
  QuantumState post;   // collapsed, renormalized
};

// Projective measurement of a one-site spin component with a forced branch
// (outcome_sign = +-1). Throws if the branch has zero probability.
MeasurementResult measure_site(const QuantumState& state, SpinAxis axis,
                               int site, int outcome_sign);

// Sampling variant; the caller owns the generator (no hidden global RNG).
MeasurementResult measure_site(const QuantumState& state, SpinAxis axis,
                               int site, std::mt19937_64& rng);

// Measurement with an arbitrary one-site Hermitian observable whose spectrum
// must be a nondegenerate +-1/2 pair.
MeasurementResult measure_site(const QuantumState& state,
                               const Eigen::Matrix2cd& observable, int site,
                               int outcome_sign);

// Applies a one-site unitary.
QuantumState apply_single_qubit(const QuantumState& state,
                                const Eigen::Matrix2cd& u, int site);

Eigen::VectorXcd haar_random_vector(long dim, std::uint64_t seed);

// Wishart-type random density matrix G G^dag / tr with the given rank.
Eigen::MatrixXcd random_density_matrix(long dim, int rank, std::uint64_t seed);

nlohmann::json to_json(const QuantumState& state);
QuantumState state_from_json(const nlohmann::json& js);

}  // namespace spinchain
