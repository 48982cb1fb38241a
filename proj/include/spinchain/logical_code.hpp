#pragma once

#include <Eigen/Dense>
#include <json.hpp>

namespace spinchain {

struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;

  double norm() const;
  bool physical(double tol = 1e-12) const { return norm() <= 1.0 + tol; }
};

nlohmann::json to_json(const BlochVector& r);
BlochVector bloch_from_json(const nlohmann::json& js);

// The two-qubit code lives in span{|01>, |10>} of a site pair. Sender frame
// is the encoding pair (sites 1,2); the receiver frame is its site-swapped
// image on the ascending pair (n-1, n), which is what free evolution to t*
// maps the sender operators onto.
enum class CodeFrame { Sender, Receiver };

// Logical operator set in sigma units, acting on the pair in ascending site
// order. P projects onto the code subspace; Lx, Ly, Lz act as the logical
// Pauli triple on it: Lk^2 = P, Lx Ly = i Lz (cyclic) on the subspace.
struct CodeOperators {
  Eigen::Matrix4cd P, Lx, Ly, Lz;
};

CodeOperators logical_operators(CodeFrame frame);

// rho = (P + r_x Lx + r_y Ly + r_z Lz)/2 in the sender frame: unit trace,
// positive, supported on the code subspace.
Eigen::Matrix4cd encode(const BlochVector& r);

struct DecodedBloch {
  BlochVector r;
  double leakage = 0.0;  // weight outside the code subspace
};

// r_k = Tr[rho L_k] in the requested frame; no leakage check.
DecodedBloch decode_lenient(const Eigen::Matrix4cd& rho2, CodeFrame frame);

// Throws leakage_error when more than tol of the weight lies outside the
// code subspace.
BlochVector decode(const Eigen::Matrix4cd& rho2, CodeFrame frame,
                   double tol = 1e-6);

// Jozsa fidelity of two qubit states given as Bloch vectors.
double qubit_fidelity(const BlochVector& a, const BlochVector& b);

// Single-qubit helpers for the one-site protocols.
Eigen::Matrix2cd qubit_density(const BlochVector& r);
BlochVector qubit_bloch(const Eigen::Matrix2cd& rho);

}  // namespace spinchain
