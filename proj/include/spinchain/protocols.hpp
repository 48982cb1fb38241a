#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinchain/chain.hpp"
#include "spinchain/dynamics.hpp"
#include "spinchain/logical_code.hpp"
#include "spinchain/state.hpp"

namespace spinchain {

// How the wire (the sites the sender does not touch) is initialized.
struct WireStateSpec {
  enum class Kind { AllDown, RandomPure, RandomMixed, Explicit };
  Kind kind = Kind::AllDown;
  std::uint64_t seed = 0;
  int rank = 4;  // for RandomMixed
  std::optional<QuantumState> explicit_state;

  static WireStateSpec all_down() { return {}; }
  static WireStateSpec random_pure(std::uint64_t seed);
  static WireStateSpec random_mixed(std::uint64_t seed, int rank = 4);
  static WireStateSpec explicit_state_of(QuantumState state);

  QuantumState resolve(int n_wire_sites) const;
  std::string descriptor() const;
};

struct DiFrancoBranch {
  int j = 0, k = 0;  // outcome signs
  double probability = 0.0;
  double fidelity = 0.0;
  BlochVector r_out;
};

struct TransferReport {
  std::string protocol;
  ChainSpec spec;
  std::string wire;
  BlochVector r_in, r_out;
  double fidelity = 0.0;
  double leakage = 0.0;
  double t = 0.0;
  int classical_bits = 0;
  int measurements = 0;
  // set when wire tracking was requested: || sigma'_mirrored - sigma ||_F
  std::optional<double> wire_disturbance;
  std::vector<DiFrancoBranch> branches;  // Di Franco exhaustive mode
  std::optional<char> difranco_axis;     // receiver pre-measurement axis
};

nlohmann::json to_json(const TransferReport& report);

struct TransferOptions {
  double t = -1.0;            // evolution time; < 0 means t* = pi/J
  bool track_wire = false;    // compute wire_disturbance (code protocol)
  bool apply_frame = true;    // receiver frame correction (single qubit)
  bool apply_correction = true;  // jk correction (Di Franco)
};

// The main protocol: encode on sites {1,2}, free evolution to t*, decode
// the pair {n-1, n} in the receiver frame. No measurements, no classical
// communication; the wire state is arbitrary.
TransferReport transfer_two_qubit_code(const ChainSpec& spec,
                                       const BlochVector& r,
                                       const WireStateSpec& wire,
                                       const TransferOptions& opts = {});

// Standard single-site encoding with the wire forced to all-down.
TransferReport transfer_single_qubit_initialized(
    const ChainSpec& spec, const BlochVector& r,
    const TransferOptions& opts = {});

// Single-site encoding over an arbitrary wire: the negative control. No
// measurements or corrections are performed; fidelity is generically < 1.
TransferReport transfer_single_qubit_uninitialized(
    const ChainSpec& spec, const BlochVector& r, const WireStateSpec& wire,
    const TransferOptions& opts = {});

// Measurement-assisted comparison protocol: the receiver pre-measures a
// transverse spin component (outcome j), the sender measures x after the
// evolution (outcome k, one classical bit), and the receiver applies a
// jk-dependent unitary. Corrections are derived by process fitting, not
// transcribed. With forced_jk the single branch is run; otherwise all four
// branches are enumerated with their probabilities.
TransferReport transfer_difranco(const ChainSpec& spec, const BlochVector& r,
                                 const WireStateSpec& wire,
                                 std::optional<std::pair<int, int>> forced_jk =
                                     std::nullopt,
                                 const TransferOptions& opts = {});

// Derived jk-correction table for a chain: axis is the receiver's
// pre-measurement component ('X' or 'Y'), corrections[j][k] with index 0
// for outcome -1/2 and 1 for +1/2.
struct DiFrancoCorrections {
  char axis = 'X';
  bool fitted = false;
  Eigen::Matrix2cd corrections[2][2];
};

DiFrancoCorrections derive_difranco_corrections(const ChainSpec& spec);

// Fidelity of the selected protocol on a time grid (protocol: "code2",
// "single-init", "single-uninit").
std::vector<std::pair<double, double>> fidelity_scan(
    const ChainSpec& spec, const std::string& protocol, const BlochVector& r,
    const WireStateSpec& wire, const std::vector<double>& t_grid);

struct BatchSample {
  int sample = 0;
  double fidelity = 0.0;
  double leakage = 0.0;
  double t = 0.0;
};

struct BatchStats {
  std::string protocol;
  int n = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  double mean = 0.0, min = 1.0, max = 0.0, stddev = 0.0;
  std::vector<BatchSample> rows;
};

// Averages protocol fidelity over Haar-random inputs and seeded wire states;
// deterministic for a given master seed. fixed_r pins the input state.
BatchStats batch_average(const ChainSpec& spec, const std::string& protocol,
                         int samples, std::uint64_t seed,
                         std::optional<BlochVector> fixed_r = std::nullopt);

nlohmann::json to_json(const BatchStats& stats);
std::string batch_csv(const BatchStats& stats);

// Haar-uniform point on the Bloch sphere.
BlochVector random_bloch_vector(std::uint64_t seed);

}  // namespace spinchain
