#include "spinchain/logical_code.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spinchain/errors.hpp"

namespace spinchain {

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

nlohmann::json to_json(const BlochVector& r) {
  return nlohmann::json{r.x, r.y, r.z};
}

BlochVector bloch_from_json(const nlohmann::json& js) {
  if (!js.is_array() || js.size() != 3)
    throw std::invalid_argument("Bloch vector must be a JSON triple");
  return {js[0].get<double>(), js[1].get<double>(), js[2].get<double>()};
}

namespace {

Eigen::Matrix2cd sigma(char letter) {
  const std::complex<double> i(0.0, 1.0);
  Eigen::Matrix2cd m;
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad sigma letter");
  }
  return m;
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

}  // namespace

CodeOperators logical_operators(CodeFrame frame) {
  CodeOperators ops;
  ops.P = 0.5 * (kron2(sigma('I'), sigma('I')) - kron2(sigma('Z'), sigma('Z')));
  ops.Lx = 0.5 * (kron2(sigma('X'), sigma('X')) + kron2(sigma('Y'), sigma('Y')));
  ops.Ly = 0.5 * (kron2(sigma('Y'), sigma('X')) - kron2(sigma('X'), sigma('Y')));
  ops.Lz = 0.5 * (kron2(sigma('Z'), sigma('I')) - kron2(sigma('I'), sigma('Z')));
  if (frame == CodeFrame::Receiver) {
    // The mirror reverses the pair's site order; conjugation by the swap
    // flips Ly and Lz and leaves P, Lx alone.
    ops.Ly = -ops.Ly;
    ops.Lz = -ops.Lz;
  }
  return ops;
}

Eigen::Matrix4cd encode(const BlochVector& r) {
  if (!r.physical())
    throw std::invalid_argument("Bloch vector lies outside the unit ball");
  CodeOperators ops = logical_operators(CodeFrame::Sender);
  return 0.5 * (ops.P + r.x * ops.Lx + r.y * ops.Ly + r.z * ops.Lz);
}

DecodedBloch decode_lenient(const Eigen::Matrix4cd& rho2, CodeFrame frame) {
  CodeOperators ops = logical_operators(frame);
  DecodedBloch out;
  out.leakage = 1.0 - (rho2 * ops.P).trace().real();
  out.r.x = (rho2 * ops.Lx).trace().real();
  out.r.y = (rho2 * ops.Ly).trace().real();
  out.r.z = (rho2 * ops.Lz).trace().real();
  return out;
}

BlochVector decode(const Eigen::Matrix4cd& rho2, CodeFrame frame, double tol) {
  DecodedBloch d = decode_lenient(rho2, frame);
  if (d.leakage >= tol)
    throw leakage_error("state leaks outside the code subspace (leakage " +
                            std::to_string(d.leakage) + ")",
                        d.leakage);
  return d.r;
}

double qubit_fidelity(const BlochVector& a, const BlochVector& b) {
  if (!a.physical(1e-9) || !b.physical(1e-9))
    throw std::invalid_argument("Bloch vectors must be physical");
  double na = std::min(a.norm(), 1.0), nb = std::min(b.norm(), 1.0);
  double dot = a.x * b.x + a.y * b.y + a.z * b.z;
  double f = 0.5 * (1.0 + dot +
                    std::sqrt(std::max(0.0, (1.0 - na * na) * (1.0 - nb * nb))));
  return std::clamp(f, 0.0, 1.0);
}

Eigen::Matrix2cd qubit_density(const BlochVector& r) {
  if (!r.physical())
    throw std::invalid_argument("Bloch vector lies outside the unit ball");
  return 0.5 * (sigma('I') + r.x * sigma('X') + r.y * sigma('Y') +
                r.z * sigma('Z'));
}

BlochVector qubit_bloch(const Eigen::Matrix2cd& rho) {
  BlochVector r;
  r.x = (rho * sigma('X')).trace().real();
  r.y = (rho * sigma('Y')).trace().real();
  r.z = (rho * sigma('Z')).trace().real();
  return r;
}

}  // namespace spinchain
