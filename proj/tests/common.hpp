#pragma once

// Shared test helpers. The matrix builders here are deliberately independent
// of the library's to_matrix path so they can serve as oracles for it.

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "spinchain/pauli_algebra.hpp"

namespace testutil {

inline Eigen::Matrix2cd sigma2(char letter) {
  const std::complex<double> i(0.0, 1.0);
  Eigen::Matrix2cd m;
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad letter");
  }
  return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a,
                             const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Site 1 is the leftmost (most significant) Kronecker factor.
inline Eigen::MatrixXcd string_matrix_oracle(int n, const std::string& letters) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int site = 0; site < n; ++site)
    out = kron(out, sigma2(letters.at(static_cast<std::size_t>(site))));
  return out;
}

inline std::set<std::string> term_strings(const spinchain::PauliOperator& op) {
  std::set<std::string> out;
  for (const auto& [s, c] : op.terms())
    out.insert(spinchain::pauli_string_str(s));
  return out;
}

inline spinchain::PauliOperator random_operator(int n, std::mt19937_64& rng,
                                                bool with_couplings = false) {
  using namespace spinchain;
  std::uniform_int_distribution<int> nterms(1, 4);
  std::uniform_int_distribution<int> letter(0, 3);
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den_pick(0, 2);
  std::uniform_int_distribution<int> expo(0, 2);
  const long dens[3] = {1, 2, 4};

  PauliOperator op(n);
  int t = nterms(rng);
  for (int k = 0; k < t; ++k) {
    PauliString s;
    for (int site = 1; site <= n; ++site) {
      Pauli p = static_cast<Pauli>(letter(rng));
      if (p != Pauli::I) s.emplace_back(site, p);
    }
    GaussRational coeff(Rational(num(rng), dens[den_pick(rng)]),
                        Rational(num(rng), dens[den_pick(rng)]));
    if (coeff.is_zero()) coeff = GaussRational::one();
    Monomial mono;
    if (with_couplings) {
      mono.resize(static_cast<std::size_t>(n) - 1, 0);
      for (auto& e : mono) e = static_cast<std::uint32_t>(expo(rng));
    }
    op.add_term(s, CouplingPoly(mono, coeff));
  }
  if (op.is_zero()) op += PauliOperator::identity(n);
  return op;
}

inline std::vector<double> random_couplings(int count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.3, 1.0);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (auto& v : out) v = u(rng);
  return out;
}

}  // namespace testutil
