#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "spinchain/exact.hpp"

namespace spinchain {

// Single-site sigma letter. All operators in this module are sums of tensor
// products of these; factors of 1/2 from halved spin components live in the
// coefficients, never in the letters.
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

// Product of two sigma letters: a*b = i^phase_pow * letter.
struct LetterProduct {
  Pauli letter;
  int phase_pow;  // exponent of i, in {0,1,2,3}
};
LetterProduct letter_product(Pauli a, Pauli b);

// Monomial in the formal couplings J_1..J_k: exponents[k] is the power of
// J_{k+1}. Trailing zeros are trimmed so the representation is canonical.
using Monomial = std::vector<std::uint32_t>;

Monomial monomial_mul(const Monomial& a, const Monomial& b);
std::string monomial_str(const Monomial& m);

// Exact coefficient: finite sum of monomials with Gaussian-rational weights.
class CouplingPoly {
 public:
  CouplingPoly() = default;
  explicit CouplingPoly(GaussRational scalar);
  CouplingPoly(Monomial m, GaussRational weight);

  static CouplingPoly coupling(int k, GaussRational weight);  // weight * J_k

  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, GaussRational>& terms() const { return terms_; }

  void add(const Monomial& m, const GaussRational& w);

  CouplingPoly& operator+=(const CouplingPoly& o);
  CouplingPoly& operator-=(const CouplingPoly& o);
  friend CouplingPoly operator+(CouplingPoly a, const CouplingPoly& b) {
    return a += b;
  }
  friend CouplingPoly operator-(CouplingPoly a, const CouplingPoly& b) {
    return a -= b;
  }
  friend CouplingPoly operator*(const CouplingPoly& a, const CouplingPoly& b);
  CouplingPoly scaled(const GaussRational& s) const;
  CouplingPoly times_i_pow(int power) const;

  friend bool operator==(const CouplingPoly& a, const CouplingPoly& b) {
    return a.terms_ == b.terms_;
  }

  // Substitutes numeric couplings (couplings[k] is the value of J_{k+1}).
  // Throws std::invalid_argument if a needed coupling is missing.
  std::complex<double> eval(std::span<const double> couplings) const;

  std::string str() const;

 private:
  std::map<Monomial, GaussRational> terms_;
};

// Sorted site->letter list; identity letters are never stored. The map key
// order (site, then letter) is the canonical term order used everywhere.
using SiteLetter = std::pair<int, Pauli>;
using PauliString = std::vector<SiteLetter>;

std::string pauli_string_str(const PauliString& s);

// Canonical sum of Pauli strings with exact polynomial coefficients, on a
// fixed number of sites. No two stored terms share a letter string and zero
// coefficients are dropped, so equality is plain memberwise comparison.
class PauliOperator {
 public:
  explicit PauliOperator(int n_sites);

  static PauliOperator zero(int n_sites) { return PauliOperator(n_sites); }
  static PauliOperator identity(int n_sites);
  static PauliOperator single(int n_sites, int site, Pauli letter);

  int n_sites() const { return n_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  const std::map<PauliString, CouplingPoly>& terms() const { return terms_; }

  // Coefficient of a letter string (zero polynomial when absent).
  CouplingPoly coefficient(const PauliString& s) const;

  void add_term(const PauliString& s, const CouplingPoly& c);

  std::set<int> support() const;

  PauliOperator& operator+=(const PauliOperator& o);
  PauliOperator& operator-=(const PauliOperator& o);
  friend PauliOperator operator+(PauliOperator a, const PauliOperator& b) {
    return a += b;
  }
  friend PauliOperator operator-(PauliOperator a, const PauliOperator& b) {
    return a -= b;
  }
  PauliOperator scaled(const GaussRational& s) const;
  PauliOperator scaled(const CouplingPoly& c) const;

  friend bool operator==(const PauliOperator& a, const PauliOperator& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  // One line per (letter string, monomial) pair, canonical order:
  //   -1/4+0/1*i * J1^1 : X1 X2
  std::string str() const;

 private:
  int n_;
  std::map<PauliString, CouplingPoly> terms_;
};

PauliOperator multiply(const PauliOperator& a, const PauliOperator& b);
PauliOperator commutator(const PauliOperator& a, const PauliOperator& b);

// H = sum_i J_i (X_i X_{i+1} + Y_i Y_{i+1}) with halved spin components,
// i.e. coefficient J_i/4 on each sigma-letter string. The field term is
// omitted (B = 0).
PauliOperator build_hamiltonian_symbolic(int n_sites);

// [ad_h^0(o), ..., ad_h^depth(o)]; throws budget_error naming the depth at
// which the term count would exceed the budget.
std::vector<PauliOperator> nested_adjoint(const PauliOperator& h,
                                          const PauliOperator& o, int depth,
                                          std::size_t term_budget = 1000000);

// Pauli sum with plain complex coefficients (numeric couplings substituted).
struct NumericPauliSum {
  int n_sites = 0;
  std::map<PauliString, std::complex<double>> terms;

  Eigen::MatrixXcd to_matrix() const;
};

// Truncated Heisenberg series O + (it)[H,O] + (it)^2/2! [H,[H,O]] + ...
// through the given order, with numeric couplings substituted.
NumericPauliSum taylor_evolve(const PauliOperator& h, const PauliOperator& o,
                              double t, int order,
                              std::span<const double> couplings,
                              std::size_t term_budget = 1000000);

// Dense realization; site 1 is the most significant bit, basis index 0 is
// all-down. Linear in o.
Eigen::MatrixXcd to_matrix(const PauliOperator& o,
                           std::span<const double> couplings);

// Adds coeff * (sigma string) to an existing 2^n x 2^n matrix.
void accumulate_pauli_string(Eigen::MatrixXcd& m, int n_sites,
                             const PauliString& s, std::complex<double> coeff);

std::vector<std::set<int>> support_profile(std::span<const PauliOperator> ops);

// Parses operator text. Accepts the dump format (one "coeff * mono : letters"
// per line) and inline sums like "X1 X2 + Y1 Y2" or "1/2 * Z1 - i * X1 Y2".
// When halved is true every parsed term is scaled by (1/2)^weight.
PauliOperator parse_pauli_operator(const std::string& text, int n_sites,
                                   bool halved = false);

}  // namespace spinchain
