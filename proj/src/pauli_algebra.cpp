#include "spinchain/pauli_algebra.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "spinchain/errors.hpp"

namespace spinchain {

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    default: return 'Z';
  }
}

Pauli pauli_from_char(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw std::invalid_argument(std::string("bad Pauli letter: ") + c);
  }
}

LetterProduct letter_product(Pauli a, Pauli b) {
  if (a == Pauli::I) return {b, 0};
  if (b == Pauli::I) return {a, 0};
  if (a == b) return {Pauli::I, 0};
  // XY = iZ, YZ = iX, ZX = iY; swapped order picks up i^3.
  static constexpr Pauli third[3][3] = {
      {Pauli::I, Pauli::Z, Pauli::Y},
      {Pauli::Z, Pauli::I, Pauli::X},
      {Pauli::Y, Pauli::X, Pauli::I}};
  int ia = static_cast<int>(a) - 1, ib = static_cast<int>(b) - 1;
  bool cyclic = (ib - ia + 3) % 3 == 1;  // X->Y, Y->Z, Z->X
  return {third[ia][ib], cyclic ? 1 : 3};
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial out(std::max(a.size(), b.size()), 0);
  for (std::size_t k = 0; k < a.size(); ++k) out[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) out[k] += b[k];
  return out;
}

std::string monomial_str(const Monomial& m) {
  std::string out;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m[k] == 0) continue;
    if (!out.empty()) out += " ";
    out += "J" + std::to_string(k + 1) + "^" + std::to_string(m[k]);
  }
  return out;
}

namespace {

void trim_monomial(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

}  // namespace

CouplingPoly::CouplingPoly(GaussRational scalar) {
  if (!scalar.is_zero()) terms_.emplace(Monomial{}, std::move(scalar));
}

CouplingPoly::CouplingPoly(Monomial m, GaussRational weight) {
  trim_monomial(m);
  if (!weight.is_zero()) terms_.emplace(std::move(m), std::move(weight));
}

CouplingPoly CouplingPoly::coupling(int k, GaussRational weight) {
  if (k < 1) throw std::invalid_argument("coupling index must be >= 1");
  Monomial m(static_cast<std::size_t>(k), 0);
  m[k - 1] = 1;
  return CouplingPoly(std::move(m), std::move(weight));
}

void CouplingPoly::add(const Monomial& m, const GaussRational& w) {
  Monomial key = m;
  trim_monomial(key);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    if (!w.is_zero()) terms_.emplace(std::move(key), w);
    return;
  }
  it->second += w;
  if (it->second.is_zero()) terms_.erase(it);
}

CouplingPoly& CouplingPoly::operator+=(const CouplingPoly& o) {
  for (const auto& [m, w] : o.terms_) add(m, w);
  return *this;
}

CouplingPoly& CouplingPoly::operator-=(const CouplingPoly& o) {
  for (const auto& [m, w] : o.terms_) add(m, -w);
  return *this;
}

CouplingPoly operator*(const CouplingPoly& a, const CouplingPoly& b) {
  CouplingPoly out;
  for (const auto& [ma, wa] : a.terms_)
    for (const auto& [mb, wb] : b.terms_)
      out.add(monomial_mul(ma, mb), wa * wb);
  return out;
}

CouplingPoly CouplingPoly::scaled(const GaussRational& s) const {
  CouplingPoly out;
  if (s.is_zero()) return out;
  for (const auto& [m, w] : terms_) out.terms_.emplace(m, w * s);
  return out;
}

CouplingPoly CouplingPoly::times_i_pow(int power) const {
  CouplingPoly out;
  if (((power % 4) + 4) % 4 == 0) return *this;
  for (const auto& [m, w] : terms_) out.terms_.emplace(m, w.times_i_pow(power));
  return out;
}

std::complex<double> CouplingPoly::eval(
    std::span<const double> couplings) const {
  std::complex<double> out(0.0, 0.0);
  for (const auto& [m, w] : terms_) {
    double mono = 1.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] == 0) continue;
      if (k >= couplings.size())
        throw std::invalid_argument("no numeric value for coupling J" +
                                    std::to_string(k + 1));
      for (std::uint32_t e = 0; e < m[k]; ++e) mono *= couplings[k];
    }
    out += w.to_complex() * mono;
  }
  return out;
}

std::string CouplingPoly::str() const {
  if (terms_.empty()) return "0/1+0/1*i";
  std::string out;
  bool first = true;
  for (const auto& [m, w] : terms_) {
    if (!first) out += " + ";
    first = false;
    out += w.str();
    std::string ms = monomial_str(m);
    if (!ms.empty()) out += " * " + ms;
  }
  return out;
}

std::string pauli_string_str(const PauliString& s) {
  if (s.empty()) return "I";
  std::string out;
  for (const auto& [site, letter] : s) {
    if (!out.empty()) out += " ";
    out += pauli_char(letter) + std::to_string(site);
  }
  return out;
}

PauliOperator::PauliOperator(int n_sites) : n_(n_sites) {
  if (n_sites < 1) throw std::invalid_argument("operator needs >= 1 site");
}

PauliOperator PauliOperator::identity(int n_sites) {
  PauliOperator out(n_sites);
  out.terms_.emplace(PauliString{}, CouplingPoly(GaussRational::one()));
  return out;
}

PauliOperator PauliOperator::single(int n_sites, int site, Pauli letter) {
  PauliOperator out(n_sites);
  if (site < 1 || site > n_sites)
    throw std::invalid_argument("site out of range");
  PauliString s;
  if (letter != Pauli::I) s.emplace_back(site, letter);
  out.terms_.emplace(std::move(s), CouplingPoly(GaussRational::one()));
  return out;
}

CouplingPoly PauliOperator::coefficient(const PauliString& s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? CouplingPoly() : it->second;
}

void PauliOperator::add_term(const PauliString& s, const CouplingPoly& c) {
  if (c.is_zero()) return;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k].first < 1 || s[k].first > n_)
      throw std::invalid_argument("site out of range in term");
    if (k > 0 && s[k - 1].first >= s[k].first)
      throw std::invalid_argument("term sites must be strictly ascending");
    if (s[k].second == Pauli::I)
      throw std::invalid_argument("identity letters are implicit");
  }
  auto it = terms_.find(s);
  if (it == terms_.end()) {
    terms_.emplace(s, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

std::set<int> PauliOperator::support() const {
  std::set<int> out;
  for (const auto& [s, c] : terms_)
    for (const auto& [site, letter] : s) out.insert(site);
  return out;
}

PauliOperator& PauliOperator::operator+=(const PauliOperator& o) {
  if (o.n_ != n_) throw std::invalid_argument("site count mismatch");
  for (const auto& [s, c] : o.terms_) add_term(s, c);
  return *this;
}

PauliOperator& PauliOperator::operator-=(const PauliOperator& o) {
  if (o.n_ != n_) throw std::invalid_argument("site count mismatch");
  for (const auto& [s, c] : o.terms_) add_term(s, c.scaled({-1, 1}));
  return *this;
}

PauliOperator PauliOperator::scaled(const GaussRational& s) const {
  PauliOperator out(n_);
  if (s.is_zero()) return out;
  for (const auto& [str, c] : terms_) out.terms_.emplace(str, c.scaled(s));
  return out;
}

PauliOperator PauliOperator::scaled(const CouplingPoly& c) const {
  PauliOperator out(n_);
  for (const auto& [str, coeff] : terms_) {
    CouplingPoly prod = coeff * c;
    if (!prod.is_zero()) out.terms_.emplace(str, std::move(prod));
  }
  return out;
}

std::string PauliOperator::str() const {
  if (terms_.empty()) return "0\n";
  std::string out;
  for (const auto& [s, poly] : terms_) {
    for (const auto& [m, w] : poly.terms()) {
      out += w.str();
      std::string ms = monomial_str(m);
      if (!ms.empty()) out += " * " + ms;
      out += " : " + pauli_string_str(s) + "\n";
    }
  }
  return out;
}

namespace {

// Merges two sorted letter strings; returns the product string and the
// i-exponent collected from same-site letter products.
std::pair<PauliString, int> string_product(const PauliString& a,
                                           const PauliString& b) {
  PauliString out;
  out.reserve(a.size() + b.size());
  int phase = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      LetterProduct p = letter_product(a[i].second, b[j].second);
      phase += p.phase_pow;
      if (p.letter != Pauli::I) out.emplace_back(a[i].first, p.letter);
      ++i;
      ++j;
    }
  }
  return {std::move(out), phase};
}

// Number of sites where both strings carry distinct non-identity letters;
// the strings commute iff this count is even.
int anticommuting_sites(const PauliString& a, const PauliString& b) {
  int count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (b[j].first < a[i].first) {
      ++j;
    } else {
      if (a[i].second != b[j].second) ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace

PauliOperator multiply(const PauliOperator& a, const PauliOperator& b) {
  if (a.n_sites() != b.n_sites())
    throw std::invalid_argument("site count mismatch");
  PauliOperator out(a.n_sites());
  for (const auto& [sa, ca] : a.terms()) {
    for (const auto& [sb, cb] : b.terms()) {
      auto [s, phase] = string_product(sa, sb);
      out.add_term(s, (ca * cb).times_i_pow(phase));
    }
  }
  return out;
}

PauliOperator commutator(const PauliOperator& a, const PauliOperator& b) {
  if (a.n_sites() != b.n_sites())
    throw std::invalid_argument("site count mismatch");
  PauliOperator out(a.n_sites());
  for (const auto& [sa, ca] : a.terms()) {
    for (const auto& [sb, cb] : b.terms()) {
      // ab and ba merge to the same string; they cancel unless the strings
      // anticommute, in which case [a,b] contributes twice ab.
      if (anticommuting_sites(sa, sb) % 2 == 0) continue;
      auto [s, phase] = string_product(sa, sb);
      out.add_term(s, (ca * cb).times_i_pow(phase).scaled({2, 1}));
    }
  }
  return out;
}

PauliOperator build_hamiltonian_symbolic(int n_sites) {
  if (n_sites < 2)
    throw std::invalid_argument("chain Hamiltonian needs >= 2 sites");
  PauliOperator h(n_sites);
  for (int i = 1; i < n_sites; ++i) {
    CouplingPoly c = CouplingPoly::coupling(i, {1, 4});
    h.add_term({{i, Pauli::X}, {i + 1, Pauli::X}}, c);
    h.add_term({{i, Pauli::Y}, {i + 1, Pauli::Y}}, c);
  }
  return h;
}

std::vector<PauliOperator> nested_adjoint(const PauliOperator& h,
                                          const PauliOperator& o, int depth,
                                          std::size_t term_budget) {
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
  std::vector<PauliOperator> out;
  out.reserve(static_cast<std::size_t>(depth) + 1);
  out.push_back(o);
  for (int k = 1; k <= depth; ++k) {
    PauliOperator next = commutator(h, out.back());
    if (next.term_count() > term_budget)
      throw budget_error("term budget exceeded at adjoint depth " +
                         std::to_string(k) + " (" +
                         std::to_string(next.term_count()) + " terms)");
    out.push_back(std::move(next));
  }
  return out;
}

NumericPauliSum taylor_evolve(const PauliOperator& h, const PauliOperator& o,
                              double t, int order,
                              std::span<const double> couplings,
                              std::size_t term_budget) {
  if (order < 0) throw std::invalid_argument("order must be >= 0");
  auto ads = nested_adjoint(h, o, order, term_budget);
  NumericPauliSum out;
  out.n_sites = o.n_sites();
  std::complex<double> prefactor(1.0, 0.0);
  const std::complex<double> it(0.0, t);
  for (int k = 0; k <= order; ++k) {
    if (k > 0) prefactor *= it / static_cast<double>(k);
    for (const auto& [s, c] : ads[static_cast<std::size_t>(k)].terms()) {
      auto& slot = out.terms[s];
      slot += prefactor * c.eval(couplings);
    }
  }
  std::erase_if(out.terms, [](const auto& kv) {
    return std::abs(kv.second) == 0.0;
  });
  return out;
}

void accumulate_pauli_string(Eigen::MatrixXcd& m, int n_sites,
                             const PauliString& s,
                             std::complex<double> coeff) {
  const long dim = 1L << n_sites;
  long flip_mask = 0;
  for (const auto& [site, letter] : s)
    if (letter == Pauli::X || letter == Pauli::Y)
      flip_mask |= 1L << (n_sites - site);
  for (long col = 0; col < dim; ++col) {
    std::complex<double> phase(1.0, 0.0);
    for (const auto& [site, letter] : s) {
      bool up = (col >> (n_sites - site)) & 1;  // bit 1 = spin up
      switch (letter) {
        case Pauli::X: break;
        case Pauli::Y: phase *= up ? std::complex<double>(0, -1)
                                   : std::complex<double>(0, 1); break;
        case Pauli::Z: if (up) phase = -phase; break;
        case Pauli::I: break;
      }
    }
    m(col ^ flip_mask, col) += coeff * phase;
  }
}

Eigen::MatrixXcd to_matrix(const PauliOperator& o,
                           std::span<const double> couplings) {
  const long dim = 1L << o.n_sites();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [s, c] : o.terms())
    accumulate_pauli_string(m, o.n_sites(), s, c.eval(couplings));
  return m;
}

Eigen::MatrixXcd NumericPauliSum::to_matrix() const {
  const long dim = 1L << n_sites;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [s, c] : terms)
    accumulate_pauli_string(m, n_sites, s, c);
  return m;
}

std::vector<std::set<int>> support_profile(
    std::span<const PauliOperator> ops) {
  std::vector<std::set<int>> out;
  out.reserve(ops.size());
  for (const auto& op : ops) out.push_back(op.support());
  return out;
}

namespace {

// One summand of the inline grammar: optional coefficient and J factors,
// then letter-site tokens, e.g. "-1/2 * J2^1 * X1 Z2 Y3".
void parse_term(const std::string& term, PauliOperator& out, bool halved) {
  GaussRational coeff = GaussRational::one();
  Monomial mono;
  PauliString letters;

  std::istringstream in(term);
  std::string tok;
  while (in >> tok) {
    if (tok == "*" || tok == ":") continue;
    if (tok == "I") continue;
    char c0 = static_cast<char>(std::toupper(static_cast<unsigned char>(tok[0])));
    if ((c0 == 'J') && tok.size() > 1 &&
        std::isdigit(static_cast<unsigned char>(tok[1]))) {
      std::size_t caret = tok.find('^');
      int idx = std::stoi(tok.substr(1, caret == std::string::npos
                                            ? std::string::npos
                                            : caret - 1));
      int exp = caret == std::string::npos
                    ? 1
                    : std::stoi(tok.substr(caret + 1));
      if (idx < 1 || exp < 0) throw std::invalid_argument("bad coupling: " + tok);
      if (mono.size() < static_cast<std::size_t>(idx)) mono.resize(idx, 0);
      mono[idx - 1] += static_cast<std::uint32_t>(exp);
    } else if ((c0 == 'X' || c0 == 'Y' || c0 == 'Z' || c0 == 'I') &&
               tok.size() > 1 &&
               std::isdigit(static_cast<unsigned char>(tok[1]))) {
      int site = std::stoi(tok.substr(1));
      Pauli p = pauli_from_char(c0);
      if (p != Pauli::I) letters.emplace_back(site, p);
    } else {
      coeff = coeff * parse_gauss_rational(tok);
    }
  }
  std::sort(letters.begin(), letters.end());
  for (std::size_t k = 1; k < letters.size(); ++k)
    if (letters[k - 1].first == letters[k].first)
      throw std::invalid_argument("repeated site in term: " + term);
  if (halved) {
    for (std::size_t k = 0; k < letters.size(); ++k)
      coeff = coeff * GaussRational(1, 2);
  }
  out.add_term(letters, CouplingPoly(std::move(mono), std::move(coeff)));
}

}  // namespace

PauliOperator parse_pauli_operator(const std::string& text, int n_sites,
                                   bool halved) {
  PauliOperator out(n_sites);
  // Split on newlines and on top-level +/- signs (not inside coefficients
  // like "1/2+0/1*i": a sign is a separator only when preceded by space or
  // at the start of a line).
  std::string term;
  bool any = false;
  auto flush = [&](bool negate) {
    std::string trimmed;
    for (char c : term)
      if (!std::isspace(static_cast<unsigned char>(c)) || !trimmed.empty())
        trimmed.push_back(c);
    while (!trimmed.empty() &&
           std::isspace(static_cast<unsigned char>(trimmed.back())))
      trimmed.pop_back();
    if (!trimmed.empty()) {
      if (negate) trimmed = "-1 * " + trimmed;
      parse_term(trimmed, out, halved);
      any = true;
    }
    term.clear();
  };
  bool pending_negate = false;
  for (std::size_t k = 0; k < text.size(); ++k) {
    char c = text[k];
    if (c == '\n') {
      flush(pending_negate);
      pending_negate = false;
    } else if ((c == '+' || c == '-') &&
               (k == 0 || text[k - 1] == ' ' || text[k - 1] == '\n') &&
               (k + 1 < text.size() && text[k + 1] == ' ')) {
      flush(pending_negate);
      pending_negate = (c == '-');
    } else {
      term.push_back(c);
    }
  }
  flush(pending_negate);
  if (!any) throw std::invalid_argument("empty operator text");
  return out;
}

}  // namespace spinchain
