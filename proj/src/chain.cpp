#include "spinchain/chain.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

#include "spinchain/errors.hpp"

namespace spinchain {

std::vector<double> couplings_engineered(int n, double j) {
  if (n < 2) throw std::invalid_argument("chain needs >= 2 sites");
  if (j <= 0) throw std::invalid_argument("global coupling must be positive");
  std::vector<double> out(static_cast<std::size_t>(n) - 1);
  for (int i = 1; i < n; ++i)
    out[static_cast<std::size_t>(i) - 1] =
        j * std::sqrt(static_cast<double>(i) * (n - i));
  return out;
}

std::vector<double> ChainSpec::couplings() const {
  validate();
  if (profile == CouplingProfile::Engineered)
    return couplings_engineered(n, j);
  return custom;
}

bool ChainSpec::mirror_symmetric(double tol) const {
  auto c = couplings();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (std::abs(c[i] - c[c.size() - 1 - i]) > tol) return false;
  return true;
}

double ChainSpec::transfer_time() const { return M_PI / j; }

void ChainSpec::validate() const {
  if (n < 2) throw std::invalid_argument("chain needs >= 2 sites");
  if (profile == CouplingProfile::Engineered && j <= 0)
    throw std::invalid_argument("global coupling must be positive");
  if (profile == CouplingProfile::Custom &&
      custom.size() != static_cast<std::size_t>(n) - 1)
    throw std::invalid_argument("custom profile needs n-1 couplings");
}

ChainSpec chain_spec_from_json(const nlohmann::json& js) {
  ChainSpec spec;
  spec.n = js.at("n").get<int>();
  spec.j = js.value("j", 1.0);
  spec.b = js.value("b", 0.0);
  std::string profile = js.value("profile", std::string("engineered"));
  if (profile == "engineered") {
    spec.profile = CouplingProfile::Engineered;
  } else if (profile == "custom") {
    spec.profile = CouplingProfile::Custom;
    spec.custom = js.at("couplings").get<std::vector<double>>();
  } else {
    throw std::invalid_argument("unknown profile: " + profile);
  }
  spec.validate();
  return spec;
}

nlohmann::json to_json(const ChainSpec& spec) {
  nlohmann::json js{{"n", spec.n}, {"j", spec.j}, {"b", spec.b}};
  if (spec.profile == CouplingProfile::Engineered) {
    js["profile"] = "engineered";
  } else {
    js["profile"] = "custom";
    js["couplings"] = spec.custom;
  }
  return js;
}

Eigen::MatrixXcd hamiltonian_dense(const ChainSpec& spec, int max_n) {
  spec.validate();
  if (spec.n > max_n)
    throw budget_error("dense Hamiltonian capped at n = " +
                       std::to_string(max_n));
  const int n = spec.n;
  const long dim = 1L << n;
  auto c = spec.couplings();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  // Hopping: J_i/4 (sx sx + sy sy) exchanges opposite adjacent spins with
  // amplitude J_i/2 and leaves aligned pairs alone.
  for (int i = 1; i < n; ++i) {
    const long bit_a = 1L << (n - i);
    const long bit_b = 1L << (n - i - 1);
    const double amp = 0.5 * c[static_cast<std::size_t>(i) - 1];
    for (long m = 0; m < dim; ++m) {
      bool a = m & bit_a, bb = m & bit_b;
      if (a != bb) h(m ^ bit_a ^ bit_b, m) += amp;
    }
  }
  if (spec.b != 0.0) {
    for (long m = 0; m < dim; ++m) {
      int ups = static_cast<int>(__builtin_popcountll(
          static_cast<unsigned long long>(m)));
      h(m, m) += 0.5 * spec.b * (n - 2 * ups);
    }
  }
  return h;
}

std::vector<long> sector_basis(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("excitation count out of range");
  std::vector<long> out;
  for (long m = 0; m < (1L << n); ++m)
    if (__builtin_popcountll(static_cast<unsigned long long>(m)) == k)
      out.push_back(m);
  return out;
}

Eigen::MatrixXd hamiltonian_sector(const ChainSpec& spec, int k) {
  spec.validate();
  const int n = spec.n;
  auto basis = sector_basis(n, k);
  std::map<long, int> index;
  for (std::size_t i = 0; i < basis.size(); ++i)
    index[basis[i]] = static_cast<int>(i);
  auto c = spec.couplings();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<long>(basis.size()),
                                            static_cast<long>(basis.size()));
  const double diag = 0.5 * spec.b * (n - 2 * k);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    h(static_cast<long>(a), static_cast<long>(a)) = diag;
    for (int i = 1; i < n; ++i) {
      const long bit_a = 1L << (n - i);
      const long bit_b = 1L << (n - i - 1);
      long m = basis[a];
      if (((m & bit_a) != 0) != ((m & bit_b) != 0)) {
        int bcol = index.at(m ^ bit_a ^ bit_b);
        h(bcol, static_cast<long>(a)) +=
            0.5 * c[static_cast<std::size_t>(i) - 1];
      }
    }
  }
  return h;
}

SpectrumReport spmc_check(const ChainSpec& spec, double tol) {
  spec.validate();
  SpectrumReport report;
  report.tolerance = tol;
  if (!spec.mirror_symmetric()) {
    report.applicable = false;
    report.spmc_pass = false;
    return report;
  }
  report.applicable = true;

  const int n = spec.n;
  Eigen::MatrixXd h = hamiltonian_sector(spec, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  const auto& evals = eig.eigenvalues();
  const auto& evecs = eig.eigenvectors();

  // Mirror parity: overlap of each eigenvector with its site reversal.
  for (int i = 0; i < n; ++i) {
    report.eigenvalues.push_back(evals(i));
    double overlap = 0.0;
    for (int s = 0; s < n; ++s) overlap += evecs(s, i) * evecs(n - 1 - s, i);
    report.parities.push_back(overlap >= 0 ? +1 : -1);
    if (std::abs(std::abs(overlap) - 1.0) > 1e-6) {
      // Degenerate or asymmetric eigenvector: parity ill-defined.
      report.spmc_pass = false;
      return report;
    }
  }

  // Least-squares fit E_k ~ a + b k over k = 0..n-1, then round to the
  // nearest integer grid point.
  const double kbar = 0.5 * (n - 1);
  double ebar = 0.0, cov = 0.0, var = 0.0;
  for (int i = 0; i < n; ++i) ebar += report.eigenvalues[i];
  ebar /= n;
  for (int i = 0; i < n; ++i) {
    cov += (i - kbar) * (report.eigenvalues[i] - ebar);
    var += (i - kbar) * (i - kbar);
  }
  double b = (n > 1) ? cov / var : 1.0;
  double a = ebar - b * kbar;
  report.fit_offset = a;
  report.fit_spacing = b;

  double scale = std::max(1.0, std::abs(b));
  bool equidistant = true;
  std::vector<long> ints(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double kf = (b != 0.0) ? (report.eigenvalues[i] - a) / b
                           : static_cast<double>(i);
    ints[static_cast<std::size_t>(i)] = std::lround(kf);
    double resid = std::abs(report.eigenvalues[i] -
                            (a + b * static_cast<double>(
                                        ints[static_cast<std::size_t>(i)])));
    report.max_fit_residual = std::max(report.max_fit_residual, resid);
    if (resid > tol * scale) equidistant = false;
  }

  if (n > 1) {
    report.spacing_min = report.spacing_max =
        report.eigenvalues[1] - report.eigenvalues[0];
    for (int i = 1; i + 1 < n; ++i) {
      double d = report.eigenvalues[static_cast<std::size_t>(i) + 1] -
                 report.eigenvalues[static_cast<std::size_t>(i)];
      report.spacing_min = std::min(report.spacing_min, d);
      report.spacing_max = std::max(report.spacing_max, d);
    }
  }

  // Parity of the fitted integer must match the eigenvector mirror parity,
  // with one consistent assignment of even/odd integers to +/- parity.
  report.parity_alternates = true;
  int even_class = 0;  // mirror parity sitting on even integers
  for (int i = 0; i < n; ++i) {
    int cls = (ints[static_cast<std::size_t>(i)] % 2 + 2) % 2;
    int expected = (cls == 0) ? even_class : -even_class;
    if (even_class == 0) {
      even_class = (cls == 0) ? report.parities[static_cast<std::size_t>(i)]
                              : -report.parities[static_cast<std::size_t>(i)];
    } else if (report.parities[static_cast<std::size_t>(i)] != expected) {
      report.parity_alternates = false;
    }
  }

  report.spmc_pass = equidistant && report.parity_alternates;
  return report;
}

nlohmann::json to_json(const SpectrumReport& report) {
  return nlohmann::json{{"applicable", report.applicable},
                        {"eigenvalues", report.eigenvalues},
                        {"parities", report.parities},
                        {"fit_offset", report.fit_offset},
                        {"fit_spacing", report.fit_spacing},
                        {"max_fit_residual", report.max_fit_residual},
                        {"spacing_min", report.spacing_min},
                        {"spacing_max", report.spacing_max},
                        {"parity_alternates", report.parity_alternates},
                        {"spmc_pass", report.spmc_pass},
                        {"tolerance", report.tolerance}};
}

}  // namespace spinchain
