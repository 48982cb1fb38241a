#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "common.hpp"
#include "spinchain/chain.hpp"
#include "spinchain/dynamics.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/pauli_algebra.hpp"
#include "spinchain/state.hpp"

using namespace spinchain;

namespace {

QuantumState random_pure_state(int n, std::uint64_t seed) {
  return QuantumState::pure(n, haar_random_vector(1L << n, seed));
}

}  // namespace

TEST_CASE("state construction enforces invariants") {
  Eigen::VectorXcd bad = Eigen::VectorXcd::Ones(4);
  CHECK_THROWS_AS(QuantumState::pure(2, bad), std::invalid_argument);
  CHECK_THROWS_AS(QuantumState::pure(3, bad / 2.0), std::invalid_argument);

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(4, 4);
  CHECK_THROWS_AS(QuantumState::mixed(2, rho), std::invalid_argument);
  CHECK_NOTHROW(QuantumState::mixed(2, rho / 4.0));

  Eigen::MatrixXcd neg = rho / 4.0;
  neg(0, 0) = -0.25;
  neg(1, 1) = 0.75;
  CHECK_THROWS_AS(QuantumState::mixed(2, neg), std::invalid_argument);
}

TEST_CASE("partial trace: product and Bell states") {
  auto a = random_pure_state(2, 5);
  auto b = random_pure_state(1, 6);
  auto joint = QuantumState::tensor(a, b);
  CHECK((partial_trace(joint, {1, 2}) - a.density()).norm() < 1e-12);
  CHECK((partial_trace(joint, {3}) - b.density()).norm() < 1e-12);

  Eigen::VectorXcd bell(4);
  bell << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
  auto pair = QuantumState::pure(2, bell);
  Eigen::MatrixXcd half = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
  CHECK((partial_trace(pair, {1}) - half).norm() < 1e-12);
  CHECK((partial_trace(pair, {2}) - half).norm() < 1e-12);

  CHECK_THROWS_AS(partial_trace(pair, {}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(pair, {3}), std::invalid_argument);
}

TEST_CASE("partial trace agrees between pure and density representations") {
  auto psi = random_pure_state(4, 9);
  auto as_mixed = QuantumState::mixed(4, psi.density());
  CHECK((partial_trace(psi, {2, 4}) - partial_trace(as_mixed, {2, 4})).norm() <
        1e-12);
}

TEST_CASE("measurement: fixed basis conventions") {
  auto down = QuantumState::all_down(1);
  auto rz = measure_site(down, SpinAxis::Z, 1, +1);
  CHECK(rz.outcome == 0.5);
  CHECK(rz.probability == doctest::Approx(1.0));
  CHECK_THROWS_AS(measure_site(down, SpinAxis::Z, 1, -1), std::runtime_error);

  auto rx_plus = measure_site(down, SpinAxis::X, 1, +1);
  auto rx_minus = measure_site(down, SpinAxis::X, 1, -1);
  CHECK(rx_plus.probability == doctest::Approx(0.5));
  CHECK(rx_minus.probability == doctest::Approx(0.5));
}

TEST_CASE("measurement: completeness and collapse on random states") {
  std::mt19937_64 seeds(31);
  for (int trial = 0; trial < 8; ++trial) {
    auto state = random_pure_state(3, seeds());
    for (SpinAxis axis : {SpinAxis::X, SpinAxis::Y, SpinAxis::Z}) {
      int site = 1 + static_cast<int>(seeds() % 3);
      auto plus = measure_site(state, axis, site, +1);
      auto minus = measure_site(state, axis, site, -1);
      CHECK(plus.probability + minus.probability == doctest::Approx(1.0));
      // repeated measurement is deterministic
      auto again = measure_site(plus.post, axis, site, +1);
      CHECK(again.probability == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("measurement: sampling variant is seed deterministic") {
  auto state = random_pure_state(2, 77);
  std::mt19937_64 rng1(123), rng2(123);
  auto a = measure_site(state, SpinAxis::X, 1, rng1);
  auto b = measure_site(state, SpinAxis::X, 1, rng2);
  CHECK(a.outcome == b.outcome);
  CHECK(a.probability == b.probability);
}

TEST_CASE("measurement on mixed states") {
  Eigen::MatrixXcd rho = random_density_matrix(8, 3, 41);
  auto state = QuantumState::mixed(3, rho);
  auto plus = measure_site(state, SpinAxis::Y, 2, +1);
  auto minus = measure_site(state, SpinAxis::Y, 2, -1);
  CHECK(plus.probability + minus.probability == doctest::Approx(1.0));
  CHECK(plus.post.matrix().trace().real() == doctest::Approx(1.0));
}

TEST_CASE("propagator: two-site spectrum and sanity checks") {
  ChainSpec spec;
  spec.n = 2;
  Propagator prop(spec);
  auto evals = prop.eigenvalues();
  std::sort(evals.begin(), evals.end());
  REQUIRE(evals.size() == 4);
  CHECK(evals[0] == doctest::Approx(-0.5));
  CHECK(evals[1] == doctest::Approx(0.0));
  CHECK(evals[2] == doctest::Approx(0.0));
  CHECK(evals[3] == doctest::Approx(0.5));

  CHECK((prop.unitary(0.0) - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-12);

  ChainSpec big;
  big.n = 12;
  CHECK_THROWS_AS(Propagator(big, 10), budget_error);
}

TEST_CASE("propagator: unitarity over random times") {
  ChainSpec spec;
  spec.n = 5;
  Propagator prop(spec);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0 * spec.transfer_time());
  for (int trial = 0; trial < 4; ++trial) {
    double t = u(rng);
    Eigen::MatrixXcd ut = prop.unitary(t);
    CHECK((ut * ut.adjoint() - Eigen::MatrixXcd::Identity(32, 32)).norm() <
          1e-10);
    CHECK((prop.unitary(-t) - ut.adjoint()).norm() < 1e-10);
  }
}

TEST_CASE("evolve: fixed time examples") {
  ChainSpec spec;
  spec.n = 2;
  Propagator prop(spec);

  auto start = QuantumState::basis_state(2, 2);  // |10>
  auto still = evolve(start, prop, 0.0);
  CHECK((still.vector() - start.vector()).norm() < 1e-12);

  auto swapped = evolve(start, prop, spec.transfer_time());
  // lands on |01> with phase -i
  CHECK(std::abs(swapped.vector()(1) - std::complex<double>(0, -1)) < 1e-10);
  CHECK(std::abs(swapped.vector()(2)) < 1e-10);
}

TEST_CASE("evolve: norm, trace and energy are conserved") {
  ChainSpec spec;
  spec.n = 4;
  spec.b = 0.2;
  Propagator prop(spec);
  Eigen::MatrixXcd h = hamiltonian_dense(spec);

  auto psi = random_pure_state(4, 21);
  double e0 = (psi.vector().adjoint() * h * psi.vector())(0).real();
  for (double t : {0.3, 1.1, 4.0}) {
    auto out = evolve(psi, prop, t);
    CHECK(out.vector().norm() == doctest::Approx(1.0));
    double e = (out.vector().adjoint() * h * out.vector())(0).real();
    CHECK(e == doctest::Approx(e0).epsilon(1e-10));
  }
}

TEST_CASE("evolve: density path equals ensemble-of-pure path") {
  ChainSpec spec;
  spec.n = 5;
  Propagator prop(spec);
  auto rho = QuantumState::mixed(5, random_density_matrix(32, 4, 99));
  double t = 0.9;

  Eigen::MatrixXcd direct = evolve(rho, prop, t).matrix();
  Eigen::MatrixXcd summed = Eigen::MatrixXcd::Zero(32, 32);
  for (const auto& [w, psi] : rho.ensemble()) {
    Eigen::VectorXcd out = prop.evolve_vector(psi, t);
    summed += w * out * out.adjoint();
  }
  CHECK((direct - summed).norm() < 1e-11);
}

TEST_CASE("heisenberg picture: invariants and mirror images") {
  ChainSpec spec;
  spec.n = 4;
  Propagator prop(spec);
  Eigen::MatrixXcd h = hamiltonian_dense(spec);
  CHECK((heisenberg_at(h, prop, 1.7) - h).norm() < 1e-10);

  const double tstar = spec.transfer_time();
  for (int n : {3, 4, 5, 6}) {
    ChainSpec s;
    s.n = n;
    Propagator p(s);
    CHECK((heisenberg_at(embed_sigma(n, 1, 'Z'), p, s.transfer_time()) -
           embed_sigma(n, n, 'Z'))
              .norm() < 1e-9);
  }

  // X1 does not arrive as a local operator on the last site
  Eigen::MatrixXcd x1t = heisenberg_at(embed_sigma(4, 1, 'X'), prop, tstar);
  CHECK((x1t - embed_sigma(4, 4, 'X')).norm() > 0.5);
  CHECK((x1t - embed_sigma(4, 4, 'Y')).norm() > 0.5);
}

TEST_CASE("heisenberg and schroedinger pictures are dual") {
  ChainSpec spec;
  spec.n = 4;
  Propagator prop(spec);
  std::mt19937_64 rng(55);
  auto rho = QuantumState::mixed(4, random_density_matrix(16, 5, rng()));
  Eigen::MatrixXcd o = Eigen::MatrixXcd::Random(16, 16);
  o = (o + o.adjoint()).eval();
  for (double t : {0.4, 2.0}) {
    auto lhs = (evolve(rho, prop, t).matrix() * o).trace();
    auto rhs = (rho.matrix() * heisenberg_at(o, prop, t)).trace();
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("mirror relations hold on engineered chains, both parities") {
  for (int n = 3; n <= 8; ++n) {
    ChainSpec spec;
    spec.n = n;
    MirrorReport report = verify_mirror_relations(spec, 1e-9);
    CAPTURE(n);
    CHECK(report.all_pass);
    CHECK(report.branch == (n % 2 == 0 ? "even" : "odd"));
    for (const auto& rel : report.relations) {
      CAPTURE(rel.name);
      CHECK(rel.residual < 1e-9);
    }
  }
}

TEST_CASE("mirror relations fail for a uniform four-site chain") {
  ChainSpec spec;
  spec.n = 4;
  spec.profile = CouplingProfile::Custom;
  spec.custom = {1, 1, 1};
  MirrorReport report = verify_mirror_relations(spec, 1e-9);
  CHECK_FALSE(report.all_pass);
  double worst = 0.0;
  for (const auto& rel : report.relations)
    worst = std::max(worst, rel.residual);
  CHECK(worst > 0.1);  // order-one violation, not a tolerance artifact
}

TEST_CASE("mirrored-pair operators are periodic with period 2 t*") {
  ChainSpec spec;
  spec.n = 5;
  Propagator prop(spec);
  const double t2 = 2.0 * spec.transfer_time();
  for (int i = 1; i <= spec.n; ++i) {
    Eigen::MatrixXcd z = embed_sigma(spec.n, i, 'Z');
    CHECK((heisenberg_at(z, prop, t2) - z).norm() < 1e-9);
  }
  Eigen::MatrixXcd xx =
      embed_sigma(5, 1, 'X') * embed_sigma(5, 5, 'X');
  CHECK((heisenberg_at(xx, prop, t2) - xx).norm() < 1e-9);
}

TEST_CASE("one-excitation transfer amplitude follows the length mod 4 rule") {
  const std::complex<double> minus_i(0.0, -1.0);
  for (int n = 2; n <= 9; ++n) {
    ChainSpec spec;
    spec.n = n;
    auto amp = one_excitation_transfer_amplitude(spec);
    auto expect = std::pow(minus_i, n - 1);
    CAPTURE(n);
    CHECK(std::abs(amp - expect) < 1e-9);
  }
}

TEST_CASE("taylor series converges to the dense evolution") {
  ChainSpec spec;
  spec.n = 4;
  auto cpl = spec.couplings();
  auto h = build_hamiltonian_symbolic(4);
  auto o = parse_pauli_operator("X1 X2 + Y1 Y2", 4, true);
  double t = spec.transfer_time() / 10.0;
  auto truncated = taylor_evolve(h, o, t, 30, cpl);
  Propagator prop(spec);
  Eigen::MatrixXcd dense = heisenberg_at(to_matrix(o, cpl), prop, t);
  CHECK((truncated.to_matrix() - dense).norm() < 1e-8);
}

TEST_CASE("dimension mismatches are rejected") {
  ChainSpec spec;
  spec.n = 3;
  Propagator prop(spec);
  CHECK_THROWS_AS(evolve(QuantumState::all_down(2), prop, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(heisenberg_at(Eigen::MatrixXcd::Identity(4, 4), prop, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(measure_site(QuantumState::all_down(3), SpinAxis::Z, 4, +1),
                  std::invalid_argument);
  CHECK_THROWS_AS(embed_sigma(3, 0, 'Z'), std::invalid_argument);
}

TEST_CASE("states serialize through JSON") {
  auto psi = random_pure_state(3, 17);
  auto back = state_from_json(to_json(psi));
  CHECK(back.is_pure());
  CHECK((back.vector() - psi.vector()).norm() < 1e-15);

  auto rho = QuantumState::mixed(2, random_density_matrix(4, 2, 18));
  auto back2 = state_from_json(to_json(rho));
  CHECK((back2.matrix() - rho.matrix()).norm() < 1e-15);
}
