// Copyright 2026 The entdyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "entdyn/bounds.hpp"
#include "test_util.hpp"

using namespace entdyn;
using namespace entdyn::bounds;
using qcore::DensityMatrix;
using qcore::PureState;
using qcore::SubsystemMask;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

bool all_pass(const std::vector<CertificateReport>& rs) {
  bool ok = true;
  for (const auto& r : rs) {
    if (!r.pass) {
      UNSCOPED_INFO(r.theorem_id << " failed: lhs " << r.lhs << " rhs " << r.rhs << " " << r.notes);
      ok = false;
    }
  }
  return ok;
}

const CertificateReport& find(const std::vector<CertificateReport>& rs, const std::string& id) {
  for (const auto& r : rs)
    if (r.theorem_id == id) return r;
  throw std::runtime_error("no report " + id);
}

double entropy_of(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-15) s -= p * std::log(p);
  }
  return s;
}

PureState ghz(int n) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dimension_of(n)));
  v(0) = v(v.size() - 1) = 1.0 / std::sqrt(2.0);
  return PureState(n, v);
}

}  // namespace

TEST_CASE("CertificateReport pass rule", "[bounds][report]") {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double lhs = u(rng), rhs = u(rng), tol = std::abs(u(rng)) * 0.1, se = std::abs(u(rng)) * 0.1;
    const auto r = CertificateReport::make("x", lhs, rhs, tol, se, CheckKind::statistical);
    CHECK(r.margin == rhs - lhs);
    CHECK(r.pass == (rhs - lhs >= -(tol + 3.0 * se)));
  }
  CHECK_FALSE(CertificateReport::make("nan", std::nan(""), 0.0, 1.0, 0.0, CheckKind::exact).pass);
  const auto j = CertificateReport::make("x", 1.0, 2.0, 0.0, 0.0, CheckKind::exact).to_json();
  CHECK(j["margin"] == 1.0);
  CHECK(j["kind"] == "exact");

  InequalityTally a("t", 1e-7), b("t", 1e-7);
  a.add(0.0, 1.0);
  a.add(0.5, 0.6);
  b.add(1.0, 0.5);
  CHECK(a.ok());
  CHECK_THAT(a.worst_margin(), WithinAbs(0.1, 1e-15));
  a.merge(b);
  CHECK(a.count() == 3);
  CHECK(a.violations() == 1);
  CHECK_FALSE(a.report().pass);
  CHECK(a.report().lhs == 1.0);
}

TEST_CASE("Haar mean entropy closed form", "[bounds][page]") {
  CHECK_THAT(page_mean_entropy(2, 2), WithinAbs(1.0 / 3.0, 1e-15));
  CHECK(page_mean_entropy(1, 7) == 0.0);
  CHECK_THAT(page_mean_entropy(2, 4), WithinAbs(428.0 / 840.0, 1e-15));
  CHECK_THAT(page_mean_entropy(2, 4), WithinAbs(0.509524, 1e-6));
  // direct ascending harmonic sum as the oracle
  for (auto [da, db] : {std::pair{4, 16}, std::pair{3, 5}, std::pair{8, 8}}) {
    double s = 0.0;
    for (int k = db + 1; k <= da * db; ++k) s += 1.0 / k;
    s -= (da - 1.0) / (2.0 * db);
    CHECK_THAT(page_mean_entropy(da, db), WithinAbs(s, 1e-13));
    CHECK(page_mean_entropy(da, db) <= std::log(da));
  }
  CHECK_THAT(page_mean_entropy(4, 16), WithinAbs(1.2694119105, 1e-9));
  CHECK_THROWS_AS(page_mean_entropy(4, 2), InvalidArgument);
}

TEST_CASE("subsystem families", "[bounds][subsystems]") {
  CHECK(contiguous_subsystems(6, 2).size() == 6);
  CHECK(contiguous_subsystems(6, 2).back().to_string() == "{0,5}");
  CHECK(all_subsets(6, 2).size() == 15);
  CHECK(all_subsets(6, 3).size() == 20);
  const auto w = window_subsystems(8, 3, 8);
  CHECK(w.size() == 8);
  CHECK(w[1].to_string() == "{3,4,5}");
  CHECK(w[2].to_string() == "{0,6,7}");
  CHECK_NOTHROW(window_subsystems(6, 2, 3));
  CHECK_THROWS_WITH(window_subsystems(6, 2, 2), Catch::Matchers::ContainsSubstring("covering"));
  CHECK_THROWS_WITH(check_covering(4, {SubsystemMask{0, 1}, SubsystemMask{0, 2}}), Catch::Matchers::ContainsSubstring("covering"));
  CHECK_THROWS_AS(subsystem_family(6, 4, SubsystemScheme::contiguous()), InvalidArgument);

  const auto prod = sampling::sample_haar_product_state(6, 11);
  for (const auto& s : {SubsystemScheme::contiguous(), SubsystemScheme::all_subsets(), SubsystemScheme::windows(3)})
    CHECK(subsystem_average_entropy(prod, 2, s) <= 1e-10);

  CHECK_THAT(subsystem_average_entropy(ghz(4), 2, SubsystemScheme::all_subsets()), WithinAbs(kLn2, 1e-12));
  // a translation-invariant state: every window gives the same value
  Rng rng(4);
  CVector v = CVector::Zero(64);
  for (std::uint64_t b = 0; b < 64; ++b) {
    const Complex c = complex_normal(rng);
    // orbit sums over cyclic shifts
    std::uint64_t x = b;
    for (int s = 0; s < 6; ++s) {
      v(static_cast<Eigen::Index>(x)) += c;
      x = ((x << 1) | (x >> 5)) & 63;
    }
  }
  const PureState ti = PureState::normalized(6, v);
  const double s0 = qcore::von_neumann_entropy(qcore::partial_trace(ti, SubsystemMask{0, 1}));
  CHECK_THAT(subsystem_average_entropy(ti, 2, SubsystemScheme::contiguous()), WithinAbs(s0, 1e-10));
  // density-matrix overload agrees with the pure-state one
  CHECK_THAT(subsystem_average_entropy(DensityMatrix::from_pure(ti), 3, SubsystemScheme::all_subsets()),
             WithinAbs(subsystem_average_entropy(ti, 3, SubsystemScheme::all_subsets()), 1e-10));
}

TEST_CASE("two-site deviation bound", "[bounds][two_site]") {
  const qcore::HermitianOperator zz(2, {qcore::PauliString(1.0, {{0, qcore::Pauli::Z}, {1, qcore::Pauli::Z}})});
  const auto r = two_site_check(DensityMatrix::maximally_mixed(4), zz);
  CHECK(r.pass);
  CHECK_THAT(r.margin, WithinAbs(0.0, 1e-12));
  CHECK(r.instance["epsilon"] == 0.0);

  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto h = testing::random_pauli_sum(2, 6, rng);
    const auto& s = h.spectrum();
    const DensityMatrix ground = DensityMatrix::from_pure(PureState::normalized(2, s.eigenvectors.col(0)));
    const auto g = two_site_check(ground, h.scaled(1.0 / h.operator_norm()));
    CHECK(g.pass);
    CHECK_THAT(g.instance["epsilon"].get<double>(), WithinAbs(std::abs(s.eigenvalues(0)) / h.operator_norm(), 1e-10));
    CHECK_THAT(g.lhs, WithinAbs(0.0, 1e-8));
  }
  const qcore::HermitianOperator shifted(2, {qcore::PauliString(1.0, {}), qcore::PauliString(1.0, {{0, qcore::Pauli::Z}})});
  CHECK_THROWS_AS(two_site_check(DensityMatrix::maximally_mixed(4), shifted), InvalidArgument);

  // both sides of the paired spectrum at eps = 1, evaluated by hand
  const auto spectra = extremal_spectra(1.0);
  REQUIRE(spectra.size() == 2);
  CHECK_THAT(spectrum_entropy(spectra[0]), WithinAbs(kLn2, 1e-15));
  CHECK_THAT(two_site_entropy_bound(1.0), WithinAbs(2.0 * kLn2 - 0.5, 1e-15));
  CHECK(spectrum_entropy(spectra[0]) < two_site_entropy_bound(1.0));
  CHECK(extremal_spectra(0.5).size() == 3);
  for (const auto& p : extremal_spectra(0.37)) CHECK_THAT(std::abs(p[0] - 0.25) + std::abs(p[1] - 0.25) + std::abs(p[2] - 0.25) + std::abs(p[3] - 0.25), WithinAbs(0.37, 1e-15));

  const auto sweep = two_site_extremal_sweep(1e-3);
  CHECK(sweep.count() == 1001 * 2 + 501);
  CHECK(sweep.ok());

  InequalityTally random("two_site_random", kTwoSiteTolerance);
  for (int i = 0; i < 1000; ++i) {
    const auto h = testing::random_pauli_sum(2, 1 + i % 8, rng);
    const auto rho = testing::random_density(4, 1 + i % 4, rng);
    const auto c = two_site_check(rho, h);
    random.add(c.lhs, c.rhs);
  }
  CHECK(random.ok());
}

TEST_CASE("local-chain certificate", "[bounds][lattice]") {
  const auto chain = models::build_lattice_chain({.num_qubits = 8, .seed = 21});
  const auto grid = dynamics::TimeGrid::linear(0.0, 20.0, 50);
  const auto psi = sampling::sample_haar_product_state(8, 5);
  const auto cert = theorem_lat_certificate(chain, psi, grid, 2);
  CHECK(all_pass(cert.reports()));
  CHECK(cert.points.size() == 50);
  CHECK(cert.points.front().lhs <= 1e-10);
  CHECK(cert.two_site.count() == 50u * 8u);

  // brute-force oracle on the dense state at a few times
  const dynamics::EvolutionContext ctx(chain.hamiltonian, psi);
  for (std::size_t k : {7u, 23u, 49u}) {
    const CVector v = ctx.evolve(grid.times[k]).amplitudes();
    const CMatrix rho = v * v.adjoint();
    double lhs = 0.0, sum_eps = 0.0;
    for (int j = 0; j < 8; ++j) {
      std::vector<int> keep{j, (j + 1) % 8};
      std::sort(keep.begin(), keep.end());
      const CMatrix r2 = testing::partial_trace_oracle(rho, 8, keep);
      lhs += entropy_of(r2);
      const auto& b = chain.bonds[static_cast<std::size_t>(j)];
      sum_eps += std::abs((r2 * testing::kron_operator(b.local)).trace().real()) / b.norm;
    }
    lhs /= 8.0;
    CHECK_THAT(cert.points[k].lhs, WithinAbs(lhs, 1e-9));
    CHECK_THAT(cert.points[k].sum_eps, WithinAbs(sum_eps, 1e-9));
    CHECK_THAT(cert.points[k].energy, WithinAbs(ctx.energy(), 1e-9));
  }
  CHECK_THROWS_AS(theorem_lat_certificate(chain, psi, grid, 1), InvalidArgument);
  CHECK_THROWS_AS(theorem_lat_certificate(chain, psi, grid, 5), InvalidArgument);
  const auto open = models::build_lattice_chain({.num_qubits = 8, .boundary = models::Boundary::open, .seed = 21});
  CHECK_THROWS_AS(theorem_lat_certificate(open, psi, grid, 2), InvalidArgument);

  const auto suite = lat_certificate_suite(chain, 3, 4, 99, dynamics::TimeGrid::linear(0.0, 20.0, 20), 2);
  CHECK(all_pass(suite.reports()));
}

TEST_CASE("local-chain corollary on a translation-invariant chain", "[bounds][lattice][statistical]") {
  const auto chain = models::build_lattice_chain({.num_qubits = 6, .translationally_invariant = true, .seed = 2});
  const auto reps = lat_corollary_certificate(chain, 2, 60, 17, dynamics::TimeGrid::linear(0.0, 10.0, 20));
  CHECK(all_pass(reps));
  CHECK(find(reps, "corollary_sup_mean").lhs < 2.0 * kLn2);
}

TEST_CASE("charge certificate", "[bounds][charge]") {
  const auto circuit = models::build_charge_circuit({.num_qubits = 6, .depth = 20, .seed = 4});
  const auto windows = window_subsystems(6, 2, 6);
  SECTION("all-zero state") {
    const auto cert = theorem_charge_certificate(circuit, PureState::basis(6, 0), 2, windows);
    for (const auto& p : cert.points) {
      CHECK_THAT(p.rhs, WithinAbs(2.0 * kLn2 - 0.5, 1e-12));
      CHECK_THAT(p.sum_abs_z, WithinAbs(6.0, 1e-10));
      CHECK(p.lhs <= 1e-9);
    }
    CHECK(cert.points.size() == 21);
  }
  SECTION("Haar product states") {
    const auto suite = charge_certificate_suite(circuit, 2, windows, 6, 31);
    CHECK(all_pass(suite.reports()));
    const auto depth0 = theorem_charge_certificate(models::build_charge_circuit({.num_qubits = 6, .depth = 0}),
                                                   sampling::sample_haar_product_state(6, 2), 2, windows);
    CHECK(depth0.points.size() == 1);
    CHECK(depth0.points[0].lhs <= 1e-10);
  }
  SECTION("single-qubit lemma and preconditions") {
    CHECK(qcore::von_neumann_entropy(DensityMatrix::diagonal(RVector::Unit(2, 0))) <= qubit_entropy_bound(1.0));
    CHECK_THAT(qubit_entropy_bound(1.0), WithinAbs(kLn2 - 0.5, 1e-15));
    CHECK_THROWS_AS(theorem_charge_certificate(circuit, PureState::basis(6, 0), 2, {SubsystemMask{0, 1}, SubsystemMask{0, 2}, SubsystemMask{1, 2}}),
                    InvalidArgument);
  }
}

TEST_CASE("thermodynamic curves", "[bounds][thermo][statistical]") {
  // term-by-term oracle for the envelope
  auto band_oracle = [](double b) {
    double s = -b * std::exp(b * b / 2.0);
    double fact = 1.0;
    for (int k = 1; k <= 40; ++k) {
      fact *= (2.0 * k - 1.0) * (2.0 * k);
      s += std::pow(b, 2 * k) * std::sqrt(stats::double_factorial(4 * k + 1)) / fact;
    }
    return s;
  };
  for (double b : {0.0, -0.05, -0.1, -0.3, -0.7, -1.0}) CHECK_THAT(energy_band(b), WithinAbs(band_oracle(b), 1e-12));
  CHECK_THAT(energy_band(-0.1), WithinAbs(0.1 * std::exp(0.005) + 0.01 * std::sqrt(15.0) / 2.0 + 1e-4 * std::sqrt(945.0) / 24.0 + 1e-6 * std::sqrt(135135.0) / 720.0, 1e-8));

  const auto psi = PureState::basis(4, 0);
  const auto c = thermo_curves(DisorderKind::spin_glass, 4, {-0.3, -0.2, -0.1, -0.05, 0.05, 0.1}, 1000, psi, 12, 1, true);
  CHECK(all_pass(c.reports));
  CHECK(c.plus_count + c.minus_count == 1000);
  const auto row = std::find_if(c.rows.begin(), c.rows.end(), [](const ThermoRow& r) { return r.beta == -0.1; });
  INFO("E(-0.1) = " << row->energy.mean << " +- " << row->energy.std_error << " band " << row->band);
  CHECK(std::abs(row->energy.mean - 0.1) < 0.02);
  CHECK(row->energy.mean <= row->band + 3.0 * row->energy.std_error);
  const auto zero = std::find_if(c.rows.begin(), c.rows.end(), [](const ThermoRow& r) { return r.beta == 0.0; });
  CHECK_THAT(zero->energy.mean, WithinAbs(0.0, 1e-12));
  CHECK_THAT(zero->entropy.mean, WithinAbs(4.0 * kLn2, 1e-12));
  CHECK_THROWS_AS(thermo_curves(DisorderKind::spin_glass, 4, {-0.1}, 99, psi, 1), InvalidArgument);
  CHECK_THROWS_AS(thermo_curves(DisorderKind::spin_glass, 4, {-1.5}, 100, psi, 1), InvalidArgument);
}

TEST_CASE("common temperature solver", "[bounds][thermal]") {
  Rng rng(6);
  const auto h = testing::random_pauli_sum(3, 8, rng);
  const RVector e = h.spectrum().eigenvalues;
  const double target = 0.3 * e.maxCoeff();
  const auto b = solve_common_beta({e}, target);
  CHECK(b.beta < 0.0);
  CHECK_THAT(b.beta, WithinAbs(qcore::solve_beta_for_energy(e, target), 1e-6));
  CHECK_THAT(b.constraint_value, WithinAbs(target, kBetaConstraintTolerance));
  // thermal extremality against random states at the same energy
  for (int i = 0; i < 200; ++i) {
    const auto rho = testing::random_density(8, 1 + i % 8, rng);
    const double energy = qcore::expectation_value(rho, h);
    if (energy <= 0.0) continue;
    CHECK(qcore::von_neumann_entropy(rho) <= solve_common_beta({e}, energy).mean_entropy + 1e-7);
  }
  CHECK(solve_common_beta({e, -e}, 0.0).beta == 0.0);
}

TEST_CASE("spin-glass certificate", "[bounds][spin_glass]") {
  const TimePolicy policy{.t0 = 0.0, .t1 = 30.0, .count = 30};
  const auto c = theorem_sg_certificate(4, 2, 120, PureState::basis(4, 0), policy, 7);
  CHECK(all_pass(c.reports));
  CHECK(c.thermal.beta < 0.0);
  CHECK_THAT(c.closed_form, WithinAbs(std::sqrt(2.0 / (9.0 * std::numbers::pi)), 1e-12));
  CHECK(c.measured.mean < c.thermal.mean_entropy);
  // Haar product states share the closed form: unit Bloch vectors give variance 1/9
  CHECK_THAT(spin_glass_energy_variance(sampling::sample_haar_product_state(5, 3)), WithinAbs(1.0 / 9.0, 1e-12));
  CHECK_THROWS_WITH(theorem_sg_certificate(4, 2, 120, PureState::basis(4, 0), TimePolicy{.count = 19}, 7),
                    Catch::Matchers::ContainsSubstring("too coarse"));
  CHECK_THROWS_AS(theorem_sg_certificate(4, 2, 120, ghz(4), policy, 7), InvalidArgument);
  CHECK_THROWS_AS(theorem_sg_certificate(4, 1, 120, PureState::basis(4, 0), policy, 7), InvalidArgument);

  const TimePolicy random{.sampling = dynamics::TimeSampling::uniform_random, .t1 = 30.0, .count = 25, .seed = 5};
  CHECK(all_pass(theorem_sg_certificate(4, 2, 100, sampling::sample_haar_product_state(4, 8), random, 9).reports));
}

TEST_CASE("SYK certificate", "[bounds][syk]") {
  // |0...0>: <chi chi chi chi> is nonzero exactly for two complete pairs
  const auto q = majorana_quartic_expectations(PureState::basis(4, 0), 8);
  REQUIRE(q.size() == 70);
  int idx = 0, nonzero = 0;
  models::for_each_quadruple(8, [&](int, const std::array<int, 4>& m) {
    const bool pairs = m[0] % 2 == 0 && m[1] == m[0] + 1 && m[2] % 2 == 0 && m[3] == m[2] + 1;
    CHECK_THAT(std::abs(q[static_cast<std::size_t>(idx)]), WithinAbs(pairs ? 1.0 : 0.0, 1e-12));
    nonzero += pairs;
    ++idx;
  });
  CHECK(nonzero == 6);

  const TimePolicy policy{.t0 = 0.0, .t1 = 30.0, .count = 25};
  const auto c = theorem_syk_certificate(8, 4, 100, PureState::basis(4, 0), policy, 3);
  CHECK(all_pass(c.reports));
  CHECK(c.instance["engf_count"] == 6);
  CHECK_THAT(c.closed_form, WithinAbs(std::sqrt(2.0 / std::numbers::pi * 6.0 / 70.0), 1e-12));
  CHECK(c.entropy_max == 2.0 * kLn2);
  CHECK_THROWS_AS(theorem_syk_certificate(8, 2, 100, PureState::basis(4, 0), policy, 3), InvalidArgument);
}

TEST_CASE("translation-invariant equilibration", "[bounds][equilibration]") {
  const auto chain = build_ti_chain(6, 1);
  REQUIRE(chain.gaps);
  const auto c = theorem_ti_equilibration_certificate(chain, 1, 20, 0.0, 20, 5);
  CHECK(all_pass(c.reports));
  CHECK(c.deficit > 0.0);

  SECTION("eigenstate purity at N = 8, n = 2") {
    const auto chain8 = build_ti_chain(8, 1);
    const dynamics::EvolutionContext ctx(chain8.hamiltonian, PureState::basis(8, 0));
    const auto f = eigenstate_floor(ctx, SubsystemMask{0, 1});
    CHECK_THAT(f.purity_bound, WithinAbs(0.75, 1e-15));
    CHECK(f.mean_purity <= 0.75 + 1e-7);
    CHECK(f.mean_entropy >= -std::log(f.mean_purity) - 1e-7);
  }
  SECTION("eigenstate negative control") {
    const CVector v = chain.hamiltonian.spectrum().eigenvectors.col(10);
    const dynamics::EvolutionContext ctx(chain.hamiltonian, PureState::normalized(6, v));
    const auto t = dynamics::entropy_timeseries(ctx, dynamics::TimeGrid::linear(0.0, 50.0, 11), {SubsystemMask{0}});
    for (Eigen::Index k = 1; k < t.entropy.rows(); ++k) CHECK_THAT(t.entropy(k, 0), WithinAbs(t.entropy(0, 0), 1e-9));
  }
  SECTION("degenerate gaps are refused") {
    const auto zz = models::build_lattice_chain(
        {.num_qubits = 6, .translationally_invariant = true,
         .bond_term = std::vector<qcore::PauliString>{qcore::PauliString(1.0, {{0, qcore::Pauli::Z}, {1, qcore::Pauli::Z}})}});
    CHECK_THROWS_WITH(theorem_ti_equilibration_certificate(zz, 1, 5, 10.0, 5, 1), Catch::Matchers::ContainsSubstring("gap"));
  }
  SECTION("trend helper needs three sizes") {
    CHECK_THROWS_WITH(ti_equilibration_trends({c, c}), Catch::Matchers::ContainsSubstring("fewer than 3 sweep points"));
  }
}
