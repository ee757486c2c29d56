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
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "entdyn/dynamics.hpp"
#include "entdyn/models.hpp"
#include "entdyn/sampling.hpp"
#include "test_util.hpp"

using namespace entdyn;
using namespace entdyn::dynamics;
using qcore::Pauli;
using qcore::PauliString;
using Catch::Matchers::WithinAbs;

namespace {

HermitianOperator op(int n, std::vector<PauliString> terms) { return HermitianOperator(n, std::move(terms)); }

PureState plus() { return PureState::normalized(1, (CVector(2) << 1.0, 1.0).finished()); }

HermitianOperator sz() { return op(1, {PauliString(1.0, {{0, Pauli::Z}})}); }

}  // namespace

TEST_CASE("evolution", "[dynamics][evolve]") {
  const EvolutionContext ctx(sz(), plus());
  CHECK((ctx.evolve(0.0).amplitudes() - plus().amplitudes()).norm() < 1e-15);
  // e^{-i Z pi/2}|+> = (e^{-i pi/2}|0> + e^{i pi/2}|1>)/sqrt 2
  const CVector expect = (CVector(2) << Complex(0, -1), Complex(0, 1)).finished() / std::sqrt(2.0);
  CHECK((ctx.evolve(std::numbers::pi / 2).amplitudes() - expect).norm() < 1e-14);

  SECTION("norm and energy conservation; agreement with the matrix exponential") {
    const auto chain = models::build_lattice_chain({.num_qubits = 5, .seed = 21});
    const auto psi = sampling::sample_haar_product_state(5, 2);
    const EvolutionContext c(chain.hamiltonian, psi);
    const double e0 = qcore::expectation_value(psi, chain.hamiltonian);
    CHECK_THAT(c.energy(), WithinAbs(e0, 1e-12));
    const CMatrix h = testing::kron_operator(chain.hamiltonian);
    for (double t : {0.3, 1.7, 12.0, 250.0}) {
      const PureState s = c.evolve(t);
      CHECK_THAT(s.amplitudes().norm(), WithinAbs(1.0, 1e-10));
      CHECK(std::abs(qcore::expectation_value(s, chain.hamiltonian) - e0) <= 1e-8 * chain.hamiltonian.operator_norm());
      const CMatrix u = (CMatrix(Complex(0, -t) * h)).exp();
      CHECK((s.amplitudes() - u * psi.amplitudes()).norm() < 1e-9);
    }
    const CMatrix batch = c.evolve_many({0.3, 1.7});
    CHECK((batch.col(1) - c.evolve(1.7).amplitudes()).norm() < 1e-13);
  }
}

TEST_CASE("time grids", "[dynamics][grid]") {
  const auto g = TimeGrid::linear(0.0, 20.0, 50);
  CHECK(g.size() == 50);
  CHECK(g.times.front() == 0.0);
  CHECK(g.times.back() == 20.0);
  const auto r = TimeGrid::uniform_random(5.0, 100, 3);
  CHECK(r.times == TimeGrid::uniform_random(5.0, 100, 3).times);
  for (double t : r.times) CHECK((t >= 0.0 && t <= 5.0));
  CHECK_THROWS_AS(TimeGrid::uniform_random(0.0, 10, 1), InvalidArgument);
  CHECK_THROWS_AS(TimeGrid::linear(1.0, 1.0, 3), InvalidArgument);
  TimeGrid bad{{1.0, 1.0}, TimeSampling::linear, 1.0};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("entropy time series", "[dynamics][entropy]") {
  SECTION("product state at t = 0") {
    const auto chain = models::build_lattice_chain({.num_qubits = 6, .seed = 4});
    const EvolutionContext ctx(chain.hamiltonian, sampling::sample_haar_product_state(6, 1));
    const auto t = entropy_timeseries(ctx, TimeGrid::linear(0.0, 10.0, 21), {SubsystemMask::range(0, 2), SubsystemMask::range(2, 3)});
    CHECK(t.entropy.row(0).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(t.entropy.col(0).maxCoeff() <= 2 * kLn2 + 1e-8);
    CHECK(t.entropy.col(1).maxCoeff() <= 3 * kLn2 + 1e-8);
  }
  SECTION("two qubits under XX from |00>") {
    // e^{-i XX t}|00> = cos t |00> - i sin t |11>
    const auto h = op(2, {PauliString(1.0, {{0, Pauli::X}, {1, Pauli::X}})});
    const EvolutionContext ctx(h, PureState::basis(2, 0));
    const auto grid = TimeGrid::linear(0.0, std::numbers::pi, 41);
    const auto t = entropy_timeseries(ctx, grid, {SubsystemMask({0})});
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double c2 = std::pow(std::cos(grid.times[k]), 2), s2 = 1.0 - c2;
      const double expect = (c2 > 0 ? -c2 * std::log(c2) : 0.0) + (s2 > 0 ? -s2 * std::log(s2) : 0.0);
      CHECK_THAT(t.entropy(static_cast<Eigen::Index>(k), 0), WithinAbs(expect, 1e-9));
    }
    CHECK_THAT(t.entropy(10, 0), WithinAbs(kLn2, 1e-12));  // t = pi/4
  }
}

TEST_CASE("diagonal ensemble", "[dynamics][diagonal]") {
  const auto chain = models::build_lattice_chain({.num_qubits = 4, .seed = 10});
  const auto& s = chain.hamiltonian.spectrum();
  const EvolutionContext eig(chain.hamiltonian, PureState::normalized(4, s.eigenvectors.col(3)));
  CHECK(testing::max_abs(diagonal_ensemble(eig).matrix() - s.eigenvectors.col(3) * s.eigenvectors.col(3).adjoint()) < 1e-12);
  CHECK_THAT(effective_dimension(eig), WithinAbs(1.0, 1e-12));

  const EvolutionContext p(sz(), plus());
  CHECK(testing::max_abs(diagonal_ensemble(p).matrix() - CMatrix::Identity(2, 2) / 2.0) < 1e-15);

  const EvolutionContext r(chain.hamiltonian, sampling::sample_haar_product_state(4, 3));
  const CMatrix inf = diagonal_ensemble(r).matrix();
  CHECK_THAT(inf.trace().real(), WithinAbs(1.0, 1e-10));
  const CMatrix h = chain.hamiltonian.dense();
  CHECK(testing::max_abs(h * inf - inf * h) < 1e-9);
  const auto keep = SubsystemMask({1, 2});
  CHECK(testing::max_abs(reduced_diagonal_ensemble(r, keep).matrix() - qcore::partial_trace(diagonal_ensemble(r), keep).matrix()) < 1e-12);
}

TEST_CASE("effective dimension", "[dynamics][deff]") {
  // H = Z0 + 2 Z1 is diagonal with four distinct levels
  const auto h = op(2, {PauliString(1.0, {{0, Pauli::Z}}), PauliString(2.0, {{1, Pauli::Z}})});
  const CVector amp = (CVector(4) << std::sqrt(0.5), std::sqrt(0.25), std::sqrt(0.125), std::sqrt(0.125)).finished();
  CHECK_THAT(effective_dimension(EvolutionContext(h, PureState(2, amp))), WithinAbs(32.0 / 11.0, 1e-12));

  const auto chain = models::build_lattice_chain({.num_qubits = 4, .seed = 2});
  const CVector uniform = chain.hamiltonian.spectrum().eigenvectors * CVector::Ones(16) / 4.0;
  CHECK_THAT(effective_dimension(EvolutionContext(chain.hamiltonian, PureState::normalized(4, uniform))), WithinAbs(16.0, 1e-9));
}

TEST_CASE("time-averaged trace distance", "[dynamics][equilibration]") {
  const auto chain = models::build_lattice_chain({.num_qubits = 4, .seed = 30});
  const auto& s = chain.hamiltonian.spectrum();
  const SubsystemMask keep({0});

  SECTION("eigenstate gives zero") {
    const EvolutionContext eig(chain.hamiltonian, PureState::normalized(4, s.eigenvectors.col(5)));
    const auto r = time_averaged_trace_distance(eig, keep, TimeGrid::uniform_random(50.0, 30, 1));
    CHECK(r.estimate.mean <= 1e-10);
  }
  SECTION("sigma^z on |+> keeps distance 1 from I/2") {
    const auto r = time_averaged_trace_distance(EvolutionContext(sz(), plus()), SubsystemMask({0}), TimeGrid::uniform_random(100.0, 200, 5));
    CHECK_THAT(r.estimate.mean, WithinAbs(1.0, 1e-12));
  }
  SECTION("Monte Carlo average matches trapezoid quadrature with exponentials") {
    const auto psi = PureState::basis(4, 0);
    const EvolutionContext ctx(chain.hamiltonian, psi);
    const double tau = 30.0;
    const auto r = time_averaged_trace_distance(ctx, keep, TimeGrid::uniform_random(tau, 4000, 8));
    // oracle: e^{-iHt} by Pade, rho_inf from explicit projectors
    const CMatrix h = testing::kron_operator(chain.hamiltonian);
    CMatrix inf = CMatrix::Zero(16, 16);
    for (Eigen::Index j = 0; j < 16; ++j) {
      const CVector v = s.eigenvectors.col(j);
      inf += std::norm(v.dot(psi.amplitudes())) * v * v.adjoint();
    }
    const CMatrix inf_a = testing::partial_trace_oracle(inf, 4, {0});
    const int steps = 6000;
    const CMatrix step = (CMatrix(Complex(0, -tau / steps) * h)).exp();
    CVector v = psi.amplitudes();
    double integral = 0.0, prev = 0.0;
    for (int k = 0; k <= steps; ++k) {
      const CMatrix ra = testing::partial_trace_oracle(v * v.adjoint(), 4, {0});
      Eigen::SelfAdjointEigenSolver<CMatrix> es(ra - inf_a);
      const double d = es.eigenvalues().cwiseAbs().sum();
      if (k > 0) integral += 0.5 * (d + prev) * tau / steps;
      prev = d;
      v = step * v;
    }
    const double oracle = integral / tau;
    INFO("MC " << r.estimate.mean << " +- " << r.estimate.std_error << " quadrature " << oracle);
    CHECK(std::abs(r.estimate.mean - oracle) <= 3.0 * r.estimate.std_error + 1e-4);
    CHECK(r.estimate.mean <= r.bound + 3.0 * r.estimate.std_error);
  }
  SECTION("short windows are flagged") {
    const EvolutionContext ctx(chain.hamiltonian, PureState::basis(4, 0));
    CHECK(time_averaged_trace_distance(ctx, keep, TimeGrid::uniform_random(0.1, 10, 1)).pre_asymptotic);
    const double tau = default_equilibration_time(ctx.eigenvalues());
    CHECK_FALSE(time_averaged_trace_distance(ctx, keep, TimeGrid::uniform_random(tau, 10, 1)).pre_asymptotic);
    CHECK_THROWS_AS(time_averaged_trace_distance(ctx, keep, TimeGrid::linear(0.0, 1.0, 10)), InvalidArgument);
  }
}

TEST_CASE("finite-window averages approach the diagonal ensemble", "[dynamics][equilibration]") {
  const auto chain = models::build_lattice_chain({.num_qubits = 4, .seed = 17});
  const EvolutionContext ctx(chain.hamiltonian, sampling::sample_haar_product_state(4, 6));
  const SubsystemMask keep({0, 1});
  const auto inf = reduced_diagonal_ensemble(ctx, keep);
  const RVector& e = ctx.eigenvalues();
  const double mean_spacing = (e(e.size() - 1) - e(0)) / static_cast<double>(e.size() - 1);
  std::vector<double> dist;
  for (double units : {10.0, 100.0, 1000.0}) {
    const double tau = units / mean_spacing;
    const int count = static_cast<int>(tau * chain.hamiltonian.operator_norm() * 4.0) + 100;
    const auto grid = TimeGrid::linear(0.0, tau, count);
    const CMatrix states = ctx.evolve_many(grid.times);
    CMatrix avg = CMatrix::Zero(4, 4);
    for (Eigen::Index k = 0; k < states.cols(); ++k) avg += qcore::partial_trace(PureState(4, states.col(k)), keep).matrix();
    avg /= static_cast<double>(states.cols());
    dist.push_back(qcore::trace_norm_distance(qcore::DensityMatrix(avg), inf));
  }
  INFO(dist[0] << " " << dist[1] << " " << dist[2]);
  CHECK(dist[0] > dist[1]);
  CHECK(dist[1] > dist[2]);
}

TEST_CASE("charge circuits conserve total magnetisation layer by layer", "[dynamics][charge]") {
  const auto circuit = models::build_charge_circuit({.num_qubits = 6, .depth = 10, .seed = 4});
  const auto sz_total = qcore::total_sigma_z(6);
  PureState psi = sampling::sample_haar_product_state(6, 9);
  const double q0 = qcore::expectation_value(psi, sz_total);
  for (std::size_t d = 0; d < circuit.layers.size(); ++d) {
    psi = models::apply_layer(circuit, d, psi);
    CHECK(std::abs(qcore::expectation_value(psi, sz_total) - q0) <= 1e-9);
  }
}

TEST_CASE("time series CSV", "[dynamics][csv]") {
  const auto h = op(2, {PauliString(1.0, {{0, Pauli::X}, {1, Pauli::X}})});
  const auto t = entropy_timeseries(EvolutionContext(h, PureState::basis(2, 0)), TimeGrid::linear(0.0, 1.0, 3), {SubsystemMask({0}), SubsystemMask({0, 1})});
  std::ostringstream out;
  write_timeseries_csv(out, t, {1.0, 2.0, 3.0});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "time,mask_id,entropy_nats,energy,bound_rhs");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 4);
  }
  CHECK(rows == 6);
  CHECK(out.str().find(",0-1,") != std::string::npos);
}
