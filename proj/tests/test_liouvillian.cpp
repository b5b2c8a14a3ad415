// Copyright 2026 The jumpfb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <numbers>
#include <random>

#include "jumpfb/liouvillian.hpp"
#include "test_support.hpp"

using namespace jumpfb;
using jumpfb::testing::max_abs;

namespace {

constexpr double pi = std::numbers::pi;

SystemConfig random_config(std::mt19937_64& rng, bool with_decay) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SystemConfig c;
  c.omega = 3.0 * u(rng);
  c.gamma_collective = 0.5 + u(rng);
  c.eta = u(rng);
  const int kind = static_cast<int>(3.0 * u(rng));
  const double s = -pi + 2.0 * pi * u(rng);
  c.feedback = kind == 0 ? Feedback::none() : kind == 1 ? Feedback::collective(s) : Feedback::local(s);
  if (with_decay) {
    c.gamma1 = 0.05 * u(rng);
    c.gamma2 = 0.05 * u(rng);
    c.gamma_deph = 0.05 * u(rng);
  }
  return c;
}

}  // namespace

TEST_CASE("dissipator matches the density-matrix expression") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const Operator c = jumpfb::testing::random_matrix(rng);
    const DensityMatrix rho = jumpfb::testing::random_density(rng);
    const Operator cdc = c.adjoint() * c;
    const Operator direct = c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc);
    const Superoperator d = dissipator(c);
    CHECK(max_abs(jumpfb::apply(d, rho) - direct) < 1e-12);
    CHECK(trace_defect(d) < 1e-12);
  }
}

TEST_CASE("dissipator examples") {
  const auto ops = collective_ops();
  const Superoperator d = dissipator(ops.j_minus);
  CHECK(max_abs(jumpfb::apply(d, projector(ket_singlet()))) == 0.0);

  const Operator expected = 2.0 * projector(ket_symmetric()) - 2.0 * projector(ket_ee());
  CHECK(max_abs(jumpfb::apply(d, projector(ket_ee())) - expected) < 1e-14);
}

TEST_CASE("hamiltonian term") {
  CHECK(max_abs(hamiltonian_term(Operator::Zero()).matrix) == 0.0);
  std::mt19937_64 rng(5);
  const DensityMatrix rho = jumpfb::testing::random_density(rng);
  CHECK(max_abs(jumpfb::apply(hamiltonian_term(Operator::Identity()), rho)) == 0.0);

  const Operator h = jumpfb::testing::random_hermitian(rng);
  const Operator out = jumpfb::apply(hamiltonian_term(h), rho);
  const Operator direct = Complex<double>(0, -1) * (h * rho - rho * h);
  CHECK(max_abs(out - direct) < 1e-12);
  CHECK(std::abs(out.trace()) < 1e-12);

  CHECK_THROWS_AS(hamiltonian_term(collective_ops().j_minus), ConfigError);
}

TEST_CASE("build rejects invalid configs") {
  SystemConfig c;
  c.eta = 1.5;
  CHECK_THROWS_AS(build(c), ConfigError);
  c = {};
  c.gamma_collective = 0.0;
  CHECK_THROWS_AS(build(c), ConfigError);
  c = {};
  c.gamma1 = -0.1;
  CHECK_THROWS_AS(build(c), ConfigError);
  c = {};
  c.omega = std::nan("");
  CHECK_THROWS_AS(build(c), ConfigError);
}

TEST_CASE("zero efficiency is entry-wise the no-feedback generator") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 20; ++k) {
    SystemConfig c = random_config(rng, true);
    c.eta = 0.0;
    SystemConfig none = c;
    none.feedback = Feedback::none();
    CHECK(build(c).matrix == build(none).matrix);
  }
}

TEST_CASE("generators preserve trace and Hermiticity") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 50; ++k) {
    const Superoperator l = build(random_config(rng, true));
    CHECK(trace_defect(l) < 1e-12);
    const Operator out = jumpfb::apply(l, jumpfb::testing::random_hermitian(rng));
    CHECK(max_abs(out - out.adjoint()) < 1e-12);
  }
}

TEST_CASE("rates enter linearly") {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 10; ++k) {
    SystemConfig c = random_config(rng, true);
    const double s = 2.5;
    SystemConfig scaled = c;
    scaled.gamma_collective *= s;
    scaled.gamma1 *= s;
    scaled.gamma2 *= s;
    scaled.gamma_deph *= s;
    const SuperMatrix hamiltonian = hamiltonian_term(Operator(c.omega * collective_ops().j_x)).matrix;
    const SuperMatrix dissipative = build(c).matrix - hamiltonian;
    CHECK(max_abs(build(scaled).matrix - (hamiltonian + s * dissipative)) < 1e-12);
  }
}

TEST_CASE("efficiency splits the generator convexly") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    SystemConfig c = random_config(rng, false);
    if (c.feedback.kind == FeedbackKind::None) c.feedback = Feedback::local(1.0);
    SystemConfig full = c;
    full.eta = 1.0;
    SystemConfig none = c;
    none.feedback = Feedback::none();
    const double eta = c.eta;
    CHECK(max_abs(build(c).matrix - (eta * build(full).matrix + (1.0 - eta) * build(none).matrix)) < 1e-12);
  }
}

TEST_CASE("the singlet is stationary without local decay") {
  std::mt19937_64 rng(37);
  const LiouvilleVector singlet = vec(projector(ket_singlet()));
  for (int k = 0; k < 50; ++k) {
    const Superoperator l = build(random_config(rng, false));
    CHECK((l.matrix * singlet).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("ground state is stationary without drive or feedback") {
  SystemConfig c;
  c.omega = 0.0;
  const Superoperator l = build(c);
  CHECK((l.matrix * vec(projector(ket_gg()))).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generator is pi-periodic in the feedback strength") {
  for (const auto kind : {FeedbackKind::Collective, FeedbackKind::Local}) {
    SystemConfig a;
    a.omega = 0.3;
    a.gamma1 = 0.01;
    a.feedback = {kind, 1.49};
    SystemConfig b = a;
    b.feedback.strength = 1.49 - pi;
    CHECK(max_abs(build(a).matrix - build(b).matrix) < 1e-12);
  }
}

TEST_CASE("labels record the assembled terms") {
  SystemConfig c;
  c.omega = 0.4;
  c.eta = 0.5;
  c.gamma1 = 0.01;
  c.feedback = Feedback::local(1.0);
  const Superoperator l = build(c);
  CHECK(l.labels.size() == 4);
  CHECK(l.labels.front() == "-iΩ[J_x,.]");
}
