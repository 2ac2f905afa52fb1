// Copyright 2026 The vnelab Authors.
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

#include <random>

#include "oracles.hpp"
#include "vnelab/batch.hpp"
#include "vnelab/error.hpp"
#include "vnelab/induction.hpp"

using namespace vnelab;

namespace {

GroupPtr klein() {
  return build_group(GroupSpec::direct_product({GroupSpec::cyclic(2), GroupSpec::cyclic(2)}));
}

CouplingRecord wstar_z4_klein() { return build_wstar_coupling(build_group(GroupSpec::cyclic(4)), klein()); }

CouplingRecord me_z3_z5() {
  return build_me_product_coupling(build_group(GroupSpec::cyclic(3)), build_group(GroupSpec::cyclic(5)));
}

double max_abs(const Eigen::VectorXcd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("diagonal kernel is the identity") {
  const auto k = induction_kernel(build_diagonal_coupling(build_group(GroupSpec::symmetric(3))));
  CHECK((k.k - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-12);
  std::mt19937_64 rng(1);
  const GroupFunction phi = random_multiplier(k.lambda(), rng);
  CHECK(max_abs(induce_multiplier(k, phi).values - phi.values) <= 1e-12);
  CHECK(max_abs(adjoint_on_l1(k, phi).values - phi.values) <= 1e-12);
}

TEST_CASE("measure-equivalence kernel collapses to evaluation at e") {
  const auto k = induction_kernel(me_z3_z5());
  for (int g = 0; g < 3; ++g)
    for (int s = 0; s < 5; ++s) CHECK(k.k(g, s) == doctest::Approx(s == 0 ? 1.0 : 0.0));
  std::mt19937_64 rng(2);
  const GroupFunction phi = random_multiplier(k.lambda(), rng);
  const GroupFunction hat = induce_multiplier(k, phi);
  for (int g = 0; g < 3; ++g) CHECK(std::abs(hat(g) - phi(0)) <= 1e-12);
  const GroupFunction psi = random_multiplier(k.gamma(), rng);
  const GroupFunction back = adjoint_on_l1(k, psi);
  CHECK(std::abs(back(0) - psi.values.sum()) <= 1e-12);
  for (int s = 1; s < 5; ++s) CHECK(std::abs(back(s)) <= 1e-12);
}

TEST_CASE("wstar Z/4 against Klein") {
  const auto k = induction_kernel(wstar_z4_klein());
  const Eigen::RowVector4d row1(0, 0, 0.5, 0.5);
  CHECK((k.k.row(1) - row1).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((k.k - testing::brute_force_kernel(k.coupling)).cwiseAbs().maxCoeff() <= 1e-12);

  const GroupFunction de = induce_multiplier(k, GroupFunction::delta(k.lambda(), 0));
  Eigen::VectorXcd want(4);
  want << 1, 0, 0, 0;
  CHECK(max_abs(de.values - want) <= 1e-12);

  const GroupFunction d10 = induce_multiplier(k, GroupFunction::delta(k.lambda(), 2));
  want << 0, 0.5, 0, 0.5;
  CHECK(max_abs(d10.values - want) <= 1e-12);
}

TEST_CASE("kernels agree with the brute-force trace formula") {
  const GroupPtr z8 = build_group(GroupSpec::cyclic(8));
  const GroupPtr z2z4 =
      build_group(GroupSpec::direct_product({GroupSpec::cyclic(2), GroupSpec::cyclic(4)}));
  for (const auto& c : {build_diagonal_coupling(build_group(GroupSpec::dihedral(4))), me_z3_z5(),
                        wstar_z4_klein(), build_wstar_coupling(z8, z2z4),
                        build_wstar_coupling(z2z4, z8, {7, 6, 5, 4, 3, 2, 1, 0})}) {
    CAPTURE(c.name);
    const auto k = induction_kernel(c);
    CHECK((k.k - testing::brute_force_kernel(c)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(k.min_entry() >= -1e-12);
    CHECK(k.row_sum_defect() <= 1e-10);
    CHECK(k.trace_form_defect <= 1e-12);
  }
}

TEST_CASE("serial and parallel kernels are identical") {
  const auto c = build_wstar_coupling(
      build_group(GroupSpec::cyclic(8)),
      build_group(GroupSpec::direct_product(
          {GroupSpec::cyclic(2), GroupSpec::cyclic(2), GroupSpec::cyclic(2)})));
  const auto a = induction_kernel(c, Execution::kSerial);
  const auto b = induction_kernel(c, Execution::kParallel);
  CHECK(a.k == b.k);
}

TEST_CASE("duality of the induction map") {
  std::mt19937_64 rng(3);
  for (const auto& c : {wstar_z4_klein(), me_z3_z5()}) {
    const auto k = induction_kernel(c);
    for (int i = 0; i < 10; ++i) {
      const GroupFunction phi = random_multiplier(k.lambda(), rng);
      const GroupFunction psi = random_multiplier(k.gamma(), rng);
      const Complex lhs = (psi.values.array() * induce_multiplier(k, phi).values.array()).sum();
      const Complex rhs = (adjoint_on_l1(k, psi).values.array() * phi.values.array()).sum();
      CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
  }
}

TEST_CASE("group mismatch") {
  const auto k = induction_kernel(wstar_z4_klein());
  CHECK_THROWS_AS(induce_multiplier(k, GroupFunction::delta(build_group(GroupSpec::cyclic(4)), 0)),
                  ShapeMismatch);
  CHECK_THROWS_AS(adjoint_on_l1(k, GroupFunction::delta(klein(), 0)), ShapeMismatch);
}

TEST_CASE("induced witnesses") {
  const auto kd = induction_kernel(build_diagonal_coupling(build_group(GroupSpec::symmetric(3))));
  const GroupFunction one = GroupFunction::constant(kd.lambda(), 1.0);
  const InducedWitnesses a = induce_witnesses(kd, one, gns_witnesses(one));
  CHECK(a.identity_residual <= 1e-12);
  CHECK(a.sup_xi_hat == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(a.sup_eta_hat == doctest::Approx(1.0).epsilon(1e-14));

  const auto kw = induction_kernel(wstar_z4_klein());
  const GroupFunction de = GroupFunction::delta(kw.lambda(), 0);
  const InducedWitnesses b = induce_witnesses(kw, de, gns_witnesses(de));
  CHECK(b.identity_residual <= 1e-10);
  CHECK(b.sup_xi_hat <= 1.0 + 1e-10);
  CHECK(b.sup_eta_hat <= 1.0 + 1e-10);

  // The identity recomputed here from the stored vectors.
  const GroupFunction hat = induce_multiplier(kw, de);
  const FiniteGroup& g = *kw.gamma();
  for (int g1 = 0; g1 < 4; ++g1)
    for (int g2 = 0; g2 < 4; ++g2)
      CHECK(std::abs(InducedWitnesses::inner(b.xi_hat[g1], b.eta_hat[g2]) -
                     hat(g.mul(g.inv(g2), g1))) <= 1e-10);

  std::mt19937_64 rng(4);
  for (const auto& c : {me_z3_z5(), wstar_z4_klein()}) {
    const auto k = induction_kernel(c);
    for (int i = 0; i < 50; ++i) {
      const GroupFunction phi = random_positive_definite(k.lambda(), rng);
      const WitnessPair w = gns_witnesses(phi);
      const InducedWitnesses iw = induce_witnesses(k, phi, w);
      REQUIRE(iw.identity_residual <= 1e-10);
      REQUIRE(iw.sup_xi_hat <= w.sup_xi + 1e-10);
      REQUIRE(iw.sup_eta_hat <= w.sup_eta + 1e-10);
    }
  }

  Eigen::VectorXcd bad(4);
  bad << 1, 2, 0, 0;
  CHECK_THROWS_AS(induce_witnesses(kw, GroupFunction(kw.lambda(), bad), gns_witnesses(de)),
                  InvalidArgument);
}

TEST_CASE("verify lemma on the diagonal coupling has zero margin") {
  const auto k = induction_kernel(build_diagonal_coupling(build_group(GroupSpec::cyclic(2))));
  const LemmaReport r = verify_lemma(k, GroupFunction::delta(k.lambda(), 0), 1e-6);
  CHECK(r.passed());
  CHECK(std::abs(r.contractivity_margin) <= 1e-7);

  std::mt19937_64 rng(5);
  const auto ks = induction_kernel(build_diagonal_coupling(build_group(GroupSpec::symmetric(3))));
  const LemmaReport rs = verify_lemma(ks, random_multiplier(ks.lambda(), rng), 1e-6);
  CHECK(rs.passed());
  CHECK(std::abs(rs.contractivity_margin) <= 1e-6);
}

TEST_CASE("verify lemma on delta_10 records both norms") {
  const auto k = induction_kernel(wstar_z4_klein());
  const LemmaReport r = verify_lemma(k, GroupFunction::delta(k.lambda(), 2), 1e-6);
  CHECK(r.passed());
  CHECK(r.b2_phi.value == doctest::Approx(1.0).epsilon(1e-6));
  // (0, 1/2, 0, 1/2) has Fourier coefficients (1/4, 0, -1/4, 0).
  CHECK(r.b2_phi_hat.value == doctest::Approx(testing::naive_b2(r.phi_hat, {4})).epsilon(1e-6));
  CHECK(r.b2_phi_hat.value == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.b2_phi_hat.value <= r.b2_phi.value + 1e-6);
}

TEST_CASE("measure-equivalence coupling on positive definite input") {
  const auto k = induction_kernel(me_z3_z5());
  std::mt19937_64 rng(6);
  for (int i = 0; i < 5; ++i) {
    const GroupFunction phi = random_positive_definite(k.lambda(), rng);
    const LemmaReport r = verify_lemma(k, phi, 1e-6);
    CHECK(r.passed());
    CHECK(max_abs(r.phi_hat - Eigen::VectorXcd::Ones(3)) <= 1e-12);
    CHECK(r.phi_hat_min_eigenvalue >= -1e-10);
    CHECK(r.b2_phi_hat.value == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("koopman coefficients") {
  std::mt19937_64 rng(7);
  for (const auto& c : {wstar_z4_klein(), me_z3_z5()}) {
    const auto k = induction_kernel(c);
    CHECK(koopman_coefficient_residual(k, random_multiplier(k.lambda(), rng)) <= 1e-12);
  }
}

TEST_CASE("the kernel depends on the lambda domain") {
  // Recorded, not asserted: a different domain gives a different but still
  // stochastic kernel for which contractivity continues to hold.
  const auto c = me_z3_z5();
  auto p = AlgebraElement::zero(c.shape());
  for (int a = 0; a < 3; ++a) p.block(a * 5 + (2 * a) % 5)(0, 0) = 1.0;
  const auto k = induction_kernel(with_lambda_domain(c, p));
  const auto k0 = induction_kernel(c);
  MESSAGE("kernel change under the new domain: " << (k.k - k0.k).cwiseAbs().maxCoeff());
  CHECK(k.row_sum_defect() <= 1e-10);
  CHECK(k.min_entry() >= -1e-12);
  std::mt19937_64 rng(8);
  const LemmaReport r = verify_lemma(k, random_multiplier(k.lambda(), rng), 1e-6);
  CHECK(r.passed());
}

TEST_CASE("batch kernels: serial and parallel agree") {
  const auto k = induction_kernel(wstar_z4_klein());
  std::mt19937_64 rng(9);
  std::vector<GroupFunction> fs;
  for (int i = 0; i < 6; ++i) fs.push_back(random_multiplier(k.lambda(), rng));
  const NormOptions opts;

  const auto b2s = batch::b2_norms(fs, opts, Execution::kSerial);
  const auto b2p = batch::b2_norms(fs, opts, Execution::kParallel);
  const auto qs = batch::q_norms(fs, opts, Execution::kSerial);
  const auto qp = batch::q_norms(fs, opts, Execution::kParallel);
  const auto is = batch::induce_all(k, fs, Execution::kSerial);
  const auto ip = batch::induce_all(k, fs, Execution::kParallel);
  const auto vs = batch::verify_all(k, fs, 1e-6, opts, Execution::kSerial);
  const auto vp = batch::verify_all(k, fs, 1e-6, opts, Execution::kParallel);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    CHECK(b2s[i].value == b2p[i].value);
    CHECK(qs[i].value == qp[i].value);
    CHECK(is[i].values == ip[i].values);
    CHECK(vs[i].checks.size() == vp[i].checks.size());
    for (std::size_t j = 0; j < vs[i].checks.size(); ++j)
      CHECK(vs[i].checks[j].value == vp[i].checks[j].value);
  }
  CHECK(batch::max_threads() >= 1);
}
