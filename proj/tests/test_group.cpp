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

#include <complex>

#include "oracles.hpp"
#include "vnelab/error.hpp"
#include "vnelab/group.hpp"

using namespace vnelab;

namespace {

void check_group_axioms(const FiniteGroup& g) {
  const int n = g.order();
  for (int a = 0; a < n; ++a) {
    CHECK(g.mul(0, a) == a);
    CHECK(g.mul(a, 0) == a);
    CHECK(g.mul(a, g.inv(a)) == 0);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) REQUIRE(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
  }
}

}  // namespace

TEST_CASE("trivial group") {
  const GroupPtr g = build_group(GroupSpec::cyclic(1));
  CHECK(g->order() == 1);
  CHECK(g->mul(0, 0) == 0);
  CHECK(g->is_abelian());
}

TEST_CASE("klein four group is all involutions") {
  const GroupPtr g =
      build_group(GroupSpec::direct_product({GroupSpec::cyclic(2), GroupSpec::cyclic(2)}));
  CHECK(g->order() == 4);
  for (int x = 0; x < 4; ++x) CHECK(g->inv(x) == x);
  check_group_axioms(*g);
}

TEST_CASE("S3 is nonabelian") {
  const GroupPtr g = build_group(GroupSpec::symmetric(3));
  CHECK(g->order() == 6);
  CHECK_FALSE(g->is_abelian());
  bool found = false;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) found |= g->mul(a, b) != g->mul(b, a);
  CHECK(found);
  check_group_axioms(*g);
}

TEST_CASE("constructors satisfy the group axioms") {
  for (const auto& spec :
       {GroupSpec::cyclic(7), GroupSpec::dihedral(3), GroupSpec::dihedral(5),
        GroupSpec::symmetric(4),
        GroupSpec::direct_product({GroupSpec::symmetric(3), GroupSpec::cyclic(2)})}) {
    const GroupPtr g = build_group(spec);
    check_group_axioms(*g);
  }
  CHECK(build_group(GroupSpec::dihedral(4))->order() == 8);
  CHECK_FALSE(build_group(GroupSpec::dihedral(4))->is_abelian());
  CHECK(build_group(GroupSpec::symmetric(5))->order() == 120);
}

TEST_CASE("products are lexicographic") {
  const GroupPtr g =
      build_group(GroupSpec::direct_product({GroupSpec::cyclic(2), GroupSpec::cyclic(3)}));
  // (1,2) * (1,2) = (0,1): index 1*3+2 = 5 squared is 1.
  CHECK(g->mul(5, 5) == 1);
  REQUIRE(g->cyclic_factors());
  CHECK(*g->cyclic_factors() == std::vector<int>{2, 3});
}

TEST_CASE("unsupported parameters are rejected") {
  CHECK_THROWS_AS(build_group(GroupSpec::cyclic(0)), InvalidArgument);
  CHECK_THROWS_AS(build_group(GroupSpec::symmetric(6)), InvalidArgument);
  CHECK_THROWS_AS(build_group(GroupSpec::dihedral(2)), InvalidArgument);
  CHECK_THROWS_AS(build_group(GroupSpec::direct_product({})), InvalidArgument);
}

TEST_CASE("cayley tables are validated") {
  const GroupPtr z3 = build_group(GroupSpec::cyclic(3));
  const GroupPtr copy = build_group(GroupSpec::from_table(z3->table()));
  CHECK(*copy == *z3);
  // Not a latin square.
  CHECK_THROWS_AS(build_group(GroupSpec::from_table({{0, 1}, {1, 1}})), InvalidArgument);
  // Identity not at index 0.
  CHECK_THROWS_AS(build_group(GroupSpec::from_table({{1, 0}, {0, 1}})), InvalidArgument);
  // Latin square with identity 0 that is not associative (order 5 loop).
  const std::vector<std::vector<int>> loop = {{0, 1, 2, 3, 4},
                                              {1, 0, 3, 4, 2},
                                              {2, 4, 0, 1, 3},
                                              {3, 2, 4, 0, 1},
                                              {4, 3, 1, 2, 0}};
  CHECK_THROWS_AS(build_group(GroupSpec::from_table(loop)), InvalidArgument);
  CHECK_THROWS_AS(build_group(GroupSpec::from_table({{0, 1}, {1, 5}})), InvalidArgument);
}

TEST_CASE("character table of Z/2") {
  const CharacterTable t = character_table(build_group(GroupSpec::cyclic(2)));
  REQUIRE(t.chars.rows() == 2);
  CHECK(std::abs(t.chars(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(t.chars(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(t.chars(1, 0) - 1.0) < 1e-15);
  CHECK(std::abs(t.chars(1, 1) + 1.0) < 1e-15);
}

TEST_CASE("character of Z/4 at the generator is i") {
  const CharacterTable t = character_table(build_group(GroupSpec::cyclic(4)));
  CHECK(std::abs(t.chars(1, 1) - Complex(0, 1)) < 1e-15);
}

TEST_CASE("nonabelian groups have no character table here") {
  CHECK_THROWS_AS(character_table(build_group(GroupSpec::symmetric(3))), NonAbelianGroup);
}

TEST_CASE("characters match the mixed-radix formula and are orthonormal") {
  for (const auto& f : testing::abelian_groups_up_to_16()) {
    const GroupPtr g = testing::abelian_group(f);
    const CharacterTable t = character_table(g);
    const Eigen::MatrixXcd ref = testing::naive_characters(f);
    CAPTURE(g->name());
    CHECK((t.chars - ref).cwiseAbs().maxCoeff() < 1e-12);
    const int n = g->order();
    const Eigen::MatrixXcd gram = t.chars * t.chars.adjoint() / double(n);
    CHECK((gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    // Homomorphism property.
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          REQUIRE(std::abs(t.chars(j, g->mul(a, b)) - t.chars(j, a) * t.chars(j, b)) < 1e-12);
  }
}

TEST_CASE("characters of a table-defined abelian group") {
  const GroupPtr z2z4 = testing::abelian_group({2, 4});
  const GroupPtr g = build_group(GroupSpec::from_table(z2z4->table()));
  const CharacterTable t = character_table(g);
  const int n = g->order();
  CHECK((t.chars * t.chars.adjoint() / double(n) - Eigen::MatrixXcd::Identity(n, n))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        REQUIRE(std::abs(t.chars(j, g->mul(a, b)) - t.chars(j, a) * t.chars(j, b)) < 1e-12);
}

TEST_CASE("fourier inversion") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (const auto& f : testing::abelian_groups_up_to_16()) {
    const GroupPtr g = testing::abelian_group(f);
    const int n = g->order();
    Eigen::VectorXcd phi(n);
    for (int i = 0; i < n; ++i) phi[i] = {nd(rng), nd(rng)};
    const Eigen::MatrixXcd chi = character_table(g).chars;
    const Eigen::VectorXcd hat = chi.conjugate() * phi / double(n);
    CHECK((chi.transpose() * hat - phi).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("group functions") {
  const GroupPtr g = build_group(GroupSpec::cyclic(3));
  const GroupFunction d = GroupFunction::delta(g, 1);
  CHECK(d(1) == Complex(1));
  CHECK(d(0) == Complex(0));
  Eigen::VectorXcd v(3);
  v << Complex(3, 4), -1.0, 0.0;
  const GroupFunction f(g, v);
  CHECK(f.sup_norm() == doctest::Approx(5.0));
  CHECK(f.l1_norm() == doctest::Approx(6.0));
  CHECK_THROWS_AS(GroupFunction(g, Eigen::VectorXcd::Zero(2)), ShapeMismatch);
  CHECK_THROWS_AS(GroupFunction::delta(g, 3), InvalidArgument);
}
