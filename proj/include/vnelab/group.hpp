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

// Finite groups given by multiplication tables, functions on them, and the
// character table of a finite abelian group.
//
// Elements are numbered 0..order-1 and the identity is always element 0.
// Direct products number their elements lexicographically, the first factor
// being the most significant digit.

#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vnelab {

using Complex = std::complex<double>;
using Element = int;

/// Recipe for a group. Build one with the factory functions below.
struct GroupSpec {
  enum class Kind { kCyclic, kProduct, kDihedral, kSymmetric, kTable };

  Kind kind = Kind::kCyclic;
  int n = 1;
  std::vector<GroupSpec> factors;
  std::vector<std::vector<int>> table;

  static GroupSpec cyclic(int n);
  static GroupSpec direct_product(std::vector<GroupSpec> factors);
  static GroupSpec dihedral(int n);
  static GroupSpec symmetric(int n);
  static GroupSpec from_table(std::vector<std::vector<int>> mul);
};

class FiniteGroup {
 public:
  /// Validates the table: closure, identity at index 0, inverses and
  /// associativity (exhaustive). Throws InvalidArgument on failure.
  FiniteGroup(std::string name, std::vector<std::vector<int>> mul,
              std::optional<std::vector<int>> cyclic_factors = std::nullopt);

  int order() const { return order_; }
  Element identity() const { return 0; }
  Element mul(Element a, Element b) const { return mul_[a * order_ + b]; }
  Element inv(Element a) const { return inv_[a]; }
  const std::string& name() const { return name_; }
  bool is_abelian() const { return abelian_; }

  /// Orders of the cyclic factors when the group was built as a product of
  /// cyclic groups; empty otherwise.
  const std::optional<std::vector<int>>& cyclic_factors() const {
    return cyclic_factors_;
  }

  std::vector<std::vector<int>> table() const;

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.order_ == b.order_ && a.mul_ == b.mul_;
  }

 private:
  std::string name_;
  int order_ = 0;
  std::vector<int> mul_;
  std::vector<int> inv_;
  bool abelian_ = true;
  std::optional<std::vector<int>> cyclic_factors_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// Deterministic construction from a spec. Throws InvalidArgument for
/// unsupported parameters (cyclic n < 1, dihedral n < 3, symmetric n outside
/// 1..5, empty products, orders above 4096).
GroupPtr build_group(const GroupSpec& spec);

/// A complex-valued function on a finite group.
struct GroupFunction {
  GroupPtr group;
  Eigen::VectorXcd values;

  GroupFunction(GroupPtr g, Eigen::VectorXcd v);

  static GroupFunction zeros(GroupPtr g);
  static GroupFunction constant(GroupPtr g, Complex c);
  static GroupFunction delta(GroupPtr g, Element at);

  Complex operator()(Element s) const { return values[s]; }
  int size() const { return static_cast<int>(values.size()); }

  double sup_norm() const;
  double l1_norm() const;
};

/// Rows are the characters of an abelian group; chars(chi, g) = chi(g).
struct CharacterTable {
  GroupPtr group;
  Eigen::MatrixXcd chars;
};

/// All characters of an abelian group. For cyclic(n) the j-th character is
/// g -> exp(2 pi i j g / n); for products the characters are products of the
/// factor characters in lexicographic order. Groups given by tables get their
/// characters by enumeration over a greedy generating set.
/// Throws NonAbelianGroup for nonabelian input.
CharacterTable character_table(const GroupPtr& group);

/// Checks that two functions live on the same group; throws ShapeMismatch.
void require_same_group(const FiniteGroup& a, const FiniteGroup& b,
                        const char* what);

}  // namespace vnelab
