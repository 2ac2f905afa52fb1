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

// Multi-matrix algebras M = M_{d_1} (+) ... (+) M_{d_r} with the weighted
// trace Tr(x) = sum_k w_k tr(x_k), and their Hilbert spaces L^2(M, Tr).
//
// L^2 coordinates: block k contributes d_k^2 entries, sqrt(w_k) * vec(x_k)
// in column-major order. In these coordinates the L^2 inner product is the
// standard one, so operators on L^2 are plain complex matrices.

#pragma once

#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "vnelab/group.hpp"

namespace vnelab {

struct MatrixBlock {
  int dim = 1;
  double weight = 1.0;

  friend bool operator==(const MatrixBlock&, const MatrixBlock&) = default;
};

struct AlgebraShape {
  std::vector<MatrixBlock> blocks;

  explicit AlgebraShape(std::vector<MatrixBlock> b);

  /// Diagonal algebra l^inf of n points, every point carrying `weight`.
  static AlgebraShape diagonal(int points, double weight = 1.0);
  static AlgebraShape full_matrix(int dim, double weight = 1.0);

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  /// Sum of dim_k^2.
  int l2_dimension() const;
  /// Offset of block k in L^2 coordinates.
  int l2_offset(int k) const;

  friend bool operator==(const AlgebraShape&, const AlgebraShape&) = default;
};

using ShapePtr = std::shared_ptr<const AlgebraShape>;

ShapePtr make_shape(AlgebraShape shape);

class AlgebraElement {
 public:
  AlgebraElement(ShapePtr shape, std::vector<Eigen::MatrixXcd> blocks);

  static AlgebraElement zero(ShapePtr shape);
  static AlgebraElement identity(ShapePtr shape);
  /// e_{ij} in block k.
  static AlgebraElement matrix_unit(ShapePtr shape, int k, int i, int j);
  /// Entries with independent standard normal real and imaginary parts.
  static AlgebraElement random(ShapePtr shape, std::mt19937_64& rng);

  const ShapePtr& shape() const { return shape_; }
  const Eigen::MatrixXcd& block(int k) const { return blocks_[k]; }
  Eigen::MatrixXcd& block(int k) { return blocks_[k]; }
  const std::vector<Eigen::MatrixXcd>& blocks() const { return blocks_; }

  AlgebraElement adjoint() const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(Complex c);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) {
    return a += b;
  }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) {
    return a -= b;
  }
  friend AlgebraElement operator*(Complex c, AlgebraElement a) { return a *= c; }
  friend AlgebraElement operator*(const AlgebraElement& a,
                                  const AlgebraElement& b);

 private:
  ShapePtr shape_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

/// Throws ShapeMismatch unless both shapes are equal.
void require_same_shape(const AlgebraShape& a, const AlgebraShape& b,
                        const char* what);

/// sum_k w_k tr(x_k).
Complex trace(const AlgebraElement& x);

/// Largest singular value over all blocks.
double operator_norm(const AlgebraElement& x);

/// ||p^2 - p|| <= tol and ||p* - p|| <= tol in operator norm.
bool is_projection(const AlgebraElement& p, double tol);

/// A vector of L^2(M, Tr). Same layout as an algebra element.
struct L2Vector {
  ShapePtr shape;
  std::vector<Eigen::MatrixXcd> blocks;

  static L2Vector from_element(const AlgebraElement& x);
  AlgebraElement to_element() const;

  /// Orthonormal coordinates (see the header comment).
  Eigen::VectorXcd coordinates() const;
  static L2Vector from_coordinates(ShapePtr shape, const Eigen::VectorXcd& v);
};

/// <a, b> = Tr(b* a): linear in a, conjugate-linear in b.
Complex l2_inner(const L2Vector& a, const L2Vector& b);

/// Orthonormal L^2 coordinates of an algebra element.
Eigen::VectorXcd l2_coordinates(const AlgebraElement& x);

/// Matrix of a -> x a on L^2 (the standard representation).
Eigen::MatrixXcd left_multiplication(const AlgebraElement& x);

}  // namespace vnelab
