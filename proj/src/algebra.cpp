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

#include "vnelab/algebra.hpp"

#include <cmath>
#include <string>

#include "vnelab/error.hpp"

namespace vnelab {

AlgebraShape::AlgebraShape(std::vector<MatrixBlock> b) : blocks(std::move(b)) {
  if (blocks.empty()) throw InvalidArgument("algebra shape needs a block");
  for (const auto& blk : blocks) {
    if (blk.dim < 1) throw InvalidArgument("block dimension must be >= 1");
    if (!(blk.weight > 0.0) || !std::isfinite(blk.weight))
      throw InvalidArgument("block weight must be positive and finite");
  }
}

AlgebraShape AlgebraShape::diagonal(int points, double weight) {
  return AlgebraShape(std::vector<MatrixBlock>(points, MatrixBlock{1, weight}));
}

AlgebraShape AlgebraShape::full_matrix(int dim, double weight) {
  return AlgebraShape({MatrixBlock{dim, weight}});
}

int AlgebraShape::l2_dimension() const {
  int total = 0;
  for (const auto& b : blocks) total += b.dim * b.dim;
  return total;
}

int AlgebraShape::l2_offset(int k) const {
  int off = 0;
  for (int i = 0; i < k; ++i) off += blocks[i].dim * blocks[i].dim;
  return off;
}

ShapePtr make_shape(AlgebraShape shape) {
  return std::make_shared<const AlgebraShape>(std::move(shape));
}

void require_same_shape(const AlgebraShape& a, const AlgebraShape& b,
                        const char* what) {
  if (!(a == b)) throw ShapeMismatch(std::string(what) + ": algebra shapes differ");
}

AlgebraElement::AlgebraElement(ShapePtr shape, std::vector<Eigen::MatrixXcd> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
  if (!shape_) throw InvalidArgument("algebra element without a shape");
  if (static_cast<int>(blocks_.size()) != shape_->num_blocks())
    throw ShapeMismatch("element has " + std::to_string(blocks_.size()) +
                        " blocks, shape has " +
                        std::to_string(shape_->num_blocks()));
  for (int k = 0; k < shape_->num_blocks(); ++k) {
    const int d = shape_->blocks[k].dim;
    if (blocks_[k].rows() != d || blocks_[k].cols() != d)
      throw ShapeMismatch("block " + std::to_string(k) + " is not " +
                          std::to_string(d) + "x" + std::to_string(d));
  }
}

AlgebraElement AlgebraElement::zero(ShapePtr shape) {
  std::vector<Eigen::MatrixXcd> b;
  for (const auto& blk : shape->blocks)
    b.push_back(Eigen::MatrixXcd::Zero(blk.dim, blk.dim));
  return {std::move(shape), std::move(b)};
}

AlgebraElement AlgebraElement::identity(ShapePtr shape) {
  std::vector<Eigen::MatrixXcd> b;
  for (const auto& blk : shape->blocks)
    b.push_back(Eigen::MatrixXcd::Identity(blk.dim, blk.dim));
  return {std::move(shape), std::move(b)};
}

AlgebraElement AlgebraElement::matrix_unit(ShapePtr shape, int k, int i, int j) {
  if (k < 0 || k >= shape->num_blocks())
    throw InvalidArgument("matrix unit block index out of range");
  const int d = shape->blocks[k].dim;
  if (i < 0 || j < 0 || i >= d || j >= d)
    throw InvalidArgument("matrix unit index out of range");
  AlgebraElement e = zero(std::move(shape));
  e.blocks_[k](i, j) = 1.0;
  return e;
}

AlgebraElement AlgebraElement::random(ShapePtr shape, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  AlgebraElement x = zero(std::move(shape));
  for (auto& b : x.blocks_)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index i = 0; i < b.rows(); ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        b(i, j) = Complex(re, im);
      }
  return x;
}

AlgebraElement AlgebraElement::adjoint() const {
  AlgebraElement r = *this;
  for (auto& b : r.blocks_) b = b.adjoint().eval();
  return r;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  require_same_shape(*shape_, *other.shape_, "add");
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += other.blocks_[k];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  require_same_shape(*shape_, *other.shape_, "subtract");
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= other.blocks_[k];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex c) {
  for (auto& b : blocks_) b *= c;
  return *this;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_shape(*a.shape_, *b.shape_, "multiply");
  AlgebraElement r = a;
  for (std::size_t k = 0; k < r.blocks_.size(); ++k)
    r.blocks_[k] = a.blocks_[k] * b.blocks_[k];
  return r;
}

Complex trace(const AlgebraElement& x) {
  Complex t = 0.0;
  for (int k = 0; k < x.shape()->num_blocks(); ++k)
    t += x.shape()->blocks[k].weight * x.block(k).trace();
  return t;
}

double operator_norm(const AlgebraElement& x) {
  double norm = 0.0;
  for (const auto& b : x.blocks()) {
    if (b.size() == 1) {
      norm = std::max(norm, std::abs(b(0, 0)));
      continue;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b);
    norm = std::max(norm, svd.singularValues()(0));
  }
  return norm;
}

bool is_projection(const AlgebraElement& p, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("projection tolerance must be > 0");
  return operator_norm(p * p - p) <= tol && operator_norm(p.adjoint() - p) <= tol;
}

L2Vector L2Vector::from_element(const AlgebraElement& x) {
  return {x.shape(), x.blocks()};
}

AlgebraElement L2Vector::to_element() const { return {shape, blocks}; }

Eigen::VectorXcd L2Vector::coordinates() const {
  Eigen::VectorXcd v(shape->l2_dimension());
  int off = 0;
  for (int k = 0; k < shape->num_blocks(); ++k) {
    const int d = shape->blocks[k].dim;
    const double s = std::sqrt(shape->blocks[k].weight);
    v.segment(off, d * d) = s * blocks[k].reshaped();
    off += d * d;
  }
  return v;
}

L2Vector L2Vector::from_coordinates(ShapePtr shape, const Eigen::VectorXcd& v) {
  if (v.size() != shape->l2_dimension())
    throw ShapeMismatch("L2 coordinate vector has the wrong length");
  L2Vector r{shape, {}};
  int off = 0;
  for (const auto& blk : shape->blocks) {
    const int d = blk.dim;
    Eigen::MatrixXcd m = v.segment(off, d * d).reshaped(d, d) / std::sqrt(blk.weight);
    r.blocks.push_back(std::move(m));
    off += d * d;
  }
  return r;
}

Complex l2_inner(const L2Vector& a, const L2Vector& b) {
  require_same_shape(*a.shape, *b.shape, "l2_inner");
  Complex s = 0.0;
  for (int k = 0; k < a.shape->num_blocks(); ++k)
    s += a.shape->blocks[k].weight * (b.blocks[k].adjoint() * a.blocks[k]).trace();
  return s;
}

Eigen::VectorXcd l2_coordinates(const AlgebraElement& x) {
  return L2Vector::from_element(x).coordinates();
}

Eigen::MatrixXcd left_multiplication(const AlgebraElement& x) {
  const AlgebraShape& shape = *x.shape();
  const int dim = shape.l2_dimension();
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
  int off = 0;
  for (int k = 0; k < shape.num_blocks(); ++k) {
    const int d = shape.blocks[k].dim;
    // vec(x a) = (I (x) x) vec(a) in column-major order.
    for (int c = 0; c < d; ++c)
      op.block(off + c * d, off + c * d, d, d) = x.block(k);
    off += d * d;
  }
  return op;
}

}  // namespace vnelab
