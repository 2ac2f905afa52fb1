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

#include "vnelab/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "vnelab/error.hpp"

namespace vnelab {

namespace {

constexpr int kMaxOrder = 4096;
constexpr int kExhaustiveAssociativity = 128;
constexpr int kSampledAssociativity = 1 << 21;

std::vector<std::vector<int>> cyclic_table(int n) {
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return t;
}

// r^k s^b is stored at index k + n*b.
std::vector<std::vector<int>> dihedral_table(int n) {
  const int order = 2 * n;
  std::vector<std::vector<int>> t(order, std::vector<int>(order));
  for (int x = 0; x < order; ++x) {
    const int a = x % n, b = x / n;
    for (int y = 0; y < order; ++y) {
      const int c = y % n, d = y / n;
      const int k = ((b == 0 ? a + c : a - c) % n + n) % n;
      t[x][y] = k + n * ((b + d) % 2);
    }
  }
  return t;
}

// Permutations in lexicographic order; (x*y)(i) = x(y(i)).
std::vector<std::vector<int>> symmetric_table(int n) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  const int order = static_cast<int>(perms.size());
  std::vector<std::vector<int>> t(order, std::vector<int>(order));
  std::vector<int> comp(n);
  for (int x = 0; x < order; ++x) {
    for (int y = 0; y < order; ++y) {
      for (int i = 0; i < n; ++i) comp[i] = perms[x][perms[y][i]];
      auto it = std::lower_bound(perms.begin(), perms.end(), comp);
      t[x][y] = static_cast<int>(it - perms.begin());
    }
  }
  return t;
}

std::vector<std::vector<int>> product_table(const FiniteGroup& g,
                                            const FiniteGroup& h) {
  const int ng = g.order(), nh = h.order();
  const int order = ng * nh;
  std::vector<std::vector<int>> t(order, std::vector<int>(order));
  for (int x = 0; x < order; ++x)
    for (int y = 0; y < order; ++y)
      t[x][y] = g.mul(x / nh, y / nh) * nh + h.mul(x % nh, y % nh);
  return t;
}

int element_order(const FiniteGroup& g, Element x) {
  int k = 1;
  for (Element y = x; y != g.identity(); y = g.mul(y, x)) ++k;
  return k;
}

// Characters of an abelian group with no recorded cyclic structure. Picks
// generators greedily, enumerates root-of-unity assignments and keeps those
// that extend to a homomorphism. Rows come out in lexicographic order of the
// exponent tuples.
Eigen::MatrixXcd enumerate_characters(const FiniteGroup& g) {
  const int n = g.order();
  std::vector<Element> gens;
  std::vector<int> orders;
  std::vector<char> in_span(n, 0);
  std::vector<Element> span{0};
  in_span[0] = 1;
  for (Element x = 1; x < n; ++x) {
    if (in_span[x]) continue;
    gens.push_back(x);
    orders.push_back(element_order(g, x));
    std::vector<Element> grown;
    for (Element s : span) {
      Element y = s;
      for (int k = 0; k < orders.back(); ++k, y = g.mul(y, x)) {
        if (!in_span[y]) {
          in_span[y] = 1;
          grown.push_back(y);
        }
      }
    }
    span.insert(span.end(), grown.begin(), grown.end());
  }

  std::vector<Eigen::VectorXcd> rows;
  std::vector<int> exps(gens.size(), 0);
  bool done = false;
  while (!done) {
    Eigen::VectorXcd chi = Eigen::VectorXcd::Zero(n);
    std::vector<char> set(n, 0);
    chi[0] = 1.0;
    set[0] = 1;
    std::vector<Element> frontier{0};
    bool ok = true;
    while (!frontier.empty() && ok) {
      std::vector<Element> next;
      for (Element y : frontier) {
        for (std::size_t k = 0; k < gens.size() && ok; ++k) {
          const double angle = 2.0 * std::numbers::pi * exps[k] / orders[k];
          const Complex value = chi[y] * std::polar(1.0, angle);
          const Element z = g.mul(y, gens[k]);
          if (!set[z]) {
            set[z] = 1;
            chi[z] = value;
            next.push_back(z);
          } else if (std::abs(chi[z] - value) > 1e-9) {
            ok = false;
          }
        }
      }
      frontier = std::move(next);
    }
    if (ok) rows.push_back(chi);

    // Odometer over exponent tuples, last generator fastest.
    done = true;
    for (std::size_t k = gens.size(); k-- > 0;) {
      if (++exps[k] < orders[k]) {
        done = false;
        break;
      }
      exps[k] = 0;
    }
  }

  Eigen::MatrixXcd table(rows.size(), n);
  for (std::size_t r = 0; r < rows.size(); ++r) table.row(r) = rows[r].transpose();
  return table;
}

}  // namespace

GroupSpec GroupSpec::cyclic(int n) {
  GroupSpec s;
  s.kind = Kind::kCyclic;
  s.n = n;
  return s;
}

GroupSpec GroupSpec::direct_product(std::vector<GroupSpec> factors) {
  GroupSpec s;
  s.kind = Kind::kProduct;
  s.factors = std::move(factors);
  return s;
}

GroupSpec GroupSpec::dihedral(int n) {
  GroupSpec s;
  s.kind = Kind::kDihedral;
  s.n = n;
  return s;
}

GroupSpec GroupSpec::symmetric(int n) {
  GroupSpec s;
  s.kind = Kind::kSymmetric;
  s.n = n;
  return s;
}

GroupSpec GroupSpec::from_table(std::vector<std::vector<int>> mul) {
  GroupSpec s;
  s.kind = Kind::kTable;
  s.n = static_cast<int>(mul.size());
  s.table = std::move(mul);
  return s;
}

FiniteGroup::FiniteGroup(std::string name, std::vector<std::vector<int>> mul,
                         std::optional<std::vector<int>> cyclic_factors)
    : name_(std::move(name)), cyclic_factors_(std::move(cyclic_factors)) {
  order_ = static_cast<int>(mul.size());
  if (order_ < 1 || order_ > kMaxOrder)
    throw InvalidArgument("group order must be in 1.." +
                          std::to_string(kMaxOrder));
  mul_.resize(static_cast<std::size_t>(order_) * order_);
  for (int a = 0; a < order_; ++a) {
    if (static_cast<int>(mul[a].size()) != order_)
      throw InvalidArgument("multiplication table is not square");
    for (int b = 0; b < order_; ++b) {
      const int c = mul[a][b];
      if (c < 0 || c >= order_)
        throw InvalidArgument("multiplication table entry out of range");
      mul_[a * order_ + b] = c;
    }
  }
  for (int a = 0; a < order_; ++a) {
    if (this->mul(0, a) != a || this->mul(a, 0) != a)
      throw InvalidArgument("element 0 is not a two-sided identity");
  }
  inv_.assign(order_, -1);
  for (int a = 0; a < order_; ++a) {
    for (int b = 0; b < order_; ++b) {
      if (this->mul(a, b) == 0) {
        inv_[a] = b;
        break;
      }
    }
    if (inv_[a] < 0 || this->mul(inv_[a], a) != 0)
      throw InvalidArgument("element " + std::to_string(a) +
                            " has no two-sided inverse");
  }
  for (int a = 0; a < order_; ++a)
    for (int b = 0; b < order_; ++b)
      if (this->mul(a, b) != this->mul(b, a)) abelian_ = false;

  auto assoc = [this](int a, int b, int c) {
    if (this->mul(this->mul(a, b), c) != this->mul(a, this->mul(b, c)))
      throw InvalidArgument("multiplication table is not associative");
  };
  if (order_ <= kExhaustiveAssociativity) {
    for (int a = 0; a < order_; ++a)
      for (int b = 0; b < order_; ++b)
        for (int c = 0; c < order_; ++c) assoc(a, b, c);
  } else {
    std::minstd_rand rng(12345);
    std::uniform_int_distribution<int> pick(0, order_ - 1);
    for (int i = 0; i < kSampledAssociativity; ++i)
      assoc(pick(rng), pick(rng), pick(rng));
  }
  if (!abelian_) cyclic_factors_.reset();
}

std::vector<std::vector<int>> FiniteGroup::table() const {
  std::vector<std::vector<int>> t(order_, std::vector<int>(order_));
  for (int a = 0; a < order_; ++a)
    for (int b = 0; b < order_; ++b) t[a][b] = mul(a, b);
  return t;
}

GroupPtr build_group(const GroupSpec& spec) {
  using Kind = GroupSpec::Kind;
  switch (spec.kind) {
    case Kind::kCyclic:
      if (spec.n < 1 || spec.n > kMaxOrder)
        throw InvalidArgument("cyclic group needs 1 <= n <= 4096, got " +
                              std::to_string(spec.n));
      return std::make_shared<FiniteGroup>("Z/" + std::to_string(spec.n),
                                           cyclic_table(spec.n),
                                           std::vector<int>{spec.n});
    case Kind::kDihedral:
      if (spec.n < 3 || 2 * spec.n > kMaxOrder)
        throw InvalidArgument("dihedral group needs n >= 3, got " +
                              std::to_string(spec.n));
      return std::make_shared<FiniteGroup>("Dih(" + std::to_string(spec.n) + ")",
                                           dihedral_table(spec.n));
    case Kind::kSymmetric:
      if (spec.n < 1 || spec.n > 5)
        throw InvalidArgument("symmetric group needs 1 <= n <= 5, got " +
                              std::to_string(spec.n));
      return std::make_shared<FiniteGroup>("S_" + std::to_string(spec.n),
                                           symmetric_table(spec.n));
    case Kind::kTable:
      return std::make_shared<FiniteGroup>("table(" + std::to_string(spec.n) + ")",
                                           spec.table);
    case Kind::kProduct: {
      if (spec.factors.empty())
        throw InvalidArgument("direct product needs at least one factor");
      std::vector<GroupPtr> parts;
      long long order = 1;
      for (const auto& f : spec.factors) {
        parts.push_back(build_group(f));
        order *= parts.back()->order();
        if (order > kMaxOrder)
          throw InvalidArgument("direct product order exceeds 4096");
      }
      GroupPtr acc = parts.front();
      std::string name = acc->name();
      std::optional<std::vector<int>> cyc = acc->cyclic_factors();
      for (std::size_t i = 1; i < parts.size(); ++i) {
        name += " x " + parts[i]->name();
        if (cyc && parts[i]->cyclic_factors()) {
          cyc->insert(cyc->end(), parts[i]->cyclic_factors()->begin(),
                      parts[i]->cyclic_factors()->end());
        } else {
          cyc.reset();
        }
        acc = std::make_shared<FiniteGroup>(name, product_table(*acc, *parts[i]),
                                            cyc);
      }
      if (parts.size() == 1)
        acc = std::make_shared<FiniteGroup>(name, acc->table(), cyc);
      return acc;
    }
  }
  throw InvalidArgument("unknown group spec kind");
}

GroupFunction::GroupFunction(GroupPtr g, Eigen::VectorXcd v)
    : group(std::move(g)), values(std::move(v)) {
  if (!group) throw InvalidArgument("group function without a group");
  if (values.size() != group->order())
    throw ShapeMismatch("group function has " + std::to_string(values.size()) +
                        " values for a group of order " +
                        std::to_string(group->order()));
}

GroupFunction GroupFunction::zeros(GroupPtr g) {
  const int n = g->order();
  return {std::move(g), Eigen::VectorXcd::Zero(n)};
}

GroupFunction GroupFunction::constant(GroupPtr g, Complex c) {
  const int n = g->order();
  return {std::move(g), Eigen::VectorXcd::Constant(n, c)};
}

GroupFunction GroupFunction::delta(GroupPtr g, Element at) {
  if (at < 0 || at >= g->order())
    throw InvalidArgument("delta position " + std::to_string(at) +
                          " outside the group");
  GroupFunction f = zeros(std::move(g));
  f.values[at] = 1.0;
  return f;
}

double GroupFunction::sup_norm() const { return values.cwiseAbs().maxCoeff(); }

double GroupFunction::l1_norm() const { return values.cwiseAbs().sum(); }

CharacterTable character_table(const GroupPtr& group) {
  if (!group->is_abelian())
    throw NonAbelianGroup("character table requested for nonabelian group " +
                          group->name());
  const int n = group->order();
  if (!group->cyclic_factors()) return {group, enumerate_characters(*group)};

  const std::vector<int>& radix = *group->cyclic_factors();
  auto digits = [&](int x) {
    std::vector<int> d(radix.size());
    for (std::size_t k = radix.size(); k-- > 0;) {
      d[k] = x % radix[k];
      x /= radix[k];
    }
    return d;
  };

  Eigen::MatrixXcd chars(n, n);
  for (int j = 0; j < n; ++j) {
    const auto jd = digits(j);
    for (int g = 0; g < n; ++g) {
      const auto gd = digits(g);
      double phase = 0.0;
      for (std::size_t k = 0; k < radix.size(); ++k)
        phase += static_cast<double>((jd[k] * gd[k]) % radix[k]) / radix[k];
      chars(j, g) = std::polar(1.0, 2.0 * std::numbers::pi * phase);
    }
  }
  return {group, chars};
}

void require_same_group(const FiniteGroup& a, const FiniteGroup& b,
                        const char* what) {
  if (!(a == b))
    throw ShapeMismatch(std::string(what) + ": expected a function on " +
                        a.name() + ", got one on " + b.name());
}

}  // namespace vnelab
