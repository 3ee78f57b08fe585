// Copyright 2026 The invkrr Authors. All Rights Reserved.
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

#include "invkrr/group.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <utility>

namespace invkrr {
namespace {

constexpr double kOrthogonalityTol = 1e-10;
constexpr double kClosureTol = 1e-8;

Matrix permutation_matrix(const std::vector<int>& sigma) {
  const auto d = static_cast<Eigen::Index>(sigma.size());
  Matrix p = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) p(sigma[j], j) = 1.0;
  return p;
}

// Entries rounded onto a coarse grid; used as a lookup key before the
// tolerance comparison.
std::vector<long long> grid_key(const Matrix& m) {
  std::vector<long long> key(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    key[static_cast<std::size_t>(i)] = std::llround(m.data()[i] * 1e6);
  }
  return key;
}

class ElementIndex {
 public:
  explicit ElementIndex(std::span<const GroupElement> elements) : elements_(elements) {
    for (std::size_t i = 0; i < elements.size(); ++i) {
      by_key_.emplace(grid_key(elements[i].matrix()), i);
    }
  }

  bool contains(const Matrix& m) const {
    auto [lo, hi] = by_key_.equal_range(grid_key(m));
    for (auto it = lo; it != hi; ++it) {
      if (matches(elements_[it->second].matrix(), m)) return true;
    }
    // Grid rounding can split near-equal entries; fall back to a full scan.
    return std::any_of(elements_.begin(), elements_.end(),
                       [&](const GroupElement& e) { return matches(e.matrix(), m); });
  }

 private:
  static bool matches(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff() <= kClosureTol;
  }

  std::span<const GroupElement> elements_;
  std::multimap<std::vector<long long>, std::size_t> by_key_;
};

int parse_positive(std::string_view text, std::string_view id) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value <= 0) {
    throw ValidationError("invalid group id '" + std::string(id) +
                          "': expected a positive integer after ':'");
  }
  return value;
}

}  // namespace

GroupElement::GroupElement(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw ValidationError("group element must be a non-empty square matrix");
  }
  const Matrix gram = matrix_.transpose() * matrix_;
  const double err = (gram - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  if (!(err <= kOrthogonalityTol)) {
    throw ValidationError("group element is not orthogonal (max |M^T M - I| = " +
                          std::to_string(err) + ")");
  }
}

GroupRep::GroupRep(std::string id, RepKind kind, std::vector<GroupElement> elements)
    : id_(std::move(id)), kind_(kind), dim_(0) {
  if (elements.empty()) throw ValidationError("group rep '" + id_ + "' has no elements");
  dim_ = elements.front().dim();
  for (const auto& e : elements) {
    if (e.dim() != dim_) {
      throw ValidationError("group rep '" + id_ + "' mixes element dimensions");
    }
  }
  elements_ = std::make_shared<const std::vector<GroupElement>>(std::move(elements));
}

GroupRep GroupRep::finite(std::string id, std::vector<GroupElement> elements) {
  GroupRep rep(std::move(id), RepKind::kFiniteList, std::move(elements));
  const Matrix eye = Matrix::Identity(rep.dim(), rep.dim());
  const bool has_identity = std::any_of(
      rep.elements().begin(), rep.elements().end(), [&](const GroupElement& e) {
        return (e.matrix() - eye).cwiseAbs().maxCoeff() <= kClosureTol;
      });
  if (!has_identity) {
    throw ValidationError("finite group rep '" + rep.id() + "' does not contain the identity");
  }
  return rep;
}

GroupRep GroupRep::quadrature(std::string id, std::vector<GroupElement> nodes) {
  return GroupRep(std::move(id), RepKind::kQuadrature, std::move(nodes));
}

ClosureReport verify_closure(const GroupRep& rep) {
  if (!rep.is_finite()) {
    throw ValidationError("verify_closure: '" + rep.id() +
                          "' is a quadrature rep; closure is only defined for finite lists");
  }
  ClosureReport report;
  const auto elements = rep.elements();
  const ElementIndex index(elements);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (!index.contains(elements[i].matrix().transpose())) {
      report.violations.push_back("inverse of element " + std::to_string(i) + " missing");
    }
    for (std::size_t j = 0; j < elements.size(); ++j) {
      const Matrix product = elements[i].matrix() * elements[j].matrix();
      if (!index.contains(product)) {
        report.violations.push_back("product of elements " + std::to_string(i) + " and " +
                                    std::to_string(j) + " missing");
      }
    }
  }
  report.closed = report.violations.empty();
  return report;
}

AveragedRep averaged_rep(const GroupRep& rep) {
  Matrix phi = Matrix::Zero(rep.dim(), rep.dim());
  for (const auto& g : rep.elements()) phi += g.matrix();
  return AveragedRep{phi * rep.weight()};
}

Vector apply(const GroupElement& g, const VecRef& x) {
  if (x.size() != g.dim()) {
    throw ValidationError("apply: element acts on R^" + std::to_string(g.dim()) +
                          " but x has dimension " + std::to_string(x.size()));
  }
  return g.matrix() * x;
}

double orbit_average_fn(const GroupRep& rep, const ScalarFn& f, const VecRef& x) {
  double sum = 0.0;
  for (const auto& g : rep.elements()) sum += f(apply(g, x));
  return sum * rep.weight();
}

ScalarFn orbit_average(const GroupRep& rep, ScalarFn f) {
  return [rep, f = std::move(f)](const VecRef& x) { return orbit_average_fn(rep, f, x); };
}

GroupRep make_trivial_group(int d) {
  if (d < 1) throw ValidationError("trivial group needs d >= 1");
  std::vector<GroupElement> elements;
  elements.emplace_back(Matrix::Identity(d, d));
  return GroupRep::finite("trivial:" + std::to_string(d), std::move(elements));
}

GroupRep make_symmetric_group(int d) {
  if (d < 1 || d > kMaxSymmetricDegree) {
    throw ValidationError("sym:d supports 1 <= d <= " + std::to_string(kMaxSymmetricDegree));
  }
  std::vector<int> sigma(static_cast<std::size_t>(d));
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<GroupElement> elements;
  do {
    elements.emplace_back(permutation_matrix(sigma));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return GroupRep::finite("sym:" + std::to_string(d), std::move(elements));
}

GroupRep make_cyclic_group(int d) {
  if (d < 1) throw ValidationError("cyclic group needs d >= 1");
  std::vector<GroupElement> elements;
  std::vector<int> sigma(static_cast<std::size_t>(d));
  for (int shift = 0; shift < d; ++shift) {
    for (int j = 0; j < d; ++j) sigma[static_cast<std::size_t>(j)] = (j + shift) % d;
    elements.emplace_back(permutation_matrix(sigma));
  }
  return GroupRep::finite("cyclic:" + std::to_string(d), std::move(elements));
}

GroupRep make_sign_group(int d) {
  if (d < 1) throw ValidationError("sign group needs d >= 1");
  std::vector<GroupElement> elements;
  elements.emplace_back(Matrix::Identity(d, d));
  elements.emplace_back(-Matrix::Identity(d, d));
  return GroupRep::finite("sign:" + std::to_string(d), std::move(elements));
}

GroupRep make_rotation_quadrature(int nodes) {
  if (nodes < 1) throw ValidationError("rot2 quadrature needs at least one node");
  std::vector<GroupElement> elements;
  elements.reserve(static_cast<std::size_t>(nodes));
  for (int q = 0; q < nodes; ++q) {
    const double angle = 2.0 * std::numbers::pi * q / nodes;
    Matrix r(2, 2);
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    elements.emplace_back(std::move(r));
  }
  return GroupRep::quadrature("rot2:" + std::to_string(nodes), std::move(elements));
}

GroupRep parse_group(std::string_view id) {
  const auto colon = id.find(':');
  const std::string_view name = id.substr(0, colon);
  if (name == "rot2" && colon == std::string_view::npos) {
    return make_rotation_quadrature(kDefaultRotationNodes);
  }
  if (colon == std::string_view::npos) {
    throw ValidationError("invalid group id '" + std::string(id) +
                          "': expected trivial:d, sym:d, cyclic:d, sign:d or rot2:Q");
  }
  const int value = parse_positive(id.substr(colon + 1), id);
  if (name == "trivial") return make_trivial_group(value);
  if (name == "sym") return make_symmetric_group(value);
  if (name == "cyclic") return make_cyclic_group(value);
  if (name == "sign") return make_sign_group(value);
  if (name == "rot2") return make_rotation_quadrature(value);
  throw ValidationError("unknown group '" + std::string(name) + "' in id '" + std::string(id) + "'");
}

}  // namespace invkrr
