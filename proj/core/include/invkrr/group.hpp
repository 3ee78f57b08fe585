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

#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "invkrr/common.hpp"

namespace invkrr {

// Orthogonal d x d matrix phi(g) representing one group element.
class GroupElement {
 public:
  // Throws ValidationError unless matrix^T matrix = I within 1e-10 elementwise.
  explicit GroupElement(Matrix matrix);

  const Matrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  Matrix matrix_;
};

enum class RepKind {
  kFiniteList,  // every element of a finite group, listed explicitly
  kQuadrature,  // equal-weight nodes approximating Haar measure
};

// A compact group acting on R^d through orthogonal matrices. Every element or
// quadrature node carries weight 1/size(), so the measure is normalised.
// Immutable; copies share the element storage.
class GroupRep {
 public:
  // Requires the identity among `elements`. Closure is not enforced here;
  // see verify_closure.
  static GroupRep finite(std::string id, std::vector<GroupElement> elements);
  static GroupRep quadrature(std::string id, std::vector<GroupElement> nodes);

  const std::string& id() const { return id_; }
  RepKind kind() const { return kind_; }
  bool is_finite() const { return kind_ == RepKind::kFiniteList; }
  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return elements_->size(); }
  double weight() const { return 1.0 / static_cast<double>(size()); }
  std::span<const GroupElement> elements() const { return *elements_; }

 private:
  GroupRep(std::string id, RepKind kind, std::vector<GroupElement> elements);

  std::string id_;
  RepKind kind_;
  Eigen::Index dim_;
  std::shared_ptr<const std::vector<GroupElement>> elements_;
};

// Averaged representation Phi = mean over elements of phi(g).
struct AveragedRep {
  Matrix phi;

  double frobenius_sq() const { return phi.squaredNorm(); }
};

struct ClosureReport {
  bool closed = true;
  std::vector<std::string> violations;
};

// Checks that every pairwise product and every inverse (transpose) of a
// FiniteList rep matches a listed element within 1e-8 elementwise.
// Throws ValidationError for quadrature reps.
ClosureReport verify_closure(const GroupRep& rep);

AveragedRep averaged_rep(const GroupRep& rep);

// phi(g) x. Throws ValidationError on dimension mismatch.
Vector apply(const GroupElement& g, const VecRef& x);

using ScalarFn = std::function<double(const VecRef&)>;

// (Of)(x) = mean_g f(phi(g) x).
double orbit_average_fn(const GroupRep& rep, const ScalarFn& f, const VecRef& x);

// Returns the averaged function x -> (Of)(x); the returned closure owns a copy
// of `rep` and `f`.
ScalarFn orbit_average(const GroupRep& rep, ScalarFn f);

// Named constructors.
GroupRep make_trivial_group(int d);
GroupRep make_symmetric_group(int d);  // natural permutation representation
GroupRep make_cyclic_group(int d);     // cyclic coordinate shifts
GroupRep make_sign_group(int d);       // {I, -I}
GroupRep make_rotation_quadrature(int nodes);  // SO(2), angles 2*pi*q/nodes

inline constexpr int kDefaultRotationNodes = 64;
inline constexpr int kMaxSymmetricDegree = 8;

// Parses "trivial:d", "sym:d", "cyclic:d", "sign:d", "rot2:Q" (or "rot2",
// which uses kDefaultRotationNodes).
GroupRep parse_group(std::string_view id);

}  // namespace invkrr
