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

#include <cstdint>

#include "invkrr/common.hpp"
#include "invkrr/group.hpp"

namespace invkrr {

// Uniform distribution on the unit sphere S^{d-1}.
struct SphereDomain {
  int dim = 2;
  std::uint64_t seed = 0;
};

// n i.i.d. uniform points on S^{d-1} (normalised Gaussian vectors), one per
// column. Deterministic given the seed.
Points sample_sphere(const SphereDomain& domain, Eigen::Index n);

// Finite point set with the uniform measure 1/m on each point.
class DiscreteDomain {
 public:
  explicit DiscreteDomain(Points points);

  const Points& points() const { return points_; }
  Eigen::Index size() const { return points_.cols(); }
  Eigen::Index dim() const { return points_.rows(); }
  double weight() const { return 1.0 / static_cast<double>(size()); }

  // True when phi(g) p matches some listed point within `tol` for every g, p.
  bool is_closed_under(const GroupRep& rep, double tol = 1e-10) const;

 private:
  Points points_;
};

// Smallest point set containing `seeds` and closed under `rep`; duplicates
// merge at 1e-10. Rejects quadrature reps.
DiscreteDomain orbit_closure(const Points& seeds, const GroupRep& rep);

// f*(x) = theta^T x, with certificate max_g |phi(g)^T theta - theta|.
struct LinearTarget {
  Vector theta;
  double certificate = 0.0;

  double operator()(const VecRef& x) const { return theta.dot(x); }
  bool is_invariant(double tol = 1e-10) const { return certificate <= tol; }
};

LinearTarget make_linear_target(const GroupRep& rep, Vector theta);

// theta = Phi^T raw, the projection of `raw` onto the invariant subspace.
LinearTarget make_invariant_theta(const GroupRep& rep, const VecRef& raw);

// Centred Gaussian label noise.
struct NoiseModel {
  double sigma = 0.0;
};

// Y_i = theta^T X_i + sigma * z_i with z_i ~ N(0, 1), deterministic given seed.
Vector draw_labels(const LinearTarget& target, const NoiseModel& noise, const Points& x,
                   std::uint64_t seed);

}  // namespace invkrr
