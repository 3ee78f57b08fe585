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

#include "invkrr/domain.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "invkrr/rng.hpp"

namespace invkrr {
namespace {

constexpr double kMergeTol = 1e-10;

bool has_point(const std::vector<Vector>& pts, const Vector& p, double tol) {
  for (const auto& q : pts) {
    if ((q - p).cwiseAbs().maxCoeff() <= tol) return true;
  }
  return false;
}

}  // namespace

Points sample_sphere(const SphereDomain& domain, Eigen::Index n) {
  if (domain.dim < 1) throw ValidationError("sample_sphere: dimension must be >= 1");
  if (n < 1) throw ValidationError("sample_sphere: n must be >= 1");
  Rng rng(domain.seed);
  std::normal_distribution<double> normal;
  Points out(domain.dim, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double norm = 0.0;
    do {
      for (Eigen::Index i = 0; i < domain.dim; ++i) out(i, j) = normal(rng);
      norm = out.col(j).norm();
    } while (norm < 1e-300);
    out.col(j) /= norm;
  }
  return out;
}

DiscreteDomain::DiscreteDomain(Points points) : points_(std::move(points)) {
  if (points_.cols() == 0 || points_.rows() == 0) {
    throw ValidationError("discrete domain needs at least one point");
  }
  if (!points_.allFinite()) throw ValidationError("discrete domain has non-finite points");
}

bool DiscreteDomain::is_closed_under(const GroupRep& rep, double tol) const {
  if (rep.dim() != dim()) return false;
  for (const auto& g : rep.elements()) {
    const Points moved = g.matrix() * points_;
    for (Eigen::Index j = 0; j < moved.cols(); ++j) {
      bool found = false;
      for (Eigen::Index i = 0; i < size() && !found; ++i) {
        found = (points_.col(i) - moved.col(j)).cwiseAbs().maxCoeff() <= tol;
      }
      if (!found) return false;
    }
  }
  return true;
}

DiscreteDomain orbit_closure(const Points& seeds, const GroupRep& rep) {
  if (!rep.is_finite()) {
    throw ValidationError("orbit_closure: '" + rep.id() + "' is a quadrature rep");
  }
  if (seeds.rows() != rep.dim()) {
    throw ValidationError("orbit_closure: seed dimension does not match the group");
  }
  std::vector<Vector> pts;
  for (Eigen::Index j = 0; j < seeds.cols(); ++j) {
    const Vector seed = seeds.col(j);
    for (const auto& g : rep.elements()) {
      Vector p = g.matrix() * seed;
      if (!has_point(pts, p, kMergeTol)) pts.push_back(std::move(p));
    }
  }
  Points out(rep.dim(), static_cast<Eigen::Index>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = pts[j];
  return DiscreteDomain(std::move(out));
}

LinearTarget make_linear_target(const GroupRep& rep, Vector theta) {
  if (theta.size() != rep.dim()) {
    throw ValidationError("linear target: theta has dimension " + std::to_string(theta.size()) +
                          " but the group acts on R^" + std::to_string(rep.dim()));
  }
  double cert = 0.0;
  for (const auto& g : rep.elements()) {
    cert = std::max(cert, (g.matrix().transpose() * theta - theta).norm());
  }
  return LinearTarget{std::move(theta), cert};
}

LinearTarget make_invariant_theta(const GroupRep& rep, const VecRef& raw) {
  if (raw.size() != rep.dim()) {
    throw ValidationError("make_invariant_theta: dimension mismatch");
  }
  return make_linear_target(rep, averaged_rep(rep).phi.transpose() * raw);
}

Vector draw_labels(const LinearTarget& target, const NoiseModel& noise, const Points& x,
                   std::uint64_t seed) {
  if (!(noise.sigma >= 0.0)) throw ValidationError("noise sigma must be >= 0");
  if (x.rows() != target.theta.size()) {
    throw ValidationError("draw_labels: points and theta differ in dimension");
  }
  Vector y = x.transpose() * target.theta;
  if (noise.sigma > 0.0) {
    Rng rng(seed);
    std::normal_distribution<double> normal;
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += noise.sigma * normal(rng);
  }
  return y;
}

}  // namespace invkrr
