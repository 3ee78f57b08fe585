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

#include "invkrr/krr.hpp"

#include <cmath>

namespace invkrr {
namespace {

constexpr double kResidualTol = 1e-8;
constexpr int kRefinementSteps = 3;

void check_dim(const KrrModel& m, Eigen::Index dim) {
  if (dim != m.train_points().rows()) {
    throw ValidationError("predict: input dimension " + std::to_string(dim) +
                          " does not match training dimension " +
                          std::to_string(m.train_points().rows()));
  }
}

// sum_i alpha_i mean_g k(x, phi(g) x_i) for kernels without a batched path.
Vector generic_averaged(const Evaluator& k, const GroupRep& rep, const Points& train,
                        const Vector& alpha, const Points& x) {
  Vector out = Vector::Zero(x.cols());
  for (const auto& g : rep.elements()) {
    const Points moved = g.matrix() * train;
    out.noalias() += cross_gram(k, x, moved) * alpha;
  }
  return out * rep.weight();
}

}  // namespace

KrrModel fit(const Evaluator& kernel, const Points& x, const Vector& y, const RidgeConfig& cfg,
             std::string_view group_id) {
  if (x.cols() < 1) throw ValidationError("fit: need at least one training point");
  if (y.size() != x.cols()) {
    throw ValidationError("fit: " + std::to_string(x.cols()) + " points but " +
                          std::to_string(y.size()) + " labels");
  }
  if (!(cfg.rho > 0.0) || !std::isfinite(cfg.rho)) {
    throw ValidationError("fit: rho must be positive and finite");
  }
  if (!y.allFinite()) throw ValidationError("fit: labels must be finite");

  const Matrix k = gram(kernel, x).entries;
  const auto n = x.cols();
  Matrix system = k;
  system.diagonal().array() += cfg.rho;
  const double scale = k.trace() / static_cast<double>(n);
  const double tol = kResidualTol * std::max(1.0, y.norm());

  for (double jitter_units : cfg.jitter_schedule) {
    const double jitter = jitter_units * std::abs(scale);
    Matrix shifted = system;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() != Eigen::Success) continue;
    Vector alpha = llt.solve(y);
    Vector residual = y - system * alpha;
    for (int step = 0; step < kRefinementSteps && residual.norm() > tol; ++step) {
      alpha += llt.solve(residual);
      residual = y - system * alpha;
    }
    if (!alpha.allFinite() || !(residual.norm() <= tol)) continue;
    KrrModel model(kernel, x, std::move(alpha), cfg.rho, std::string(group_id));
    model.residual_norm_ = residual.norm();
    model.jitter_used_ = jitter;
    return model;
  }
  throw NumericalError("fit: Cholesky of K + rho I failed for every jitter level (n = " +
                       std::to_string(n) + ", rho = " + std::to_string(cfg.rho) + ")");
}

double KrrModel::predict(const VecRef& x) const {
  check_dim(*this, x.size());
  return predict_batch(Points(x))(0);
}

Vector KrrModel::predict_batch(const Points& x) const {
  check_dim(*this, x.rows());
  return cross_gram(kernel_, x, train_points_) * alpha_;
}

void KrrModel::check_group(const GroupRep& rep) const {
  if (!group_id_.empty() && group_id_ != rep.id()) {
    throw ValidationError("predict_averaged: model was fitted for group '" + group_id_ +
                          "' but '" + rep.id() + "' was supplied");
  }
  check_dim(*this, rep.dim());
}

double KrrModel::predict_averaged(const GroupRep& rep, const VecRef& x) const {
  check_dim(*this, x.size());
  return predict_averaged_batch(rep, Points(x))(0);
}

Vector KrrModel::predict_averaged_batch(const GroupRep& rep, const Points& x) const {
  check_group(rep);
  check_dim(*this, x.rows());
  if (const auto* base = std::get_if<Kernel>(&kernel_)) {
    return cross_gram(AveragedKernel(*base, rep), x, train_points_) * alpha_;
  }
  return generic_averaged(kernel_, rep, train_points_, alpha_, x);
}

Vector KrrModel::predict_perp(const GroupRep& rep, const Points& x) const {
  check_group(rep);
  check_dim(*this, x.rows());
  if (const auto* base = std::get_if<Kernel>(&kernel_)) {
    return cross_gram(PerpKernel(*base, rep), x, train_points_) * alpha_;
  }
  return predict_batch(x) - predict_averaged_batch(rep, x);
}

}  // namespace invkrr
