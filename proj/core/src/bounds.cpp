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

#include "invkrr/bounds.hpp"

#include <cmath>
#include <string>

namespace invkrr {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

void check_common(double n, double rho, double sigma_sq) {
  require(n >= 1.0 && std::isfinite(n), "bound: n must be >= 1");
  require(rho > 0.0 && std::isfinite(rho), "bound: rho must be > 0");
  require(sigma_sq >= 0.0 && std::isfinite(sigma_sq), "bound: sigma^2 must be >= 0");
}

double denominator(double n, double m_k, double rho) {
  const double root = std::sqrt(n);
  const double d = root * m_k + rho / root;
  return d * d;
}

}  // namespace

BoundReport general_bound(double n, double rho, double m_k, double sigma_sq, double dim_eff_perp,
                          double bias_term) {
  check_common(n, rho, sigma_sq);
  require(m_k > 0.0 && std::isfinite(m_k), "bound: M_k must be > 0");
  require(dim_eff_perp >= 0.0 && std::isfinite(dim_eff_perp), "bound: dim_eff_perp must be >= 0");
  require(bias_term >= 0.0 && std::isfinite(bias_term), "bound: bias_term must be >= 0");
  BoundReport r;
  r.ingredients = {n, rho, m_k, sigma_sq, dim_eff_perp, bias_term};
  r.value = (sigma_sq * dim_eff_perp + bias_term) / denominator(n, m_k, rho);
  r.formula = BoundFormula::kGeneral;
  return r;
}

BoundReport linear_bound(const AveragedRep& phi, const VecRef& theta, double n, double rho,
                         double sigma_sq) {
  check_common(n, rho, sigma_sq);
  const auto dim = phi.phi.rows();
  require(phi.phi.cols() == dim && theta.size() == dim,
          "linear_bound: Phi must be d x d and theta a d-vector");
  const double d = static_cast<double>(dim);
  const double fro = phi.frobenius_sq();
  require(fro <= d + 1e-10, "linear_bound: |Phi|_F^2 = " + std::to_string(fro) +
                                " exceeds d; the representation is not orthogonal");
  const double drift = (phi.phi * theta - theta).norm();
  require(drift <= 1e-10 * std::max(1.0, theta.norm()),
          "linear_bound: theta is not invariant (|Phi theta - theta| = " + std::to_string(drift) +
              ")");
  // Clamp rounding below zero when |Phi|_F^2 == d.
  const double deficit = std::max(0.0, d - fro);
  BoundReport r;
  r.ingredients = {n, rho, 1.0, sigma_sq, deficit / (d * d),
                   deficit * theta.squaredNorm() / (d * d * (d + 2.0))};
  r.value = (sigma_sq * r.ingredients.dim_eff_perp + r.ingredients.bias_term) /
            denominator(n, 1.0, rho);
  r.formula = BoundFormula::kLinearClosedForm;
  return r;
}

BoundReport sd_bound(int d, double t, double n, double rho, double sigma_sq) {
  check_common(n, rho, sigma_sq);
  require(d >= 1, "sd_bound: d must be >= 1");
  require(std::isfinite(t), "sd_bound: t must be finite");
  const double dd = d;
  BoundReport r;
  r.degenerate = d == 1;
  r.ingredients = {n, rho, 1.0, sigma_sq, (dd - 1.0) / (dd * dd),
                   (dd - 1.0) * dd * t * t / (dd * dd * (dd + 2.0))};
  r.value = (dd - 1.0) * (sigma_sq * (dd + 2.0) + dd * t * t) /
            (dd * dd * (dd + 2.0) * denominator(n, 1.0, rho));
  r.formula = BoundFormula::kSymmetricGroup;
  return r;
}

}  // namespace invkrr
