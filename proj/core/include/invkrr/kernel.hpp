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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "invkrr/common.hpp"
#include "invkrr/group.hpp"

namespace invkrr {

enum class KernelFamily { kLinear, kRbf, kInnerProduct };

// Base kernel k. Every family is a function of (x.y, |x|^2, |y|^2), which is
// what lets averaged kernels be evaluated in batches.
class Kernel {
 public:
  static Kernel linear();
  static Kernel rbf(double lengthscale);
  // kappa(s) = sum_j coefficients[j] * s^j.
  static Kernel inner_product(std::vector<double> coefficients);
  // kappa(s) = s^degree, so kappa(1) = 1.
  static Kernel polynomial(int degree);
  // "linear", "rbf:<lengthscale>", "poly:<degree>".
  static Kernel parse(std::string_view id);

  // Throws ValidationError on dimension mismatch or non-finite input.
  double operator()(const VecRef& x, const VecRef& y) const;

  // Unchecked evaluation from inner products: xy = x.y, xx = |x|^2, yy = |y|^2.
  double from_products(double xy, double xx, double yy) const;

  // M_k = sup k(x, x) on the unit sphere: 1 for linear and RBF, kappa(1) for
  // inner-product kernels.
  double bound() const;

  KernelFamily family() const { return family_; }
  double lengthscale() const { return lengthscale_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  const std::string& id() const { return id_; }

 private:
  Kernel(KernelFamily family, std::string id) : family_(family), id_(std::move(id)) {}

  KernelFamily family_;
  std::string id_;
  double lengthscale_ = 1.0;
  std::vector<double> coefficients_;
};

// kbar(x, y) = mean_g k(x, phi(g) y).
class AveragedKernel {
 public:
  AveragedKernel(Kernel base, GroupRep rep);

  double operator()(const VecRef& x, const VecRef& y) const;

  const Kernel& base() const { return base_; }
  const GroupRep& rep() const { return rep_; }

 private:
  Kernel base_;
  GroupRep rep_;
};

// kperp = k - kbar.
class PerpKernel {
 public:
  PerpKernel(Kernel base, GroupRep rep) : averaged_(std::move(base), std::move(rep)) {}

  double operator()(const VecRef& x, const VecRef& y) const;

  const Kernel& base() const { return averaged_.base(); }
  const GroupRep& rep() const { return averaged_.rep(); }
  const AveragedKernel& averaged() const { return averaged_; }

 private:
  AveragedKernel averaged_;
};

// Arbitrary user-supplied kernel; evaluated pointwise with no batching.
struct CustomKernel {
  std::function<double(const VecRef&, const VecRef&)> fn;
  std::string name = "custom";

  double operator()(const VecRef& x, const VecRef& y) const { return fn(x, y); }
};

using Evaluator = std::variant<Kernel, AveragedKernel, PerpKernel, CustomKernel>;

double evaluate(const Evaluator& k, const VecRef& x, const VecRef& y);

// The group attached to an averaged or perpendicular evaluator, if any.
const GroupRep* attached_rep(const Evaluator& k);

std::string describe(const Evaluator& k);

// Entries k(a_i, b_j) for columns a_i of `a` and b_j of `b`.
Matrix cross_gram(const Evaluator& k, const Points& a, const Points& b);

enum class GramKind { kBase, kAveraged, kPerp, kCustom };

struct GramMatrix {
  Matrix entries;
  GramKind kind;
};

// Symmetric Gram matrix over the columns of `points`; the upper triangle is
// mirrored so the result is exactly symmetric. Throws on an empty point set.
GramMatrix gram(const Evaluator& k, const Points& points);

struct PsdReport {
  bool psd = true;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

// PSD within -rel_tol * max(1, lambda_max).
PsdReport check_psd(const Matrix& symmetric, double rel_tol = 1e-8);

using ProbePair = std::pair<Vector, Vector>;

// max over probes of |mean_g k(gx, y) - mean_g k(x, gy)|.
double check_switch_condition(const Evaluator& k, const GroupRep& rep,
                              std::span<const ProbePair> probes);

}  // namespace invkrr
