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

#include "invkrr/kernel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace invkrr {
namespace {

void check_args(const VecRef& x, const VecRef& y) {
  if (x.size() != y.size()) {
    throw ValidationError("kernel evaluation: dimension mismatch (" + std::to_string(x.size()) +
                          " vs " + std::to_string(y.size()) + ")");
  }
  if (!x.allFinite() || !y.allFinite()) {
    throw ValidationError("kernel evaluation: non-finite input");
  }
}

double horner(const std::vector<double>& c, double s) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + *it;
  return v;
}

double parse_double(std::string_view text, std::string_view id) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError("invalid kernel id '" + std::string(id) + "'");
  }
  return value;
}

// Accumulates weight * k(a_i, phi b_j) for one transformed block into `acc`.
void accumulate_family(const Kernel& k, const Matrix& dots, const Eigen::RowVectorXd& aa_t,
                       const Eigen::RowVectorXd& bb, double weight, Matrix& acc) {
  switch (k.family()) {
    case KernelFamily::kLinear:
      acc.noalias() += weight * dots;
      return;
    case KernelFamily::kRbf: {
      const double scale = -0.5 / (k.lengthscale() * k.lengthscale());
      for (Eigen::Index j = 0; j < dots.cols(); ++j) {
        for (Eigen::Index i = 0; i < dots.rows(); ++i) {
          const double dist_sq = std::max(0.0, aa_t(i) + bb(j) - 2.0 * dots(i, j));
          acc(i, j) += weight * std::exp(scale * dist_sq);
        }
      }
      return;
    }
    case KernelFamily::kInnerProduct:
      for (Eigen::Index j = 0; j < dots.cols(); ++j) {
        for (Eigen::Index i = 0; i < dots.rows(); ++i) {
          acc(i, j) += weight * horner(k.coefficients(), dots(i, j));
        }
      }
      return;
  }
}

void check_points(const Points& a, const Points& b) {
  if (a.rows() != b.rows()) {
    throw ValidationError("cross_gram: point dimensions differ (" + std::to_string(a.rows()) +
                          " vs " + std::to_string(b.rows()) + ")");
  }
  if (!a.allFinite() || !b.allFinite()) throw ValidationError("cross_gram: non-finite point");
}

Matrix family_cross(const Kernel& k, const Points& a, const Points& b) {
  check_points(a, b);
  const Matrix dots = a.transpose() * b;
  Matrix out = Matrix::Zero(a.cols(), b.cols());
  accumulate_family(k, dots, a.colwise().squaredNorm(), b.colwise().squaredNorm(), 1.0, out);
  return out;
}

Matrix averaged_cross(const AveragedKernel& k, const Points& a, const Points& b) {
  check_points(a, b);
  if (a.rows() != k.rep().dim()) {
    throw ValidationError("cross_gram: points live in R^" + std::to_string(a.rows()) +
                          " but group '" + k.rep().id() + "' acts on R^" +
                          std::to_string(k.rep().dim()));
  }
  const Eigen::RowVectorXd aa = a.colwise().squaredNorm();
  // phi(g) is orthogonal, so |phi(g) b_j| = |b_j|.
  const Eigen::RowVectorXd bb = b.colwise().squaredNorm();
  Matrix acc = Matrix::Zero(a.cols(), b.cols());
  Matrix moved(b.rows(), b.cols());
  Matrix dots(a.cols(), b.cols());
  const double w = k.rep().weight();
  for (const auto& g : k.rep().elements()) {
    moved.noalias() = g.matrix() * b;
    dots.noalias() = a.transpose() * moved;
    accumulate_family(k.base(), dots, aa, bb, w, acc);
  }
  return acc;
}

Matrix pointwise_cross(const CustomKernel& k, const Points& a, const Points& b) {
  check_points(a, b);
  Matrix out(a.cols(), b.cols());
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.cols(); ++i) out(i, j) = k(a.col(i), b.col(j));
  }
  return out;
}

}  // namespace

Kernel Kernel::linear() { return Kernel(KernelFamily::kLinear, "linear"); }

Kernel Kernel::rbf(double lengthscale) {
  if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
    throw ValidationError("rbf lengthscale must be positive and finite");
  }
  std::ostringstream id;
  id << "rbf:" << lengthscale;
  Kernel k(KernelFamily::kRbf, id.str());
  k.lengthscale_ = lengthscale;
  return k;
}

Kernel Kernel::inner_product(std::vector<double> coefficients) {
  if (coefficients.empty()) throw ValidationError("inner-product kernel needs coefficients");
  for (double c : coefficients) {
    // Nonnegative Taylor coefficients keep kappa(x.y) positive definite.
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw ValidationError("inner-product kernel coefficients must be finite and >= 0");
    }
  }
  std::ostringstream id;
  id << "inner:";
  for (std::size_t i = 0; i < coefficients.size(); ++i) id << (i ? "," : "") << coefficients[i];
  Kernel k(KernelFamily::kInnerProduct, id.str());
  k.coefficients_ = std::move(coefficients);
  return k;
}

Kernel Kernel::polynomial(int degree) {
  if (degree < 1) throw ValidationError("poly kernel degree must be >= 1");
  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  c.back() = 1.0;
  Kernel k = inner_product(std::move(c));
  k.id_ = "poly:" + std::to_string(degree);
  return k;
}

Kernel Kernel::parse(std::string_view id) {
  if (id == "linear") return linear();
  const auto colon = id.find(':');
  if (colon != std::string_view::npos) {
    const std::string_view name = id.substr(0, colon);
    const std::string_view arg = id.substr(colon + 1);
    if (name == "rbf") return rbf(parse_double(arg, id));
    if (name == "poly") {
      const double p = parse_double(arg, id);
      if (p != std::floor(p) || p < 1 || p > 64) {
        throw ValidationError("poly kernel degree must be an integer in [1, 64]");
      }
      return polynomial(static_cast<int>(p));
    }
  }
  throw ValidationError("unknown kernel id '" + std::string(id) +
                        "': expected linear, rbf:<lengthscale> or poly:<degree>");
}

double Kernel::operator()(const VecRef& x, const VecRef& y) const {
  check_args(x, y);
  switch (family_) {
    case KernelFamily::kLinear:
      return x.dot(y);
    case KernelFamily::kRbf:
      return std::exp(-(x - y).squaredNorm() / (2.0 * lengthscale_ * lengthscale_));
    case KernelFamily::kInnerProduct:
      return horner(coefficients_, x.dot(y));
  }
  return 0.0;
}

double Kernel::from_products(double xy, double xx, double yy) const {
  switch (family_) {
    case KernelFamily::kLinear:
      return xy;
    case KernelFamily::kRbf:
      return std::exp(-std::max(0.0, xx + yy - 2.0 * xy) / (2.0 * lengthscale_ * lengthscale_));
    case KernelFamily::kInnerProduct:
      return horner(coefficients_, xy);
  }
  return 0.0;
}

double Kernel::bound() const {
  switch (family_) {
    case KernelFamily::kLinear:
    case KernelFamily::kRbf:
      return 1.0;
    case KernelFamily::kInnerProduct:
      return horner(coefficients_, 1.0);
  }
  return 0.0;
}

AveragedKernel::AveragedKernel(Kernel base, GroupRep rep)
    : base_(std::move(base)), rep_(std::move(rep)) {}

double AveragedKernel::operator()(const VecRef& x, const VecRef& y) const {
  check_args(x, y);
  double sum = 0.0;
  for (const auto& g : rep_.elements()) sum += base_(x, apply(g, y));
  return sum * rep_.weight();
}

double PerpKernel::operator()(const VecRef& x, const VecRef& y) const {
  return averaged_.base()(x, y) - averaged_(x, y);
}

double evaluate(const Evaluator& k, const VecRef& x, const VecRef& y) {
  return std::visit([&](const auto& kernel) { return kernel(x, y); }, k);
}

const GroupRep* attached_rep(const Evaluator& k) {
  if (const auto* a = std::get_if<AveragedKernel>(&k)) return &a->rep();
  if (const auto* p = std::get_if<PerpKernel>(&k)) return &p->rep();
  return nullptr;
}

std::string describe(const Evaluator& k) {
  struct {
    std::string operator()(const Kernel& b) const { return b.id(); }
    std::string operator()(const AveragedKernel& a) const {
      return "avg(" + a.base().id() + "," + a.rep().id() + ")";
    }
    std::string operator()(const PerpKernel& p) const {
      return "perp(" + p.base().id() + "," + p.rep().id() + ")";
    }
    std::string operator()(const CustomKernel& c) const { return c.name; }
  } visitor;
  return std::visit(visitor, k);
}

Matrix cross_gram(const Evaluator& k, const Points& a, const Points& b) {
  struct {
    const Points& a;
    const Points& b;
    Matrix operator()(const Kernel& base) const { return family_cross(base, a, b); }
    Matrix operator()(const AveragedKernel& avg) const { return averaged_cross(avg, a, b); }
    Matrix operator()(const PerpKernel& perp) const {
      return family_cross(perp.base(), a, b) - averaged_cross(perp.averaged(), a, b);
    }
    Matrix operator()(const CustomKernel& custom) const { return pointwise_cross(custom, a, b); }
  } visitor{a, b};
  return std::visit(visitor, k);
}

GramMatrix gram(const Evaluator& k, const Points& points) {
  if (points.cols() == 0) throw ValidationError("gram: empty point set");
  Matrix entries = cross_gram(k, points, points);
  entries.triangularView<Eigen::StrictlyLower>() = entries.transpose();
  static constexpr GramKind kinds[] = {GramKind::kBase, GramKind::kAveraged, GramKind::kPerp,
                                       GramKind::kCustom};
  return GramMatrix{std::move(entries), kinds[k.index()]};
}

PsdReport check_psd(const Matrix& symmetric, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("check_psd: eigensolver failed");
  PsdReport report;
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  report.max_eigenvalue = solver.eigenvalues().maxCoeff();
  report.psd = report.min_eigenvalue >= -rel_tol * std::max(1.0, report.max_eigenvalue);
  return report;
}

double check_switch_condition(const Evaluator& k, const GroupRep& rep,
                              std::span<const ProbePair> probes) {
  double worst = 0.0;
  for (const auto& [x, y] : probes) {
    double left = 0.0;
    double right = 0.0;
    for (const auto& g : rep.elements()) {
      left += evaluate(k, apply(g, x), y);
      right += evaluate(k, x, apply(g, y));
    }
    worst = std::max(worst, std::abs(left - right) * rep.weight());
  }
  return worst;
}

}  // namespace invkrr
