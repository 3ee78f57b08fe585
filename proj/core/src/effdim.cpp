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

#include "invkrr/effdim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace invkrr {
namespace {

constexpr double kClipTol = 1e-10;

struct UStat {
  double value = 0.0;
  double std_error = 0.0;
};

// Callback filling `out[s]` with the b x b matrix h_s(i, j) of ordered-pair
// values for points [begin, begin + b). Diagonals are ignored.
using BlockFn = std::function<void(Eigen::Index begin, Eigen::Index b, std::vector<Matrix>& out)>;

std::vector<UStat> blocked_ustats(Eigen::Index m, Eigen::Index block, std::size_t count,
                                  const BlockFn& fill) {
  const Eigen::Index nblocks = (m + block - 1) / block;
  const Eigen::Index base = m / nblocks;
  const Eigen::Index extra = m % nblocks;

  std::vector<double> sums(count, 0.0);
  std::vector<Vector> touched(count, Vector::Zero(m));
  std::vector<Eigen::Index> block_of(static_cast<std::size_t>(m));
  std::vector<Eigen::Index> sizes;
  double pairs = 0.0;
  std::vector<Matrix> h(count);

  Eigen::Index begin = 0;
  for (Eigen::Index blk = 0; blk < nblocks; ++blk) {
    const Eigen::Index b = base + (blk < extra ? 1 : 0);
    sizes.push_back(b);
    for (Eigen::Index i = 0; i < b; ++i) block_of[static_cast<std::size_t>(begin + i)] = blk;
    fill(begin, b, h);
    for (std::size_t s = 0; s < count; ++s) {
      h[s].diagonal().setZero();
      sums[s] += h[s].sum();
      touched[s].segment(begin, b) = h[s].rowwise().sum() + h[s].colwise().sum().transpose();
    }
    pairs += static_cast<double>(b) * static_cast<double>(b - 1);
    begin += b;
  }

  std::vector<UStat> out(count);
  for (std::size_t s = 0; s < count; ++s) {
    out[s].value = sums[s] / pairs;
    Vector leave_one_out(m);
    bool defined = true;
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto b = sizes[static_cast<std::size_t>(block_of[static_cast<std::size_t>(i)])];
      const double remaining = pairs - 2.0 * static_cast<double>(b - 1);
      if (remaining <= 0.0) {
        defined = false;
        break;
      }
      leave_one_out(i) = (sums[s] - touched[s](i)) / remaining;
    }
    if (!defined) {
      out[s].std_error = std::numeric_limits<double>::infinity();
      continue;
    }
    const double mean = leave_one_out.mean();
    const double md = static_cast<double>(m);
    out[s].std_error = std::sqrt((md - 1.0) / md * (leave_one_out.array() - mean).square().sum());
  }
  return out;
}

Quantity quantity_of(const Evaluator& k) {
  if (std::holds_alternative<AveragedKernel>(k)) return Quantity::kDimEffAveraged;
  if (std::holds_alternative<PerpKernel>(k)) return Quantity::kDimEffPerp;
  return Quantity::kDimEff;
}

void require_closed(const DiscreteDomain& domain, const GroupRep& rep) {
  if (!domain.is_closed_under(rep)) {
    throw ValidationError("discrete domain is not closed under group '" + rep.id() +
                          "'; the uniform measure would not be invariant");
  }
}

void check_sample_args(int d, Eigen::Index m, Eigen::Index block, const char* who) {
  if (d < 1) throw ValidationError(std::string(who) + ": d must be >= 1");
  if (m < 2) throw ValidationError(std::string(who) + ": need m >= 2 samples");
  if (block < 4) throw ValidationError(std::string(who) + ": block size must be >= 4");
}

Vector squared_targets(const TargetFn& target, const Points& pts) {
  Vector f2(pts.cols());
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    const double v = target(pts.col(j));
    f2(j) = v * v;
  }
  return f2;
}

SpectrumEstimate spectrum_of(const Matrix& g) {
  const auto m = g.rows();
  const Matrix op = g / static_cast<double>(m);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("nystrom_spectrum: eigensolver failed");
  const Vector& ev = solver.eigenvalues();
  const double floor = -kClipTol * std::max(1.0, ev.maxCoeff());
  SpectrumEstimate out;
  out.sample_size = m;
  for (Eigen::Index i = ev.size() - 1; i >= 0; --i) {
    if (ev(i) < floor) {
      throw NumericalError("nystrom_spectrum: eigenvalue " + std::to_string(ev(i)) +
                           " is negative beyond tolerance; kernel is not positive");
    }
    out.eigenvalues.push_back(std::max(0.0, ev(i)));
  }
  for (double l : out.eigenvalues) out.trace_sq += l * l;
  out.diagonal_sq = op.diagonal().squaredNorm();
  return out;
}

}  // namespace

double j_diag_mc(const Evaluator& k, const VecRef& x, Eigen::Index m, std::uint64_t seed) {
  if (m < 1) throw ValidationError("j_diag_mc: need m >= 1");
  const Points z = sample_sphere(SphereDomain{static_cast<int>(x.size()), seed}, m);
  return cross_gram(k, Points(x), z).array().square().mean();
}

EffDimEstimate effdim_mc(const Evaluator& k, int d, Eigen::Index m, std::uint64_t seed,
                         Eigen::Index block) {
  check_sample_args(d, m, block, "effdim_mc");
  const Points x = sample_sphere(SphereDomain{d, seed}, m);
  const auto stats = blocked_ustats(
      m, block, 1, [&](Eigen::Index begin, Eigen::Index b, std::vector<Matrix>& out) {
        const auto pts = x.middleCols(begin, b);
        out[0] = cross_gram(k, pts, pts).array().square().matrix();
      });
  return EffDimEstimate{stats[0].value, stats[0].std_error, EstimateMode::kMonteCarlo, m,
                        quantity_of(k)};
}

EffDimEstimate effdim_exact_discrete(const Evaluator& k, const DiscreteDomain& domain) {
  if (const GroupRep* rep = attached_rep(k)) require_closed(domain, *rep);
  const Matrix g = gram(k, domain.points()).entries;
  const double m = static_cast<double>(domain.size());
  return EffDimEstimate{g.squaredNorm() / (m * m), 0.0, EstimateMode::kExactDiscrete,
                        domain.size(), quantity_of(k)};
}

BiasTermEstimate bias_term_mc(const Kernel& k, const GroupRep& rep, const TargetFn& target, int d,
                              Eigen::Index m, std::uint64_t seed, Eigen::Index block) {
  check_sample_args(d, m, block, "bias_term_mc");
  if (rep.dim() != d) throw ValidationError("bias_term_mc: group dimension differs from d");
  const Points x = sample_sphere(SphereDomain{d, seed}, m);
  const Vector f2 = squared_targets(target, x);
  const AveragedKernel avg(k, rep);
  const auto stats = blocked_ustats(
      m, block, 3, [&](Eigen::Index begin, Eigen::Index b, std::vector<Matrix>& out) {
        const auto pts = x.middleCols(begin, b);
        const Matrix kb = cross_gram(k, pts, pts);
        const Matrix ka = cross_gram(avg, pts, pts);
        const auto weights = f2.segment(begin, b).transpose().replicate(b, 1).array();
        out[0] = (weights * (kb - ka).array().square()).matrix();
        out[1] = (weights * (kb.array().square() - ka.array().square())).matrix();
        out[2] = out[0] - out[1];
      });
  BiasTermEstimate r;
  r.estimate = EffDimEstimate{stats[0].value, stats[0].std_error, EstimateMode::kMonteCarlo, m,
                              Quantity::kBiasTerm};
  r.identity_value = stats[1].value;
  r.discrepancy = stats[0].value - stats[1].value;
  r.discrepancy_se = stats[2].std_error;
  return r;
}

BiasTermEstimate bias_term_exact_discrete(const Kernel& k, const GroupRep& rep,
                                          const TargetFn& target, const DiscreteDomain& domain) {
  require_closed(domain, rep);
  const Points& pts = domain.points();
  const Matrix kb = gram(k, pts).entries;
  const Matrix ka = gram(AveragedKernel(k, rep), pts).entries;
  const Vector f2 = squared_targets(target, pts);
  const double m2 = static_cast<double>(domain.size()) * static_cast<double>(domain.size());
  const double direct = ((kb - ka).array().square().matrix() * f2).sum() / m2;
  const double identity = ((kb.array().square() - ka.array().square()).matrix() * f2).sum() / m2;
  BiasTermEstimate r;
  r.estimate = EffDimEstimate{direct, 0.0, EstimateMode::kExactDiscrete, domain.size(),
                              Quantity::kBiasTerm};
  r.identity_value = identity;
  r.discrepancy = direct - identity;
  return r;
}

double SpectrumEstimate::offdiagonal_trace_sq() const {
  const double m = static_cast<double>(sample_size);
  return (trace_sq - diagonal_sq) * m / (m - 1.0);
}

SpectrumEstimate nystrom_spectrum(const Evaluator& k, const SphereDomain& domain, Eigen::Index m) {
  if (m < 1) throw ValidationError("nystrom_spectrum: need m >= 1");
  return spectrum_of(gram(k, sample_sphere(domain, m)).entries);
}

SpectrumEstimate nystrom_spectrum(const Evaluator& k, const DiscreteDomain& domain) {
  if (const GroupRep* rep = attached_rep(k)) require_closed(domain, *rep);
  return spectrum_of(gram(k, domain.points()).entries);
}

}  // namespace invkrr
