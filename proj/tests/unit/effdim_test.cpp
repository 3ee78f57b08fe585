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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace invkrr {
namespace {

using testing::columns;
using testing::shipped_finite_groups;
using testing::vec;

// Brute-force U-statistic and delete-one jackknife over consecutive blocks,
// recomputing every leave-one-out value from scratch.
std::pair<double, double> brute_force_ustat(const Matrix& h, Eigen::Index block) {
  const Eigen::Index m = h.rows();
  const Eigen::Index nb = (m + block - 1) / block;
  std::vector<Eigen::Index> block_id(static_cast<std::size_t>(m));
  Eigen::Index start = 0;
  for (Eigen::Index b = 0; b < nb; ++b) {
    const Eigen::Index size = m / nb + (b < m % nb ? 1 : 0);
    for (Eigen::Index i = start; i < start + size; ++i) block_id[static_cast<std::size_t>(i)] = b;
    start += size;
  }
  auto ustat = [&](Eigen::Index skip) {
    double sum = 0.0;
    double count = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        if (i == j || i == skip || j == skip) continue;
        if (block_id[static_cast<std::size_t>(i)] != block_id[static_cast<std::size_t>(j)]) continue;
        sum += h(i, j);
        count += 1.0;
      }
    }
    return sum / count;
  };
  const double full = ustat(-1);
  std::vector<double> loo(static_cast<std::size_t>(m));
  double mean = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) mean += (loo[static_cast<std::size_t>(i)] = ustat(i));
  mean /= static_cast<double>(m);
  double ss = 0.0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  return {full, std::sqrt((m - 1.0) / m * ss)};
}

TEST(EffDimMcTest, JackknifeMatchesBruteForce) {
  const PerpKernel perp(Kernel::rbf(0.8), make_symmetric_group(3));
  for (Eigen::Index block : {Eigen::Index{64}, Eigen::Index{7}}) {
    const Eigen::Index m = 40;
    const EffDimEstimate est = effdim_mc(perp, 3, m, 5, block);
    const Points x = sample_sphere(SphereDomain{3, 5}, m);
    Matrix h(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) h(i, j) = std::pow(perp(x.col(i), x.col(j)), 2);
    }
    const auto [value, se] = brute_force_ustat(h, block);
    EXPECT_NEAR(est.value, value, 1e-14);
    EXPECT_NEAR(est.std_error, se, 1e-12);
  }
}

TEST(EffDimMcTest, LinearKernelIsOneOverD) {
  const EffDimEstimate est = effdim_mc(Kernel::linear(), 5, 6000, 17);
  EXPECT_EQ(est.quantity, Quantity::kDimEff);
  EXPECT_GT(est.std_error, 0.0);
  EXPECT_LE(std::abs(est.value - 0.2), 3.0 * est.std_error);
}

TEST(EffDimMcTest, PerpLinearS5) {
  const EffDimEstimate est = effdim_mc(PerpKernel(Kernel::linear(), make_symmetric_group(5)), 5,
                                       12000, 23);
  EXPECT_EQ(est.quantity, Quantity::kDimEffPerp);
  // Oracle: for uniform x, y on the sphere, E[(x^T A y)^2] = |A|_F^2 / d^2
  // (E[y y^T] = I/d applied twice); A = I - Phi, |A|_F^2 = 4 for S_5.
  const Matrix a = Matrix::Identity(5, 5) - averaged_rep(make_symmetric_group(5)).phi;
  const double oracle = a.squaredNorm() / 25.0;
  EXPECT_NEAR(oracle, 0.16, 1e-15);
  EXPECT_LE(std::abs(est.value - oracle), 3.0 * est.std_error);
  EXPECT_TRUE(est.nonnegative());
}

TEST(EffDimMcTest, TrivialPerpIsExactlyZero) {
  const EffDimEstimate est = effdim_mc(PerpKernel(Kernel::rbf(1.0), make_trivial_group(3)), 3,
                                       500, 1);
  EXPECT_EQ(est.value, 0.0);
  EXPECT_EQ(est.std_error, 0.0);
}

TEST(EffDimMcTest, SeedDeterminismAndErrors) {
  const Evaluator k = AveragedKernel(Kernel::rbf(0.5), make_cyclic_group(3));
  const EffDimEstimate a = effdim_mc(k, 3, 700, 99);
  const EffDimEstimate b = effdim_mc(k, 3, 700, 99);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.quantity, Quantity::kDimEffAveraged);
  EXPECT_THROW(effdim_mc(k, 3, 1, 0), ValidationError);
  // Two points leave nothing after a deletion: the jackknife is undefined.
  EXPECT_TRUE(std::isinf(effdim_mc(k, 3, 2, 0).std_error));
}

TEST(JDiagTest, LinearKernelIsOneOverD) {
  const int d = 4;
  const Eigen::Index m = 100000;
  const Vector x = vec({0.5, 0.5, 0.5, 0.5});
  const double est = j_diag_mc(Kernel::linear(), x, m, 3);
  // Var((x.z)^2) = E[(x.z)^4] - 1/d^2 with E[(x.z)^4] = 3 / (d (d + 2)).
  const double se = std::sqrt((3.0 / (d * (d + 2.0)) - 1.0 / (d * d)) / m);
  EXPECT_LE(std::abs(est - 1.0 / d), 3.0 * se);
}

TEST(JDiagTest, ZeroKernel) {
  EXPECT_EQ(j_diag_mc(PerpKernel(Kernel::linear(), make_trivial_group(2)), vec({1, 0}), 100, 1),
            0.0);
}

TEST(JDiagTest, PerpS2AgainstCircleQuadrature) {
  // Oracle: trapezoid rule on the circle (exact for trigonometric
  // polynomials) of kperp(x, z)^2 written out by hand:
  //   kperp((1,0), z) = z1 - (z1 + z2) / 2 = (z1 - z2) / 2.
  const int nodes = 720;
  double mean = 0.0;
  double mean_sq = 0.0;
  for (int q = 0; q < nodes; ++q) {
    const double a = 2.0 * std::numbers::pi * q / nodes;
    const double h = std::pow((std::cos(a) - std::sin(a)) / 2.0, 2);
    mean += h / nodes;
    mean_sq += h * h / nodes;
  }
  EXPECT_NEAR(mean, 0.25, 1e-14);
  const Eigen::Index m = 50000;
  const double se = std::sqrt((mean_sq - mean * mean) / m);
  const double est =
      j_diag_mc(PerpKernel(Kernel::linear(), make_symmetric_group(2)), vec({1, 0}), m, 8);
  EXPECT_LE(std::abs(est - mean), 3.0 * se);
}

TEST(EffDimExactTest, TwoPointExample) {
  const GroupRep s2 = make_symmetric_group(2);
  const DiscreteDomain dom(columns({vec({1, 0}), vec({0, 1})}));
  const Kernel lin = Kernel::linear();
  // Hand double sums over the Gram matrices I, (1/2) 1 1^T and their difference.
  EXPECT_NEAR(effdim_exact_discrete(lin, dom).value, 0.5, 1e-15);
  EXPECT_NEAR(effdim_exact_discrete(AveragedKernel(lin, s2), dom).value, 0.25, 1e-15);
  const EffDimEstimate perp = effdim_exact_discrete(PerpKernel(lin, s2), dom);
  EXPECT_NEAR(perp.value, 0.25, 1e-15);
  EXPECT_EQ(perp.std_error, 0.0);
  EXPECT_EQ(perp.mode, EstimateMode::kExactDiscrete);
  EXPECT_EQ(effdim_exact_discrete(PerpKernel(lin, make_trivial_group(2)), dom).value, 0.0);
}

TEST(EffDimExactTest, FixedPointHasNoPerpPart) {
  const GroupRep s2 = make_symmetric_group(2);
  const DiscreteDomain dom = orbit_closure(columns({vec({1, 1}) / std::sqrt(2.0)}), s2);
  EXPECT_NEAR(effdim_exact_discrete(PerpKernel(Kernel::rbf(1.0), s2), dom).value, 0.0, 1e-15);
}

TEST(EffDimExactTest, RejectsNonClosedDomain) {
  const DiscreteDomain dom(columns({vec({1, 0})}));
  EXPECT_THROW(effdim_exact_discrete(PerpKernel(Kernel::linear(), make_symmetric_group(2)), dom),
               ValidationError);
  EXPECT_NO_THROW(effdim_exact_discrete(Kernel::linear(), dom));
}

TEST(EffDimExactTest, AdditivityBiasIdentityAndTraceProperty) {
  const std::vector<Kernel> kernels = {Kernel::linear(), Kernel::rbf(0.6), Kernel::polynomial(3)};
  for (const auto& rep : shipped_finite_groups()) {
    const int d = static_cast<int>(rep.dim());
    const DiscreteDomain dom = orbit_closure(sample_sphere(SphereDomain{d, 2}, 2), rep);
    const LinearTarget target = make_invariant_theta(rep, Vector::LinSpaced(d, 1.0, 2.0));
    for (const auto& k : kernels) {
      const double full = effdim_exact_discrete(k, dom).value;
      const double avg = effdim_exact_discrete(AveragedKernel(k, rep), dom).value;
      const double perp = effdim_exact_discrete(PerpKernel(k, rep), dom).value;
      EXPECT_NEAR(full, avg + perp, 1e-10) << k.id() << " " << rep.id();
      EXPECT_GE(perp, -1e-10);
      const BiasTermEstimate bias = bias_term_exact_discrete(k, rep, target, dom);
      EXPECT_TRUE(bias.identity_holds()) << bias.discrepancy;
      EXPECT_NEAR(nystrom_spectrum(k, dom).trace_sq, full, 1e-10);
      EXPECT_NEAR(nystrom_spectrum(PerpKernel(k, rep), dom).trace_sq, perp, 1e-10);
    }
  }
}

TEST(BiasTermTest, ZeroTarget) {
  const TargetFn zero = [](const VecRef&) { return 0.0; };
  const BiasTermEstimate est =
      bias_term_mc(Kernel::linear(), make_symmetric_group(3), zero, 3, 300, 4);
  EXPECT_EQ(est.estimate.value, 0.0);
  EXPECT_EQ(est.estimate.quantity, Quantity::kBiasTerm);
}

TEST(BiasTermTest, LinearS5AgainstIsotropicMoments) {
  const int d = 5;
  const GroupRep s5 = make_symmetric_group(d);
  const LinearTarget target = make_invariant_theta(s5, Vector::Ones(d));
  // Oracle: with B = A^T A, A = I - Phi,
  //   E_x E_y[(theta.y)^2 (x^T A y)^2] = E_y[(theta.y)^2 y^T B y] / d
  //     = (|theta|^2 tr(B) + 2 theta^T B theta) / (d^2 (d + 2))
  // by the isotropic fourth-moment tensor of the uniform sphere.
  const Matrix a = Matrix::Identity(d, d) - averaged_rep(s5).phi;
  const Matrix bmat = a.transpose() * a;
  const double oracle =
      (target.theta.squaredNorm() * bmat.trace() + 2.0 * target.theta.dot(bmat * target.theta)) /
      (d * d * (d + 2.0));
  EXPECT_NEAR(oracle, 20.0 / 175.0, 1e-14);
  const BiasTermEstimate est = bias_term_mc(Kernel::linear(), s5, target, d, 12000, 31);
  EXPECT_LE(std::abs(est.estimate.value - oracle), 3.0 * est.estimate.std_error);
  EXPECT_TRUE(est.identity_holds());
}

TEST(BiasTermTest, DiscreteTwoPointExample) {
  const double t = 1.5;
  const GroupRep s2 = make_symmetric_group(2);
  const DiscreteDomain dom(columns({vec({1, 0}), vec({0, 1})}));
  const TargetFn f = [&](const VecRef& x) { return t * (x(0) + x(1)); };
  const BiasTermEstimate est = bias_term_exact_discrete(Kernel::linear(), s2, f, dom);
  EXPECT_NEAR(est.estimate.value, 0.25 * t * t, 1e-15);
  EXPECT_NEAR(est.discrepancy, 0.0, 1e-15);
}

TEST(NystromTest, DiscreteExample) {
  const DiscreteDomain dom(columns({vec({1, 0}), vec({0, 1})}));
  const SpectrumEstimate s = nystrom_spectrum(Kernel::linear(), dom);
  ASSERT_EQ(s.eigenvalues.size(), 2u);
  EXPECT_NEAR(s.eigenvalues[0], 0.5, 1e-15);
  EXPECT_NEAR(s.eigenvalues[1], 0.5, 1e-15);
  EXPECT_NEAR(s.trace_sq, 0.5, 1e-15);
}

TEST(NystromTest, ZeroKernelAndOrdering) {
  const SpectrumEstimate zero =
      nystrom_spectrum(PerpKernel(Kernel::rbf(1.0), make_trivial_group(3)), SphereDomain{3, 1}, 20);
  for (double l : zero.eigenvalues) EXPECT_EQ(l, 0.0);
  const SpectrumEstimate s = nystrom_spectrum(Kernel::rbf(0.5), SphereDomain{3, 2}, 60);
  EXPECT_TRUE(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
  for (double l : s.eigenvalues) EXPECT_GE(l, 0.0);
}

TEST(NystromTest, LinearSphereTraceAgreesWithUStatistic) {
  const int d = 5;
  const Eigen::Index m = 2000;
  const std::uint64_t seed = 12;
  const SpectrumEstimate s = nystrom_spectrum(Kernel::linear(), SphereDomain{d, seed}, m);
  const EffDimEstimate u = effdim_mc(Kernel::linear(), d, m, seed, m);
  // Removing the i = j terms from trace_sq recovers the U-statistic exactly.
  EXPECT_NEAR(s.offdiagonal_trace_sq(), u.value, 1e-10);
  EXPECT_LE(std::abs(s.offdiagonal_trace_sq() - 1.0 / d), 3.0 * u.std_error);
  // The raw trace carries the O(1/m) diagonal on top.
  EXPECT_NEAR(s.trace_sq - s.diagonal_sq * 1.0, u.value * (m - 1.0) / m, 1e-10);
}

}  // namespace
}  // namespace invkrr
