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

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace invkrr {
namespace {

using testing::columns;
using testing::shipped_finite_groups;
using testing::vec;

TEST(SampleSphereTest, UnitNormsAndErrors) {
  const Points x = sample_sphere(SphereDomain{5, 1}, 500);
  EXPECT_LE((x.colwise().norm().array() - 1.0).abs().maxCoeff(), 1e-12);
  EXPECT_THROW(sample_sphere(SphereDomain{5, 1}, 0), ValidationError);
}

TEST(SampleSphereTest, SecondMomentIsIdentityOverD) {
  const int d = 4;
  const Eigen::Index n = 100000;
  const Points x = sample_sphere(SphereDomain{d, 77}, n);
  const Matrix second = x * x.transpose() / static_cast<double>(n);
  const double tol = 5.0 / std::sqrt(static_cast<double>(n));
  EXPECT_LE((second - Matrix::Identity(d, d) / d).cwiseAbs().maxCoeff(), tol);
}

TEST(SampleSphereTest, CoordinatePermutationLeavesStatisticsAlone) {
  const Points x = sample_sphere(SphereDomain{3, 9}, 2000);
  Points permuted = x;
  permuted.row(0) = x.row(2);
  permuted.row(2) = x.row(0);
  EXPECT_NEAR(permuted.colwise().norm().mean(), x.colwise().norm().mean(), 1e-14);
  EXPECT_NEAR(permuted.squaredNorm(), x.squaredNorm(), 1e-9);
}

TEST(SampleSphereTest, EqualSeedsBitIdentical) {
  EXPECT_EQ(sample_sphere(SphereDomain{6, 1234}, 100), sample_sphere(SphereDomain{6, 1234}, 100));
  EXPECT_NE(sample_sphere(SphereDomain{6, 1234}, 100), sample_sphere(SphereDomain{6, 1235}, 100));
}

TEST(OrbitClosureTest, Examples) {
  const GroupRep s2 = make_symmetric_group(2);
  const DiscreteDomain pair = orbit_closure(columns({vec({1, 0})}), s2);
  EXPECT_EQ(pair.size(), 2);
  EXPECT_TRUE(pair.is_closed_under(s2));
  const DiscreteDomain fixed = orbit_closure(columns({vec({1, 1}) / std::sqrt(2.0)}), s2);
  EXPECT_EQ(fixed.size(), 1);
  EXPECT_DOUBLE_EQ(fixed.weight(), 1.0);
  EXPECT_THROW(orbit_closure(columns({vec({1, 0})}), make_rotation_quadrature(4)),
               ValidationError);
}

TEST(OrbitClosureTest, ClosedForEveryShippedGroup) {
  for (const auto& rep : shipped_finite_groups()) {
    const int d = static_cast<int>(rep.dim());
    const DiscreteDomain dom = orbit_closure(sample_sphere(SphereDomain{d, 3}, 3), rep);
    EXPECT_TRUE(dom.is_closed_under(rep)) << rep.id();
    EXPECT_LE(dom.size(), 3 * static_cast<Eigen::Index>(rep.size()));
  }
}

TEST(OrbitClosureTest, NotClosedDetected) {
  const DiscreteDomain single(columns({vec({1, 0})}));
  EXPECT_FALSE(single.is_closed_under(make_symmetric_group(2)));
}

TEST(InvariantThetaTest, Examples) {
  const LinearTarget s3 = make_invariant_theta(make_symmetric_group(3), vec({1, 2, 3}));
  EXPECT_LE((s3.theta - vec({2, 2, 2})).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_TRUE(s3.is_invariant());
  const LinearTarget triv = make_invariant_theta(make_trivial_group(3), vec({1, -2, 5}));
  EXPECT_EQ(triv.theta, vec({1, -2, 5}));
  const LinearTarget sign = make_invariant_theta(make_sign_group(3), vec({4, 1, -7}));
  EXPECT_LE(sign.theta.cwiseAbs().maxCoeff(), 0.0);
}

TEST(InvariantThetaTest, CertificateAndIdempotence) {
  const Vector raw = vec({0.3, -1.2, 2.5, 0.9});
  for (const auto& rep : {make_symmetric_group(4), make_cyclic_group(4), make_sign_group(4),
                          make_trivial_group(4)}) {
    const LinearTarget t = make_invariant_theta(rep, raw);
    EXPECT_LE(t.certificate, 1e-10) << rep.id();
    EXPECT_LE((make_invariant_theta(rep, t.theta).theta - t.theta).cwiseAbs().maxCoeff(), 1e-12);
  }
  // A non-invariant theta carries a large certificate.
  EXPECT_GT(make_linear_target(make_symmetric_group(4), raw).certificate, 0.1);
}

TEST(DrawLabelsTest, NoiselessLabelsAreExact) {
  const Points x = sample_sphere(SphereDomain{3, 4}, 50);
  const LinearTarget t = make_linear_target(make_trivial_group(3), vec({1, 2, 3}));
  EXPECT_EQ(draw_labels(t, NoiseModel{0.0}, x, 99), Vector(x.transpose() * t.theta));
  EXPECT_THROW(draw_labels(t, NoiseModel{-1.0}, x, 99), ValidationError);
}

TEST(DrawLabelsTest, NoiseMomentsAndDeterminism) {
  const Eigen::Index n = 100000;
  const Points x = sample_sphere(SphereDomain{3, 5}, n);
  const LinearTarget zero = make_linear_target(make_trivial_group(3), Vector::Zero(3));
  const Vector y = draw_labels(zero, NoiseModel{1.0}, x, 6);
  EXPECT_LE(std::abs(y.mean()), 5.0 / std::sqrt(static_cast<double>(n)));

  const double sigma = 0.7;
  const LinearTarget t = make_linear_target(make_trivial_group(3), vec({1, -1, 2}));
  const Vector y2 = draw_labels(t, NoiseModel{sigma}, x, 7);
  const Eigen::ArrayXd resid = (y2 - x.transpose() * t.theta).array();
  const double var = (resid - resid.mean()).square().sum() / static_cast<double>(n - 1);
  EXPECT_NEAR(var, sigma * sigma, 0.05 * sigma * sigma);
  EXPECT_EQ(y2, draw_labels(t, NoiseModel{sigma}, x, 7));
}

}  // namespace
}  // namespace invkrr
