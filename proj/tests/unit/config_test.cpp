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

#include "invkrr/config.hpp"

#include <gtest/gtest.h>

namespace invkrr {
namespace {

constexpr const char* kConfig = R"(# bound verification
group = sym:5
kernel = linear
d = 5
n = 100
rho = 1
sigma = 1
theta = t:1
trials = 20   # short run
seed = 42
)";

TEST(ConfigTest, ParsesKeyValues) {
  const ExperimentConfig cfg = build_config(parse_key_values(kConfig));
  EXPECT_EQ(cfg.group, "sym:5");
  EXPECT_EQ(cfg.kernel, "linear");
  EXPECT_EQ(cfg.d, 5);
  EXPECT_EQ(cfg.n, 100);
  EXPECT_EQ(cfg.trials, 20);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.n_test, 2000);
  EXPECT_EQ(cfg.mode, ExperimentMode::kMonteCarlo);
}

TEST(ConfigTest, MissingRhoNamed) {
  ConfigMap values = parse_key_values(kConfig);
  values.erase("rho");
  try {
    build_config(values);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("'rho'"), std::string::npos);
  }
}

TEST(ConfigTest, RejectsMalformedInput) {
  EXPECT_THROW(parse_key_values("group sym:3\n"), ValidationError);
  EXPECT_THROW(parse_key_values("colour = red\n"), ValidationError);
  ConfigMap values = parse_key_values(kConfig);
  values["rho"] = "-1";
  EXPECT_THROW(build_config(values), ValidationError);
  values["rho"] = "1";
  values["trials"] = "0";
  EXPECT_THROW(build_config(values), ValidationError);
  values["trials"] = "5";
  values["theta"] = "1,2";
  EXPECT_THROW(build_config(values), ValidationError);
  values["theta"] = "t:1";
  values["mode"] = "exact";
  EXPECT_THROW(build_config(values), ValidationError);
  values["seed_points"] = "1,0,0,0,0";
  EXPECT_NO_THROW(build_config(values));
}

TEST(ConfigTest, ThetaAndPointSpecs) {
  const ThetaSpec t = parse_theta("t:2.5", 3);
  ASSERT_TRUE(t.t.has_value());
  EXPECT_EQ(*t.t, 2.5);
  EXPECT_EQ(t.raw, Vector::Constant(3, 2.5));
  const ThetaSpec raw = parse_theta("1,2,3", 3);
  EXPECT_FALSE(raw.t.has_value());
  EXPECT_EQ(raw.raw(2), 3.0);
  const Points p = parse_points("1,0; 0,1", 2);
  EXPECT_EQ(p.cols(), 2);
  EXPECT_EQ(p(1, 1), 1.0);
  EXPECT_THROW(parse_points("1,0;1", 2), ValidationError);
}

}  // namespace
}  // namespace invkrr
