// Copyright 2026 The Flora Authors.
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

#include "flora/config.h"

#include <gtest/gtest.h>

#include "support/scratch_dir.h"

namespace flora {
namespace {

TEST(ConfigTest, Defaults) {
  Config c;
  EXPECT_EQ(c.theta_e, 0.1);
  EXPECT_EQ(c.theta_s, 0.7);
  EXPECT_EQ(c.alpha, 3.0);
  EXPECT_EQ(c.epsilon, 0.01);
  EXPECT_EQ(c.max_iters, 10);
  EXPECT_NO_THROW(c.Validate());
}

TEST(ConfigTest, ValidateRejectsOutOfRange) {
  auto bad = [](auto mutate) {
    Config c;
    mutate(c);
    EXPECT_THROW(c.Validate(), ConfigError);
  };
  bad([](Config& c) { c.theta_e = 1.5; });
  bad([](Config& c) { c.theta_s = -0.1; });
  bad([](Config& c) { c.theta_r = 2; });
  bad([](Config& c) { c.alpha = 0.5; });
  bad([](Config& c) { c.max_iters = 0; });
  bad([](Config& c) { c.L_max = 0; });
  bad([](Config& c) { c.fun_budget = -1; });
}

TEST(ConfigTest, SetValue) {
  Config c;
  SetConfigValue(c, "alpha", "1");
  SetConfigValue(c, "max_iters", "3");
  SetConfigValue(c, "prune", "false");
  SetConfigValue(c, "rng_seed", "18446744073709551615");
  EXPECT_EQ(c.alpha, 1.0);
  EXPECT_EQ(c.max_iters, 3);
  EXPECT_FALSE(c.prune);
  EXPECT_EQ(c.rng_seed, 18446744073709551615ull);
  EXPECT_THROW(SetConfigValue(c, "nope", "1"), ConfigError);
  EXPECT_THROW(SetConfigValue(c, "alpha", "three"), ConfigError);
  EXPECT_THROW(SetConfigValue(c, "max_iters", "2.5"), ConfigError);
  EXPECT_THROW(SetConfigValue(c, "prune", "maybe"), ConfigError);
}

TEST(ConfigTest, TextWithComments) {
  Config c;
  ApplyConfigText(c, "# tuned\n\ntheta_e = 0.3\n  alpha=2 # inline\n");
  EXPECT_EQ(c.theta_e, 0.3);
  EXPECT_EQ(c.alpha, 2.0);
  EXPECT_THROW(ApplyConfigText(c, "theta_e 0.3\n"), ConfigError);
}

TEST(ConfigTest, EntriesRoundTrip) {
  Config c;
  c.theta_e = 0.123456789012345;
  c.alpha = 1.0 / 3.0;
  c.rng_seed = 99;
  c.prune = false;
  testing::ScratchDir dir;
  Config back;
  ApplyConfigFile(back, dir.Write("flora.conf", FormatConfig(c)));
  EXPECT_EQ(ConfigEntries(back), ConfigEntries(c));
  EXPECT_EQ(back.alpha, c.alpha);
  EXPECT_EQ(back.theta_e, c.theta_e);
  EXPECT_THROW(ApplyConfigFile(back, dir.File("missing")), ConfigError);
}

}  // namespace
}  // namespace flora
