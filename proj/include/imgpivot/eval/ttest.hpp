// Copyright 2026 The imgpivot Authors
// SPDX-License-Identifier: Apache-2.0
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

#include <cstddef>
#include <span>

#include <json.hpp>

namespace imgpivot::eval {

struct TTestResult {
  double t = 0.0;
  double p_value = 1.0;
  bool significant = false;
  std::size_t df = 0;
  /// All differences identical and nonzero: t is +-infinity and p is 0.
  bool zero_variance = false;

  nlohmann::json to_json() const;
};

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation
/// (modified Lentz), accurate to well below 1e-10 for moderate a and b.
double incomplete_beta(double a, double b, double x);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

/// Paired two-sided t-test on a - b. Throws LengthMismatch for unequal sizes
/// and InvalidArgument for fewer than two pairs.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

}  // namespace imgpivot::eval
