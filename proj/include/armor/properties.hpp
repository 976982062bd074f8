// Copyright 2026 The ARMOR-Tabular Authors.
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

#include <cstdint>
#include <string>
#include <vector>

namespace armor {

struct PropertyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct PropertyOptions {
  std::size_t instances = 100;
  std::uint64_t seed = 0;
};

/// Randomised checks of the exact-solver invariants. Every check is
/// deterministic given `options.seed`.
std::vector<PropertyCheck> run_property_suite(const PropertyOptions& options = {});

}  // namespace armor
