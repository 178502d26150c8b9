// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ucalc/json_io.hpp"

namespace ucalc {

struct SuiteConfig {
  std::uint64_t seed = 1;
  // Unset: samples cycle through 2, 3, 5.
  std::optional<int> p;
  int d = 2;  // largest dimension sampled
  int e = 1;
  int N = 12;
  int m = 3;  // verification level
  int samples = 100;
  // Points per sample for suites that probe one object many times.
  int pairs = 100;
  int deg = 3;
  // Order of the scaling suite; 0 cycles through 1, 2, 3.
  int k = 0;

  // ConfigInvalid on a non-prime p or a non-positive field.
  void validate() const;
  Json to_json() const;
};

struct Report {
  std::string suite;
  SuiteConfig config;
  std::int64_t run = 0;
  std::int64_t passed = 0;
  // First failing check: its sample index, inputs, lhs and rhs.
  std::optional<Json> witness;
  double seconds = 0;

  bool ok() const noexcept { return run == passed; }
  Json to_json() const;
};

const std::vector<std::string>& suite_names();

// Deterministic in cfg: sample i draws from the i-th split of Rng(seed).
// UnknownSuite for an unregistered name; ConfigInvalid for a bad config.
Report run_suite(const std::string& name, const SuiteConfig& cfg);

}  // namespace ucalc
