// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

// Experiment runner behind the command-line tool.
//
// A config is a flat text file of `key = value` lines; '#' starts a comment.
// Keys are checked against a fixed schema and unknown keys are rejected.
// One key of the form `sweep.<axis> = v1, v2, ...` turns a run into a sweep
// with one output row (or row group) per grid value.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lgc/error.hpp"

namespace lgc {

class ExperimentConfig {
 public:
  // Validates the key and the value's type; kConfig on failure.
  void set(const std::string& key, const std::string& value);
  const std::string* find(const std::string& key) const;
  bool has(const std::string& key) const { return find(key) != nullptr; }
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  // Directory against which relative file paths are resolved.
  std::string base_dir;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

ExperimentConfig parse_config(std::istream& in);
// kIo "config file not found" if the file cannot be opened.
ExperimentConfig load_config(const std::string& path);

struct RunOverrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<int> threads;
};

struct RunReport {
  int exit_code = 0;
  // Single-line reason on failure, "<class>: <detail>".
  std::string message;
  std::vector<std::string> outputs;
  std::int64_t rows = 0;
};

// Exit codes: 0 success, 2 configuration or I/O problem, 3 numeric
// precondition failure, 1 anything else.
int exit_code_for(ErrorCode code);

// Never throws. Without an `out` path the table goes to `console` as CSV
// and no manifest is written.
RunReport run_experiment(const ExperimentConfig& config,
                         const RunOverrides& overrides, std::ostream& console);

// Shortest decimal text that parses back to the same double; "inf", "-inf"
// and "nan" for non-finite values.
std::string format_double(double value);

}  // namespace lgc
