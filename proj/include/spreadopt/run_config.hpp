// Copyright 2026 The spreadopt Authors
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

#include <optional>
#include <string>
#include <vector>

#include "spreadopt/bcd.hpp"

namespace spreadopt {

// Everything needed to launch a run. Serialized as flat "key = value" lines;
// blank lines and lines starting with '#' are ignored.
//
// Keys: n, m, block_size, max_active_cols, max_per_col, init, seed,
// max_iters, time_limit (seconds or "none"), patience (0 = default),
// solver (enum | bnb | auto), out, checkpoint_every, threads, enum_cap.
struct RunConfig {
  std::optional<int> n;
  std::optional<int> m;
  Initializer init;
  BcdConfig bcd;

  // Throws std::invalid_argument for unknown keys and bad values.
  void set(const std::string& key, const std::string& value);
  // Throws when n or m is missing or the configuration is inconsistent.
  void validate() const;

  static RunConfig Parse(const std::string& text);
  std::string to_text() const;

  static const std::vector<std::string>& Keys();
};

RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace spreadopt
