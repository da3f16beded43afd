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

#include "spreadopt/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spreadopt {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::invalid_argument("bad integer for " + key + ": '" + value + "'");
  }
  return out;
}

double parse_seconds(const std::string& key, const std::string& value) {
  if (value == "none" || value == "inf") return std::numeric_limits<double>::infinity();
  // strtod honours the C locale only, which is what the process runs under.
  std::istringstream in(value);
  in.imbue(std::locale::classic());
  double out = 0;
  in >> out;
  if (!in || !in.eof() || out < 0) {
    throw std::invalid_argument("bad duration for " + key + ": '" + value + "'");
  }
  return out;
}

}  // namespace

const std::vector<std::string>& RunConfig::Keys() {
  static const std::vector<std::string> keys = {
      "n",    "m",        "block_size", "max_active_cols", "max_per_col",
      "init", "seed",     "max_iters",  "time_limit",      "patience",
      "solver", "out",    "checkpoint_every", "threads",   "enum_cap"};
  return keys;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "n") {
    n = parse_integer<int>(key, value);
  } else if (key == "m") {
    m = parse_integer<int>(key, value);
  } else if (key == "block_size") {
    bcd.strategy.block_size = parse_integer<int>(key, value);
  } else if (key == "max_active_cols") {
    bcd.strategy.max_active_columns = parse_integer<int>(key, value);
  } else if (key == "max_per_col") {
    bcd.strategy.max_per_column = parse_integer<int>(key, value);
  } else if (key == "init") {
    init = Initializer::Parse(value);
  } else if (key == "seed") {
    bcd.seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "max_iters") {
    bcd.max_iterations = parse_integer<std::int64_t>(key, value);
  } else if (key == "time_limit") {
    bcd.time_limit_s = parse_seconds(key, value);
  } else if (key == "patience") {
    bcd.patience = parse_integer<std::int64_t>(key, value);
  } else if (key == "solver") {
    if (value == "enum") {
      bcd.solver = SolverChoice::kEnumeration;
    } else if (value == "bnb") {
      bcd.solver = SolverChoice::kBranchAndBound;
    } else if (value == "auto") {
      bcd.solver = SolverChoice::kAuto;
    } else {
      throw std::invalid_argument("solver must be enum, bnb or auto, got '" + value + "'");
    }
  } else if (key == "out") {
    bcd.output_dir = value;
  } else if (key == "checkpoint_every") {
    bcd.checkpoint_every = parse_integer<std::int64_t>(key, value);
  } else if (key == "threads") {
    bcd.solver_options.threads = parse_integer<int>(key, value);
  } else if (key == "enum_cap") {
    bcd.solver_options.enumeration_cap = parse_integer<int>(key, value);
  } else {
    throw std::invalid_argument("unknown configuration key '" + key + "'");
  }
}

void RunConfig::validate() const {
  if (!n || !m) throw std::invalid_argument("n and m are required");
  if (*n < 2 || *m < 1) throw std::invalid_argument("need n >= 2 and m >= 1");
  bcd.validate(*n, *m);
}

RunConfig RunConfig::Parse(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      config.set(trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

std::string RunConfig::to_text() const {
  std::ostringstream out;
  if (n) out << "n = " << *n << '\n';
  if (m) out << "m = " << *m << '\n';
  out << "block_size = " << bcd.strategy.block_size << '\n'
      << "max_active_cols = " << bcd.strategy.max_active_columns << '\n'
      << "max_per_col = " << bcd.strategy.max_per_column << '\n'
      << "init = " << init.to_string() << '\n'
      << "seed = " << bcd.seed << '\n'
      << "max_iters = " << bcd.max_iterations << '\n'
      << "time_limit = "
      << (std::isfinite(bcd.time_limit_s) ? format_double(bcd.time_limit_s) : "none") << '\n'
      << "patience = " << bcd.patience << '\n'
      << "solver = "
      << (bcd.solver == SolverChoice::kEnumeration      ? "enum"
          : bcd.solver == SolverChoice::kBranchAndBound ? "bnb"
                                                        : "auto")
      << '\n'
      << "out = " << bcd.output_dir.string() << '\n'
      << "checkpoint_every = " << bcd.checkpoint_every << '\n'
      << "threads = " << bcd.solver_options.threads << '\n'
      << "enum_cap = " << bcd.solver_options.enumeration_cap << '\n';
  return out.str();
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return RunConfig::Parse(buf.str());
}

}  // namespace spreadopt
