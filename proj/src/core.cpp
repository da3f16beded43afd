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

#include "spreadopt/core.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace spreadopt {

CodeFamily::CodeFamily(int n, int m)
    : CodeFamily(n, m,
                 std::vector<Chip>(static_cast<std::size_t>(n > 0 ? n : 0) *
                                       (m > 0 ? m : 0),
                                   Chip{1})) {}

CodeFamily::CodeFamily(int n, int m, std::vector<Chip> chips)
    : n_(n), m_(m), chips_(std::move(chips)) {
  if (n < 2) throw std::invalid_argument("code length must be at least 2");
  if (m < 1) throw std::invalid_argument("family needs at least one code");
  if (chips_.size() != static_cast<std::size_t>(n) * m) {
    throw std::invalid_argument("chip count does not match n*m");
  }
  for (Chip c : chips_) {
    if (c != 1 && c != -1) throw std::invalid_argument("chip must be +1 or -1");
  }
}

CodeFamily CodeFamily::FromCodes(const std::vector<std::vector<Chip>>& codes) {
  if (codes.empty()) throw std::invalid_argument("family needs at least one code");
  const std::size_t n = codes.front().size();
  std::vector<Chip> chips;
  chips.reserve(n * codes.size());
  for (const auto& c : codes) {
    if (c.size() != n) throw std::invalid_argument("codes differ in length");
    chips.insert(chips.end(), c.begin(), c.end());
  }
  return CodeFamily(static_cast<int>(n), static_cast<int>(codes.size()),
                    std::move(chips));
}

void CodeFamily::set(int code, int chip, Chip value) {
  if (value != 1 && value != -1) throw std::invalid_argument("chip must be +1 or -1");
  if (code < 0 || code >= m_ || chip < 0 || chip >= n_) {
    throw std::out_of_range("chip index out of range");
  }
  chips_[index(code, chip)] = value;
}

CodeFamily CodeFamily::select(const std::vector<int>& codes) const {
  std::vector<Chip> chips;
  chips.reserve(codes.size() * n_);
  for (int i : codes) {
    if (i < 0 || i >= m_) throw std::out_of_range("code index out of range");
    auto c = code(i);
    chips.insert(chips.end(), c.begin(), c.end());
  }
  return CodeFamily(n_, static_cast<int>(codes.size()), std::move(chips));
}

int shift_one_autocorrelation(std::span<const Chip> code) {
  const std::size_t n = code.size();
  int sum = 0;
  for (std::size_t s = 0; s < n; ++s) sum += code[s] * code[(s + 1) % n];
  return sum;
}

bool is_acz(std::span<const Chip> code) {
  return std::abs(shift_one_autocorrelation(code)) <=
         acz_bound(static_cast<int>(code.size()));
}

std::vector<int> acz_indices(const CodeFamily& family) {
  std::vector<int> out;
  for (int i = 0; i < family.m(); ++i) {
    if (is_acz(family.code(i))) out.push_back(i);
  }
  return out;
}

int acz_count(const CodeFamily& family) {
  return static_cast<int>(acz_indices(family).size());
}

bool all_acz(const CodeFamily& family) { return acz_count(family) == family.m(); }

IndexSet::IndexSet(std::vector<BitIndex> entries, int n, int m)
    : entries_(std::move(entries)) {
  std::set<BitIndex> seen;
  std::set<int> cols;
  for (const auto& e : entries_) {
    if (e.code < 0 || e.code >= m || e.chip < 0 || e.chip >= n) {
      throw std::invalid_argument("index set entry out of range");
    }
    if (!seen.insert(e).second) {
      throw std::invalid_argument("duplicate index set entry");
    }
    cols.insert(e.code);
  }
  active_columns_.assign(cols.begin(), cols.end());
}

FormatError::FormatError(const std::string& what, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + " col " +
                         std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

std::string format_family(const CodeFamily& family) {
  std::string out = std::to_string(family.n()) + " " +
                    std::to_string(family.m()) + "\n";
  out.reserve(out.size() + static_cast<std::size_t>(family.m()) * (family.n() + 1));
  for (int i = 0; i < family.m(); ++i) {
    for (Chip c : family.code(i)) out.push_back(c == 1 ? '0' : '1');
    out.push_back('\n');
  }
  return out;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

bool parse_positive(std::string_view token, int& value) {
  if (token.empty()) return false;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  return ec == std::errc() && ptr == token.data() + token.size();
}

}  // namespace

CodeFamily parse_family(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw FormatError("missing header", 1, 1);

  const std::string_view header = lines[0];
  const std::size_t sp = header.find(' ');
  int n = 0;
  int m = 0;
  if (sp == std::string_view::npos || !parse_positive(header.substr(0, sp), n) ||
      !parse_positive(header.substr(sp + 1), m)) {
    throw FormatError("malformed header, expected \"n m\"", 1, 1);
  }
  if (n < 2 || m < 1) throw FormatError("header requires n >= 2 and m >= 1", 1, 1);

  if (lines.size() < static_cast<std::size_t>(m) + 1) {
    throw FormatError("expected " + std::to_string(m) + " code lines",
                      static_cast<int>(lines.size()) + 1, 1);
  }
  for (std::size_t l = static_cast<std::size_t>(m) + 1; l < lines.size(); ++l) {
    if (!lines[l].empty()) {
      throw FormatError("unexpected content after last code",
                        static_cast<int>(l) + 1, 1);
    }
  }

  std::vector<Chip> chips;
  chips.reserve(static_cast<std::size_t>(n) * m);
  for (int i = 0; i < m; ++i) {
    const std::string_view line = lines[static_cast<std::size_t>(i) + 1];
    const int line_no = i + 2;
    for (std::size_t c = 0; c < line.size() && c < static_cast<std::size_t>(n); ++c) {
      if (line[c] == '0') {
        chips.push_back(1);
      } else if (line[c] == '1') {
        chips.push_back(-1);
      } else {
        throw FormatError("illegal character", line_no, static_cast<int>(c) + 1);
      }
    }
    if (line.size() != static_cast<std::size_t>(n)) {
      throw FormatError("expected " + std::to_string(n) + " chips, got " +
                            std::to_string(line.size()),
                        line_no,
                        static_cast<int>(std::min<std::size_t>(line.size(), n)) + 1);
    }
  }
  return CodeFamily(n, m, std::move(chips));
}

void save_family(const CodeFamily& family, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << format_family(family);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

CodeFamily load_family(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_family(buf.str());
}

}  // namespace spreadopt
