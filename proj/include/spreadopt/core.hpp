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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spreadopt {

// A chip is always -1 or +1.
using Chip = std::int8_t;

// Family of m binary (+/-1) codes of length n. Code i is "column" i; its chips
// are stored contiguously.
class CodeFamily {
 public:
  CodeFamily() = default;
  // All chips +1.
  CodeFamily(int n, int m);
  // chips.size() must be n*m, code-major (chips[i*n + s] is chip s of code i).
  CodeFamily(int n, int m, std::vector<Chip> chips);

  static CodeFamily FromCodes(const std::vector<std::vector<Chip>>& codes);

  int n() const { return n_; }
  int m() const { return m_; }

  Chip at(int code, int chip) const { return chips_[index(code, chip)]; }
  void set(int code, int chip, Chip value);

  std::span<const Chip> code(int i) const {
    return {chips_.data() + static_cast<std::size_t>(i) * n_,
            static_cast<std::size_t>(n_)};
  }
  const std::vector<Chip>& chips() const { return chips_; }

  // New family holding the selected codes, in the given order.
  CodeFamily select(const std::vector<int>& codes) const;

  friend bool operator==(const CodeFamily&, const CodeFamily&) = default;

 private:
  std::size_t index(int code, int chip) const {
    return static_cast<std::size_t>(code) * n_ + chip;
  }

  int n_ = 0;
  int m_ = 0;
  std::vector<Chip> chips_;
};

// Largest admissible |shift-one autocorrelation|: 0 for even n, 1 for odd n.
inline int acz_bound(int n) { return n % 2 == 0 ? 0 : 1; }

// Circular shift-one autocorrelation sum_s w_s w_{s+1}.
int shift_one_autocorrelation(std::span<const Chip> code);

bool is_acz(std::span<const Chip> code);

// Number of codes of the family that satisfy the ACZ property.
int acz_count(const CodeFamily& family);
bool all_acz(const CodeFamily& family);

// Indices of the ACZ codes, in family order.
std::vector<int> acz_indices(const CodeFamily& family);

struct BitIndex {
  int code = 0;
  int chip = 0;
  friend bool operator==(const BitIndex&, const BitIndex&) = default;
  friend auto operator<=>(const BitIndex&, const BitIndex&) = default;
};

// Ordered set of distinct (code, chip) indices and its active columns.
class IndexSet {
 public:
  IndexSet() = default;
  // Throws std::invalid_argument on duplicates or out-of-range entries.
  IndexSet(std::vector<BitIndex> entries, int n, int m);

  const std::vector<BitIndex>& entries() const { return entries_; }
  // Sorted ascending.
  const std::vector<int>& active_columns() const { return active_columns_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<BitIndex> entries_;
  std::vector<int> active_columns_;
};

// Raised by load_family; line and column are 1-based.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Text format: "n m\n" followed by m lines of n characters, '0' for +1 and
// '1' for -1.
std::string format_family(const CodeFamily& family);
CodeFamily parse_family(const std::string& text);

void save_family(const CodeFamily& family, const std::filesystem::path& path);
CodeFamily load_family(const std::filesystem::path& path);

}  // namespace spreadopt
