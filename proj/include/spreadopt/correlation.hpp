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

#include <cstdint>
#include <span>
#include <vector>

#include "spreadopt/core.hpp"

namespace spreadopt {

// Circular cross-correlation: out[k] = sum_s w[s] * v[(s + k) mod n].
std::vector<std::int32_t> cross_correlation(std::span<const Chip> w,
                                            std::span<const Chip> v);

// Sum of squared correlations and its normalizations.
//
// `mos` divides isl by the number of summed terms n*m*(m+1)/2, zero-shift
// autocorrelation peaks included. `sidelobe_mos` removes the m constant peaks
// (each n^2) from the numerator but keeps the same denominator; this is the
// figure usually quoted when comparing against Gold and Weil families.
struct ObjectiveValue {
  std::int64_t isl = 0;
  double mos = 0.0;
  double sidelobe_mos = 0.0;
};

ObjectiveValue make_objective(std::int64_t isl, int n, int m);

// All pairwise correlations (x^i * x^j)_k for i <= j. Kept consistent with a
// family through apply_assignment; the running sums for isl and the
// shift-one objective are maintained alongside.
class CorrelationTable {
 public:
  CorrelationTable() = default;
  CorrelationTable(int n, int m);

  int n() const { return n_; }
  int m() const { return m_; }

  // Requires i <= j.
  std::span<const std::int32_t> row(int i, int j) const {
    return {values_.data() + offset(i, j), static_cast<std::size_t>(n_)};
  }
  std::int32_t at(int i, int j, int k) const { return values_[offset(i, j) + k]; }

  std::int64_t isl_sum() const { return isl_sum_; }
  std::int64_t stage_one_sum() const { return stage_one_sum_; }

  friend bool operator==(const CorrelationTable&, const CorrelationTable&) = default;

 private:
  friend CorrelationTable build_table(const CodeFamily&, int);
  friend class TableUpdater;

  std::size_t pair_index(int i, int j) const {
    return static_cast<std::size_t>(i) * m_ -
           static_cast<std::size_t>(i) * (i - 1) / 2 + (j - i);
  }
  std::size_t offset(int i, int j) const { return pair_index(i, j) * n_; }
  std::int32_t* mutable_row(int i, int j) { return values_.data() + offset(i, j); }

  int n_ = 0;
  int m_ = 0;
  std::vector<std::int32_t> values_;
  std::int64_t isl_sum_ = 0;
  std::int64_t stage_one_sum_ = 0;
};

// threads > 1 splits the pair loop; the result is identical for any count.
CorrelationTable build_table(const CodeFamily& family, int threads = 1);

ObjectiveValue isl(const CorrelationTable& table);

// Sum over codes of the squared shift-one autocorrelation.
std::int64_t stage_one_objective(const CorrelationTable& table);

struct Assignment {
  BitIndex bit;
  Chip value = 1;
};

// Writes the new chip values into `family` and updates `table` in
// O(changed bits * n * m). Throws std::out_of_range on a bad index, before
// anything is modified.
ObjectiveValue apply_assignment(CodeFamily& family, CorrelationTable& table,
                                std::span<const Assignment> assignment);

// Checks sum_k (w*v)_k^2 == (1/n) sum_j |W_j|^2 |V_j|^2 with a floating-point
// DFT, to relative tolerance 1e-9. Verification helper.
bool parseval_check(std::span<const Chip> w, std::span<const Chip> v);

}  // namespace spreadopt
