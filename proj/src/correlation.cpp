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

#include "spreadopt/correlation.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace spreadopt {

std::vector<std::int32_t> cross_correlation(std::span<const Chip> w,
                                            std::span<const Chip> v) {
  if (w.size() != v.size()) throw std::invalid_argument("length mismatch");
  const std::size_t n = w.size();
  std::vector<std::int32_t> out(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::int32_t sum = 0;
    for (std::size_t s = 0; s < n; ++s) {
      std::size_t l = s + k;
      if (l >= n) l -= n;
      sum += w[s] * v[l];
    }
    out[k] = sum;
  }
  return out;
}

ObjectiveValue make_objective(std::int64_t isl, int n, int m) {
  const double terms = static_cast<double>(n) * m * (m + 1) / 2.0;
  const std::int64_t peaks = static_cast<std::int64_t>(m) * n * n;
  return {isl, static_cast<double>(isl) / terms,
          static_cast<double>(isl - peaks) / terms};
}

CorrelationTable::CorrelationTable(int n, int m)
    : n_(n), m_(m),
      values_(static_cast<std::size_t>(m) * (m + 1) / 2 * n, 0) {}

CorrelationTable build_table(const CodeFamily& family, int threads) {
  const int n = family.n();
  const int m = family.m();
  CorrelationTable table(n, m);

  auto fill_rows = [&](int first_i, int stride) {
    for (int i = first_i; i < m; i += stride) {
      for (int j = i; j < m; ++j) {
        auto corr = cross_correlation(family.code(i), family.code(j));
        std::copy(corr.begin(), corr.end(), table.mutable_row(i, j));
      }
    }
  };
  if (threads > 1) {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(fill_rows, t, threads);
    for (auto& th : pool) th.join();
  } else {
    fill_rows(0, 1);
  }

  // Sums in a fixed order so the totals never depend on the thread count.
  std::int64_t total = 0;
  for (std::int32_t v : table.values_) total += static_cast<std::int64_t>(v) * v;
  std::int64_t j1 = 0;
  for (int i = 0; i < m; ++i) {
    const std::int64_t v = table.at(i, i, 1);
    j1 += v * v;
  }
  table.isl_sum_ = total;
  table.stage_one_sum_ = j1;
  return table;
}

ObjectiveValue isl(const CorrelationTable& table) {
  return make_objective(table.isl_sum(), table.n(), table.m());
}

std::int64_t stage_one_objective(const CorrelationTable& table) {
  return table.stage_one_sum();
}

// Flips one chip at a time. Flipping x^c_r changes the correlations of every
// pair involving code c; each of those rows moves by -2 * old * partner chip.
class TableUpdater {
 public:
  TableUpdater(CodeFamily& family, CorrelationTable& table)
      : family_(family), table_(table), n_(family.n()), m_(family.m()) {}

  void flip(int c, int r) {
    const int old = family_.at(c, r);
    const int d = -2 * old;
    for (int j = 0; j < m_; ++j) {
      if (j == c) {
        flip_auto(c, r, d);
      } else if (c < j) {
        std::int32_t* row = table_.mutable_row(c, j);
        auto partner = family_.code(j);
        for (int k = 0; k < n_; ++k) {
          int l = r + k;
          if (l >= n_) l -= n_;
          update(row[k], d * partner[l]);
        }
      } else {
        std::int32_t* row = table_.mutable_row(j, c);
        auto partner = family_.code(j);
        for (int k = 0; k < n_; ++k) {
          int s = r - k;
          if (s < 0) s += n_;
          update(row[k], d * partner[s]);
        }
      }
    }
    family_.set(c, r, static_cast<Chip>(-old));
  }

 private:
  void flip_auto(int c, int r, int d) {
    std::int32_t* row = table_.mutable_row(c, c);
    auto code = family_.code(c);
    for (int k = 1; k < n_; ++k) {
      int fwd = r + k;
      if (fwd >= n_) fwd -= n_;
      int back = r - k;
      if (back < 0) back += n_;
      const std::int32_t before = row[k];
      update(row[k], d * (code[fwd] + code[back]));
      if (k == 1) {
        const std::int64_t after = row[k];
        table_.stage_one_sum_ += after * after - static_cast<std::int64_t>(before) * before;
      }
    }
  }

  void update(std::int32_t& value, int delta) {
    const std::int64_t before = value;
    value += delta;
    table_.isl_sum_ += static_cast<std::int64_t>(value) * value - before * before;
  }

  CodeFamily& family_;
  CorrelationTable& table_;
  int n_;
  int m_;
};

ObjectiveValue apply_assignment(CodeFamily& family, CorrelationTable& table,
                                std::span<const Assignment> assignment) {
  if (table.n() != family.n() || table.m() != family.m()) {
    throw std::invalid_argument("table does not match family dimensions");
  }
  for (const auto& a : assignment) {
    if (a.bit.code < 0 || a.bit.code >= family.m() || a.bit.chip < 0 ||
        a.bit.chip >= family.n()) {
      throw std::out_of_range("assignment index out of range");
    }
    if (a.value != 1 && a.value != -1) {
      throw std::invalid_argument("assignment value must be +1 or -1");
    }
  }
  TableUpdater updater(family, table);
  for (const auto& a : assignment) {
    if (family.at(a.bit.code, a.bit.chip) != a.value) {
      updater.flip(a.bit.code, a.bit.chip);
    }
  }
  return isl(table);
}

bool parseval_check(std::span<const Chip> w, std::span<const Chip> v) {
  if (w.size() != v.size() || w.empty()) return false;
  const std::size_t n = w.size();
  double lhs = 0.0;
  for (std::int32_t c : cross_correlation(w, v)) lhs += static_cast<double>(c) * c;

  double rhs = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    std::complex<double> wj = 0.0;
    std::complex<double> vj = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((j * s) % n) /
                           static_cast<double>(n);
      const std::complex<double> e(std::cos(angle), std::sin(angle));
      wj += static_cast<double>(w[s]) * e;
      vj += static_cast<double>(v[s]) * e;
    }
    rhs += std::norm(wj) * std::norm(vj);
  }
  rhs /= static_cast<double>(n);
  const double scale = std::max(std::abs(lhs), 1.0);
  return std::abs(lhs - rhs) <= 1e-9 * scale;
}

}  // namespace spreadopt
