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

#include "spreadopt/generators.hpp"

#include <stdexcept>
#include <string>

namespace spreadopt {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below needs a positive bound");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::optional<GoldSpec> default_gold_spec(int degree) {
  GoldSpec spec;
  spec.degree = degree;
  switch (degree) {
    case 5:
      spec.poly_u = {5, 2, 0};
      spec.poly_v = {5, 4, 3, 2, 0};
      break;
    case 6:
      spec.poly_u = {6, 1, 0};
      spec.poly_v = {6, 5, 2, 1, 0};
      break;
    case 7:
      spec.poly_u = {7, 3, 0};
      spec.poly_v = {7, 3, 2, 1, 0};
      break;
    case 9:
      spec.poly_u = {9, 4, 0};
      spec.poly_v = {9, 6, 4, 3, 0};
      break;
    case 10:
      spec.poly_u = {10, 3, 0};
      spec.poly_v = {10, 8, 3, 2, 0};
      break;
    case 11:
      spec.poly_u = {11, 2, 0};
      spec.poly_v = {11, 8, 5, 2, 0};
      break;
    default:
      return std::nullopt;
  }
  return spec;
}

std::vector<int> lfsr_sequence(int degree, const std::vector<int>& poly,
                               const std::vector<int>& state) {
  if (degree < 2 || degree > 24) throw std::invalid_argument("unsupported register degree");
  std::vector<int> taps;
  bool has_top = false;
  bool has_zero = false;
  for (int e : poly) {
    if (e < 0 || e > degree) throw std::invalid_argument("polynomial exponent out of range");
    if (e == degree) {
      has_top = true;
    } else {
      taps.push_back(e);
      has_zero = has_zero || e == 0;
    }
  }
  if (!has_top || !has_zero) {
    throw std::invalid_argument("polynomial must contain x^d and 1");
  }

  std::vector<int> reg = state.empty() ? std::vector<int>(degree, 1) : state;
  if (static_cast<int>(reg.size()) != degree) {
    throw std::invalid_argument("initial state length must equal the degree");
  }
  for (int& b : reg) {
    if (b != 0 && b != 1) throw std::invalid_argument("initial state must be bits");
  }
  const std::vector<int> initial = reg;

  const int period = (1 << degree) - 1;
  std::vector<int> out;
  out.reserve(period);
  // reg holds a[t..t+d-1] as a ring.
  std::size_t head = 0;
  for (int t = 0; t < period; ++t) {
    out.push_back(reg[head]);
    int fb = 0;
    for (int e : taps) fb ^= reg[(head + e) % degree];
    reg[head] = fb;
    head = (head + 1) % degree;
    const bool back_to_start = [&] {
      for (int i = 0; i < degree; ++i) {
        if (reg[(head + i) % degree] != initial[i]) return false;
      }
      return true;
    }();
    if (back_to_start != (t == period - 1)) {
      throw std::invalid_argument("polynomial is not maximal length (period check failed)");
    }
  }
  return out;
}

CodeFamily gold_family(const GoldSpec& spec) {
  const auto u = lfsr_sequence(spec.degree, spec.poly_u, spec.state_u);
  const auto v = lfsr_sequence(spec.degree, spec.poly_v, spec.state_v);
  const int n = static_cast<int>(u.size());

  std::vector<Chip> chips;
  chips.reserve(static_cast<std::size_t>(n) * (n + 2));
  auto push_bits = [&](auto bit_at) {
    for (int t = 0; t < n; ++t) chips.push_back(static_cast<Chip>(1 - 2 * bit_at(t)));
  };
  push_bits([&](int t) { return u[t]; });
  push_bits([&](int t) { return v[t]; });
  for (int k = 0; k < n; ++k) {
    push_bits([&](int t) { return u[t] ^ v[(t + k) % n]; });
  }
  return CodeFamily(n, n + 2, std::move(chips));
}

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; static_cast<long long>(d) * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

std::vector<int> legendre_sequence(int p, int zero_bit) {
  if (!is_prime(p) || p < 3) throw std::invalid_argument("Legendre sequence needs an odd prime");
  if (zero_bit != 0 && zero_bit != 1) throw std::invalid_argument("zero bit must be 0 or 1");
  std::vector<int> seq(p, 0);
  for (long long x = 1; x < p; ++x) seq[(x * x) % p] = 1;
  seq[0] = zero_bit;
  return seq;
}

CodeFamily weil_family(const WeilSpec& spec) {
  if (spec.p < 5 || !is_prime(spec.p)) {
    throw std::invalid_argument("Weil length must be a prime >= 5, got " +
                                std::to_string(spec.p));
  }
  const int p = spec.p;
  const auto l = legendre_sequence(p, spec.legendre_zero_bit);
  const int m = (p - 1) / 2;
  std::vector<Chip> chips;
  chips.reserve(static_cast<std::size_t>(p) * m);
  for (int k = 1; k <= m; ++k) {
    for (int t = 0; t < p; ++t) {
      chips.push_back(static_cast<Chip>(1 - 2 * (l[t] ^ l[(t + k) % p])));
    }
  }
  return CodeFamily(p, m, std::move(chips));
}

CodeFamily random_family(int n, int m, std::uint64_t seed) {
  if (n < 2 || m < 1) throw std::invalid_argument("random family needs n >= 2 and m >= 1");
  Rng rng(seed);
  std::vector<Chip> chips(static_cast<std::size_t>(n) * m);
  for (auto& c : chips) c = rng.chip();
  return CodeFamily(n, m, std::move(chips));
}

CodeFamily acz_subset(const CodeFamily& family) {
  const auto idx = acz_indices(family);
  if (idx.empty()) throw std::invalid_argument("no code satisfies the ACZ property");
  return family.select(idx);
}

}  // namespace spreadopt
