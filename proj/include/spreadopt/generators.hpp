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
#include <optional>
#include <random>
#include <vector>

#include "spreadopt/core.hpp"

namespace spreadopt {

// Deterministic generator used everywhere randomness is needed: mt19937_64
// plus rejection sampling for bounded draws, so streams do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  Chip chip() { return (engine_() >> 63) != 0 ? Chip{-1} : Chip{1}; }

 private:
  std::mt19937_64 engine_;
};

// Preferred pair of maximal-length shift registers. A polynomial is given by
// its exponents, e.g. x^7 + x^3 + 1 is {7, 3, 0}. The register satisfies
// a[t + d] = xor of a[t + e] over every exponent e < d of the polynomial.
struct GoldSpec {
  int degree = 7;
  std::vector<int> poly_u{7, 3, 0};
  std::vector<int> poly_v{7, 3, 2, 1, 0};
  // Initial register contents a[0..d-1]; empty means all ones.
  std::vector<int> state_u;
  std::vector<int> state_v;
};

// Published preferred pairs for degrees 5, 6, 7, 9, 10, 11. Empty for others.
std::optional<GoldSpec> default_gold_spec(int degree);

// Output bits of one period (2^d - 1) of the register. Throws
// std::invalid_argument when the polynomial is not maximal length.
std::vector<int> lfsr_sequence(int degree, const std::vector<int>& poly,
                               const std::vector<int>& state);

// u, v, then u xor shift^k(v) for k = 0..2^d-2, with shift^k(v)_t = v_{t+k};
// bit b maps to chip 1 - 2b.
CodeFamily gold_family(const GoldSpec& spec);

struct WeilSpec {
  int p = 257;
  // Bit of the Legendre sequence at index 0. Quadratic residues map to 1,
  // non-residues to 0.
  int legendre_zero_bit = 0;
};

std::vector<int> legendre_sequence(int p, int zero_bit);

// Codes k = 1..(p-1)/2 with bit(t) = l(t) xor l((t + k) mod p).
CodeFamily weil_family(const WeilSpec& spec);

CodeFamily random_family(int n, int m, std::uint64_t seed);

// ACZ codes in generation order.
CodeFamily acz_subset(const CodeFamily& family);

bool is_prime(int p);

}  // namespace spreadopt
