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

#include "spreadopt/subproblem.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdlib>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace spreadopt {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

struct FreeChip {
  int id;
  int chip;
};

// Accumulates the entries of one term, merging repeated bits and pairs.
class TermBuilder {
 public:
  void add_linear(int bit, int coef) {
    for (auto& e : linear_) {
      if (e.bit == bit) {
        e.coef += coef;
        return;
      }
    }
    linear_.push_back({bit, coef});
  }

  void add_bilinear(int p, int q, int coef) {
    if (p > q) std::swap(p, q);
    for (auto& e : bilinear_) {
      if (e.first == p && e.second == q) {
        e.coef += coef;
        return;
      }
    }
    bilinear_.push_back({p, q, coef});
  }

  bool flush(PartialProblem& problem, PartialTerm term, bool keep_constant) {
    std::erase_if(linear_, [](const LinearEntry& e) { return e.coef == 0; });
    std::erase_if(bilinear_, [](const BilinearEntry& e) { return e.coef == 0; });
    const bool constant = linear_.empty() && bilinear_.empty();
    if (constant && !keep_constant) {
      problem.offset += term.constant * term.constant;
    } else {
      std::sort(linear_.begin(), linear_.end(),
                [](const LinearEntry& a, const LinearEntry& b) { return a.bit < b.bit; });
      std::sort(bilinear_.begin(), bilinear_.end(),
                [](const BilinearEntry& a, const BilinearEntry& b) {
                  return a.first != b.first ? a.first < b.first : a.second < b.second;
                });
      term.linear_begin = static_cast<std::uint32_t>(problem.linear.size());
      problem.linear.insert(problem.linear.end(), linear_.begin(), linear_.end());
      term.linear_end = static_cast<std::uint32_t>(problem.linear.size());
      term.bilinear_begin = static_cast<std::uint32_t>(problem.bilinear.size());
      problem.bilinear.insert(problem.bilinear.end(), bilinear_.begin(), bilinear_.end());
      term.bilinear_end = static_cast<std::uint32_t>(problem.bilinear.size());
      problem.terms.push_back(term);
    }
    linear_.clear();
    bilinear_.clear();
    return !constant || keep_constant;
  }

 private:
  std::vector<LinearEntry> linear_;
  std::vector<BilinearEntry> bilinear_;
};

}  // namespace

PartialProblem build_partial(const CodeFamily& family, const CorrelationTable& table,
                             const IndexSet& subset, SubproblemMode mode) {
  if (subset.empty()) throw std::invalid_argument("variable subset is empty");
  const int n = family.n();
  const int m = family.m();
  if (table.n() != n || table.m() != m) {
    throw std::invalid_argument("table does not match family dimensions");
  }
  for (const auto& b : subset.entries()) {
    if (b.code >= m || b.chip >= n) throw std::invalid_argument("subset out of range");
  }

  PartialProblem problem;
  problem.n = n;
  problem.m = m;
  problem.mode = mode;
  problem.acz_bound = acz_bound(n);
  problem.free_bits = subset.entries();
  problem.active_columns = subset.active_columns();
  for (const auto& b : problem.free_bits) {
    problem.incumbent.push_back(family.at(b.code, b.chip));
  }

  // id_of[code * n + chip] is the free-bit id, or -1 for fixed chips.
  std::vector<int> id_of(static_cast<std::size_t>(n) * m, -1);
  std::vector<std::vector<FreeChip>> by_column(m);
  std::vector<char> active(m, 0);
  for (int id = 0; id < static_cast<int>(problem.free_bits.size()); ++id) {
    const auto& b = problem.free_bits[id];
    id_of[static_cast<std::size_t>(b.code) * n + b.chip] = id;
    by_column[b.code].push_back({id, b.chip});
    active[b.code] = 1;
  }
  auto free_id = [&](int code, int chip) {
    return id_of[static_cast<std::size_t>(code) * n + chip];
  };

  TermBuilder builder;
  auto build_term = [&](int a, int b, int k, bool keep_constant) {
    PartialTerm term{a, b, k, table.at(a, b, k), 0, 0, 0, 0};
    auto xa = family.code(a);
    auto xb = family.code(b);
    // Products x^a_s x^b_l with l = s + k whose first chip is free. Pairs of
    // free chips are only recorded here.
    for (const auto& f : by_column[a]) {
      const int s = f.chip;
      const int l = (s + k) % n;
      const int partner = free_id(b, l);
      if (partner == f.id) continue;  // x_s * x_s == 1
      term.constant -= static_cast<std::int64_t>(xa[s]) * xb[l];
      if (partner >= 0) {
        builder.add_bilinear(f.id, partner, 1);
      } else {
        builder.add_linear(f.id, xb[l]);
      }
    }
    // Products whose second chip is free and first chip is fixed.
    for (const auto& f : by_column[b]) {
      const int l = f.chip;
      const int s = ((l - k) % n + n) % n;
      if (free_id(a, s) >= 0) continue;
      term.constant -= static_cast<std::int64_t>(xa[s]) * xb[l];
      builder.add_linear(f.id, xa[s]);
    }
    return builder.flush(problem, term, keep_constant);
  };

  if (mode == SubproblemMode::kStageOne) {
    for (int c : problem.active_columns) {
      build_term(c, c, 1 % n, false);
      ++problem.retained_terms;
    }
    return problem;
  }

  const bool constrained = mode == SubproblemMode::kStageTwo;
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      if (!active[a] && !active[b]) continue;
      for (int k = 0; k < n; ++k) {
        const bool acz_term = constrained && a == b && k == 1;
        build_term(a, b, k, acz_term);
        if (acz_term) problem.acz_terms.push_back(static_cast<int>(problem.terms.size()) - 1);
      }
      problem.retained_terms += n;
    }
  }
  return problem;
}

std::vector<std::int64_t> term_values(const PartialProblem& problem,
                                      std::span<const Chip> assignment) {
  if (assignment.size() != problem.size()) {
    throw std::invalid_argument("assignment length does not match the subset size");
  }
  std::vector<std::int64_t> values;
  values.reserve(problem.terms.size());
  for (const auto& t : problem.terms) {
    std::int64_t v = t.constant;
    for (auto e = t.linear_begin; e < t.linear_end; ++e) {
      const auto& l = problem.linear[e];
      v += l.coef * assignment[l.bit];
    }
    for (auto e = t.bilinear_begin; e < t.bilinear_end; ++e) {
      const auto& q = problem.bilinear[e];
      v += q.coef * assignment[q.first] * assignment[q.second];
    }
    values.push_back(v);
  }
  return values;
}

std::int64_t evaluate(const PartialProblem& problem, std::span<const Chip> assignment) {
  std::int64_t total = problem.offset;
  for (std::int64_t v : term_values(problem, assignment)) total += v * v;
  return total;
}

bool satisfies_acz(const PartialProblem& problem, std::span<const Chip> assignment) {
  if (!problem.constrained()) return true;
  const auto values = term_values(problem, assignment);
  for (int t : problem.acz_terms) {
    if (std::abs(values[t]) > problem.acz_bound) return false;
  }
  return true;
}

namespace {

// Per-bit incidence lists into the term structure.
struct Incidence {
  struct Lin {
    int term;
    int coef;
  };
  struct Bil {
    int term;
    int other;
    int coef;
  };
  std::vector<std::vector<Lin>> linear;
  std::vector<std::vector<Bil>> bilinear;

  explicit Incidence(const PartialProblem& problem)
      : linear(problem.size()), bilinear(problem.size()) {
    for (int t = 0; t < static_cast<int>(problem.terms.size()); ++t) {
      const auto& term = problem.terms[t];
      for (auto e = term.linear_begin; e < term.linear_end; ++e) {
        const auto& l = problem.linear[e];
        linear[l.bit].push_back({t, l.coef});
      }
      for (auto e = term.bilinear_begin; e < term.bilinear_end; ++e) {
        const auto& q = problem.bilinear[e];
        bilinear[q.first].push_back({t, q.second, q.coef});
        bilinear[q.second].push_back({t, q.first, q.coef});
      }
    }
  }
};

std::vector<Chip> from_key(std::uint64_t key, std::size_t size) {
  std::vector<Chip> out(size);
  for (std::size_t p = 0; p < size; ++p) {
    out[p] = ((key >> (size - 1 - p)) & 1u) != 0 ? Chip{1} : Chip{-1};
  }
  return out;
}

struct Candidate {
  std::int64_t objective = kInf;
  std::uint64_t key = 0;
  std::uint64_t nodes = 0;

  bool better_than(const Candidate& other) const {
    return objective < other.objective ||
           (objective == other.objective && key < other.key);
  }
};

int worker_count(int threads, std::size_t tasks) {
  return static_cast<int>(std::max<std::size_t>(
      1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), tasks)));
}

// Runs task(0..count-1) on `threads` workers and reduces the candidates with
// the deterministic tie-break.
template <typename Task>
Candidate run_tasks(std::size_t count, int threads, Task task) {
  std::vector<Candidate> results(count);
  const int workers = worker_count(threads, count);
  if (workers == 1) {
    for (std::size_t t = 0; t < count; ++t) results[t] = task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < count; t = next++) results[t] = task(t);
      });
    }
    for (auto& th : pool) th.join();
  }
  Candidate best;
  for (const auto& r : results) {
    best.nodes += r.nodes;
    if (r.better_than(best)) {
      best.objective = r.objective;
      best.key = r.key;
    }
  }
  return best;
}

SolveResult finish(const PartialProblem& problem, const Candidate& best) {
  if (best.objective == kInf) {
    throw InfeasibleError("no assignment of the free bits satisfies the ACZ constraint");
  }
  SolveResult result;
  result.assignment = from_key(best.key, problem.size());
  result.objective = best.objective;
  result.nodes_explored = best.nodes;
  return result;
}

}  // namespace

SolveResult solve_exhaustive(const PartialProblem& problem, const SolverOptions& options) {
  const int size = static_cast<int>(problem.size());
  if (size == 0) throw std::invalid_argument("empty subproblem");
  if (size > options.enumeration_cap) {
    throw std::invalid_argument("subset of " + std::to_string(size) +
                                " bits exceeds the enumeration cap of " +
                                std::to_string(options.enumeration_cap));
  }
  const Incidence inc(problem);

  // The top `prefix_bits` key bits split the cube into independent tasks; the
  // rest are walked in Gray-code order, one flip per step.
  int prefix_bits = 0;
  while (prefix_bits < size && (1 << prefix_bits) < options.threads) ++prefix_bits;
  const int walk_bits = size - prefix_bits;

  auto task = [&](std::size_t prefix) {
    std::vector<Chip> values(size, -1);
    for (int p = 0; p < prefix_bits; ++p) {
      values[p] = ((prefix >> (prefix_bits - 1 - p)) & 1u) != 0 ? Chip{1} : Chip{-1};
    }
    std::vector<std::int64_t> tv = term_values(problem, values);
    std::int64_t obj = problem.offset;
    for (std::int64_t v : tv) obj += v * v;

    auto feasible = [&] {
      for (int t : problem.acz_terms) {
        if (std::abs(tv[t]) > problem.acz_bound) return false;
      }
      return true;
    };
    auto shift = [&](int t, std::int64_t delta) {
      const std::int64_t before = tv[t];
      tv[t] += delta;
      obj += tv[t] * tv[t] - before * before;
    };

    Candidate best;
    const std::uint64_t base = static_cast<std::uint64_t>(prefix) << walk_bits;
    const std::uint64_t steps = std::uint64_t{1} << walk_bits;
    for (std::uint64_t i = 0; i < steps; ++i) {
      if (i > 0) {
        const int p = size - 1 - std::countr_zero(i);
        const int old = values[p];
        for (const auto& l : inc.linear[p]) shift(l.term, -2 * l.coef * old);
        for (const auto& b : inc.bilinear[p]) {
          shift(b.term, -2 * b.coef * old * values[b.other]);
        }
        values[p] = static_cast<Chip>(-old);
      }
      ++best.nodes;
      if (!feasible()) continue;
      const Candidate here{obj, base | (i ^ (i >> 1)), 0};
      if (here.better_than(best)) {
        best.objective = here.objective;
        best.key = here.key;
      }
    }
    return best;
  };

  return finish(problem, run_tasks(std::size_t{1} << prefix_bits, options.threads, task));
}

namespace {

// The objective expanded into a multilinear polynomial in the free bits
// (b^2 = 1), monomials keyed by bit masks. Squaring a term with linear and
// bilinear entries yields monomials of degree at most four.
struct Polynomial {
  struct Monomial {
    std::uint64_t mask;
    std::int64_t weight;
  };
  std::int64_t constant = 0;
  std::vector<Monomial> monomials;  // degree >= 1, nonzero weight

  explicit Polynomial(const PartialProblem& problem) {
    const std::size_t size = problem.size();
    std::vector<std::int64_t> deg1(size, 0);
    std::vector<std::int64_t> deg2(size * size, 0);
    std::unordered_map<std::uint64_t, std::int64_t> higher;

    std::vector<Monomial> entries;
    auto add = [&](std::uint64_t mask, std::int64_t w) {
      if (mask == 0) {
        constant += w;
        return;
      }
      const int p = std::countr_zero(mask);
      const std::uint64_t rest = mask & (mask - 1);
      if (rest == 0) {
        deg1[p] += w;
      } else if ((rest & (rest - 1)) == 0) {
        deg2[p * size + std::countr_zero(rest)] += w;
      } else {
        higher[mask] += w;
      }
    };

    constant = problem.offset;
    for (const auto& t : problem.terms) {
      entries.clear();
      entries.push_back({0, t.constant});
      for (auto e = t.linear_begin; e < t.linear_end; ++e) {
        const auto& l = problem.linear[e];
        entries.push_back({std::uint64_t{1} << l.bit, l.coef});
      }
      for (auto e = t.bilinear_begin; e < t.bilinear_end; ++e) {
        const auto& q = problem.bilinear[e];
        entries.push_back({(std::uint64_t{1} << q.first) | (std::uint64_t{1} << q.second), q.coef});
      }
      for (std::size_t a = 0; a < entries.size(); ++a) {
        constant += entries[a].weight * entries[a].weight;
        for (std::size_t b = a + 1; b < entries.size(); ++b) {
          add(entries[a].mask ^ entries[b].mask, 2 * entries[a].weight * entries[b].weight);
        }
      }
    }

    for (std::size_t p = 0; p < size; ++p) {
      if (deg1[p] != 0) monomials.push_back({std::uint64_t{1} << p, deg1[p]});
    }
    for (std::size_t p = 0; p < size; ++p) {
      for (std::size_t q = p + 1; q < size; ++q) {
        const std::int64_t w = deg2[p * size + q];
        if (w != 0) monomials.push_back({(std::uint64_t{1} << p) | (std::uint64_t{1} << q), w});
      }
    }
    std::vector<Monomial> rest;
    for (const auto& [mask, w] : higher) {
      if (w != 0) rest.push_back({mask, w});
    }
    std::sort(rest.begin(), rest.end(),
              [](const Monomial& a, const Monomial& b) { return a.mask < b.mask; });
    monomials.insert(monomials.end(), rest.begin(), rest.end());
  }
};

// Depth-first search over the free bits. The lower bound of a node is
//
//   fixed part - sum over unassigned bits q of |effective linear coef of q|
//              - sum over monomials with >= 2 unassigned bits of |weight|
//
// which is exact at the leaves. Shift-one ACZ terms are tracked as intervals
// [fixed - slack, fixed + slack] and a node is cut once its interval misses
// [-g, g].
class BranchAndBound {
 public:
  BranchAndBound(const PartialProblem& problem, const Polynomial& poly,
                 const std::vector<int>& order)
      : problem_(problem),
        poly_(poly),
        order_(order),
        size_(static_cast<int>(problem.size())),
        by_bit_(problem.size()),
        acz_lin_(problem.size()),
        acz_bil_(problem.size()) {
    sign_.assign(poly.monomials.size(), 1);
    remaining_.resize(poly.monomials.size());
    effective_.assign(problem.size(), 0);
    fixed_ = poly.constant;
    for (int idx = 0; idx < static_cast<int>(poly.monomials.size()); ++idx) {
      const auto& mono = poly.monomials[idx];
      remaining_[idx] = std::popcount(mono.mask);
      if (remaining_[idx] == 1) {
        effective_[std::countr_zero(mono.mask)] += mono.weight;
      } else {
        higher_abs_ += std::abs(mono.weight);
      }
      for (std::uint64_t bits = mono.mask; bits != 0; bits &= bits - 1) {
        by_bit_[std::countr_zero(bits)].push_back(idx);
      }
    }

    for (int a = 0; a < static_cast<int>(problem.acz_terms.size()); ++a) {
      const auto& t = problem.terms[problem.acz_terms[a]];
      AczState st{t.constant, 0};
      for (auto e = t.linear_begin; e < t.linear_end; ++e) {
        const auto& l = problem.linear[e];
        acz_lin_[l.bit].push_back({a, l.coef});
        st.slack += std::abs(l.coef);
      }
      for (auto e = t.bilinear_begin; e < t.bilinear_end; ++e) {
        const auto& q = problem.bilinear[e];
        acz_bil_[q.first].push_back({a, q.second, q.coef});
        acz_bil_[q.second].push_back({a, q.first, q.coef});
        st.slack += std::abs(q.coef);
      }
      acz_.push_back(st);
    }
    values_.assign(problem.size(), 0);
  }

  // Assigns order[0..prefix.size()-1] and searches the remaining subtree.
  Candidate search(std::span<const Chip> prefix) {
    best_ = Candidate{};
    for (std::size_t d = 0; d < prefix.size(); ++d) assign(order_[d], prefix[d]);
    if (acz_ok()) {
      if (static_cast<int>(prefix.size()) == size_) {
        ++best_.nodes;
        consider_leaf();
      } else {
        descend(static_cast<int>(prefix.size()));
      }
    }
    for (std::size_t d = prefix.size(); d-- > 0;) unassign(order_[d]);
    return best_;
  }

 private:
  struct AczState {
    std::int64_t fixed;
    std::int64_t slack;
  };
  struct AczLin {
    int acz;
    int coef;
  };
  struct AczBil {
    int acz;
    int other;
    int coef;
  };

  void descend(int depth) {
    const int p = order_[depth];
    const Chip first = problem_.incumbent[p];
    for (Chip v : {first, static_cast<Chip>(-first)}) {
      assign(p, v);
      ++best_.nodes;
      if (acz_ok()) {
        if (depth + 1 == size_) {
          consider_leaf();
        } else if (!prunable()) {
          descend(depth + 1);
        }
      }
      unassign(p);
    }
  }

  void consider_leaf() {
    const Candidate here{fixed_, ones_key_, 0};
    if (here.better_than(best_)) {
      best_.objective = here.objective;
      best_.key = here.key;
    }
  }

  bool prunable() const {
    if (best_.objective == kInf) return false;
    std::int64_t bound = fixed_ - higher_abs_;
    for (std::uint64_t free = ~assigned_mask_ & full_mask(); free != 0; free &= free - 1) {
      bound -= std::abs(effective_[std::countr_zero(free)]);
    }
    if (bound > best_.objective) return true;
    // Equal bound: the smallest key reachable sets every open bit to -1.
    return bound == best_.objective && ones_key_ >= best_.key;
  }

  bool acz_ok() const {
    const std::int64_t g = problem_.acz_bound;
    for (const auto& st : acz_) {
      if (st.fixed - st.slack > g || st.fixed + st.slack < -g) return false;
    }
    return true;
  }

  std::uint64_t full_mask() const {
    return size_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size_) - 1;
  }

  void assign(int p, Chip v) {
    const std::uint64_t bit = std::uint64_t{1} << p;
    for (int idx : by_bit_[p]) {
      const auto& mono = poly_.monomials[idx];
      const std::int64_t w = mono.weight * sign_[idx] * v;
      switch (remaining_[idx]) {
        case 1:
          fixed_ += w;
          break;
        case 2: {
          higher_abs_ -= std::abs(mono.weight);
          const std::uint64_t other = mono.mask & ~assigned_mask_ & ~bit;
          effective_[std::countr_zero(other)] += w;
          break;
        }
        default:
          break;
      }
      sign_[idx] = static_cast<std::int8_t>(sign_[idx] * v);
      --remaining_[idx];
    }
    for (const auto& l : acz_lin_[p]) {
      acz_[l.acz].fixed += l.coef * v;
      acz_[l.acz].slack -= std::abs(l.coef);
    }
    for (const auto& b : acz_bil_[p]) {
      if ((assigned_mask_ >> b.other) & 1u) {
        acz_[b.acz].fixed += b.coef * v * values_[b.other];
        acz_[b.acz].slack -= std::abs(b.coef);
      }
    }
    values_[p] = v;
    assigned_mask_ |= bit;
    if (v > 0) ones_key_ |= std::uint64_t{1} << (size_ - 1 - p);
  }

  void unassign(int p) {
    const std::uint64_t bit = std::uint64_t{1} << p;
    const Chip v = values_[p];
    assigned_mask_ &= ~bit;
    ones_key_ &= ~(std::uint64_t{1} << (size_ - 1 - p));
    for (const auto& b : acz_bil_[p]) {
      if ((assigned_mask_ >> b.other) & 1u) {
        acz_[b.acz].fixed -= b.coef * v * values_[b.other];
        acz_[b.acz].slack += std::abs(b.coef);
      }
    }
    for (const auto& l : acz_lin_[p]) {
      acz_[l.acz].fixed -= l.coef * v;
      acz_[l.acz].slack += std::abs(l.coef);
    }
    for (int idx : by_bit_[p]) {
      const auto& mono = poly_.monomials[idx];
      ++remaining_[idx];
      sign_[idx] = static_cast<std::int8_t>(sign_[idx] * v);
      const std::int64_t w = mono.weight * sign_[idx] * v;
      switch (remaining_[idx]) {
        case 1:
          fixed_ -= w;
          break;
        case 2: {
          higher_abs_ += std::abs(mono.weight);
          const std::uint64_t other = mono.mask & ~assigned_mask_ & ~bit;
          effective_[std::countr_zero(other)] -= w;
          break;
        }
        default:
          break;
      }
    }
    values_[p] = 0;
  }

  const PartialProblem& problem_;
  const Polynomial& poly_;
  const std::vector<int>& order_;
  int size_;

  std::vector<std::vector<int>> by_bit_;
  std::vector<std::int8_t> sign_;
  std::vector<int> remaining_;
  std::vector<std::int64_t> effective_;
  std::int64_t fixed_ = 0;
  std::int64_t higher_abs_ = 0;

  std::vector<std::vector<AczLin>> acz_lin_;
  std::vector<std::vector<AczBil>> acz_bil_;
  std::vector<AczState> acz_;

  std::vector<Chip> values_;
  std::uint64_t assigned_mask_ = 0;
  std::uint64_t ones_key_ = 0;
  Candidate best_;
};

// Bits by descending total absolute coefficient mass, ties by index.
std::vector<int> branch_order(const PartialProblem& problem) {
  std::vector<std::int64_t> mass(problem.size(), 0);
  for (const auto& l : problem.linear) mass[l.bit] += std::abs(l.coef);
  for (const auto& q : problem.bilinear) {
    mass[q.first] += std::abs(q.coef);
    mass[q.second] += std::abs(q.coef);
  }
  std::vector<int> order(problem.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return mass[a] > mass[b]; });
  return order;
}

}  // namespace

SolveResult solve_branch_and_bound(const PartialProblem& problem, const SolverOptions& options) {
  const int size = static_cast<int>(problem.size());
  if (size == 0) throw std::invalid_argument("empty subproblem");
  if (size > 63) throw std::invalid_argument("branch and bound supports at most 63 free bits");

  const Polynomial poly(problem);
  const std::vector<int> order = branch_order(problem);

  int prefix_depth = 0;
  if (options.threads > 1) {
    while (prefix_depth < size && (1 << prefix_depth) < 4 * options.threads) ++prefix_depth;
  }
  // Prefixes follow the search order: incumbent value first at every level.
  const std::size_t tasks = std::size_t{1} << prefix_depth;
  auto prefix_of = [&](std::size_t t) {
    std::vector<Chip> prefix(prefix_depth);
    for (int d = 0; d < prefix_depth; ++d) {
      const bool flip = ((t >> (prefix_depth - 1 - d)) & 1u) != 0;
      const Chip inc = problem.incumbent[order[d]];
      prefix[d] = flip ? static_cast<Chip>(-inc) : inc;
    }
    return prefix;
  };

  const int workers = worker_count(options.threads, tasks);
  std::vector<std::unique_ptr<BranchAndBound>> searchers;
  for (int w = 0; w < workers; ++w) {
    searchers.push_back(std::make_unique<BranchAndBound>(problem, poly, order));
  }
  std::mutex slot_mutex;
  std::vector<int> free_slots(workers);
  std::iota(free_slots.begin(), free_slots.end(), 0);

  const Candidate best = run_tasks(tasks, options.threads, [&](std::size_t t) {
    int slot;
    {
      std::lock_guard lock(slot_mutex);
      slot = free_slots.back();
      free_slots.pop_back();
    }
    const auto prefix = prefix_of(t);
    Candidate c = searchers[slot]->search(prefix);
    {
      std::lock_guard lock(slot_mutex);
      free_slots.push_back(slot);
    }
    return c;
  });
  return finish(problem, best);
}

std::string dump_partial(const PartialProblem& problem) {
  std::ostringstream out;
  out << "# free";
  for (const auto& b : problem.free_bits) out << ' ' << b.code << ',' << b.chip;
  out << "\n# offset " << problem.offset << "\n";
  for (const auto& t : problem.terms) {
    out << t.i << ' ' << t.j << ' ' << t.k << " | " << t.constant << " |";
    for (auto e = t.linear_begin; e < t.linear_end; ++e) {
      out << ' ' << problem.linear[e].bit << ':' << problem.linear[e].coef;
    }
    out << " |";
    for (auto e = t.bilinear_begin; e < t.bilinear_end; ++e) {
      const auto& q = problem.bilinear[e];
      out << ' ' << q.first << ',' << q.second << ':' << q.coef;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace spreadopt
