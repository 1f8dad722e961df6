#pragma once

// Exhaustive property suites shared by the `check` subcommand and the tests.
// Each suite counts assertions and keeps the first counterexample.

#include <cstdint>
#include <string>
#include <vector>

#include "ptfree/combinat.hpp"
#include "ptfree/model.hpp"
#include "ptfree/moments.hpp"
#include "ptfree/wick.hpp"

namespace ptfree::checks {

struct CheckResult {
  std::string suite;
  std::uint64_t assertions = 0;
  std::uint64_t failures = 0;
  std::string counterexample;

  bool passed() const noexcept { return failures == 0; }
  void record(bool ok, const std::string& what) {
    ++assertions;
    if (ok) return;
    if (failures++ == 0) counterexample = what;
  }
};

/// Every m×n matrix over {0,1}, in lexicographic order of the flattened bits.
inline std::vector<EpsilonMatrix> all_epsilon(std::size_t m, std::size_t n) {
  std::vector<EpsilonMatrix> out;
  const std::size_t bits = m * n;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << bits); ++v) {
    EpsilonMatrix e(m, n);
    for (std::size_t b = 0; b < bits; ++b) e.set(b / n, b % n, static_cast<std::uint8_t>(v >> (bits - 1 - b) & 1u));
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<Row> all_rows(std::size_t n) { return moments::lex_subset(n, std::uint64_t{1} << n); }

/// Sign pattern of f_{1,j} for every σ ∈ S_m and every ε, m ≤ max_m, n ≤ max_n.
inline CheckResult lem_sign_suite(std::size_t max_m = 4, std::size_t max_n = 2) {
  CheckResult r{"lem-sign"};
  for (std::size_t m = 1; m <= max_m; ++m) {
    auto perms = combinat::permutations(m);
    for (std::size_t n = 1; n <= max_n; ++n)
      for (const auto& eps : all_epsilon(m, n))
        for (const auto& sigma : perms) {
          auto rep = moments::classify_sigma(eps, sigma);
          r.record(rep.consistent, rep.violation);
        }
  }
  return r;
}

/// Additivity of f_{k,j} under invariant splits and f_{k,j} ≤ 2 − 2k
/// otherwise: k = 2 with m ≤ 2, and k = 3 with m = 1.
inline CheckResult split_suite(std::size_t max_n = 2) {
  CheckResult r{"split"};
  auto run = [&](std::size_t k, std::size_t m) {
    auto perms = combinat::permutations(k * m);
    for (std::size_t n = 1; n <= max_n; ++n)
      for (const auto& eps : all_epsilon(m, n))
        for (const auto& sigma : perms) {
          auto rep = moments::split_check(sigma, k, eps);
          r.record(rep.consistent, rep.violation);
        }
  };
  run(2, 1);
  run(2, 2);
  run(3, 1);
  return r;
}

/// Join-count identities for τ₁ = τ∘(l+1) and τ₂ = τ∘(l+1 l+2), l ≤ max_l,
/// over all τ ∈ S_l and all admissible single columns.
inline CheckResult technical_suite(std::size_t max_l = 3) {
  CheckResult r{"technical"};
  for (std::size_t l = 1; l <= max_l; ++l)
    for (const auto& tau : combinat::permutations(l)) {
      for (const auto& e : all_epsilon(l + 1, 1)) {
        Row col = e.column(0);
        auto s = moments::technical_identity_sides(tau, col, moments::TechnicalVariant::fixed_point);
        r.record(s.holds, "fixed point: τ=" + tau.to_string() + " column=" + row_to_string(col) +
                              " lhs=" + std::to_string(s.lhs) + " rhs=" + std::to_string(s.rhs));
      }
      for (const auto& e : all_epsilon(l + 2, 1)) {
        Row col = e.column(0);
        if (col[l] != col[l + 1]) continue;
        auto s = moments::technical_identity_sides(tau, col, moments::TechnicalVariant::transposition);
        r.record(s.holds, "transposition: τ=" + tau.to_string() + " column=" + row_to_string(col) +
                              " lhs=" + std::to_string(s.lhs) + " rhs=" + std::to_string(s.rhs));
      }
    }
  return r;
}

/// Pairs of distinct words of length ≤ max_m over {0,1}ⁿ with equal kernels.
inline std::vector<std::pair<std::vector<Row>, std::vector<Row>>> kernel_pairs(std::size_t n, std::size_t max_m) {
  std::vector<std::pair<std::vector<Row>, std::vector<Row>>> out;
  const auto rows = all_rows(n);
  for (std::size_t m = 1; m <= max_m; ++m) {
    std::vector<std::vector<Row>> words;
    std::uint64_t count = 1;
    for (std::size_t t = 0; t < m; ++t) count *= rows.size();
    for (std::uint64_t code = 0; code < count; ++code) {
      std::vector<Row> w(m);
      std::uint64_t x = code;
      for (std::size_t t = m; t-- > 0;) {
        w[t] = rows[x % rows.size()];
        x /= rows.size();
      }
      words.push_back(std::move(w));
    }
    for (std::size_t a = 0; a < words.size(); ++a)
      for (std::size_t b = a + 1; b < words.size(); ++b)
        if (combinat::ker(words[a]) == combinat::ker(words[b])) out.emplace_back(words[a], words[b]);
  }
  return out;
}

/// Kernel-invariance gap against its bound, with c = p/D, for n = 2 and
/// words of length ≤ max_m.
inline CheckResult kernel_gap_suite(const std::vector<DimSpec>& grid, std::size_t max_m = 3) {
  CheckResult r{"kernel-gap"};
  for (const auto& dims : grid) {
    const auto pairs = kernel_pairs(dims.n(), max_m);
    const ExactValue c = dims.ratio();
    for (const auto& [w1, w2] : pairs) {
      ExactValue gap = moments::kernel_invariance_gap(w1, w2, dims, c);
      ExactValue bound = moments::kernel_invariance_bound(w1.size(), dims, c);
      r.record(gap <= bound, "words " + EpsilonMatrix(w1).to_string() + " / " + EpsilonMatrix(w2).to_string() +
                                 " " + dims.to_string() + ": gap " + to_string(gap) + " > bound " +
                                 to_string(bound));
    }
  }
  return r;
}

inline std::vector<DimSpec> default_kernel_grid() {
  return {DimSpec({2, 2}, 4), DimSpec({3, 3}, 9)};
}

/// Exact engine against the Wick oracle: every ε ∈ {0,1}^{m×2}, m ≤ 2,
/// k ≤ 2, d = (2,2), p ≤ 2.
inline CheckResult oracle_suite() {
  CheckResult r{"oracle"};
  for (std::uint64_t p = 1; p <= 2; ++p) {
    DimSpec dims({2, 2}, p);
    for (std::size_t m = 1; m <= 2; ++m)
      for (const auto& eps : all_epsilon(m, 2))
        for (std::size_t k = 1; k <= 2; ++k) {
          ExactValue a = moments::exact_moment(eps, k, dims);
          ExactValue b = wick::wick_exact_moment(eps, k, dims);
          r.record(a == b, "ε=" + eps.to_string() + " k=" + std::to_string(k) + " " + dims.to_string() +
                               ": engine " + to_string(a) + " vs oracle " + to_string(b));
        }
  }
  return r;
}

}  // namespace ptfree::checks
