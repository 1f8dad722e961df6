#pragma once

// Reference implementations used only by the tests. None of them touches the
// signed-permutation machinery: they work with raw matrix indices, direct
// partition enumeration and closed-form counts.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "ptfree/exact.hpp"
#include "ptfree/model.hpp"

namespace oracle {

using ptfree::BigInt;
using ptfree::DimSpec;
using ptfree::EpsilonMatrix;
using ptfree::ExactValue;

/// E[X_ε^k] by expanding every trace into matrix entries of G and applying
/// the complex Wick rule: E ∏ g_{a_x} ḡ_{b_x} equals ∏ (multiplicity)! when
/// the multisets {a_x} and {b_x} coincide, and 0 otherwise.
///
/// X_ε = D^{-1-m} Σ ∏_r G[row_r, t_r] conj(G[col_r, t_r]), where factor r of
/// the word has indices (i_r, i_{r+1}) before the partial transpose and the
/// transpose swaps the leg digits of the pair. Cost D^{km} p^{km}.
inline ExactValue direct_wick_moment(const EpsilonMatrix& eps, std::size_t k, const DimSpec& dims) {
  const std::size_t m = eps.m(), n = eps.n(), km = k * m;
  const std::uint64_t D = dims.total(), p = dims.p();
  std::vector<std::uint64_t> stride(n);
  {
    std::uint64_t s = 1;
    for (std::size_t l = n; l-- > 0;) {
      stride[l] = s;
      s *= dims.d()[l];
    }
  }
  auto digit = [&](std::uint64_t a, std::size_t l) { return a / stride[l] % dims.d()[l]; };

  std::vector<std::uint64_t> idx(km, 0), smp(km, 0);
  std::vector<std::uint64_t> g(km), gbar(km);
  BigInt total = 0;
  std::function<void(std::size_t)> over_samples;
  std::function<void(std::size_t)> over_indices;

  over_samples = [&](std::size_t pos) {
    if (pos < km) {
      for (std::uint64_t t = 0; t < p; ++t) {
        smp[pos] = t;
        over_samples(pos + 1);
      }
      return;
    }
    for (std::size_t s = 0; s < k; ++s)
      for (std::size_t r = 0; r < m; ++r) {
        const std::size_t x = s * m + r;
        const std::uint64_t a = idx[x], b = idx[s * m + (r + 1) % m];
        std::uint64_t row = 0, col = 0;
        for (std::size_t l = 0; l < n; ++l) {
          const bool swap = eps(r, l) != 0;
          row += (swap ? digit(b, l) : digit(a, l)) * stride[l];
          col += (swap ? digit(a, l) : digit(b, l)) * stride[l];
        }
        g[x] = row * p + smp[x];
        gbar[x] = col * p + smp[x];
      }
    std::vector<std::uint64_t> ga = g, gb = gbar;
    std::sort(ga.begin(), ga.end());
    std::sort(gb.begin(), gb.end());
    if (ga != gb) return;
    BigInt w = 1;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= ga.size(); ++i) {
      if (i < ga.size() && ga[i] == ga[i - 1]) {
        ++run;
        w *= run;
      } else {
        run = 1;
      }
    }
    total += w;
  };
  over_indices = [&](std::size_t pos) {
    if (pos == km) {
      over_samples(0);
      return;
    }
    for (std::uint64_t a = 0; a < D; ++a) {
      idx[pos] = a;
      over_indices(pos + 1);
    }
  };
  over_indices(0);
  // Each trace carries (1/D)·D^{-m}.
  BigInt scale = 1;
  for (std::size_t i = 0; i < k * (m + 1); ++i) scale *= D;
  return ExactValue(total, scale);
}

/// All set partitions of [m] as label vectors (restricted growth strings),
/// generated recursively.
inline std::vector<std::vector<int>> rgs_partitions(int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> lab(m, 0);
  std::function<void(int, int)> rec = [&](int i, int maxl) {
    if (i == m) {
      out.push_back(lab);
      return;
    }
    for (int l = 0; l <= maxl + 1; ++l) {
      lab[i] = l;
      rec(i + 1, std::max(maxl, l));
    }
  };
  if (m == 0) return {{}};
  lab[0] = 0;
  rec(1, 0);
  return out;
}

inline bool rgs_noncrossing(const std::vector<int>& lab) {
  const int m = static_cast<int>(lab.size());
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = b + 1; c < m; ++c)
        for (int d = c + 1; d < m; ++d)
          if (lab[a] == lab[c] && lab[b] == lab[d] && lab[a] != lab[b]) return false;
  return true;
}

inline BigInt binomial(unsigned n, unsigned r) {
  BigInt v = 1;
  for (unsigned i = 1; i <= r; ++i) v = v * (n - r + i) / i;
  return v;
}

inline BigInt catalan_closed(unsigned r) { return binomial(2 * r, r) / (r + 1); }

/// Free Poisson moment Σ_k Narayana(m,k) c^k.
inline ExactValue free_poisson_moment(unsigned m, const ExactValue& c) {
  ExactValue s = 0;
  for (unsigned k = 1; k <= m; ++k) s += ExactValue(binomial(m, k) * binomial(m, k - 1) / m) * ptfree::pow_exact(c, k);
  return s;
}

/// Σ over non-crossing partitions of [m] into singletons and pairs of
/// c^{#blocks}: Σ_j m!/(j!(j+1)!(m−2j)!) c^{m−j}.
inline ExactValue semicircle_shift_moment(unsigned m, const ExactValue& c) {
  ExactValue s = 0;
  for (unsigned j = 0; 2 * j <= m; ++j)
    s += ExactValue(binomial(m, 2 * j) * catalan_closed(j)) * ptfree::pow_exact(c, static_cast<int>(m - j));
  return s;
}

/// Deterministic random ε matrices for property tests.
inline EpsilonMatrix random_epsilon(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  EpsilonMatrix e(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) e.set(i, j, static_cast<std::uint8_t>(rng() & 1u));
  return e;
}

}  // namespace oracle
