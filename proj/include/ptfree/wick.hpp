#pragma once

// Brute-force Gaussian oracle for E[X_ε^k]. X_ε is expanded as a polynomial
// in the entries g of G, indexed by assignments
//
//   I : [k]×[±m] → [d₁]×⋯×[d_{n−1}],  Q : [k]×[±m] → [dₙ],  T : [k]×[m] → [p],
//
// restricted by the two membership constraints I_j = I_j∘P_j, Q = Q∘P_n. Each
// admissible triple contributes E ∏ g_{α(x)} ∏ ḡ_{β(x)}, which by the Wick
// formula for complex Gaussians is the number of σ ∈ S_{km} with β = α∘σ.
// Everything is enumerated; nothing here uses the closed-form exponents.
//
// Intended for km ≤ 4 and tiny dimensions only.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "ptfree/combinat.hpp"
#include "ptfree/errors.hpp"
#include "ptfree/exact.hpp"
#include "ptfree/model.hpp"
#include "ptfree/moments.hpp"
#include "ptfree/parallel.hpp"

namespace ptfree::wick {

/// Slots of [k]×[±m] use the dense signed encoding on [±km]; slot (s, s′)
/// with s′ > 0 is the positive element (s−1)m + s′.
struct IndexAssignment {
  std::vector<std::vector<std::uint32_t>> legs;  ///< I_j for j = 1..n−1, each of size 2km
  std::vector<std::uint32_t> last;               ///< Q, size 2km
  std::vector<std::uint32_t> samples;            ///< T, size km
};

/// The label sequences of the Gaussian factors: α for the g's and β for the
/// conjugated ones, both of length km.
struct WickWord {
  std::vector<std::uint64_t> alpha;
  std::vector<std::uint64_t> beta;
};

struct WickOptions {
  double max_cost = 2e9;
  /// Count σ with α = β∘σ instead; the result must not change.
  bool swap_roles = false;
  unsigned threads = default_thread_count();
};

namespace detail {

inline std::vector<std::vector<int>> constraint_pairings(const EpsilonMatrix& eps, std::size_t k) {
  std::vector<std::vector<int>> out;
  for (std::size_t j = 0; j < eps.n(); ++j)
    out.push_back(moments::word_pairing(eps.column(j), k).perm().dense());
  return out;
}

inline bool invariant(const std::vector<std::uint32_t>& f, const std::vector<int>& pairing) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] != f[pairing[i]]) return false;
  return true;
}

}  // namespace detail

/// (I ∈ A(ε,k), Q ∈ B(ε,k)).
inline std::pair<bool, bool> membership_predicates(const IndexAssignment& a, const EpsilonMatrix& eps,
                                                   std::size_t k) {
  auto pairings = detail::constraint_pairings(eps, k);
  if (a.legs.size() + 1 != eps.n()) throw SizeMismatch("assignment has the wrong number of legs");
  bool in_a = true;
  for (std::size_t j = 0; j + 1 < eps.n(); ++j)
    if (a.legs[j].size() != 2 * k * eps.m() || !detail::invariant(a.legs[j], pairings[j])) in_a = false;
  bool in_b = a.last.size() == 2 * k * eps.m() && detail::invariant(a.last, pairings.back());
  return {in_a, in_b};
}

/// α(x) = (I(x), Q(x), T(x)), β(x) = (I(−x), Q(−x), T(x)) for x ∈ [km],
/// packed into integers with mixed radix (d₁,…,dₙ,p).
inline WickWord build_word(const IndexAssignment& a, const DimSpec& dims) {
  const std::size_t km = a.samples.size();
  WickWord w;
  for (std::size_t x = 0; x < km; ++x) {
    auto pack = [&](std::size_t slot) {
      std::uint64_t code = 0;
      for (std::size_t j = 0; j < a.legs.size(); ++j) code = code * dims.d()[j] + a.legs[j][slot];
      code = code * dims.d().back() + a.last[slot];
      return code * dims.p() + a.samples[x];
    };
    w.alpha.push_back(pack(x));
    w.beta.push_back(pack(km + x));
  }
  return w;
}

/// Estimated enumeration cost D^{2km}·p^{km}·(km)!.
inline double oracle_cost(const EpsilonMatrix& eps, std::size_t k, const DimSpec& dims) {
  const double km = static_cast<double>(k * eps.m());
  return std::pow(static_cast<double>(dims.total()), 2 * km) * std::pow(static_cast<double>(dims.p()), km) *
         std::tgamma(km + 1);
}

/// Number of (I, Q) pairs that satisfy both membership constraints, by
/// enumeration.
inline std::uint64_t count_admissible(const EpsilonMatrix& eps, std::size_t k, const DimSpec& dims) {
  const std::size_t slots = 2 * k * eps.m();
  std::uint64_t total = 1;
  for (std::size_t t = 0; t < slots; ++t) total *= dims.total();
  std::uint64_t count = 0;
  IndexAssignment a;
  a.legs.assign(eps.n() - 1, std::vector<std::uint32_t>(slots));
  a.last.assign(slots, 0);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t x = code;
    for (std::size_t s = 0; s < slots; ++s) {
      std::uint64_t digit = x % dims.total();
      x /= dims.total();
      for (std::size_t j = eps.n(); j-- > 0;) {
        auto v = static_cast<std::uint32_t>(digit % dims.d()[j]);
        digit /= dims.d()[j];
        (j + 1 == eps.n() ? a.last[s] : a.legs[j][s]) = v;
      }
    }
    auto [ia, ib] = membership_predicates(a, eps, k);
    if (ia && ib) ++count;
  }
  return count;
}

/// E[X_ε^k] from the Gaussian expansion.
inline ExactValue wick_exact_moment(const EpsilonMatrix& eps, std::size_t k, const DimSpec& dims,
                                    const WickOptions& opt = {}) {
  if (k < 1) throw PreconditionError("wick oracle: k must be positive");
  if (eps.n() != dims.n()) throw SizeMismatch("wick oracle: ε and d disagree on n");
  double cost = oracle_cost(eps, k, dims);
  if (cost > opt.max_cost)
    throw GuardExceeded("wick oracle: estimated cost " + std::to_string(cost) + " exceeds " +
                            std::to_string(opt.max_cost),
                        cost, opt.max_cost);

  const std::size_t n = eps.n();
  const std::size_t km = k * eps.m();
  const std::size_t slots = 2 * km;
  const auto pairings = detail::constraint_pairings(eps, k);
  const std::uint64_t D = dims.total();

  std::vector<std::vector<int>> perms;
  combinat::for_each_permutation_range(km, 0, combinat::factorial(km),
                                       [&](const std::vector<int>& s) { perms.push_back(s); });
  std::uint64_t t_total = 1;
  for (std::size_t t = 0; t < km; ++t) t_total *= dims.p();
  std::uint64_t iq_total = 1;
  for (std::size_t t = 0; t < slots; ++t) iq_total *= D;

  auto body = [&](std::uint64_t begin, std::uint64_t end) -> BigInt {
    BigInt acc = 0;
    IndexAssignment a;
    a.legs.assign(n - 1, std::vector<std::uint32_t>(slots));
    a.last.assign(slots, 0);
    a.samples.assign(km, 0);
    for (std::uint64_t code = begin; code < end; ++code) {
      std::uint64_t x = code;
      for (std::size_t s = 0; s < slots; ++s) {
        std::uint64_t digit = x % D;
        x /= D;
        for (std::size_t j = n; j-- > 0;) {
          auto v = static_cast<std::uint32_t>(digit % dims.d()[j]);
          digit /= dims.d()[j];
          (j + 1 == n ? a.last[s] : a.legs[j][s]) = v;
        }
      }
      bool ok = detail::invariant(a.last, pairings[n - 1]);
      for (std::size_t j = 0; ok && j + 1 < n; ++j) ok = detail::invariant(a.legs[j], pairings[j]);
      if (!ok) continue;
      for (std::uint64_t tc = 0; tc < t_total; ++tc) {
        std::uint64_t y = tc;
        for (std::size_t s = 0; s < km; ++s) {
          a.samples[s] = static_cast<std::uint32_t>(y % dims.p());
          y /= dims.p();
        }
        WickWord w = build_word(a, dims);
        const auto& from = opt.swap_roles ? w.beta : w.alpha;
        const auto& to = opt.swap_roles ? w.alpha : w.beta;
        std::uint64_t matches = 0;
        for (const auto& sigma : perms) {
          bool match = true;
          for (std::size_t i = 0; match && i < km; ++i) match = to[i] == from[sigma[i]];
          if (match) ++matches;
        }
        acc += matches;
      }
    }
    return acc;
  };
  BigInt total = parallel_reduce(iq_total, BigInt(0), body, [](BigInt a, BigInt b) { return a + b; },
                                 opt.threads);
  return ExactValue(total) / pow_exact(ExactValue(BigInt(D)), static_cast<int>((eps.m() + 1) * k));
}

}  // namespace ptfree::wick
