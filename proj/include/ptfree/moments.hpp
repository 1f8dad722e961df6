#pragma once

// Exact joint moments of partial transposes of a multipartite Wishart matrix
// W = GG*/D, together with their asymptotic (free) limits and the moments of
// the centred sums s = |B|^{-1/2} Σ_{x∈B} (W^x − c·Id).
//
// All finite-size values are exact rationals. The basic formula is
//
//   E[tr(W^{ε₁}⋯W^{ε_m})^k] = Σ_{σ∈S_{km}} (p/D)^{#σ} ∏ⱼ dⱼ^{f_{k,j}(ε,σ)},
//   f_{k,j}(ε,σ) = #(Pⱼ ∨ σΔσ⁻¹) + #σ − k(m+1),
//
// where Pⱼ = EⱼΓΔΓ⁻¹Eⱼ is the pairing of [±km] fixed by column j of ε.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ptfree/combinat.hpp"
#include "ptfree/errors.hpp"
#include "ptfree/exact.hpp"
#include "ptfree/model.hpp"
#include "ptfree/parallel.hpp"

namespace ptfree::moments {

using combinat::EnumerationGuard;
using combinat::Pairing;
using combinat::Perm;
using combinat::SetPartition;
using combinat::SignedPerm;

struct MomentOptions {
  EnumerationGuard guard{};
  /// Upper bound on the number of σ-terms a composite request (centred or
  /// s-moments) may cost, measured the same way as the km guard.
  double max_work = 1e9;
  unsigned threads = default_thread_count();
};

// ---------------------------------------------------------------------------
// The two pairings whose join defines f
// ---------------------------------------------------------------------------

/// EΓΔΓ⁻¹E on [±km] for the given column of ε.
inline Pairing word_pairing(std::span<const std::uint8_t> column, std::size_t k) {
  const std::size_t m = column.size();
  SignedPerm e = combinat::build_eps_perm(column, k);
  SignedPerm g = combinat::build_gamma(k, m);
  const Pairing delta = combinat::build_delta(k, m);
  const SignedPerm& d = delta.perm();
  SignedPerm inner = combinat::compose(combinat::compose(g, d), g.inverse());
  return Pairing(combinat::compose(combinat::compose(e, inner), e));
}

/// σΔσ⁻¹ on [±N], with σ extended by the identity on the negatives.
inline Pairing sigma_pairing(const Perm& sigma) {
  SignedPerm s = combinat::embed_unsigned(sigma);
  const Pairing delta = combinat::build_delta(1, sigma.size());
  const SignedPerm& d = delta.perm();
  return Pairing(combinat::compose(combinat::compose(s, d), s.inverse()));
}

/// f_{k,j}(ε,σ) for σ ∈ S_{km} and 1-based leg index j, computed directly
/// from the combinatorial primitives.
inline int f_exponent(const EpsilonMatrix& eps, const Perm& sigma, std::size_t j, std::size_t k) {
  if (j < 1 || j > eps.n()) throw PreconditionError("f_exponent: leg index out of range");
  if (k < 1) throw PreconditionError("f_exponent: k must be positive");
  if (sigma.size() != k * eps.m()) throw SizeMismatch("f_exponent: σ must act on [km]");
  Row col = eps.column(j - 1);
  auto joins = combinat::join_count(word_pairing(col, k), sigma_pairing(sigma));
  return static_cast<int>(joins) + static_cast<int>(sigma.cycle_count()) -
         static_cast<int>(k * (eps.m() + 1));
}

namespace detail {

/// Word pairings for each distinct column of ε; legs with equal columns share
/// join counts.
struct WordStructure {
  std::size_t m = 0, k = 0, size = 0;
  std::vector<std::vector<int>> class_pairings;
  std::vector<std::size_t> class_of_leg;
};

inline WordStructure make_structure(const EpsilonMatrix& eps, std::size_t k) {
  WordStructure ws;
  ws.m = eps.m();
  ws.k = k;
  ws.size = k * eps.m();
  std::vector<Row> seen;
  for (std::size_t j = 0; j < eps.n(); ++j) {
    Row col = eps.column(j);
    auto it = std::find(seen.begin(), seen.end(), col);
    if (it == seen.end()) {
      ws.class_of_leg.push_back(seen.size());
      ws.class_pairings.push_back(word_pairing(col, k).perm().dense());
      seen.push_back(std::move(col));
    } else {
      ws.class_of_leg.push_back(static_cast<std::size_t>(it - seen.begin()));
    }
  }
  return ws;
}

/// Reusable scratch for the per-σ evaluation.
struct SigmaScratch {
  std::vector<int> inv, q;
  std::vector<std::uint8_t> seen;
  explicit SigmaScratch(std::size_t n) : inv(n), q(2 * n), seen(2 * n) {}
};

inline int cycles_of(const std::vector<int>& sigma, std::vector<std::uint8_t>& seen) {
  const std::size_t n = sigma.size();
  std::fill(seen.begin(), seen.begin() + static_cast<std::ptrdiff_t>(n), 0);
  int count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++count;
    for (int x = static_cast<int>(s); !seen[x]; x = sigma[x]) seen[x] = 1;
  }
  return count;
}

/// Fills scratch.q with the dense form of σΔσ⁻¹: x>0 ↦ −σ⁻¹(x), x<0 ↦ σ(−x).
inline void fill_sigma_pairing(const std::vector<int>& sigma, SigmaScratch& sc) {
  const std::size_t n = sigma.size();
  for (std::size_t i = 0; i < n; ++i) sc.inv[sigma[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < n; ++i) {
    sc.q[i] = static_cast<int>(n) + sc.inv[i];
    sc.q[n + i] = sigma[i];
  }
}

/// #(P ∨ Q) = #(P∘Q)/2 with Q taken from scratch.q.
inline int join_with(const std::vector<int>& p, SigmaScratch& sc) {
  const std::size_t n2 = sc.q.size();
  std::fill(sc.seen.begin(), sc.seen.end(), 0);
  int cycles = 0;
  for (std::size_t s = 0; s < n2; ++s) {
    if (sc.seen[s]) continue;
    ++cycles;
    for (int x = static_cast<int>(s); !sc.seen[x]; x = p[sc.q[x]]) sc.seen[x] = 1;
  }
  return cycles / 2;
}

/// Multiplicities of (#σ, join per column class), summed over a σ range.
using Tally = std::map<std::vector<int>, std::uint64_t>;

inline Tally merge(Tally a, Tally b) {
  if (a.size() < b.size()) std::swap(a, b);
  for (auto& [key, count] : b) a[key] += count;
  return a;
}

template <class Filter>
Tally tally_range(const WordStructure& ws, std::uint64_t begin, std::uint64_t end, Filter&& keep) {
  Tally tally;
  SigmaScratch sc(ws.size);
  std::vector<int> key(1 + ws.class_pairings.size());
  combinat::for_each_permutation_range(ws.size, begin, end, [&](const std::vector<int>& sigma) {
    if (!keep(sigma)) return;
    fill_sigma_pairing(sigma, sc);
    key[0] = cycles_of(sigma, sc.seen);
    for (std::size_t c = 0; c < ws.class_pairings.size(); ++c)
      key[c + 1] = join_with(ws.class_pairings[c], sc);
    auto it = tally.find(key);
    if (it == tally.end())
      tally.emplace(key, 1);
    else
      ++it->second;
  });
  return tally;
}

/// Σ count · (p/D)^{#σ} ∏ⱼ dⱼ^{join + #σ − k(m+1)}.
inline ExactValue evaluate(const WordStructure& ws, const Tally& tally, const DimSpec& dims) {
  const int base = static_cast<int>(ws.k * (ws.m + 1));
  // Product of dⱼ over the legs in each column class.
  std::vector<ExactValue> class_dim(ws.class_pairings.size(), ExactValue(1));
  for (std::size_t j = 0; j < ws.class_of_leg.size(); ++j)
    class_dim[ws.class_of_leg[j]] *= ExactValue(BigInt(dims.d()[j]));
  const ExactValue ratio = dims.ratio();
  ExactValue sum = 0;
  for (const auto& [key, count] : tally) {
    ExactValue term = pow_exact(ratio, key[0]);
    for (std::size_t c = 0; c < class_dim.size(); ++c)
      term *= pow_exact(class_dim[c], key[c + 1] + key[0] - base);
    sum += term * ExactValue(BigInt(count));
  }
  return sum;
}

inline void check_shapes(const EpsilonMatrix& eps, std::size_t k, const DimSpec& dims) {
  if (k < 1) throw PreconditionError("moment power k must be positive");
  if (eps.n() != dims.n())
    throw SizeMismatch("ε has " + std::to_string(eps.n()) + " columns but d has " +
                       std::to_string(dims.n()) + " entries");
}

template <class Filter>
ExactValue moment_sum(const EpsilonMatrix& eps, std::size_t k, const DimSpec& dims,
                      const MomentOptions& opt, Filter keep) {
  check_shapes(eps, k, dims);
  const std::size_t size = k * eps.m();
  opt.guard.check(size, "exact moment over S_" + std::to_string(size));
  WordStructure ws = make_structure(eps, k);
  std::uint64_t total = combinat::factorial(size);
  Tally tally = parallel_reduce(
      total, Tally{},
      [&](std::uint64_t b, std::uint64_t e) { return tally_range(ws, b, e, keep); },
      [](Tally a, Tally b) { return merge(std::move(a), std::move(b)); }, opt.threads,
      total < 5040 ? 1 : 64);
  return evaluate(ws, tally, dims);
}

}  // namespace detail

/// E[X_ε^k] with X_ε = tr(W^{ε₁}⋯W^{ε_m}).
inline ExactValue exact_moment(const EpsilonMatrix& eps, std::size_t k, const DimSpec& dims,
                               const MomentOptions& opt = {}) {
  return detail::moment_sum(eps, k, dims, opt, [](const std::vector<int>&) { return true; });
}

/// One σ-term of the exact-moment sum.
struct TermRecord {
  Perm sigma;
  int cycles = 0;
  std::vector<int> f;  ///< f_{k,j} for j = 1..n
  ExactValue value;
};

/// Visits every term of the exact-moment sum in lexicographic order of σ.
/// Serial; intended for per-term dumps.
template <class Visit>
void for_each_term(const EpsilonMatrix& eps, std::size_t k, const DimSpec& dims, Visit&& visit,
                   const MomentOptions& opt = {}) {
  detail::check_shapes(eps, k, dims);
  const std::size_t size = k * eps.m();
  opt.guard.check(size, "exact moment over S_" + std::to_string(size));
  auto ws = detail::make_structure(eps, k);
  detail::SigmaScratch sc(size);
  const int base = static_cast<int>(k * (eps.m() + 1));
  combinat::for_each_permutation_range(size, 0, combinat::factorial(size), [&](const std::vector<int>& s) {
    TermRecord rec;
    rec.sigma = Perm::from_zero_based(s);
    detail::fill_sigma_pairing(s, sc);
    rec.cycles = detail::cycles_of(s, sc.seen);
    std::vector<int> joins;
    for (const auto& p : ws.class_pairings) joins.push_back(detail::join_with(p, sc));
    rec.value = pow_exact(dims.ratio(), rec.cycles);
    for (std::size_t j = 0; j < eps.n(); ++j) {
      int f = joins[ws.class_of_leg[j]] + rec.cycles - base;
      rec.f.push_back(f);
      rec.value *= pow_exact(ExactValue(BigInt(dims.d()[j])), f);
    }
    visit(static_cast<const TermRecord&>(rec));
  });
}

// ---------------------------------------------------------------------------
// Variance
// ---------------------------------------------------------------------------

struct VarianceReport {
  ExactValue variance;        ///< E(X²) − E(X)²
  ExactValue second_moment;   ///< E(X²)
  ExactValue mean;            ///< E(X)
  ExactValue restricted_sum;  ///< Σ over σ ∈ S_{2m} with σ([m]) ≠ [m]
};

/// Var(X_ε) by two routes: subtraction E(X²) − E(X)², and the sum over the
/// σ ∈ S_{2m} that do not preserve [m]. Throws InternalInconsistency if the
/// two differ.
inline VarianceReport variance_report(const EpsilonMatrix& eps, const DimSpec& dims,
                                      const MomentOptions& opt = {}) {
  VarianceReport r;
  r.mean = exact_moment(eps, 1, dims, opt);
  r.second_moment = exact_moment(eps, 2, dims, opt);
  r.variance = r.second_moment - r.mean * r.mean;
  const int m = static_cast<int>(eps.m());
  r.restricted_sum = detail::moment_sum(eps, 2, dims, opt, [m](const std::vector<int>& s) {
    for (int i = 0; i < m; ++i)
      if (s[i] >= m) return true;
    return false;
  });
  if (r.restricted_sum != r.variance)
    throw InternalInconsistency("variance routes disagree for ε=" + eps.to_string() + " " +
                                dims.to_string() + ": " + to_string(r.variance) + " vs " +
                                to_string(r.restricted_sum));
  return r;
}

inline ExactValue variance_exact(const EpsilonMatrix& eps, const DimSpec& dims,
                                 const MomentOptions& opt = {}) {
  return variance_report(eps, dims, opt).variance;
}

// ---------------------------------------------------------------------------
// Per-σ structure: sign condition (k = 1) and block splitting (k ≥ 2)
// ---------------------------------------------------------------------------

struct SigmaReport {
  Perm sigma;
  std::size_t k = 1;
  std::vector<int> f;  ///< f_{k,j}, j = 1..n

  // k = 1
  std::optional<std::vector<bool>> constant_on_cycles;
  /// Per column: the cycle partition is non-crossing and each cycle runs
  /// increasingly where the column is 0 and decreasingly where it is 1.
  /// Only meaningful where the column is constant on cycles; there it is the
  /// condition under which f vanishes.
  std::optional<std::vector<bool>> noncrossing;
  /// The cycle partition of σ is non-crossing, regardless of cycle order.
  std::optional<bool> partition_noncrossing;

  // k ≥ 2
  std::optional<bool> splits;
  std::vector<int> split_c1, split_c2;  ///< 1-based elements of [km]

  /// The checked statement held for this σ.
  bool consistent = true;
  std::string violation;
};

/// σ with every cycle on which `column` is 1 reversed is a non-crossing
/// permutation. Cycles are assumed to carry a constant bit.
inline bool oriented_noncrossing(const Perm& sigma, const Row& column) {
  std::vector<int> img = sigma.zero_based();
  const Perm inv = sigma.inverse();
  for (std::size_t x = 0; x < img.size(); ++x)
    if (column[x]) img[x] = inv.zero_based()[x];
  return combinat::is_noncrossing_permutation(Perm::from_zero_based(std::move(img)));
}

/// Sign pattern of f_{1,j}: negative unless column j is constant on the
/// cycles of σ; when constant, f ≤ 0 with equality exactly when σ is
/// non-crossing in the orientation set by the column.
inline SigmaReport classify_sigma(const EpsilonMatrix& eps, const Perm& sigma) {
  if (sigma.size() != eps.m()) throw SizeMismatch("classify_sigma: σ must act on [m]");
  SigmaReport r;
  r.sigma = sigma;
  r.k = 1;
  const SetPartition pi = combinat::partition_of(sigma);
  r.partition_noncrossing = combinat::is_noncrossing(pi);
  std::vector<bool> constant, oriented;
  for (std::size_t j = 1; j <= eps.n(); ++j) {
    Row col = eps.column(j - 1);
    bool c = std::all_of(pi.blocks().begin(), pi.blocks().end(), [&](const auto& b) {
      return std::all_of(b.begin(), b.end(), [&](int x) { return col[x - 1] == col[b.front() - 1]; });
    });
    constant.push_back(c);
    const bool nc = c && oriented_noncrossing(sigma, col);
    oriented.push_back(nc);
    int f = f_exponent(eps, sigma, j, 1);
    r.f.push_back(f);
    std::string where = "σ=" + sigma.to_string() + " ε=" + eps.to_string() + " j=" + std::to_string(j) +
                        " f=" + std::to_string(f);
    if (!c && f >= 0) {
      r.consistent = false;
      r.violation = "non-constant column but f >= 0: " + where;
    } else if (c && f > 0) {
      r.consistent = false;
      r.violation = "f > 0: " + where;
    } else if (c && (f == 0) != nc) {
      r.consistent = false;
      r.violation = "f == 0 does not match non-crossing flag: " + where;
    }
  }
  r.constant_on_cycles = std::move(constant);
  r.noncrossing = std::move(oriented);
  return r;
}

/// Restriction c⁻¹σc of σ to an invariant union of blocks C (sorted), as a
/// permutation of [|C|].
inline Perm restrict_to(const Perm& sigma, const std::vector<int>& c) {
  std::vector<int> pos(sigma.size() + 1, -1);
  for (std::size_t i = 0; i < c.size(); ++i) pos[c[i]] = static_cast<int>(i);
  std::vector<int> img(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) img[i] = pos[sigma(c[i])];
  return Perm::from_zero_based(std::move(img));
}

/// Looks for a σ-invariant split [km] = C₁ ⊔ C₂ into unions of the blocks
/// A_i = {(i−1)m+1,…,im}. With a split, checks additivity of f across the two
/// parts; without one, checks f_{k,j} ≤ 2 − 2k for every j.
inline SigmaReport split_check(const Perm& sigma, std::size_t k, const EpsilonMatrix& eps) {
  if (k < 2) throw PreconditionError("split_check needs k >= 2");
  const std::size_t m = eps.m();
  if (sigma.size() != k * m) throw SizeMismatch("split_check: σ must act on [km]");
  SigmaReport r;
  r.sigma = sigma;
  r.k = k;
  for (std::size_t j = 1; j <= eps.n(); ++j) r.f.push_back(f_exponent(eps, sigma, j, k));

  combinat::detail::UnionFind uf(k);
  for (std::size_t x = 1; x <= k * m; ++x)
    uf.unite(static_cast<int>((x - 1) / m), static_cast<int>((sigma(static_cast<int>(x)) - 1) / m));
  const int root = uf.find(0);
  for (std::size_t x = 1; x <= k * m; ++x)
    (uf.find(static_cast<int>((x - 1) / m)) == root ? r.split_c1 : r.split_c2).push_back(static_cast<int>(x));
  r.splits = !r.split_c2.empty();

  if (*r.splits) {
    const std::size_t k1 = r.split_c1.size() / m, k2 = r.split_c2.size() / m;
    Perm s1 = restrict_to(sigma, r.split_c1), s2 = restrict_to(sigma, r.split_c2);
    for (std::size_t j = 1; j <= eps.n(); ++j) {
      int sum = f_exponent(eps, s1, j, k1) + f_exponent(eps, s2, j, k2);
      if (sum != r.f[j - 1]) {
        r.consistent = false;
        r.violation = "additivity fails: σ=" + sigma.to_string() + " ε=" + eps.to_string() +
                      " j=" + std::to_string(j) + " f=" + std::to_string(r.f[j - 1]) +
                      " parts sum=" + std::to_string(sum);
      }
    }
  } else {
    const int bound = 2 - 2 * static_cast<int>(k);
    for (std::size_t j = 1; j <= eps.n(); ++j) {
      if (r.f[j - 1] > bound) {
        r.consistent = false;
        r.violation = "bound fails: σ=" + sigma.to_string() + " ε=" + eps.to_string() +
                      " j=" + std::to_string(j) + " f=" + std::to_string(r.f[j - 1]) +
                      " > " + std::to_string(bound);
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Asymptotic limits
// ---------------------------------------------------------------------------

/// lim E tr(W^{ε₁}⋯W^{ε_m}) as all dⱼ → ∞ with p/D → c: the sum of c^{#π}
/// over non-crossing π that only join equal rows and whose blocks of size
/// ≥ 3 carry a constant row (all 0 or all 1). So the free cumulants of W^x
/// are κ₁ = κ₂ = c, and κ_l = c for l ≥ 3 only when x is constant; mixed
/// cumulants vanish.
inline ExactValue limit_mixed_moment(const std::vector<Row>& word, const ExactValue& c,
                                     const EnumerationGuard& guard = {}) {
  if (word.empty()) return ExactValue(1);
  const SetPartition kernel = combinat::ker(word);
  auto constant = [](const Row& r) { return std::all_of(r.begin(), r.end(), [&](auto b) { return b == r.front(); }); };
  ExactValue sum = 0;
  for (const auto& pi : combinat::nc_partitions(word.size(), guard)) {
    if (!combinat::partition_leq(pi, kernel)) continue;
    bool ok = std::all_of(pi.blocks().begin(), pi.blocks().end(),
                          [&](const auto& b) { return b.size() < 3 || constant(word[b.front() - 1]); });
    if (ok) sum += pow_exact(c, static_cast<int>(pi.block_count()));
  }
  return sum;
}

inline ExactValue limit_mixed_moment(const EpsilonMatrix& word, const ExactValue& c,
                                     const EnumerationGuard& guard = {}) {
  return limit_mixed_moment(word.rows(), c, guard);
}

/// Catalan(r) = C(2r, r)/(r+1).
inline BigInt catalan(std::size_t r) {
  BigInt num = 1, den = 1;
  for (std::size_t i = 1; i <= r; ++i) {
    num *= BigInt(r + i);
    den *= BigInt(i);
  }
  return num / den / BigInt(r + 1);
}

/// Moments of the semicircular element of mean 0 and variance c:
/// 0 for odd m, c^{m/2}·Catalan(m/2) for even m.
inline ExactValue clt_limit_moment(std::size_t m, const ExactValue& c) {
  if (m % 2 != 0) return 0;
  return pow_exact(c, static_cast<int>(m / 2)) * ExactValue(catalan(m / 2));
}

// ---------------------------------------------------------------------------
// Centred moments
// ---------------------------------------------------------------------------

namespace detail {

/// Σ_{E⊆[m]} (−c)^{m−|E|} · moment(word|_E), with moment(∅) = 1.
template <class MomentOf>
ExactValue inclusion_exclusion(std::size_t m, const ExactValue& c, MomentOf&& moment_of) {
  ExactValue sum = 0;
  const ExactValue neg_c = -c;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<std::size_t> positions;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1u) positions.push_back(i);
    ExactValue coeff = pow_exact(neg_c, static_cast<int>(m - positions.size()));
    if (coeff == 0) continue;
    sum += coeff * moment_of(positions);
  }
  return sum;
}

}  // namespace detail

/// (E⊗tr)(a_{ε₁}⋯a_{ε_m}) with a_ε = W^ε − c·Id.
inline ExactValue centered_exact_moment(const std::vector<Row>& word, const DimSpec& dims,
                                        const ExactValue& c, const MomentOptions& opt = {}) {
  if (word.empty()) return 1;
  EpsilonMatrix full(word);
  return detail::inclusion_exclusion(word.size(), c, [&](const std::vector<std::size_t>& pos) {
    if (pos.empty()) return ExactValue(1);
    return exact_moment(full.select_rows(pos), 1, dims, opt);
  });
}

/// The same expansion evaluated with the limit moments: lim (E⊗tr)(a_{ε₁}⋯a_{ε_m}).
inline ExactValue limit_centered_moment(const std::vector<Row>& word, const ExactValue& c,
                                        const EnumerationGuard& guard = {}) {
  return detail::inclusion_exclusion(word.size(), c, [&](const std::vector<std::size_t>& pos) {
    std::vector<Row> sub;
    for (auto p : pos) sub.push_back(word[p]);
    return limit_mixed_moment(sub, c, guard);
  });
}

/// coefficient / √radicand. Exact representation of |B|^{-m/2}·(rational).
struct ScaledExact {
  ExactValue coefficient;
  std::uint64_t radicand = 1;

  double to_double() const {
    return ptfree::to_double(coefficient) / std::sqrt(static_cast<double>(radicand));
  }
  std::string to_string() const {
    std::string s = ptfree::to_string(coefficient);
    return radicand == 1 ? s : "(" + s + ")/sqrt(" + std::to_string(radicand) + ")";
  }
};

inline double s_moment_cost(std::size_t b, std::size_t m) {
  double fact_sum = 0, f = 1;
  for (std::size_t l = 0; l <= m; ++l) {
    if (l > 0) f *= static_cast<double>(l);
    fact_sum += f;
  }
  return std::pow(static_cast<double>(b), static_cast<double>(m)) * std::pow(2.0, static_cast<double>(m)) *
         fact_sum;
}

struct SMomentReport {
  ScaledExact value;
  ExactValue word_sum;  ///< Σ_{x:[m]→B} centred moment of x
};

/// (E⊗tr)(s^m) for s = |B|^{-1/2} Σ_{x∈B} (W^x − c·Id), expanded over all
/// words x : [m] → B.
inline SMomentReport exact_s_moment_report(const std::vector<Row>& B, std::size_t m, const DimSpec& dims,
                                           const ExactValue& c, const MomentOptions& opt = {}) {
  if (B.empty()) throw PreconditionError("s-moment: B must be non-empty");
  for (std::size_t a = 0; a < B.size(); ++a) {
    if (B[a].size() != dims.n()) throw SizeMismatch("s-moment: rows of B must have length n");
    for (std::size_t b = a + 1; b < B.size(); ++b)
      if (B[a] == B[b]) throw PreconditionError("s-moment: rows of B must be distinct");
  }
  opt.guard.check(m, "s-moment word length");
  double cost = s_moment_cost(B.size(), m);
  if (cost > opt.max_work)
    throw GuardExceeded("s-moment: estimated cost " + std::to_string(cost) + " exceeds " +
                            std::to_string(opt.max_work),
                        cost, opt.max_work);

  const std::uint64_t nb = B.size();
  // Exact moments of every word of length ≤ m over B, indexed by
  // offset[len] + base-|B| code.
  std::vector<std::uint64_t> offset(m + 2, 0);
  for (std::size_t l = 0; l <= m; ++l) {
    std::uint64_t count = 1;
    for (std::size_t t = 0; t < l; ++t) count *= nb;
    offset[l + 1] = offset[l] + count;
  }
  std::vector<ExactValue> table(offset[m + 1]);
  table[0] = 1;
  MomentOptions inner = opt;
  inner.threads = 1;
  for (std::size_t l = 1; l <= m; ++l) {
    const std::uint64_t count = offset[l + 1] - offset[l];
    auto part = parallel_reduce(
        count, std::vector<std::pair<std::uint64_t, ExactValue>>{},
        [&](std::uint64_t b, std::uint64_t e) {
          std::vector<std::pair<std::uint64_t, ExactValue>> out;
          for (std::uint64_t code = b; code < e; ++code) {
            std::vector<Row> w(l);
            std::uint64_t x = code;
            for (std::size_t t = l; t-- > 0;) {
              w[t] = B[x % nb];
              x /= nb;
            }
            out.emplace_back(code, exact_moment(EpsilonMatrix(w), 1, dims, inner));
          }
          return out;
        },
        [](auto a, auto b) {
          a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
          return a;
        },
        opt.threads);
    for (auto& [code, v] : part) table[offset[l] + code] = std::move(v);
  }

  std::uint64_t words = 1;
  for (std::size_t t = 0; t < m; ++t) words *= nb;
  ExactValue word_sum = parallel_reduce(
      words, ExactValue(0),
      [&](std::uint64_t b, std::uint64_t e) {
        ExactValue acc = 0;
        std::vector<std::uint64_t> letters(m);
        for (std::uint64_t code = b; code < e; ++code) {
          std::uint64_t x = code;
          for (std::size_t t = m; t-- > 0;) {
            letters[t] = x % nb;
            x /= nb;
          }
          acc += detail::inclusion_exclusion(m, c, [&](const std::vector<std::size_t>& pos) {
            std::uint64_t sub = 0;
            for (auto p : pos) sub = sub * nb + letters[p];
            return table[offset[pos.size()] + sub];
          });
        }
        return acc;
      },
      [](ExactValue a, ExactValue b) { return a + b; }, opt.threads);

  SMomentReport rep;
  rep.word_sum = word_sum;
  ExactValue scale = pow_exact(ExactValue(BigInt(nb)), -static_cast<int>(m / 2));
  rep.value.coefficient = word_sum * scale;
  if (m % 2 == 1) {
    auto root = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(nb))));
    if (root * root == nb)
      rep.value.coefficient /= ExactValue(BigInt(root));
    else
      rep.value.radicand = nb;
  }
  return rep;
}

inline ScaledExact exact_s_moment(const std::vector<Row>& B, std::size_t m, const DimSpec& dims,
                                  const ExactValue& c, const MomentOptions& opt = {}) {
  return exact_s_moment_report(B, m, dims, c, opt).value;
}

/// First K rows of {0,1}ⁿ in lexicographic order.
inline std::vector<Row> lex_subset(std::size_t n, std::uint64_t count) {
  if (n < 64 && count > (std::uint64_t{1} << n))
    throw PreconditionError("lex subset larger than {0,1}^n");
  std::vector<Row> out;
  for (std::uint64_t v = 0; v < count; ++v) {
    Row r(n);
    for (std::size_t j = 0; j < n; ++j) r[j] = static_cast<std::uint8_t>(v >> (n - 1 - j) & 1u);
    out.push_back(std::move(r));
  }
  return out;
}

/// Warnings for CLT-style requests outside the regime μ(d) ≥ 2.
inline std::vector<std::string> clt_warnings(const DimSpec& dims) {
  std::vector<std::string> w;
  if (dims.mu() < 2) w.push_back("min_j d_j < 2: outside the CLT regime (mu(d) >= 2)");
  return w;
}

// ---------------------------------------------------------------------------
// Cycle-count identities used for the CLT, and the kernel-invariance bound
// ---------------------------------------------------------------------------

enum class TechnicalVariant { fixed_point, transposition };

struct TechnicalSides {
  std::size_t lhs = 0;  ///< #(EΓΔΓ⁻¹E ∨ τΔτ⁻¹) on [±l]
  std::size_t rhs = 0;  ///< the same on [±(l+1)] or [±(l+2)] for τ₁ or τ₂
  bool holds = false;
};

/// Compares the join counts for τ ∈ S_l with those for τ₁ = τ∘(l+1) or
/// τ₂ = τ∘(l+1, l+2). `column` is the extended column (length l+1 or l+2);
/// its first l entries define E on [±l]. The transposition variant requires
/// the last two bits to agree and expects the count to grow by exactly 1.
inline TechnicalSides technical_identity_sides(const Perm& tau, const Row& column, TechnicalVariant variant) {
  const std::size_t l = tau.size();
  if (l < 1) throw PreconditionError("technical identity needs l >= 1");
  const std::size_t extra = variant == TechnicalVariant::fixed_point ? 1 : 2;
  if (column.size() != l + extra) throw SizeMismatch("technical identity: column length must be l+" + std::to_string(extra));
  if (variant == TechnicalVariant::transposition && column[l] != column[l + 1])
    throw PreconditionError("transposition variant requires equal signs on l+1 and l+2");

  Row base(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(l));
  TechnicalSides s;
  s.lhs = combinat::join_count(word_pairing(base, 1), sigma_pairing(tau));
  std::vector<int> img = tau.zero_based();
  img.push_back(static_cast<int>(l));
  if (extra == 2) img.push_back(static_cast<int>(l + 1));
  Perm ext = Perm::from_zero_based(std::move(img));
  if (extra == 2) ext = combinat::compose(ext, Perm::from_cycles(l + 2, {{static_cast<int>(l + 1), static_cast<int>(l + 2)}}));
  s.rhs = combinat::join_count(word_pairing(column, 1), sigma_pairing(ext));
  s.holds = s.rhs == s.lhs + (extra - 1);
  return s;
}

inline bool technical_identity_check(const Perm& tau, const Row& column, TechnicalVariant variant) {
  return technical_identity_sides(tau, column, variant).holds;
}

/// (2^{m+1}·m!·(1+c)^m / μ(d)) · Σ_{s=0}^{m} (p/D)^s.
inline ExactValue kernel_invariance_bound(std::size_t m, const DimSpec& dims, const ExactValue& c) {
  ExactValue ratio_sum = 0;
  for (std::size_t s = 0; s <= m; ++s) ratio_sum += pow_exact(dims.ratio(), static_cast<int>(s));
  ExactValue lead = pow_exact(ExactValue(2), static_cast<int>(m + 1)) *
                    ExactValue(BigInt(combinat::factorial(m))) * pow_exact(1 + c, static_cast<int>(m)) /
                    ExactValue(BigInt(dims.mu()));
  return lead * ratio_sum;
}

/// |centred(word) − centred(word′)| for two words with the same kernel.
inline ExactValue kernel_invariance_gap(const std::vector<Row>& word, const std::vector<Row>& word2,
                                        const DimSpec& dims, const ExactValue& c,
                                        const MomentOptions& opt = {}) {
  if (word.size() != word2.size() || !(combinat::ker(word) == combinat::ker(word2)))
    throw PreconditionError("kernel_invariance_gap: words have different kernels");
  return abs_exact(centered_exact_moment(word, dims, c, opt) - centered_exact_moment(word2, dims, c, opt));
}

}  // namespace ptfree::moments
