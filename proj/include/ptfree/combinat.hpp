#pragma once

// Permutations of [N] and of the signed set [±N], pairings, and set
// partitions. Signed elements are 1-based nonzero integers; internally the
// dense index of v is v-1 for v>0 and N+|v|-1 for v<0.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ptfree/errors.hpp"

namespace ptfree::combinat {

/// Default bound on permutation sizes that may be enumerated exhaustively.
struct EnumerationGuard {
  std::size_t max_perm_size = 10;

  void check(std::size_t size, const std::string& what) const {
    if (size > max_perm_size) {
      double cost = std::tgamma(static_cast<double>(size) + 1.0);
      double limit = std::tgamma(static_cast<double>(max_perm_size) + 1.0);
      std::ostringstream msg;
      msg << what << ": size " << size << " exceeds guard " << max_perm_size << " (~" << std::setprecision(3) << cost
          << " permutations)";
      throw GuardExceeded(msg.str(), cost, limit);
    }
  }
};

// ---------------------------------------------------------------------------
// Perm: permutation of [N]
// ---------------------------------------------------------------------------

class Perm {
 public:
  Perm() = default;

  static Perm identity(std::size_t n) {
    Perm p;
    p.image_.resize(n);
    std::iota(p.image_.begin(), p.image_.end(), 0);
    return p;
  }

  /// One-line notation, 1-based: images[i-1] = σ(i).
  static Perm from_one_line(std::span<const int> images) {
    Perm p;
    p.image_.reserve(images.size());
    for (int v : images) p.image_.push_back(v - 1);
    p.validate();
    return p;
  }
  static Perm from_one_line(std::initializer_list<int> images) {
    return from_one_line(std::span<const int>(images.begin(), images.size()));
  }

  /// Product of the given 1-based cycles; unlisted points are fixed.
  static Perm from_cycles(std::size_t n, const std::vector<std::vector<int>>& cycles) {
    Perm p = identity(n);
    std::vector<bool> seen(n, false);
    for (const auto& cyc : cycles) {
      for (std::size_t i = 0; i < cyc.size(); ++i) {
        int a = cyc[i];
        int b = cyc[(i + 1) % cyc.size()];
        if (a < 1 || b < 1 || static_cast<std::size_t>(a) > n || static_cast<std::size_t>(b) > n)
          throw PreconditionError("cycle entry out of range");
        if (seen[a - 1]) throw PreconditionError("cycles are not disjoint");
        seen[a - 1] = true;
        p.image_[a - 1] = b - 1;
      }
    }
    return p;
  }

  /// Zero-based image array, used by the enumeration code.
  static Perm from_zero_based(std::vector<int> image) {
    Perm p;
    p.image_ = std::move(image);
    return p;
  }

  std::size_t size() const noexcept { return image_.size(); }
  int operator()(int x) const { return image_[x - 1] + 1; }
  const std::vector<int>& zero_based() const noexcept { return image_; }

  Perm inverse() const {
    Perm q;
    q.image_.resize(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) q.image_[image_[i]] = static_cast<int>(i);
    return q;
  }

  /// Cycles in 1-based form, each starting at its smallest element, ordered
  /// by that element.
  std::vector<std::vector<int>> cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(image_.size(), false);
    for (std::size_t s = 0; s < image_.size(); ++s) {
      if (seen[s]) continue;
      std::vector<int> cyc;
      for (int x = static_cast<int>(s); !seen[x]; x = image_[x]) {
        seen[x] = true;
        cyc.push_back(x + 1);
      }
      out.push_back(std::move(cyc));
    }
    return out;
  }

  std::size_t cycle_count() const { return cycles().size(); }

  std::string to_string() const {
    std::ostringstream os;
    bool any = false;
    for (const auto& c : cycles()) {
      if (c.size() < 2) continue;
      any = true;
      os << '(';
      for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i];
      os << ')';
    }
    return any ? os.str() : "()";
  }

  friend bool operator==(const Perm&, const Perm&) = default;

 private:
  void validate() const {
    std::vector<bool> seen(image_.size(), false);
    for (int v : image_) {
      if (v < 0 || static_cast<std::size_t>(v) >= image_.size() || seen[v])
        throw PreconditionError("not a permutation");
      seen[v] = true;
    }
  }

  std::vector<int> image_;
};

/// p∘q on [N] (q applied first).
inline Perm compose(const Perm& p, const Perm& q) {
  if (p.size() != q.size()) throw SizeMismatch("compose: permutation sizes differ");
  std::vector<int> image(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) image[i] = p.zero_based()[q.zero_based()[i]];
  return Perm::from_zero_based(std::move(image));
}

inline std::size_t cycle_count(const Perm& p) { return p.cycle_count(); }

// ---------------------------------------------------------------------------
// SignedPerm: permutation of [±N]
// ---------------------------------------------------------------------------

class SignedPerm {
 public:
  SignedPerm() = default;

  static std::size_t index(std::size_t n, int v) {
    return v > 0 ? static_cast<std::size_t>(v - 1) : n + static_cast<std::size_t>(-v) - 1;
  }
  static int value(std::size_t n, std::size_t idx) {
    return idx < n ? static_cast<int>(idx) + 1 : -static_cast<int>(idx - n) - 1;
  }

  static SignedPerm identity(std::size_t n) {
    SignedPerm p;
    p.n_ = n;
    p.image_.resize(2 * n);
    std::iota(p.image_.begin(), p.image_.end(), 0);
    return p;
  }

  /// Builds the permutation x ↦ f(x) on [±N]; throws unless f is a bijection.
  template <class F>
  static SignedPerm from_function(std::size_t n, F f) {
    SignedPerm p;
    p.n_ = n;
    p.image_.resize(2 * n);
    std::vector<bool> hit(2 * n, false);
    for (std::size_t i = 0; i < 2 * n; ++i) {
      int y = f(value(n, i));
      if (y == 0 || static_cast<std::size_t>(y < 0 ? -y : y) > n)
        throw PreconditionError("signed permutation image out of range");
      std::size_t j = index(n, y);
      if (hit[j]) throw PreconditionError("signed map is not a bijection");
      hit[j] = true;
      p.image_[i] = static_cast<int>(j);
    }
    return p;
  }

  /// Product of disjoint signed cycles such as {{1,-2},{2,-1}}.
  static SignedPerm from_cycles(std::size_t n, const std::vector<std::vector<int>>& cycles) {
    SignedPerm p = identity(n);
    std::vector<bool> seen(2 * n, false);
    for (const auto& cyc : cycles) {
      for (std::size_t i = 0; i < cyc.size(); ++i) {
        int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
        auto in_range = [n](int v) { return v != 0 && static_cast<std::size_t>(v < 0 ? -v : v) <= n; };
        if (!in_range(a) || !in_range(b)) throw PreconditionError("cycle entry out of range");
        std::size_t ia = index(n, a);
        if (seen[ia]) throw PreconditionError("cycles are not disjoint");
        seen[ia] = true;
        p.image_[ia] = static_cast<int>(index(n, b));
      }
    }
    return p;
  }

  static SignedPerm from_dense(std::size_t n, std::vector<int> image) {
    SignedPerm p;
    p.n_ = n;
    p.image_ = std::move(image);
    return p;
  }

  std::size_t size() const noexcept { return n_; }
  int operator()(int v) const { return value(n_, image_[index(n_, v)]); }
  const std::vector<int>& dense() const noexcept { return image_; }

  SignedPerm inverse() const {
    std::vector<int> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = static_cast<int>(i);
    return from_dense(n_, std::move(inv));
  }

  std::size_t cycle_count() const {
    std::vector<bool> seen(image_.size(), false);
    std::size_t count = 0;
    for (std::size_t s = 0; s < image_.size(); ++s) {
      if (seen[s]) continue;
      ++count;
      for (int x = static_cast<int>(s); !seen[x]; x = image_[x]) seen[x] = true;
    }
    return count;
  }

  bool is_involution() const {
    for (std::size_t i = 0; i < image_.size(); ++i)
      if (static_cast<std::size_t>(image_[image_[i]]) != i) return false;
    return true;
  }

  bool has_fixed_point() const {
    for (std::size_t i = 0; i < image_.size(); ++i)
      if (static_cast<std::size_t>(image_[i]) == i) return true;
    return false;
  }

  /// Cycle notation with fixed points omitted, e.g. `(1 -2)(2 -1)`; the
  /// identity renders as `()`. Cycles start at their first element in the
  /// order 1..N, -1..-N.
  std::string to_string() const {
    std::ostringstream os;
    std::vector<bool> seen(image_.size(), false);
    bool any = false;
    for (std::size_t s = 0; s < image_.size(); ++s) {
      if (seen[s]) continue;
      if (static_cast<std::size_t>(image_[s]) == s) {
        seen[s] = true;
        continue;
      }
      any = true;
      os << '(';
      bool first = true;
      for (int x = static_cast<int>(s); !seen[x]; x = image_[x]) {
        seen[x] = true;
        os << (first ? "" : " ") << value(n_, static_cast<std::size_t>(x));
        first = false;
      }
      os << ')';
    }
    return any ? os.str() : "()";
  }

  friend bool operator==(const SignedPerm&, const SignedPerm&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<int> image_;
};

/// (p∘q)(x) = p(q(x)).
inline SignedPerm compose(const SignedPerm& p, const SignedPerm& q) {
  if (p.size() != q.size()) throw SizeMismatch("compose: signed permutation sizes differ");
  std::vector<int> image(2 * p.size());
  for (std::size_t i = 0; i < image.size(); ++i) image[i] = p.dense()[q.dense()[i]];
  return SignedPerm::from_dense(p.size(), std::move(image));
}

inline SignedPerm inverse(const SignedPerm& p) { return p.inverse(); }
inline std::size_t cycle_count(const SignedPerm& p) { return p.cycle_count(); }

/// A fixed-point-free involution of [±N].
class Pairing {
 public:
  explicit Pairing(SignedPerm perm) : perm_(std::move(perm)) {
    if (!perm_.is_involution() || perm_.has_fixed_point())
      throw PreconditionError("not a pairing: " + perm_.to_string());
  }

  const SignedPerm& perm() const noexcept { return perm_; }
  std::size_t size() const noexcept { return perm_.size(); }
  int operator()(int v) const { return perm_(v); }
  std::string to_string() const { return perm_.to_string(); }

  friend bool operator==(const Pairing&, const Pairing&) = default;

 private:
  SignedPerm perm_;
};

// ---------------------------------------------------------------------------
// The three structural permutations on [±km] ≅ [k]×[±m]
// ---------------------------------------------------------------------------

/// x ↦ −x on [±km].
inline Pairing build_delta(std::size_t k, std::size_t m) {
  return Pairing(SignedPerm::from_function(k * m, [](int x) { return -x; }));
}

/// (1,…,m)(m+1,…,2m)⋯ on the positive half, identity on the negatives.
inline SignedPerm build_gamma(std::size_t k, std::size_t m) {
  const int mm = static_cast<int>(m);
  return SignedPerm::from_function(k * m, [mm](int x) {
    if (x < 0) return x;
    int block = (x - 1) / mm;
    int offset = (x - 1) % mm;
    return block * mm + (offset + 1) % mm + 1;
  });
}

/// Sign flip on the positions where `column` is 1, replicated on each of the
/// k blocks. x lives in block ⌈|x|/m⌉ at offset ((|x|−1) mod m)+1.
inline SignedPerm build_eps_perm(std::span<const std::uint8_t> column, std::size_t k) {
  const std::size_t m = column.size();
  if (m == 0) throw PreconditionError("build_eps_perm: empty column");
  return SignedPerm::from_function(k * m, [&](int x) {
    std::size_t a = static_cast<std::size_t>(x < 0 ? -x : x);
    return column[(a - 1) % m] ? -x : x;
  });
}

/// σ on the positives, identity on the negatives.
inline SignedPerm embed_unsigned(const Perm& sigma) {
  const std::size_t n = sigma.size();
  return SignedPerm::from_function(n, [&](int x) { return x > 0 ? sigma(x) : x; });
}

/// Number of blocks of the join of two pair partitions, computed as half the
/// cycle count of their composition.
inline std::size_t join_count(const Pairing& p1, const Pairing& p2) {
  if (p1.size() != p2.size()) throw SizeMismatch("join_count: pairing sizes differ");
  std::size_t cycles = compose(p1.perm(), p2.perm()).cycle_count();
  if (cycles % 2 != 0)
    throw InternalInconsistency("odd cycle count for a product of two pairings");
  return cycles / 2;
}

// ---------------------------------------------------------------------------
// SetPartition
// ---------------------------------------------------------------------------

/// Partition of [N] (or of [±N] when `signed_domain`). Blocks are kept sorted
/// internally and ordered by their minimum element, so equality is
/// structural.
class SetPartition {
 public:
  SetPartition() = default;

  SetPartition(std::size_t ground_size, std::vector<std::vector<int>> blocks,
               bool signed_domain = false)
      : n_(ground_size), signed_(signed_domain), blocks_(std::move(blocks)) {
    canonicalize();
    validate();
  }

  std::size_t ground_size() const noexcept { return n_; }
  bool signed_domain() const noexcept { return signed_; }
  const std::vector<std::vector<int>>& blocks() const noexcept { return blocks_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }

  bool is_pairing() const {
    return std::all_of(blocks_.begin(), blocks_.end(), [](const auto& b) { return b.size() == 2; });
  }
  bool has_singleton() const {
    return std::any_of(blocks_.begin(), blocks_.end(), [](const auto& b) { return b.size() == 1; });
  }

  /// Block label of each element of [N] (unsigned domain only), 0-based.
  std::vector<int> labels() const {
    std::vector<int> out(n_, -1);
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (int x : blocks_[b]) out[x - 1] = static_cast<int>(b);
    return out;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      os << (b ? "," : "") << '{';
      for (std::size_t i = 0; i < blocks_[b].size(); ++i) os << (i ? "," : "") << blocks_[b][i];
      os << '}';
    }
    os << '}';
    return os.str();
  }

  friend bool operator==(const SetPartition&, const SetPartition&) = default;

 private:
  void canonicalize() {
    for (auto& b : blocks_) std::sort(b.begin(), b.end());
    std::sort(blocks_.begin(), blocks_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
  }

  void validate() const {
    std::vector<bool> seen(signed_ ? 2 * n_ : n_, false);
    std::size_t total = 0;
    for (const auto& b : blocks_) {
      if (b.empty()) throw PreconditionError("partition has an empty block");
      for (int x : b) {
        std::size_t a = static_cast<std::size_t>(x < 0 ? -x : x);
        if (x == 0 || a > n_ || (!signed_ && x < 0))
          throw PreconditionError("partition element out of range");
        std::size_t i = signed_ ? SignedPerm::index(n_, x) : a - 1;
        if (seen[i]) throw PreconditionError("partition blocks overlap");
        seen[i] = true;
        ++total;
      }
    }
    if (total != seen.size()) throw PreconditionError("partition does not cover the ground set");
  }

  std::size_t n_ = 0;
  bool signed_ = false;
  std::vector<std::vector<int>> blocks_;
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace detail

/// Orbits of the group generated by `generators` acting on [±N].
inline SetPartition orbit_partition(const std::vector<SignedPerm>& generators) {
  if (generators.empty()) throw PreconditionError("orbit_partition: no generators");
  const std::size_t n = generators.front().size();
  detail::UnionFind uf(2 * n);
  for (const auto& g : generators) {
    if (g.size() != n) throw SizeMismatch("orbit_partition: generator sizes differ");
    for (std::size_t i = 0; i < 2 * n; ++i) uf.unite(static_cast<int>(i), g.dense()[i]);
  }
  std::vector<std::vector<int>> blocks;
  std::vector<int> slot(2 * n, -1);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    int r = uf.find(static_cast<int>(i));
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[r]].push_back(SignedPerm::value(n, i));
  }
  return SetPartition(n, std::move(blocks), true);
}

/// Cycles of σ as a partition of [m].
inline SetPartition partition_of(const Perm& sigma) {
  return SetPartition(sigma.size(), sigma.cycles());
}

inline bool is_noncrossing(const SetPartition& pi) {
  if (pi.signed_domain()) throw PreconditionError("is_noncrossing: unsigned partitions only");
  auto lab = pi.labels();
  const std::size_t n = lab.size();
  // a<b<c<d with lab[a]==lab[c] != lab[b]==lab[d]
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      if (lab[b] == lab[a]) continue;
      for (std::size_t c = b + 1; c < n; ++c) {
        if (lab[c] != lab[a]) continue;
        for (std::size_t d = c + 1; d < n; ++d)
          if (lab[d] == lab[b]) return false;
      }
    }
  return true;
}

/// Fibers of x : [m] → labels.
template <class T>
SetPartition ker(std::span<const T> x) {
  std::vector<std::vector<int>> blocks;
  std::vector<T> keys;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto it = std::find(keys.begin(), keys.end(), x[i]);
    if (it == keys.end()) {
      keys.push_back(x[i]);
      blocks.push_back({static_cast<int>(i) + 1});
    } else {
      blocks[it - keys.begin()].push_back(static_cast<int>(i) + 1);
    }
  }
  return SetPartition(x.size(), std::move(blocks));
}
template <class T>
SetPartition ker(const std::vector<T>& x) {
  return ker(std::span<const T>(x.data(), x.size()));
}

/// True iff π refines ρ.
inline bool partition_leq(const SetPartition& pi, const SetPartition& rho) {
  if (pi.ground_size() != rho.ground_size() || pi.signed_domain() != rho.signed_domain())
    throw SizeMismatch("partition_leq: ground sets differ");
  if (pi.signed_domain()) throw PreconditionError("partition_leq: unsigned partitions only");
  auto lab = rho.labels();
  for (const auto& b : pi.blocks())
    for (int x : b)
      if (lab[x - 1] != lab[b.front() - 1]) return false;
  return true;
}

/// The permutation that cycles each block of π in increasing order.
inline Perm canonical_permutation(const SetPartition& pi) {
  return Perm::from_cycles(pi.ground_size(), pi.blocks());
}

/// σ is a non-crossing permutation: its cycle partition is non-crossing and
/// every cycle runs in increasing cyclic order. These are exactly the σ with
/// #(σ) + #(σ⁻¹γ) = m + 1 for γ = (1,…,m).
inline bool is_noncrossing_permutation(const Perm& sigma) {
  SetPartition pi = partition_of(sigma);
  return is_noncrossing(pi) && canonical_permutation(pi) == sigma;
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

inline std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

/// The permutation of rank `rank` in lexicographic one-line order.
inline std::vector<int> unrank_permutation(std::size_t n, std::uint64_t rank) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> out;
  out.reserve(n);
  for (std::size_t i = n; i >= 1; --i) {
    std::uint64_t f = factorial(i - 1);
    std::size_t idx = static_cast<std::size_t>(rank / f);
    rank %= f;
    out.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return out;
}

/// Visits permutations of [n] with ranks in [begin, end) in lexicographic
/// order, passing the zero-based one-line image.
template <class F>
void for_each_permutation_range(std::size_t n, std::uint64_t begin, std::uint64_t end, F&& visit) {
  if (begin >= end) return;
  std::vector<int> cur = unrank_permutation(n, begin);
  for (std::uint64_t r = begin; r < end; ++r) {
    visit(static_cast<const std::vector<int>&>(cur));
    std::next_permutation(cur.begin(), cur.end());
  }
}

template <class F>
void for_each_permutation(std::size_t n, F&& visit,
                          const EnumerationGuard& guard = EnumerationGuard{}) {
  guard.check(n, "permutations");
  for_each_permutation_range(n, 0, factorial(n), std::forward<F>(visit));
}

inline std::vector<Perm> permutations(std::size_t n, const EnumerationGuard& guard = EnumerationGuard{}) {
  std::vector<Perm> out;
  for_each_permutation(n, [&](const std::vector<int>& img) { out.push_back(Perm::from_zero_based(img)); }, guard);
  return out;
}

/// All set partitions of [m], in restricted-growth-string order.
inline std::vector<SetPartition> set_partitions(std::size_t m,
                                                const EnumerationGuard& guard = EnumerationGuard{}) {
  guard.check(m, "set_partitions");
  std::vector<SetPartition> out;
  if (m == 0) {
    out.emplace_back(0, std::vector<std::vector<int>>{});
    return out;
  }
  std::vector<int> rgs(m, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int max_label) {
    if (i == m) {
      std::vector<std::vector<int>> blocks(static_cast<std::size_t>(max_label) + 1);
      for (std::size_t t = 0; t < m; ++t) blocks[rgs[t]].push_back(static_cast<int>(t) + 1);
      out.emplace_back(m, std::move(blocks));
      return;
    }
    for (int l = 0; l <= max_label + 1; ++l) {
      rgs[i] = l;
      rec(i + 1, std::max(max_label, l));
    }
  };
  rgs[0] = 0;
  rec(1, 0);
  return out;
}

inline std::vector<SetPartition> nc_partitions(std::size_t m,
                                               const EnumerationGuard& guard = EnumerationGuard{}) {
  std::vector<SetPartition> out;
  for (auto& pi : set_partitions(m, guard))
    if (is_noncrossing(pi)) out.push_back(std::move(pi));
  return out;
}

/// All pair partitions of [m] (empty for odd m).
inline std::vector<SetPartition> pairings(std::size_t m,
                                          const EnumerationGuard& guard = EnumerationGuard{}) {
  guard.check(m, "pairings");
  std::vector<SetPartition> out;
  if (m % 2 != 0) return out;
  std::vector<std::vector<int>> blocks;
  std::vector<bool> used(m, false);
  std::function<void()> rec = [&]() {
    std::size_t first = 0;
    while (first < m && used[first]) ++first;
    if (first == m) {
      out.emplace_back(m, blocks);
      return;
    }
    used[first] = true;
    for (std::size_t j = first + 1; j < m; ++j) {
      if (used[j]) continue;
      used[j] = true;
      blocks.push_back({static_cast<int>(first) + 1, static_cast<int>(j) + 1});
      rec();
      blocks.pop_back();
      used[j] = false;
    }
    used[first] = false;
  };
  rec();
  return out;
}

/// All pairings of the signed set [±n], as Pairing objects.
inline std::vector<Pairing> signed_pairings(std::size_t n,
                                            const EnumerationGuard& guard = EnumerationGuard{}) {
  std::vector<Pairing> out;
  for (const auto& pi : pairings(2 * n, guard)) {
    std::vector<std::vector<int>> cycles;
    for (const auto& b : pi.blocks())
      cycles.push_back({SignedPerm::value(n, static_cast<std::size_t>(b[0] - 1)),
                        SignedPerm::value(n, static_cast<std::size_t>(b[1] - 1))});
    out.emplace_back(SignedPerm::from_cycles(n, cycles));
  }
  return out;
}

/// All σ ∈ S_m whose cycle partition is π; there are ∏(|V|−1)! of them.
inline std::vector<Perm> permutations_with_partition(const SetPartition& pi,
                                                     const EnumerationGuard& guard = EnumerationGuard{}) {
  const std::size_t m = pi.ground_size();
  guard.check(m, "permutations_with_partition");
  std::vector<std::vector<std::vector<int>>> orders;  // per block, all cyclic orders
  for (const auto& b : pi.blocks()) {
    std::vector<std::vector<int>> cyc;
    std::vector<int> rest(b.begin() + 1, b.end());
    do {
      std::vector<int> c{b.front()};
      c.insert(c.end(), rest.begin(), rest.end());
      cyc.push_back(std::move(c));
    } while (std::next_permutation(rest.begin(), rest.end()));
    orders.push_back(std::move(cyc));
  }
  std::vector<Perm> out;
  std::vector<std::vector<int>> chosen(orders.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == orders.size()) {
      out.push_back(Perm::from_cycles(m, chosen));
      return;
    }
    for (const auto& c : orders[i]) {
      chosen[i] = c;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace ptfree::combinat
