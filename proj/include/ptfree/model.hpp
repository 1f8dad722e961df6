#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ptfree/errors.hpp"
#include "ptfree/exact.hpp"

namespace ptfree {

/// One choice of transposed legs, an element of {0,1}^n.
using Row = std::vector<std::uint8_t>;

/// Z₂-valued m×n matrix. Row i selects the partial transpose applied to the
/// i-th Wishart factor of the word tr(W^{ε₁}⋯W^{ε_m}); column j lists, for
/// tensor leg j, which factors are transposed on that leg.
class EpsilonMatrix {
 public:
  EpsilonMatrix() = default;

  EpsilonMatrix(std::size_t m, std::size_t n) : m_(m), n_(n), bits_(m * n, 0) {
    if (m == 0 || n == 0) throw PreconditionError("EpsilonMatrix needs m >= 1 and n >= 1");
  }

  explicit EpsilonMatrix(const std::vector<Row>& rows) {
    if (rows.empty()) throw PreconditionError("EpsilonMatrix needs at least one row");
    m_ = rows.size();
    n_ = rows.front().size();
    if (n_ == 0) throw PreconditionError("EpsilonMatrix rows must be non-empty");
    bits_.reserve(m_ * n_);
    for (const auto& r : rows) {
      if (r.size() != n_) throw PreconditionError("EpsilonMatrix rows have different lengths");
      for (auto b : r) {
        if (b > 1) throw PreconditionError("EpsilonMatrix entries must be 0 or 1");
        bits_.push_back(b);
      }
    }
  }

  /// Rows written as bit strings, e.g. {"00", "11"}.
  static EpsilonMatrix from_strings(const std::vector<std::string>& rows) {
    std::vector<Row> rr;
    for (const auto& s : rows) {
      Row r;
      for (char ch : s) {
        if (ch != '0' && ch != '1') throw PreconditionError("bit strings may only contain 0 and 1");
        r.push_back(static_cast<std::uint8_t>(ch - '0'));
      }
      rr.push_back(std::move(r));
    }
    return EpsilonMatrix(rr);
  }

  std::size_t m() const noexcept { return m_; }
  std::size_t n() const noexcept { return n_; }

  /// Zero-based access.
  std::uint8_t operator()(std::size_t i, std::size_t j) const { return bits_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, std::uint8_t b) {
    if (b > 1) throw PreconditionError("EpsilonMatrix entries must be 0 or 1");
    bits_[i * n_ + j] = b;
  }

  Row row(std::size_t i) const {
    return Row(bits_.begin() + static_cast<std::ptrdiff_t>(i * n_),
               bits_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_));
  }
  std::vector<Row> rows() const {
    std::vector<Row> out;
    for (std::size_t i = 0; i < m_; ++i) out.push_back(row(i));
    return out;
  }
  Row column(std::size_t j) const {
    Row c(m_);
    for (std::size_t i = 0; i < m_; ++i) c[i] = bits_[i * n_ + j];
    return c;
  }

  /// Sub-word on the given zero-based row positions (kept in order).
  EpsilonMatrix select_rows(std::span<const std::size_t> positions) const {
    std::vector<Row> out;
    for (auto p : positions) out.push_back(row(p));
    return EpsilonMatrix(out);
  }

  /// Every bit flipped and the row order reversed.
  EpsilonMatrix complement_reversed() const {
    std::vector<Row> out;
    for (std::size_t i = m_; i-- > 0;) {
      Row r = row(i);
      for (auto& b : r) b ^= 1u;
      out.push_back(std::move(r));
    }
    return EpsilonMatrix(out);
  }

  /// Rows rendered as `00,11`.
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i) s += ',';
      for (std::size_t j = 0; j < n_; ++j) s += static_cast<char>('0' + (*this)(i, j));
    }
    return s;
  }

  friend bool operator==(const EpsilonMatrix&, const EpsilonMatrix&) = default;

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

inline std::string row_to_string(const Row& r) {
  std::string s;
  for (auto b : r) s += static_cast<char>('0' + b);
  return s;
}

/// Dimension vector d = (d₁,…,dₙ) and sample count p.
class DimSpec {
 public:
  DimSpec() = default;
  DimSpec(std::vector<std::uint64_t> d, std::uint64_t p) : d_(std::move(d)), p_(p) {
    if (d_.empty()) throw PreconditionError("DimSpec needs at least one tensor factor");
    if (p_ == 0) throw PreconditionError("DimSpec needs p >= 1");
    total_ = 1;
    for (auto dj : d_) {
      if (dj == 0) throw PreconditionError("DimSpec needs every d_j >= 1");
      if (total_ > std::numeric_limits<std::uint64_t>::max() / dj)
        throw PreconditionError("DimSpec: total dimension overflows 64 bits");
      total_ *= dj;
    }
  }

  const std::vector<std::uint64_t>& d() const noexcept { return d_; }
  std::size_t n() const noexcept { return d_.size(); }
  std::uint64_t p() const noexcept { return p_; }
  /// D = ∏ dⱼ.
  std::uint64_t total() const noexcept { return total_; }
  /// p / D, exactly.
  ExactValue ratio() const { return ExactValue(BigInt(p_), BigInt(total_)); }
  /// μ = min dⱼ.
  std::uint64_t mu() const { return *std::min_element(d_.begin(), d_.end()); }

  std::string to_string() const {
    std::string s = "d=(";
    for (std::size_t j = 0; j < d_.size(); ++j) s += (j ? "," : "") + std::to_string(d_[j]);
    return s + "),p=" + std::to_string(p_);
  }

  friend bool operator==(const DimSpec&, const DimSpec&) = default;

 private:
  std::vector<std::uint64_t> d_;
  std::uint64_t p_ = 1;
  std::uint64_t total_ = 1;
};

}  // namespace ptfree
