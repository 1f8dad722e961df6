#pragma once

// Monte Carlo side: complex Ginibre/Wishart sampling, partial transposes by
// index permutation, sampled mixed traces, centred sums s_d and spectra.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ptfree/errors.hpp"
#include "ptfree/model.hpp"
#include "ptfree/parallel.hpp"

namespace ptfree::matrixlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Row-major flattening of [d₁]×⋯×[dₙ], first factor most significant.
class TensorLayout {
 public:
  explicit TensorLayout(std::vector<std::uint64_t> dims) : dims_(std::move(dims)), strides_(dims_.size()) {
    if (dims_.empty()) throw PreconditionError("TensorLayout needs at least one factor");
    std::uint64_t s = 1;
    for (std::size_t l = dims_.size(); l-- > 0;) {
      if (dims_[l] == 0) throw PreconditionError("TensorLayout dimensions must be positive");
      strides_[l] = s;
      s *= dims_[l];
    }
    side_ = s;
  }

  const std::vector<std::uint64_t>& dims() const noexcept { return dims_; }
  std::size_t factors() const noexcept { return dims_.size(); }
  std::uint64_t side() const noexcept { return side_; }

  /// Zero-based multi-index → flat index.
  std::uint64_t flat(const std::vector<std::uint64_t>& idx) const {
    std::uint64_t f = 0;
    for (std::size_t l = 0; l < dims_.size(); ++l) f += idx[l] * strides_[l];
    return f;
  }
  std::uint64_t digit(std::uint64_t flat, std::size_t leg) const { return flat / strides_[leg] % dims_[leg]; }
  std::uint64_t stride(std::size_t leg) const { return strides_[leg]; }

 private:
  std::vector<std::uint64_t> dims_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t side_ = 1;
};

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Independent generator for substream `stream` of `seed`.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(~stream)));
}

/// Complex Gaussian entries with independent real and imaginary parts of
/// variance 1/2, so E g = 0 and E|g|² = 1.
inline ComplexMatrix sample_ginibre(std::uint64_t rows, std::uint64_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      double re = normal(rng);
      double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

inline ComplexMatrix sample_ginibre(std::uint64_t rows, std::uint64_t cols, std::uint64_t seed) {
  auto rng = make_stream(seed, 0);
  return sample_ginibre(rows, cols, rng);
}

// ---------------------------------------------------------------------------
// Wishart and partial transposes
// ---------------------------------------------------------------------------

/// W = GG*/D.
inline ComplexMatrix wishart(const ComplexMatrix& g, const TensorLayout& layout) {
  if (static_cast<std::uint64_t>(g.rows()) != layout.side())
    throw SizeMismatch("wishart: G must have D = prod(d) rows");
  ComplexMatrix w = g * g.adjoint();
  w /= static_cast<double>(layout.side());
  return w;
}

/// Applies T on every leg l with sigma[l] = 1: out[(i),(j)] = in[(i'),(j')],
/// where (i'_l, j'_l) = (j_l, i_l) on transposed legs.
inline ComplexMatrix partial_transpose(const ComplexMatrix& a, const Row& sigma, const TensorLayout& layout) {
  const std::uint64_t side = layout.side();
  if (static_cast<std::uint64_t>(a.rows()) != side || static_cast<std::uint64_t>(a.cols()) != side)
    throw SizeMismatch("partial_transpose: matrix side must equal prod(d)");
  if (sigma.size() != layout.factors()) throw SizeMismatch("partial_transpose: σ must have one bit per leg");
  // keep[r] carries the untouched digits of r, moved[r] the transposed ones.
  std::vector<std::uint64_t> keep(side, 0), moved(side, 0);
  for (std::uint64_t r = 0; r < side; ++r)
    for (std::size_t l = 0; l < layout.factors(); ++l)
      (sigma[l] ? moved[r] : keep[r]) += layout.digit(r, l) * layout.stride(l);
  ComplexMatrix out(a.rows(), a.cols());
  for (std::uint64_t c = 0; c < side; ++c)
    for (std::uint64_t r = 0; r < side; ++r)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          a(static_cast<Eigen::Index>(keep[r] + moved[c]), static_cast<Eigen::Index>(keep[c] + moved[r]));
  return out;
}

/// tr(W^{ε₁}⋯W^{ε_m}) with tr = Tr/D.
inline Complex mixed_trace(const ComplexMatrix& w, const std::vector<Row>& word, const TensorLayout& layout) {
  if (word.empty()) return 1.0;
  ComplexMatrix prod = partial_transpose(w, word.front(), layout);
  for (std::size_t i = 1; i < word.size(); ++i) prod = prod * partial_transpose(w, word[i], layout);
  return prod.trace() / static_cast<double>(layout.side());
}

inline Complex mixed_trace(const ComplexMatrix& w, const EpsilonMatrix& word, const TensorLayout& layout) {
  return mixed_trace(w, word.rows(), layout);
}

/// s = |B|^{-1/2} Σ_{x∈B} (W^x − c·Id).
inline ComplexMatrix build_s(const ComplexMatrix& w, const std::vector<Row>& B, double c, const TensorLayout& layout) {
  if (B.empty()) throw PreconditionError("build_s: B must be non-empty");
  ComplexMatrix s = ComplexMatrix::Zero(w.rows(), w.cols());
  for (const auto& x : B) s += partial_transpose(w, x, layout);
  s.diagonal().array() -= Complex(c * static_cast<double>(B.size()), 0.0);
  s /= std::sqrt(static_cast<double>(B.size()));
  return s;
}

/// Eigenvalues of a Hermitian matrix, ascending.
inline std::vector<double> spectrum(const ComplexMatrix& a, double tolerance = 1e-8) {
  if (a.rows() != a.cols()) throw PreconditionError("spectrum: matrix must be square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > tolerance * scale)
    throw PreconditionError("spectrum: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InternalInconsistency("spectrum: eigensolver failed");
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

/// (1/D) Σ λᵢ^m for m = 0..max_m.
inline std::vector<double> spectral_moments(const std::vector<double>& eigs, std::size_t max_m) {
  std::vector<double> out(max_m + 1, 0.0);
  for (double l : eigs) {
    double p = 1.0;
    for (std::size_t m = 0; m <= max_m; ++m, p *= l) out[m] += p;
  }
  for (auto& v : out) v /= static_cast<double>(eigs.size());
  return out;
}

// ---------------------------------------------------------------------------
// Estimates
// ---------------------------------------------------------------------------

/// Running mean/variance of the real part plus mean of the imaginary part.
struct RunningStats {
  std::uint64_t count = 0;
  double mean_re = 0, m2_re = 0, mean_im = 0, max_abs_im = 0;

  void add(Complex v) {
    ++count;
    double delta = v.real() - mean_re;
    mean_re += delta / static_cast<double>(count);
    m2_re += delta * (v.real() - mean_re);
    mean_im += (v.imag() - mean_im) / static_cast<double>(count);
    max_abs_im = std::max(max_abs_im, std::abs(v.imag()));
  }

  /// Pairwise combination (Chan et al.).
  static RunningStats merge(RunningStats a, const RunningStats& b) {
    if (b.count == 0) return a;
    if (a.count == 0) return b;
    const double na = static_cast<double>(a.count), nb = static_cast<double>(b.count), n = na + nb;
    const double delta = b.mean_re - a.mean_re;
    RunningStats r;
    r.count = a.count + b.count;
    r.mean_re = a.mean_re + delta * nb / n;
    r.m2_re = a.m2_re + b.m2_re + delta * delta * na * nb / n;
    r.mean_im = (a.mean_im * na + b.mean_im * nb) / n;
    r.max_abs_im = std::max(a.max_abs_im, b.max_abs_im);
    return r;
  }

  double variance() const { return count > 1 ? m2_re / static_cast<double>(count - 1) : 0.0; }
  double stderr_mean() const { return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0; }
};

struct McEstimate {
  std::uint64_t samples = 0;
  Complex mean;
  double stderr_re = 0;
  double max_abs_imag = 0;
  std::uint64_t seed = 0;
};

struct McOptions {
  /// Substreams the samples are divided into; fixed independently of the
  /// thread count so results are reproducible.
  std::uint64_t streams = 32;
  unsigned threads = default_thread_count();
};

/// Empirical mean of X_ε^k over `samples` independent Wishart draws.
inline McEstimate mc_estimate(const EpsilonMatrix& eps, std::size_t k, const DimSpec& dims, std::uint64_t samples,
                              std::uint64_t seed, const McOptions& opt = {}) {
  if (samples < 2) throw PreconditionError("mc_estimate needs at least 2 samples");
  if (eps.n() != dims.n()) throw SizeMismatch("mc_estimate: ε and d disagree on n");
  const TensorLayout layout(dims.d());
  const auto word = eps.rows();
  const std::uint64_t streams = std::min(opt.streams, samples);
  auto stats = parallel_reduce(
      streams, RunningStats{},
      [&](std::uint64_t b, std::uint64_t e) {
        RunningStats acc;
        for (std::uint64_t s = b; s < e; ++s) {
          auto rng = make_stream(seed, s);
          const std::uint64_t lo = samples * s / streams, hi = samples * (s + 1) / streams;
          RunningStats local;
          for (std::uint64_t i = lo; i < hi; ++i) {
            ComplexMatrix w = wishart(sample_ginibre(dims.total(), dims.p(), rng), layout);
            local.add(std::pow(mixed_trace(w, word, layout), static_cast<int>(k)));
          }
          acc = RunningStats::merge(acc, local);
        }
        return acc;
      },
      RunningStats::merge, opt.threads, streams);
  McEstimate est;
  est.samples = stats.count;
  est.mean = Complex(stats.mean_re, stats.mean_im);
  est.stderr_re = stats.stderr_mean();
  est.max_abs_imag = stats.max_abs_im;
  est.seed = seed;
  return est;
}

/// Per-m statistics of the spectral moments (1/D)Σλᵢ^m of s over samples.
struct SpectralEstimate {
  std::vector<RunningStats> moments;  ///< index m = 0..max_m
  std::vector<double> eigenvalues;    ///< pooled over all samples
};

inline SpectralEstimate mc_s_spectrum(const DimSpec& dims, const std::vector<Row>& B, double c, std::uint64_t samples,
                                      std::uint64_t seed, std::size_t max_m, bool keep_eigenvalues = false,
                                      const McOptions& opt = {}) {
  if (samples < 1) throw PreconditionError("mc_s_spectrum needs at least 1 sample");
  const TensorLayout layout(dims.d());
  const std::uint64_t streams = std::min(opt.streams, samples);
  using Part = SpectralEstimate;
  auto merge = [max_m](Part a, Part b) {
    if (a.moments.empty()) a.moments.resize(max_m + 1);
    for (std::size_t m = 0; m < b.moments.size(); ++m) a.moments[m] = RunningStats::merge(a.moments[m], b.moments[m]);
    a.eigenvalues.insert(a.eigenvalues.end(), b.eigenvalues.begin(), b.eigenvalues.end());
    return a;
  };
  return parallel_reduce(
      streams, Part{},
      [&](std::uint64_t b, std::uint64_t e) {
        Part acc;
        acc.moments.resize(max_m + 1);
        for (std::uint64_t s = b; s < e; ++s) {
          auto rng = make_stream(seed, s);
          const std::uint64_t lo = samples * s / streams, hi = samples * (s + 1) / streams;
          for (std::uint64_t i = lo; i < hi; ++i) {
            ComplexMatrix w = wishart(sample_ginibre(dims.total(), dims.p(), rng), layout);
            auto eigs = spectrum(build_s(w, B, c, layout));
            auto mom = spectral_moments(eigs, max_m);
            for (std::size_t m = 0; m <= max_m; ++m) acc.moments[m].add(mom[m]);
            if (keep_eigenvalues) acc.eigenvalues.insert(acc.eigenvalues.end(), eigs.begin(), eigs.end());
          }
        }
        return acc;
      },
      merge, opt.threads, streams);
}

// ---------------------------------------------------------------------------
// Histogram emission
// ---------------------------------------------------------------------------

struct HistogramBin {
  double left = 0, right = 0;
  std::uint64_t count = 0;
  double density = 0;
};

/// Equal-width bins over [lo, hi]; values outside are dropped. density is
/// normalised by the total number of values.
inline std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins, double lo, double hi) {
  if (bins == 0 || !(hi > lo)) throw PreconditionError("histogram: need bins > 0 and hi > lo");
  std::vector<HistogramBin> out(bins);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].left = lo + width * static_cast<double>(b);
    out[b].right = lo + width * static_cast<double>(b + 1);
  }
  for (double v : values) {
    if (v < lo || v > hi) continue;
    auto b = static_cast<std::size_t>((v - lo) / width);
    if (b == bins) b = bins - 1;
    ++out[b].count;
  }
  for (auto& bin : out)
    bin.density = values.empty() ? 0.0 : static_cast<double>(bin.count) / (static_cast<double>(values.size()) * width);
  return out;
}

inline std::string histogram_csv(const std::vector<HistogramBin>& bins) {
  std::ostringstream os;
  os.precision(17);
  os << "bin_left,bin_right,count,density\n";
  for (const auto& b : bins) os << b.left << ',' << b.right << ',' << b.count << ',' << b.density << '\n';
  return os.str();
}

}  // namespace ptfree::matrixlab
