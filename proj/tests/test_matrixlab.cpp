#include <gtest/gtest.h>

#include "ptfree/checks.hpp"
#include "ptfree/matrixlab.hpp"
#include "ptfree/moments.hpp"

using namespace ptfree;
using namespace ptfree::matrixlab;

namespace {

ComplexMatrix random_matrix(std::uint64_t side, std::uint64_t seed) {
  auto rng = make_stream(seed, 99);
  return sample_ginibre(side, side, rng);
}

ComplexMatrix basis(std::uint64_t d, std::uint64_t i, std::uint64_t j) {
  ComplexMatrix e = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return e;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::vector<Row> rows_of(std::size_t n) { return checks::all_rows(n); }

}  // namespace

TEST(Layout, RowMajorFirstFactorMostSignificant) {
  TensorLayout l({2, 3, 4});
  EXPECT_EQ(l.side(), 24u);
  EXPECT_EQ(l.flat({0, 0, 1}), 1u);
  EXPECT_EQ(l.flat({0, 1, 0}), 4u);
  EXPECT_EQ(l.flat({1, 0, 0}), 12u);
  EXPECT_EQ(l.digit(23, 0), 1u);
  EXPECT_EQ(l.digit(23, 2), 3u);
  EXPECT_THROW(TensorLayout({}), PreconditionError);
}

TEST(Ginibre, MomentsAndDeterminism) {
  auto a = sample_ginibre(100, 1000, 5);
  auto b = sample_ginibre(100, 1000, 5);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == sample_ginibre(100, 1000, 6));
  const double n = static_cast<double>(a.size());
  EXPECT_NEAR(a.cwiseAbs2().sum() / n, 1.0, 0.02);
  Complex sq = a.array().square().sum() / n;
  EXPECT_NEAR(std::abs(sq), 0.0, 0.02);
  EXPECT_NEAR(std::abs(a.sum() / n), 0.0, 0.02);
}

TEST(Wishart, Examples) {
  TensorLayout l({2, 2});
  EXPECT_TRUE(wishart(ComplexMatrix::Zero(4, 3), l).isZero());
  ComplexMatrix w = wishart(ComplexMatrix::Identity(4, 4), l);
  EXPECT_TRUE(w.isApprox(ComplexMatrix::Identity(4, 4) / 4.0));
  EXPECT_THROW(wishart(ComplexMatrix::Zero(3, 3), l), SizeMismatch);
  auto g = sample_ginibre(4, 5, 3);
  ComplexMatrix ws = wishart(g, l);
  EXPECT_LT((ws - ws.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  for (double ev : spectrum(ws)) EXPECT_GT(ev, -1e-12);
}

TEST(PartialTranspose, BasisExample) {
  TensorLayout l({2, 2});
  ComplexMatrix a = kron(basis(2, 0, 1), basis(2, 0, 1));
  ComplexMatrix expect = kron(basis(2, 0, 1), basis(2, 1, 0));
  EXPECT_TRUE(partial_transpose(a, Row{0, 1}, l) == expect);
  EXPECT_TRUE(partial_transpose(a, Row{1, 0}, l) == kron(basis(2, 1, 0), basis(2, 0, 1)));
}

TEST(PartialTranspose, Properties) {
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<std::uint64_t> d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = 2 + j % 2;
    TensorLayout l(d);
    ComplexMatrix a = random_matrix(l.side(), n);
    ComplexMatrix h = a + a.adjoint();
    EXPECT_TRUE(partial_transpose(a, Row(n, 0), l) == a);
    EXPECT_TRUE(partial_transpose(a, Row(n, 1), l) == a.transpose());
    for (const auto& s : rows_of(n)) {
      EXPECT_TRUE(partial_transpose(partial_transpose(a, s, l), s, l) == a);
      EXPECT_EQ(partial_transpose(a, s, l).trace(), a.trace());
      ComplexMatrix ht = partial_transpose(h, s, l);
      EXPECT_TRUE(ht == ht.adjoint());
    }
  }
  TensorLayout l({2, 2});
  EXPECT_THROW(partial_transpose(ComplexMatrix::Zero(3, 3), Row{0, 1}, l), SizeMismatch);
  EXPECT_THROW(partial_transpose(ComplexMatrix::Zero(4, 4), Row{0}, l), SizeMismatch);
}

TEST(MixedTrace, Properties) {
  TensorLayout l({2, 3});
  auto rng = make_stream(21, 0);
  for (int t = 0; t < 1000; ++t) {
    ComplexMatrix w = wishart(sample_ginibre(6, 4, rng), l);
    for (std::size_t m = 1; m <= 2; ++m)
      for (const auto& eps : checks::all_epsilon(m, 2)) {
        Complex v = mixed_trace(w, eps, l);
        ASSERT_LE(std::abs(v.imag()), 1e-10 * (1 + std::abs(v.real())));
      }
    if (t < 20) {
      Complex base = mixed_trace(w, std::vector<Row>{Row{0, 0}}, l);
      for (const auto& r : rows_of(2)) EXPECT_NEAR(std::abs(mixed_trace(w, std::vector<Row>{r}, l) - base), 0, 1e-14);
      std::vector<Row> ones{Row{1, 1}, Row{1, 1}, Row{1, 1}}, zeros{Row{0, 0}, Row{0, 0}, Row{0, 0}};
      EXPECT_NEAR(std::abs(mixed_trace(w, ones, l) - mixed_trace(w, zeros, l)), 0, 1e-13);
    }
  }
}

TEST(McEstimate, MeanTraceMatchesExact) {
  auto eps = EpsilonMatrix::from_strings({"01"});
  auto est = mc_estimate(eps, 1, DimSpec({2, 2}, 4), 100000, 17);
  EXPECT_EQ(est.samples, 100000u);
  EXPECT_GT(est.stderr_re, 0);
  EXPECT_LE(std::abs(est.mean.real() - 1.0), 4 * est.stderr_re);
}

TEST(McEstimate, SecondWordMatchesExact) {
  auto eps = EpsilonMatrix::from_strings({"00", "00"});
  DimSpec dims({3, 3}, 9);
  auto est = mc_estimate(eps, 1, dims, 100000, 4);
  double exact = to_double(moments::exact_moment(eps, 1, dims));
  EXPECT_LE(std::abs(est.mean.real() - exact), 4 * est.stderr_re);
}

TEST(McEstimate, VarianceMatchesExact) {
  auto eps = EpsilonMatrix::from_strings({"01"});
  DimSpec dims({2, 2}, 3);
  auto m1 = mc_estimate(eps, 1, dims, 200000, 8);
  auto m2 = mc_estimate(eps, 2, dims, 200000, 8);
  double var = m2.mean.real() - m1.mean.real() * m1.mean.real();
  double exact = to_double(moments::variance_exact(eps, dims));
  // Same samples feed both means; the delta method gives the error scale.
  EXPECT_LE(std::abs(var - exact), 5 * (m2.stderr_re + 2 * m1.mean.real() * m1.stderr_re));
}

TEST(McEstimate, ReproducibleAcrossThreads) {
  auto eps = EpsilonMatrix::from_strings({"01", "10"});
  DimSpec dims({2, 2}, 2);
  McOptions one, four;
  one.threads = 1;
  four.threads = 4;
  auto a = mc_estimate(eps, 1, dims, 5000, 99, one);
  auto b = mc_estimate(eps, 1, dims, 5000, 99, four);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.stderr_re, b.stderr_re);
  EXPECT_THROW(mc_estimate(eps, 1, dims, 1, 1), PreconditionError);
}

TEST(McEstimate, StderrScaling) {
  auto eps = EpsilonMatrix::from_strings({"00"});
  DimSpec dims({2, 2}, 2);
  auto a = mc_estimate(eps, 1, dims, 20000, 5);
  auto b = mc_estimate(eps, 1, dims, 80000, 5);
  EXPECT_NEAR(a.stderr_re / b.stderr_re, 2.0, 0.4);
}

TEST(RunningStats, MergeMatchesSinglePass) {
  RunningStats all, left, right;
  for (int i = 0; i < 100; ++i) {
    Complex v(std::sin(i * 0.7) * 3 + i * 0.01, std::cos(i));
    all.add(v);
    (i < 37 ? left : right).add(v);
  }
  auto merged = RunningStats::merge(left, right);
  EXPECT_EQ(merged.count, all.count);
  EXPECT_NEAR(merged.mean_re, all.mean_re, 1e-12);
  EXPECT_NEAR(merged.variance(), all.variance(), 1e-12);
  EXPECT_NEAR(merged.mean_im, all.mean_im, 1e-12);
}

TEST(BuildS, Examples) {
  TensorLayout l({2, 2});
  ComplexMatrix w = wishart(sample_ginibre(4, 4, 1), l);
  EXPECT_TRUE(build_s(w, {Row{0, 0}}, 0, l).isApprox(w));
  auto B = rows_of(2);
  ComplexMatrix s = build_s(w, B, 0.7, l);
  Complex lhs = s.trace() / 4.0, rhs = 2.0 * (w.trace() / 4.0 - 0.7);
  EXPECT_NEAR(std::abs(lhs - rhs), 0, 1e-12);
  EXPECT_LT((s - s.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(build_s(w, {}, 1, l), PreconditionError);
}

TEST(Spectrum, Examples) {
  for (double v : spectrum(ComplexMatrix::Identity(3, 3))) EXPECT_DOUBLE_EQ(v, 1.0);
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 1;
  d(2, 2) = 2;
  EXPECT_EQ(spectrum(d), (std::vector<double>{1, 2, 3}));
  ComplexMatrix a = random_matrix(6, 2);
  ComplexMatrix h = a + a.adjoint();
  auto ev = spectrum(h);
  EXPECT_TRUE(std::is_sorted(ev.begin(), ev.end()));
  double sum = 0;
  for (double v : ev) sum += v;
  EXPECT_NEAR(sum, h.trace().real(), 1e-8 * std::max(1.0, std::abs(sum)));
  EXPECT_THROW(spectrum(a), PreconditionError);
}

TEST(Spectrum, MomentsMatchTraces) {
  TensorLayout l({2, 3});
  ComplexMatrix w = wishart(sample_ginibre(6, 6, 12), l);
  ComplexMatrix s = build_s(w, checks::all_rows(2), 1.0, l);
  auto mom = spectral_moments(spectrum(s), 6);
  ComplexMatrix pw = ComplexMatrix::Identity(6, 6);
  for (std::size_t m = 0; m <= 6; ++m) {
    double tr = (pw.trace() / 6.0).real();
    EXPECT_NEAR(mom[m], tr, 1e-8 * std::max(1.0, std::abs(tr)));
    pw = pw * s;
  }
}

TEST(Histogram, BinsAndCsv) {
  auto bins = histogram({0.1, 0.2, 0.6, 1.0, 5.0}, 2, 0.0, 1.0);
  ASSERT_EQ(bins.size(), 2u);
  EXPECT_EQ(bins[0].count, 2u);
  EXPECT_EQ(bins[1].count, 2u);
  EXPECT_DOUBLE_EQ(bins[0].density, 2.0 / (5 * 0.5));
  auto csv = histogram_csv(bins);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "bin_left,bin_right,count,density");
  EXPECT_THROW(histogram({}, 0, 0, 1), PreconditionError);
}
