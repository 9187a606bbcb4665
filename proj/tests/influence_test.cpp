// Tests for influence curves: closed forms, the general window curve,
// the brute-force ground truth, and the Gaussian sweep.

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pufferkit/influence.hpp"

namespace pufferkit {
namespace {

Mat make_mat(std::size_t r, std::size_t c, std::initializer_list<double> vals) {
  Mat m(r, c);
  std::size_t i = 0;
  for (double v : vals) m.data[i++] = v;
  return m;
}

TEST(CurveJsonTest, RoundTripAndValidation) {
  AbCurve curve;
  curve.provenance = "closed-form";
  curve.points = {{1, 2.1972}, {3, 1.0217}, {5, 0.6}};
  const AbCurve back = curve_from_json(curve_to_json(curve));
  EXPECT_EQ(back.provenance, "closed-form");
  ASSERT_EQ(back.points.size(), 3u);
  EXPECT_EQ(back.points[1].b, 3);
  EXPECT_DOUBLE_EQ(back.points[1].a, 1.0217);

  AbCurve bad = curve;
  bad.provenance = "guesswork";
  EXPECT_THROW(validate_curve(bad), validation_error);
  bad = curve;
  bad.points[1].b = 1;
  EXPECT_THROW(validate_curve(bad), validation_error);
  bad = curve;
  bad.points[0].a = -0.1;
  EXPECT_THROW(validate_curve(bad), validation_error);
  bad = curve;
  bad.points.clear();
  EXPECT_THROW(validate_curve(bad), validation_error);
}

TEST(BinaryPointTest, SymmetricChainFrozenValues) {
  const BinaryChain c{0.75, 0.75};
  EXPECT_NEAR(binary_chain_ab_point(c, 1), 2.0 * std::log(3.0), 1e-12);
  EXPECT_NEAR(binary_chain_ab_point(c, 2), std::log(5.0), 1e-12);
  EXPECT_NEAR(binary_chain_ab_point(c, 3), 2.0 * std::log(5.0 / 3.0), 1e-12);
}

TEST(BinaryPointTest, BalancedSplitOptimalForNonnegativeEigenvalue) {
  for (double p = 0.5; p < 0.95; p += 0.1) {
    for (double q = 0.5; q < 0.95; q += 0.1) {
      const BinaryChain c{p, q};
      for (int b = 1; b <= 6; ++b) {
        const int dl = (b + 1) / 2, dr = b + 1 - dl;
        const auto sl = detail::binary_step_extremes(c, dl);
        const auto sr = detail::binary_step_extremes(c, dr);
        const double balanced = std::max(sl.first + sr.first, sl.second + sr.second);
        EXPECT_NEAR(binary_chain_ab_point(c, b), balanced, 1e-12)
            << "p=" << p << " q=" << q << " b=" << b;
      }
    }
  }
}

TEST(BinaryPointTest, NegativeEigenvalueNeedsUnbalancedSearch) {
  // p + q < 1 flips the eigenvalue sign; the balanced split and the
  // per-side ratio maxima both overstate the influence here.
  const BinaryChain c{0.2, 0.4};
  EXPECT_NEAR(binary_chain_ab_point(c, 2), std::log(4.0), 1e-12);
  EXPECT_NEAR(binary_chain_ab_point(c, 3), 2.0 * std::log(13.0 / 9.0), 1e-12);
  // Per-side maxima mix orderings and give log(13/3) at b=2, strictly worse.
  const double mixed = std::log(13.0 / 3.0);
  EXPECT_LT(binary_chain_ab_point(c, 2), mixed - 0.07);
}

TEST(BinaryPointTest, BoundarySaturationBeatsInteriorWindows) {
  const BinaryChain c{0.9, 0.9};
  // Slow chain, generous budget, short sequence: hiding everything on the
  // left of the secret kills that side's term entirely.
  const double with_geometry = binary_chain_ab_point(c, 4, 8, 3);
  EXPECT_NEAR(with_geometry, std::log(9.0), 1e-12);
  const double interior_only = binary_chain_ab_point(c, 4);
  const auto s2 = detail::binary_step_extremes(c, 2);
  const auto s3 = detail::binary_step_extremes(c, 3);
  EXPECT_NEAR(interior_only, s2.first + s3.first, 1e-12);
  EXPECT_GT(interior_only, with_geometry + 0.4);
}

TEST(BinaryPointTest, RejectsBadArguments) {
  EXPECT_THROW(binary_chain_ab_point({1.0, 0.5}, 2), validation_error);
  EXPECT_THROW(binary_chain_ab_point({0.5, 0.5}, 0), validation_error);
  EXPECT_THROW(binary_chain_ab_point({0.5, 0.5}, 4, 5, 2), validation_error);
  EXPECT_THROW(binary_chain_ab_point({0.5, 0.5}, 2, 6, 6), validation_error);
}

TEST(EnumerateMarkovTest, TwoStepProbabilities) {
  const Mat p = make_mat(2, 2, {0.9, 0.1, 0.2, 0.8});
  const ExplicitPrior prior = enumerate_markov_prior(p, 2);
  ASSERT_EQ(prior.support.size(), 4u);
  double total = 0.0;
  for (const auto& [seq, prob] : prior.support) {
    total += prob;
    const double pi0 = 2.0 / 3.0;
    const double expect = (seq[0] == 0 ? pi0 : 1.0 - pi0) *
                          p(static_cast<std::size_t>(seq[0]), static_cast<std::size_t>(seq[1]));
    EXPECT_NEAR(prob, expect, 1e-12);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(OracleTest, MatchesBinaryClosedFormOnParameterGrid) {
  for (double p : {0.2, 0.5, 0.8}) {
    for (double q : {0.2, 0.5, 0.8}) {
      const Mat pm = make_mat(2, 2, {p, 1.0 - p, 1.0 - q, q});
      for (int b = 1; b <= 5; ++b) {
        const std::size_t length = static_cast<std::size_t>(b) + 4;
        const std::size_t centre = (length - 1) / 2;
        const ExplicitPrior prior = enumerate_markov_prior(pm, length);
        const double oracle = brute_force_ab_oracle(
            prior, {static_cast<int>(centre), 0, 1}, b, {}, /*exhaustive=*/true);
        const double closed =
            binary_chain_ab_point({p, q}, b, length, centre);
        EXPECT_NEAR(oracle, closed, 1e-9)
            << "p=" << p << " q=" << q << " b=" << b;
      }
    }
  }
}

TEST(OracleTest, SaturatedWindowConfirmedExhaustively) {
  const Mat pm = make_mat(2, 2, {0.9, 0.1, 0.1, 0.9});
  const ExplicitPrior prior = enumerate_markov_prior(pm, 8);
  const double oracle = brute_force_ab_oracle(prior, {3, 0, 1}, 4, {}, true);
  EXPECT_NEAR(oracle, std::log(9.0), 1e-9);
}

TEST(OracleTest, ValidatesInput) {
  const Mat pm = make_mat(2, 2, {0.9, 0.1, 0.2, 0.8});
  const ExplicitPrior prior = enumerate_markov_prior(pm, 4);
  EXPECT_THROW(brute_force_ab_oracle(prior, {1, 0, 0}, 2), validation_error);
  EXPECT_THROW(brute_force_ab_oracle(prior, {9, 0, 1}, 2), validation_error);
  EXPECT_THROW(brute_force_ab_oracle(prior, {1, 0, 1}, 1, {0, 3}), validation_error);
  ExplicitPrior degenerate = prior;
  for (auto& [seq, prob] : degenerate.support)
    if (seq[1] == 1) prob = 0.0;
  double total = 0.0;
  for (auto& [seq, prob] : degenerate.support) total += prob;
  for (auto& [seq, prob] : degenerate.support) prob /= total;
  EXPECT_THROW(brute_force_ab_oracle(degenerate, {1, 0, 1}, 2), validation_error);
}

TEST(ChainCurveTest, MatchesWindowOracleOnThreeStateChain) {
  const Mat p = make_mat(3, 3, {0.6, 0.3, 0.1, 0.2, 0.5, 0.3, 0.3, 0.3, 0.4});
  const std::size_t length = 6, centre = 2;
  const ExplicitPrior prior = enumerate_markov_prior(p, length);
  const AbCurve curve = chain_ab_curve(p, length, centre, 3);
  EXPECT_EQ(curve.provenance, "oracle");
  for (int b = 1; b <= 3; ++b) {
    double worst = 0.0;
    for (int va = 0; va < 3; ++va) {
      for (int vb = va + 1; vb < 3; ++vb) {
        const double oracle = brute_force_ab_oracle(
            prior, {static_cast<int>(centre), va, vb}, b, {}, /*exhaustive=*/false);
        const double pair_point =
            chain_pair_ab_point(p, length, centre, b,
                                static_cast<std::size_t>(va), static_cast<std::size_t>(vb));
        EXPECT_NEAR(pair_point, oracle, 1e-12) << "b=" << b << " pair " << va << vb;
        worst = std::max(worst, pair_point);
      }
    }
    EXPECT_NEAR(curve.points[static_cast<std::size_t>(b - 1)].a, worst, 1e-12);
  }
}

TEST(ChainCurveTest, TwoStateCurveMatchesBinaryClosedForm) {
  const Mat p = make_mat(2, 2, {0.7, 0.3, 0.4, 0.6});
  const AbCurve curve = chain_ab_curve(p, 9, 4, 5);
  for (int b = 1; b <= 5; ++b) {
    EXPECT_NEAR(curve.points[static_cast<std::size_t>(b - 1)].a,
                binary_chain_ab_point({0.7, 0.6}, b, 9, 4), 1e-12);
  }
}

TEST(ChainCurveTest, NonIncreasingInBudget) {
  const Mat p = make_mat(3, 3, {0.8, 0.1, 0.1, 0.1, 0.8, 0.1, 0.1, 0.1, 0.8});
  const AbCurve curve = chain_ab_curve(p, 30, 14, 10);
  for (std::size_t i = 1; i < curve.points.size(); ++i)
    EXPECT_LE(curve.points[i].a, curve.points[i - 1].a + 1e-12);
}

// Independent ground truth for the Gaussian sweep at n=3, lengthscale 1,
// budget 2 (reveal only the first coordinate): direct quadrature of the
// joint density, with the exact erfc-based normal CDF as baseline.
double gaussian_quadrature_reference() {
  const double rho = std::exp(-1.0);
  const double sc = std::sqrt(1.0 - rho * rho);
  const double gamma = 5.0, delta = 0.1;
  const double h = delta / 40.0;
  const int nt = static_cast<int>(std::lround(2.0 * gamma / h)) + 1;
  auto phi = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); };
  auto cdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };

  std::vector<double> bins;
  for (double r = -gamma; r <= gamma - delta + 1e-12; r += delta / 2.0) bins.push_back(r);
  std::vector<double> log_base(bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k)
    log_base[k] = std::log(std::max(cdf(bins[k] + delta) - cdf(bins[k]), 1e-300));

  double best = 0.0;
  std::vector<double> g(static_cast<std::size_t>(nt));
  for (int ix = 0; ix <= 500; ++ix) {
    const double x0 = -gamma + static_cast<double>(ix) * (2.0 * gamma / 500.0);
    for (int j = 0; j < nt; ++j) {
      const double t = -gamma + j * h;
      g[static_cast<std::size_t>(j)] = phi(t) * phi((x0 - rho * t) / sc) / sc;
    }
    double hi = -kInf, lo = kInf;
    for (std::size_t k = 0; k < bins.size(); ++k) {
      const int j0 = static_cast<int>(k) * 20;  // bins step delta/2, grid step delta/40
      double s = g[j0] + g[j0 + 40];
      for (int j = 1; j < 40; ++j) s += g[j0 + j] * (j % 2 == 1 ? 4.0 : 2.0);
      s *= h / 3.0;
      const double f = std::log(std::max(s, 1e-300)) - log_base[k];
      hi = std::max(hi, f);
      lo = std::min(lo, f);
    }
    best = std::max(best, hi - lo);
  }
  return best;
}

TEST(GaussianCurveTest, SweepMatchesQuadratureReference) {
  const AbCurve curve = gaussian_ab_curve(3, 1.0, 2);
  EXPECT_EQ(curve.provenance, "sweep");
  ASSERT_EQ(curve.points.size(), 2u);
  const double reference = gaussian_quadrature_reference();
  EXPECT_GT(reference, 10.0);
  EXPECT_NEAR(curve.points[1].a, reference, 0.02 * reference);
}

TEST(GaussianCurveTest, NonIncreasingAndFiniteOnWideKernels) {
  const AbCurve narrow = gaussian_ab_curve(7, 2.0, 5);
  for (std::size_t i = 1; i < narrow.points.size(); ++i)
    EXPECT_LE(narrow.points[i].a, narrow.points[i - 1].a + 1e-12);
  // Wide kernel means a badly conditioned revealed block; the solver has
  // to survive it and produce something positive and finite.
  const AbCurve wide = gaussian_ab_curve(21, 5.0, 3);
  for (const CurvePoint& pt : wide.points) {
    EXPECT_GT(pt.a, 0.0);
    EXPECT_TRUE(std::isfinite(pt.a));
  }
}

TEST(GaussianCurveTest, RejectsBadParameters) {
  EXPECT_THROW(gaussian_ab_curve(5, 1.0, 0), validation_error);
  EXPECT_THROW(gaussian_ab_curve(5, 1.0, 5), validation_error);
  GaussianSweepParams bad;
  bad.delta = 0.0;
  EXPECT_THROW(gaussian_ab_curve(5, 1.0, 2, bad), validation_error);
}

}  // namespace
}  // namespace pufferkit
