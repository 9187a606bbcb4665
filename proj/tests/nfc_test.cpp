// Tests for the composability audit: optimal levels and certificates via
// the primal/dual programs, post-processing, and certificate redundancy.
// The level programs are cross-checked against an exhaustive lattice
// search over the weight simplex.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "pufferkit/nfc.hpp"
#include "pufferkit/numeric.hpp"

namespace pufferkit {
namespace {

LikelihoodMatrix make_matrix(std::vector<DatasetTag> tags, std::size_t outputs,
                             std::initializer_list<double> vals) {
  LikelihoodMatrix lm;
  lm.datasets = std::move(tags);
  for (std::size_t w = 0; w < outputs; ++w) lm.outputs.push_back("o" + std::to_string(w));
  lm.probs = Mat(lm.datasets.size(), outputs);
  std::size_t i = 0;
  for (double v : vals) lm.probs.data[i++] = v;
  return lm;
}

// Independent oracle: exhaustive search over a lattice on the weight
// simplex. Re-derives the support screening from scratch. Exact whenever
// the true optimum sits on the lattice, and never above the true value.
double lattice_level_oracle(const LikelihoodMatrix& lm, const std::string& left_secret,
                            const std::string& right_secret, std::size_t left, int steps,
                            double* lipschitz_gap = nullptr) {
  std::vector<std::size_t> outputs_k;
  for (std::size_t w = 0; w < lm.probs.cols; ++w)
    if (lm.probs(left, w) > 0.0) outputs_k.push_back(w);
  std::vector<std::size_t> rights;
  for (std::size_t d = 0; d < lm.datasets.size(); ++d) {
    const auto& tags = lm.datasets[d].secrets;
    if (std::find(tags.begin(), tags.end(), right_secret) == tags.end()) continue;
    bool positive = true;
    for (std::size_t w : outputs_k)
      if (!(lm.probs(d, w) > 0.0)) { positive = false; break; }
    if (positive) rights.push_back(d);
  }
  EXPECT_TRUE(std::find(lm.datasets[left].secrets.begin(), lm.datasets[left].secrets.end(),
                        left_secret) != lm.datasets[left].secrets.end());
  if (rights.empty()) return kInf;

  std::vector<std::vector<double>> diff(rights.size());
  double max_abs = 0.0;
  for (std::size_t i = 0; i < rights.size(); ++i) {
    for (std::size_t w : outputs_k) {
      const double d = std::log(lm.probs(left, w)) - std::log(lm.probs(rights[i], w));
      diff[i].push_back(d);
      max_abs = std::max(max_abs, std::abs(d));
    }
  }
  if (lipschitz_gap)
    *lipschitz_gap = 2.0 * max_abs * static_cast<double>(outputs_k.size()) / steps;

  double best = -kInf;
  std::vector<int> counts(outputs_k.size(), 0);
  // enumerate all compositions of `steps` into the output slots
  auto recurse = [&](auto&& self, std::size_t slot, int left_over) -> void {
    if (slot + 1 == counts.size()) {
      counts[slot] = left_over;
      double worst = kInf;
      for (const auto& d : diff) {
        double v = 0.0;
        for (std::size_t j = 0; j < counts.size(); ++j)
          v += d[j] * counts[j] / static_cast<double>(steps);
        worst = std::min(worst, v);
      }
      best = std::max(best, worst);
      return;
    }
    for (int c = 0; c <= left_over; ++c) {
      counts[slot] = c;
      self(self, slot + 1, left_over - c);
    }
  };
  recurse(recurse, 0, steps);
  return best;
}

LikelihoodMatrix random_matrix(std::mt19937_64& rng, std::size_t nd, std::size_t no,
                               bool allow_zeros) {
  LikelihoodMatrix lm;
  const std::size_t split = 1 + rng() % (nd - 1);
  for (std::size_t d = 0; d < nd; ++d)
    lm.datasets.push_back({"d" + std::to_string(d),
                           {d < split ? std::string("s1") : std::string("s2")}});
  for (std::size_t w = 0; w < no; ++w) lm.outputs.push_back("o" + std::to_string(w));
  lm.probs = Mat(nd, no);
  for (std::size_t d = 0; d < nd; ++d) {
    double sum = 0.0;
    for (std::size_t w = 0; w < no; ++w) {
      double p = -std::log(uniform_open(rng));
      if (allow_zeros && rng() % 4 == 0 && w + 1 < no) p = 0.0;
      lm.probs(d, w) = p;
      sum += p;
    }
    if (sum == 0.0) { lm.probs(d, no - 1) = 1.0; sum = 1.0; }
    for (std::size_t w = 0; w < no; ++w) lm.probs(d, w) /= sum;
  }
  return lm;
}

double max_log_ratio(const LikelihoodMatrix& lm) {
  double eps = 0.0;
  for (std::size_t a = 0; a < lm.probs.rows; ++a)
    for (std::size_t b = 0; b < lm.probs.rows; ++b)
      for (std::size_t w = 0; w < lm.probs.cols; ++w)
        eps = std::max(eps, std::abs(std::log(lm.probs(a, w) / lm.probs(b, w))));
  return eps;
}

TEST(LikelihoodMatrixTest, ValidationRejectsMalformedInput) {
  auto good = make_matrix({{"a", {"s1"}}, {"b", {"s2"}}}, 2, {0.75, 0.25, 0.25, 0.75});
  EXPECT_NO_THROW(validate_likelihood_matrix(good));

  auto bad_sum = good;
  bad_sum.probs(0, 0) = 0.7;
  EXPECT_THROW(validate_likelihood_matrix(bad_sum), validation_error);

  auto negative = good;
  negative.probs(0, 0) = -0.25;
  negative.probs(0, 1) = 1.25;
  EXPECT_THROW(validate_likelihood_matrix(negative), validation_error);

  auto ragged = good;
  ragged.outputs.push_back("o2");
  EXPECT_THROW(validate_likelihood_matrix(ragged), validation_error);

  EXPECT_THROW(validate_likelihood_matrix(LikelihoodMatrix{}), validation_error);
}

TEST(LikelihoodMatrixTest, SecretLookupHelpers) {
  auto lm = make_matrix({{"a", {"s1"}}, {"b", {"s2"}}, {"c", {"s2", "s3"}}}, 2,
                        {0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
  EXPECT_EQ(datasets_with_secret(lm, "s2"), (std::vector<std::size_t>{1, 2}));
  EXPECT_TRUE(datasets_with_secret(lm, "nope").empty());
  EXPECT_EQ(distinct_secrets(lm), (std::vector<std::string>{"s1", "s2", "s3"}));

  EXPECT_THROW(primal_nfc_epsilon(lm, {"s1", "nope"}, 0), validation_error);
  EXPECT_THROW(primal_nfc_epsilon(lm, {"s2", "s1"}, 0), validation_error);
  EXPECT_THROW(primal_nfc_epsilon(lm, {"s1", "s2"}, 7), validation_error);
}

TEST(PrimalTest, BinaryRandomizedResponseIsLogThree) {
  auto lm = make_matrix({{"a", {"s1"}}, {"b", {"s2"}}}, 2, {0.75, 0.25, 0.25, 0.75});
  EXPECT_NEAR(primal_nfc_epsilon(lm, {"s1", "s2"}, 0), std::log(3.0), 1e-12);
  EXPECT_NEAR(lattice_level_oracle(lm, "s1", "s2", 0, 10), std::log(3.0), 1e-12);

  const auto cert = dual_nfc_beta(lm, {"s1", "s2"}, 0);
  ASSERT_TRUE(cert.has_certificate);
  ASSERT_EQ(cert.beta.size(), 1u);
  EXPECT_TRUE(is_one_hot(cert.beta));
  EXPECT_NEAR(cert.epsilon0, std::log(3.0), 1e-12);
  const auto bound = detail::certified_bound(lm, 0, cert.right_datasets, cert.beta);
  EXPECT_NEAR(bound.first, std::log(3.0), 1e-12);
  EXPECT_EQ(bound.second, 0u);
}

TEST(PrimalTest, IdenticalRowsHaveZeroLevelAndUniformCertificate) {
  auto lm = make_matrix({{"a", {"s1"}}, {"b", {"s2"}}, {"c", {"s2"}}}, 3,
                        {0.2, 0.3, 0.5, 0.2, 0.3, 0.5, 0.2, 0.3, 0.5});
  EXPECT_DOUBLE_EQ(primal_nfc_epsilon(lm, {"s1", "s2"}, 0), 0.0);

  const auto cert = dual_nfc_beta(lm, {"s1", "s2"}, 0);
  ASSERT_TRUE(cert.has_certificate);
  ASSERT_EQ(cert.beta.size(), 2u);
  EXPECT_DOUBLE_EQ(cert.beta[0], 0.5);
  EXPECT_DOUBLE_EQ(cert.beta[1], 0.5);
  EXPECT_DOUBLE_EQ(cert.epsilon0, 0.0);
}

TEST(PrimalTest, LevelIsInfiniteWhenLeftSupportEscapes) {
  // single right row missing an output the left row can produce
  auto lm = make_matrix({{"a", {"s1"}}, {"b", {"s2"}}}, 2, {0.5, 0.5, 1.0, 0.0});
  EXPECT_TRUE(std::isinf(primal_nfc_epsilon(lm, {"s1", "s2"}, 0)));
  const auto cert = dual_nfc_beta(lm, {"s1", "s2"}, 0);
  EXPECT_FALSE(cert.has_certificate);
  EXPECT_TRUE(std::isinf(cert.epsilon0));

  // every right row has a zero somewhere on the left support, even though
  // no single output escapes both of them at once
  auto pair_escape = make_matrix({{"a", {"s1"}}, {"b", {"s2"}}, {"c", {"s2"}}}, 2,
                                 {0.5, 0.5, 1.0, 0.0, 0.0, 1.0});
  EXPECT_TRUE(std::isinf(primal_nfc_epsilon(pair_escape, {"s1", "s2"}, 0)));

  const auto report = check_nfc(lm, {{"s1", "s2"}}, 100.0);
  EXPECT_FALSE(report.pass);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].witness_output, 1u);
  EXPECT_EQ(report.violations[0].witness_label, "o1");
  EXPECT_TRUE(std::isinf(report.violations[0].epsilon0));
}

TEST(PrimalTest, MatchesLatticeOracleOnRandomInstances) {
  std::mt19937_64 rng(20260819u);
  for (int it = 0; it < 12; ++it) {
    const auto lm = random_matrix(rng, 3, 4, false);
    const auto lefts = datasets_with_secret(lm, "s1");
    double gap = 0.0;
    const double oracle = lattice_level_oracle(lm, "s1", "s2", lefts[0], 60, &gap);
    const double lp = primal_nfc_epsilon(lm, {"s1", "s2"}, lefts[0]);
    EXPECT_GE(lp, oracle - 1e-9);
    EXPECT_LE(lp, oracle + gap);
  }
}

TEST(DualTest, StrongDualityOnRandomInstances) {
  std::mt19937_64 rng(77001u);
  int finite_cases = 0;
  for (int it = 0; it < 200; ++it) {
    const std::size_t nd = 2 + rng() % 7;
    const std::size_t no = 2 + rng() % 7;
    const auto lm = random_matrix(rng, nd, no, it % 5 == 4);
    for (const char* left_secret : {"s1", "s2"}) {
      const SecretLabelPair pair{left_secret, left_secret[1] == '1' ? "s2" : "s1"};
      for (std::size_t left : datasets_with_secret(lm, pair.left)) {
        const double primal = primal_nfc_epsilon(lm, pair, left);
        EXPECT_GE(primal, -1e-12);
        if (std::isinf(primal)) continue;
        ++finite_cases;
        const auto lp_cert = detail::solve_dual_lp(lm, pair, left);
        EXPECT_NEAR(lp_cert.epsilon0, primal, 1e-8);

        const auto cert = dual_nfc_beta(lm, pair, left);
        ASSERT_TRUE(cert.has_certificate);
        double beta_sum = 0.0;
        for (double b : cert.beta) {
          EXPECT_GE(b, -1e-12);
          beta_sum += b;
        }
        EXPECT_NEAR(beta_sum, 1.0, 1e-9);
        // the returned weights certify the optimum, tight at some output
        const auto bound = detail::certified_bound(lm, left, cert.right_datasets, cert.beta);
        EXPECT_NEAR(bound.first, primal, 1e-8);
      }
    }
  }
  EXPECT_GE(finite_cases, 100);
}

TEST(CheckTest, RatioBoundedMatricesPassAtTheirOwnLevel) {
  std::mt19937_64 rng(404u);
  for (int it = 0; it < 20; ++it) {
    const std::size_t nd = 2 + rng() % 2;  // 2 or 3 datasets
    const auto lm = random_matrix(rng, nd, 4, false);
    const double eps = max_log_ratio(lm);
    const auto report = check_nfc(lm, {{"s1", "s2"}}, eps);
    EXPECT_TRUE(report.pass);
    EXPECT_TRUE(report.violations.empty());
    EXPECT_EQ(report.certificates.size(), lm.datasets.size());
    if (nd == 2) {
      for (const auto& cert : report.certificates) EXPECT_TRUE(is_one_hot(cert.beta));
    }
  }
}

TEST(CheckTest, SingleRowCertificatesSurviveAnyChannel) {
  std::mt19937_64 rng(512u);
  for (int it = 0; it < 10; ++it) {
    const auto lm = random_matrix(rng, 2, 3, false);
    const double eps = max_log_ratio(lm) + 1e-12;
    const auto pre = check_nfc(lm, {{"s1", "s2"}}, eps);
    ASSERT_TRUE(pre.pass);
    for (const auto& cert : pre.certificates) ASSERT_TRUE(is_one_hot(cert.beta));

    for (int ch_it = 0; ch_it < 20; ++ch_it) {
      const std::size_t rows = 1 + rng() % 5;
      Mat channel(rows, lm.outputs.size());
      for (std::size_t w = 0; w < channel.cols; ++w) {
        double sum = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
          channel(r, w) = -std::log(uniform_open(rng));
          sum += channel(r, w);
        }
        for (std::size_t r = 0; r < rows; ++r) channel(r, w) /= sum;
      }
      const auto post = check_nfc(postprocess(lm, channel), {{"s1", "s2"}}, eps);
      EXPECT_TRUE(post.pass);
    }
  }
}

TEST(CheckTest, LevelInvariantUnderOutputRefinement) {
  std::mt19937_64 rng(9090u);
  for (int it = 0; it < 10; ++it) {
    const auto lm = random_matrix(rng, 3, 4, false);
    const std::size_t split_col = rng() % 4;
    LikelihoodMatrix fine = lm;
    fine.outputs.push_back("o" + std::to_string(lm.outputs.size()));
    fine.probs = Mat(lm.probs.rows, lm.probs.cols + 1);
    for (std::size_t d = 0; d < lm.probs.rows; ++d) {
      for (std::size_t w = 0; w < lm.probs.cols; ++w)
        fine.probs(d, w) = w == split_col ? 0.5 * lm.probs(d, w) : lm.probs(d, w);
      fine.probs(d, lm.probs.cols) = 0.5 * lm.probs(d, split_col);
    }
    for (const std::size_t left : datasets_with_secret(lm, "s1")) {
      const double coarse_level = primal_nfc_epsilon(lm, {"s1", "s2"}, left);
      const double fine_level = primal_nfc_epsilon(fine, {"s1", "s2"}, left);
      EXPECT_NEAR(fine_level, coarse_level, 1e-9);
    }
  }
}

TEST(CheckTest, BothDirectionsAreAudited) {
  auto lm = make_matrix({{"a", {"s1"}}, {"b", {"s2"}}}, 2, {0.9, 0.1, 0.5, 0.5});
  // listed one way only; the reverse direction is the one that fails
  const auto report = check_nfc(lm, {{"s1", "s2"}}, 1.0);
  EXPECT_FALSE(report.pass);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].pair.left, "s2");
  EXPECT_EQ(report.violations[0].pair.right, "s1");
  EXPECT_EQ(report.violations[0].left_id, "b");
  EXPECT_NEAR(report.violations[0].epsilon0, std::log(5.0), 1e-9);
  EXPECT_EQ(report.violations[0].witness_output, 1u);
  EXPECT_EQ(report.certificates.size(), 1u);

  EXPECT_TRUE(check_nfc(lm, {{"s1", "s2"}}, std::log(5.0) + 1e-6).pass);
  EXPECT_THROW(check_nfc(lm, {{"s1", "s9"}}, 1.0), validation_error);
  EXPECT_THROW(check_nfc(lm, {{"s1", "s2"}}, -0.1), validation_error);
  EXPECT_THROW(check_nfc(lm, {}, 1.0), validation_error);
}

TEST(PostprocessTest, IdentityAndMergeAllChannels) {
  auto lm = make_matrix({{"a", {"s1"}}, {"b", {"s2"}}}, 3,
                        {0.5, 0.3, 0.2, 0.1, 0.4, 0.5});
  const auto same = postprocess(lm, identity(3));
  for (std::size_t i = 0; i < lm.probs.data.size(); ++i)
    EXPECT_DOUBLE_EQ(same.probs.data[i], lm.probs.data[i]);

  Mat merge_all(1, 3, 1.0);
  const auto constant = postprocess(lm, merge_all);
  EXPECT_EQ(constant.outputs.size(), 1u);
  EXPECT_DOUBLE_EQ(primal_nfc_epsilon(constant, {"s1", "s2"}, 0), 0.0);
  EXPECT_DOUBLE_EQ(primal_nfc_epsilon(constant, {"s2", "s1"}, 1), 0.0);

  EXPECT_THROW(postprocess(lm, identity(4)), validation_error);
  Mat bad(2, 3, 0.4);  // columns sum to 0.8
  EXPECT_THROW(postprocess(lm, bad), validation_error);
}

TEST(MergeDemoTest, PassesOnlyThroughTheSplitCertificate) {
  const auto lm = output_merge_demo_matrix();
  validate_likelihood_matrix(lm);

  EXPECT_NEAR(primal_nfc_epsilon(lm, {"s1", "s2"}, 0), 0.1, 1e-9);
  EXPECT_NEAR(lattice_level_oracle(lm, "s1", "s2", 0, 50), 0.1, 1e-9);

  const auto cert = dual_nfc_beta(lm, {"s1", "s2"}, 0);
  ASSERT_TRUE(cert.has_certificate);
  ASSERT_EQ(cert.beta.size(), 2u);
  EXPECT_NEAR(cert.beta[0], 0.5, 1e-9);
  EXPECT_NEAR(cert.beta[1], 0.5, 1e-9);
  EXPECT_FALSE(is_one_hot(cert.beta));

  // both single-row certificates overshoot the audit level
  for (std::size_t k = 0; k < 2; ++k) {
    Vec one_hot{0.0, 0.0};
    one_hot[k] = 1.0;
    EXPECT_GT(detail::certified_bound(lm, 0, cert.right_datasets, one_hot).first, 0.14);
  }

  EXPECT_TRUE(check_nfc(lm, {{"s1", "s2"}}, 0.1).pass);
}

TEST(MergeDemoTest, MergingTheSplitOutputsLowersTheLevel) {
  const auto lm = output_merge_demo_matrix();
  const auto post = postprocess(lm, output_merge_demo_channel());
  validate_likelihood_matrix(post);
  EXPECT_EQ(post.outputs.size(), 3u);

  // merged ratio in closed form: the even split certified the level through
  // a geometric mean, the merge replaces it with an arithmetic mean
  const double q0 = 0.11648, q2 = 0.10540;
  const double c = std::exp(0.1) * std::sqrt(q0 * q2);
  const double expected = std::log(2.0 * c / (q0 + q2));
  const double post_level = primal_nfc_epsilon(post, {"s1", "s2"}, 0);
  EXPECT_NEAR(post_level, expected, 1e-9);
  EXPECT_NEAR(post_level, 0.0988, 5e-4);

  // the level drops strictly below the pre-merge 0.1, so the merged
  // mechanism still passes the audit at the original level
  EXPECT_LT(post_level, 0.1 - 1e-3);
  EXPECT_TRUE(check_nfc(post, {{"s1", "s2"}}, 0.1).pass);
}

TEST(DualTest, ThreeRightDatasetsNeedASplitCertificate) {
  const auto base = output_merge_demo_matrix();
  LikelihoodMatrix lm = base;
  lm.datasets.push_back({"d4", {"s2"}});
  lm.probs = Mat(4, 4);
  for (std::size_t d = 0; d < 3; ++d)
    for (std::size_t w = 0; w < 4; ++w) lm.probs(d, w) = base.probs(d, w);
  const double row4[4] = {0.01, 0.49, 0.01, 0.49};
  for (std::size_t w = 0; w < 4; ++w) lm.probs(3, w) = row4[w];
  validate_likelihood_matrix(lm);

  EXPECT_NEAR(primal_nfc_epsilon(lm, {"s1", "s2"}, 0), 0.1, 1e-9);

  const auto cert = dual_nfc_beta(lm, {"s1", "s2"}, 0);
  ASSERT_TRUE(cert.has_certificate);
  ASSERT_EQ(cert.beta.size(), 3u);
  // no single right row certifies the optimum
  for (std::size_t k = 0; k < 3; ++k) {
    Vec one_hot(3, 0.0);
    one_hot[k] = 1.0;
    EXPECT_GT(detail::certified_bound(lm, 0, cert.right_datasets, one_hot).first, 0.1 + 1e-6);
  }
  EXPECT_FALSE(is_one_hot(cert.beta));
  EXPECT_NEAR(cert.beta[0], 0.5, 1e-7);
  EXPECT_NEAR(cert.beta[1], 0.5, 1e-7);
  EXPECT_NEAR(cert.beta[2], 0.0, 1e-7);
  EXPECT_NEAR(cert.epsilon0, 0.1, 1e-9);
}

NfcCertificate plain_cert(Vec beta, double eps) {
  NfcCertificate c;
  c.pair = {"s1", "s2"};
  c.left_dataset = 0;
  c.right_datasets = {1, 2};
  c.beta = std::move(beta);
  c.epsilon0 = eps;
  return c;
}

TEST(RedundancyTest, MidpointCertificateIsDroppable) {
  const auto a = plain_cert({1.0, 0.0}, 0.3);
  const auto b = plain_cert({0.0, 1.0}, 0.5);
  const auto mid_weak = plain_cert({0.5, 0.5}, 0.45);
  const auto mid_strong = plain_cert({0.5, 0.5}, 0.35);

  EXPECT_TRUE(certificate_is_redundant({a, b, mid_weak}, 2));
  EXPECT_FALSE(certificate_is_redundant({a, b, mid_strong}, 2));
  EXPECT_FALSE(certificate_is_redundant({a, b, mid_weak}, 0));
  EXPECT_FALSE(certificate_is_redundant({a, b, mid_weak}, 1));

  EXPECT_EQ(nonredundant_certificates({a, b, mid_weak}),
            (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(nonredundant_certificates({a, b, mid_strong}),
            (std::vector<std::size_t>{0, 1, 2}));

  // duplicated constraint keeps exactly one copy
  EXPECT_EQ(nonredundant_certificates({a, a}), (std::vector<std::size_t>{1}));

  auto other_program = plain_cert({1.0, 0.0}, 0.3);
  other_program.left_dataset = 5;
  EXPECT_THROW(certificate_is_redundant({a, other_program}, 0), validation_error);
}

TEST(JsonTest, MatrixRoundTripAndRejection) {
  const auto lm = output_merge_demo_matrix();
  const auto j = likelihood_matrix_to_json(lm);
  const auto back = likelihood_matrix_from_json(j);
  ASSERT_EQ(back.datasets.size(), lm.datasets.size());
  EXPECT_EQ(back.datasets[2].id, "d3");
  EXPECT_EQ(back.datasets[2].secrets, lm.datasets[2].secrets);
  EXPECT_EQ(back.outputs, lm.outputs);
  for (std::size_t i = 0; i < lm.probs.data.size(); ++i)
    EXPECT_DOUBLE_EQ(back.probs.data[i], lm.probs.data[i]);

  auto bad_sum = j;
  bad_sum["probs"][0][0] = 0.9;
  EXPECT_THROW(likelihood_matrix_from_json(bad_sum), validation_error);
  auto missing = j;
  missing.erase("outputs");
  EXPECT_THROW(likelihood_matrix_from_json(missing), validation_error);
  auto ragged = j;
  ragged["probs"][1] = {0.5, 0.5};
  EXPECT_THROW(likelihood_matrix_from_json(ragged), validation_error);
}

TEST(JsonTest, CertificateAndReportSerialization) {
  const auto lm = output_merge_demo_matrix();
  const auto report = check_nfc(lm, {{"s1", "s2"}}, 0.1);
  const auto j = nfc_report_to_json(report);
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_DOUBLE_EQ(j.at("epsilon").get<double>(), 0.1);
  EXPECT_EQ(j.at("certificates").size(), report.certificates.size());
  EXPECT_TRUE(j.at("violations").empty());

  NfcCertificate missing;
  missing.pair = {"s1", "s2"};
  missing.epsilon0 = kInf;
  missing.has_certificate = false;
  const auto jc = certificate_to_json(missing);
  EXPECT_FALSE(jc.at("has_certificate").get<bool>());
  EXPECT_TRUE(jc.at("epsilon0").is_null());
}

}  // namespace
}  // namespace pufferkit
