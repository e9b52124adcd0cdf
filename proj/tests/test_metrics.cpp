#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "test_util.hpp"
#include "trackfuse/metrics.hpp"

using namespace trackfuse;

TEST(Iou, KnownValues) {
  const BoundingBox a(0, 0, 10, 10);
  EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
  EXPECT_DOUBLE_EQ(iou(a, BoundingBox(5, 0, 10, 10)), 50.0 / 150.0);
  EXPECT_DOUBLE_EQ(iou(a, BoundingBox(10, 0, 10, 10)), 0.0);  // touching edges
  EXPECT_DOUBLE_EQ(iou(a, BoundingBox(2, 2, 4, 4)), 16.0 / 100.0);
  EXPECT_DOUBLE_EQ(overlap(std::nullopt, a), 0.0);
  EXPECT_DOUBLE_EQ(overlap(a, std::nullopt), 0.0);
}

TEST(Iou, SymmetricBoundedAndMatchesRaster) {
  Rng rng(101);
  for (int i = 0; i < 300; ++i) {
    const auto a = testutil::random_int_box(rng, 20, 12);
    const auto b = testutil::random_int_box(rng, 20, 12);
    const double v = iou(a, b);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_DOUBLE_EQ(v, iou(b, a));
    EXPECT_NEAR(v, oracle::raster_iou(a, b), 1e-9);
  }
}

TEST(Acl, EuclideanCenterDistance) {
  EXPECT_DOUBLE_EQ(acl(BoundingBox(0, 0, 2, 2), BoundingBox(3, 4, 2, 2)), 5.0);
}

namespace {

std::vector<FrameAnnotation> gt_row() {
  return {BoundingBox(0, 0, 10, 10), BoundingBox(0, 0, 10, 10), std::nullopt, BoundingBox(0, 0, 10, 10)};
}

}  // namespace

TEST(Otb, PrecisionSuccessIgnoreAbsentGroundtruth) {
  const auto gt = gt_row();
  const std::vector<TrackerFrameOutput> pred{
      {1, BoundingBox(0, 0, 10, 10)}, {1, BoundingBox(30, 0, 10, 10)}, {1, BoundingBox(0, 0, 10, 10)}, {1, std::nullopt}};
  EXPECT_DOUBLE_EQ(otb_precision(pred, gt, 20.0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(otb_success(pred, gt, 0.5), 1.0 / 3.0);
  // strict comparisons at the thresholds
  EXPECT_DOUBLE_EQ(otb_precision(pred, gt, 30.0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(otb_success(pred, gt, 1.0), 0.0);
}

TEST(Otb, AucMatchesMeanSuccessOverGrid) {
  Rng rng(7);
  const auto b = testutil::random_bundle(rng, 2, 60);
  const OtbConfig cfg;
  const auto& pred = b.traces[0].frames;
  double sum = 0.0;
  for (int k = 0; k < cfg.auc_grid; ++k) sum += otb_success(pred, b.groundtruth, k / double(cfg.auc_grid - 1));
  EXPECT_NEAR(otb_auc(pred, b.groundtruth, cfg), sum / cfg.auc_grid, 1e-12);
}

TEST(Otb, AllAbsentGroundtruthGivesZero) {
  const std::vector<FrameAnnotation> gt(3);
  const std::vector<TrackerFrameOutput> pred(3, {1.0, BoundingBox(0, 0, 1, 1)});
  EXPECT_EQ(otb_precision(pred, gt, 20), 0.0);
  EXPECT_EQ(otb_auc(pred, gt, {}), 0.0);
}

TEST(Otb, TreAveragesSegmentsWithVisibleFrames) {
  std::vector<FrameAnnotation> gt(4, BoundingBox(0, 0, 10, 10));
  gt[2] = gt[3] = std::nullopt;
  const std::vector<TrackerFrameOutput> pred{
      {1, BoundingBox(0, 0, 10, 10)}, {1, BoundingBox(50, 50, 10, 10)}, {1, std::nullopt}, {1, std::nullopt}};
  OtbConfig cfg;
  cfg.tre_segments = 2;
  // segment [0,2) has success 1/2; segment [2,4) has nothing visible and is skipped
  EXPECT_DOUBLE_EQ(otb_tre(pred, gt, cfg, OtbMetric::success), 0.5);
  cfg.tre_segments = 5;
  EXPECT_THROW(otb_tre(pred, gt, cfg, OtbMetric::success), std::invalid_argument);
}

TEST(Otb, LengthMismatchThrows) {
  const std::vector<FrameAnnotation> gt(2, BoundingBox(0, 0, 1, 1));
  const std::vector<TrackerFrameOutput> pred(3);
  EXPECT_THROW(otb_success(pred, gt, 0.5), std::invalid_argument);
  EXPECT_THROW(vot_lt_eval(pred, gt), std::invalid_argument);
}

TEST(VotLt, HandComputedExample) {
  // gt visible on frames 0,1,2; frame 3 absent.
  const std::vector<FrameAnnotation> gt{BoundingBox(0, 0, 10, 10), BoundingBox(0, 0, 10, 10), BoundingBox(0, 0, 10, 10),
                                        std::nullopt};
  const std::vector<TrackerFrameOutput> pred{{0.9, BoundingBox(0, 0, 10, 10)},
                                             {0.5, BoundingBox(0, 0, 10, 10)},
                                             {0.2, std::nullopt},
                                             {0.7, BoundingBox(0, 0, 5, 5)}};
  const auto r = vot_lt_eval(pred, gt);
  ASSERT_EQ(r.taus.size(), 5u);
  EXPECT_TRUE(std::isinf(r.taus[0]) && r.taus[0] < 0);
  EXPECT_EQ(r.taus[4], 0.9);
  // tau = 0.9: one frame, overlap 1.
  EXPECT_DOUBLE_EQ(r.pr_curve[4], 1.0);
  EXPECT_DOUBLE_EQ(r.re_curve[4], 1.0 / 3.0);
  // tau = 0.7: adds the false positive on the absent frame.
  EXPECT_DOUBLE_EQ(r.pr_curve[3], 0.5);
  // tau = 0.5: adds a second perfect overlap.
  EXPECT_DOUBLE_EQ(r.pr_curve[2], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.re_curve[2], 2.0 / 3.0);
  // the box-less frame never counts as reported
  EXPECT_DOUBLE_EQ(r.pr_curve[1], r.pr_curve[2]);
  EXPECT_EQ(r.tau_sigma, 0.5);  // largest threshold reaching the best F1 (ties with 0.2 and -inf)
  EXPECT_EQ(r.n_p, 3u);
  EXPECT_EQ(r.n_g, 3u);
  EXPECT_FALSE(r.degenerate);
}

TEST(VotLt, ThresholdAboveEveryScoreReportsNothing) {
  const std::vector<FrameAnnotation> gt{BoundingBox(0, 0, 10, 10)};
  const std::vector<TrackerFrameOutput> pred{{0.3, BoundingBox(0, 0, 10, 10)}};
  const auto pt = lt_point(pred, gt, 0.31);
  EXPECT_EQ(pt.n_p, 0u);
  EXPECT_EQ(pt.precision, 0.0);
  EXPECT_EQ(pt.f1, 0.0);
  EXPECT_TRUE(pt.degenerate);
}

TEST(VotLt, AllFramesAbsentIsDegenerate) {
  const std::vector<FrameAnnotation> gt(3);
  const std::vector<TrackerFrameOutput> pred(3, {0.5, BoundingBox(0, 0, 1, 1)});
  const auto r = vot_lt_eval(pred, gt);
  EXPECT_EQ(r.n_g, 0u);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.f1, 0.0);
}

TEST(VotLt, NonFiniteScoreRejected) {
  const std::vector<FrameAnnotation> gt(1);
  const std::vector<TrackerFrameOutput> pred{{std::nan(""), std::nullopt}};
  EXPECT_THROW(vot_lt_eval(pred, gt), std::invalid_argument);
}

TEST(VotLt, MatchesBruteForceOnDyadicCases) {
  Rng rng(2024);
  for (int c = 0; c < 300; ++c) {
    const auto cs = testutil::dyadic_case(rng);
    const auto r = vot_lt_eval(cs.pred, cs.gt);
    const auto b = oracle::brute_lt(cs.pred, cs.gt);
    ASSERT_EQ(r.taus, b.taus);
    EXPECT_EQ(r.pr_curve, b.pr);
    EXPECT_EQ(r.re_curve, b.re);
    EXPECT_EQ(r.f1_curve, b.f1);
    EXPECT_EQ(r.tau_index, b.best);
  }
}

TEST(VotLt, MatchesBruteForceOnGeneralBoxes) {
  Rng rng(77);
  for (int c = 0; c < 100; ++c) {
    auto b = testutil::random_bundle(rng, 1, 1 + rng.below(40));
    for (auto& f : b.traces[0].frames) f.score = std::round(f.score * 5) / 5;  // force ties
    const auto r = vot_lt_eval(b.traces[0], b.groundtruth);
    const auto o = oracle::brute_lt(b.traces[0].frames, b.groundtruth);
    ASSERT_EQ(r.taus, o.taus);
    for (std::size_t i = 0; i < o.taus.size(); ++i) {
      EXPECT_NEAR(r.pr_curve[i], o.pr[i], 1e-12);
      EXPECT_NEAR(r.re_curve[i], o.re[i], 1e-12);
      EXPECT_NEAR(r.f1_curve[i], o.f1[i], 1e-12);
    }
  }
}

TEST(VotLt, CurvesHaveExpectedShape) {
  Rng rng(5);
  for (int c = 0; c < 50; ++c) {
    const auto b = testutil::random_bundle(rng, 1, 50);
    const auto r = vot_lt_eval(b.traces[0], b.groundtruth);
    EXPECT_TRUE(std::is_sorted(r.taus.begin(), r.taus.end()));
    // recall can only grow as the threshold drops
    for (std::size_t i = 1; i < r.re_curve.size(); ++i) EXPECT_LE(r.re_curve[i], r.re_curve[i - 1] + 1e-15);
    for (std::size_t i = 0; i < r.f1_curve.size(); ++i) {
      EXPECT_GE(r.pr_curve[i], 0.0);
      EXPECT_LE(r.pr_curve[i], 1.0);
      EXPECT_LE(r.f1_curve[i], r.f1 + 0.0);
    }
    // agrees with the fixed-threshold helper at tau_sigma
    const auto pt = lt_point(b.traces[0].frames, b.groundtruth, r.tau_sigma);
    EXPECT_NEAR(pt.precision, r.precision, 1e-12);
    EXPECT_NEAR(pt.recall, r.recall, 1e-12);
    EXPECT_EQ(pt.n_p, r.n_p);
  }
}

TEST(VotLt, FrameOrderDoesNotMatter) {
  Rng rng(8);
  auto b = testutil::random_bundle(rng, 1, 80);
  const auto r1 = vot_lt_eval(b.traces[0], b.groundtruth);
  std::vector<std::size_t> idx(80);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), std::mt19937(3));
  std::vector<TrackerFrameOutput> p2;
  std::vector<FrameAnnotation> g2;
  for (auto i : idx) {
    p2.push_back(b.traces[0].frames[i]);
    g2.push_back(b.groundtruth[i]);
  }
  const auto r2 = vot_lt_eval(p2, g2);
  EXPECT_EQ(r1.f1_curve, r2.f1_curve);
  EXPECT_EQ(r1.tau_sigma, r2.tau_sigma);
}

TEST(VotLt, PooledEqualsConcatenatedSequence) {
  Rng rng(9);
  const auto a = testutil::random_bundle(rng, 1, 30);
  const auto b = testutil::random_bundle(rng, 1, 45);
  std::vector<TrackerFrameOutput> p = a.traces[0].frames;
  p.insert(p.end(), b.traces[0].frames.begin(), b.traces[0].frames.end());
  std::vector<FrameAnnotation> g = a.groundtruth;
  g.insert(g.end(), b.groundtruth.begin(), b.groundtruth.end());
  const std::vector<TraceWithGroundtruth> both{{a.traces[0].frames, a.groundtruth}, {b.traces[0].frames, b.groundtruth}};
  const std::vector<TraceWithGroundtruth> swapped{both[1], both[0]};
  const auto pooled = vot_lt_eval_pooled(both);
  EXPECT_EQ(pooled.f1_curve, vot_lt_eval(p, g).f1_curve);
  EXPECT_EQ(pooled.f1_curve, vot_lt_eval_pooled(swapped).f1_curve);
}

TEST(VotLt, StrictlyIncreasingTransformKeepsPointValues) {
  Rng rng(10);
  for (int c = 0; c < 30; ++c) {
    auto b = testutil::random_bundle(rng, 1, 40);
    const auto r1 = vot_lt_eval(b.traces[0], b.groundtruth);
    for (auto& f : b.traces[0].frames) f.score = f.score * f.score * f.score + f.score;
    const auto r2 = vot_lt_eval(b.traces[0], b.groundtruth);
    EXPECT_EQ(r1.precision, r2.precision);
    EXPECT_EQ(r1.recall, r2.recall);
    EXPECT_EQ(r1.f1, r2.f1);
    EXPECT_EQ(r1.tau_index, r2.tau_index);
  }
}
