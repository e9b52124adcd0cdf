#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "trackfuse/core.hpp"

using namespace trackfuse;

TEST(BoundingBox, RejectsDegenerateAndNonFinite) {
  EXPECT_THROW(BoundingBox(0, 0, 0, 5), std::invalid_argument);
  EXPECT_THROW(BoundingBox(0, 0, 5, -1), std::invalid_argument);
  EXPECT_THROW(BoundingBox(std::nan(""), 0, 5, 5), std::invalid_argument);
  EXPECT_THROW(BoundingBox(0, std::numeric_limits<double>::infinity(), 5, 5), std::invalid_argument);
  EXPECT_FALSE(BoundingBox::try_make(0, 0, 0, 1).has_value());
  EXPECT_TRUE(BoundingBox::try_make(-3, -4, 1, 1).has_value());
}

TEST(BoundingBox, DerivedQuantities) {
  const BoundingBox b(10, 20, 30, 40);
  EXPECT_DOUBLE_EQ(b.right(), 40);
  EXPECT_DOUBLE_EQ(b.bottom(), 60);
  EXPECT_DOUBLE_EQ(b.area(), 1200);
  EXPECT_EQ(center(b), (Point{25, 40}));
}

namespace {

SequenceBundle two_tracker_bundle() {
  SequenceBundle b{"seq", {BoundingBox(0, 0, 10, 10), std::nullopt}, {}};
  b.traces.push_back({"a", {{0.5, BoundingBox(0, 0, 10, 10)}, {0.1, std::nullopt}}});
  b.traces.push_back({"b", {{0.4, BoundingBox(1, 1, 10, 10)}, {0.2, BoundingBox(5, 5, 3, 3)}}});
  return b;
}

}  // namespace

TEST(Bundle, ValidBundlePasses) {
  EXPECT_TRUE(validate_bundle(two_tracker_bundle()).empty());
  EXPECT_NO_THROW(require_valid(two_tracker_bundle()));
}

TEST(Bundle, ReportsEveryViolation) {
  auto b = two_tracker_bundle();
  b.traces[1].tracker_name = "a";
  b.traces[0].frames[1].score = std::nan("");
  b.traces[1].frames.pop_back();
  const auto report = validate_bundle(b);
  ASSERT_EQ(report.size(), 3u);
  EXPECT_EQ(report[0].rule, "non-finite score");
  EXPECT_EQ(report[0].frame, std::optional<std::size_t>(1));
  EXPECT_EQ(report[1].rule, "duplicate tracker name");
  EXPECT_NE(report[2].rule.find("differs from sequence length"), std::string::npos);
  EXPECT_THROW(require_valid(b), std::invalid_argument);
}

TEST(Bundle, NeedsTwoTrackersAndFrames) {
  SequenceBundle b{"x", {}, {{"only", {}}}};
  const auto report = validate_bundle(b);
  ASSERT_EQ(report.size(), 2u);
  EXPECT_EQ(report[0].rule, "sequence has no frames");
  EXPECT_EQ(report[1].rule, "fewer than 2 trackers");
}

TEST(Bundle, ViolationFormatting) {
  EXPECT_EQ(to_string(Violation{3, "kcf", "non-finite score"}), "non-finite score [tracker kcf] [frame 3]");
}
