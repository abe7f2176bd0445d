#include <gtest/gtest.h>

#include "edgeperf/metrics.hpp"
#include "edgeperf/rng.hpp"

using namespace edgeperf;

TEST(Iou, IdenticalBoxes) {
    BoundingBox a{0, 0, 10, 10};
    EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
}

TEST(Iou, DisjointBoxes) {
    EXPECT_DOUBLE_EQ(iou({0, 0, 10, 10}, {20, 20, 30, 30}), 0.0);
}

TEST(Iou, HalfShiftedOverlap) {
    // overlap 5x10 = 50, union 100 + 100 - 50 = 150
    EXPECT_DOUBLE_EQ(iou({0, 0, 10, 10}, {5, 0, 15, 10}), 50.0 / 150.0);
}

TEST(Iou, ZeroUnionIsZero) {
    BoundingBox point{3, 3, 3, 3};
    EXPECT_EQ(iou(point, point), 0.0);
    EXPECT_EQ(iou({0, 0, 0, 5}, {0, 0, 0, 5}), 0.0);
}

TEST(Iou, TouchingEdgesHaveNoOverlap) {
    EXPECT_EQ(iou({0, 0, 10, 10}, {10, 0, 20, 10}), 0.0);
}

TEST(Iou, RejectsInvertedBox) {
    EXPECT_THROW(iou({10, 0, 0, 10}, {0, 0, 1, 1}), DomainViolation);
}

TEST(AveragePrecision, Examples) {
    EXPECT_DOUBLE_EQ(average_precision({50, 50, 0}), 0.5);
    EXPECT_DOUBLE_EQ(average_precision({10, 0, 3}), 1.0);
    EXPECT_DOUBLE_EQ(average_precision({0, 0, 5}), 0.0);
}

TEST(AverageRecall, Examples) {
    EXPECT_DOUBLE_EQ(average_recall({50, 0, 50}), 0.5);
    EXPECT_DOUBLE_EQ(average_recall({10, 4, 0}), 1.0);
    EXPECT_DOUBLE_EQ(average_recall({0, 0, 0}), 0.0);
}

TEST(DetectionSuccess, Examples) {
    BoundingBox a{0, 0, 10, 10};
    EXPECT_TRUE(detection_success(a, a, 0.95));
    EXPECT_FALSE(detection_success(a, {20, 20, 30, 30}, 0.5));
    EXPECT_FALSE(detection_success(a, {5, 0, 15, 10}, 0.5));
}

TEST(DetectionSuccess, ThresholdOutsideEvaluatedRange) {
    BoundingBox a{0, 0, 10, 10};
    EXPECT_THROW(detection_success(a, a, 0.3), DomainViolation);
    EXPECT_THROW(detection_success(a, a, 0.99), DomainViolation);
}

namespace {

BoundingBox random_box(Rng& rng) {
    double x0 = rng.uniform(-100, 100), y0 = rng.uniform(-100, 100);
    return {x0, y0, x0 + rng.uniform(0.5, 80), y0 + rng.uniform(0.5, 80)};
}

}  // namespace

TEST(IouProperties, SymmetricSelfOneTranslationInvariant) {
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        auto a = random_box(rng);
        auto b = random_box(rng);
        double v = iou(a, b);
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0);
        ASSERT_EQ(v, iou(b, a));
        ASSERT_DOUBLE_EQ(iou(a, a), 1.0);
        double dx = rng.uniform(-50, 50), dy = rng.uniform(-50, 50);
        BoundingBox a2{a.x_min + dx, a.y_min + dy, a.x_max + dx, a.y_max + dy};
        BoundingBox b2{b.x_min + dx, b.y_min + dy, b.x_max + dx, b.y_max + dy};
        ASSERT_NEAR(iou(a2, b2), v, 1e-12);
    }
}

TEST(CountMetricsProperties, StayInUnitInterval) {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        DetectionCounts c{rng.next() % 1000, rng.next() % 1000, rng.next() % 1000};
        double p = average_precision(c), r = average_recall(c);
        ASSERT_GE(p, 0.0);
        ASSERT_LE(p, 1.0);
        ASSERT_GE(r, 0.0);
        ASSERT_LE(r, 1.0);
    }
}
