#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "exonscan/eval.hpp"
#include "oracles.hpp"

using namespace exonscan;

namespace {

ScoredRegion sr(const std::string& id, std::size_t s, std::size_t e, double snr = 1.0) {
    return ScoredRegion{id, CandidateRegion{s, e, RegionKind::Both}, snr};
}

/// Base-by-base counts from boolean masks.
ConfusionCounts oracle_counts(const std::vector<Annotation>& truth, const std::vector<ScoredRegion>& pred,
                              const SequenceLengths& lengths) {
    ConfusionCounts c;
    for (const auto& [id, len] : lengths) {
        std::vector<bool> t(len + 1, false), p(len + 1, false);
        for (const auto& a : truth) {
            if (a.seq_id == id) {
                for (auto i = a.start; i <= a.end; ++i) t[i] = true;
            }
        }
        for (const auto& r : pred) {
            if (r.seq_id == id) {
                for (auto i = r.region.start; i <= r.region.end; ++i) p[i] = true;
            }
        }
        for (std::size_t i = 1; i <= len; ++i) {
            if (t[i] && p[i]) ++c.tp;
            else if (t[i]) ++c.fn;
            else if (p[i]) ++c.fp;
            else ++c.tn;
        }
    }
    return c;
}

struct RandomCase {
    SequenceLengths lengths;
    std::vector<Annotation> truth;
    std::vector<ScoredRegion> pred;
};

RandomCase random_case(oracle::Lcg& rng) {
    RandomCase rc;
    for (int s = 0; s < 3; ++s) {
        std::string id = "s" + std::to_string(s);
        std::size_t len = 20 + rng.below(200);
        rc.lengths[id] = len;
        auto interval = [&]() {
            std::size_t a = 1 + rng.below(len), b = 1 + rng.below(len);
            return std::pair{std::min(a, b), std::max(a, b)};
        };
        for (std::size_t k = 0, n = rng.below(4); k < n; ++k) {
            auto [a, b] = interval();
            rc.truth.push_back({id, a, b});
        }
        for (std::size_t k = 0, n = 1 + rng.below(6); k < n; ++k) {
            auto [a, b] = interval();
            rc.pred.push_back(sr(id, a, b, double(rng.below(5))));
        }
    }
    return rc;
}

} // namespace

TEST(Confusion, HandCountedExample) {
    auto c = confusion({{"s", 6, 15}}, {sr("s", 1, 10)}, {{"s", 20}});
    EXPECT_EQ(c, (ConfusionCounts{5, 5, 5, 5}));
    EXPECT_EQ(sensitivity(c), 0.5);
    EXPECT_EQ(specificity_paper(c), 0.5);
    EXPECT_EQ(false_positive_rate(c), 0.5);
}

TEST(Confusion, PerfectAndEmpty) {
    std::vector<Annotation> truth = {{"a", 3, 10}, {"a", 20, 29}, {"b", 1, 5}};
    SequenceLengths len = {{"a", 40}, {"b", 5}};
    std::vector<ScoredRegion> perfect;
    for (const auto& t : truth) perfect.push_back(sr(t.seq_id, t.start, t.end));
    auto c = confusion(truth, perfect, len);
    EXPECT_EQ(c.tp, 23u);
    EXPECT_EQ(c.fp, 0u);
    EXPECT_EQ(c.fn, 0u);
    EXPECT_EQ(c.tn, 22u);

    auto e = confusion(truth, std::vector<ScoredRegion>{}, len);
    EXPECT_EQ(e.tp, 0u);
    EXPECT_EQ(e.fp, 0u);
    EXPECT_EQ(e.fn, 23u);
    EXPECT_EQ(e.total(), 45u);
}

TEST(Confusion, UnscoredOverload) {
    std::vector<std::pair<std::string, CandidateRegion>> p = {{"s", {1, 10, RegionKind::Both}}};
    EXPECT_EQ(confusion({{"s", 6, 15}}, p, {{"s", 20}}), (ConfusionCounts{5, 5, 5, 5}));
}

TEST(Confusion, Errors) {
    SequenceLengths len = {{"s", 20}};
    EXPECT_THROW(confusion({{"x", 1, 2}}, std::vector<ScoredRegion>{}, len), DataError);
    EXPECT_THROW(confusion({}, {sr("x", 1, 2)}, len), DataError);
    EXPECT_THROW(confusion({{"s", 1, 21}}, std::vector<ScoredRegion>{}, len), DataError);
    EXPECT_THROW(confusion({}, {sr("s", 0, 3)}, len), DataError);
}

TEST(Confusion, MatchesPerBaseOracle) {
    oracle::Lcg rng(11);
    for (int t = 0; t < 300; ++t) {
        auto rc = random_case(rng);
        EXPECT_EQ(confusion(rc.truth, rc.pred, rc.lengths), oracle_counts(rc.truth, rc.pred, rc.lengths));
    }
}

TEST(Confusion, InvariantUnderReorderAndSplit) {
    oracle::Lcg rng(13);
    for (int t = 0; t < 100; ++t) {
        auto rc = random_case(rng);
        const auto base = confusion(rc.truth, rc.pred, rc.lengths);
        auto shuffled = rc.pred;
        std::reverse(shuffled.begin(), shuffled.end());
        std::rotate(shuffled.begin(), shuffled.begin() + shuffled.size() / 2, shuffled.end());
        EXPECT_EQ(confusion(rc.truth, shuffled, rc.lengths), base);

        std::vector<ScoredRegion> split;
        for (const auto& r : rc.pred) {
            if (r.region.length() >= 2) {
                auto mid = r.region.start + rng.below(r.region.length() - 1);
                split.push_back(sr(r.seq_id, r.region.start, mid));
                split.push_back(sr(r.seq_id, mid + 1, r.region.end));
            } else {
                split.push_back(r);
            }
        }
        EXPECT_EQ(confusion(rc.truth, split, rc.lengths), base);
    }
}

TEST(Rates, ExamplesAndErrors) {
    EXPECT_EQ(sensitivity({7, 0, 0, 0}), 1.0);
    EXPECT_EQ(sensitivity({0, 0, 0, 9}), 0.0);
    EXPECT_EQ(specificity_paper({3, 0, 0, 0}), 1.0);
    EXPECT_EQ(specificity_paper({0, 0, 4, 0}), 0.0);
    try {
        sensitivity({0, 3, 3, 0});
        FAIL();
    } catch (const DataError& e) {
        EXPECT_STREQ(e.what(), "no positive ground truth");
    }
    try {
        specificity_paper({0, 3, 0, 3});
        FAIL();
    } catch (const DataError& e) {
        EXPECT_STREQ(e.what(), "no positive predictions");
    }
}

TEST(Auc, HandTrapezoids) {
    auto curve = [](std::vector<RocPoint> p) { return RocCurve{std::move(p), RocConvention::Standard}; };
    EXPECT_NEAR(auc(curve({{0, 0}, {0.2, 0.8}, {1, 1}})), 0.80, 1e-12);
    EXPECT_EQ(auc(curve({{0, 0}, {1, 1}})), 0.5);
    EXPECT_EQ(auc(curve({{0, 0}, {0, 1}, {1, 1}})), 1.0);
    EXPECT_NEAR(auc(curve({{1, 1}, {0.2, 0.8}, {0, 0}})), 0.80, 1e-12); // order does not matter
    EXPECT_THROW(auc(curve({{0, 0}})), DataError);
    EXPECT_THROW(auc(curve({})), DataError);
}

// Length 20, truth [6,15]. Regions A=[6,10] snr 3, C=[16,20] snr 2.5,
// B=[11,15] snr 2. By hand:
//   t = inf : tp 0  fp 0  fn 10 tn 10
//   t = 3   : tp 5  fp 0  fn 5  tn 10
//   t = 2.5 : tp 5  fp 5  fn 5  tn 5
//   t = 2   : tp 10 fp 5  fn 0  tn 5
TEST(Roc, ThreeRegionsByHand) {
    std::vector<Annotation> truth = {{"s", 6, 15}};
    std::vector<ScoredRegion> scored = {sr("s", 6, 10, 3.0), sr("s", 11, 15, 2.0), sr("s", 16, 20, 2.5)};
    SequenceLengths len = {{"s", 20}};
    const double inf = std::numeric_limits<double>::infinity();

    auto sweep = threshold_sweep(truth, scored, len);
    ASSERT_EQ(sweep.size(), 4u);
    EXPECT_EQ(sweep[0].first, inf);
    EXPECT_EQ(sweep[0].second, (ConfusionCounts{0, 10, 0, 10}));
    EXPECT_EQ(sweep[1].second, (ConfusionCounts{5, 10, 0, 5}));
    EXPECT_EQ(sweep[2].second, (ConfusionCounts{5, 5, 5, 5}));
    EXPECT_EQ(sweep[3].second, (ConfusionCounts{10, 5, 5, 0}));

    auto std_curve = roc(truth, scored, len, RocConvention::Standard);
    std::vector<RocPoint> expect_std = {
        {0.0, 0.0, inf}, {0.0, 0.5, 3.0}, {0.5, 0.5, 2.5}, {0.5, 1.0, 2.0}, {1.0, 1.0, -inf}};
    EXPECT_EQ(std_curve.points, expect_std);
    EXPECT_EQ(auc(std_curve), 0.75);

    auto paper_curve = roc(truth, scored, len, RocConvention::Paper);
    std::vector<RocPoint> expect_paper = {{0.0, 0.5, 3.0}, {1.0 - 10.0 / 15.0, 1.0, 2.0}, {0.5, 0.5, 2.5}};
    EXPECT_EQ(paper_curve.points, expect_paper);
    EXPECT_NEAR(auc(paper_curve), 0.375, 1e-12);
}

TEST(Roc, TrivialShapes) {
    SequenceLengths len = {{"s", 30}};
    auto perfect = roc({{"s", 5, 14}}, {sr("s", 5, 14, 4.0)}, len, RocConvention::Standard);
    EXPECT_TRUE(std::any_of(perfect.points.begin(), perfect.points.end(),
                            [](const RocPoint& p) { return p.x == 0.0 && p.y == 1.0; }));
    EXPECT_EQ(auc(perfect), 1.0);

    std::vector<ScoredRegion> wrong = {sr("s", 20, 25, 3.0), sr("s", 1, 4, 1.0)};
    for (auto conv : {RocConvention::Paper, RocConvention::Standard}) {
        for (const auto& p : roc({{"s", 5, 14}}, wrong, len, conv).points) {
            if (std::isfinite(p.threshold)) {
                EXPECT_EQ(p.y, 0.0);
            }
        }
    }
    EXPECT_THROW(roc({{"s", 5, 14}}, {}, len, RocConvention::Standard), DataError);
    EXPECT_THROW(roc({}, {sr("s", 1, 3)}, len, RocConvention::Standard), DataError);
}

TEST(Roc, SweepMatchesConfusionAndIsMonotone) {
    oracle::Lcg rng(17);
    for (int t = 0; t < 200; ++t) {
        auto rc = random_case(rng);
        auto sweep = threshold_sweep(rc.truth, rc.pred, rc.lengths);
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            std::vector<ScoredRegion> above;
            for (const auto& r : rc.pred) {
                if (r.snr >= sweep[i].first) above.push_back(r);
            }
            EXPECT_EQ(sweep[i].second, oracle_counts(rc.truth, above, rc.lengths));
            if (i > 0) {
                EXPECT_GT(sweep[i - 1].first, sweep[i].first);
                EXPECT_LE(sweep[i - 1].second.tp, sweep[i].second.tp);
                EXPECT_LE(sweep[i - 1].second.fp, sweep[i].second.fp);
            }
        }
        if (rc.truth.empty()) continue;
        auto curve = roc(rc.truth, rc.pred, rc.lengths, RocConvention::Standard);
        for (std::size_t i = 1; i < curve.points.size(); ++i) {
            EXPECT_LE(curve.points[i - 1].x, curve.points[i].x);
            EXPECT_LE(curve.points[i - 1].y, curve.points[i].y);
        }
        const double a = auc(curve);
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, 1.0);
        auto paper = roc(rc.truth, rc.pred, rc.lengths, RocConvention::Paper);
        for (std::size_t i = 1; i < paper.points.size(); ++i) {
            EXPECT_LE(paper.points[i - 1].x, paper.points[i].x);
        }
    }
}
