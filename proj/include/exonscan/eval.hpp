#pragma once

// Nucleotide-level accuracy: confusion counts, Sn/Sp, ROC and AUC.
//
// Truth and prediction intervals are unioned per sequence before counting,
// so overlapping predictions count each base once. Two ROC conventions are
// provided: `Paper` plots 1 - TP/(TP+FP) (one minus precision) against Sn,
// `Standard` plots FP/(FP+TN) against Sn.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "exonscan/types.hpp"

namespace exonscan {

struct ConfusionCounts {
    std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;

    std::uint64_t total() const noexcept { return tp + tn + fp + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
        tp += o.tp;
        tn += o.tn;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

using SequenceLengths = std::map<std::string, std::size_t>;

struct Interval {
    std::size_t start, end; // 1-based inclusive
};

/// Sorted, disjoint, non-adjacent union of the input intervals.
inline std::vector<Interval> merge_intervals(std::vector<Interval> v) {
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) {
        return a.start != b.start ? a.start < b.start : a.end < b.end;
    });
    std::vector<Interval> out;
    for (const auto& iv : v) {
        if (!out.empty() && iv.start <= out.back().end + 1) {
            out.back().end = std::max(out.back().end, iv.end);
        } else {
            out.push_back(iv);
        }
    }
    return out;
}

inline std::size_t covered(const std::vector<Interval>& merged) {
    std::size_t n = 0;
    for (const auto& iv : merged) {
        n += iv.end - iv.start + 1;
    }
    return n;
}

/// Size of the intersection of two merged interval lists.
inline std::size_t intersection_size(const std::vector<Interval>& a, const std::vector<Interval>& b) {
    std::size_t n = 0, i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const std::size_t lo = std::max(a[i].start, b[j].start);
        const std::size_t hi = std::min(a[i].end, b[j].end);
        if (lo <= hi) {
            n += hi - lo + 1;
        }
        (a[i].end < b[j].end) ? ++i : ++j;
    }
    return n;
}

namespace detail {

inline void check_interval(const SequenceLengths& lengths, const std::string& id, std::size_t start, std::size_t end,
                           const char* what) {
    auto it = lengths.find(id);
    if (it == lengths.end()) {
        throw DataError(std::string(what) + " refers to unknown sequence '" + id + "'");
    }
    if (start < 1 || end < start || end > it->second) {
        throw DataError(std::string(what) + " [" + std::to_string(start) + ", " + std::to_string(end) +
                        "] lies outside sequence '" + id + "' of length " + std::to_string(it->second));
    }
}

} // namespace detail

inline ConfusionCounts confusion(const std::vector<Annotation>& truth, const std::vector<ScoredRegion>& predicted,
                                 const SequenceLengths& lengths) {
    std::map<std::string, std::vector<Interval>> t_by_seq, p_by_seq;
    for (const auto& a : truth) {
        detail::check_interval(lengths, a.seq_id, a.start, a.end, "truth interval");
        t_by_seq[a.seq_id].push_back({a.start, a.end});
    }
    for (const auto& p : predicted) {
        detail::check_interval(lengths, p.seq_id, p.region.start, p.region.end, "predicted interval");
        p_by_seq[p.seq_id].push_back({p.region.start, p.region.end});
    }
    ConfusionCounts c;
    for (const auto& [id, len] : lengths) {
        const auto t = merge_intervals(t_by_seq[id]);
        const auto p = merge_intervals(p_by_seq[id]);
        const std::size_t nt = covered(t), np = covered(p), both = intersection_size(t, p);
        c.tp += both;
        c.fn += nt - both;
        c.fp += np - both;
        c.tn += len - (nt + np - both);
    }
    return c;
}

/// Convenience overload for unscored predictions.
inline ConfusionCounts confusion(const std::vector<Annotation>& truth,
                                 const std::vector<std::pair<std::string, CandidateRegion>>& predicted,
                                 const SequenceLengths& lengths) {
    std::vector<ScoredRegion> scored;
    scored.reserve(predicted.size());
    for (const auto& [id, r] : predicted) {
        scored.push_back(ScoredRegion{id, r, 0.0});
    }
    return confusion(truth, scored, lengths);
}

/// Sn = TP / (TP + FN).
inline double sensitivity(const ConfusionCounts& c) {
    if (c.tp + c.fn == 0) {
        throw DataError("no positive ground truth");
    }
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

/// Sp as TP / (TP + FP); this is what is usually called precision.
inline double specificity_paper(const ConfusionCounts& c) {
    if (c.tp + c.fp == 0) {
        throw DataError("no positive predictions");
    }
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

/// FP / (FP + TN), the false-positive rate.
inline double false_positive_rate(const ConfusionCounts& c) {
    if (c.fp + c.tn == 0) {
        throw DataError("no negative ground truth");
    }
    return static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
}

enum class RocConvention { Paper, Standard };

inline const char* to_string(RocConvention c) noexcept { return c == RocConvention::Paper ? "paper" : "standard"; }

struct RocPoint {
    double x = 0.0;
    double y = 0.0;
    double threshold = 0.0; // predicted set is {snr >= threshold}

    friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
    std::vector<RocPoint> points;
    RocConvention convention = RocConvention::Standard;
};

/// Confusion counts at every distinct threshold, highest threshold first.
/// The first entry is the +inf sentinel (nothing predicted). Coverage is
/// tracked per base so each threshold step costs only the length of the
/// regions it adds.
inline std::vector<std::pair<double, ConfusionCounts>> threshold_sweep(const std::vector<Annotation>& truth,
                                                                       const std::vector<ScoredRegion>& scored,
                                                                       const SequenceLengths& lengths) {
    struct SeqState {
        std::vector<std::uint8_t> is_truth;
        std::vector<std::uint32_t> coverage;
    };
    std::map<std::string, SeqState> state;
    for (const auto& [id, len] : lengths) {
        state[id] = SeqState{std::vector<std::uint8_t>(len + 1, 0), std::vector<std::uint32_t>(len + 1, 0)};
    }
    ConfusionCounts c;
    for (const auto& a : truth) {
        detail::check_interval(lengths, a.seq_id, a.start, a.end, "truth interval");
        auto& t = state[a.seq_id].is_truth;
        for (std::size_t i = a.start; i <= a.end; ++i) {
            t[i] = 1;
        }
    }
    for (const auto& [id, st] : state) {
        for (std::size_t i = 1; i < st.is_truth.size(); ++i) {
            (st.is_truth[i] ? c.fn : c.tn) += 1;
        }
    }
    for (const auto& r : scored) {
        detail::check_interval(lengths, r.seq_id, r.region.start, r.region.end, "predicted interval");
        if (std::isnan(r.snr)) {
            throw DataError("predicted region with NaN score");
        }
    }

    std::vector<const ScoredRegion*> order;
    order.reserve(scored.size());
    for (const auto& r : scored) {
        order.push_back(&r);
    }
    std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->snr > b->snr; });

    std::vector<std::pair<double, ConfusionCounts>> sweep;
    sweep.emplace_back(std::numeric_limits<double>::infinity(), c);
    std::size_t i = 0;
    while (i < order.size()) {
        const double thr = order[i]->snr;
        for (; i < order.size() && order[i]->snr == thr; ++i) {
            auto& st = state[order[i]->seq_id];
            for (std::size_t p = order[i]->region.start; p <= order[i]->region.end; ++p) {
                if (st.coverage[p]++ == 0) {
                    if (st.is_truth[p]) {
                        --c.fn;
                        ++c.tp;
                    } else {
                        --c.tn;
                        ++c.fp;
                    }
                }
            }
        }
        sweep.emplace_back(thr, c);
    }
    return sweep;
}

inline RocCurve roc(const std::vector<Annotation>& truth, const std::vector<ScoredRegion>& scored,
                    const SequenceLengths& lengths, RocConvention convention) {
    if (scored.empty()) {
        throw DataError("ROC needs at least one scored region");
    }
    RocCurve curve;
    curve.convention = convention;
    for (const auto& [thr, c] : threshold_sweep(truth, scored, lengths)) {
        const double y = sensitivity(c);
        double x = 0.0;
        if (convention == RocConvention::Paper) {
            if (c.tp + c.fp == 0) {
                continue;
            }
            x = 1.0 - specificity_paper(c);
        } else {
            x = false_positive_rate(c);
        }
        const RocPoint pt{x, y, thr};
        const bool seen = std::any_of(curve.points.begin(), curve.points.end(),
                                      [&](const RocPoint& q) { return q.x == pt.x && q.y == pt.y; });
        if (!seen) {
            curve.points.push_back(pt);
        }
    }
    if (convention == RocConvention::Standard) {
        auto has = [&](double x, double y) {
            return std::any_of(curve.points.begin(), curve.points.end(),
                               [&](const RocPoint& q) { return q.x == x && q.y == y; });
        };
        if (!has(0.0, 0.0)) {
            curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
        }
        if (!has(1.0, 1.0)) {
            curve.points.push_back({1.0, 1.0, -std::numeric_limits<double>::infinity()});
        }
    }
    std::stable_sort(curve.points.begin(), curve.points.end(),
                     [](const RocPoint& a, const RocPoint& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    return curve;
}

/// Trapezoidal area under the points, taken in ascending x order.
inline double auc(const RocCurve& curve) {
    if (curve.points.size() < 2) {
        throw DataError("AUC needs at least two ROC points");
    }
    auto pts = curve.points;
    std::stable_sort(pts.begin(), pts.end(),
                     [](const RocPoint& a, const RocPoint& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    double area = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        area += (pts[i].x - pts[i - 1].x) * (pts[i].y + pts[i - 1].y) / 2.0;
    }
    return std::clamp(area, 0.0, 1.0);
}

} // namespace exonscan
