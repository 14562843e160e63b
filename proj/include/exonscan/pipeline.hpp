#pragma once

// End-to-end exon prediction:
//   GT/AG candidates -> boundary-window classification -> survivors -> SNR verdict.

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "exonscan/candidates.hpp"
#include "exonscan/spectral.hpp"
#include "exonscan/svm.hpp"

namespace exonscan {

inline constexpr double kDefaultSnrThreshold = 2.0;
inline constexpr std::size_t kDefaultScanWindow = 351;
inline constexpr std::size_t kDefaultScanStep = 3;

struct PipelineConfig {
    std::size_t min_len = kDefaultMinExonLength;
    std::size_t max_len = kDefaultMaxExonLength;
    double r0 = kDefaultSnrThreshold;
    std::size_t scan_window = kDefaultScanWindow;
    std::string model_path;
};

inline void validate(const PipelineConfig& c) {
    if (c.min_len < 1 || c.max_len < c.min_len) {
        throw std::invalid_argument("length bounds must satisfy 1 <= min_len <= max_len");
    }
    if (!(c.r0 >= 0.0) || !std::isfinite(c.r0)) {
        throw std::invalid_argument("r0 must be a finite non-negative number");
    }
    if (c.scan_window < 3 || c.scan_window % 3 != 0) {
        throw std::invalid_argument("scan window must be a positive multiple of 3");
    }
}

struct Prediction {
    std::string seq_id;
    CandidateRegion region;
    double snr = 0.0;
    Verdict verdict = Verdict::Intron;
};

inline ScoredRegion to_scored(const Prediction& p) { return ScoredRegion{p.seq_id, p.region, p.snr}; }

/// Runs the full pipeline on one sequence. A region survives when every
/// boundary window it has passes the classifier; a region whose window would
/// run off the sequence end is judged on the windows that exist. Regions
/// shorter than one codon cannot be scored and are dropped.
template <WindowClassifier C>
std::vector<Prediction> predict_sequence(const Sequence& seq, const C& classify, const PipelineConfig& cfg) {
    validate(cfg);
    const auto regions = candidate_regions(seq, cfg.min_len, cfg.max_len);
    if (regions.empty()) {
        return {};
    }

    // Many regions share a boundary; classify each distinct window once.
    std::set<std::size_t> start_offsets, end_offsets;
    for (const auto& r : regions) {
        start_offsets.insert(r.start);
        end_offsets.insert(r.end);
    }
    const std::size_t n = seq.size();
    std::vector<BoundaryWindow> windows;
    auto add_window = [&](std::size_t offset, WindowSide side) {
        if (offset + kWindowLength - 1 <= n) {
            windows.push_back(
                BoundaryWindow{seq.id(), offset, std::string(seq.slice(offset, offset + kWindowLength - 1)), side});
        }
    };
    for (std::size_t s : start_offsets) {
        add_window(s, WindowSide::ExonStart);
    }
    for (std::size_t e : end_offsets) {
        add_window(e + 1, WindowSide::ExonEnd);
    }

    const auto kept = filter_windows(classify, windows);
    std::set<std::size_t> good_starts, good_ends;
    for (const auto& w : kept.starts) {
        good_starts.insert(w.offset);
    }
    for (const auto& w : kept.ends) {
        good_ends.insert(w.offset);
    }

    std::vector<Prediction> out;
    for (const auto& r : regions) {
        const bool has_start_window = r.start + kWindowLength - 1 <= n;
        const bool has_end_window = r.end + kWindowLength <= n;
        if (has_start_window && !good_starts.contains(r.start)) {
            continue;
        }
        if (has_end_window && !good_ends.contains(r.end + 1)) {
            continue;
        }
        if (r.length() < 3) {
            continue;
        }
        const double r_snr = snr(seq.slice(r.start, r.end));
        out.push_back(Prediction{seq.id(), r, r_snr, classify_snr(r_snr, cfg.r0)});
    }
    return out;
}

inline std::vector<Prediction> predict_sequence(const Sequence& seq, const SvmModel& model, const PipelineConfig& cfg) {
    return predict_sequence(seq, SvmWindowClassifier{&model}, cfg);
}

template <WindowClassifier C>
std::vector<Prediction> predict_all(const std::vector<Sequence>& seqs, const C& classify, const PipelineConfig& cfg) {
    std::vector<Prediction> out;
    for (const auto& s : seqs) {
        auto p = predict_sequence(s, classify, cfg);
        out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    }
    return out;
}

inline std::vector<Prediction> predict_all(const std::vector<Sequence>& seqs, const SvmModel& model,
                                           const PipelineConfig& cfg) {
    return predict_all(seqs, SvmWindowClassifier{&model}, cfg);
}

struct ScanPoint {
    std::size_t offset = 1;
    double snr = 0.0;
};

/// SNR of windows [o, o + window - 1] for o = 1, 1 + step, ... while they fit.
inline std::vector<ScanPoint> scan(const Sequence& seq, std::size_t window = kDefaultScanWindow,
                                   std::size_t step = kDefaultScanStep) {
    if (window < 3 || window % 3 != 0) {
        throw std::invalid_argument("scan window must be a positive multiple of 3");
    }
    if (step < 1) {
        throw std::invalid_argument("scan step must be >= 1");
    }
    std::vector<ScanPoint> out;
    for (std::size_t o = 1; o + window - 1 <= seq.size(); o += step) {
        out.push_back(ScanPoint{o, snr(seq.slice(o, o + window - 1))});
    }
    return out;
}

/// Labelled boundary windows for training: the 40 bases opening each
/// annotated exon (+1) and the 40 bases opening the following intron (-1).
/// Windows that would run off the sequence are skipped.
inline std::vector<EncodedWindow> training_windows(const std::vector<Sequence>& seqs,
                                                   const std::vector<Annotation>& annotations) {
    std::unordered_map<std::string, const Sequence*> by_id;
    for (const auto& s : seqs) {
        by_id.emplace(s.id(), &s);
    }
    std::vector<EncodedWindow> out;
    for (const auto& a : annotations) {
        auto it = by_id.find(a.seq_id);
        if (it == by_id.end()) {
            throw DataError("annotation refers to unknown sequence '" + a.seq_id + "'");
        }
        const Sequence& s = *it->second;
        if (a.end > s.size()) {
            throw DataError("annotation [" + std::to_string(a.start) + ", " + std::to_string(a.end) +
                            "] exceeds length of '" + a.seq_id + "'");
        }
        for (const auto& w : extract_windows(s, {CandidateRegion{a.start, a.end, RegionKind::Both}})) {
            out.push_back(encode_window(w.bases, w.side == WindowSide::ExonStart ? Label::Positive : Label::Negative));
        }
    }
    return out;
}

} // namespace exonscan
