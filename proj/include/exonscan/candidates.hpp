#pragma once

// Candidate exons from intron boundary signals.
//
// Introns begin with GT and end with AG, so an exon sits strictly between an
// AG (exon starts at AG + 2) and a later GT (exon ends at GT - 1). Every such
// pair whose length falls inside the bounds is a candidate.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "exonscan/types.hpp"

namespace exonscan {

inline constexpr std::size_t kWindowLength = 40;
inline constexpr std::size_t kDefaultMinExonLength = 40;
inline constexpr std::size_t kDefaultMaxExonLength = 300;

enum class WindowSide { ExonStart, ExonEnd };

struct BoundaryWindow {
    std::string seq_id;
    std::size_t offset = 1; // 1-based position of bases[0]
    std::string bases;
    WindowSide side = WindowSide::ExonStart;
};

/// 1-based positions p with bases[p..p+1] == motif, ascending.
inline std::vector<std::size_t> find_dinucleotide(std::string_view bases, std::string_view motif) {
    std::vector<std::size_t> sites;
    if (bases.size() < 2) {
        return sites;
    }
    for (std::size_t i = 0; i + 1 < bases.size(); ++i) {
        if (bases[i] == motif[0] && bases[i + 1] == motif[1]) {
            sites.push_back(i + 1);
        }
    }
    return sites;
}

inline std::vector<std::size_t> find_ag_sites(const Sequence& seq) { return find_dinucleotide(seq.bases(), "AG"); }
inline std::vector<std::size_t> find_gt_sites(const Sequence& seq) { return find_dinucleotide(seq.bases(), "GT"); }

/// All AG/GT pairs giving an exon of length in [min_len, max_len], ordered
/// by (start, end).
inline std::vector<CandidateRegion> candidate_regions(const Sequence& seq, std::size_t min_len = kDefaultMinExonLength,
                                                      std::size_t max_len = kDefaultMaxExonLength) {
    if (min_len < 1 || max_len < min_len) {
        throw std::invalid_argument("candidate length bounds must satisfy 1 <= min_len <= max_len");
    }
    const auto ag = find_ag_sites(seq);
    const auto gt = find_gt_sites(seq);
    std::vector<CandidateRegion> out;
    for (std::size_t a : ag) {
        const std::size_t start = a + 2;
        // end = g - 1 >= start + min_len - 1  <=>  g >= start + min_len
        auto it = std::lower_bound(gt.begin(), gt.end(), start + min_len);
        for (; it != gt.end(); ++it) {
            const std::size_t end = *it - 1;
            if (end - start + 1 > max_len) {
                break;
            }
            out.push_back(CandidateRegion{start, end, RegionKind::Both});
        }
    }
    // AG sites ascend, so starts ascend; ends ascend within each start.
    return out;
}

/// For each region: the window starting at the first exon base (ExonStart)
/// and the window starting at the base after the exon, i.e. at the intron's
/// GT (ExonEnd). Windows that would run past the sequence end are skipped.
inline std::vector<BoundaryWindow> extract_windows(const Sequence& seq, const std::vector<CandidateRegion>& regions) {
    std::vector<BoundaryWindow> out;
    const std::size_t n = seq.size();
    auto emit = [&](std::size_t offset, WindowSide side) {
        if (offset >= 1 && offset + kWindowLength - 1 <= n) {
            out.push_back(BoundaryWindow{seq.id(), offset, std::string(seq.slice(offset, offset + kWindowLength - 1)),
                                         side});
        }
    };
    for (const auto& r : regions) {
        emit(r.start, WindowSide::ExonStart);
        emit(r.end + 1, WindowSide::ExonEnd);
    }
    return out;
}

struct LengthStats {
    double fraction = 0.0;                           // share of lengths in [lo, hi]
    std::size_t in_range = 0;
    std::size_t total = 0;
    std::map<std::size_t, std::size_t> histogram;    // exact length -> count
};

inline LengthStats exon_length_stats(const std::vector<Annotation>& annotations, std::size_t lo = kDefaultMinExonLength,
                                     std::size_t hi = kDefaultMaxExonLength) {
    if (annotations.empty()) {
        throw DataError("exon length statistics need at least one annotation");
    }
    if (hi < lo) {
        throw std::invalid_argument("length bounds must satisfy lo <= hi");
    }
    LengthStats s;
    for (const auto& a : annotations) {
        const std::size_t len = a.length();
        ++s.histogram[len];
        if (len >= lo && len <= hi) {
            ++s.in_range;
        }
    }
    s.total = annotations.size();
    s.fraction = static_cast<double>(s.in_range) / static_cast<double>(s.total);
    return s;
}

} // namespace exonscan
