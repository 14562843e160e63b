#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "exonscan/error.hpp"

namespace exonscan {

/// Nucleotide index used for all per-base tables: A, C, G, T.
enum class Base : std::uint8_t { A = 0, C = 1, G = 2, T = 3 };

inline constexpr std::size_t kNumBases = 4;
inline constexpr char kBaseChars[kNumBases] = {'A', 'C', 'G', 'T'};

/// Maps an uppercase nucleotide letter to its index, or -1 for anything else.
constexpr int base_index(char c) noexcept {
    switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
    default: return -1;
    }
}

/// A validated DNA sequence. `bases` is non-empty and contains only
/// uppercase A, C, G, T; construction rejects anything else.
class Sequence {
public:
    Sequence(std::string id, std::string bases) : id_(std::move(id)), bases_(std::move(bases)) {
        if (bases_.empty()) {
            throw DataError("sequence '" + id_ + "' is empty");
        }
        for (std::size_t i = 0; i < bases_.size(); ++i) {
            if (base_index(bases_[i]) < 0) {
                throw DataError("sequence '" + id_ + "': invalid base '" + std::string(1, bases_[i]) +
                                "' at position " + std::to_string(i + 1));
            }
        }
    }

    const std::string& id() const noexcept { return id_; }
    const std::string& bases() const noexcept { return bases_; }
    std::size_t size() const noexcept { return bases_.size(); }

    /// Bases of the 1-based inclusive interval [start, end].
    std::string_view slice(std::size_t start, std::size_t end) const {
        if (start < 1 || end < start || end > bases_.size()) {
            throw std::out_of_range("interval [" + std::to_string(start) + ", " + std::to_string(end) +
                                    "] outside sequence '" + id_ + "'");
        }
        return std::string_view(bases_).substr(start - 1, end - start + 1);
    }

    friend bool operator==(const Sequence&, const Sequence&) = default;

private:
    std::string id_;
    std::string bases_;
};

/// Ground-truth exon interval, 1-based inclusive.
struct Annotation {
    std::string seq_id;
    std::size_t start = 1;
    std::size_t end = 1;

    std::size_t length() const noexcept { return end - start + 1; }
    friend bool operator==(const Annotation&, const Annotation&) = default;
};

enum class RegionKind { StartAnchored, EndAnchored, Both };

/// Candidate exon interval, 1-based inclusive.
struct CandidateRegion {
    std::size_t start = 1;
    std::size_t end = 1;
    RegionKind kind = RegionKind::Both;

    std::size_t length() const noexcept { return end - start + 1; }

    friend bool operator==(const CandidateRegion&, const CandidateRegion&) = default;
    friend bool operator<(const CandidateRegion& a, const CandidateRegion& b) noexcept {
        return std::pair(a.start, a.end) < std::pair(b.start, b.end);
    }
};

/// A region with its three-base-periodicity score, as written to and read
/// from prediction TSV files.
struct ScoredRegion {
    std::string seq_id;
    CandidateRegion region;
    double snr = 0.0;
};

} // namespace exonscan
