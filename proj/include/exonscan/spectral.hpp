#pragma once

// Three-base periodicity of DNA via the Voss indicator representation.
//
// Each base b gets a binary indicator u_b[n]; the spectrum of the sequence is
// P[k] = sum_b |U_b[k]|^2 where U_b is the DFT of u_b. The period-3 peak can
// be obtained without any transform from the per-codon-position base counts
// (x_b, y_b, z_b):
//
//     P(2pi/3) = sum_b (x^2 + y^2 + z^2 - xy - xz - yz)
//
// which is exact at frequency 2pi/3 for every length and coincides with
// P[N/3] when 3 divides N. Since sum_k P[k] = N * N for any sequence, the
// mean power is exactly N and the signal-to-noise ratio is peak / N.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "exonscan/types.hpp"

namespace exonscan {

/// Binary indicator sequences, one per base, all of length n.
struct IndicatorSet {
    std::array<std::vector<std::uint8_t>, kNumBases> u;

    std::size_t size() const noexcept { return u[0].size(); }
    const std::vector<std::uint8_t>& operator[](Base b) const noexcept { return u[static_cast<int>(b)]; }
};

struct PowerSpectrum {
    std::vector<double> p;

    std::size_t size() const noexcept { return p.size(); }
};

/// counts[b][phase]: occurrences of base b at 0-based positions with
/// position % 3 == phase (x_b, y_b, z_b for phases 0, 1, 2).
struct CodonPositionCounts {
    std::array<std::array<std::int64_t, 3>, kNumBases> counts{};

    std::int64_t& at(Base b, int phase) noexcept { return counts[static_cast<int>(b)][phase]; }
    std::int64_t at(Base b, int phase) const noexcept { return counts[static_cast<int>(b)][phase]; }

    std::int64_t total() const noexcept {
        std::int64_t t = 0;
        for (const auto& row : counts) {
            t += row[0] + row[1] + row[2];
        }
        return t;
    }
};

enum class Verdict { Exon, Intron };

inline const char* to_string(Verdict v) noexcept { return v == Verdict::Exon ? "exon" : "intron"; }

namespace detail {

inline int checked_base(char c) {
    int b = base_index(c);
    if (b < 0) {
        throw DataError("invalid base '" + std::string(1, c) + "'");
    }
    return b;
}

} // namespace detail

inline IndicatorSet voss_map(std::string_view bases) {
    IndicatorSet ind;
    for (auto& v : ind.u) {
        v.assign(bases.size(), 0);
    }
    for (std::size_t n = 0; n < bases.size(); ++n) {
        ind.u[detail::checked_base(bases[n])][n] = 1;
    }
    return ind;
}

inline IndicatorSet voss_map(const Sequence& seq) { return voss_map(seq.bases()); }

/// Naive O(N^2) DFT of the four indicator sequences, summed into P[k].
/// The twiddle angle is reduced modulo N in integer arithmetic before the
/// trig call so large n*k does not lose precision.
inline PowerSpectrum power_spectrum(const IndicatorSet& ind) {
    const std::size_t n = ind.size();
    PowerSpectrum ps;
    ps.p.assign(n, 0.0);
    if (n == 0) {
        return ps;
    }
    std::vector<double> cos_t(n), sin_t(n);
    for (std::size_t j = 0; j < n; ++j) {
        double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        cos_t[j] = std::cos(angle);
        sin_t[j] = std::sin(angle);
    }
    for (std::size_t k = 0; k < n; ++k) {
        double p = 0.0;
        for (const auto& u : ind.u) {
            double re = 0.0, im = 0.0;
            std::size_t idx = 0; // (i * k) mod n
            for (std::size_t i = 0; i < n; ++i) {
                if (u[i]) {
                    re += cos_t[idx];
                    im -= sin_t[idx];
                }
                idx += k;
                if (idx >= n) {
                    idx -= n;
                }
            }
            p += re * re + im * im;
        }
        ps.p[k] = p;
    }
    return ps;
}

inline CodonPositionCounts codon_position_counts(std::string_view bases) {
    CodonPositionCounts c;
    int phase = 0;
    for (char ch : bases) {
        ++c.counts[detail::checked_base(ch)][phase];
        phase = phase == 2 ? 0 : phase + 1;
    }
    return c;
}

inline CodonPositionCounts codon_position_counts(const Sequence& seq) {
    return codon_position_counts(seq.bases());
}

/// Power at frequency 2pi/3 from codon-position counts. Evaluated in exact
/// integer arithmetic; never negative.
inline double closed_form_peak(const CodonPositionCounts& c) noexcept {
    std::int64_t sum = 0;
    for (const auto& row : c.counts) {
        const std::int64_t x = row[0], y = row[1], z = row[2];
        sum += x * x + y * y + z * z - x * y - x * z - y * z;
    }
    return static_cast<double>(sum);
}

/// R = P[N/3] / mean(P). Requires at least one full codon.
inline double snr(std::string_view bases) {
    if (bases.size() < 3) {
        throw DataError("sequence too short for SNR (length " + std::to_string(bases.size()) + ")");
    }
    return closed_form_peak(codon_position_counts(bases)) / static_cast<double>(bases.size());
}

inline double snr(const Sequence& seq) { return snr(seq.bases()); }

/// Exon iff snr >= r0 (inclusive).
inline Verdict classify_snr(double r, double r0) noexcept { return r >= r0 ? Verdict::Exon : Verdict::Intron; }

inline Verdict classify_region(std::string_view bases, double r0) {
    if (!(r0 >= 0.0) || !std::isfinite(r0)) {
        throw std::invalid_argument("SNR threshold must be a finite non-negative number");
    }
    return classify_snr(snr(bases), r0);
}

inline Verdict classify_region(const Sequence& seq, double r0) { return classify_region(seq.bases(), r0); }

} // namespace exonscan
