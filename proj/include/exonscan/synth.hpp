#pragma once

// Seeded synthetic genomes with planted exons.
//
// Each sequence is laid out as
//     intron (AG exon GT intron)*
// with intron bases drawn independently from `intron_probs` and exon bases
// drawn codon by codon from `codon_probs`. Sequence i uses the generator
// substream (seed, i), so output depends only on the spec.

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exonscan/random.hpp"
#include "exonscan/seqio.hpp"
#include "exonscan/types.hpp"

namespace exonscan {

inline constexpr std::size_t kNumCodons = 64;

/// Codon index with bases ordered A, C, G, T: 16*b1 + 4*b2 + b3.
inline std::string codon_string(std::size_t idx) {
    return {kBaseChars[(idx >> 4) & 3], kBaseChars[(idx >> 2) & 3], kBaseChars[idx & 3]};
}

/// Default exon codon table: product of three position-specific base
/// distributions, so each base has clearly different frequencies at the
/// three codon positions.
inline std::array<double, kNumCodons> default_codon_table() {
    //                                              A     C     G     T
    constexpr std::array<double, 4> first = {0.30, 0.10, 0.50, 0.10};
    constexpr std::array<double, 4> second = {0.40, 0.20, 0.10, 0.30};
    constexpr std::array<double, 4> third = {0.10, 0.45, 0.35, 0.10};
    std::array<double, kNumCodons> t{};
    for (std::size_t i = 0; i < kNumCodons; ++i) {
        t[i] = first[(i >> 4) & 3] * second[(i >> 2) & 3] * third[i & 3];
    }
    return t;
}

struct SynthSpec {
    std::uint64_t seed = 1;
    std::size_t n_sequences = 1;
    std::size_t intron_min = 1000;
    std::size_t intron_max = 3000;
    std::size_t exon_min = 120;
    std::size_t exon_max = 300;
    std::size_t exons_per_sequence = 3;
    std::array<double, kNumCodons> codon_probs = default_codon_table();
    std::array<double, kNumBases> intron_probs = {0.25, 0.25, 0.25, 0.25};
};

struct SynthCorpus {
    std::vector<Sequence> sequences;
    std::vector<Annotation> annotations;
};

namespace detail {

template <std::size_t N>
void check_distribution(const std::array<double, N>& p, const char* name) {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument(std::string(name) + " contains a negative or non-finite probability");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument(std::string(name) + " does not sum to 1");
    }
}

template <std::size_t N>
std::vector<double> cumulative(const std::array<double, N>& p) {
    std::vector<double> c(N);
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        acc += p[i];
        c[i] = acc;
    }
    return c;
}

} // namespace detail

inline void validate(const SynthSpec& s) {
    if (s.n_sequences < 1) {
        throw std::invalid_argument("n_sequences must be >= 1");
    }
    if (s.intron_max < s.intron_min) {
        throw std::invalid_argument("intron length range is empty");
    }
    if (s.exon_min < 3) {
        throw std::invalid_argument("exon_min must be >= 3");
    }
    if (s.exon_max < s.exon_min) {
        throw std::invalid_argument("exon length range is empty");
    }
    if ((s.exon_min + 2) / 3 > s.exon_max / 3) {
        throw std::invalid_argument("exon length range contains no multiple of 3");
    }
    if (s.exons_per_sequence == 0 && s.intron_max == 0) {
        throw std::invalid_argument("layout produces empty sequences");
    }
    detail::check_distribution(s.codon_probs, "codon table");
    detail::check_distribution(s.intron_probs, "intron base distribution");
}

inline SynthCorpus generate(const SynthSpec& spec) {
    validate(spec);
    const auto codon_cdf = detail::cumulative(spec.codon_probs);
    const auto base_cdf = detail::cumulative(spec.intron_probs);
    const std::size_t codons_lo = (spec.exon_min + 2) / 3;
    const std::size_t codons_hi = spec.exon_max / 3;
    // An all-intron sequence must still get at least one base.
    const std::size_t lone_intron_min = std::max<std::size_t>(spec.intron_min, 1);

    SynthCorpus corpus;
    for (std::size_t i = 0; i < spec.n_sequences; ++i) {
        Xoshiro256 rng = Xoshiro256::substream(spec.seed, i);
        std::string id = "synth" + std::to_string(spec.seed) + "_" + std::to_string(i + 1);
        std::string bases;

        auto intron = [&](std::size_t min_len) {
            const std::size_t len = rng.between(min_len, std::max(min_len, spec.intron_max));
            for (std::size_t k = 0; k < len; ++k) {
                bases.push_back(kBaseChars[rng.categorical(base_cdf)]);
            }
        };

        intron(spec.exons_per_sequence == 0 ? lone_intron_min : spec.intron_min);
        for (std::size_t e = 0; e < spec.exons_per_sequence; ++e) {
            bases += "AG";
            const std::size_t start = bases.size() + 1;
            const std::size_t n_codons = rng.between(codons_lo, codons_hi);
            for (std::size_t c = 0; c < n_codons; ++c) {
                bases += codon_string(rng.categorical(codon_cdf));
            }
            corpus.annotations.push_back(Annotation{id, start, bases.size()});
            bases += "GT";
            intron(spec.intron_min);
        }
        corpus.sequences.emplace_back(std::move(id), std::move(bases));
    }
    return corpus;
}

/// Applies `key=value` lines ('#' comments allowed) on top of `base`.
/// Keys: seed, n_sequences, intron_min, intron_max, exon_min, exon_max,
/// exons_per_sequence, intron_probs (4 comma-separated values, order ACGT),
/// codon_probs (64 values, codons in lexicographic ACGT order).
inline SynthSpec parse_synth_config(std::string_view text, SynthSpec base = {}) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = detail::trim_cr(raw);
        if (detail::is_blank(line) || line.front() == '#') {
            continue;
        }
        auto fail = [&](const std::string& why) {
            return DataError("synth config line " + std::to_string(line_no) + ": " + why);
        };
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw fail("expected key=value");
        }
        auto strip = [](std::string_view s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string_view::npos ? std::string_view{} : s.substr(b, e - b + 1);
        };
        const std::string_view key = strip(line.substr(0, eq));
        const std::string_view value = strip(line.substr(eq + 1));
        auto integer = [&]() {
            auto v = detail::parse_number<std::uint64_t>(value);
            if (!v) {
                throw fail("'" + std::string(key) + "' needs a non-negative integer");
            }
            return *v;
        };
        auto list = [&]<std::size_t N>(std::array<double, N>& dst) {
            std::size_t k = 0;
            std::size_t pos = 0;
            while (pos <= value.size()) {
                auto comma = value.find(',', pos);
                auto tok = strip(value.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
                auto v = detail::parse_number<double>(tok);
                if (!v || k >= N) {
                    throw fail("'" + std::string(key) + "' needs " + std::to_string(N) + " comma-separated numbers");
                }
                dst[k++] = *v;
                if (comma == std::string_view::npos) {
                    break;
                }
                pos = comma + 1;
            }
            if (k != N) {
                throw fail("'" + std::string(key) + "' needs " + std::to_string(N) + " comma-separated numbers");
            }
        };
        if (key == "seed") {
            base.seed = integer();
        } else if (key == "n_sequences") {
            base.n_sequences = integer();
        } else if (key == "intron_min") {
            base.intron_min = integer();
        } else if (key == "intron_max") {
            base.intron_max = integer();
        } else if (key == "exon_min") {
            base.exon_min = integer();
        } else if (key == "exon_max") {
            base.exon_max = integer();
        } else if (key == "exons_per_sequence") {
            base.exons_per_sequence = integer();
        } else if (key == "intron_probs") {
            list(base.intron_probs);
        } else if (key == "codon_probs") {
            list(base.codon_probs);
        } else {
            throw fail("unknown key '" + std::string(key) + "'");
        }
    }
    return base;
}

} // namespace exonscan
