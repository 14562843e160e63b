#pragma once

// FASTA, annotation TSV and prediction TSV readers/writers.
//
// All coordinates are 1-based inclusive. Numbers are written with
// std::to_chars so output never depends on the global locale.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "exonscan/types.hpp"

namespace exonscan {

namespace detail {

inline std::string_view trim_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    return line;
}

inline bool is_blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        auto tab = line.find('\t', pos);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, tab - pos));
        pos = tab + 1;
    }
    return fields;
}

template <typename T>
std::optional<T> parse_number(std::string_view token) {
    T value{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
        return std::nullopt;
    }
    return value;
}

/// Fixed-point decimal with `precision` digits after the point.
inline std::string format_fixed(double v, int precision) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
    if (ec != std::errc()) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf, ptr);
}

/// Shortest decimal that parses back to exactly `v`.
inline std::string format_roundtrip(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf, ptr);
}

inline void check_stream(const std::ostream& os, const char* what) {
    if (!os) {
        throw DataError(std::string("write failed: ") + what);
    }
}

} // namespace detail

/// Parses FASTA text. Sequence lines may be wrapped and lower case; ids are
/// cut at the first whitespace. Anything outside {A,C,G,T} after upper-casing
/// is rejected with the record id, line number and offending byte.
inline std::vector<Sequence> parse_fasta(std::istream& in) {
    std::vector<Sequence> records;
    std::optional<std::string> id;
    std::string bases;
    std::size_t header_line = 0;

    auto flush = [&] {
        if (!id) {
            return;
        }
        if (bases.empty()) {
            throw DataError("FASTA record '" + *id + "' (line " + std::to_string(header_line) + ") is empty");
        }
        records.emplace_back(std::move(*id), std::move(bases));
        bases.clear();
        id.reset();
    };

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = detail::trim_cr(raw);
        if (!line.empty() && line.front() == '>') {
            flush();
            std::string_view header = line.substr(1);
            auto first = header.find_first_not_of(" \t");
            header = first == std::string_view::npos ? std::string_view{} : header.substr(first);
            auto ws = header.find_first_of(" \t");
            std::string name(header.substr(0, ws));
            if (name.empty()) {
                throw DataError("FASTA header without id at line " + std::to_string(line_no));
            }
            id = std::move(name);
            header_line = line_no;
            continue;
        }
        if (!id) {
            if (detail::is_blank(line)) {
                continue;
            }
            throw DataError("FASTA text before first '>' at line " + std::to_string(line_no));
        }
        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                continue;
            }
            char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (base_index(u) < 0) {
                throw DataError("FASTA record '" + *id + "' line " + std::to_string(line_no) +
                                ": invalid character '" + std::string(1, c) + "'");
            }
            bases.push_back(u);
        }
    }
    if (in.bad()) {
        throw DataError("read error while parsing FASTA");
    }
    flush();
    return records;
}

inline std::vector<Sequence> parse_fasta(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_fasta(in);
}

/// Writes FASTA with `width` bases per line.
inline void write_fasta(std::ostream& out, const std::vector<Sequence>& seqs, std::size_t width = 60) {
    for (const auto& s : seqs) {
        out << '>' << s.id() << '\n';
        for (std::size_t i = 0; i < s.size(); i += width) {
            out << std::string_view(s.bases()).substr(i, width) << '\n';
        }
    }
    detail::check_stream(out, "FASTA");
}

/// Parses `seq_id<TAB>start<TAB>end` lines; '#' comments and blank lines are
/// skipped. Overlapping intervals are allowed here.
inline std::vector<Annotation> parse_annotations(std::istream& in) {
    std::vector<Annotation> out;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = detail::trim_cr(raw);
        if (detail::is_blank(line) || line.front() == '#') {
            continue;
        }
        auto fields = detail::split_tabs(line);
        auto fail = [&](const std::string& why) {
            return DataError("annotation line " + std::to_string(line_no) + ": " + why);
        };
        if (fields.size() != 3) {
            throw fail("expected 3 tab-separated fields, got " + std::to_string(fields.size()));
        }
        if (fields[0].empty()) {
            throw fail("empty sequence id");
        }
        auto start = detail::parse_number<long long>(fields[1]);
        auto end = detail::parse_number<long long>(fields[2]);
        if (!start || !end) {
            throw fail("coordinates must be integers");
        }
        if (*start < 1) {
            throw fail("start must be >= 1");
        }
        if (*end < *start) {
            throw fail("end " + std::to_string(*end) + " < start " + std::to_string(*start));
        }
        out.push_back(Annotation{std::string(fields[0]), static_cast<std::size_t>(*start),
                                 static_cast<std::size_t>(*end)});
    }
    if (in.bad()) {
        throw DataError("read error while parsing annotations");
    }
    return out;
}

inline std::vector<Annotation> parse_annotations(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_annotations(in);
}

inline void write_annotations(std::ostream& out, const std::vector<Annotation>& annots) {
    out << "#seq_id\tstart\tend\n";
    for (const auto& a : annots) {
        out << a.seq_id << '\t' << a.start << '\t' << a.end << '\n';
    }
    detail::check_stream(out, "annotations");
}

inline constexpr std::string_view kPredictionHeader = "#seq_id\tstart\tend\tsnr";

/// One line per region in input order, SNR with six decimals.
inline void write_predictions(std::ostream& out, const std::vector<ScoredRegion>& regions) {
    out << kPredictionHeader << '\n';
    for (const auto& r : regions) {
        out << r.seq_id << '\t' << r.region.start << '\t' << r.region.end << '\t'
            << detail::format_fixed(r.snr, 6) << '\n';
    }
    detail::check_stream(out, "predictions");
}

inline std::string write_predictions(const std::vector<ScoredRegion>& regions) {
    std::ostringstream out;
    write_predictions(out, regions);
    return out.str();
}

/// Reads the prediction TSV produced by write_predictions.
inline std::vector<ScoredRegion> parse_predictions(std::istream& in) {
    std::vector<ScoredRegion> out;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = detail::trim_cr(raw);
        if (detail::is_blank(line) || line.front() == '#') {
            continue;
        }
        auto fields = detail::split_tabs(line);
        auto fail = [&](const std::string& why) {
            return DataError("prediction line " + std::to_string(line_no) + ": " + why);
        };
        if (fields.size() != 4) {
            throw fail("expected 4 tab-separated fields, got " + std::to_string(fields.size()));
        }
        auto start = detail::parse_number<long long>(fields[1]);
        auto end = detail::parse_number<long long>(fields[2]);
        auto snr = detail::parse_number<double>(fields[3]);
        if (!start || !end || !snr) {
            throw fail("malformed number");
        }
        if (*start < 1 || *end < *start) {
            throw fail("invalid interval");
        }
        out.push_back(ScoredRegion{std::string(fields[0]),
                                   CandidateRegion{static_cast<std::size_t>(*start),
                                                   static_cast<std::size_t>(*end), RegionKind::Both},
                                   *snr});
    }
    if (in.bad()) {
        throw DataError("read error while parsing predictions");
    }
    return out;
}

inline std::vector<ScoredRegion> parse_predictions(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_predictions(in);
}

} // namespace exonscan
