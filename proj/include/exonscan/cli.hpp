#pragma once

// Command-line driver. `run` is kept separate from main() so tests can call
// it with in-memory streams.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "exonscan/candidates.hpp"
#include "exonscan/eval.hpp"
#include "exonscan/pipeline.hpp"
#include "exonscan/seqio.hpp"
#include "exonscan/spectral.hpp"
#include "exonscan/svm.hpp"
#include "exonscan/synth.hpp"

namespace exonscan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path + "' for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw DataError("read error on '" + path + "'");
    }
    return ss.str();
}

/// Writes through `body` to `path`, or to `fallback` when path is empty or "-".
inline void with_output(const std::string& path, std::ostream& fallback,
                        const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        body(fallback);
        fallback.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw DataError("cannot open '" + path + "' for writing");
    }
    body(f);
    f.flush();
    if (!f) {
        throw DataError("write error on '" + path + "'");
    }
}

inline SequenceLengths lengths_of(const std::vector<Sequence>& seqs) {
    SequenceLengths m;
    for (const auto& s : seqs) {
        if (!m.emplace(s.id(), s.size()).second) {
            throw DataError("duplicate sequence id '" + s.id() + "'");
        }
    }
    return m;
}

inline std::string fmt(double v) { return exonscan::detail::format_fixed(v, 6); }

template <typename F>
std::string fmt_or_na(F&& f) {
    try {
        return fmt(f());
    } catch (const DataError&) {
        return "NA";
    }
}

} // namespace detail

struct Options {
    // synth
    SynthSpec synth;
    std::string synth_config;
    std::string out_prefix;
    // shared inputs
    std::string fasta, annot, model, out;
    // train
    std::string out_model;
    double lambda = kDefaultLambda;
    int epochs = kDefaultEpochs;
    std::uint64_t seed = kDefaultSeed;
    // predict
    PipelineConfig pipeline;
    bool all = false;
    // scan
    std::size_t window = kDefaultScanWindow;
    std::size_t step = kDefaultScanStep;
    // spectrum
    std::string seq_id;
    // eval
    std::string truth, pred_scored, convention = "both";
    double eval_r0 = kDefaultSnrThreshold;
    // stats
    std::size_t lo = kDefaultMinExonLength;
    std::size_t hi = kDefaultMaxExonLength;
};

inline int cmd_synth(const Options& o, CLI::App& sub, std::ostream& err) {
    SynthSpec spec;
    if (!o.synth_config.empty()) {
        spec = parse_synth_config(detail::read_file(o.synth_config));
    }
    // Explicit flags win over the config file.
    auto given = [&](const char* name) { return sub.get_option(name)->count() > 0; };
    if (given("--seed")) spec.seed = o.synth.seed;
    if (given("--n-seq")) spec.n_sequences = o.synth.n_sequences;
    if (given("--intron-min")) spec.intron_min = o.synth.intron_min;
    if (given("--intron-max")) spec.intron_max = o.synth.intron_max;
    if (given("--exon-min")) spec.exon_min = o.synth.exon_min;
    if (given("--exon-max")) spec.exon_max = o.synth.exon_max;
    if (given("--exons")) spec.exons_per_sequence = o.synth.exons_per_sequence;
    validate(spec);

    const auto corpus = generate(spec);
    detail::with_output(o.out_prefix + ".fasta", err, [&](std::ostream& f) { write_fasta(f, corpus.sequences); });
    detail::with_output(o.out_prefix + ".tsv", err,
                        [&](std::ostream& f) { write_annotations(f, corpus.annotations); });
    err << "wrote " << corpus.sequences.size() << " sequences and " << corpus.annotations.size() << " exons to "
        << o.out_prefix << ".{fasta,tsv}\n";
    return kExitOk;
}

inline int cmd_train(const Options& o, std::ostream& err) {
    if (!(o.lambda > 0.0)) throw UsageError("--lambda must be > 0");
    if (o.epochs < 1) throw UsageError("--epochs must be >= 1");
    const auto seqs = parse_fasta(detail::read_file(o.fasta));
    const auto annots = parse_annotations(detail::read_file(o.annot));
    const auto data = training_windows(seqs, annots);
    const auto model = train(data, o.lambda, o.epochs, o.seed);
    detail::with_output(o.out_model, err, [&](std::ostream& f) { save_model(f, model); });
    err << "trained on " << data.size() << " windows, training accuracy "
        << detail::fmt(training_accuracy(model, data)) << '\n';
    return kExitOk;
}

inline int cmd_predict(const Options& o, std::ostream& out, std::ostream& err) {
    validate(o.pipeline);
    const auto model = load_model(detail::read_file(o.model));
    const auto seqs = parse_fasta(detail::read_file(o.fasta));
    std::vector<ScoredRegion> rows;
    std::size_t exons = 0;
    for (const auto& p : predict_all(seqs, model, o.pipeline)) {
        if (p.verdict == Verdict::Exon) {
            ++exons;
        }
        if (o.all || p.verdict == Verdict::Exon) {
            rows.push_back(to_scored(p));
        }
    }
    detail::with_output(o.out, out, [&](std::ostream& f) { write_predictions(f, rows); });
    err << seqs.size() << " sequences, " << exons << " exon calls\n";
    return kExitOk;
}

inline int cmd_scan(const Options& o, std::ostream& out) {
    if (o.window < 3 || o.window % 3 != 0) throw UsageError("--window must be a positive multiple of 3");
    if (o.step < 1) throw UsageError("--step must be >= 1");
    const auto seqs = parse_fasta(detail::read_file(o.fasta));
    detail::with_output(o.out, out, [&](std::ostream& f) {
        f << "#seq_id\toffset\tsnr\n";
        for (const auto& s : seqs) {
            for (const auto& pt : scan(s, o.window, o.step)) {
                f << s.id() << '\t' << pt.offset << '\t' << detail::fmt(pt.snr) << '\n';
            }
        }
    });
    return kExitOk;
}

inline int cmd_spectrum(const Options& o, std::ostream& out) {
    const auto seqs = parse_fasta(detail::read_file(o.fasta));
    const Sequence* target = nullptr;
    for (const auto& s : seqs) {
        if (s.id() == o.seq_id) {
            target = &s;
            break;
        }
    }
    if (!target) {
        throw DataError("sequence '" + o.seq_id + "' not found in " + o.fasta);
    }
    const auto ps = power_spectrum(voss_map(*target));
    detail::with_output(o.out, out, [&](std::ostream& f) {
        f << "#k\tpower\n";
        for (std::size_t k = 0; k < ps.size(); ++k) {
            f << k << '\t' << detail::fmt(ps.p[k]) << '\n';
        }
    });
    return kExitOk;
}

inline int cmd_eval(const Options& o, std::ostream& out) {
    std::vector<RocConvention> conventions;
    if (o.convention == "paper") {
        conventions = {RocConvention::Paper};
    } else if (o.convention == "standard") {
        conventions = {RocConvention::Standard};
    } else if (o.convention == "both") {
        conventions = {RocConvention::Paper, RocConvention::Standard};
    } else {
        throw UsageError("--convention must be paper, standard or both");
    }
    if (!(o.eval_r0 >= 0.0)) throw UsageError("--r0 must be >= 0");

    const auto lengths = detail::lengths_of(parse_fasta(detail::read_file(o.fasta)));
    const auto truth = parse_annotations(detail::read_file(o.truth));
    const auto scored = parse_predictions(detail::read_file(o.pred_scored));

    std::vector<ScoredRegion> called;
    for (const auto& r : scored) {
        if (classify_snr(r.snr, o.eval_r0) == Verdict::Exon) {
            called.push_back(r);
        }
    }
    const auto c = confusion(truth, called, lengths);

    std::vector<RocCurve> curves;
    if (!scored.empty()) {
        for (auto conv : conventions) {
            curves.push_back(roc(truth, scored, lengths, conv));
        }
    }

    out << "#metric\tvalue\n"
        << "tp\t" << c.tp << '\n'
        << "tn\t" << c.tn << '\n'
        << "fp\t" << c.fp << '\n'
        << "fn\t" << c.fn << '\n'
        << "sn\t" << detail::fmt_or_na([&] { return sensitivity(c); }) << '\n'
        << "sp\t" << detail::fmt_or_na([&] { return specificity_paper(c); }) << '\n'
        << "x_paper\t" << detail::fmt_or_na([&] { return 1.0 - specificity_paper(c); }) << '\n'
        << "x_standard\t" << detail::fmt_or_na([&] { return false_positive_rate(c); }) << '\n';
    for (const auto& curve : curves) {
        out << "auc_" << to_string(curve.convention) << '\t'
            << detail::fmt_or_na([&] { return auc(curve); }) << '\n';
    }

    auto write_roc = [&](std::ostream& f) {
        f << "#convention\tx\ty\tthreshold\n";
        for (const auto& curve : curves) {
            for (const auto& pt : curve.points) {
                f << to_string(curve.convention) << '\t' << detail::fmt(pt.x) << '\t' << detail::fmt(pt.y) << '\t';
                if (std::isinf(pt.threshold)) {
                    f << (pt.threshold > 0 ? "inf" : "-inf");
                } else {
                    f << detail::fmt(pt.threshold);
                }
                f << '\n';
            }
        }
    };
    detail::with_output(o.out, out, write_roc);
    return kExitOk;
}

inline int cmd_stats(const Options& o, std::ostream& out) {
    if (o.hi < o.lo) throw UsageError("--hi must be >= --lo");
    const auto s = exon_length_stats(parse_annotations(detail::read_file(o.annot)), o.lo, o.hi);
    out << "#metric\tvalue\n"
        << "fraction\t" << detail::fmt(s.fraction) << '\n'
        << "in_range\t" << s.in_range << '\n'
        << "total\t" << s.total << '\n';
    if (!o.out.empty()) {
        detail::with_output(o.out, out, [&](std::ostream& f) {
            f << "#length\tcount\n";
            for (const auto& [len, n] : s.histogram) {
                f << len << '\t' << n << '\n';
            }
        });
    }
    return kExitOk;
}

/// Runs one subcommand. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"exonscan: exon prediction from GT-AG candidates, boundary SVM and three-base periodicity"};
    app.name("exonscan");
    app.require_subcommand(1);
    Options o;

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with planted exons");
    synth->add_option("--out-prefix", o.out_prefix, "writes <prefix>.fasta and <prefix>.tsv")->required();
    synth->add_option("--config", o.synth_config, "key=value spec file (flags override it)");
    synth->add_option("--seed", o.synth.seed, "random seed");
    synth->add_option("--n-seq", o.synth.n_sequences, "number of sequences");
    synth->add_option("--intron-min", o.synth.intron_min, "minimum intron length");
    synth->add_option("--intron-max", o.synth.intron_max, "maximum intron length");
    synth->add_option("--exon-min", o.synth.exon_min, "minimum exon length");
    synth->add_option("--exon-max", o.synth.exon_max, "maximum exon length");
    synth->add_option("--exons", o.synth.exons_per_sequence, "exons per sequence");

    auto* train_cmd = app.add_subcommand("train", "train the boundary-window SVM");
    train_cmd->add_option("--fasta", o.fasta)->required();
    train_cmd->add_option("--annot", o.annot)->required();
    train_cmd->add_option("--out-model", o.out_model)->required();
    train_cmd->add_option("--lambda", o.lambda)->capture_default_str();
    train_cmd->add_option("--epochs", o.epochs)->capture_default_str();
    train_cmd->add_option("--seed", o.seed)->capture_default_str();

    auto* predict_cmd = app.add_subcommand("predict", "predict exons");
    predict_cmd->add_option("--fasta", o.fasta)->required();
    predict_cmd->add_option("--model", o.model)->required();
    predict_cmd->add_option("--min-len", o.pipeline.min_len)->capture_default_str();
    predict_cmd->add_option("--max-len", o.pipeline.max_len)->capture_default_str();
    predict_cmd->add_option("--r0", o.pipeline.r0, "SNR threshold")->capture_default_str();
    predict_cmd->add_flag("--all", o.all, "also write scored regions below the threshold");
    predict_cmd->add_option("--out", o.out, "output TSV (default stdout)");

    auto* scan_cmd = app.add_subcommand("scan", "sliding-window SNR");
    scan_cmd->add_option("--fasta", o.fasta)->required();
    scan_cmd->add_option("--window", o.window)->capture_default_str();
    scan_cmd->add_option("--step", o.step)->capture_default_str();
    scan_cmd->add_option("--out", o.out, "output TSV (default stdout)");

    auto* spectrum_cmd = app.add_subcommand("spectrum", "full power spectrum of one sequence");
    spectrum_cmd->add_option("--fasta", o.fasta)->required();
    spectrum_cmd->add_option("--seq-id", o.seq_id)->required();
    spectrum_cmd->add_option("--out", o.out, "output TSV (default stdout)");

    auto* eval_cmd = app.add_subcommand("eval", "nucleotide-level evaluation and ROC");
    eval_cmd->add_option("--truth", o.truth, "annotation TSV")->required();
    eval_cmd->add_option("--pred-scored", o.pred_scored, "prediction TSV")->required();
    eval_cmd->add_option("--fasta", o.fasta, "sequences (for lengths)")->required();
    eval_cmd->add_option("--convention", o.convention, "paper|standard|both")->capture_default_str();
    eval_cmd->add_option("--r0", o.eval_r0, "SNR threshold for the confusion counts")->capture_default_str();
    eval_cmd->add_option("--out", o.out, "ROC TSV (default stdout)");

    auto* stats_cmd = app.add_subcommand("stats", "exon length statistics");
    stats_cmd->add_option("--annot", o.annot)->required();
    stats_cmd->add_option("--lo", o.lo)->capture_default_str();
    stats_cmd->add_option("--hi", o.hi)->capture_default_str();
    stats_cmd->add_option("--out", o.out, "histogram TSV");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*synth) return cmd_synth(o, *synth, err);
        if (*train_cmd) return cmd_train(o, err);
        if (*predict_cmd) return cmd_predict(o, out, err);
        if (*scan_cmd) return cmd_scan(o, out);
        if (*spectrum_cmd) return cmd_spectrum(o, out);
        if (*eval_cmd) return cmd_eval(o, out);
        if (*stats_cmd) return cmd_stats(o, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    err << app.help();
    return kExitUsage;
}

} // namespace exonscan::cli
