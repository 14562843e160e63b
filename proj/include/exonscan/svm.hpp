#pragma once

// Linear soft-margin SVM over one-hot encoded 40-base boundary windows.
//
// Training minimises   lambda/2 * |w|^2 + 1/L * sum_i max(0, 1 - y_i (w.x_i + b))
// by stochastic subgradient descent with step 1/(lambda t), an
// unregularised bias and the averaged iterate as the returned model. The
// visiting order of each epoch is a shuffle drawn from the seed, so a
// training run is a pure function of (data, lambda, epochs, seed).

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "exonscan/candidates.hpp"
#include "exonscan/random.hpp"
#include "exonscan/seqio.hpp"

namespace exonscan {

inline constexpr std::size_t kFeatureDim = 4 * kWindowLength;

inline constexpr double kDefaultLambda = 1e-3;
inline constexpr int kDefaultEpochs = 100;
inline constexpr std::uint64_t kDefaultSeed = 42;

/// +1: exon start, -1: intron start (exon end).
enum class Label : int { Negative = -1, Positive = 1 };

inline constexpr int sign_of(Label l) noexcept { return static_cast<int>(l); }

using FeatureVector = std::array<double, kFeatureDim>;

struct EncodedWindow {
    FeatureVector x{};
    std::optional<Label> label;
};

struct SvmModel {
    FeatureVector w{};
    double b = 0.0;
    double lambda = kDefaultLambda;
    int epochs = kDefaultEpochs;
    std::uint64_t seed = kDefaultSeed;

    friend bool operator==(const SvmModel&, const SvmModel&) = default;
};

/// Slot of each base inside its 4-wide block: T, C, G, A map to one-hot
/// positions 0, 1, 2, 3, i.e. A=(0,0,0,1) G=(0,0,1,0) C=(0,1,0,0) T=(1,0,0,0).
constexpr int one_hot_slot(char c) noexcept {
    switch (c) {
    case 'T': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'A': return 3;
    default: return -1;
    }
}

inline EncodedWindow encode_window(std::string_view bases, std::optional<Label> label = std::nullopt) {
    if (bases.size() != kWindowLength) {
        throw DataError("window must have " + std::to_string(kWindowLength) + " bases, got " +
                        std::to_string(bases.size()));
    }
    EncodedWindow e;
    e.label = label;
    for (std::size_t i = 0; i < kWindowLength; ++i) {
        const int slot = one_hot_slot(bases[i]);
        if (slot < 0) {
            throw DataError("window contains invalid base '" + std::string(1, bases[i]) + "'");
        }
        e.x[4 * i + static_cast<std::size_t>(slot)] = 1.0;
    }
    return e;
}

inline double decision_value(const SvmModel& m, std::span<const double> x) {
    if (x.size() != kFeatureDim) {
        throw std::invalid_argument("feature dimension " + std::to_string(x.size()) + " != " +
                                    std::to_string(kFeatureDim));
    }
    return std::inner_product(m.w.begin(), m.w.end(), x.begin(), 0.0) + m.b;
}

/// sign(w.x + b), with sign(0) = +1.
inline Label predict(const SvmModel& m, std::span<const double> x) {
    return decision_value(m, x) >= 0.0 ? Label::Positive : Label::Negative;
}

inline Label predict(const SvmModel& m, const EncodedWindow& e) { return predict(m, std::span<const double>(e.x)); }

/// Regularised hinge objective of a model on labelled data.
inline double training_objective(const SvmModel& m, const std::vector<EncodedWindow>& data) {
    double hinge = 0.0;
    for (const auto& e : data) {
        const double margin = sign_of(*e.label) * decision_value(m, e.x);
        hinge += std::max(0.0, 1.0 - margin);
    }
    const double norm2 = std::inner_product(m.w.begin(), m.w.end(), m.w.begin(), 0.0);
    return 0.5 * m.lambda * norm2 + hinge / static_cast<double>(data.size());
}

inline double training_accuracy(const SvmModel& m, const std::vector<EncodedWindow>& data) {
    std::size_t ok = 0;
    for (const auto& e : data) {
        ok += predict(m, e) == *e.label ? 1 : 0;
    }
    return data.empty() ? 0.0 : static_cast<double>(ok) / static_cast<double>(data.size());
}

struct TrainResult {
    SvmModel model;
    std::vector<double> epoch_objective; // objective of the averaged iterate after each epoch
};

inline TrainResult train_with_history(const std::vector<EncodedWindow>& data, double lambda = kDefaultLambda,
                                      int epochs = kDefaultEpochs, std::uint64_t seed = kDefaultSeed,
                                      bool record_history = true) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("lambda must be a finite positive number");
    }
    if (epochs < 1) {
        throw std::invalid_argument("epochs must be >= 1");
    }
    if (data.empty()) {
        throw DataError("training set is empty");
    }
    bool has_pos = false, has_neg = false;
    for (const auto& e : data) {
        if (!e.label) {
            throw DataError("training window without label");
        }
        (*e.label == Label::Positive ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) {
        throw DataError("training set is not a two-class problem");
    }

    FeatureVector w{};
    double b = 0.0;
    FeatureVector w_sum{};
    double b_sum = 0.0;

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Xoshiro256 rng(seed);

    TrainResult result;
    result.model.lambda = lambda;
    result.model.epochs = epochs;
    result.model.seed = seed;

    std::uint64_t t = 0;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t idx : order) {
            ++t;
            const auto& e = data[idx];
            const double y = sign_of(*e.label);
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const double margin = y * (std::inner_product(w.begin(), w.end(), e.x.begin(), 0.0) + b);
            const double shrink = 1.0 - eta * lambda;
            for (auto& wi : w) {
                wi *= shrink;
            }
            if (margin < 1.0) {
                for (std::size_t j = 0; j < kFeatureDim; ++j) {
                    w[j] += eta * y * e.x[j];
                }
                b += eta * y;
            }
            for (std::size_t j = 0; j < kFeatureDim; ++j) {
                w_sum[j] += w[j];
            }
            b_sum += b;
        }
        if (record_history || epoch + 1 == epochs) {
            const double inv = 1.0 / static_cast<double>(t);
            for (std::size_t j = 0; j < kFeatureDim; ++j) {
                result.model.w[j] = w_sum[j] * inv;
            }
            result.model.b = b_sum * inv;
            if (record_history) {
                result.epoch_objective.push_back(training_objective(result.model, data));
            }
        }
    }
    return result;
}

inline SvmModel train(const std::vector<EncodedWindow>& data, double lambda = kDefaultLambda,
                      int epochs = kDefaultEpochs, std::uint64_t seed = kDefaultSeed) {
    return train_with_history(data, lambda, epochs, seed, false).model;
}

/// Anything that can label a boundary window.
template <typename C>
concept WindowClassifier = requires(const C& c, const BoundaryWindow& w) {
    { c(w) } -> std::convertible_to<Label>;
};

/// Adapts an SvmModel to WindowClassifier.
struct SvmWindowClassifier {
    const SvmModel* model;
    Label operator()(const BoundaryWindow& w) const { return predict(*model, encode_window(w.bases)); }
};

/// Accepts every window with the label its side calls for.
struct PassThroughClassifier {
    Label operator()(const BoundaryWindow& w) const noexcept {
        return w.side == WindowSide::ExonStart ? Label::Positive : Label::Negative;
    }
};

struct FilteredWindows {
    std::vector<BoundaryWindow> starts;
    std::vector<BoundaryWindow> ends;
};

/// Exon-start windows labelled +1 go to `starts`, exon-end windows labelled
/// -1 go to `ends`; everything else is dropped. Order is preserved.
template <WindowClassifier C>
FilteredWindows filter_windows(const C& classify, const std::vector<BoundaryWindow>& windows) {
    FilteredWindows out;
    for (const auto& w : windows) {
        const Label l = classify(w);
        if (w.side == WindowSide::ExonStart && l == Label::Positive) {
            out.starts.push_back(w);
        } else if (w.side == WindowSide::ExonEnd && l == Label::Negative) {
            out.ends.push_back(w);
        }
    }
    return out;
}

inline FilteredWindows filter_windows(const SvmModel& model, const std::vector<BoundaryWindow>& windows) {
    return filter_windows(SvmWindowClassifier{&model}, windows);
}

// Model file:
//   linear-svm v1
//   dim 160
//   lambda <v> epochs <n> seed <s>
//   <bias>
//   <w_1> ... <w_160>, one per line

inline constexpr std::string_view kModelMagic = "linear-svm v1";

inline void save_model(std::ostream& out, const SvmModel& m) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(m.b) || !finite(m.lambda) || !std::all_of(m.w.begin(), m.w.end(), finite)) {
        throw std::invalid_argument("cannot save a model with non-finite entries");
    }
    out << kModelMagic << '\n'
        << "dim " << kFeatureDim << '\n'
        << "lambda " << detail::format_roundtrip(m.lambda) << " epochs " << m.epochs << " seed " << m.seed << '\n'
        << detail::format_roundtrip(m.b) << '\n';
    for (double wi : m.w) {
        out << detail::format_roundtrip(wi) << '\n';
    }
    detail::check_stream(out, "model");
}

inline std::string save_model(const SvmModel& m) {
    std::ostringstream out;
    save_model(out, m);
    return out.str();
}

inline SvmModel load_model(std::istream& in) {
    std::size_t line_no = 0;
    std::string raw;
    auto next_line = [&](const char* what) -> std::string {
        if (!std::getline(in, raw)) {
            throw DataError("model file truncated: missing " + std::string(what) + " at line " +
                            std::to_string(line_no + 1));
        }
        ++line_no;
        return std::string(detail::trim_cr(raw));
    };
    auto fail = [&](const std::string& why) { return DataError("model line " + std::to_string(line_no) + ": " + why); };
    auto number = [&](std::string_view tok) {
        auto v = detail::parse_number<double>(tok);
        if (!v || !std::isfinite(*v)) {
            throw fail("not a finite number: '" + std::string(tok) + "'");
        }
        return *v;
    };

    if (next_line("header") != kModelMagic) {
        throw fail("unsupported model version (expected '" + std::string(kModelMagic) + "')");
    }
    {
        std::istringstream ls(next_line("dimension"));
        std::string key, tok;
        ls >> key >> tok;
        auto dim = detail::parse_number<std::size_t>(tok);
        if (key != "dim" || !dim) {
            throw fail("expected 'dim <n>'");
        }
        if (*dim != kFeatureDim) {
            throw fail("dimension " + tok + " != " + std::to_string(kFeatureDim));
        }
    }
    SvmModel m;
    {
        std::istringstream ls(next_line("hyperparameters"));
        std::string k1, v1, k2, v2, k3, v3, extra;
        ls >> k1 >> v1 >> k2 >> v2 >> k3 >> v3;
        if (k1 != "lambda" || k2 != "epochs" || k3 != "seed" || (ls >> extra)) {
            throw fail("expected 'lambda <v> epochs <n> seed <s>'");
        }
        m.lambda = number(v1);
        auto ep = detail::parse_number<int>(v2);
        auto sd = detail::parse_number<std::uint64_t>(v3);
        if (!ep || !sd) {
            throw fail("malformed epochs or seed");
        }
        m.epochs = *ep;
        m.seed = *sd;
    }
    m.b = number(next_line("bias"));
    for (std::size_t j = 0; j < kFeatureDim; ++j) {
        m.w[j] = number(next_line("weight"));
    }
    while (std::getline(in, raw)) {
        ++line_no;
        if (!detail::is_blank(raw)) {
            throw fail("unexpected content after " + std::to_string(kFeatureDim) + " weights");
        }
    }
    return m;
}

inline SvmModel load_model(std::string_view text) {
    std::istringstream in{std::string(text)};
    return load_model(in);
}

} // namespace exonscan
