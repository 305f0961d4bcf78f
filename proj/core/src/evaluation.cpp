#include "zsl/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>

#include "zsl/aste.hpp"
#include "zsl/baselines.hpp"
#include "zsl/fast_training.hpp"
#include "zsl/rng.hpp"
#include "zsl/taste.hpp"

namespace zsl {
namespace {

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void finalize_stats(TrialReport& report) {
    const double n = static_cast<double>(report.accuracies.size());
    double sum = 0.0;
    for (const double a : report.accuracies) sum += a;
    report.mean = sum / n;
    double sq = 0.0;
    for (const double a : report.accuracies) sq += (a - report.mean) * (a - report.mean);
    report.std_dev = std::sqrt(sq / n);
}

}  // namespace

Method method_from_string(const std::string& name) {
    if (name == "lr") return Method::lr;
    if (name == "eszsl") return Method::eszsl;
    if (name == "aste") return Method::aste;
    if (name == "taste") return Method::taste;
    throw std::invalid_argument("unknown method: " + name + " (expected lr|eszsl|aste|taste)");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::lr: return "lr";
        case Method::eszsl: return "eszsl";
        case Method::aste: return "aste";
        case Method::taste: return "taste";
    }
    throw std::logic_error("unreachable method");
}

std::string TrialReport::to_tsv() const {
    std::string out = "trial\taccuracy\ttrain_seconds\n";
    for (std::size_t t = 0; t < accuracies.size(); ++t) {
        out += std::to_string(t) + "\t" + format_double(accuracies[t]) + "\t" +
               format_double(wall_clock_seconds[t]) + "\n";
    }
    out += "mean\t" + format_double(mean) + "\t\n";
    out += "std\t" + format_double(std_dev) + "\t\n";
    return out;
}

std::string FtBenchReport::to_key_value() const {
    std::string out;
    out += "time_without_ft\t" + format_double(time_without_ft) + "\n";
    out += "time_with_ft\t" + format_double(time_with_ft) + "\n";
    out += "speedup_ratio\t" + format_double(speedup_ratio) + "\n";
    out += "acc_without_ft_mean\t" + format_double(acc_without_ft.mean) + "\n";
    out += "acc_without_ft_std\t" + format_double(acc_without_ft.std_dev) + "\n";
    out += "acc_with_ft_mean\t" + format_double(acc_with_ft.mean) + "\n";
    out += "acc_with_ft_std\t" + format_double(acc_with_ft.std_dev) + "\n";
    return out;
}

double per_class_top1(const std::vector<int>& predictions, const std::vector<int>& truth,
                      int num_classes) {
    if (predictions.size() != truth.size())
        throw std::invalid_argument("predictions and truth disagree in length");
    if (truth.empty()) throw std::invalid_argument("empty evaluation split");
    if (num_classes < 1) throw std::invalid_argument("num_classes must be >= 1");
    std::vector<int> total(static_cast<std::size_t>(num_classes), 0);
    std::vector<int> correct(static_cast<std::size_t>(num_classes), 0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] < 0 || truth[i] >= num_classes)
            throw std::invalid_argument("truth label out of range: " + std::to_string(truth[i]));
        ++total[static_cast<std::size_t>(truth[i])];
        if (predictions[i] == truth[i]) ++correct[static_cast<std::size_t>(truth[i])];
    }
    double sum = 0.0;
    for (int c = 0; c < num_classes; ++c) {
        if (total[static_cast<std::size_t>(c)] == 0)
            throw std::invalid_argument("class " + std::to_string(c) +
                                        " is absent from the evaluation split");
        sum += static_cast<double>(correct[static_cast<std::size_t>(c)]) /
               total[static_cast<std::size_t>(c)];
    }
    return sum / num_classes;
}

std::vector<int> predict_labels(const CompatibilityModel& model, const Dataset& data,
                                const SemanticMatrix& A) {
    const Matrix scores = data.features * (model.V * A.vectors);  // N x C
    std::vector<int> labels(static_cast<std::size_t>(scores.rows()));
    for (Eigen::Index i = 0; i < scores.rows(); ++i)
        labels[static_cast<std::size_t>(i)] = argmax_first(scores.row(i).transpose());
    return labels;
}

TrialReport run_trials(const std::function<CompatibilityModel(long)>& train_fn,
                       const Dataset& eval_data, const SemanticMatrix& A_t, int trials,
                       long base_seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (eval_data.labels.empty())
        throw std::invalid_argument("evaluation split must be labeled");
    TrialReport report;
    for (int t = 0; t < trials; ++t) {
        const double start = now_seconds();
        const CompatibilityModel model = train_fn(base_seed + t);
        report.wall_clock_seconds.push_back(now_seconds() - start);
        report.accuracies.push_back(per_class_top1(predict_labels(model, eval_data, A_t),
                                                   eval_data.labels, eval_data.num_classes));
    }
    finalize_stats(report);
    return report;
}

namespace {

// One trainable arm of the FT benchmark: a fixed training split, trained by
// `method` with per-trial seeds. Condensation (and the warm start computed
// from the condensed split) happens outside and is timed into the arm.
std::function<CompatibilityModel(long)> make_train_fn(Method method, const Dataset& seen,
                                                      const SemanticMatrix& A_s,
                                                      const Dataset& unseen,
                                                      const SemanticMatrix& A_t,
                                                      const TrainConfig& train_cfg,
                                                      const RidgeConfig& ridge_cfg, bool with_ft) {
    switch (method) {
        case Method::lr:
            return [=](long seed) {
                (void)seed;  // closed form, seed only recorded
                CompatibilityModel model;
                model.V = train_lr(seen, A_s, ridge_cfg);
                model.trained_with_ft = with_ft;
                return model;
            };
        case Method::eszsl:
            return [=](long seed) {
                (void)seed;
                CompatibilityModel model = train_eszsl(seen, A_s, ridge_cfg);
                model.trained_with_ft = with_ft;
                return model;
            };
        case Method::aste:
            return [=](long seed) {
                TrainConfig cfg = train_cfg;
                cfg.seed = seed;
                std::optional<Matrix> init;
                if (with_ft) init = train_eszsl(seen, A_s, ridge_cfg).V;
                CompatibilityModel model = train_aste(seen, A_s, cfg, init).model;
                model.trained_with_ft = with_ft;
                model.trial_seed = seed;
                return model;
            };
        case Method::taste:
            return [=](long seed) {
                TrainConfig cfg = train_cfg;
                cfg.seed = seed;
                CompatibilityModel model = train_taste(seen, A_s, unseen, A_t, cfg).model;
                model.trained_with_ft = with_ft;
                model.trial_seed = seed;
                return model;
            };
    }
    throw std::logic_error("unreachable method");
}

}  // namespace

FtBenchReport benchmark_ft(Method method, const Bundle& bundle, const TrainConfig& train_cfg,
                           const RidgeConfig& ridge_cfg) {
    FtBenchReport report;

    const auto full_fn = make_train_fn(method, bundle.seen, bundle.A_s, bundle.unseen, bundle.A_t,
                                       train_cfg, ridge_cfg, false);
    report.acc_without_ft =
        run_trials(full_fn, bundle.unseen, bundle.A_t, train_cfg.trials, train_cfg.seed);
    for (const double s : report.acc_without_ft.wall_clock_seconds) report.time_without_ft += s;

    // Condensation is part of the fast pipeline, so its one-off cost counts
    // toward the with-FT time.
    const double condense_start = now_seconds();
    const Dataset condensed = class_visual_patterns(bundle.seen).data;
    report.time_with_ft += now_seconds() - condense_start;

    // Pattern training uses a one-instance minibatch budget that still covers
    // the K patterns.
    TrainConfig ft_cfg = train_cfg;
    ft_cfg.minibatch = std::min<int>(train_cfg.minibatch, bundle.seen.num_classes);
    const auto ft_fn = make_train_fn(method, condensed, bundle.A_s, bundle.unseen, bundle.A_t,
                                     ft_cfg, ridge_cfg, true);
    report.acc_with_ft =
        run_trials(ft_fn, bundle.unseen, bundle.A_t, train_cfg.trials, train_cfg.seed);
    for (const double s : report.acc_with_ft.wall_clock_seconds) report.time_with_ft += s;

    report.speedup_ratio = report.time_with_ft > 0
                               ? report.time_without_ft / report.time_with_ft
                               : std::numeric_limits<double>::infinity();
    return report;
}

namespace {

// Rows of `seen` keeping, per class, the prefix of a seeded shuffle of that
// class's instances. keep_fn maps class count -> kept count. Row order stays
// ascending so keeping everything reproduces the original dataset bit-for-bit.
Dataset stratified_subset(const Dataset& seen, std::uint64_t seed,
                          const std::function<int(int)>& keep_fn) {
    std::vector<std::vector<int>> by_class(static_cast<std::size_t>(seen.num_classes));
    for (std::size_t i = 0; i < seen.labels.size(); ++i)
        by_class[static_cast<std::size_t>(seen.labels[i])].push_back(static_cast<int>(i));

    Rng rng(seed);
    std::vector<int> keep;
    for (auto& members : by_class) {
        const int count = keep_fn(static_cast<int>(members.size()));
        const std::vector<int> order = rng.permutation(static_cast<int>(members.size()));
        for (int j = 0; j < count; ++j) keep.push_back(members[static_cast<std::size_t>(order[j])]);
    }
    std::sort(keep.begin(), keep.end());

    Dataset subset;
    subset.num_classes = seen.num_classes;
    subset.features = Matrix(static_cast<Eigen::Index>(keep.size()), seen.dim());
    subset.labels.resize(keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
        subset.features.row(static_cast<Eigen::Index>(r)) = seen.features.row(keep[r]);
        subset.labels[r] = seen.labels[static_cast<std::size_t>(keep[r])];
    }
    return subset;
}

std::string fraction_label(double f) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", f);
    return buf;
}

}  // namespace

std::vector<SweepRow> subsample_sweep(const Bundle& bundle, const std::vector<double>& fractions,
                                      const TrainConfig& cfg) {
    if (bundle.unseen.labels.empty())
        throw std::invalid_argument("subsample sweep needs a labeled unseen split");
    for (const double f : fractions)
        if (!(f > 0.0) || f > 1.0)
            throw std::invalid_argument("fractions must lie in (0, 1]");

    const auto mean_over_trials = [&](const std::function<Dataset(long)>& subset_fn) {
        double sum = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const long seed = cfg.seed + t;
            const Dataset subset = subset_fn(seed);
            TrainConfig trial_cfg = cfg;
            trial_cfg.seed = seed;
            trial_cfg.minibatch = std::min<int>(cfg.minibatch, static_cast<int>(subset.n()));
            const CompatibilityModel model =
                train_aste(subset, bundle.A_s, trial_cfg, std::nullopt).model;
            sum += per_class_top1(predict_labels(model, bundle.unseen, bundle.A_t),
                                  bundle.unseen.labels, bundle.unseen.num_classes);
        }
        return sum / cfg.trials;
    };

    std::vector<SweepRow> rows;
    for (const double f : fractions) {
        const double acc = mean_over_trials([&](long seed) {
            return stratified_subset(bundle.seen, static_cast<std::uint64_t>(seed), [&](int count) {
                return std::max(1, static_cast<int>(f * count));
            });
        });
        rows.push_back({fraction_label(f), acc});
    }

    rows.push_back({"1-shot", mean_over_trials([&](long seed) {
                        return stratified_subset(bundle.seen, static_cast<std::uint64_t>(seed),
                                                 [](int) { return 1; });
                    })});

    const Dataset patterns = class_visual_patterns(bundle.seen).data;
    rows.push_back({"ft-pattern", mean_over_trials([&](long) { return patterns; })});
    return rows;
}

std::string sweep_to_tsv(const std::vector<SweepRow>& rows) {
    std::string out = "subset\tmean_accuracy\n";
    for (const auto& row : rows) out += row.label + "\t" + format_double(row.mean_accuracy) + "\n";
    return out;
}

}  // namespace zsl
