// zsl: command-line front end. One command per process; every run writes a
// run.log holding the full effective config so results are reproducible from
// that file alone. Exit codes: 0 success, 1 failed check, 2 usage error,
// 3 data/validation error, 4 training divergence.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zsl/aste.hpp"
#include "zsl/baselines.hpp"
#include "zsl/evaluation.hpp"
#include "zsl/fast_training.hpp"
#include "zsl/io.hpp"
#include "zsl/rng.hpp"
#include "zsl/spass.hpp"
#include "zsl/synth.hpp"
#include "zsl/taste.hpp"

namespace {

using namespace zsl;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += fmt17(values[i]);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t idx = 0;
        const double v = std::stod(value, &idx);
        if (idx != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw UsageError("bad value for " + key + ": '" + value + "' (expected a number)");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t idx = 0;
        const int v = std::stoi(value, &idx);
        if (idx != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw UsageError("bad value for " + key + ": '" + value + "' (expected an integer)");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw UsageError("bad value for " + key + ": '" + value + "' (expected true/false)");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const std::size_t comma = value.find(',', start);
        const std::size_t end = comma == std::string::npos ? value.size() : comma;
        out.push_back(parse_double(key, value.substr(start, end - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw UsageError("empty list for " + key);
    return out;
}

// key=value overrides from repeated --set; keys not consumed by the command
// are usage errors.
struct Overrides {
    std::map<std::string, std::string> kv;

    static Overrides parse(const std::vector<std::string>& pairs) {
        Overrides o;
        for (const std::string& pair : pairs) {
            const std::size_t eq = pair.find('=');
            if (eq == std::string::npos || eq == 0)
                throw UsageError("--set expects key=value, got '" + pair + "'");
            o.kv[pair.substr(0, eq)] = pair.substr(eq + 1);
        }
        return o;
    }

    bool take(const std::string& key, std::string& value) {
        const auto it = kv.find(key);
        if (it == kv.end()) return false;
        value = it->second;
        kv.erase(it);
        return true;
    }

    void reject_leftovers() const {
        if (kv.empty()) return;
        std::string keys;
        for (const auto& [key, value] : kv) {
            (void)value;
            if (!keys.empty()) keys += ", ";
            keys += key;
        }
        throw UsageError("unknown config key(s): " + keys);
    }
};

void apply_train_overrides(TrainConfig& cfg, Overrides& o) {
    std::string v;
    if (o.take("train.C", v)) cfg.C = parse_double("train.C", v);
    if (o.take("train.minibatch", v)) cfg.minibatch = parse_int("train.minibatch", v);
    if (o.take("train.eta_schedule", v)) cfg.eta_schedule = parse_list("train.eta_schedule", v);
    if (o.take("train.epochs_per_eta", v)) cfg.epochs_per_eta = parse_int("train.epochs_per_eta", v);
    if (o.take("train.tolerance", v)) cfg.tolerance = parse_double("train.tolerance", v);
    if (o.take("train.max_outer_iters", v))
        cfg.max_outer_iters = parse_int("train.max_outer_iters", v);
    if (o.take("train.theta_fractions", v))
        cfg.theta_fractions = parse_list("train.theta_fractions", v);
    if (o.take("train.seed", v)) cfg.seed = parse_int("train.seed", v);
    if (o.take("train.trials", v)) cfg.trials = parse_int("train.trials", v);
    if (o.take("train.refresh_delta", v)) cfg.refresh_delta = parse_bool("train.refresh_delta", v);
    if (o.take("train.relabel_selected", v))
        cfg.relabel_selected = parse_bool("train.relabel_selected", v);
}

void apply_ridge_overrides(RidgeConfig& cfg, Overrides& o) {
    std::string v;
    if (o.take("ridge.gamma", v)) cfg.gamma = parse_double("ridge.gamma", v);
    if (o.take("ridge.lambda_sem", v)) cfg.lambda_sem = parse_double("ridge.lambda_sem", v);
}

void apply_synth_overrides(SynthConfig& cfg, Overrides& o) {
    std::string v;
    if (o.take("synth.k_seen", v)) cfg.k_seen = parse_int("synth.k_seen", v);
    if (o.take("synth.l_unseen", v)) cfg.l_unseen = parse_int("synth.l_unseen", v);
    if (o.take("synth.per_class", v)) cfg.per_class = parse_int("synth.per_class", v);
    if (o.take("synth.p", v)) cfg.p = parse_int("synth.p", v);
    if (o.take("synth.q", v)) cfg.q = parse_int("synth.q", v);
    if (o.take("synth.noise_sigma", v)) cfg.noise_sigma = parse_double("synth.noise_sigma", v);
    if (o.take("synth.shift_sigma", v)) cfg.shift_sigma = parse_double("synth.shift_sigma", v);
}

void log_train_config(Manifest& log, const TrainConfig& cfg) {
    log.entries["train.C"] = fmt17(cfg.C);
    log.entries["train.minibatch"] = std::to_string(cfg.minibatch);
    log.entries["train.eta_schedule"] = fmt_list(cfg.eta_schedule);
    log.entries["train.epochs_per_eta"] = std::to_string(cfg.epochs_per_eta);
    log.entries["train.tolerance"] = fmt17(cfg.tolerance);
    log.entries["train.max_outer_iters"] = std::to_string(cfg.max_outer_iters);
    log.entries["train.theta_fractions"] = fmt_list(cfg.theta_fractions);
    log.entries["train.seed"] = std::to_string(cfg.seed);
    log.entries["train.trials"] = std::to_string(cfg.trials);
    log.entries["train.refresh_delta"] = cfg.refresh_delta ? "true" : "false";
    log.entries["train.relabel_selected"] = cfg.relabel_selected ? "true" : "false";
}

void log_ridge_config(Manifest& log, const RidgeConfig& cfg) {
    log.entries["ridge.gamma"] = fmt17(cfg.gamma);
    log.entries["ridge.lambda_sem"] = fmt17(cfg.lambda_sem);
}

void log_synth_config(Manifest& log, const SynthConfig& cfg) {
    log.entries["synth.seed"] = std::to_string(cfg.seed);
    log.entries["synth.k_seen"] = std::to_string(cfg.k_seen);
    log.entries["synth.l_unseen"] = std::to_string(cfg.l_unseen);
    log.entries["synth.per_class"] = std::to_string(cfg.per_class);
    log.entries["synth.p"] = std::to_string(cfg.p);
    log.entries["synth.q"] = std::to_string(cfg.q);
    log.entries["synth.noise_sigma"] = fmt17(cfg.noise_sigma);
    log.entries["synth.shift_sigma"] = fmt17(cfg.shift_sigma);
}

std::string out_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void prepare_out(const std::string& dir) {
    if (dir.empty()) throw UsageError("--out is required for this command");
    std::filesystem::create_directories(dir);
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

// Trace serialization for the on-disk artifact: deterministic columns only,
// so repeated same-seed runs are byte-identical (wall-clock stays available
// through the library API).
std::string trace_table(const TasteTrace& trace) {
    std::string out = "iteration\ttheta\tnum_selected\tpseudo_label_accuracy\tobjective\n";
    for (const TasteIteration& row : trace.rows) {
        out += std::to_string(row.iteration) + "\t" + fmt17(row.theta) + "\t" +
               std::to_string(row.num_selected) + "\t" + fmt17(row.pseudo_label_accuracy) + "\t" +
               fmt17(row.objective) + "\n";
    }
    return out;
}

int cmd_synth(const std::string& out, long seed, Overrides& o) {
    SynthConfig cfg;
    cfg.seed = seed;
    apply_synth_overrides(cfg, o);
    o.reject_leftovers();
    prepare_out(out);

    const SynthResult data = synth_generate(cfg);
    write_matrix(out_path(out, "seen_features.txt"), data.seen.features);
    write_labels(out_path(out, "seen_labels.txt"), data.seen.labels);
    write_matrix(out_path(out, "seen_semantics.txt"), data.A_s.vectors.transpose());
    write_matrix(out_path(out, "unseen_features.txt"), data.unseen.features);
    write_labels(out_path(out, "unseen_labels.txt"), data.unseen.labels);
    write_matrix(out_path(out, "unseen_semantics.txt"), data.A_t.vectors.transpose());
    write_matrix(out_path(out, "v_star.txt"), data.V_star);

    Manifest manifest;
    manifest.entries["seen_features"] = "seen_features.txt";
    manifest.entries["seen_labels"] = "seen_labels.txt";
    manifest.entries["seen_semantics"] = "seen_semantics.txt";
    manifest.entries["unseen_features"] = "unseen_features.txt";
    manifest.entries["unseen_labels"] = "unseen_labels.txt";
    manifest.entries["unseen_semantics"] = "unseen_semantics.txt";
    write_manifest(out_path(out, "manifest.txt"), manifest);

    Manifest log;
    log.entries["command"] = "synth";
    log.entries["out"] = out;
    log_synth_config(log, cfg);
    write_manifest(out_path(out, "run.log"), log);
    std::cout << "wrote " << data.seen.n() << " seen and " << data.unseen.n()
              << " unseen instances to " << out << "\n";
    return 0;
}

int cmd_train(const std::string& manifest_path, const std::string& method_name_str,
              const std::string& out, long seed, Overrides& o) {
    TrainConfig cfg;
    cfg.seed = seed;
    RidgeConfig ridge;
    apply_train_overrides(cfg, o);
    apply_ridge_overrides(ridge, o);
    o.reject_leftovers();
    prepare_out(out);

    const Method method = method_from_string(method_name_str);
    const Bundle bundle = load_bundle(manifest_path);

    CompatibilityModel model;
    std::optional<TasteTrace> trace;
    switch (method) {
        case Method::lr: model.V = train_lr(bundle.seen, bundle.A_s, ridge); break;
        case Method::eszsl: model = train_eszsl(bundle.seen, bundle.A_s, ridge); break;
        case Method::aste:
            model = train_aste(bundle.seen, bundle.A_s, cfg, std::nullopt).model;
            break;
        case Method::taste: {
            TasteResult result =
                train_taste(bundle.seen, bundle.A_s, bundle.unseen, bundle.A_t, cfg);
            model = result.model;
            trace = std::move(result.trace);
            break;
        }
    }
    write_matrix(out_path(out, "model.txt"), model.V);
    if (trace) write_text(out_path(out, "trace.tsv"), trace_table(*trace));

    Manifest log;
    log.entries["command"] = "train";
    log.entries["manifest"] = manifest_path;
    log.entries["method"] = method_name_str;
    log.entries["out"] = out;
    log_train_config(log, cfg);
    log_ridge_config(log, ridge);
    write_manifest(out_path(out, "run.log"), log);
    std::cout << "wrote model (" << model.V.rows() << " x " << model.V.cols() << ") to " << out
              << "\n";
    return 0;
}

int cmd_predict(const std::string& manifest_path, const std::string& model_path,
                const std::string& out) {
    if (model_path.empty()) throw UsageError("--model is required for predict");
    prepare_out(out);
    const Bundle bundle = load_bundle(manifest_path);
    CompatibilityModel model;
    model.V = read_matrix(model_path);
    if (model.V.rows() != bundle.unseen.dim() || model.V.cols() != bundle.A_t.dim())
        throw std::runtime_error("model shape " + std::to_string(model.V.rows()) + " x " +
                                 std::to_string(model.V.cols()) + " does not fit the bundle");
    write_labels(out_path(out, "predictions.txt"),
                 predict_labels(model, bundle.unseen, bundle.A_t));

    Manifest log;
    log.entries["command"] = "predict";
    log.entries["manifest"] = manifest_path;
    log.entries["model"] = model_path;
    log.entries["out"] = out;
    write_manifest(out_path(out, "run.log"), log);
    std::cout << "wrote " << bundle.unseen.n() << " predictions to " << out << "\n";
    return 0;
}

int cmd_eval(const std::string& manifest_path, const std::string& model_path,
             const std::string& out) {
    if (model_path.empty()) throw UsageError("--model is required for eval");
    prepare_out(out);
    const Bundle bundle = load_bundle(manifest_path);
    if (bundle.unseen.labels.empty())
        throw std::runtime_error("eval needs unseen_labels in the manifest");
    CompatibilityModel model;
    model.V = read_matrix(model_path);
    if (model.V.rows() != bundle.unseen.dim() || model.V.cols() != bundle.A_t.dim())
        throw std::runtime_error("model shape " + std::to_string(model.V.rows()) + " x " +
                                 std::to_string(model.V.cols()) + " does not fit the bundle");

    const std::vector<int> predictions = predict_labels(model, bundle.unseen, bundle.A_t);
    const double overall =
        per_class_top1(predictions, bundle.unseen.labels, bundle.unseen.num_classes);

    std::string report = "per_class_top1\t" + fmt17(overall) + "\n";
    for (int c = 0; c < bundle.unseen.num_classes; ++c) {
        int total = 0, correct = 0;
        for (std::size_t i = 0; i < predictions.size(); ++i) {
            if (bundle.unseen.labels[i] != c) continue;
            ++total;
            correct += predictions[i] == c;
        }
        report += "class_" + std::to_string(c) + "\t" +
                  fmt17(static_cast<double>(correct) / total) + "\n";
    }
    write_text(out_path(out, "eval.txt"), report);

    Manifest log;
    log.entries["command"] = "eval";
    log.entries["manifest"] = manifest_path;
    log.entries["model"] = model_path;
    log.entries["out"] = out;
    write_manifest(out_path(out, "run.log"), log);
    std::cout << "per_class_top1 " << fmt17(overall) << "\n";
    return 0;
}

int cmd_bench_ft(const std::string& manifest_path, const std::string& method_name_str,
                 const std::string& out, long seed, int trials, Overrides& o) {
    TrainConfig cfg;
    cfg.seed = seed;
    cfg.trials = trials;
    RidgeConfig ridge;
    apply_train_overrides(cfg, o);
    apply_ridge_overrides(ridge, o);
    o.reject_leftovers();
    prepare_out(out);

    const Method method = method_from_string(method_name_str);
    const Bundle bundle = load_bundle(manifest_path);
    const FtBenchReport report = benchmark_ft(method, bundle, cfg, ridge);

    // Accuracies are deterministic per seed and live apart from the timing
    // measurements, which cannot be.
    std::string acc = "method\t" + method_name_str + "\n";
    acc += "trials\t" + std::to_string(cfg.trials) + "\n";
    acc += "acc_without_ft_mean\t" + fmt17(report.acc_without_ft.mean) + "\n";
    acc += "acc_without_ft_std\t" + fmt17(report.acc_without_ft.std_dev) + "\n";
    acc += "acc_with_ft_mean\t" + fmt17(report.acc_with_ft.mean) + "\n";
    acc += "acc_with_ft_std\t" + fmt17(report.acc_with_ft.std_dev) + "\n";
    acc += "accuracy_gap\t" +
           fmt17(std::abs(report.acc_with_ft.mean - report.acc_without_ft.mean)) + "\n";
    for (std::size_t t = 0; t < report.acc_without_ft.accuracies.size(); ++t)
        acc += "acc_without_ft_trial_" + std::to_string(t) + "\t" +
               fmt17(report.acc_without_ft.accuracies[t]) + "\n";
    for (std::size_t t = 0; t < report.acc_with_ft.accuracies.size(); ++t)
        acc += "acc_with_ft_trial_" + std::to_string(t) + "\t" +
               fmt17(report.acc_with_ft.accuracies[t]) + "\n";
    write_text(out_path(out, "bench_accuracy.txt"), acc);

    std::string timing;
    timing += "time_without_ft\t" + fmt17(report.time_without_ft) + "\n";
    timing += "time_with_ft\t" + fmt17(report.time_with_ft) + "\n";
    timing += "speedup_ratio\t" + fmt17(report.speedup_ratio) + "\n";
    write_text(out_path(out, "bench_timing.txt"), timing);

    Manifest log;
    log.entries["command"] = "bench-ft";
    log.entries["manifest"] = manifest_path;
    log.entries["method"] = method_name_str;
    log.entries["out"] = out;
    log_train_config(log, cfg);
    log_ridge_config(log, ridge);
    write_manifest(out_path(out, "run.log"), log);
    std::cout << "speedup " << fmt17(report.speedup_ratio) << ", accuracy "
              << fmt17(report.acc_without_ft.mean) << " -> " << fmt17(report.acc_with_ft.mean)
              << "\n";
    return 0;
}

int cmd_sweep(const std::string& manifest_path, const std::string& out, long seed, int trials,
              Overrides& o) {
    TrainConfig cfg;
    cfg.seed = seed;
    cfg.trials = trials;
    RidgeConfig ridge;
    std::vector<double> fractions = {0.1, 0.25, 0.5, 0.75, 1.0};
    std::string v;
    if (o.take("sweep.fractions", v)) fractions = parse_list("sweep.fractions", v);
    apply_train_overrides(cfg, o);
    apply_ridge_overrides(ridge, o);
    o.reject_leftovers();
    prepare_out(out);

    const Bundle bundle = load_bundle(manifest_path);
    const std::vector<SweepRow> rows = subsample_sweep(bundle, fractions, cfg);
    write_text(out_path(out, "sweep.tsv"), sweep_to_tsv(rows));

    Manifest log;
    log.entries["command"] = "sweep";
    log.entries["manifest"] = manifest_path;
    log.entries["out"] = out;
    log.entries["sweep.fractions"] = fmt_list(fractions);
    log_train_config(log, cfg);
    log_ridge_config(log, ridge);
    write_manifest(out_path(out, "run.log"), log);
    std::cout << "wrote sweep over " << rows.size() << " subsets to " << out << "\n";
    return 0;
}

// Central finite differences of the frozen-prediction losses against the
// analytic gradients, on random small problems.
std::pair<double, double> gradient_check(long seed, int reps) {
    Rng rng(static_cast<std::uint64_t>(seed));
    double worst_seen = 0.0, worst_unseen = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        const int p = 2 + static_cast<int>(rng.below(7));
        const int q = 2 + static_cast<int>(rng.below(7));
        const int K = 2 + static_cast<int>(rng.below(4));
        const int L = 2 + static_cast<int>(rng.below(4));
        Matrix V(p, q), A(q, K);
        SemanticMatrix A_t;
        A_t.vectors = Matrix(q, L);
        Vector x(p);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < q; ++j) V(i, j) = rng.normal();
        for (int j = 0; j < q; ++j)
            for (int k = 0; k < K; ++k) A(j, k) = rng.normal();
        for (int j = 0; j < q; ++j)
            for (int l = 0; l < L; ++l) A_t.vectors(j, l) = rng.normal();
        for (int i = 0; i < p; ++i) x(i) = rng.normal();
        const int truth = static_cast<int>(rng.below(static_cast<std::uint64_t>(K)));
        const int yhat = static_cast<int>(rng.below(static_cast<std::uint64_t>(K)));
        const int f = static_cast<int>(rng.below(static_cast<std::uint64_t>(L)));
        const Vector y = one_hot(truth, K);
        const double C = 0.1 + rng.uniform01();
        const Eigen::Index N = 1 + static_cast<Eigen::Index>(rng.below(50));
        const Eigen::Index M = 1 + static_cast<Eigen::Index>(rng.below(50));

        const Matrix g_seen = seen_instance_gradient(x, y, V, A, C, N, yhat);
        const Matrix g_unseen = unseen_instance_gradient(x, V, A_t, C, M, f);
        Matrix fd_seen(p, q), fd_unseen(p, q);
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < q; ++j) {
                const double h = 1e-6 * std::max(1.0, std::abs(V(i, j)));
                Matrix Vp = V, Vm = V;
                Vp(i, j) += h;
                Vm(i, j) -= h;
                fd_seen(i, j) = (seen_instance_loss(x, y, Vp, A, C, N, yhat).total -
                                 seen_instance_loss(x, y, Vm, A, C, N, yhat).total) /
                                (2.0 * h);
                fd_unseen(i, j) = (unseen_instance_loss(x, Vp, A_t, C, M, f) -
                                   unseen_instance_loss(x, Vm, A_t, C, M, f)) /
                                  (2.0 * h);
            }
        }
        worst_seen = std::max(worst_seen,
                              (g_seen - fd_seen).norm() / std::max(fd_seen.norm(), 1e-12));
        worst_unseen = std::max(worst_unseen, (g_unseen - fd_unseen).norm() /
                                                  std::max(fd_unseen.norm(), 1e-12));
    }
    return {worst_seen, worst_unseen};
}

int cmd_gradcheck(const std::string& out, long seed) {
    const auto [worst_seen, worst_unseen] = gradient_check(seed, 100);
    const double worst = std::max(worst_seen, worst_unseen);
    std::cout << "max relative gradient error: seen " << fmt17(worst_seen) << ", unseen "
              << fmt17(worst_unseen) << "\n";
    if (!out.empty()) {
        prepare_out(out);
        write_text(out_path(out, "gradcheck.txt"),
                   "max_rel_error_seen\t" + fmt17(worst_seen) + "\nmax_rel_error_unseen\t" +
                       fmt17(worst_unseen) + "\n");
        Manifest log;
        log.entries["command"] = "gradcheck";
        log.entries["seed"] = std::to_string(seed);
        log.entries["out"] = out;
        write_manifest(out_path(out, "run.log"), log);
    }
    return worst > 1e-4 ? 1 : 0;
}

int cmd_verify_prop1(const std::string& manifest_path, const std::string& out) {
    const Bundle bundle = load_bundle(manifest_path);
    std::string report;
    bool all_psd = true;
    const auto check_split = [&](const Dataset& data, const std::string& split) {
        if (data.labels.empty()) return;
        for (int c = 0; c < data.num_classes; ++c) {
            std::vector<int> members;
            for (std::size_t i = 0; i < data.labels.size(); ++i)
                if (data.labels[i] == c) members.push_back(static_cast<int>(i));
            Matrix rows(static_cast<Eigen::Index>(members.size()), data.dim());
            for (std::size_t r = 0; r < members.size(); ++r)
                rows.row(static_cast<Eigen::Index>(r)) = data.features.row(members[r]);
            const auto [psd, min_eig] = verify_proposition1(rows);
            all_psd = all_psd && psd;
            report += split + "_class_" + std::to_string(c) + "\t" + (psd ? "psd" : "VIOLATION") +
                      "\t" + fmt17(min_eig) + "\n";
        }
    };
    check_split(bundle.seen, "seen");
    check_split(bundle.unseen, "unseen");
    if (!out.empty()) {
        prepare_out(out);
        write_text(out_path(out, "prop1.txt"), report);
        Manifest log;
        log.entries["command"] = "verify-prop1";
        log.entries["manifest"] = manifest_path;
        log.entries["out"] = out;
        write_manifest(out_path(out, "run.log"), log);
    }
    std::cout << (all_psd ? "all class covariance matrices psd\n"
                          : "PSD VIOLATION found, see report\n");
    return all_psd ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-shot learning with adaptive structural embedding"};
    app.require_subcommand(1);

    std::string manifest, model, out, method;
    long seed = 0;
    int trials = 5;
    std::vector<std::string> set_pairs;

    const auto add_common = [&](CLI::App* cmd, bool needs_manifest) {
        if (needs_manifest)
            cmd->add_option("--manifest", manifest, "dataset manifest file")->required();
        cmd->add_option("--out", out, "output directory");
        cmd->add_option("--seed", seed, "base random seed");
        cmd->add_option("--set", set_pairs, "config override key=value (repeatable)");
        return cmd;
    };

    CLI::App* synth = add_common(app.add_subcommand("synth", "generate a synthetic dataset"),
                                 false);
    synth->get_option("--out")->required();

    CLI::App* train = add_common(app.add_subcommand("train", "train a model"), true);
    train->add_option("--method", method, "lr|eszsl|aste|taste")
        ->required()
        ->check(CLI::IsMember({"lr", "eszsl", "aste", "taste"}));
    train->get_option("--out")->required();

    CLI::App* predict =
        add_common(app.add_subcommand("predict", "label the unseen split"), true);
    predict->add_option("--model", model, "trained model matrix file")->required();
    predict->get_option("--out")->required();

    CLI::App* eval = add_common(app.add_subcommand("eval", "score a model"), true);
    eval->add_option("--model", model, "trained model matrix file")->required();
    eval->get_option("--out")->required();

    CLI::App* bench =
        add_common(app.add_subcommand("bench-ft", "benchmark pattern condensation"), true);
    bench->add_option("--method", method, "lr|eszsl|aste|taste")
        ->required()
        ->check(CLI::IsMember({"lr", "eszsl", "aste", "taste"}));
    bench->add_option("--trials", trials, "trials per arm");
    bench->get_option("--out")->required();

    CLI::App* sweep =
        add_common(app.add_subcommand("sweep", "training subset accuracy curve"), true);
    sweep->add_option("--trials", trials, "trials per subset");
    sweep->get_option("--out")->required();

    CLI::App* gradcheck =
        add_common(app.add_subcommand("gradcheck", "finite-difference gradient check"), false);

    CLI::App* prop1 = add_common(
        app.add_subcommand("verify-prop1", "verify class covariance positivity"), true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        Overrides overrides = Overrides::parse(set_pairs);
        if (synth->parsed()) return cmd_synth(out, seed, overrides);
        if (train->parsed()) return cmd_train(manifest, method, out, seed, overrides);
        if (predict->parsed()) return cmd_predict(manifest, model, out);
        if (eval->parsed()) return cmd_eval(manifest, model, out);
        if (bench->parsed()) return cmd_bench_ft(manifest, method, out, seed, trials, overrides);
        if (sweep->parsed()) return cmd_sweep(manifest, out, seed, trials, overrides);
        if (gradcheck->parsed()) return cmd_gradcheck(out, seed);
        if (prop1->parsed()) return cmd_verify_prop1(manifest, out);
        std::cerr << "usage error: no command given\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const zsl::TrainingDiverged& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
