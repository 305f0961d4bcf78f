#pragma once

#include <functional>
#include <string>
#include <vector>

#include "zsl/types.hpp"

namespace zsl {

enum class Method { lr, eszsl, aste, taste };

Method method_from_string(const std::string& name);
std::string method_name(Method m);

struct TrialReport {
    std::vector<double> accuracies;
    double mean = 0.0;
    double std_dev = 0.0;  // population standard deviation over trials
    std::vector<double> wall_clock_seconds;

    std::string to_tsv() const;
};

struct FtBenchReport {
    double time_without_ft = 0.0;  // summed training seconds over trials
    double time_with_ft = 0.0;
    double speedup_ratio = 0.0;  // time_without_ft / time_with_ft
    TrialReport acc_without_ft;
    TrialReport acc_with_ft;

    // One metric per line: "name\tvalue".
    std::string to_key_value() const;
};

// Unweighted mean over classes of within-class top-1 accuracy. Every truth
// class must appear at least once, else the per-class term is undefined and
// the call is rejected.
double per_class_top1(const std::vector<int>& predictions, const std::vector<int>& truth,
                      int num_classes);

// Labels of an evaluation split under a trained model.
std::vector<int> predict_labels(const CompatibilityModel& model, const Dataset& data,
                                const SemanticMatrix& A);

// Trial t trains with seed base_seed + t and is scored on the fixed
// evaluation split. The unseen split must be labeled.
TrialReport run_trials(const std::function<CompatibilityModel(long)>& train_fn,
                       const Dataset& eval_data, const SemanticMatrix& A_t, int trials,
                       long base_seed);

// Accuracy and training-time comparison with and without class-mean
// condensation of the training split. Only training is timed; evaluation
// always runs on the full unseen instances.
FtBenchReport benchmark_ft(Method method, const Bundle& bundle, const TrainConfig& train_cfg,
                           const RidgeConfig& ridge_cfg);

struct SweepRow {
    std::string label;  // "0.10".."1.00", or "1-shot" / "ft-pattern"
    double mean_accuracy = 0.0;
};

// Stratified training-set subsampling curve, plus single-instance-per-class
// rows: one random instance ("1-shot") and the class-mean pattern
// ("ft-pattern"). Fraction 1.0 reproduces full-data training exactly.
std::vector<SweepRow> subsample_sweep(const Bundle& bundle, const std::vector<double>& fractions,
                                      const TrainConfig& cfg);

std::string sweep_to_tsv(const std::vector<SweepRow>& rows);

}  // namespace zsl
