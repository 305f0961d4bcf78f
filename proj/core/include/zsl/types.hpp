#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace zsl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// One-hot ground-truth label or real-valued predicted embedding g.
using LabelVector = Vector;

// Instances are rows: features is N x p. Labels are class indices in
// [0, num_classes); an unlabeled split (prediction-only) has an empty
// label vector and is otherwise valid.
struct Dataset {
    Matrix features;
    std::vector<int> labels;
    int num_classes = 0;

    Eigen::Index n() const { return features.rows(); }
    Eigen::Index dim() const { return features.cols(); }
};

// Class semantic vectors, stored q x C with one column per class.
// The on-disk format keeps the transpose (rows = classes); the loader
// transposes back.
struct SemanticMatrix {
    Matrix vectors;

    Eigen::Index dim() const { return vectors.rows(); }
    Eigen::Index classes() const { return vectors.cols(); }
};

// The learned bilinear map. W_s = V*A_s / W_t = V*A_t are derived on
// demand, never stored.
struct CompatibilityModel {
    Matrix V;  // p x q
    bool trained_with_ft = false;
    long trial_seed = 0;
};

struct TrainConfig {
    double C = 0.1;
    int minibatch = 50;
    std::vector<double> eta_schedule{1.0, 0.1, 0.01};
    int epochs_per_eta = 50;
    double tolerance = 1e-4;   // relative objective change that stops CCCP
    int max_outer_iters = 20;
    std::vector<double> theta_fractions{0.5, 0.7, 0.9, 1.0};
    long seed = 0;
    int trials = 5;
    // Threshold base delta = max loss is recomputed each transductive
    // iteration by default; fixed-delta keeps the initial model's value.
    bool refresh_delta = true;
    // Selected unseen instances are re-labeled at every selection phase by
    // default; keep-first-label retains the label from first selection.
    bool relabel_selected = true;
};

struct RidgeConfig {
    double gamma = 1.0;       // feature-side regularizer
    double lambda_sem = 1.0;  // semantic-side regularizer (bilinear solver only)
};

// A full seen/unseen split with both semantic matrices. The unseen split may
// be unlabeled (labels reserved for evaluation).
struct Bundle {
    Dataset seen;
    SemanticMatrix A_s;
    Dataset unseen;
    SemanticMatrix A_t;
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Vector of length C with a single 1 at position k. Throws
// std::invalid_argument when k is out of [0, C).
LabelVector one_hot(int k, int C);

// Index of the largest entry; ties break toward the smallest index.
int argmax_first(const Vector& v);

ValidationReport validate_dataset(const Dataset& data);
ValidationReport validate_semantics(const SemanticMatrix& semantics);
// Structural consistency of a (dataset, class semantics) pair. Failures are
// reported, not thrown.
ValidationReport validate_pair(const Dataset& data, const SemanticMatrix& semantics);
ValidationReport validate_config(const TrainConfig& cfg);

}  // namespace zsl
