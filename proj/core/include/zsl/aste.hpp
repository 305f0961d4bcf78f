#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "zsl/types.hpp"

namespace zsl {

// Per-instance structural loss, split into its three parts.
// total = regularizer + margin_delta + score_gap; score_gap is 0 exactly
// when the instance is predicted correctly.
struct SeenLossBreakdown {
    double regularizer = 0.0;
    double margin_delta = 0.0;
    double score_gap = 0.0;
    double total = 0.0;
};

class TrainingDiverged : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// x' V a — the bilinear compatibility of a feature vector with one class
// semantic vector.
double compatibility_score(const Vector& x, const Matrix& V, const Vector& a);

// g = (V A)' x: the instance's embedding in the label space, one entry per
// class, entry k = compatibility_score(x, V, A column k).
Vector predict_embedding(const Vector& x, const Matrix& V, const Matrix& A);

// argmax_k x' V a_k with ties toward the smallest class index.
int predict_label(const Vector& x, const Matrix& V, const Matrix& A);

// Adaptive margin: squared distance between predicted embedding and the
// one-hot label. Throws when y is not one-hot.
double adaptive_margin(const Vector& g, const Vector& y);

// Loss of one seen instance under model V. The predicted label (for the
// score-gap term) is computed from V itself; the overload taking yhat uses
// a caller-frozen prediction instead, which is what the trainer and the
// finite-difference tests need.
SeenLossBreakdown seen_instance_loss(const Vector& x, const Vector& y, const Matrix& V,
                                     const Matrix& A_s, double C, Eigen::Index N);
SeenLossBreakdown seen_instance_loss(const Vector& x, const Vector& y, const Matrix& V,
                                     const Matrix& A_s, double C, Eigen::Index N, int yhat);

// Analytic gradient of the per-instance loss w.r.t. V with the predicted
// label frozen: (C/N) V A A' + 2 x (g-y)' A', plus x (yhat-y)' A' when the
// frozen prediction is wrong.
Matrix seen_instance_gradient(const Vector& x, const Vector& y, const Matrix& V,
                              const Matrix& A_s, double C, Eigen::Index N);
Matrix seen_instance_gradient(const Vector& x, const Vector& y, const Matrix& V,
                              const Matrix& A_s, double C, Eigen::Index N, int yhat);

// Full-dataset objective: (C/2)||V A_s||_F^2 + sum_n [ Delta_n + gap_n ]
// with predictions taken fresh at V.
double seen_objective(const Dataset& seen, const SemanticMatrix& A_s, const Matrix& V,
                      double C);

struct AsteResult {
    CompatibilityModel model;
    // Objective evaluated at initialization and after each outer iteration.
    std::vector<double> objective_history;
};

// Minibatch SGD trainer with the predict-then-update outer loop: each outer
// iteration freezes per-instance predicted labels, then runs
// epochs_per_eta shuffled epochs at each learning rate in eta_schedule.
// Stops when the relative objective change drops below cfg.tolerance or
// after cfg.max_outer_iters. Throws TrainingDiverged (naming the minibatch)
// when the update produces non-finite values.
AsteResult train_aste(const Dataset& seen, const SemanticMatrix& A_s, const TrainConfig& cfg,
                      const std::optional<Matrix>& V_init = std::nullopt);

}  // namespace zsl
