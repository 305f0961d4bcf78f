#pragma once

#include <string>
#include <vector>

#include "zsl/spass.hpp"
#include "zsl/types.hpp"

namespace zsl {

struct TasteIteration {
    int iteration = 0;
    double theta = 0.0;
    int num_selected = 0;
    // Fraction of selected instances whose pseudo label matches ground
    // truth; NaN when the unseen split carries no labels.
    double pseudo_label_accuracy = 0.0;
    double objective = 0.0;
    double wall_clock_seconds = 0.0;
};

struct TasteTrace {
    std::vector<TasteIteration> rows;

    // One line per iteration, tab-separated, fields in declaration order.
    std::string to_tsv() const;
};

struct TasteResult {
    CompatibilityModel model;
    TasteTrace trace;
};

// Losses and pseudo labels for every unseen instance under a fixed model;
// indicators are left all-zero for a later select() pass.
SelectionState assign_pseudo_labels(const CompatibilityModel& model, const Dataset& unseen,
                                    const SemanticMatrix& A_t, double C);

// Joint objective: the seen structural objective plus, for selected
// instances, the per-instance regularizer share and squared distance to the
// frozen pseudo label.
double taste_objective(const Dataset& seen, const SemanticMatrix& A_s, const Dataset& unseen,
                       const SemanticMatrix& A_t, const std::vector<std::uint8_t>& indicators,
                       const std::vector<int>& pseudo_labels, const Matrix& V, double C);

// Transductive trainer: train on seen data alone, then alternate threshold
// selection of confident unseen instances with joint retraining on the
// concatenated pool, advancing theta through cfg.theta_fractions. Unseen
// ground-truth labels, when present, are used only for the trace.
TasteResult train_taste(const Dataset& seen, const SemanticMatrix& A_s, const Dataset& unseen,
                        const SemanticMatrix& A_t, const TrainConfig& cfg);

}  // namespace zsl
