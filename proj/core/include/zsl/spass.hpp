#pragma once

#include <cstdint>
#include <vector>

#include "zsl/types.hpp"

namespace zsl {

// Selection state over M unseen instances. losses holds the squared
// distance ||1_f - g||^2 used by the threshold comparison (the shared
// regularizer term is identical across instances and excluded here).
struct SelectionState {
    std::vector<std::uint8_t> indicators;  // u_m in {0,1}
    Vector losses;
    std::vector<int> pseudo_labels;
    double theta = 0.0;
};

struct UnseenLoss {
    double total = 0.0;             // regularizer share + squared distance
    double squared_distance = 0.0;  // selection comparator
    int pseudo_label = 0;
};

// Loss of one unseen instance: pseudo label f = argmax of the embedding,
// total = (C/2M)||V A_t||_F^2 + ||one_hot(f) - g||^2. The u_m switch is the
// caller's.
UnseenLoss unseen_instance_loss(const Vector& x, const Matrix& V, const SemanticMatrix& A_t,
                                double C, Eigen::Index M);

// Frozen-pseudo-label forms used by the joint trainer's convex inner step
// (and by finite-difference checks): f is held fixed instead of re-derived
// from V.
double unseen_instance_loss(const Vector& x, const Matrix& V, const SemanticMatrix& A_t, double C,
                            Eigen::Index M, int frozen_label);
// d/dV of the frozen-label loss: (C/M) V A_t A_t' + 2 x (g - 1_f)' A_t'.
Matrix unseen_instance_gradient(const Vector& x, const Matrix& V, const SemanticMatrix& A_t,
                                double C, Eigen::Index M, int frozen_label);

// u_m = 1 iff losses[m] < theta; the final schedule stage uses <= so the
// maximal-loss instance is eventually selected (termination guarantee).
std::vector<std::uint8_t> select(const Vector& losses, double theta, bool final_stage);

// delta = max(losses); returns fraction*delta per schedule entry. The last
// entry is the final (closure) stage by position.
std::vector<double> theta_schedule(const Vector& losses, const std::vector<double>& fractions);

}  // namespace zsl
