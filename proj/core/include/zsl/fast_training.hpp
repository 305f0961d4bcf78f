#pragma once

#include <utility>
#include <vector>

#include "zsl/types.hpp"

namespace zsl {

// One mean feature row per class; N == num_classes after condensation.
struct CondensedDataset {
    Dataset data;
    std::vector<int> original_counts;  // k_i instances behind pattern i
};

// Replace each class by its arithmetic-mean visual pattern. Throws when a
// class has no instances.
CondensedDataset class_visual_patterns(const Dataset& dataset);

// D = (1/k) sum_j x_j x_j' - xbar xbar' is a covariance and must be PSD.
// Returns (psd within tolerance, min eigenvalue); tolerance -1e-9*||D||.
std::pair<bool, double> verify_proposition1(const Matrix& class_rows);

// Empirical risks of a fixed linear mapping into the semantic space:
// full averages ||x'W - a_label'||^2 over all N instances, condensed over
// the K class patterns. condensed <= full for any fixed mapping.
std::pair<double, double> compare_empirical_risk(const Dataset& dataset, const Matrix& mapping,
                                                 const SemanticMatrix& targets);

}  // namespace zsl
