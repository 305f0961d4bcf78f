#pragma once

#include "zsl/types.hpp"

namespace zsl {

// Ridge regression into the semantic space:
// W = argmin sum_n ||x_n' W - a_label(n)'||^2 + gamma ||W||_F^2
//   = (X'X + gamma I)^-1 X' S,  row n of S = semantic vector of n's class.
Matrix train_lr(const Dataset& dataset, const SemanticMatrix& A_s, const RidgeConfig& cfg);

// Bilinear ridge solver, closed form
//   V = (X'X + gamma I)^-1 X' Y A_s' (A_s A_s' + lambda I)^-1,
// the stationary point of ||X V A_s - Y||^2 + gamma ||V A_s||^2
// + lambda ||X V||^2 + gamma lambda ||V||^2.
CompatibilityModel train_eszsl(const Dataset& dataset, const SemanticMatrix& A_s,
                               const RidgeConfig& cfg);

}  // namespace zsl
