#include "zsl/baselines.hpp"

#include <Eigen/Cholesky>

#include <stdexcept>

namespace zsl {
namespace {

void check_inputs(const Dataset& dataset, const SemanticMatrix& A_s, const RidgeConfig& cfg,
                  const char* where) {
    ValidationReport report = validate_pair(dataset, A_s);
    if (dataset.labels.empty()) report.violations.push_back("training split is unlabeled");
    if (cfg.gamma <= 0) report.violations.push_back("gamma must be positive");
    if (cfg.lambda_sem <= 0) report.violations.push_back("lambda_sem must be positive");
    if (!report.ok()) throw std::invalid_argument(std::string(where) + ": " + report.to_string());
}

}  // namespace

Matrix train_lr(const Dataset& dataset, const SemanticMatrix& A_s, const RidgeConfig& cfg) {
    check_inputs(dataset, A_s, cfg, "train_lr");
    const Eigen::Index p = dataset.dim();
    const Matrix& X = dataset.features;
    Matrix S(dataset.n(), A_s.dim());  // row n = semantic vector of n's class
    for (Eigen::Index n = 0; n < dataset.n(); ++n)
        S.row(n) = A_s.vectors.col(dataset.labels[static_cast<std::size_t>(n)]).transpose();
    Matrix lhs = X.transpose() * X;
    lhs.diagonal().array() += cfg.gamma;
    return lhs.ldlt().solve(X.transpose() * S);
}

CompatibilityModel train_eszsl(const Dataset& dataset, const SemanticMatrix& A_s,
                               const RidgeConfig& cfg) {
    check_inputs(dataset, A_s, cfg, "train_eszsl");
    const Matrix& X = dataset.features;
    const Matrix& A = A_s.vectors;
    const Eigen::Index K = A_s.classes();
    Matrix Y = Matrix::Zero(dataset.n(), K);
    for (Eigen::Index n = 0; n < dataset.n(); ++n)
        Y(n, dataset.labels[static_cast<std::size_t>(n)]) = 1.0;

    Matrix left = X.transpose() * X;
    left.diagonal().array() += cfg.gamma;
    Matrix right = A * A.transpose();
    right.diagonal().array() += cfg.lambda_sem;

    // V = (X'X + gI)^-1 X'Y A' (AA' + lI)^-1, solving the right factor via
    // its own LDLT on the transposed system.
    const Matrix mid = left.ldlt().solve(X.transpose() * Y) * A.transpose();
    CompatibilityModel model;
    model.V = right.ldlt().solve(mid.transpose()).transpose();
    return model;
}

}  // namespace zsl
