#include "zsl/fast_training.hpp"

#include <Eigen/Eigenvalues>

#include <stdexcept>

namespace zsl {

CondensedDataset class_visual_patterns(const Dataset& dataset) {
    {
        ValidationReport report = validate_dataset(dataset);
        if (dataset.labels.empty()) report.violations.push_back("dataset is unlabeled");
        if (!report.ok())
            throw std::invalid_argument("class_visual_patterns: " + report.to_string());
    }
    const int K = dataset.num_classes;
    CondensedDataset condensed;
    condensed.data.features = Matrix::Zero(K, dataset.dim());
    condensed.data.num_classes = K;
    condensed.original_counts.assign(static_cast<std::size_t>(K), 0);
    for (Eigen::Index n = 0; n < dataset.n(); ++n) {
        const int label = dataset.labels[static_cast<std::size_t>(n)];
        condensed.data.features.row(label) += dataset.features.row(n);
        ++condensed.original_counts[static_cast<std::size_t>(label)];
    }
    condensed.data.labels.resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const int count = condensed.original_counts[static_cast<std::size_t>(k)];
        if (count == 0)
            throw std::invalid_argument("class_visual_patterns: class " + std::to_string(k) +
                                        " has no instances");
        condensed.data.features.row(k) /= static_cast<double>(count);
        condensed.data.labels[static_cast<std::size_t>(k)] = k;
    }
    return condensed;
}

std::pair<bool, double> verify_proposition1(const Matrix& class_rows) {
    if (class_rows.rows() < 1) throw std::invalid_argument("verify_proposition1: no rows");
    const double k = static_cast<double>(class_rows.rows());
    const Vector mean = class_rows.colwise().mean();
    Matrix D = class_rows.transpose() * class_rows / k;
    D.noalias() -= mean * mean.transpose();
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(D, Eigen::EigenvaluesOnly);
    const double min_eig = eig.eigenvalues().minCoeff();
    const bool psd = min_eig >= -1e-9 * D.norm();
    return {psd, min_eig};
}

std::pair<double, double> compare_empirical_risk(const Dataset& dataset, const Matrix& mapping,
                                                 const SemanticMatrix& targets) {
    {
        ValidationReport report = validate_pair(dataset, targets);
        if (dataset.labels.empty()) report.violations.push_back("dataset is unlabeled");
        if (!report.ok())
            throw std::invalid_argument("compare_empirical_risk: " + report.to_string());
    }
    if (mapping.rows() != dataset.dim() || mapping.cols() != targets.dim())
        throw std::invalid_argument("compare_empirical_risk: mapping shape mismatch");

    const Matrix projected = dataset.features * mapping;  // N x q
    double full = 0.0;
    for (Eigen::Index n = 0; n < dataset.n(); ++n) {
        const int label = dataset.labels[static_cast<std::size_t>(n)];
        full += (projected.row(n).transpose() - targets.vectors.col(label)).squaredNorm();
    }
    full /= static_cast<double>(dataset.n());

    const CondensedDataset condensed = class_visual_patterns(dataset);
    const Matrix pattern_proj = condensed.data.features * mapping;  // K x q
    double reduced = 0.0;
    for (Eigen::Index k = 0; k < pattern_proj.rows(); ++k)
        reduced += (pattern_proj.row(k).transpose() - targets.vectors.col(k)).squaredNorm();
    reduced /= static_cast<double>(pattern_proj.rows());

    return {full, reduced};
}

}  // namespace zsl
