#include "zsl/types.hpp"

#include <cstddef>
#include <set>
#include <sstream>
#include <stdexcept>

namespace zsl {

std::string ValidationReport::to_string() const {
    if (violations.empty()) return "pass";
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) out << "; ";
        out << violations[i];
    }
    return out.str();
}

LabelVector one_hot(int k, int C) {
    if (k < 0 || k >= C)
        throw std::invalid_argument("one_hot: class index " + std::to_string(k) +
                                    " outside [0, " + std::to_string(C) + ")");
    Vector v = Vector::Zero(C);
    v(k) = 1.0;
    return v;
}

int argmax_first(const Vector& v) {
    if (v.size() == 0) throw std::invalid_argument("argmax_first: empty vector");
    int best = 0;
    for (int i = 1; i < v.size(); ++i)
        if (v(i) > v(best)) best = i;
    return best;
}

ValidationReport validate_dataset(const Dataset& data) {
    ValidationReport report;
    if (data.n() < 1) report.violations.push_back("dataset has no instances");
    if (data.dim() < 1) report.violations.push_back("dataset has no feature dimensions");
    if (data.num_classes < 2) report.violations.push_back("dataset needs at least 2 classes");
    if (!data.features.allFinite()) report.violations.push_back("features contain non-finite entries");
    if (!data.labels.empty()) {
        if (static_cast<Eigen::Index>(data.labels.size()) != data.n())
            report.violations.push_back("label count differs from instance count");
        std::set<int> present;
        for (int label : data.labels) {
            if (label < 0 || label >= data.num_classes) {
                report.violations.push_back("label " + std::to_string(label) +
                                            " outside [0, " + std::to_string(data.num_classes) + ")");
                break;
            }
            present.insert(label);
        }
        if (static_cast<int>(present.size()) < data.num_classes)
            report.violations.push_back("a class has zero instances");
    }
    return report;
}

ValidationReport validate_semantics(const SemanticMatrix& semantics) {
    ValidationReport report;
    if (semantics.dim() < 1) report.violations.push_back("semantic matrix has no rows");
    if (semantics.classes() < 1) report.violations.push_back("semantic matrix has no columns");
    if (!semantics.vectors.allFinite())
        report.violations.push_back("semantic matrix contains non-finite entries");
    for (Eigen::Index c = 0; c < semantics.classes(); ++c)
        if (semantics.vectors.col(c).isZero(0.0)) {
            report.violations.push_back("semantic column " + std::to_string(c) + " is all zero");
            break;
        }
    return report;
}

ValidationReport validate_pair(const Dataset& data, const SemanticMatrix& semantics) {
    ValidationReport report = validate_dataset(data);
    ValidationReport sem = validate_semantics(semantics);
    report.violations.insert(report.violations.end(), sem.violations.begin(), sem.violations.end());
    if (semantics.classes() != data.num_classes)
        report.violations.push_back("class-count mismatch: dataset " +
                                    std::to_string(data.num_classes) + ", semantics " +
                                    std::to_string(semantics.classes()));
    return report;
}

ValidationReport validate_config(const TrainConfig& cfg) {
    ValidationReport report;
    if (cfg.C <= 0) report.violations.push_back("C must be positive");
    if (cfg.minibatch < 1) report.violations.push_back("minibatch must be positive");
    if (cfg.eta_schedule.empty()) report.violations.push_back("eta_schedule is empty");
    for (double eta : cfg.eta_schedule)
        if (eta <= 0) {
            report.violations.push_back("eta_schedule entries must be positive");
            break;
        }
    if (cfg.epochs_per_eta < 1) report.violations.push_back("epochs_per_eta must be positive");
    if (cfg.tolerance <= 0) report.violations.push_back("tolerance must be positive");
    if (cfg.max_outer_iters < 1) report.violations.push_back("max_outer_iters must be positive");
    if (cfg.trials < 1) report.violations.push_back("trials must be positive");
    if (cfg.theta_fractions.empty()) {
        report.violations.push_back("theta_fractions is empty");
    } else {
        bool increasing = true;
        for (std::size_t i = 0; i < cfg.theta_fractions.size(); ++i) {
            const double f = cfg.theta_fractions[i];
            if (f <= 0 || f > 1.0) {
                report.violations.push_back("theta_fractions entries must lie in (0, 1]");
                break;
            }
            if (i && f <= cfg.theta_fractions[i - 1]) increasing = false;
        }
        if (!increasing)
            report.violations.push_back("theta_fractions must be strictly increasing");
        if (cfg.theta_fractions.back() != 1.0)
            report.violations.push_back("theta_fractions must end at 1.0");
    }
    return report;
}

}  // namespace zsl
