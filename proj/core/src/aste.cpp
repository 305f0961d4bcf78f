#include "zsl/aste.hpp"

#include <cmath>
#include <sstream>

#include "zsl/rng.hpp"

namespace zsl {
namespace {

void check_lengths(const Vector& g, const Vector& y, const char* where) {
    if (g.size() != y.size())
        throw std::invalid_argument(std::string(where) + ": length mismatch " +
                                    std::to_string(g.size()) + " vs " + std::to_string(y.size()));
}

void check_one_hot(const Vector& y, const char* where) {
    int ones = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) == 1.0)
            ++ones;
        else if (y(i) != 0.0)
            throw std::invalid_argument(std::string(where) + ": label vector is not one-hot");
    }
    if (ones != 1)
        throw std::invalid_argument(std::string(where) + ": label vector is not one-hot");
}

}  // namespace

double compatibility_score(const Vector& x, const Matrix& V, const Vector& a) {
    if (x.size() != V.rows() || a.size() != V.cols())
        throw std::invalid_argument("compatibility_score: dimension mismatch");
    return x.dot(V * a);
}

Vector predict_embedding(const Vector& x, const Matrix& V, const Matrix& A) {
    if (x.size() != V.rows() || V.cols() != A.rows())
        throw std::invalid_argument("predict_embedding: dimension mismatch");
    return (V * A).transpose() * x;
}

int predict_label(const Vector& x, const Matrix& V, const Matrix& A) {
    return argmax_first(predict_embedding(x, V, A));
}

double adaptive_margin(const Vector& g, const Vector& y) {
    check_lengths(g, y, "adaptive_margin");
    check_one_hot(y, "adaptive_margin");
    return (g - y).squaredNorm();
}

SeenLossBreakdown seen_instance_loss(const Vector& x, const Vector& y, const Matrix& V,
                                     const Matrix& A_s, double C, Eigen::Index N, int yhat) {
    check_one_hot(y, "seen_instance_loss");
    const Vector g = predict_embedding(x, V, A_s);
    check_lengths(g, y, "seen_instance_loss");
    SeenLossBreakdown loss;
    loss.regularizer = C / (2.0 * static_cast<double>(N)) * (V * A_s).squaredNorm();
    loss.margin_delta = (g - y).squaredNorm();
    const int truth = argmax_first(y);
    loss.score_gap = (yhat != truth) ? g(yhat) - g(truth) : 0.0;
    loss.total = loss.regularizer + loss.margin_delta + loss.score_gap;
    return loss;
}

SeenLossBreakdown seen_instance_loss(const Vector& x, const Vector& y, const Matrix& V,
                                     const Matrix& A_s, double C, Eigen::Index N) {
    return seen_instance_loss(x, y, V, A_s, C, N, predict_label(x, V, A_s));
}

Matrix seen_instance_gradient(const Vector& x, const Vector& y, const Matrix& V,
                              const Matrix& A_s, double C, Eigen::Index N, int yhat) {
    check_one_hot(y, "seen_instance_gradient");
    Vector g = predict_embedding(x, V, A_s);
    check_lengths(g, y, "seen_instance_gradient");
    Vector coef = 2.0 * (g - y);
    const int truth = argmax_first(y);
    if (yhat != truth) {
        coef(yhat) += 1.0;
        coef(truth) -= 1.0;
    }
    Matrix grad = (C / static_cast<double>(N)) * V * (A_s * A_s.transpose());
    grad.noalias() += x * (A_s * coef).transpose();
    return grad;
}

Matrix seen_instance_gradient(const Vector& x, const Vector& y, const Matrix& V,
                              const Matrix& A_s, double C, Eigen::Index N) {
    return seen_instance_gradient(x, y, V, A_s, C, N, predict_label(x, V, A_s));
}

double seen_objective(const Dataset& seen, const SemanticMatrix& A_s, const Matrix& V, double C) {
    const Matrix W = V * A_s.vectors;       // p x K
    const Matrix G = seen.features * W;     // N x K, row n = g(x_n)'
    double obj = 0.5 * C * W.squaredNorm();
    for (Eigen::Index n = 0; n < G.rows(); ++n) {
        const int truth = seen.labels[static_cast<std::size_t>(n)];
        double delta = G.row(n).squaredNorm() - 2.0 * G(n, truth) + 1.0;  // ||g - 1_y||^2
        int yhat = 0;
        for (Eigen::Index k = 1; k < G.cols(); ++k)
            if (G(n, k) > G(n, yhat)) yhat = static_cast<int>(k);
        obj += delta;
        if (yhat != truth) obj += G(n, yhat) - G(n, truth);
    }
    return obj;
}

AsteResult train_aste(const Dataset& seen, const SemanticMatrix& A_s, const TrainConfig& cfg,
                      const std::optional<Matrix>& V_init) {
    {
        ValidationReport report = validate_pair(seen, A_s);
        if (seen.labels.empty()) report.violations.push_back("training split is unlabeled");
        ValidationReport c = validate_config(cfg);
        report.violations.insert(report.violations.end(), c.violations.begin(),
                                 c.violations.end());
        if (!report.ok()) throw std::invalid_argument("train_aste: " + report.to_string());
    }
    const Eigen::Index N = seen.n();
    const Eigen::Index p = seen.dim();
    const Eigen::Index q = A_s.dim();
    const Eigen::Index K = A_s.classes();
    if (V_init && (V_init->rows() != p || V_init->cols() != q))
        throw std::invalid_argument("train_aste: V_init shape mismatch");

    Rng rng(static_cast<std::uint64_t>(cfg.seed));
    Matrix V(p, q);
    if (V_init) {
        V = *V_init;
    } else {
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index j = 0; j < q; ++j) V(i, j) = 0.01 * rng.normal();
    }

    const Matrix& A = A_s.vectors;
    const Matrix AAT = A * A.transpose();  // q x q
    const double reg_scale = cfg.C / static_cast<double>(N);
    const Eigen::Index B = cfg.minibatch;

    AsteResult result;
    result.objective_history.push_back(seen_objective(seen, A_s, V, cfg.C));

    std::vector<int> yhat(static_cast<std::size_t>(N));
    Matrix Xb(B, p), Gb, Cb, grad(p, q);

    for (int outer = 0; outer < cfg.max_outer_iters; ++outer) {
        // Freeze predicted labels for this outer iteration.
        {
            const Matrix G = seen.features * (V * A);
            for (Eigen::Index n = 0; n < N; ++n) {
                int best = 0;
                for (Eigen::Index k = 1; k < K; ++k)
                    if (G(n, k) > G(n, best)) best = static_cast<int>(k);
                yhat[static_cast<std::size_t>(n)] = best;
            }
        }
        for (std::size_t eta_idx = 0; eta_idx < cfg.eta_schedule.size(); ++eta_idx) {
            const double eta = cfg.eta_schedule[eta_idx];
            for (int epoch = 0; epoch < cfg.epochs_per_eta; ++epoch) {
                const std::vector<int> order = rng.permutation(static_cast<int>(N));
                for (Eigen::Index start = 0; start < N; start += B) {
                    const Eigen::Index len = std::min(B, N - start);
                    Xb.resize(len, p);
                    for (Eigen::Index i = 0; i < len; ++i)
                        Xb.row(i) = seen.features.row(order[static_cast<std::size_t>(start + i)]);
                    Gb.noalias() = Xb * (V * A);
                    Cb = 2.0 * Gb;
                    for (Eigen::Index i = 0; i < len; ++i) {
                        const int n = order[static_cast<std::size_t>(start + i)];
                        const int truth = seen.labels[static_cast<std::size_t>(n)];
                        const int pred = yhat[static_cast<std::size_t>(n)];
                        Cb(i, truth) -= 2.0;
                        if (pred != truth) {
                            Cb(i, pred) += 1.0;
                            Cb(i, truth) -= 1.0;
                        }
                    }
                    grad.noalias() = reg_scale * V * AAT;
                    grad.noalias() += Xb.transpose() * Cb * A.transpose() / static_cast<double>(len);
                    V.noalias() -= eta * grad;
                    if (!V.allFinite()) {
                        std::ostringstream msg;
                        msg << "training diverged: non-finite update at outer " << outer
                            << ", eta " << eta << ", epoch " << epoch << ", minibatch "
                            << (start / B);
                        throw TrainingDiverged(msg.str());
                    }
                }
            }
        }
        const double obj = seen_objective(seen, A_s, V, cfg.C);
        const double prev = result.objective_history.back();
        result.objective_history.push_back(obj);
        if (std::abs(obj - prev) <= cfg.tolerance * std::abs(prev)) break;
    }

    result.model.V = std::move(V);
    result.model.trained_with_ft = false;
    result.model.trial_seed = cfg.seed;
    return result;
}

}  // namespace zsl
