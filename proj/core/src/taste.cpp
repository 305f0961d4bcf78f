#include "zsl/taste.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "zsl/aste.hpp"
#include "zsl/rng.hpp"

namespace zsl {
namespace {

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

// One CCCP/SGD retraining pass over the concatenated pool: seen instances
// keep their structural loss, selected unseen instances pull their embedding
// toward the frozen pseudo one-hot. Labels u/f stay fixed for the phase.
Matrix joint_retrain(const Dataset& seen, const SemanticMatrix& A_s, const Matrix& X_sel,
                     const std::vector<int>& f_sel, const SemanticMatrix& A_t, Eigen::Index M,
                     Matrix V, const TrainConfig& cfg, Rng& rng, const Dataset& unseen,
                     const std::vector<std::uint8_t>& u, const std::vector<int>& pseudo) {
    const Eigen::Index N = seen.n();
    const Eigen::Index S = X_sel.rows();
    const Eigen::Index p = seen.dim();
    const Eigen::Index K = A_s.classes();
    const Eigen::Index total = N + S;
    const Matrix& As = A_s.vectors;
    const Matrix& At = A_t.vectors;
    const Matrix AsAsT = As * As.transpose();
    const Matrix AtAtT = At * At.transpose();
    const double seen_reg = cfg.C / static_cast<double>(N);
    const double unseen_reg = cfg.C / static_cast<double>(M);
    const Eigen::Index B = cfg.minibatch;

    double prev_obj = taste_objective(seen, A_s, unseen, A_t, u, pseudo, V, cfg.C);

    std::vector<int> yhat(static_cast<std::size_t>(N));
    std::vector<int> seen_rows, unseen_rows;
    Matrix Xs, Xu, Gb, Cb, grad(p, A_s.dim());

    for (int outer = 0; outer < cfg.max_outer_iters; ++outer) {
        {
            const Matrix G = seen.features * (V * As);
            for (Eigen::Index n = 0; n < N; ++n) {
                int best = 0;
                for (Eigen::Index k = 1; k < K; ++k)
                    if (G(n, k) > G(n, best)) best = static_cast<int>(k);
                yhat[static_cast<std::size_t>(n)] = best;
            }
        }
        for (double eta : cfg.eta_schedule) {
            for (int epoch = 0; epoch < cfg.epochs_per_eta; ++epoch) {
                const std::vector<int> order = rng.permutation(static_cast<int>(total));
                for (Eigen::Index start = 0; start < total; start += B) {
                    const Eigen::Index len = std::min(B, total - start);
                    seen_rows.clear();
                    unseen_rows.clear();
                    for (Eigen::Index i = 0; i < len; ++i) {
                        const int idx = order[static_cast<std::size_t>(start + i)];
                        if (idx < N)
                            seen_rows.push_back(idx);
                        else
                            unseen_rows.push_back(idx - static_cast<int>(N));
                    }
                    grad.setZero();
                    if (!seen_rows.empty()) {
                        const Eigen::Index ns = static_cast<Eigen::Index>(seen_rows.size());
                        Xs.resize(ns, p);
                        for (Eigen::Index i = 0; i < ns; ++i)
                            Xs.row(i) = seen.features.row(seen_rows[static_cast<std::size_t>(i)]);
                        Gb.noalias() = Xs * (V * As);
                        Cb = 2.0 * Gb;
                        for (Eigen::Index i = 0; i < ns; ++i) {
                            const int n = seen_rows[static_cast<std::size_t>(i)];
                            const int truth = seen.labels[static_cast<std::size_t>(n)];
                            const int pred = yhat[static_cast<std::size_t>(n)];
                            Cb(i, truth) -= 2.0;
                            if (pred != truth) {
                                Cb(i, pred) += 1.0;
                                Cb(i, truth) -= 1.0;
                            }
                        }
                        grad.noalias() +=
                            (seen_reg * static_cast<double>(ns) / static_cast<double>(len)) * V *
                            AsAsT;
                        grad.noalias() +=
                            Xs.transpose() * Cb * As.transpose() / static_cast<double>(len);
                    }
                    if (!unseen_rows.empty()) {
                        const Eigen::Index nu = static_cast<Eigen::Index>(unseen_rows.size());
                        Xu.resize(nu, p);
                        for (Eigen::Index i = 0; i < nu; ++i)
                            Xu.row(i) = X_sel.row(unseen_rows[static_cast<std::size_t>(i)]);
                        Gb.noalias() = Xu * (V * At);
                        Cb = 2.0 * Gb;
                        for (Eigen::Index i = 0; i < nu; ++i)
                            Cb(i, f_sel[static_cast<std::size_t>(
                                   unseen_rows[static_cast<std::size_t>(i)])]) -= 2.0;
                        grad.noalias() +=
                            (unseen_reg * static_cast<double>(nu) / static_cast<double>(len)) * V *
                            AtAtT;
                        grad.noalias() +=
                            Xu.transpose() * Cb * At.transpose() / static_cast<double>(len);
                    }
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
        const double obj = taste_objective(seen, A_s, unseen, A_t, u, pseudo, V, cfg.C);
        const bool settled = std::abs(obj - prev_obj) <= cfg.tolerance * std::abs(prev_obj);
        prev_obj = obj;
        if (settled) break;
    }
    return V;
}

}  // namespace

std::string TasteTrace::to_tsv() const {
    std::ostringstream out;
    for (const TasteIteration& row : rows) {
        out << row.iteration << '\t' << format_double(row.theta) << '\t' << row.num_selected
            << '\t' << format_double(row.pseudo_label_accuracy) << '\t'
            << format_double(row.objective) << '\t' << format_double(row.wall_clock_seconds)
            << '\n';
    }
    return out.str();
}

SelectionState assign_pseudo_labels(const CompatibilityModel& model, const Dataset& unseen,
                                    const SemanticMatrix& A_t, double C) {
    {
        ValidationReport report = validate_pair(unseen, A_t);
        if (!report.ok())
            throw std::invalid_argument("assign_pseudo_labels: " + report.to_string());
    }
    const Eigen::Index M = unseen.n();
    SelectionState state;
    state.indicators.assign(static_cast<std::size_t>(M), 0);
    state.losses = Vector(M);
    state.pseudo_labels.resize(static_cast<std::size_t>(M));
    state.theta = 0.0;
    // Batched form of unseen_instance_loss over every row.
    const Matrix G = unseen.features * (model.V * A_t.vectors);
    for (Eigen::Index m = 0; m < M; ++m) {
        int best = 0;
        for (Eigen::Index l = 1; l < G.cols(); ++l)
            if (G(m, l) > G(m, best)) best = static_cast<int>(l);
        state.pseudo_labels[static_cast<std::size_t>(m)] = best;
        state.losses(m) = G.row(m).squaredNorm() - 2.0 * G(m, best) + 1.0;
    }
    return state;
}

double taste_objective(const Dataset& seen, const SemanticMatrix& A_s, const Dataset& unseen,
                       const SemanticMatrix& A_t, const std::vector<std::uint8_t>& indicators,
                       const std::vector<int>& pseudo_labels, const Matrix& V, double C) {
    double obj = seen_objective(seen, A_s, V, C);
    const Eigen::Index M = unseen.n();
    const double share = C / (2.0 * static_cast<double>(M)) * (V * A_t.vectors).squaredNorm();
    const Matrix G = unseen.features * (V * A_t.vectors);
    for (Eigen::Index m = 0; m < M; ++m) {
        if (!indicators[static_cast<std::size_t>(m)]) continue;  // u_m = 0: exactly zero
        const int f = pseudo_labels[static_cast<std::size_t>(m)];
        obj += share + G.row(m).squaredNorm() - 2.0 * G(m, f) + 1.0;
    }
    return obj;
}

TasteResult train_taste(const Dataset& seen, const SemanticMatrix& A_s, const Dataset& unseen,
                        const SemanticMatrix& A_t, const TrainConfig& cfg) {
    {
        ValidationReport report = validate_pair(seen, A_s);
        if (seen.labels.empty()) report.violations.push_back("training split is unlabeled");
        ValidationReport u = validate_pair(unseen, A_t);
        report.violations.insert(report.violations.end(), u.violations.begin(),
                                 u.violations.end());
        ValidationReport c = validate_config(cfg);
        report.violations.insert(report.violations.end(), c.violations.begin(),
                                 c.violations.end());
        if (!report.ok()) throw std::invalid_argument("train_taste: " + report.to_string());
    }

    TasteResult result;
    AsteResult base = train_aste(seen, A_s, cfg);
    Matrix V = std::move(base.model.V);
    const Eigen::Index M = unseen.n();
    const bool have_truth = !unseen.labels.empty();
    Rng rng(static_cast<std::uint64_t>(cfg.seed) * 0x9e3779b97f4a7c15ull + 1);

    double fixed_delta = -1.0;
    std::vector<std::uint8_t> prev_u;
    std::vector<int> prev_pseudo;
    std::vector<int> first_label(static_cast<std::size_t>(M), -1);

    for (std::size_t stage = 0; stage < cfg.theta_fractions.size(); ++stage) {
        const auto t0 = std::chrono::steady_clock::now();
        CompatibilityModel current{V, false, cfg.seed};
        SelectionState state = assign_pseudo_labels(current, unseen, A_t, cfg.C);

        if (fixed_delta < 0.0) fixed_delta = state.losses.maxCoeff();
        const double delta = cfg.refresh_delta ? state.losses.maxCoeff() : fixed_delta;
        const double theta = cfg.theta_fractions[stage] * delta;
        const bool final_stage = stage + 1 == cfg.theta_fractions.size();
        state.theta = theta;
        state.indicators = select(state.losses, theta, final_stage);

        if (!cfg.relabel_selected) {
            for (Eigen::Index m = 0; m < M; ++m) {
                auto& first = first_label[static_cast<std::size_t>(m)];
                if (!state.indicators[static_cast<std::size_t>(m)]) continue;
                if (first < 0)
                    first = state.pseudo_labels[static_cast<std::size_t>(m)];
                else
                    state.pseudo_labels[static_cast<std::size_t>(m)] = first;
            }
        }

        int num_selected = 0;
        for (std::uint8_t flag : state.indicators) num_selected += flag;

        TasteIteration row;
        row.iteration = static_cast<int>(stage);
        row.theta = theta;
        row.num_selected = num_selected;
        row.pseudo_label_accuracy = std::numeric_limits<double>::quiet_NaN();
        if (have_truth && num_selected > 0) {
            int hits = 0;
            for (Eigen::Index m = 0; m < M; ++m)
                if (state.indicators[static_cast<std::size_t>(m)] &&
                    state.pseudo_labels[static_cast<std::size_t>(m)] ==
                        unseen.labels[static_cast<std::size_t>(m)])
                    ++hits;
            row.pseudo_label_accuracy = static_cast<double>(hits) / num_selected;
        }

        const bool unchanged = !prev_u.empty() && state.indicators == prev_u &&
                               state.pseudo_labels == prev_pseudo;
        if (num_selected > 0 && !unchanged) {
            prev_u = state.indicators;
            prev_pseudo = state.pseudo_labels;
            Matrix X_sel(num_selected, seen.dim());
            std::vector<int> f_sel;
            f_sel.reserve(static_cast<std::size_t>(num_selected));
            Eigen::Index row_idx = 0;
            for (Eigen::Index m = 0; m < M; ++m) {
                if (!state.indicators[static_cast<std::size_t>(m)]) continue;
                X_sel.row(row_idx++) = unseen.features.row(m);
                f_sel.push_back(state.pseudo_labels[static_cast<std::size_t>(m)]);
            }
            V = joint_retrain(seen, A_s, X_sel, f_sel, A_t, M, std::move(V), cfg, rng, unseen,
                              state.indicators, state.pseudo_labels);
        }

        row.objective = taste_objective(seen, A_s, unseen, A_t, state.indicators,
                                        state.pseudo_labels, V, cfg.C);
        row.wall_clock_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.trace.rows.push_back(row);
    }

    result.model.V = std::move(V);
    result.model.trained_with_ft = false;
    result.model.trial_seed = cfg.seed;
    return result;
}

}  // namespace zsl
