#include "zsl/spass.hpp"

#include <cmath>
#include <stdexcept>

#include "zsl/aste.hpp"

namespace zsl {

UnseenLoss unseen_instance_loss(const Vector& x, const Matrix& V, const SemanticMatrix& A_t,
                                double C, Eigen::Index M) {
    if (M < 1) throw std::invalid_argument("unseen_instance_loss: M must be >= 1");
    const Vector g = predict_embedding(x, V, A_t.vectors);
    UnseenLoss loss;
    loss.pseudo_label = argmax_first(g);
    // ||1_f - g||^2 without materializing the one-hot vector
    loss.squared_distance = g.squaredNorm() - 2.0 * g(loss.pseudo_label) + 1.0;
    loss.total = C / (2.0 * static_cast<double>(M)) * (V * A_t.vectors).squaredNorm() +
                 loss.squared_distance;
    return loss;
}

double unseen_instance_loss(const Vector& x, const Matrix& V, const SemanticMatrix& A_t, double C,
                            Eigen::Index M, int frozen_label) {
    if (M < 1) throw std::invalid_argument("unseen_instance_loss: M must be >= 1");
    if (frozen_label < 0 || frozen_label >= A_t.classes())
        throw std::invalid_argument("unseen_instance_loss: frozen label out of range");
    const Vector g = predict_embedding(x, V, A_t.vectors);
    const double dist = g.squaredNorm() - 2.0 * g(frozen_label) + 1.0;
    return C / (2.0 * static_cast<double>(M)) * (V * A_t.vectors).squaredNorm() + dist;
}

Matrix unseen_instance_gradient(const Vector& x, const Matrix& V, const SemanticMatrix& A_t,
                                double C, Eigen::Index M, int frozen_label) {
    if (M < 1) throw std::invalid_argument("unseen_instance_gradient: M must be >= 1");
    if (frozen_label < 0 || frozen_label >= A_t.classes())
        throw std::invalid_argument("unseen_instance_gradient: frozen label out of range");
    Vector residual = 2.0 * predict_embedding(x, V, A_t.vectors);
    residual(frozen_label) -= 2.0;
    Matrix grad = C / static_cast<double>(M) * V * (A_t.vectors * A_t.vectors.transpose());
    grad.noalias() += x * residual.transpose() * A_t.vectors.transpose();
    return grad;
}

std::vector<std::uint8_t> select(const Vector& losses, double theta, bool final_stage) {
    std::vector<std::uint8_t> u(static_cast<std::size_t>(losses.size()), 0);
    for (Eigen::Index m = 0; m < losses.size(); ++m) {
        const double loss = losses(m);
        if (!std::isfinite(loss))
            throw std::invalid_argument("select: non-finite loss at index " + std::to_string(m));
        u[static_cast<std::size_t>(m)] =
            (final_stage ? loss <= theta : loss < theta) ? 1 : 0;
    }
    return u;
}

std::vector<double> theta_schedule(const Vector& losses, const std::vector<double>& fractions) {
    if (losses.size() == 0) throw std::invalid_argument("theta_schedule: empty loss vector");
    if (!losses.allFinite()) throw std::invalid_argument("theta_schedule: non-finite loss");
    const double delta = losses.maxCoeff();
    std::vector<double> schedule;
    schedule.reserve(fractions.size());
    for (double f : fractions) schedule.push_back(f * delta);
    return schedule;
}

}  // namespace zsl
