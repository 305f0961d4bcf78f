#include "zsl/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "zsl/rng.hpp"

namespace zsl {

ValidationReport validate_synth_config(const SynthConfig& cfg) {
    ValidationReport report;
    if (cfg.k_seen < 2) report.violations.push_back("k_seen must be >= 2");
    if (cfg.l_unseen < 2) report.violations.push_back("l_unseen must be >= 2");
    if (cfg.per_class < 1) report.violations.push_back("per_class must be >= 1");
    if (cfg.p < 1) report.violations.push_back("p must be >= 1");
    if (cfg.q < 1) report.violations.push_back("q must be >= 1");
    if (cfg.noise_sigma < 0) report.violations.push_back("noise_sigma must be >= 0");
    if (cfg.shift_sigma < 0) report.violations.push_back("shift_sigma must be >= 0");
    return report;
}

SynthResult synth_generate(const SynthConfig& cfg) {
    {
        const ValidationReport report = validate_synth_config(cfg);
        if (!report.ok()) throw std::invalid_argument("synth_generate: " + report.to_string());
    }
    Rng rng(static_cast<std::uint64_t>(cfg.seed));
    const double map_scale = 1.0 / std::sqrt(static_cast<double>(cfg.p) * cfg.q);

    SynthResult out;
    // Draw order is part of the format: A_s, A_t, V*, P, seen noise, unseen
    // noise, all column-/row-major as written. Reordering would silently
    // change every seeded dataset.
    out.A_s.vectors = Matrix(cfg.q, cfg.k_seen);
    for (Eigen::Index c = 0; c < cfg.k_seen; ++c)
        for (Eigen::Index j = 0; j < cfg.q; ++j) out.A_s.vectors(j, c) = rng.normal();
    out.A_t.vectors = Matrix(cfg.q, cfg.l_unseen);
    for (Eigen::Index c = 0; c < cfg.l_unseen; ++c)
        for (Eigen::Index j = 0; j < cfg.q; ++j) out.A_t.vectors(j, c) = rng.normal();
    out.V_star = Matrix(cfg.p, cfg.q);
    for (Eigen::Index i = 0; i < cfg.p; ++i)
        for (Eigen::Index j = 0; j < cfg.q; ++j) out.V_star(i, j) = map_scale * rng.normal();
    Matrix P(cfg.p, cfg.q);
    for (Eigen::Index i = 0; i < cfg.p; ++i)
        for (Eigen::Index j = 0; j < cfg.q; ++j) P(i, j) = map_scale * rng.normal();

    const Matrix proto_seen = (out.V_star * out.A_s.vectors).transpose();  // K x p
    const Matrix clean_unseen = (out.V_star * out.A_t.vectors).transpose();
    Matrix proto_unseen =
        ((out.V_star + cfg.shift_sigma * P) * out.A_t.vectors).transpose();
    // The shift rotates prototypes but keeps each one's clean norm, so
    // feature scale (and SGD stability) is independent of shift_sigma.
    for (Eigen::Index c = 0; c < proto_unseen.rows(); ++c) {
        const double shifted = proto_unseen.row(c).norm();
        if (shifted > 0.0)
            proto_unseen.row(c) *= clean_unseen.row(c).norm() / shifted;
        else
            proto_unseen.row(c) = clean_unseen.row(c);
    }

    const auto fill = [&](const Matrix& prototypes, int num_classes) {
        Dataset data;
        data.num_classes = num_classes;
        data.features = Matrix(static_cast<Eigen::Index>(num_classes) * cfg.per_class, cfg.p);
        data.labels.resize(static_cast<std::size_t>(num_classes) * cfg.per_class);
        Eigen::Index row = 0;
        for (int c = 0; c < num_classes; ++c) {
            for (int i = 0; i < cfg.per_class; ++i, ++row) {
                data.features.row(row) = prototypes.row(c);
                for (Eigen::Index j = 0; j < cfg.p; ++j)
                    data.features(row, j) += cfg.noise_sigma * rng.normal();
                data.labels[static_cast<std::size_t>(row)] = c;
            }
        }
        return data;
    };
    out.seen = fill(proto_seen, cfg.k_seen);
    out.unseen = fill(proto_unseen, cfg.l_unseen);
    return out;
}

}  // namespace zsl
