#pragma once

#include "zsl/types.hpp"

namespace zsl {

struct SynthConfig {
    long seed = 0;
    int k_seen = 40;
    int l_unseen = 5;
    int per_class = 50;  // instances per class, both splits
    int p = 32;          // feature dimension
    int q = 16;          // semantic dimension
    double noise_sigma = 0.1;
    // Magnitude of the perturbation applied to the planted V* when
    // generating unseen prototypes; 0 = no domain shift.
    double shift_sigma = 0.0;
};

ValidationReport validate_synth_config(const SynthConfig& cfg);

struct SynthResult {
    Dataset seen;
    Dataset unseen;  // labeled; callers may drop labels for prediction runs
    SemanticMatrix A_s;
    SemanticMatrix A_t;
    Matrix V_star;  // the planted p x q map
};

// Seeded generator. Semantic columns are i.i.d. standard normal; class
// prototypes are V* a_c (seen) and the norm-preserving perturbation
// (V* + shift_sigma * P) a_c rescaled to ||V* a_c|| (unseen), so shift
// rotates prototypes without inflating feature scale; instances add
// noise_sigma * standard normal per coordinate. Identical seeds give
// identical bits.
SynthResult synth_generate(const SynthConfig& cfg);

}  // namespace zsl
