#pragma once

#include <string>

#include "g3ad/model.hpp"

namespace g3ad {

struct Checkpoint {
    G3adConfig config;
    int n = 0;  // node count the model was shaped for
    int d = 0;  // attribute width
    ModelParams params;
};

/// Versioned binary: magic, config JSON, then each parameter matrix with a
/// name and shape header. Doubles are stored verbatim, so a load
/// reproduces scores exactly.
void save_checkpoint(const std::string& path, const ModelParams& params, const G3adConfig& cfg, int n, int d);

Checkpoint load_checkpoint(const std::string& path);

}  // namespace g3ad
