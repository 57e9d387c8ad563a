#pragma once

#include <string>

#include "altro/features.hpp"
#include "altro/nn/policy.hpp"
#include "altro/nn/train.hpp"

namespace altro::nn {

struct Checkpoint {
    PolicyNet net;
    NormStats normalization;
    TrainConfig train_config;
};

// Versioned binary container: magic + JSON header (schema, normalization,
// layer dims, training config) + raw little-endian parameter doubles.
// Round-trips are byte-identical; loading validates magic, version, and
// the feature schema.
void save_checkpoint(const std::string& path, const PolicyNet& net,
                     const NormStats& stats, const TrainConfig& cfg);

Checkpoint load_checkpoint(const std::string& path);

}  // namespace altro::nn
