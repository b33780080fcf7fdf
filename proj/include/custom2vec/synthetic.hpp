#pragma once

#include <cstdint>
#include <vector>

#include "custom2vec/ingest.hpp"

namespace c2v {

/// One attribute kind of the generator: vocabulary size and how many values
/// each trial draws (uniform in [min_per_trial, max_per_trial], distinct
/// within a trial). Label popularity is Zipf-distributed so hub attributes
/// exist.
struct AttributeSpec {
    std::size_t vocab = 1;
    std::uint32_t min_per_trial = 1;
    std::uint32_t max_per_trial = 1;
};

struct SynthConfig {
    std::size_t n_trials = 500;
    AttributeSpec indications{150, 1, 3};
    AttributeSpec interventions{400, 1, 3};
    AttributeSpec phases{6, 1, 1};
    AttributeSpec sponsors{120, 1, 2};
    AttributeSpec endpoints{250, 2, 4};
    double zipf_exponent = 1.0;
    std::size_t planted_cluster_size = 20;
    double planted_attribute_strength = 0.6; // P(cluster member carries the marker)
    std::uint64_t seed = 1;

    void validate() const;
};

struct SynthOutput {
    std::vector<TrialRecord> records;
    CustomSet custom; // the planted cluster
};

/// Deterministic trial-like records with a planted preference cluster whose
/// members share a marker intervention with the configured probability.
SynthOutput generate(const SynthConfig& config);

/// Scale preset mirroring a ~38k-node, ~75k-edge snapshot.
SynthConfig scale_config(std::uint64_t seed);

} // namespace c2v
