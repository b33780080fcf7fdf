#include "custom2vec/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "custom2vec/alias.hpp"
#include "custom2vec/rng.hpp"

namespace c2v {

namespace {

constexpr const char* kMarkerIntervention = "marker-agent";

void check_spec(const AttributeSpec& spec, const char* name) {
    if (spec.vocab < 1)
        throw DataError(std::string("synthetic config: ") + name + " vocab must be >= 1");
    if (spec.min_per_trial > spec.max_per_trial)
        throw DataError(std::string("synthetic config: ") + name + " min_per_trial > max_per_trial");
    if (spec.max_per_trial > spec.vocab)
        throw DataError(std::string("synthetic config: ") + name +
                        " max_per_trial exceeds the vocabulary size");
}

AliasTable zipf_table(std::size_t vocab, double exponent) {
    std::vector<double> weights(vocab);
    for (std::size_t i = 0; i < vocab; ++i)
        weights[i] = 1.0 / std::pow(static_cast<double>(i + 1), exponent);
    return AliasTable(weights);
}

std::string label(const char* stem, std::size_t index) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s-%04zu", stem, index);
    return buf;
}

std::vector<std::string> draw_attributes(SplitMix64& rng, const AliasTable& table,
                                         const AttributeSpec& spec, const char* stem) {
    std::uint32_t count =
        spec.min_per_trial +
        static_cast<std::uint32_t>(uniform_index(rng, spec.max_per_trial - spec.min_per_trial + 1));
    std::vector<std::size_t> picked;
    while (picked.size() < count) {
        std::size_t idx = table.sample(rng);
        if (std::find(picked.begin(), picked.end(), idx) == picked.end()) picked.push_back(idx);
    }
    std::vector<std::string> out;
    out.reserve(picked.size());
    for (std::size_t idx : picked) out.push_back(label(stem, idx));
    return out;
}

} // namespace

void SynthConfig::validate() const {
    if (n_trials < 1) throw DataError("synthetic config: n_trials must be >= 1");
    if (planted_cluster_size > n_trials)
        throw DataError("synthetic config: planted_cluster_size exceeds n_trials");
    if (planted_attribute_strength < 0.0 || planted_attribute_strength > 1.0)
        throw DataError("synthetic config: planted_attribute_strength must be in [0, 1]");
    if (zipf_exponent < 0.0)
        throw DataError("synthetic config: zipf_exponent must be non-negative");
    check_spec(indications, "indications");
    check_spec(interventions, "interventions");
    check_spec(phases, "phases");
    check_spec(sponsors, "sponsors");
    check_spec(endpoints, "endpoints");
}

SynthOutput generate(const SynthConfig& config) {
    config.validate();

    AliasTable ind_table = zipf_table(config.indications.vocab, config.zipf_exponent);
    AliasTable int_table = zipf_table(config.interventions.vocab, config.zipf_exponent);
    AliasTable pha_table = zipf_table(config.phases.vocab, config.zipf_exponent);
    AliasTable spo_table = zipf_table(config.sponsors.vocab, config.zipf_exponent);
    AliasTable end_table = zipf_table(config.endpoints.vocab, config.zipf_exponent);

    SynthOutput out;
    out.records.reserve(config.n_trials);
    SplitMix64 rng(derive_seed(config.seed, 0x726563ULL)); // "rec"
    for (std::size_t i = 0; i < config.n_trials; ++i) {
        TrialRecord rec;
        char id[16];
        std::snprintf(id, sizeof(id), "SYN%06zu", i);
        rec.trial_id = id;
        rec.indications = draw_attributes(rng, ind_table, config.indications, "condition");
        rec.interventions = draw_attributes(rng, int_table, config.interventions, "agent");
        rec.phase = draw_attributes(rng, pha_table, config.phases, "phase").front();
        rec.sponsors = draw_attributes(rng, spo_table, config.sponsors, "sponsor");
        rec.endpoints = draw_attributes(rng, end_table, config.endpoints, "endpoint");
        out.records.push_back(std::move(rec));
    }

    // Planted preference cluster: a seeded trial subset sharing a marker
    // intervention with the configured probability.
    SplitMix64 cluster_rng(derive_seed(config.seed, 0x636c7573ULL)); // "clus"
    std::vector<std::size_t> indices(config.n_trials);
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    shuffle(cluster_rng, indices);
    indices.resize(config.planted_cluster_size);
    std::sort(indices.begin(), indices.end());
    for (std::size_t idx : indices) {
        if (uniform_real(cluster_rng) < config.planted_attribute_strength)
            out.records[idx].interventions.push_back(kMarkerIntervention);
        out.custom.trial_ids.push_back(out.records[idx].trial_id);
    }
    return out;
}

SynthConfig scale_config(std::uint64_t seed) {
    SynthConfig config;
    config.n_trials = 5725;
    config.indications = AttributeSpec{6500, 1, 3};
    config.interventions = AttributeSpec{30000, 2, 5};
    config.phases = AttributeSpec{10, 1, 1};
    config.sponsors = AttributeSpec{10000, 1, 2};
    config.endpoints = AttributeSpec{32000, 3, 7};
    config.zipf_exponent = 0.7; // flatter popularity so label coverage reaches ~38k nodes
    config.planted_cluster_size = 57;
    config.planted_attribute_strength = 0.6;
    config.seed = seed;
    return config;
}

} // namespace c2v
