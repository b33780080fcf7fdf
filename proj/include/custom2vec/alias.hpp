#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "custom2vec/errors.hpp"
#include "custom2vec/rng.hpp"

namespace c2v {

/// Vose alias construction from non-negative weights into caller-provided
/// prob/alias slots (all three spans share one size). O(n).
inline void alias_build(std::span<const double> weights, std::span<double> prob,
                        std::span<std::uint32_t> alias) {
    const std::size_t n = weights.size();
    if (n == 0 || prob.size() != n || alias.size() != n)
        throw InvariantError("alias_build: inconsistent buffer sizes");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw InvariantError("alias_build: negative weight");
        total += w;
    }
    if (total <= 0.0) throw InvariantError("alias_build: total weight must be positive");

    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i)
        scaled[i] = weights[i] * static_cast<double>(n) / total;

    std::vector<std::uint32_t> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));

    for (std::size_t i = 0; i < n; ++i) alias[i] = static_cast<std::uint32_t>(i);
    while (!small.empty() && !large.empty()) {
        std::uint32_t s = small.back();
        small.pop_back();
        std::uint32_t l = large.back();
        large.pop_back();
        prob[s] = scaled[s];
        alias[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (std::uint32_t i : large) prob[i] = 1.0;
    for (std::uint32_t i : small) prob[i] = 1.0;
}

/// Walker alias table: O(n) construction, O(1) sampling from a discrete
/// distribution given by non-negative weights.
class AliasTable {
public:
    AliasTable() = default;

    explicit AliasTable(std::span<const double> weights)
        : prob_(weights.size()), alias_(weights.size()) {
        alias_build(weights, prob_, alias_);
    }

    std::size_t size() const { return prob_.size(); }
    bool empty() const { return prob_.empty(); }

    /// Draws one index; consumes exactly two RNG values.
    template <typename Rng>
    std::uint32_t sample(Rng& rng) const {
        auto i = static_cast<std::uint32_t>(uniform_index(rng, prob_.size()));
        double coin = uniform_real(rng);
        return coin < prob_[i] ? i : alias_[i];
    }

private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
};

} // namespace c2v
