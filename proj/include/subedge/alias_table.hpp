#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "subedge/rng.hpp"

namespace subedge {

// Walker/Vose alias table: linear-time construction, one slot draw plus one
// threshold comparison per sample, exact encoded distribution up to binary64
// rounding. Construction accumulates residuals in long double so the encoded
// slot masses stay within 2^-40 relative of weight/total even for large
// item counts. Immutable after build; callers supply their own Rng.
class AliasTable {
public:
    AliasTable() = default;

    static AliasTable build(const std::vector<double>& weights) {
        if (weights.empty()) throw std::invalid_argument("alias table needs at least one weight");
        long double total = 0.0L;
        for (double w : weights) {
            if (w < 0.0) throw std::invalid_argument("negative weight in alias table");
            total += static_cast<long double>(w);
        }
        if (total <= 0.0L) throw std::invalid_argument("alias table needs at least one positive weight");

        const std::size_t n = weights.size();
        AliasTable t;
        t.total_weight_ = static_cast<double>(total);
        t.threshold_.assign(n, 0.0);
        t.alias_.assign(n, 0);

        std::vector<long double> scaled(n);
        for (std::size_t i = 0; i < n; ++i) {
            scaled[i] = static_cast<long double>(weights[i]) * static_cast<long double>(n) / total;
        }

        std::vector<std::uint32_t> small, large;
        small.reserve(n);
        large.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            (scaled[i] < 1.0L ? small : large).push_back(static_cast<std::uint32_t>(i));
        }

        while (!small.empty() && !large.empty()) {
            const std::uint32_t s = small.back();
            const std::uint32_t l = large.back();
            small.pop_back();
            t.threshold_[s] = static_cast<double>(scaled[s]);
            t.alias_[s] = l;
            scaled[l] -= (1.0L - scaled[s]);
            if (scaled[l] < 1.0L) {
                large.pop_back();
                small.push_back(l);
            }
        }
        // Leftovers hold residual mass 1 up to rounding; they alias to themselves.
        for (std::uint32_t i : large) {
            t.threshold_[i] = 1.0;
            t.alias_[i] = i;
        }
        for (std::uint32_t i : small) {
            t.threshold_[i] = 1.0;
            t.alias_[i] = i;
        }
        return t;
    }

    std::size_t size() const { return threshold_.size(); }
    double total_weight() const { return total_weight_; }

    std::uint32_t sample(Rng& rng) const {
        const std::uint32_t slot = static_cast<std::uint32_t>(rng.below(threshold_.size()));
        return rng.next_double() < threshold_[slot] ? slot : alias_[slot];
    }

    // Analytic enumeration of the distribution the table actually encodes:
    // item j receives threshold_[j]/n from its own slot plus (1-threshold_[i])/n
    // from every slot aliased to it. Lets tests check exactness without sampling.
    std::vector<double> encoded_probabilities() const {
        const std::size_t n = threshold_.size();
        std::vector<long double> mass(n, 0.0L);
        for (std::size_t i = 0; i < n; ++i) {
            mass[i] += static_cast<long double>(threshold_[i]);
            mass[alias_[i]] += 1.0L - static_cast<long double>(threshold_[i]);
        }
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = static_cast<double>(mass[i] / static_cast<long double>(n));
        }
        return out;
    }

private:
    std::vector<double> threshold_;
    std::vector<std::uint32_t> alias_;
    double total_weight_ = 0.0;
};

} // namespace subedge
