#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "rational.hpp"

namespace packing3d {

// Generalized assignment: item i placed in knapsack s costs size[i][s] (nullopt when it
// cannot go there) and earns profit[i]. Each knapsack's sizes must stay within capacity.
struct GapInstance {
    std::vector<Rational> capacity;
    std::vector<std::vector<std::optional<Rational>>> size;
    std::vector<Rational> profit;
};

struct GapResult {
    std::vector<std::optional<std::size_t>> slot;  // per item
    Rational profit = 0;
    std::uint64_t nodes = 0;
    bool exact = true;  // false when the node budget stopped the search
};

struct GapOptions {
    std::size_t max_knapsacks = 64;
    std::uint64_t node_budget = std::numeric_limits<std::uint64_t>::max();
};

namespace detail {

class GapSearch {
public:
    GapSearch(const GapInstance& g, const GapOptions& o) : g_(g), opt_(o) {
        const std::size_t n = g.profit.size();
        order_.resize(n);
        for (std::size_t i = 0; i < n; ++i) order_[i] = i;
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return g.profit[a] > g.profit[b]; });
        cur_.assign(n, std::nullopt);
        left_ = g.capacity;
    }

    GapResult run() {
        best_.slot.assign(g_.profit.size(), std::nullopt);
        dfs(0, Rational(0));
        return best_;
    }

private:
    void dfs(std::size_t k, const Rational& profit) {
        if (++best_.nodes > opt_.node_budget) {
            best_.exact = false;
            return;
        }
        if (profit > best_.profit) {
            best_.profit = profit;
            best_.slot = cur_;
        }
        if (k == order_.size()) return;
        // optimistic bound: every remaining item that still fits somewhere
        Rational bound = profit;
        for (std::size_t t = k; t < order_.size(); ++t)
            if (fits_somewhere(order_[t])) bound += g_.profit[order_[t]];
        if (bound <= best_.profit) return;
        std::size_t i = order_[k];
        for (std::size_t s = 0; s < left_.size(); ++s) {
            const auto& sz = g_.size[i][s];
            if (!sz || *sz > left_[s]) continue;
            left_[s] -= *sz;
            cur_[i] = s;
            dfs(k + 1, profit + g_.profit[i]);
            cur_[i] = std::nullopt;
            left_[s] += *sz;
            if (!best_.exact) return;
        }
        dfs(k + 1, profit);
    }

    bool fits_somewhere(std::size_t i) const {
        for (std::size_t s = 0; s < left_.size(); ++s)
            if (g_.size[i][s] && *g_.size[i][s] <= left_[s]) return true;
        return false;
    }

    const GapInstance& g_;
    GapOptions opt_;
    std::vector<std::size_t> order_;
    std::vector<std::optional<std::size_t>> cur_;
    std::vector<Rational> left_;
    GapResult best_;
};

}  // namespace detail

// Exact branch and bound; optimal unless the node budget runs out.
inline GapResult gap_solve(const GapInstance& g, const GapOptions& opts = {}) {
    if (g.capacity.size() > opts.max_knapsacks) throw CapExceededError("too many knapsacks for exact GAP");
    if (g.size.size() != g.profit.size()) throw PreconditionError("gap: size table does not match items");
    for (const auto& row : g.size)
        if (row.size() != g.capacity.size()) throw PreconditionError("gap: size row does not match knapsacks");
    return detail::GapSearch(g, opts).run();
}

}  // namespace packing3d
