#pragma once

#include <map>
#include <vector>

#include "geometry.hpp"

namespace packing3d {

// Collects placements from several stages into one bins packing.
class BinAssembler {
public:
    std::size_t open() { return count_++; }

    // appends every bin of p; returns the index given to p's bin 0
    std::size_t append(const Packing& p) {
        std::size_t off = count_;
        std::size_t used = 0;
        for (const auto& q : p.placements) {
            Placement r = q;
            r.bin += off;
            if (q.bin + 1 > used) used = q.bin + 1;
            placements_.push_back(std::move(r));
        }
        count_ += used;
        return off;
    }

    void place(Placement p) { placements_.push_back(std::move(p)); }
    std::size_t size() const { return count_; }

    // bins without items are dropped and the rest renumbered in order
    Packing finish(const BinSpec& bin = {}) const {
        Packing out;
        out.bin = bin;
        out.kind = PackingKind::bins;
        std::map<std::size_t, std::size_t> dense;
        for (const auto& p : placements_) dense.emplace(p.bin, 0);
        std::size_t next = 0;
        for (auto& [k, v] : dense) v = next++;
        for (auto p : placements_) {
            p.bin = dense[p.bin];
            out.placements.push_back(std::move(p));
        }
        return out;
    }

private:
    std::size_t count_ = 0;
    std::vector<Placement> placements_;
};

// Highest occupied coordinate along axis a in each bin.
inline std::vector<Rational> bin_tops(const Packing& p, const ItemTable& items, int a = 2) {
    std::vector<Rational> top(p.bin_count(), Rational(0));
    for (const auto& q : p.placements) {
        Rational t = q.origin()[a] + extents(items.at(q.item_id), q.orient)[a];
        if (t > top[q.bin]) top[q.bin] = t;
    }
    return top;
}

}  // namespace packing3d
