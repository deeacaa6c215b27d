#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace packing3d {

struct CutMode {
    enum class Kind { naive_double, epsilon_layers } kind = Kind::naive_double;
    Rational epsilon{0};

    static CutMode naive() { return {}; }
    static CutMode layers(const Rational& eps) { return {Kind::epsilon_layers, eps}; }
};

struct CutResult {
    Packing bins;
    std::vector<std::vector<std::string>> sliced_item_sets;  // entry c-1 lists the items crossing z = c
    std::size_t core_bins = 0;
    std::size_t extra_bins_used = 0;
};

// Placements of a strip grouped by integer slab; items crossing a plane go to that plane's layer.
struct SlabSplit {
    std::map<std::size_t, std::vector<Placement>> slabs;   // slab i = [i, i+1), z made local
    std::map<std::size_t, std::vector<Placement>> planes;  // plane c, z reset to 0
    std::size_t plane_count = 0;                          // integer planes strictly inside (0, H)
    Rational height = 0;
    Rational max_sliced_height = 0;
};

inline SlabSplit split_at_integer_planes(const Packing& strip, const ItemTable& items) {
    if (strip.kind != PackingKind::strip || strip.strip_axis != Axis::z)
        throw PreconditionError("expected a strip packing along z");
    SlabSplit out;
    for (const auto& p : strip.placements) {
        const Item& it = items.at(p.item_id);
        Rational h = extents(it, p.orient)[2];
        if (h > 1) throw PreconditionError("item '" + it.id + "' is taller than one bin");
        Rational top = p.z + h;
        if (top > out.height) out.height = top;
        Integer base = floor_int(p.z);
        Rational plane = Rational(base + 1);
        Placement q = p;
        q.bin = 0;
        if (plane < top) {
            q.z = 0;
            out.planes[to_size(base + 1)].push_back(std::move(q));
            if (h > out.max_sliced_height) out.max_sliced_height = h;
        } else {
            q.z = p.z - Rational(base);
            out.slabs[to_size(base)].push_back(std::move(q));
        }
    }
    Integer c = ceil_int(out.height);
    out.plane_count = c > 0 ? to_size(c - 1) : 0;
    return out;
}

inline Rational layer_height(const std::vector<Placement>& layer, const ItemTable& items) {
    Rational h = 0;
    for (const auto& p : layer) h = rmax(h, extents(items.at(p.item_id), p.orient)[2]);
    return h;
}

inline CutResult cut_strip_to_bins(const Packing& strip, const ItemTable& items, const CutMode& mode) {
    SlabSplit split = split_at_integer_planes(strip, items);
    CutResult res;
    res.bins.kind = PackingKind::bins;
    res.sliced_item_sets.resize(split.plane_count);
    for (auto& [c, layer] : split.planes)
        for (const auto& p : layer) res.sliced_item_sets.at(c - 1).push_back(p.item_id);

    std::size_t next = 0;
    auto emit = [&](std::vector<Placement>& ps) {
        for (auto& p : ps) {
            p.bin = next;
            res.bins.placements.push_back(std::move(p));
        }
        ++next;
    };

    if (mode.kind == CutMode::Kind::naive_double) {
        Integer slabs = ceil_int(split.height);
        for (std::size_t i = 0; i < to_size(slabs); ++i) {
            if (auto it = split.slabs.find(i); it != split.slabs.end()) {
                emit(it->second);
                ++res.core_bins;
            }
            if (auto it = split.planes.find(i + 1); it != split.planes.end()) {
                emit(it->second);
                ++res.extra_bins_used;
            }
        }
        return res;
    }

    if (mode.epsilon <= 0 || mode.epsilon > 1) throw PreconditionError("epsilon must lie in (0,1]");
    for (auto& [c, layer] : split.planes)
        for (const auto& p : layer)
            if (extents(items.at(p.item_id), p.orient)[2] > mode.epsilon)
                throw PreconditionError("item '" + p.item_id + "' taller than epsilon is sliced by z = " +
                                        std::to_string(c));
    for (auto& [i, slab] : split.slabs) {
        emit(slab);
        ++res.core_bins;
    }
    const std::size_t per_bin = to_size(floor_int(1 / mode.epsilon));
    std::size_t in_bin = 0;
    Rational base = 0;
    for (auto& [c, layer] : split.planes) {
        if (in_bin == per_bin) {
            ++next;
            in_bin = 0;
            base = 0;
        }
        if (in_bin == 0) ++res.extra_bins_used;
        Rational lh = layer_height(layer, items);
        for (auto& p : layer) {
            p.bin = next;
            p.z = base;
            res.bins.placements.push_back(std::move(p));
        }
        base += lh;
        ++in_bin;
    }
    return res;
}

struct AlignResult {
    std::vector<Rational> z;  // bottoms, same order as the input
    Rational gap_total = 0;
    Rational top = 0;
};

inline Rational harmonic_number(std::size_t k) {
    Rational h = 0;
    for (std::size_t i = 1; i <= k; ++i) h += Rational(1, static_cast<unsigned long>(i));
    return h;
}

// q such that h == 1/q, or 0 when h is not a unit fraction
inline std::size_t unit_fraction_q(const Rational& h) {
    if (h <= 0 || h.get_num() != 1 || !h.get_den().fits_ulong_p()) return 0;
    return h.get_den().get_ui();
}

inline AlignResult align_stack_tall(const std::vector<Rational>& heights, const Rational& epsilon) {
    AlignResult res;
    for (std::size_t i = 1; i < heights.size(); ++i)
        if (heights[i] > heights[i - 1]) throw PreconditionError("heights are not sorted nonincreasingly");
    const std::size_t qmax = to_size(floor_int(1 / epsilon));
    std::vector<bool> seen(qmax + 1, false);
    Rational z = 0;
    for (const auto& h : heights) {
        if (h > epsilon) {
            std::size_t q = unit_fraction_q(h);
            if (q == 0 || q > qmax) throw PreconditionError("tall height is not of the form 1/q");
            if (q >= 3 && !seen[q]) {
                seen[q] = true;
                Rational aligned = frac(ceil_int(z * q), Integer(static_cast<unsigned long>(q)));
                res.gap_total += aligned - z;
                z = aligned;
            }
        }
        res.z.push_back(z);
        z += h;
    }
    res.top = z;
    return res;
}

struct SliceWitness {
    std::string item_id;
    Rational plane;
};

struct TallCheck {
    bool ok = true;
    std::vector<SliceWitness> witnesses;
};

inline TallCheck check_tall_not_sliced(const Packing& packing, const ItemTable& items, const Rational& epsilon) {
    TallCheck res;
    for (const auto& p : packing.placements) {
        Rational h = extents(items.at(p.item_id), p.orient)[2];
        if (h <= epsilon) continue;
        Rational plane = floor_r(p.z) + 1;
        if (plane < p.z + h) {
            res.ok = false;
            res.witnesses.push_back({p.item_id, plane});
        }
    }
    return res;
}

}  // namespace packing3d
