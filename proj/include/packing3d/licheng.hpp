#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "nfdh.hpp"
#include "steinberg.hpp"

namespace packing3d {

enum class LiChengMode { general, halfthin };

struct StripResult {
    Packing packing;
    Rational height = 0;
    std::size_t steinberg_fallbacks = 0;  // groups that had to be split into NFDH layers
};

inline Rational max_height(const std::vector<Item>& items) {
    Rational m = 0;
    for (const auto& it : items)
        if (it.h > m) m = it.h;
    return m;
}

// guaranteed height bound of licheng_strip on these items
inline Rational licheng_bound(const std::vector<Item>& items, LiChengMode mode) {
    Rational c = mode == LiChengMode::general ? 4 : 3;
    return c * total_volume(items) + 8 * max_height(items);
}

namespace detail {

class LayerStacker {
public:
    explicit LayerStacker(const std::vector<Item>& items) : items_(items) {
        packing_.kind = PackingKind::strip;
        packing_.strip_axis = Axis::z;
    }

    void add_layer(const std::vector<std::pair<std::size_t, std::array<Rational, 2>>>& members) {
        if (members.empty()) return;
        Rational h = 0;
        for (const auto& [i, xy] : members) {
            packing_.placements.push_back(Placement{items_[i].id, 0, xy[0], xy[1], top_, {}});
            if (items_[i].h > h) h = items_[i].h;
        }
        top_ += h;
    }

    const std::vector<Item>& items() const { return items_; }
    StripResult finish() {
        StripResult r;
        r.packing = std::move(packing_);
        r.height = top_;
        r.steinberg_fallbacks = fallbacks;
        return r;
    }

    std::size_t fallbacks = 0;

private:
    const std::vector<Item>& items_;
    Packing packing_;
    Rational top_ = 0;
};

inline void sort_indices_by_height(std::vector<std::size_t>& idx, const std::vector<Item>& items) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (items[a].h != items[b].h) return items[a].h > items[b].h;
        return a < b;
    });
}

// pairs side by side along x (axis 0) or y (axis 1); both members have that extent <= 1/2
inline void pair_layers(std::vector<std::size_t> idx, int axis, LayerStacker& st) {
    sort_indices_by_height(idx, st.items());
    const Rational half(1, 2);
    for (std::size_t i = 0; i < idx.size(); i += 2) {
        std::vector<std::pair<std::size_t, std::array<Rational, 2>>> layer;
        layer.push_back({idx[i], {Rational(0), Rational(0)}});
        if (i + 1 < idx.size()) {
            std::array<Rational, 2> xy{Rational(0), Rational(0)};
            xy[axis] = half;
            layer.push_back({idx[i + 1], xy});
        }
        st.add_layer(layer);
    }
}

inline void group_layer(const std::vector<std::size_t>& group, LayerStacker& st) {
    const auto& items = st.items();
    std::vector<Rect2D> rects;
    for (std::size_t i : group) rects.push_back({i, items[i].w, items[i].d});
    if (auto pl = steinberg_2d(rects, Rational(1), Rational(1))) {
        std::vector<std::pair<std::size_t, std::array<Rational, 2>>> layer;
        for (const auto& p : *pl) layer.push_back({p.id, {p.x, p.y}});
        st.add_layer(layer);
        return;
    }
    ++st.fallbacks;
    std::vector<Rect2D> cur;
    auto flush = [&] {
        auto pl = nfdh_in_box(cur, Rational(1), Rational(1));
        std::vector<std::pair<std::size_t, std::array<Rational, 2>>> layer;
        for (const auto& p : *pl) layer.push_back({p.id, {p.x, p.y}});
        st.add_layer(layer);
        cur.clear();
    };
    for (const auto& r : rects) {
        cur.push_back(r);
        if (cur.size() > 1 && !nfdh_in_box(cur, Rational(1), Rational(1))) {
            cur.pop_back();
            flush();
            cur.push_back(r);
        }
    }
    if (!cur.empty()) flush();
}

// maximal consecutive groups (by height order) of base area <= 1/2
inline void steinberg_layers(std::vector<std::size_t> idx, LayerStacker& st) {
    const auto& items = st.items();
    sort_indices_by_height(idx, items);
    const Rational half(1, 2);
    std::vector<std::size_t> group;
    Rational area = 0;
    for (std::size_t i : idx) {
        Rational a = items[i].w * items[i].d;
        if (!group.empty() && area + a > half) {
            group_layer(group, st);
            group.clear();
            area = 0;
        }
        group.push_back(i);
        area += a;
    }
    if (!group.empty()) group_layer(group, st);
}

inline void halfthin_layers(const std::vector<std::size_t>& idx, LayerStacker& st) {
    const auto& items = st.items();
    const Rational half(1, 2), sixth(1, 6);
    std::vector<std::size_t> tw_large, tw_small, td_large, td_small;
    for (std::size_t i : idx) {
        const Item& it = items[i];
        bool large = it.w * it.d > sixth;
        if (it.w <= half) (large ? tw_large : tw_small).push_back(i);
        else if (it.d <= half) (large ? td_large : td_small).push_back(i);
        else throw PreconditionError("halfthin mode needs w <= 1/2 or d <= 1/2 for item '" + it.id + "'");
    }
    pair_layers(tw_large, 0, st);
    steinberg_layers(tw_small, st);
    pair_layers(td_large, 1, st);
    steinberg_layers(td_small, st);
}

}  // namespace detail

// Layer-based strip packing over a 1x1 base.
inline StripResult licheng_strip(const std::vector<Item>& items, LiChengMode mode) {
    const Rational half(1, 2);
    for (const auto& it : items)
        if (it.w > 1 || it.d > 1) throw PreconditionError("item '" + it.id + "' exceeds the strip base");
    detail::LayerStacker st(items);
    std::vector<std::size_t> big, rest;
    for (std::size_t i = 0; i < items.size(); ++i) {
        bool both = items[i].w > half && items[i].d > half;
        if (both && mode == LiChengMode::halfthin)
            throw PreconditionError("halfthin mode needs w <= 1/2 or d <= 1/2 for item '" + items[i].id + "'");
        (both ? big : rest).push_back(i);
    }
    detail::sort_indices_by_height(big, items);
    for (std::size_t i : big) st.add_layer({{i, {Rational(0), Rational(0)}}});
    detail::halfthin_layers(rest, st);
    return st.finish();
}

struct StripBackendGuarantee {
    Rational mult{1};
    Rational add_const{0};
    Rational add_hmax_coeff{0};
    bool volume_based = false;
};

class StripBackend {
public:
    virtual ~StripBackend() = default;
    virtual StripResult pack(const std::vector<Item>& items) const = 0;
    virtual StripBackendGuarantee guarantee() const = 0;
    virtual std::string name() const = 0;
};

class LiChengBackend final : public StripBackend {
public:
    StripResult pack(const std::vector<Item>& items) const override {
        return licheng_strip(items, LiChengMode::general);
    }
    StripBackendGuarantee guarantee() const override { return {Rational(4), Rational(0), Rational(8), true}; }
    std::string name() const override { return "licheng"; }
};

inline const StripBackend& default_backend() {
    static const LiChengBackend backend;
    return backend;
}

}  // namespace packing3d
