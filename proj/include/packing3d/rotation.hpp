#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bins.hpp"
#include "licheng.hpp"
#include "oracle.hpp"
#include "volume_pack.hpp"

namespace packing3d {

struct RotationResult {
    Packing packing;
    std::optional<std::size_t> k_accepted;
    std::string route;  // groups, groups+shared, fallback-volume, empty
    Rational mu = 0;
    std::size_t groups = 0;
    std::vector<std::string> log;
};

struct RotationOptions {
    std::size_t oracle_cap = 6;
};

namespace detail {

// orientation putting the smallest extent along z
inline Orientation flat_orientation(const Item& it) {
    Orientation best{};
    for (const auto& o : Orientation::all()) {
        if (extents(it, o)[2] < extents(it, best)[2]) best = o;
    }
    return best;
}

inline Item oriented(const Item& it, const Orientation& o) {
    auto e = extents(it, o);
    return Item{it.id, e[0], e[1], e[2]};
}

// first fit by decreasing volume, exact one-bin checks with rotations
inline std::optional<Packing> ffd_rotated(const std::vector<Item>& L, std::size_t k, std::size_t cap) {
    std::vector<Item> order = L;
    std::stable_sort(order.begin(), order.end(), [](const Item& a, const Item& b) { return a.volume() > b.volume(); });
    std::vector<std::vector<Item>> bins;
    std::vector<Packing> wit;
    const OracleOptions opts{cap, true};
    for (const auto& it : order) {
        bool placed = false;
        for (std::size_t b = 0; b < bins.size() && !placed; ++b) {
            if (bins[b].size() >= cap) continue;
            auto trial = bins[b];
            trial.push_back(it);
            auto f = oracle_fits_one_bin(trial, {}, opts);
            if (f.fits) {
                bins[b] = std::move(trial);
                wit[b] = std::move(f.witness);
                placed = true;
            }
        }
        if (!placed) {
            if (bins.size() == k) return std::nullopt;
            bins.push_back({it});
            wit.push_back(oracle_fits_one_bin(bins.back(), {}, opts).witness);
        }
    }
    BinAssembler out;
    for (const auto& w : wit) out.append(w);
    return out.finish();
}

}  // namespace detail

inline RotationResult rotation_5approx(const std::vector<Item>& items, std::size_t K, const RotationOptions& opt = {}) {
    RotationResult res;
    res.packing.kind = PackingKind::bins;
    for (const auto& it : items)
        if (it.w > 1 || it.d > 1 || it.h > 1) throw PreconditionError("item '" + it.id + "' exceeds a unit bin");
    if (items.empty()) {
        res.route = "empty";
        return res;
    }
    if (K == 0) throw PreconditionError("K must be positive");
    const Rational mu = Rational(1) / (pow(Rational(12), 4) * Rational(static_cast<long>(K)));
    res.mu = mu;
    const Rational cap = Rational(1, 4) - 2 * mu;

    std::vector<Item> L;
    std::vector<std::pair<Item, Orientation>> S;
    for (const auto& it : items) {
        if (it.w > mu && it.d > mu && it.h > mu) L.push_back(it);
        else {
            Orientation o = detail::flat_orientation(it);
            S.emplace_back(detail::oriented(it, o), o);
        }
    }
    std::map<std::string, Orientation> orient;
    for (const auto& [it, o] : S) orient[it.id] = o;

    for (std::size_t k = 1; k <= K; ++k) {
        const std::string tag = "k=" + std::to_string(k) + ": ";
        // greedy groups of small items
        std::vector<std::vector<Item>> groups;
        std::vector<Item> T;
        Rational v = 0;
        for (const auto& [it, o] : S) {
            if (!T.empty()) {
                T.push_back(it);
                continue;
            }
            if (groups.empty() || v + it.volume() > cap) {
                if (groups.size() == 4 * k) {
                    T.push_back(it);
                    continue;
                }
                groups.emplace_back();
                v = 0;
            }
            groups.back().push_back(it);
            v += it.volume();
        }
        BinAssembler out;
        bool ok = true;
        for (const auto& g : groups) {
            StripResult s = licheng_strip(g, LiChengMode::general);
            if (s.height > 1) {
                res.log.push_back(tag + "group exceeds one bin");
                ok = false;
                break;
            }
            std::size_t b = out.open();
            for (auto p : s.packing.placements) {
                p.bin = b;
                p.orient = orient.at(p.item_id);
                out.place(std::move(p));
            }
        }
        if (!ok) continue;
        std::string route = "groups";
        if (T.empty()) {
            std::optional<Packing> lp;
            if (L.size() <= opt.oracle_cap) {
                auto r = oracle_opt_bins(L, {}, k, OracleOptions{opt.oracle_cap, true});
                if (r.opt) lp = r.witness;
            } else {
                lp = detail::ffd_rotated(L, k, opt.oracle_cap);
            }
            if (!lp) {
                res.log.push_back(tag + "large items do not fit in k bins");
                continue;
            }
            out.append(*lp);
        } else {
            Rational rest = total_volume(L) + total_volume(T);
            if (rest > 12 * mu * Rational(static_cast<long>(k))) {
                res.log.push_back(tag + "v(L u T) exceeds 12 mu k");
                continue;
            }
            std::vector<Item> Lo;
            std::map<std::string, Orientation> lorient;
            for (const auto& it : L) {
                Orientation o = detail::flat_orientation(it);
                if (extents(it, o)[2] > Rational(1, 12)) {
                    ok = false;
                    break;
                }
                lorient[it.id] = o;
                Lo.push_back(detail::oriented(it, o));
            }
            if (!ok) {
                res.log.push_back(tag + "a large item has no side of length at most 1/12");
                continue;
            }
            StripResult sl = licheng_strip(Lo, LiChengMode::general);
            StripResult st = licheng_strip(T, LiChengMode::general);
            if (sl.height >= Rational(3, 4) || st.height >= Rational(1, 4)) {
                res.log.push_back(tag + "shared bin strips too tall");
                continue;
            }
            std::size_t b = out.open();
            for (auto p : sl.packing.placements) {
                p.bin = b;
                p.orient = lorient.at(p.item_id);
                out.place(std::move(p));
            }
            for (auto p : st.packing.placements) {
                p.bin = b;
                p.z += sl.height;
                p.orient = orient.at(p.item_id);
                out.place(std::move(p));
            }
            route = "groups+shared";
        }
        Packing p = out.finish();
        if (!verify_packing(p, items, VerifyOptions{true}).feasible) {
            res.log.push_back(tag + "assembled packing failed verification");
            continue;
        }
        res.packing = std::move(p);
        res.k_accepted = k;
        res.route = route;
        res.groups = groups.size();
        return res;
    }
    res.packing = volume_bin_pack(items);
    res.route = "fallback-volume";
    return res;
}

}  // namespace packing3d
