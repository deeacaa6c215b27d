#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "geometry.hpp"

namespace packing3d {

struct OracleOptions {
    std::size_t cap = 6;
    bool allow_rotations = false;
};

struct OracleFit {
    bool fits = false;
    Packing witness;  // single bin, valid when fits
};

namespace detail {

// Exact one-bin decision. Every pair of items is separated along one axis in one
// direction; per axis the separations form a DAG whose longest paths give pushed
// coordinates (sums of other items' extents). A choice is kept only while every
// longest chain fits the bin.
//
// A pair is separated along the first axis (x, y, z order) on which it is disjoint
// in some packing. Pairs assigned a later axis than a then overlap along a, so any
// set of them pairwise shares a cross-section perpendicular to a and their faces
// must fit its area. Mirroring fixes the direction of the first pair on each axis.
template <class T>
class SeparationSearch {
public:
    SeparationSearch(std::vector<std::vector<std::array<T, 3>>> orients, std::array<T, 3> bin)
        : orients_(std::move(orients)), bin_(bin), n_(orients_.size()) {
        chosen_.assign(n_, 0);
        sep_.assign(n_ * n_, -1);
        for (int a = 0; a < 3; ++a) before_[a].assign(n_ * n_, false);
    }

    // returns per-item orientation index and origin
    std::optional<std::vector<std::pair<std::size_t, std::array<T, 3>>>> solve() {
        if (n_ == 0) return std::vector<std::pair<std::size_t, std::array<T, 3>>>{};
        if (!place(0)) return std::nullopt;
        check_all();
        std::vector<std::pair<std::size_t, std::array<T, 3>>> out(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            std::array<T, 3> o{};
            for (int a = 0; a < 3; ++a) o[a] = start_[a][i];
            out[i] = {chosen_[i], o};
        }
        return out;
    }

private:
    const std::array<T, 3>& ext(std::size_t i) const { return orients_[i][chosen_[i]]; }

    bool place(std::size_t k) {
        if (k == n_) return true;
        for (std::size_t o = 0; o < orients_[k].size(); ++o) {
            bool ok = true;
            for (int a = 0; a < 3; ++a) ok = ok && orients_[k][o][a] <= bin_[a];
            if (!ok) continue;
            chosen_[k] = o;
            if (pair_step(k, 0)) return true;
        }
        return false;
    }

    // separate item k from item i (< k), then continue with i+1
    bool pair_step(std::size_t k, std::size_t i) {
        if (i == k) return sections_fit(k) && place(k + 1);
        for (int a = 0; a < 3; ++a) {
            if (ext(i)[a] + ext(k)[a] > bin_[a]) continue;
            bool fresh = used_[a] == 0;
            for (int dir = 0; dir < (fresh ? 1 : 2); ++dir) {
                std::size_t u = dir == 0 ? i : k, v = dir == 0 ? k : i;
                before_[a][u * n_ + v] = true;
                sep_[i * n_ + k] = sep_[k * n_ + i] = a;
                ++used_[a];
                if (chain_fits(a, k + 1) && pair_step(k, i + 1)) return true;
                --used_[a];
                sep_[i * n_ + k] = sep_[k * n_ + i] = -1;
                before_[a][u * n_ + v] = false;
            }
        }
        return false;
    }

    // sets containing k whose pairs all overlap along axis a
    bool sections_fit(std::size_t k) {
        for (int a = 0; a < 2; ++a) {
            int b = (a + 1) % 3, c = (a + 2) % 3;
            T cap = bin_[b] * bin_[c];
            std::vector<std::size_t> cand;
            for (std::size_t j = 0; j < k; ++j)
                if (sep_[j * n_ + k] > a) cand.push_back(j);
            std::vector<std::size_t> clique{k};
            T area = ext(k)[b] * ext(k)[c];
            if (!clique_fits(a, cand, 0, clique, area, cap)) return false;
        }
        return true;
    }

    bool clique_fits(int a, const std::vector<std::size_t>& cand, std::size_t from, std::vector<std::size_t>& clique,
                     const T& area, const T& cap) {
        if (area > cap) return false;
        int b = (a + 1) % 3, c = (a + 2) % 3;
        for (std::size_t t = from; t < cand.size(); ++t) {
            std::size_t j = cand[t];
            bool adj = true;
            for (std::size_t m : clique)
                if (m != clique[0] && sep_[m * n_ + j] <= a) adj = false;
            if (!adj) continue;
            clique.push_back(j);
            bool ok = clique_fits(a, cand, t + 1, clique, area + ext(j)[b] * ext(j)[c], cap);
            clique.pop_back();
            if (!ok) return false;
        }
        return true;
    }

    // longest-path starts along axis a over items [0, m); false on a cycle or overflow
    bool chain_fits(int a, std::size_t m) {
        auto& s = start_[a];
        s.assign(n_, T(0));
        std::vector<int> state(m, 0);
        std::vector<std::size_t> order;
        bool cyclic = false;
        auto visit = [&](auto&& self, std::size_t u) -> void {
            state[u] = 1;
            for (std::size_t v = 0; v < m && !cyclic; ++v) {
                if (!before_[a][u * n_ + v]) continue;
                if (state[v] == 1) cyclic = true;
                else if (state[v] == 0) self(self, v);
            }
            state[u] = 2;
            order.push_back(u);
        };
        for (std::size_t u = 0; u < m && !cyclic; ++u)
            if (state[u] == 0) visit(visit, u);
        if (cyclic) return false;
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            std::size_t u = *it;
            T end = s[u] + ext(u)[a];
            if (end > bin_[a]) return false;
            for (std::size_t v = 0; v < m; ++v)
                if (before_[a][u * n_ + v] && s[v] < end) s[v] = end;
        }
        return true;
    }

    bool check_all() {
        for (int a = 0; a < 3; ++a)
            if (!chain_fits(a, n_)) return false;
        return true;
    }

    std::vector<std::vector<std::array<T, 3>>> orients_;
    std::array<T, 3> bin_;
    std::size_t n_;
    std::vector<std::size_t> chosen_;
    std::vector<int> sep_;
    std::array<int, 3> used_{0, 0, 0};
    std::array<std::vector<bool>, 3> before_;
    std::array<std::vector<T>, 3> start_;
};

inline std::vector<Orientation> distinct_orientations(const Item& it, bool allow_rotations) {
    if (!allow_rotations) return {Orientation{}};
    std::vector<Orientation> out;
    std::vector<std::array<Rational, 3>> seen;
    for (const auto& o : Orientation::all()) {
        auto e = extents(it, o);
        if (std::find(seen.begin(), seen.end(), e) != seen.end()) continue;
        seen.push_back(e);
        out.push_back(o);
    }
    return out;
}

template <class T, class Conv>
std::optional<std::vector<std::pair<std::size_t, std::array<Rational, 3>>>> run_search(
    const std::vector<std::vector<std::array<Rational, 3>>>& ext, const BinSpec& bin, Conv conv,
    const Rational& scale) {
    std::vector<std::vector<std::array<T, 3>>> e(ext.size());
    for (std::size_t i = 0; i < ext.size(); ++i)
        for (const auto& x : ext[i]) e[i].push_back({conv(x[0]), conv(x[1]), conv(x[2])});
    SeparationSearch<T> s(std::move(e), {conv(bin.W), conv(bin.D), conv(bin.H)});
    auto r = s.solve();
    if (!r) return std::nullopt;
    std::vector<std::pair<std::size_t, std::array<Rational, 3>>> out;
    for (const auto& [o, xyz] : *r) {
        std::array<Rational, 3> q;
        for (int a = 0; a < 3; ++a) q[a] = Rational(xyz[a]) / scale;
        out.push_back({o, q});
    }
    return out;
}

}  // namespace detail

inline OracleFit oracle_fits_one_bin(const std::vector<Item>& items, const BinSpec& bin = {},
                                     OracleOptions opts = {}) {
    if (items.size() > opts.cap) throw CapExceededError("oracle cap exceeded");
    OracleFit res;
    res.witness.bin = bin;
    Rational vol = total_volume(items);
    if (vol > bin.W * bin.D * bin.H) return res;

    // large items first prune earlier
    std::vector<std::size_t> order(items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return items[a].volume() > items[b].volume(); });
    std::vector<std::vector<Orientation>> ors;
    std::vector<std::vector<std::array<Rational, 3>>> ext;
    Integer lcm = 1;
    auto add_den = [&](const Rational& r) { mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), r.get_den_mpz_t()); };
    for (const auto& b : bin.dims()) add_den(b);
    for (std::size_t idx : order) {
        const Item& it = items[idx];
        ors.push_back(detail::distinct_orientations(it, opts.allow_rotations));
        std::vector<std::array<Rational, 3>> e;
        for (const auto& o : ors.back()) e.push_back(extents(it, o));
        ext.push_back(std::move(e));
        for (const auto& d : it.dims()) add_den(d);
    }
    // integer coordinates when every scaled extent stays far from overflow
    bool small = lcm.fits_slong_p();
    Rational maxdim = rmax(rmax(bin.W, bin.D), bin.H);
    for (const auto& it : items)
        for (const auto& d : it.dims()) maxdim = rmax(maxdim, d);
    Rational scaled = maxdim * Rational(lcm);
    // cross-section areas are products of two scaled extents
    small = small && scaled * scaled * Rational(static_cast<long>(items.size() + 1)) < Rational(1L << 60);

    std::optional<std::vector<std::pair<std::size_t, std::array<Rational, 3>>>> sol;
    if (small) {
        const Rational L(lcm);
        sol = detail::run_search<std::int64_t>(
            ext, bin, [&](const Rational& r) { return Rational(r * L).get_num().get_si(); }, L);
    } else {
        sol = detail::run_search<Rational>(ext, bin, [](const Rational& r) { return r; }, Rational(1));
    }
    if (!sol) return res;
    res.fits = true;
    res.witness.placements.resize(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& [o, xyz] = (*sol)[i];
        res.witness.placements[order[i]] = {items[order[i]].id, 0, xyz[0], xyz[1], xyz[2], ors[i][o]};
    }
    return res;
}

struct OracleOpt {
    std::optional<std::size_t> opt;  // nullopt when more than max_bins are needed
    Packing witness;
};

inline OracleOpt oracle_opt_bins(const std::vector<Item>& items, const BinSpec& bin = {},
                                 std::size_t max_bins = std::numeric_limits<std::size_t>::max(),
                                 OracleOptions opts = {}) {
    const std::size_t n = items.size();
    if (n > opts.cap) throw CapExceededError("oracle cap exceeded");
    OracleOpt res;
    res.witness.bin = bin;
    if (n == 0) {
        res.opt = 0;
        return res;
    }
    const std::uint32_t full = (1u << n) - 1;
    std::vector<int> fits(full + 1, -1);
    std::vector<Packing> wit(full + 1);
    auto fits_mask = [&](std::uint32_t m) -> bool {
        if (fits[m] >= 0) return fits[m] == 1;
        std::vector<Item> sub;
        for (std::size_t i = 0; i < n; ++i)
            if (m >> i & 1u) sub.push_back(items[i]);
        auto f = oracle_fits_one_bin(sub, bin, opts);
        fits[m] = f.fits ? 1 : 0;
        if (f.fits) wit[m] = std::move(f.witness);
        return f.fits;
    };
    const std::size_t INF = std::numeric_limits<std::size_t>::max() / 2;
    std::vector<std::size_t> best(full + 1, INF);
    std::vector<std::uint32_t> pick(full + 1, 0);
    best[0] = 0;
    for (std::uint32_t m = 1; m <= full; ++m) {
        std::uint32_t low = m & (~m + 1);
        std::uint32_t rest = m ^ low;
        // submasks of rest, each joined with the lowest item
        for (std::uint32_t s = rest;; s = (s - 1) & rest) {
            std::uint32_t t = s | low;
            if (best[m ^ t] + 1 < best[m] && fits_mask(t)) {
                best[m] = best[m ^ t] + 1;
                pick[m] = t;
            }
            if (s == 0) break;
        }
    }
    if (best[full] > max_bins) return res;
    res.opt = best[full];
    std::size_t binno = 0;
    for (std::uint32_t m = full; m; m ^= pick[m], ++binno)
        for (auto p : wit[pick[m]].placements) {
            p.bin = binno;
            res.witness.placements.push_back(std::move(p));
        }
    return res;
}

}  // namespace packing3d
