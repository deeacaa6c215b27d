#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "licheng.hpp"

namespace packing3d {

enum class MvbbMode { aptas, absolute3 };

inline MvbbMode parse_mvbb_mode(std::string_view s) {
    if (s == "aptas") return MvbbMode::aptas;
    if (s == "absolute3") return MvbbMode::absolute3;
    throw ParseError("unknown mvbb mode '" + std::string(s) + "'");
}

inline const char* mvbb_mode_name(MvbbMode m) { return m == MvbbMode::aptas ? "aptas" : "absolute3"; }

struct MvbbOptions {
    Rational epsilon{1, 4};
    MvbbMode mode = MvbbMode::aptas;
    std::optional<Rational> ratio;  // guess grid step, 1 + epsilon when unset
    std::optional<Rational> delta;  // case threshold, epsilon^2 when unset
    std::size_t max_guesses_per_axis = 0;  // 0 keeps the full range
    std::size_t absolute_budget = 64;      // cheapest box guesses tried in absolute3 mode
    const StripBackend* backend = nullptr;
};

struct MvbbEval {
    Axis axis = Axis::z;
    Rational W = 0, D = 0, H = 0;  // box of the evaluation; the scale guess in absolute3
    Rational height = 0;
    Rational volume = 0;
};

struct MvbbResult {
    BinSpec box;
    Packing packing;
    Rational volume = 0;
    Rational lower_bound = 0;
    std::string mode;
    std::string backend;
    Axis axis = Axis::z;
    std::string case_label;  // aptas: case1 when every scaled maximum exceeds delta, else case2
    Rational delta = 0;
    Rational mu = 0;
    std::map<std::string, std::size_t> class_counts;
    bool certified = false;
    std::string bound;
    std::vector<MvbbEval> evaluations;
};

namespace detail {

inline std::vector<Rational> geometric_guesses(const Rational& lo, const Rational& hi, const Rational& ratio, std::size_t cap) {
    std::vector<Rational> out{lo};
    while (out.back() < hi && (cap == 0 || out.size() < cap)) out.push_back(out.back() * ratio);
    return out;
}

inline std::array<Rational, 3> max_dims(const std::vector<Item>& items) {
    std::array<Rational, 3> m{0, 0, 0};
    for (const auto& it : items) {
        auto d = it.dims();
        for (int a = 0; a < 3; ++a) m[a] = rmax(m[a], d[a]);
    }
    return m;
}

inline std::array<Rational, 3> sum_dims(const std::vector<Item>& items) {
    std::array<Rational, 3> s{0, 0, 0};
    for (const auto& it : items) {
        auto d = it.dims();
        for (int a = 0; a < 3; ++a) s[a] += d[a];
    }
    return s;
}

inline std::vector<Item> scale_items(const std::vector<Item>& items, const std::array<Rational, 3>& s) {
    std::vector<Item> out;
    out.reserve(items.size());
    for (const auto& it : items) out.push_back(Item{it.id, it.w / s[0], it.d / s[1], it.h / s[2]});
    return out;
}

// strip along axis a of items in unit-scaled coordinates; placements come back in the item frame
struct AxisStrip {
    std::vector<Placement> placements;
    Rational height = 0;
};

inline AxisStrip strip_along(const std::vector<Item>& items, Axis a, const StripBackend& backend) {
    AxisStrip out;
    if (items.empty()) return out;
    Frame f = Frame::with_height(a);
    StripResult s = backend.pack(f.to_frame(items));
    out.height = s.height;
    for (const auto& p : s.packing.placements) out.placements.push_back(f.from_frame(p));
    return out;
}

inline AxisStrip licheng_along(const std::vector<Item>& items, Axis a) {
    static const LiChengBackend lc;
    return strip_along(items, a, lc);
}

inline Rational band_volume(const std::vector<Item>& items, const Rational& lo, const Rational& hi) {
    Rational v = 0;
    for (const auto& it : items) {
        bool in = false;
        for (const auto& x : it.dims()) in = in || (x > lo && x <= hi);
        if (in) v += it.volume();
    }
    return v;
}

}  // namespace detail

// mu = mu_{j-1} for the first band (mu_j, mu_{j-1}] of volume at most epsilon, mu_0 = epsilon, mu_j = mu_{j-1}^6
inline Rational mvbb_mu(const std::vector<Item>& items, const Rational& epsilon) {
    if (total_volume(items) > 1) throw PreconditionError("scaled volume exceeds one");
    Rational smallest = epsilon;
    for (const auto& it : items)
        for (const auto& x : it.dims()) smallest = rmin(smallest, x);
    Rational prev = epsilon;
    const std::size_t bands = to_size(ceil_int(3 / epsilon));
    for (std::size_t j = 1; j <= bands; ++j) {
        if (prev < smallest) return prev;  // later bands are empty
        Rational cur = pow(prev, 6);
        if (detail::band_volume(items, cur, prev) <= epsilon) return prev;
        prev = cur;
    }
    throw InfeasibleError("no light band found");
}

namespace detail {

inline std::optional<MvbbResult> absolute3_at(const std::vector<Item>& items, const std::array<Rational, 3>& scale,
                                              const Rational& eps, const StripBackend& backend) {
    std::vector<Item> s = scale_items(items, scale);
    if (total_volume(s) > 1) return std::nullopt;
    const Rational mu = mvbb_mu(s, eps);
    const Rational mu6 = pow(mu, 6);
    std::vector<Item> Lh, Iw, Id, Rh, Rw, Rd;
    std::size_t nL = 0, nh = 0;
    for (const auto& it : s) {
        bool large = it.w > mu && it.d > mu && it.h > mu;
        if (large || it.h <= mu6) {
            (large ? nL : nh)++;
            Lh.push_back(it);
        } else if (it.w <= mu6) Iw.push_back(it);
        else if (it.d <= mu6) Id.push_back(it);
        else if (it.h <= mu) Rh.push_back(it);
        else if (it.w <= mu) Rw.push_back(it);
        else Rd.push_back(it);
    }
    struct Part {
        std::vector<Item> main, rem;
        Axis axis;
    };
    std::array<Part, 3> parts{Part{Lh, Rh, Axis::z}, Part{Iw, Rw, Axis::x}, Part{Id, Rd, Axis::y}};
    MvbbResult r;
    r.mu = mu;
    r.class_counts = {{"L", nL}, {"I_h", nh}, {"I_w", Iw.size()}, {"I_d", Id.size()},
                      {"rem_h", Rh.size()}, {"rem_w", Rw.size()}, {"rem_d", Rd.size()}};
    Rational x0 = 0, ymax = 0, zmax = 0;
    std::vector<Placement> all;
    for (const auto& part : parts) {
        if (part.main.empty() && part.rem.empty()) continue;
        const int a = static_cast<int>(part.axis);
        AxisStrip main = strip_along(part.main, part.axis, backend);
        AxisStrip rem = licheng_along(part.rem, part.axis);
        std::array<Rational, 3> ext{1, 1, 1};
        ext[a] = main.height + rem.height;
        for (auto p : main.placements) {
            p.x += x0;
            all.push_back(std::move(p));
        }
        for (auto p : rem.placements) {
            std::array<Rational, 3> o{p.x, p.y, p.z};
            o[a] += main.height;
            p.x = o[0] + x0;
            p.y = o[1];
            p.z = o[2];
            all.push_back(std::move(p));
        }
        x0 += ext[0];
        ymax = rmax(ymax, ext[1]);
        zmax = rmax(zmax, ext[2]);
    }
    for (auto& p : all) {
        p.x *= scale[0];
        p.y *= scale[1];
        p.z *= scale[2];
        p.bin = 0;
    }
    r.box = BinSpec{x0 * scale[0], ymax * scale[1], zmax * scale[2]};
    r.packing.kind = PackingKind::bins;
    r.packing.bin = r.box;
    r.packing.placements = std::move(all);
    r.volume = r.box.W * r.box.D * r.box.H;
    return r;
}

}  // namespace detail

inline MvbbResult solve_mvbb(const std::vector<Item>& items, const MvbbOptions& opt = {}) {
    if (items.empty()) throw PreconditionError("mvbb needs at least one item");
    if (opt.epsilon <= 0 || opt.epsilon >= 1) throw PreconditionError("epsilon must lie in (0, 1)");
    const StripBackend& backend = opt.backend ? *opt.backend : default_backend();
    const Rational ratio = opt.ratio ? *opt.ratio : 1 + opt.epsilon;
    if (ratio <= 1) throw PreconditionError("guess ratio must exceed one");
    const auto mx = detail::max_dims(items);
    const auto sm = detail::sum_dims(items);
    const Rational n(static_cast<long>(items.size()));
    const Rational vol = total_volume(items);

    std::optional<MvbbResult> best;
    std::vector<MvbbEval> evals;
    auto consider = [&](MvbbResult r, const MvbbEval& e) {
        evals.push_back(e);
        if (!best || r.volume < best->volume) best = std::move(r);
    };

    std::array<std::vector<Rational>, 3> grid;
    for (int a = 0; a < 3; ++a)
        grid[a] = detail::geometric_guesses(mx[a], rmin(n * mx[a], sm[a]), ratio, opt.max_guesses_per_axis);

    if (opt.mode == MvbbMode::aptas) {
        for (Axis axis : {Axis::z, Axis::x, Axis::y}) {
            const int h = static_cast<int>(axis);
            const int u = (h + 1) % 3, v = (h + 2) % 3;
            for (const auto& gu : grid[u])
                for (const auto& gv : grid[v]) {
                    std::array<Rational, 3> scale{1, 1, 1};
                    scale[u] = gu;
                    scale[v] = gv;
                    auto st = detail::strip_along(detail::scale_items(items, scale), axis, backend);
                    MvbbResult r;
                    std::array<Rational, 3> box{0, 0, 0};
                    box[u] = gu;
                    box[v] = gv;
                    box[h] = st.height;
                    r.axis = axis;
                    r.box = BinSpec{box[0], box[1], box[2]};
                    r.volume = box[0] * box[1] * box[2];
                    for (auto p : st.placements) {
                        p.x *= scale[0];
                        p.y *= scale[1];
                        p.z *= scale[2];
                        p.bin = 0;
                        r.packing.placements.push_back(std::move(p));
                    }
                    MvbbEval e{axis, box[0], box[1], box[2], st.height, r.volume};
                    consider(std::move(r), e);
                }
        }
    } else {
        std::vector<std::array<Rational, 3>> guesses;
        for (const auto& W : grid[0])
            for (const auto& D : grid[1])
                for (const auto& H : grid[2])
                    if (W * D * H >= vol) guesses.push_back({W, D, H});
        std::stable_sort(guesses.begin(), guesses.end(),
                         [](const auto& a, const auto& b) { return a[0] * a[1] * a[2] < b[0] * b[1] * b[2]; });
        if (guesses.empty()) guesses.push_back({sm[0], mx[1], mx[2]});  // the guess range was truncated
        if (opt.absolute_budget && guesses.size() > opt.absolute_budget) guesses.resize(opt.absolute_budget);
        for (const auto& g : guesses) {
            auto r = detail::absolute3_at(items, g, opt.epsilon, backend);
            if (!r) continue;
            consider(std::move(*r), MvbbEval{Axis::z, g[0], g[1], g[2], r->box.H, r->volume});
        }
        if (!best) throw InfeasibleError("no box guess admitted a packing");
    }

    MvbbResult res = std::move(*best);
    res.evaluations = std::move(evals);
    res.mode = mvbb_mode_name(opt.mode);
    res.backend = backend.name();
    res.packing.kind = PackingKind::bins;
    res.packing.bin = res.box;
    res.lower_bound = rmax(vol, mx[0] * mx[1] * mx[2]);
    res.delta = opt.delta ? *opt.delta : opt.epsilon * opt.epsilon;
    const auto bd = res.box.dims();
    bool small = false;
    for (int a = 0; a < 3; ++a) small = small || mx[a] / bd[a] <= res.delta;
    res.case_label = small ? "case2" : "case1";
    res.certified = backend.name() == "jp";
    res.bound = opt.mode == MvbbMode::aptas ? "(1+eps)OPT+O(1)h_max*w_max*d_max" : "3+O(eps)";
    if (!res.certified) res.bound += " (measured, not certified)";
    if (!verify_packing(res.packing, items, VerifyOptions{true}).feasible)
        throw InfeasibleError("mvbb packing failed verification");
    return res;
}

}  // namespace packing3d
