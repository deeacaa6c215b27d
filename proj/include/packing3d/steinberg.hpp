#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "nfdh.hpp"

namespace packing3d {

struct SteinbergStats {
    Rational a, b, area;
};

inline SteinbergStats steinberg_stats(const std::vector<Rect2D>& rects) {
    SteinbergStats s{0, 0, 0};
    for (const auto& r : rects) {
        if (r.w > s.a) s.a = r.w;
        if (r.h > s.b) s.b = r.h;
        s.area += r.w * r.h;
    }
    return s;
}

// 2 S <= W H - (2a - W)+ (2b - H)+ with a <= W, b <= H
inline bool steinberg_condition(const std::vector<Rect2D>& rects, const Rational& W, const Rational& H) {
    if (rects.empty()) return true;
    auto s = steinberg_stats(rects);
    if (s.a > W || s.b > H) return false;
    Rational pen = positive_part(2 * s.a - W) * positive_part(2 * s.b - H);
    return 2 * s.area <= W * H - pen;
}

namespace detail {

class SteinbergPacker {
public:
    bool pack(const std::vector<Rect2D>& L, const Rational& u, const Rational& v, const Rational& x0,
              const Rational& y0, std::vector<Placement2D>& out) {
        if (L.empty()) return true;
        if (L.size() == 1) {
            if (L[0].w > u || L[0].h > v) return false;
            out.push_back({L[0].id, x0, y0, L[0].w, L[0].h});
            return true;
        }
        if (nfdh(L, u, v, x0, y0, out, false)) return true;
        if (nfdh(L, u, v, x0, y0, out, true)) return true;
        if (stack(L, u, v, x0, y0, out, false)) return true;
        if (stack(L, u, v, x0, y0, out, true)) return true;
        if (split(L, u, v, x0, y0, out, false)) return true;
        if (split(L, u, v, x0, y0, out, true)) return true;
        return false;
    }

private:
    static std::vector<Rect2D> transpose(const std::vector<Rect2D>& L) {
        std::vector<Rect2D> t;
        t.reserve(L.size());
        for (const auto& r : L) t.push_back({r.id, r.h, r.w});
        return t;
    }

    static void untranspose(std::vector<Placement2D>& sub, std::vector<Placement2D>& out) {
        for (auto& p : sub) out.push_back({p.id, p.y, p.x, p.h, p.w});
    }

    bool nfdh(const std::vector<Rect2D>& L, const Rational& u, const Rational& v, const Rational& x0,
              const Rational& y0, std::vector<Placement2D>& out, bool transposed) {
        auto pl = transposed ? nfdh_in_box(transpose(L), v, u) : nfdh_in_box(L, u, v);
        if (!pl) return false;
        for (auto& p : *pl) {
            if (transposed) out.push_back({p.id, x0 + p.y, y0 + p.x, p.h, p.w});
            else out.push_back({p.id, x0 + p.x, y0 + p.y, p.w, p.h});
        }
        return true;
    }

    // stack a prefix of the wide items (w >= u/2) at the bottom, recurse above
    bool stack(const std::vector<Rect2D>& L0, const Rational& u0, const Rational& v0, const Rational& x0,
               const Rational& y0, std::vector<Placement2D>& out, bool transposed) {
        const std::vector<Rect2D> L = transposed ? transpose(L0) : L0;
        const Rational& u = transposed ? v0 : u0;
        const Rational& v = transposed ? u0 : v0;
        std::vector<Rect2D> wide, rest;
        for (const auto& r : L) (2 * r.w >= u ? wide : rest).push_back(r);
        if (wide.empty()) return false;
        std::sort(wide.begin(), wide.end(), [](const Rect2D& a, const Rect2D& b) {
            if (a.w != b.w) return a.w > b.w;
            return a.id < b.id;
        });
        std::vector<Rational> prefix_h(wide.size() + 1, Rational(0));
        for (std::size_t i = 0; i < wide.size(); ++i) prefix_h[i + 1] = prefix_h[i] + wide[i].h;
        for (std::size_t k = wide.size(); k >= 1; --k) {
            const Rational& h = prefix_h[k];
            if (h > v) continue;
            std::vector<Rect2D> remaining = rest;
            remaining.insert(remaining.end(), wide.begin() + static_cast<long>(k), wide.end());
            Rational vr = v - h;
            if (!remaining.empty() && !steinberg_condition(remaining, u, vr)) continue;
            std::vector<Placement2D> sub;
            Rational y = 0;
            for (std::size_t i = 0; i < k; ++i) {
                sub.push_back({wide[i].id, Rational(0), y, wide[i].w, wide[i].h});
                y += wide[i].h;
            }
            if (!pack(remaining, u, vr, Rational(0), h, sub)) continue;
            for (auto& p : sub) {
                if (transposed) out.push_back({p.id, x0 + p.y, y0 + p.x, p.h, p.w});
                else out.push_back({p.id, x0 + p.x, y0 + p.y, p.w, p.h});
            }
            return true;
        }
        return false;
    }

    // smallest width u' >= a so that the condition holds in a u' x v box
    static Rational threshold(const SteinbergStats& s, const Rational& v) {
        Rational p = positive_part(2 * s.b - v);
        Rational c1 = (2 * s.area + 2 * s.a * p) / (v + p);
        if (c1 <= 2 * s.a) return rmax(s.a, c1);
        return rmax(s.a, 2 * s.area / v);
    }

    // guillotine cut into two boxes side by side, each satisfying the condition
    bool split(const std::vector<Rect2D>& L0, const Rational& u0, const Rational& v0, const Rational& x0,
               const Rational& y0, std::vector<Placement2D>& out, bool transposed) {
        const std::vector<Rect2D> L = transposed ? transpose(L0) : L0;
        const Rational& u = transposed ? v0 : u0;
        const Rational& v = transposed ? u0 : v0;
        std::vector<std::vector<Rect2D>> orders(3, L);
        std::sort(orders[0].begin(), orders[0].end(), [](const Rect2D& a, const Rect2D& b) {
            if (a.w != b.w) return a.w > b.w;
            if (a.h != b.h) return a.h > b.h;
            return a.id < b.id;
        });
        std::sort(orders[1].begin(), orders[1].end(), [](const Rect2D& a, const Rect2D& b) {
            if (a.h != b.h) return a.h > b.h;
            if (a.w != b.w) return a.w > b.w;
            return a.id < b.id;
        });
        std::sort(orders[2].begin(), orders[2].end(), [](const Rect2D& a, const Rect2D& b) {
            Rational aa = a.w * a.h, bb = b.w * b.h;
            if (aa != bb) return aa > bb;
            return a.id < b.id;
        });
        for (const auto& o : orders) {
            const std::size_t n = o.size();
            // prefix and suffix statistics
            std::vector<SteinbergStats> pre(n + 1, {0, 0, 0}), suf(n + 1, {0, 0, 0});
            for (std::size_t i = 0; i < n; ++i) {
                pre[i + 1] = {rmax(pre[i].a, o[i].w), rmax(pre[i].b, o[i].h), pre[i].area + o[i].w * o[i].h};
            }
            for (std::size_t i = n; i-- > 0;) {
                suf[i] = {rmax(suf[i + 1].a, o[i].w), rmax(suf[i + 1].b, o[i].h),
                          suf[i + 1].area + o[i].w * o[i].h};
            }
            for (std::size_t k = 1; k < n; ++k) {
                for (int side = 0; side < 2; ++side) {
                    const SteinbergStats& s1 = side == 0 ? pre[k] : suf[k];
                    const SteinbergStats& s2 = side == 0 ? suf[k] : pre[k];
                    Rational t1 = threshold(s1, v), t2 = threshold(s2, v);
                    if (t1 + t2 > u) continue;
                    std::vector<Rect2D> a(o.begin(), o.begin() + static_cast<long>(k));
                    std::vector<Rect2D> b(o.begin() + static_cast<long>(k), o.end());
                    if (side == 1) std::swap(a, b);
                    std::vector<Placement2D> sub;
                    if (!pack(a, t1, v, Rational(0), Rational(0), sub)) continue;
                    if (!pack(b, u - t1, v, t1, Rational(0), sub)) continue;
                    for (auto& p : sub) {
                        if (transposed) out.push_back({p.id, x0 + p.y, y0 + p.x, p.h, p.w});
                        else out.push_back({p.id, x0 + p.x, y0 + p.y, p.w, p.h});
                    }
                    return true;
                }
            }
        }
        return false;
    }
};

}  // namespace detail

// Packs all rectangles into W x H when the area condition holds; nullopt otherwise.
inline std::optional<std::vector<Placement2D>> steinberg_2d(const std::vector<Rect2D>& rects, const Rational& W,
                                                            const Rational& H) {
    for (const auto& r : rects)
        if (r.w > W || r.h > H) throw PreconditionError("rectangle exceeds the box");
    if (!steinberg_condition(rects, W, H)) return std::nullopt;
    std::vector<Placement2D> out;
    detail::SteinbergPacker packer;
    if (!packer.pack(rects, W, H, Rational(0), Rational(0), out)) return std::nullopt;
    return out;
}

}  // namespace packing3d
