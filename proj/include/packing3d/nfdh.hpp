#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace packing3d {

struct Rect2D {
    std::size_t id;
    Rational w, h;
};

struct Placement2D {
    std::size_t id;
    Rational x, y, w, h;
};

struct Shelf {
    Rational base_z;
    Rational height;
    std::vector<Placement2D> members;
};

struct NfdhResult {
    std::vector<Shelf> shelves;
    Rational height = 0;

    std::vector<Placement2D> placements() const {
        std::vector<Placement2D> out;
        for (const auto& s : shelves) out.insert(out.end(), s.members.begin(), s.members.end());
        return out;
    }
};

inline void sort_by_height(std::vector<Rect2D>& rects) {
    std::sort(rects.begin(), rects.end(), [](const Rect2D& a, const Rect2D& b) {
        if (a.h != b.h) return a.h > b.h;
        return a.id < b.id;
    });
}

inline NfdhResult nfdh_2d(std::vector<Rect2D> rects, const Rational& strip_width) {
    NfdhResult res;
    sort_by_height(rects);
    Rational x = 0;
    for (const auto& r : rects) {
        if (r.w > strip_width) throw PreconditionError("rectangle wider than the strip");
        if (res.shelves.empty() || x + r.w > strip_width) {
            res.shelves.push_back(Shelf{res.height, r.h, {}});
            res.height += r.h;
            x = 0;
        }
        res.shelves.back().members.push_back(Placement2D{r.id, x, res.shelves.back().base_z, r.w, r.h});
        x += r.w;
    }
    return res;
}

inline bool nfdh_fits(const Rational& box_w, const Rational& box_h, const std::vector<Rect2D>& rects) {
    if (rects.empty()) return true;
    Rational area = 0, wmax = 0, hmax = 0;
    for (const auto& r : rects) {
        area += r.w * r.h;
        if (r.w > wmax) wmax = r.w;
        if (r.h > hmax) hmax = r.h;
    }
    return area <= (box_h - hmax) * (box_w - wmax);
}

// NFDH inside a box; nullopt when the shelves overflow the box height.
inline std::optional<std::vector<Placement2D>> nfdh_in_box(const std::vector<Rect2D>& rects, const Rational& W,
                                                           const Rational& H) {
    for (const auto& r : rects)
        if (r.w > W || r.h > H) return std::nullopt;
    NfdhResult res = nfdh_2d(rects, W);
    if (res.height > H) return std::nullopt;
    return res.placements();
}

inline bool rects_overlap(const Placement2D& a, const Placement2D& b) {
    return a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
}

// 2D analog of the feasibility verifier
inline bool verify_2d(const std::vector<Placement2D>& pl, const Rational& W, const Rational& H) {
    for (const auto& p : pl)
        if (p.x < 0 || p.y < 0 || p.x + p.w > W || p.y + p.h > H) return false;
    std::vector<const Placement2D*> order;
    for (const auto& p : pl) order.push_back(&p);
    std::sort(order.begin(), order.end(), [](auto a, auto b) { return a->x < b->x; });
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size() && order[j]->x < order[i]->x + order[i]->w; ++j)
            if (rects_overlap(*order[i], *order[j])) return false;
    return true;
}

}  // namespace packing3d
