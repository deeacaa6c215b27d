#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace packing3d {

struct Item {
    std::string id;
    Rational w, d, h;

    Rational volume() const { return w * d * h; }
    std::array<Rational, 3> dims() const { return {w, d, h}; }
};

enum class Axis : std::uint8_t { x = 0, y = 1, z = 2 };

inline char axis_name(Axis a) { return "xyz"[static_cast<int>(a)]; }

inline Axis parse_axis(std::string_view s) {
    if (s == "x") return Axis::x;
    if (s == "y") return Axis::y;
    if (s == "z") return Axis::z;
    throw ParseError("unknown axis '" + std::string(s) + "'");
}

// perm[i] is the original extent (0=w, 1=d, 2=h) lying along axis i
struct Orientation {
    std::array<std::uint8_t, 3> perm{0, 1, 2};

    bool identity() const { return perm[0] == 0 && perm[1] == 1 && perm[2] == 2; }

    std::string label() const {
        std::string s(3, ' ');
        for (int i = 0; i < 3; ++i) s[i] = "xyz"[perm[i]];
        return s;
    }

    static Orientation parse(std::string_view s) {
        if (s.size() != 3) throw ParseError("bad orientation '" + std::string(s) + "'");
        Orientation o;
        std::array<bool, 3> seen{};
        for (int i = 0; i < 3; ++i) {
            int v = s[i] == 'x' ? 0 : s[i] == 'y' ? 1 : s[i] == 'z' ? 2 : -1;
            if (v < 0 || seen[v]) throw ParseError("bad orientation '" + std::string(s) + "'");
            seen[v] = true;
            o.perm[i] = static_cast<std::uint8_t>(v);
        }
        return o;
    }

    static std::array<Orientation, 6> all() {
        return {Orientation{{0, 1, 2}}, Orientation{{0, 2, 1}}, Orientation{{1, 0, 2}},
                Orientation{{1, 2, 0}}, Orientation{{2, 0, 1}}, Orientation{{2, 1, 0}}};
    }

    friend bool operator==(const Orientation&, const Orientation&) = default;
};

inline std::array<Rational, 3> extents(const Item& it, const Orientation& o) {
    const auto d = it.dims();
    return {d[o.perm[0]], d[o.perm[1]], d[o.perm[2]]};
}

struct Placement {
    std::string item_id;
    std::size_t bin = 0;
    Rational x, y, z;
    Orientation orient{};

    std::array<Rational, 3> origin() const { return {x, y, z}; }
};

struct BinSpec {
    Rational W{1}, D{1}, H{1};
    std::array<Rational, 3> dims() const { return {W, D, H}; }
};

enum class PackingKind { bins, strip };

struct Packing {
    BinSpec bin{};
    PackingKind kind = PackingKind::bins;
    Axis strip_axis = Axis::z;
    std::vector<Placement> placements;

    std::size_t bin_count() const {
        std::size_t n = 0;
        for (const auto& p : placements) n = std::max(n, p.bin + 1);
        return n;
    }
};

class ItemTable {
public:
    ItemTable() = default;

    explicit ItemTable(std::vector<Item> items) : items_(std::move(items)) {
        index_.reserve(items_.size());
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (!index_.emplace(items_[i].id, i).second)
                throw PreconditionError("duplicate item id '" + items_[i].id + "'");
        }
    }

    const Item* find(const std::string& id) const {
        auto it = index_.find(id);
        return it == index_.end() ? nullptr : &items_[it->second];
    }

    const Item& at(const std::string& id) const {
        if (const Item* p = find(id)) return *p;
        throw PreconditionError("unknown item id '" + id + "'");
    }

    const std::vector<Item>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }

private:
    std::vector<Item> items_;
    std::unordered_map<std::string, std::size_t> index_;
};

inline Rational total_volume(const std::vector<Item>& items) {
    Rational v = 0;
    for (const auto& it : items) v += it.volume();
    return v;
}

struct Box {
    std::array<Rational, 3> lo, hi;
};

inline Box occupied_box(const Placement& p, const Item& it) {
    auto e = extents(it, p.orient);
    return Box{{p.x, p.y, p.z}, {p.x + e[0], p.y + e[1], p.z + e[2]}};
}

inline bool open_boxes_intersect(const Box& a, const Box& b) {
    for (int k = 0; k < 3; ++k)
        if (!(a.lo[k] < b.hi[k] && b.lo[k] < a.hi[k])) return false;
    return true;
}

inline bool items_overlap(const Placement& p1, const Placement& p2, const ItemTable& items) {
    const Item& a = items.at(p1.item_id);
    const Item& b = items.at(p2.item_id);
    if (p1.bin != p2.bin) return false;
    return open_boxes_intersect(occupied_box(p1, a), occupied_box(p2, b));
}

enum class ViolationKind { overlap, containment, duplicate, unknown_item, missing };

inline const char* violation_name(ViolationKind k) {
    switch (k) {
        case ViolationKind::overlap: return "overlap";
        case ViolationKind::containment: return "containment";
        case ViolationKind::duplicate: return "duplicate";
        case ViolationKind::unknown_item: return "unknown_item";
        case ViolationKind::missing: return "missing";
    }
    return "?";
}

struct Violation {
    ViolationKind kind;
    std::vector<std::string> item_ids;
    std::vector<Rational> witness;  // overlap: lower corner of the common box; containment: offending face
};

struct VerifyReport {
    bool feasible = true;
    std::vector<Violation> violations;
    std::size_t used_bins = 0;
    std::optional<Rational> strip_height;
    Rational total_volume = 0;
};

struct VerifyOptions {
    bool require_complete = false;  // also flag table items that were never placed
};

inline VerifyReport verify_packing(const Packing& packing, const ItemTable& items, VerifyOptions opts = {}) {
    VerifyReport rep;
    const auto bin_dims = packing.bin.dims();
    const int strip_k = static_cast<int>(packing.strip_axis);

    struct Entry {
        std::size_t placement;
        Box box;
    };
    std::unordered_map<std::string, std::size_t> first_seen;
    std::unordered_map<std::size_t, std::vector<Entry>> by_bin;

    if (packing.kind == PackingKind::strip) rep.strip_height = Rational(0);

    for (std::size_t i = 0; i < packing.placements.size(); ++i) {
        const Placement& p = packing.placements[i];
        rep.used_bins = std::max(rep.used_bins, p.bin + 1);
        const Item* it = items.find(p.item_id);
        if (!it) {
            rep.violations.push_back({ViolationKind::unknown_item, {p.item_id}, {}});
            continue;
        }
        if (auto [pos, fresh] = first_seen.emplace(p.item_id, i); !fresh) {
            rep.violations.push_back({ViolationKind::duplicate, {p.item_id}, {p.x, p.y, p.z}});
            continue;
        }
        rep.total_volume += it->volume();
        Box b = occupied_box(p, *it);
        for (int k = 0; k < 3; ++k) {
            bool unbounded = packing.kind == PackingKind::strip && k == strip_k;
            if (b.lo[k] < 0) {
                rep.violations.push_back({ViolationKind::containment, {p.item_id}, {b.lo[k]}});
            } else if (!unbounded && b.hi[k] > bin_dims[k]) {
                rep.violations.push_back({ViolationKind::containment, {p.item_id}, {b.hi[k]}});
            }
        }
        if (rep.strip_height && b.hi[strip_k] > *rep.strip_height) rep.strip_height = b.hi[strip_k];
        by_bin[p.bin].push_back({i, std::move(b)});
    }

    // sweep along x; only pairs with overlapping x-intervals are compared
    std::vector<std::size_t> bins;
    for (auto& [bin, v] : by_bin) bins.push_back(bin);
    std::sort(bins.begin(), bins.end());
    for (std::size_t bin : bins) {
        auto& v = by_bin[bin];
        std::sort(v.begin(), v.end(), [](const Entry& a, const Entry& b) {
            if (a.box.lo[0] != b.box.lo[0]) return a.box.lo[0] < b.box.lo[0];
            return a.placement < b.placement;
        });
        std::vector<const Entry*> active;
        for (const Entry& e : v) {
            std::erase_if(active, [&](const Entry* a) { return a->box.hi[0] <= e.box.lo[0]; });
            for (const Entry* a : active) {
                if (open_boxes_intersect(a->box, e.box)) {
                    std::vector<Rational> corner(3);
                    for (int k = 0; k < 3; ++k) corner[k] = rmax(a->box.lo[k], e.box.lo[k]);
                    rep.violations.push_back({ViolationKind::overlap,
                                              {packing.placements[a->placement].item_id,
                                               packing.placements[e.placement].item_id},
                                              std::move(corner)});
                }
            }
            active.push_back(&e);
        }
    }

    if (opts.require_complete) {
        for (const auto& it : items.items())
            if (!first_seen.count(it.id)) rep.violations.push_back({ViolationKind::missing, {it.id}, {}});
    }

    rep.feasible = rep.violations.empty();
    return rep;
}

inline VerifyReport verify_packing(const Packing& packing, const std::vector<Item>& items,
                                   VerifyOptions opts = {}) {
    return verify_packing(packing, ItemTable(items), opts);
}

// Map a packing of items given in a rotated frame back to the original frame.
// Frame axis i holds original axis perm[i]; items keep identity orientation.
struct Frame {
    std::array<int, 3> perm{0, 1, 2};

    static Frame with_height(Axis a) {
        switch (a) {
            case Axis::z: return Frame{{0, 1, 2}};
            case Axis::x: return Frame{{1, 2, 0}};
            case Axis::y: return Frame{{2, 0, 1}};
        }
        return Frame{};
    }

    Item to_frame(const Item& it) const {
        auto d = it.dims();
        return Item{it.id, d[perm[0]], d[perm[1]], d[perm[2]]};
    }

    std::vector<Item> to_frame(const std::vector<Item>& items) const {
        std::vector<Item> out;
        out.reserve(items.size());
        for (const auto& it : items) out.push_back(to_frame(it));
        return out;
    }

    Placement from_frame(const Placement& p) const {
        std::array<Rational, 3> f{p.x, p.y, p.z}, o;
        for (int i = 0; i < 3; ++i) o[perm[i]] = f[i];
        Placement q = p;
        q.x = o[0];
        q.y = o[1];
        q.z = o[2];
        return q;
    }
};

}  // namespace packing3d
