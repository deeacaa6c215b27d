#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bins.hpp"
#include "gap.hpp"
#include "licheng.hpp"
#include "oracle.hpp"
#include "strip_transform.hpp"
#include "volume_pack.hpp"

namespace packing3d {

struct AbsParams {
    std::size_t K = 3;
    Rational lambda{1, 40};
    Rational epsilon{1, 40};
    std::optional<Rational> delta;  // default min(lambda/1000, epsilon^3/K)
    const StripBackend* backend = nullptr;
    std::size_t oracle_cap = 6;
    std::size_t first_fit_cap = 8;  // items per bin in the first-fit fallback
    std::size_t slot_candidates = 4;
    std::uint64_t gap_node_budget = 200'000;

    Rational delta_value() const {
        if (delta) return *delta;
        return rmin(lambda / 1000, pow(epsilon, 3) / Rational(static_cast<long>(K)));
    }
    const StripBackend& strip_backend() const { return backend ? *backend : default_backend(); }
};

// ---------------------------------------------------------------- classification

inline bool has_dim_in(const Item& it, const Rational& lo, const Rational& hi) {
    for (const auto& d : it.dims())
        if (d > lo && d <= hi) return true;
    return false;
}

// Smallest-index band (mu_j, mu_{j-1}] of low volume, mu_0 = delta, mu_j = mu_{j-1}^power.
inline Rational shifting_mu(const std::vector<Item>& items, const Rational& start, const Rational& threshold,
                            std::size_t max_j, unsigned long power) {
    Rational prev = start;
    for (std::size_t j = 1; j <= max_j; ++j) {
        bool any_small = false;
        for (const auto& it : items)
            for (const auto& d : it.dims()) any_small = any_small || d <= prev;
        if (!any_small) return prev;
        Rational cur = pow(prev, power);
        Rational v = 0;
        for (const auto& it : items)
            if (has_dim_in(it, cur, prev)) v += it.volume();
        if (v <= threshold) return prev;
        prev = cur;
    }
    throw PreconditionError("no low-volume band found");
}

inline Rational compute_mu(const std::vector<Item>& items, const Rational& delta, std::size_t K) {
    if (total_volume(items) > Rational(static_cast<long>(K))) throw PreconditionError("volume exceeds K");
    Rational bands = ceil_r(Rational(3 * static_cast<long>(K)) / delta);
    return shifting_mu(items, delta, delta, to_size(bands.get_num()), 4);
}

struct AbsClassification {
    std::vector<Item> L, I_h, I_w, I_d, rem_h, rem_w, rem_d;
    std::vector<Item> I_h_ell, I_h_s;  // split of I_h by w, d > 1/2
};

inline AbsClassification classify_absolute(const std::vector<Item>& items, const Rational& mu) {
    AbsClassification c;
    const Rational mu4 = pow(mu, 4), half(1, 2);
    for (const auto& it : items) {
        if (it.w > mu && it.d > mu && it.h > mu) c.L.push_back(it);
        else if (it.h <= mu4) c.I_h.push_back(it);
        else if (it.w <= mu4) c.I_w.push_back(it);
        else if (it.d <= mu4) c.I_d.push_back(it);
        else if (it.h <= mu) c.rem_h.push_back(it);
        else if (it.w <= mu) c.rem_w.push_back(it);
        else c.rem_d.push_back(it);
    }
    for (const auto& it : c.I_h) (it.w > half && it.d > half ? c.I_h_ell : c.I_h_s).push_back(it);
    return c;
}

inline std::vector<Item> concat(std::vector<Item> a, const std::vector<Item>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// ---------------------------------------------------------------- pack_separate

struct SeparateResult {
    Packing bins;    // original frame
    std::size_t last_bin = 0;
    Rational fill = 0;  // occupied length of the last bin along the axis
    Rational strip_height = 0;
    std::size_t count() const { return bins.bin_count(); }
};

inline SeparateResult pack_separate(const std::vector<Item>& T, Axis axis, const Rational& mu,
                                    const StripBackend& backend) {
    SeparateResult res;
    if (T.empty()) return res;
    Frame f = Frame::with_height(axis);
    auto tf = f.to_frame(T);
    for (const auto& it : tf)
        if (it.h > mu) throw PreconditionError("item '" + it.id + "' is not thin along the separation axis");
    StripResult strip = backend.pack(tf);
    res.strip_height = strip.height;
    ItemTable table(tf);
    SlabSplit split = split_at_integer_planes(strip.packing, table);
    std::vector<Placement> out;
    std::size_t next = 0;
    Rational top = 0;
    for (auto& [i, slab] : split.slabs) {
        top = 0;
        for (auto& p : slab) {
            p.bin = next;
            top = rmax(top, p.z + table.at(p.item_id).h);
            out.push_back(p);
        }
        ++next;
    }
    std::size_t last = next == 0 ? 0 : next - 1;
    if (next == 0) next = 1;
    // sliced layers stacked above the last bin's content
    for (auto& [c, layer] : split.planes) {
        Rational lh = layer_height(layer, table);
        if (top + lh > 1) {
            last = next++;
            top = 0;
        }
        for (auto& p : layer) {
            p.bin = last;
            p.z = top;
            out.push_back(p);
        }
        top += lh;
    }
    res.last_bin = last;
    res.fill = top;
    res.bins.kind = PackingKind::bins;
    for (const auto& p : out) res.bins.placements.push_back(f.from_frame(p));
    return res;
}

// ---------------------------------------------------------------- Case 1 pieces (frame with height = chosen axis)

struct GroupedResult {
    Packing bins;
    std::vector<Rational> fill;  // per bin
};

inline GroupedResult pack_Ihs_grouped(const std::vector<Item>& ihs, std::size_t k, const Rational& delta,
                                      const Rational& mu) {
    const Rational mu4 = pow(mu, 4), half(1, 2);
    const Rational cap = Rational(1, 3) - 20 * delta;
    if (total_volume(ihs) > (Rational(1, 3) - 21 * delta) * Rational(static_cast<long>(k)))
        throw PreconditionError("I_h,s volume exceeds (1/3 - 21 delta) k");
    for (const auto& it : ihs) {
        if (it.h > mu4) throw PreconditionError("item '" + it.id + "' is not flat");
        if (it.w > half && it.d > half) throw PreconditionError("item '" + it.id + "' is not half-thin");
    }
    GroupedResult res;
    res.bins.kind = PackingKind::bins;
    std::vector<std::vector<Item>> groups;
    Rational v = 0;
    for (const auto& it : ihs) {
        if (groups.empty() || v + it.volume() > cap) {
            groups.emplace_back();
            v = 0;
        }
        groups.back().push_back(it);
        v += it.volume();
    }
    if (groups.size() > k) throw PreconditionError("more I_h,s groups than bins");
    for (std::size_t g = 0; g < groups.size(); ++g) {
        StripResult s = licheng_strip(groups[g], LiChengMode::halfthin);
        if (s.height > 1 - 59 * delta) throw PreconditionError("I_h,s group exceeds height 1 - 59 delta");
        for (auto p : s.packing.placements) {
            p.bin = g;
            res.bins.placements.push_back(std::move(p));
        }
        res.fill.push_back(s.height);
    }
    return res;
}

struct Footprint {
    Rational x0, y0, x1, y1;
};

struct Slot {
    std::size_t bin = 0;
    Rational lo, hi;
    std::vector<Footprint> footprints;
    Rational capacity() const { return hi - lo; }
};

struct SlotCandidate {
    Packing large;  // k bins, frame coordinates
    std::vector<Slot> slots;
};

inline std::vector<Slot> slots_of(const Packing& large, const ItemTable& items, std::size_t k) {
    std::vector<Slot> out;
    for (std::size_t b = 0; b < k; ++b) {
        std::vector<Rational> planes{Rational(0), Rational(1)};
        std::vector<const Placement*> here;
        for (const auto& p : large.placements)
            if (p.bin == b) {
                here.push_back(&p);
                planes.push_back(p.z);
                planes.push_back(p.z + items.at(p.item_id).h);
            }
        std::sort(planes.begin(), planes.end());
        planes.erase(std::unique(planes.begin(), planes.end()), planes.end());
        for (std::size_t i = 0; i + 1 < planes.size(); ++i) {
            Slot s{b, planes[i], planes[i + 1], {}};
            for (const Placement* p : here) {
                const Item& it = items.at(p->item_id);
                if (p->z <= s.lo && p->z + it.h >= s.hi) s.footprints.push_back({p->x, p->y, p->x + it.w, p->y + it.d});
            }
            out.push_back(std::move(s));
        }
    }
    return out;
}

// Candidate packings of the large items into k bins with their slots.
class SlotPackingStream {
public:
    SlotPackingStream(std::vector<Item> L, std::size_t k, const Rational& mu, std::size_t oracle_cap,
                      std::size_t budget, std::size_t first_fit_cap = 8)
        : L_(std::move(L)), k_(k), cap_(oracle_cap), ffd_cap_(first_fit_cap), budget_(budget), table_(L_) {
        if (Rational(static_cast<long>(L_.size())) > Rational(static_cast<long>(k)) / pow(mu, 3))
            throw PreconditionError("too many large items");
    }

    std::optional<SlotCandidate> next() {
        if (emitted_ >= budget_ || stage_ > 1) return std::nullopt;
        Packing large;
        large.kind = PackingKind::bins;
        bool found = false;
        if (L_.empty()) {
            found = stage_ == 0;
            stage_ = 2;
        } else if (stage_ == 0) {
            stage_ = 1;
            if (L_.size() <= cap_) {
                stage_ = 2;
                auto r = oracle_opt_bins(L_, {}, k_, OracleOptions{cap_, false});
                if (r.opt) {
                    large = r.witness;
                    found = true;
                }
            } else {
                return next();
            }
        } else {
            stage_ = 2;
            if (auto p = first_fit()) {
                large = *p;
                found = true;
            }
        }
        if (!found) return std::nullopt;
        ++emitted_;
        return SlotCandidate{large, slots_of(large, table_, k_)};
    }

private:
    // first fit by decreasing volume with exact one-bin checks
    std::optional<Packing> first_fit() const {
        std::vector<Item> order = L_;
        std::stable_sort(order.begin(), order.end(), [](const Item& a, const Item& b) { return a.volume() > b.volume(); });
        std::vector<std::vector<Item>> bins;
        std::vector<Packing> wit;
        for (const auto& it : order) {
            bool placed = false;
            for (std::size_t b = 0; b < bins.size() && !placed; ++b) {
                if (bins[b].size() >= ffd_cap_) continue;
                auto trial = bins[b];
                trial.push_back(it);
                auto f = oracle_fits_one_bin(trial, {}, OracleOptions{ffd_cap_, false});
                if (f.fits) {
                    bins[b] = std::move(trial);
                    wit[b] = std::move(f.witness);
                    placed = true;
                }
            }
            if (!placed) {
                if (bins.size() == k_) return std::nullopt;
                bins.push_back({it});
                wit.push_back(oracle_fits_one_bin(bins.back(), {}, OracleOptions{ffd_cap_, false}).witness);
            }
        }
        Packing out;
        out.kind = PackingKind::bins;
        for (std::size_t b = 0; b < wit.size(); ++b)
            for (auto p : wit[b].placements) {
                p.bin = b;
                out.placements.push_back(std::move(p));
            }
        return out;
    }

    std::vector<Item> L_;
    std::size_t k_, cap_, ffd_cap_, budget_;
    ItemTable table_;
    int stage_ = 0;
    std::size_t emitted_ = 0;
};

// A w x d base position in the unit square avoiding every footprint.
inline std::optional<std::array<Rational, 2>> base_position(const Rational& w, const Rational& d,
                                                            const std::vector<Footprint>& fps) {
    if (w > 1 || d > 1) return std::nullopt;
    std::vector<Rational> xs{Rational(0)}, ys{Rational(0)};
    for (const auto& f : fps) {
        if (f.x1 + w <= 1) xs.push_back(f.x1);
        if (f.y1 + d <= 1) ys.push_back(f.y1);
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    for (const auto& x : xs)
        for (const auto& y : ys) {
            bool ok = true;
            for (const auto& f : fps)
                if (x < f.x1 && f.x0 < x + w && y < f.y1 && f.y0 < y + d) {
                    ok = false;
                    break;
                }
            if (ok) return std::array<Rational, 2>{x, y};
        }
    return std::nullopt;
}

struct GapAssignResult {
    std::vector<Placement> placements;  // frame coordinates, bin = slot's bin
    std::vector<Item> unassigned;
    Rational packed_volume = 0;
    GapResult gap;
};

inline GapAssignResult gap_assign(const std::vector<Slot>& slots, const std::vector<Item>& items,
                                  const GapOptions& opts = {}) {
    GapInstance g;
    std::vector<std::vector<std::optional<std::array<Rational, 2>>>> pos(items.size());
    for (const auto& s : slots) g.capacity.push_back(s.capacity());
    for (std::size_t i = 0; i < items.size(); ++i) {
        g.profit.push_back(items[i].volume());
        g.size.emplace_back();
        for (const auto& s : slots) {
            auto p = base_position(items[i].w, items[i].d, s.footprints);
            pos[i].push_back(p);
            g.size.back().push_back(p ? std::optional<Rational>(items[i].h) : std::nullopt);
        }
    }
    GapAssignResult res;
    res.gap = gap_solve(g, opts);
    res.packed_volume = res.gap.profit;
    std::vector<Rational> level;
    for (const auto& s : slots) level.push_back(s.lo);
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto s = res.gap.slot[i];
        if (!s) {
            res.unassigned.push_back(items[i]);
            continue;
        }
        const auto& xy = *pos[i][*s];
        res.placements.push_back({items[i].id, slots[*s].bin, xy[0], xy[1], level[*s], Orientation{}});
        level[*s] += items[i].h;
    }
    return res;
}

struct RepackResult {
    std::vector<Placement> placements;  // bins indexed like the strips, new bins after them
    std::vector<Rational> fill;
    std::size_t new_bins = 0;
};

// Leftover flat items and the medium class into the empty strips above `fill`.
inline RepackResult repack_leftovers(const std::vector<Item>& leftovers, const std::vector<Item>& rem_h,
                                     std::vector<Rational> fill, std::size_t k, const Rational& delta,
                                     const Rational& mu) {
    if (total_volume(leftovers) > 5 * delta * Rational(static_cast<long>(k)))
        throw PreconditionError("leftover volume exceeds 5 delta k");
    if (total_volume(rem_h) > delta) throw PreconditionError("I_rem_h volume exceeds delta");
    RepackResult res;
    std::vector<std::vector<Item>> groups;
    Rational v = 0;
    for (const auto& it : leftovers) {
        if (groups.empty() || v + it.volume() > 6 * delta) {
            groups.emplace_back();
            v = 0;
        }
        groups.back().push_back(it);
        v += it.volume();
    }
    auto put = [&](const StripResult& s, std::size_t b) {
        for (auto p : s.packing.placements) {
            p.bin = b;
            p.z += fill[b];
            res.placements.push_back(std::move(p));
        }
        fill[b] += s.height;
    };
    auto bin_with_room = [&](const Rational& h) {
        for (std::size_t b = 0; b < fill.size(); ++b)
            if (fill[b] + h <= 1) return b;
        fill.push_back(0);
        ++res.new_bins;
        return fill.size() - 1;
    };
    for (const auto& g : groups) {
        StripResult s = licheng_strip(g, LiChengMode::general);
        if (s.height > 25 * delta) throw PreconditionError("leftover group exceeds height 25 delta");
        put(s, bin_with_room(s.height));
    }
    if (!rem_h.empty()) {
        for (const auto& it : rem_h)
            if (it.h > mu) throw PreconditionError("item '" + it.id + "' is not thin in height");
        StripResult s = licheng_strip(rem_h, LiChengMode::general);
        if (s.height > 12 * delta) throw PreconditionError("I_rem_h exceeds height 12 delta");
        put(s, bin_with_room(s.height));
    }
    res.fill = std::move(fill);
    return res;
}

// ---------------------------------------------------------------- Case 2 piece

struct LargeThinResult {
    std::array<Packing, 3> strips;  // original frame, strip along x, y, z
    std::array<Rational, 3> thickness{Rational(0), Rational(0), Rational(0)};
};

inline LargeThinResult pack_large_thin(const std::vector<Item>& L, const Rational& delta, std::size_t K,
                                       const Rational& epsilon) {
    const Rational Kr(static_cast<long>(K));
    if (total_volume(L) > 64 * delta * Kr) throw PreconditionError("v(L) exceeds 64 delta K");
    if (delta * Kr > pow(epsilon, 3)) throw PreconditionError("delta K exceeds epsilon^3");
    const Rational lim = 4 * epsilon;
    std::array<std::vector<Item>, 3> parts;
    for (const auto& it : L) {
        if (it.h <= lim) parts[2].push_back(it);
        else if (it.w <= lim) parts[0].push_back(it);
        else if (it.d <= lim) parts[1].push_back(it);
        else throw PreconditionError("large item '" + it.id + "' has no side of length at most 4 epsilon");
    }
    LargeThinResult res;
    for (int a = 0; a < 3; ++a) {
        Axis ax = static_cast<Axis>(a);
        res.strips[a].kind = PackingKind::strip;
        res.strips[a].strip_axis = ax;
        if (parts[a].empty()) continue;
        Frame f = Frame::with_height(ax);
        StripResult s = licheng_strip(f.to_frame(parts[a]), LiChengMode::general);
        if (s.height > 33 * epsilon) throw PreconditionError("large-thin strip exceeds 33 epsilon");
        res.thickness[a] = s.height;
        for (const auto& p : s.packing.placements) res.strips[a].placements.push_back(f.from_frame(p));
    }
    return res;
}

// ---------------------------------------------------------------- dispatch

struct AbsBound {
    std::string backend;
    std::string route;  // case1-h|w|d, case2, fallback-volume, empty
    std::optional<std::size_t> k_accepted;
    Rational mu = 0;
    Rational delta = 0;
    std::size_t bins = 0;
    std::size_t bin_bound = 0;
    std::string bound_formula;
    bool ratio_certified = false;  // only with a backend meeting the 3/2 strip guarantee
    std::vector<std::string> log;
};

struct AbsResult {
    Packing packing;
    AbsBound bound;
};

namespace detail {

inline const char* axis_tag(int a) { return a == 0 ? "w" : a == 1 ? "d" : "h"; }

// Places a strip given in the original frame into bin b, shifted by `offset` along axis a.
inline void place_strip(BinAssembler& out, const Packing& strip, int a, std::size_t b, const Rational& offset) {
    for (auto p : strip.placements) {
        p.bin = b;
        if (a == 0) p.x += offset;
        else if (a == 1) p.y += offset;
        else p.z += offset;
        out.place(std::move(p));
    }
}

inline Packing attempt_case2(const AbsClassification& c, std::size_t k, const AbsParams& prm, const Rational& mu,
                             const Rational& delta) {
    (void)k;
    const auto& be = prm.strip_backend();
    std::array<SeparateResult, 3> sep{pack_separate(concat(c.I_w, c.rem_w), Axis::x, mu, be),
                                      pack_separate(concat(c.I_d, c.rem_d), Axis::y, mu, be),
                                      pack_separate(concat(c.I_h, c.rem_h), Axis::z, mu, be)};
    LargeThinResult thin = pack_large_thin(c.L, delta, prm.K, prm.epsilon);
    BinAssembler out;
    std::array<std::size_t, 3> off{};
    for (int a = 0; a < 3; ++a) off[a] = out.append(sep[a].bins);
    for (int a = 0; a < 3; ++a) {
        if (thin.strips[a].placements.empty()) continue;
        if (sep[a].count() > 0 && sep[a].fill + thin.thickness[a] <= 1)
            place_strip(out, thin.strips[a], a, off[a] + sep[a].last_bin, sep[a].fill);
        else
            place_strip(out, thin.strips[a], a, out.open(), Rational(0));
    }
    return out.finish();
}

inline Packing attempt_case1(const AbsClassification& c, int j, std::size_t k, const AbsParams& prm,
                             const Rational& mu, const Rational& delta, std::vector<std::string>& log) {
    const auto& be = prm.strip_backend();
    const std::array<const std::vector<Item>*, 3> thin{&c.I_w, &c.I_d, &c.I_h};
    const std::array<const std::vector<Item>*, 3> rem{&c.rem_w, &c.rem_d, &c.rem_h};
    const Rational kr(static_cast<long>(k));
    if (total_volume(*thin[j]) > (Rational(1, 3) - 21 * delta) * kr)
        throw PreconditionError("case 1 needs v(I_" + std::string(axis_tag(j)) + ") <= (1/3 - 21 delta) k");
    BinAssembler out;
    for (int a = 0; a < 3; ++a)
        if (a != j) out.append(pack_separate(concat(*thin[a], *rem[a]), static_cast<Axis>(a), mu, be).bins);

    Frame f = Frame::with_height(static_cast<Axis>(j));
    auto Lf = f.to_frame(c.L);
    auto Ijf = f.to_frame(*thin[j]);
    auto remf = f.to_frame(*rem[j]);
    const Rational half(1, 2);
    std::vector<Item> ell, small;
    for (const auto& it : Ijf) (it.w > half && it.d > half ? ell : small).push_back(it);

    GroupedResult grouped = pack_Ihs_grouped(small, k, delta, mu);

    SlotPackingStream stream(Lf, k, mu, prm.oracle_cap, prm.slot_candidates, prm.first_fit_cap);
    std::optional<SlotCandidate> best_cand;
    std::optional<GapAssignResult> best_gap;
    GapOptions gopt;
    gopt.node_budget = prm.gap_node_budget;
    while (auto cand = stream.next()) {
        GapAssignResult g = gap_assign(cand->slots, ell, gopt);
        if (!g.gap.exact) log.push_back("gap search stopped by node budget");
        if (!best_gap || g.packed_volume > best_gap->packed_volume) {
            best_gap = std::move(g);
            best_cand = std::move(cand);
        }
    }
    if (!best_cand) throw PreconditionError("no packing of the large items into k bins was found");

    RepackResult rp = repack_leftovers(best_gap->unassigned, remf, grouped.fill, k, delta, mu);

    auto emit_frame = [&](const std::vector<Placement>& ps, std::size_t offset) {
        for (auto p : ps) {
            p.bin += offset;
            out.place(f.from_frame(p));
        }
    };
    std::size_t lbase = out.size();
    for (std::size_t b = 0; b < k; ++b) out.open();
    emit_frame(best_cand->large.placements, lbase);
    emit_frame(best_gap->placements, lbase);
    std::size_t gbase = out.size();
    for (std::size_t b = 0; b < rp.fill.size(); ++b) out.open();
    emit_frame(grouped.bins.placements, gbase);
    emit_frame(rp.placements, gbase);
    return out.finish();
}

}  // namespace detail

inline AbsResult solve_absolute_bp(const std::vector<Item>& items, const AbsParams& prm = {}) {
    AbsResult res;
    auto& bd = res.bound;
    bd.backend = prm.strip_backend().name();
    bd.delta = prm.delta_value();
    res.packing.kind = PackingKind::bins;
    for (const auto& it : items)
        if (it.w > 1 || it.d > 1 || it.h > 1) throw PreconditionError("item '" + it.id + "' exceeds a unit bin");
    if (items.empty()) {
        bd.route = "empty";
        return res;
    }
    const Rational delta = bd.delta;
    if (!(delta > 0 && delta < prm.lambda)) throw PreconditionError("delta must lie in (0, lambda)");
    const Rational v = total_volume(items);
    const Rational Kr(static_cast<long>(prm.K));
    std::optional<AbsClassification> cls;
    if (v <= Kr) {
        bd.mu = compute_mu(items, delta, prm.K);
        cls = classify_absolute(items, bd.mu);
    } else {
        bd.log.push_back("volume exceeds K; no guess attempted");
    }
    for (std::size_t k = 1; cls && k <= prm.K; ++k) {
        const Rational kr(static_cast<long>(k));
        if (v > kr) {
            bd.log.push_back("k=" + std::to_string(k) + ": volume exceeds k");
            continue;
        }
        try {
            Packing p;
            std::string route;
            if (total_volume(cls->L) > 64 * delta * Kr) {
                std::array<Rational, 3> vol{total_volume(cls->I_w), total_volume(cls->I_d), total_volume(cls->I_h)};
                int j = 2;
                if (vol[0] < vol[j]) j = 0;
                if (vol[1] < vol[j]) j = 1;
                p = detail::attempt_case1(*cls, j, k, prm, bd.mu, delta, bd.log);
                route = std::string("case1-") + detail::axis_tag(j);
            } else {
                p = detail::attempt_case2(*cls, k, prm, bd.mu, delta);
                route = "case2";
            }
            const std::size_t bound = 13 * k + 3;
            if (p.bin_count() > bound) {
                bd.log.push_back("k=" + std::to_string(k) + ": " + std::to_string(p.bin_count()) +
                                 " bins exceed 13k+3");
                continue;
            }
            if (!verify_packing(p, items, VerifyOptions{true}).feasible) {
                bd.log.push_back("k=" + std::to_string(k) + ": assembled packing failed verification");
                continue;
            }
            res.packing = std::move(p);
            bd.route = route;
            bd.k_accepted = k;
            bd.bins = res.packing.bin_count();
            bd.bin_bound = bound;
            bd.bound_formula = "13k+3";
            return res;
        } catch (const PreconditionError& e) {
            bd.log.push_back("k=" + std::to_string(k) + ": " + e.what());
        } catch (const CapExceededError& e) {
            bd.log.push_back("k=" + std::to_string(k) + ": " + e.what());
        }
    }
    res.packing = volume_bin_pack(items);
    bd.route = "fallback-volume";
    bd.bins = res.packing.bin_count();
    bd.bin_bound = to_size(floor_int(volume_bin_bound(items)));
    bd.bound_formula = "8v+18";
    return res;
}

// ---------------------------------------------------------------- strip packing

struct SpResult {
    Packing strip;
    Rational height = 0;
    std::string route;  // guess, fallback-licheng, empty
    Rational guess = 0;
    std::size_t bins_stacked = 0;
    Rational last_fill = 0;
    std::size_t guesses_tried = 0;
    std::size_t guesses_accepted = 0;
};

inline SpResult solve_absolute_sp(const std::vector<Item>& items, AbsParams prm = {}) {
    SpResult res;
    res.strip.kind = PackingKind::strip;
    res.strip.strip_axis = Axis::z;
    if (items.empty()) {
        res.route = "empty";
        return res;
    }
    for (const auto& it : items)
        if (it.w > 1 || it.d > 1) throw PreconditionError("item '" + it.id + "' exceeds the strip base");
    prm.K = 1;
    const Rational hmax = max_height(items);
    const Rational top = hmax * Rational(static_cast<long>(items.size()));
    const Rational step = 1 + prm.epsilon;
    std::optional<Rational> best;
    for (Rational g = hmax;; g *= step) {
        if (g > top) g = top;
        ++res.guesses_tried;
        std::vector<Item> scaled;
        for (auto it : items) {
            it.h /= g;
            scaled.push_back(it);
        }
        AbsResult r = solve_absolute_bp(scaled, prm);
        if (r.bound.k_accepted) {
            ++res.guesses_accepted;
            ItemTable t(scaled);
            auto tops = bin_tops(r.packing, t);
            std::size_t nb = tops.size();
            std::size_t low = static_cast<std::size_t>(std::min_element(tops.begin(), tops.end()) - tops.begin());
            Rational h = g * (Rational(static_cast<long>(nb - 1)) + tops[low]);
            if (!best || h < *best) {
                best = h;
                res.strip.placements.clear();
                for (auto p : r.packing.placements) {
                    std::size_t pos = p.bin == low ? nb - 1 : (p.bin < low ? p.bin : p.bin - 1);
                    p.z = g * (Rational(static_cast<long>(pos)) + p.z);
                    p.bin = 0;
                    res.strip.placements.push_back(std::move(p));
                }
                res.height = h;
                res.guess = g;
                res.bins_stacked = nb;
                res.last_fill = tops[low];
                res.route = "guess";
            }
        }
        if (g == top) break;
    }
    if (!best) {
        StripResult s = licheng_strip(items, LiChengMode::general);
        res.strip = s.packing;
        res.height = s.height;
        res.route = "fallback-licheng";
    }
    return res;
}

}  // namespace packing3d
