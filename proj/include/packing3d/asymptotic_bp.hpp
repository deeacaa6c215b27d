#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bins.hpp"
#include "harmonic.hpp"
#include "io.hpp"
#include "lp.hpp"
#include "nfdh.hpp"
#include "strip_transform.hpp"
#include "volume_pack.hpp"

namespace packing3d {

// ---------------------------------------------------------------- slicing and classes

struct SliceParams {
    Rational epsilon = 0;
    std::size_t n = 0;
    Rational slice_height = 0;
    Rational delta = 0;
    Rational mu = 0;
};

// one rectangle footprint with its number of slices
struct WeightedRect {
    Rational w, d;
    Integer count;
};

inline Rational multiple_of_24(const Rational& delta) {
    Integer inv = ceil_int(Rational(1) / delta);
    Integer r = inv % 24;
    if (r != 0) inv += 24 - r;
    return frac(Integer(1), inv);
}

inline Rational compute_delta(const std::vector<WeightedRect>& rects, const Rational& epsilon) {
    if (!(epsilon > 0 && epsilon < 1)) throw PreconditionError("epsilon must lie in (0,1)");
    Rational area = 0;
    for (const auto& r : rects) area += r.w * r.d * Rational(r.count);
    Rational delta = multiple_of_24(epsilon);
    // bands are disjoint and each rectangle meets at most two, so 2/epsilon + 1 rounds suffice
    const std::size_t rounds = to_size(floor_int(2 / epsilon)) + 1;
    for (std::size_t j = 0; j < rounds; ++j) {
        Rational lo = pow(delta, 4), band = 0;
        for (const auto& r : rects) {
            bool in = (r.w >= lo && r.w < delta) || (r.d >= lo && r.d < delta);
            if (in) band += r.w * r.d * Rational(r.count);
        }
        if (band <= epsilon * area) return delta;
        delta = multiple_of_24(lo);
    }
    throw PreconditionError("no low-area band found");
}

enum class Class2D { big, vertical, horizontal, tiny, intermediate };

inline const char* class_name(Class2D c) {
    switch (c) {
        case Class2D::big: return "big";
        case Class2D::vertical: return "vertical";
        case Class2D::horizontal: return "horizontal";
        case Class2D::tiny: return "tiny";
        case Class2D::intermediate: return "intermediate";
    }
    return "?";
}

inline Class2D classify_2d(const Rational& w, const Rational& d, const Rational& delta, const Rational& mu) {
    if (w >= delta && d >= delta) return Class2D::big;
    if (d >= delta && w < mu) return Class2D::vertical;
    if (w >= delta && d < mu) return Class2D::horizontal;
    if (w < mu && d < mu) return Class2D::tiny;
    return Class2D::intermediate;
}

struct SlicedInstance {
    std::vector<Item> original;
    std::vector<Item> rounded;
    std::vector<Integer> slices;  // per item
    Integer rect_count = 0;
    SliceParams params;

    std::vector<WeightedRect> rects() const {
        std::vector<WeightedRect> out;
        for (std::size_t i = 0; i < rounded.size(); ++i) out.push_back({rounded[i].w, rounded[i].d, slices[i]});
        return out;
    }
};

inline SlicedInstance build_sliced_2d_instance(const std::vector<Item>& items, const Rational& epsilon) {
    if (items.empty()) throw PreconditionError("empty instance");
    if (!(epsilon > 0 && epsilon <= Rational(1, 2))) throw PreconditionError("epsilon must lie in (0,1/2]");
    Rational inv = 1 / epsilon;
    if (inv.get_den() != 1) throw PreconditionError("1/epsilon must be an integer");
    SlicedInstance s;
    s.original = items;
    s.rounded = round_instance_heights(items, inv.get_num().get_ui()).rounded;
    s.params.epsilon = epsilon;
    s.params.n = items.size();
    s.params.slice_height = epsilon * total_volume(s.rounded) / Rational(static_cast<long>(items.size()));
    for (const auto& it : s.rounded) {
        s.slices.push_back(ceil_int(it.h / s.params.slice_height));
        s.rect_count += s.slices.back();
    }
    s.params.delta = compute_delta(s.rects(), epsilon);
    s.params.mu = pow(s.params.delta, 4);
    return s;
}

// ---------------------------------------------------------------- configurations

enum class ContainerKind { big, vertical, horizontal, tiny };

inline const char* container_kind_name(ContainerKind k) {
    switch (k) {
        case ContainerKind::big: return "big";
        case ContainerKind::vertical: return "vertical";
        case ContainerKind::horizontal: return "horizontal";
        case ContainerKind::tiny: return "tiny";
    }
    return "?";
}

inline ContainerKind parse_container_kind(const std::string& s) {
    if (s == "big") return ContainerKind::big;
    if (s == "vertical") return ContainerKind::vertical;
    if (s == "horizontal") return ContainerKind::horizontal;
    if (s == "tiny") return ContainerKind::tiny;
    throw ParseError("unknown container kind '" + s + "'");
}

struct Container {
    ContainerKind kind = ContainerKind::big;
    Rational x, y, w, d;
};

struct Configuration {
    std::vector<Container> containers;
    Rational multiplicity = 0;        // number of 2D bins, lifted to height ceil(multiplicity * slice)
    std::optional<Integer> height;    // explicit lifted height
    std::string origin;
};

inline bool is_multiple(const Rational& v, const Rational& unit) { return Rational(v / unit).get_den() == 1; }

// empty string when the containers form a valid one-bin layout
inline std::string validate_configuration(const Configuration& c, const Rational& mu) {
    for (std::size_t i = 0; i < c.containers.size(); ++i) {
        const auto& k = c.containers[i];
        if (k.w <= 0 || k.d <= 0 || k.x < 0 || k.y < 0 || k.x + k.w > 1 || k.y + k.d > 1)
            return "container " + std::to_string(i) + " leaves the unit square";
        if ((k.kind == ContainerKind::vertical || k.kind == ContainerKind::tiny) && !is_multiple(k.w, mu))
            return "container " + std::to_string(i) + " width is not a multiple of mu";
        if ((k.kind == ContainerKind::horizontal || k.kind == ContainerKind::tiny) && !is_multiple(k.d, mu))
            return "container " + std::to_string(i) + " depth is not a multiple of mu";
        for (std::size_t j = 0; j < i; ++j) {
            const auto& o = c.containers[j];
            if (k.x < o.x + o.w && o.x < k.x + k.w && k.y < o.y + o.d && o.y < k.y + k.d)
                return "containers " + std::to_string(j) + " and " + std::to_string(i) + " overlap";
        }
    }
    return {};
}

// Demand rows of the configuration LP.
struct ConfigDemands {
    std::vector<std::pair<Rational, Rational>> big_types;  // (w, d)
    std::vector<Rational> big_count;                       // slices per type
    std::vector<Rational> vertical_depths;
    std::vector<Rational> vertical_width;  // total slice width per depth
    std::vector<Rational> horizontal_widths;
    std::vector<Rational> horizontal_depth;
    Rational tiny_area = 0;

    std::size_t rows() const { return big_types.size() + vertical_depths.size() + horizontal_widths.size() + 1; }
};

// coefficient column of configuration c, row order as in ConfigDemands
inline std::vector<Rational> config_column(const Configuration& c, const ConfigDemands& dm) {
    std::vector<Rational> col(dm.rows(), Rational(0));
    const std::size_t vb = dm.big_types.size(), hb = vb + dm.vertical_depths.size(), tb = hb + dm.horizontal_widths.size();
    for (const auto& k : c.containers) {
        switch (k.kind) {
            case ContainerKind::big:
                for (std::size_t t = 0; t < vb; ++t)
                    if (dm.big_types[t].first == k.w && dm.big_types[t].second == k.d) col[t] += 1;
                break;
            case ContainerKind::vertical:
                for (std::size_t t = 0; t < dm.vertical_depths.size(); ++t)
                    if (dm.vertical_depths[t] == k.d) col[vb + t] += k.w;
                break;
            case ContainerKind::horizontal:
                for (std::size_t t = 0; t < dm.horizontal_widths.size(); ++t)
                    if (dm.horizontal_widths[t] == k.w) col[hb + t] += k.d;
                break;
            case ContainerKind::tiny: col[tb] += k.w * k.d; break;
        }
    }
    return col;
}

struct ConfigLpResult {
    LpProblem problem;
    LpSolution solution;
    bool feasible = false;
};

inline ConfigLpResult config_lp_solve(const std::vector<Configuration>& configs, const ConfigDemands& dm) {
    if (configs.empty()) throw PreconditionError("empty configuration set");
    ConfigLpResult r;
    auto& p = r.problem;
    const std::size_t m = dm.rows();
    p.A.assign(m, std::vector<Rational>(configs.size()));
    for (std::size_t j = 0; j < configs.size(); ++j) {
        auto col = config_column(configs[j], dm);
        for (std::size_t i = 0; i < m; ++i) p.A[i][j] = col[i];
    }
    for (const auto& v : dm.big_count) p.b.push_back(v);
    for (const auto& v : dm.vertical_width) p.b.push_back(v);
    for (const auto& v : dm.horizontal_depth) p.b.push_back(v);
    p.b.push_back(dm.tiny_area);
    p.sense.assign(m, RowSense::ge);
    p.c.assign(configs.size(), Rational(1));
    r.solution = lp_minimize(p);
    r.feasible = r.solution.status == LpSolution::Status::optimal;
    return r;
}

// ---------------------------------------------------------------- big items

struct BigAssignment {
    std::vector<std::vector<std::pair<std::size_t, Rational>>> flow;  // per item: (type, height share)
    std::vector<std::optional<std::size_t>> type;                     // single-type items
    std::vector<std::size_t> fractional;
};

// Basic solution of: sum_t x_it = h_i, sum_i x_it <= cap_t, x_it >= 0 on admissible pairs.
inline BigAssignment assign_big_lp(const std::vector<Rational>& heights,
                                   const std::vector<std::vector<std::size_t>>& admissible,
                                   const std::vector<Rational>& capacity) {
    const std::size_t n = heights.size(), T = capacity.size();
    if (admissible.size() != n) throw PreconditionError("admissible list does not match items");
    std::vector<std::map<std::size_t, Rational>> x(n);
    std::vector<Rational> left = capacity;
    for (std::size_t i = 0; i < n; ++i) {
        Rational need = heights[i];
        for (std::size_t t : admissible[i]) {
            if (t >= T) throw PreconditionError("admissible type out of range");
            if (sgn(need) == 0) break;
            Rational a = rmin(need, left[t]);
            if (sgn(a) <= 0) continue;
            x[i][t] += a;
            left[t] -= a;
            need -= a;
        }
        // augmenting paths: item -> type -> item holding flow on it -> ...
        while (sgn(need) > 0) {
            std::vector<long> from_type(T, -2), from_item(n, -2);
            std::vector<std::size_t> queue{i};
            from_item[i] = -1;
            long end = -1;
            for (std::size_t qi = 0; qi < queue.size() && end < 0; ++qi) {
                std::size_t u = queue[qi];
                for (std::size_t t : admissible[u]) {
                    if (from_type[t] != -2) continue;
                    from_type[t] = static_cast<long>(u);
                    if (sgn(left[t]) > 0) {
                        end = static_cast<long>(t);
                        break;
                    }
                    for (std::size_t v = 0; v < n; ++v)
                        if (from_item[v] == -2 && x[v].count(t) && sgn(x[v][t]) > 0) {
                            from_item[v] = static_cast<long>(t);
                            queue.push_back(v);
                        }
                }
            }
            if (end < 0) throw InfeasibleError("big-item capacities cannot hold every item");
            Rational amt = rmin(need, left[end]);
            for (long t = end;;) {
                std::size_t u = static_cast<std::size_t>(from_type[t]);
                if (u == i) break;
                long pt = from_item[u];
                amt = rmin(amt, x[u][static_cast<std::size_t>(pt)]);
                t = pt;
            }
            left[end] -= amt;
            for (long t = end;;) {
                std::size_t u = static_cast<std::size_t>(from_type[t]);
                x[u][static_cast<std::size_t>(t)] += amt;
                if (u == i) break;
                long pt = from_item[u];
                x[u][static_cast<std::size_t>(pt)] -= amt;
                if (sgn(x[u][static_cast<std::size_t>(pt)]) == 0) x[u].erase(static_cast<std::size_t>(pt));
                t = pt;
            }
            need -= amt;
        }
    }
    // cancel cycles in the support until it is a forest
    for (;;) {
        // nodes: items 0..n-1, types n..n+T-1
        std::vector<std::vector<std::size_t>> adj(n + T);
        for (std::size_t i = 0; i < n; ++i)
            for (auto& [t, v] : x[i]) {
                adj[i].push_back(n + t);
                adj[n + t].push_back(i);
            }
        std::vector<long> parent(n + T, -2);
        std::vector<std::size_t> cycle;
        for (std::size_t s = 0; s < n + T && cycle.empty(); ++s) {
            if (parent[s] != -2) continue;
            std::vector<std::pair<std::size_t, std::size_t>> st{{s, 0}};
            parent[s] = -1;
            while (!st.empty() && cycle.empty()) {
                auto& [u, k] = st.back();
                if (k == adj[u].size()) {
                    st.pop_back();
                    continue;
                }
                std::size_t v = adj[u][k++];
                if (static_cast<long>(v) == parent[u]) continue;
                if (parent[v] == -2) {
                    parent[v] = static_cast<long>(u);
                    st.push_back({v, 0});
                } else {
                    // back edge u-v closes a cycle v .. u
                    for (std::size_t w = u; w != v; w = static_cast<std::size_t>(parent[w])) cycle.push_back(w);
                    cycle.push_back(v);
                }
            }
        }
        if (cycle.empty()) break;
        // alternate +/- around the cycle
        auto val = [&](std::size_t a, std::size_t b) -> Rational& {
            return a < n ? x[a][b - n] : x[b][a - n];
        };
        Rational theta;
        bool first = true;
        for (std::size_t k = 1; k < cycle.size() + 1; k += 2) {
            Rational v = val(cycle[k - 1], cycle[k % cycle.size()]);
            if (first || v < theta) theta = v;
            first = false;
        }
        for (std::size_t k = 0; k < cycle.size(); ++k) {
            std::size_t a = cycle[k], b = cycle[(k + 1) % cycle.size()];
            Rational& v = val(a, b);
            if (k % 2 == 0) v -= theta;
            else v += theta;
        }
        for (auto& row : x)
            for (auto it = row.begin(); it != row.end();)
                it = sgn(it->second) == 0 ? row.erase(it) : std::next(it);
    }
    BigAssignment res;
    res.flow.resize(n);
    res.type.assign(n, std::nullopt);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& [t, v] : x[i]) res.flow[i].push_back({t, v});
        if (x[i].size() == 1) res.type[i] = x[i].begin()->first;
        else if (x[i].size() > 1) res.fractional.push_back(i);
    }
    return res;
}

struct StackResult {
    std::vector<std::size_t> container;  // per item, input order
    std::vector<Rational> z;             // local bottom inside the container
    std::vector<Rational> extension;     // per container, height used beyond its own
    Rational gap_total = 0;
};

// heights must be sorted nonincreasingly; containers have integer heights
inline StackResult stack_big(const std::vector<Rational>& heights, const std::vector<Integer>& container_heights,
                             const Rational& epsilon) {
    StackResult r;
    Rational need = 0, have = 0;
    for (const auto& h : heights) need += h;
    for (const auto& h : container_heights) have += Rational(h);
    if (need > have) throw PreconditionError("containers are lower than the items they must hold");
    if (heights.empty()) {
        r.extension.assign(container_heights.size(), Rational(0));
        return r;
    }
    AlignResult a = align_stack_tall(heights, epsilon);
    r.gap_total = a.gap_total;
    std::vector<Rational> start{Rational(0)};
    for (const auto& h : container_heights) start.push_back(start.back() + Rational(h));
    r.extension.assign(container_heights.size(), Rational(0));
    std::size_t j = 0;
    for (std::size_t i = 0; i < heights.size(); ++i) {
        while (j + 1 < container_heights.size() && a.z[i] >= start[j + 1]) ++j;
        Rational local = a.z[i] - start[j];
        r.container.push_back(j);
        r.z.push_back(local);
        Rational over = local + heights[i] - Rational(container_heights[j]);
        if (over > r.extension[j]) r.extension[j] = over;
    }
    return r;
}

// ---------------------------------------------------------------- thin and tiny items

struct Face {
    std::size_t id;      // caller's index
    Rational w, h;       // extent across the container face and height
};

struct FacePlacement {
    std::size_t id, container;
    Rational x, z;
};

struct ThinResult {
    std::vector<FacePlacement> placements;
    std::vector<std::size_t> overflow;   // border crossers
    std::vector<std::size_t> unplaced;   // containers ran out
    std::vector<Rational> extension;     // per container
    std::vector<Rational> overflow_area; // per container, face area of its border crossers
};

inline Rational aligned_up(const Rational& z, std::size_t q) {
    return frac(ceil_int(z * Rational(static_cast<long>(q))), Integer(static_cast<unsigned long>(q)));
}

inline std::size_t tall_q(const Rational& h, const Rational& epsilon) {
    if (h <= epsilon) return 0;
    return unit_fraction_q(h);
}

// Shelf placement of thin items into container faces (width w, integer height).
inline ThinResult place_thin_containers(std::vector<Face> items, const std::vector<std::pair<Rational, Integer>>& containers,
                                        const Rational& mu, const Rational& epsilon) {
    for (const auto& f : items)
        if (f.w >= mu) throw PreconditionError("thin item is not narrower than mu");
    std::stable_sort(items.begin(), items.end(), [](const Face& a, const Face& b) { return a.h > b.h; });
    ThinResult r;
    r.extension.assign(containers.size(), Rational(0));
    r.overflow_area.assign(containers.size(), Rational(0));
    std::size_t next = 0;
    for (std::size_t c = 0; c < containers.size() && next < items.size(); ++c) {
        const Rational W = containers[c].first, H = Rational(containers[c].second);
        std::vector<Rect2D> pick;
        Rational area = 0;
        while (next < items.size() && area < W * H) {
            pick.push_back({next, items[next].w, items[next].h});
            area += items[next].w * items[next].h;
            ++next;
        }
        NfdhResult shelves = nfdh_2d(pick, W + 2 * mu);
        Rational shift = 0, top = 0;
        for (const auto& s : shelves.shelves) {
            if (s.base_z + s.height > H + 2) {
                // beyond the enlarged face: never expected, kept for later containers
                for (const auto& m : s.members) r.unplaced.push_back(items[m.id].id);
                continue;
            }
            Rational base = s.base_z + shift;
            if (std::size_t q = tall_q(s.height, epsilon)) {
                Rational al = aligned_up(base, q);
                shift += al - base;
                base = al;
            }
            for (const auto& m : s.members) {
                if (m.x + m.w > W) {
                    r.overflow.push_back(items[m.id].id);
                    r.overflow_area[c] += m.w * m.h;
                    continue;
                }
                r.placements.push_back({items[m.id].id, c, m.x, base});
                top = rmax(top, base + m.h);
            }
        }
        r.extension[c] = positive_part(top - H);
    }
    for (; next < items.size(); ++next) r.unplaced.push_back(items[next].id);
    return r;
}

struct TinyItem {
    std::size_t id;
    Rational w, d, h;
};

struct TinyPlacement {
    std::size_t id, container;
    Rational x, y, z;
};

struct TinyContainer {
    Rational w, d;
    Integer h;
};

struct TinyResult {
    std::vector<TinyPlacement> placements;
    std::vector<std::size_t> overflow;
    std::vector<std::size_t> unplaced;
    std::vector<Rational> extension;
    std::vector<Rational> overflow_volume;
};

// Layer placement of tiny items; layers are top-aligned, then shifted for tall members.
inline TinyResult place_tiny_containers(std::vector<TinyItem> items, const std::vector<TinyContainer>& containers,
                                        const Rational& mu, const Rational& epsilon) {
    for (const auto& t : items)
        if (t.w >= mu || t.d >= mu) throw PreconditionError("tiny item is not smaller than mu");
    std::stable_sort(items.begin(), items.end(), [](const TinyItem& a, const TinyItem& b) { return a.h > b.h; });
    TinyResult r;
    r.extension.assign(containers.size(), Rational(0));
    r.overflow_volume.assign(containers.size(), Rational(0));
    std::size_t next = 0;
    for (std::size_t c = 0; c < containers.size() && next < items.size(); ++c) {
        const Rational W = containers[c].w, D = containers[c].d, H = Rational(containers[c].h);
        Rational h = 0, shift = 0, top = 0;
        while (next < items.size() && h <= H + 1) {
            std::vector<Rect2D> pick;
            Rational area = 0;
            while (next < items.size() && area < W * D) {
                pick.push_back({next, items[next].w, items[next].d});
                area += items[next].w * items[next].d;
                ++next;
            }
            const Rational tallest = items[pick.front().id].h;
            NfdhResult faces = nfdh_2d(pick, W + 2 * mu);
            Rational base = h + shift;
            if (std::size_t q = tall_q(tallest, epsilon)) {
                Rational al = aligned_up(base, q);
                shift += al - base;
                base = al;
            }
            for (const auto& p : faces.placements()) {
                const TinyItem& t = items[p.id];
                if (p.x + p.w > W || p.y + p.h > D) {
                    r.overflow.push_back(t.id);
                    r.overflow_volume[c] += t.w * t.d * t.h;
                    continue;
                }
                r.placements.push_back({t.id, c, p.x, p.y, base + tallest - t.h});
            }
            top = base + tallest;
            h += tallest;
        }
        r.extension[c] = positive_part(top - H);
    }
    for (; next < items.size(); ++next) r.unplaced.push_back(items[next].id);
    return r;
}

// ---------------------------------------------------------------- container source

enum class ContainerSource { heuristic, explicit_descriptor };

struct ContainerDescriptor {
    std::vector<Configuration> configurations;
};

inline ContainerDescriptor descriptor_from_json(const json& j) {
    ContainerDescriptor d;
    const json& arr = require(j, "configurations");
    if (!arr.is_array()) throw ParseError("'configurations' must be an array");
    for (const json& e : arr) {
        Configuration c;
        if (e.contains("multiplicity")) c.multiplicity = rational_from_json(e.at("multiplicity"));
        if (e.contains("height")) {
            Rational h = rational_from_json(e.at("height"));
            if (h.get_den() != 1 || h < 0) throw ParseError("configuration height must be a non-negative integer");
            c.height = h.get_num();
        }
        if (!e.contains("multiplicity") && !e.contains("height"))
            throw ParseError("configuration needs 'multiplicity' or 'height'");
        c.origin = "explicit";
        const json& ks = require(e, "containers");
        if (!ks.is_array()) throw ParseError("'containers' must be an array");
        for (const json& k : ks) {
            Container ct;
            ct.kind = parse_container_kind(require(k, "kind").get<std::string>());
            ct.x = rational_from_json(require(k, "x"));
            ct.y = rational_from_json(require(k, "y"));
            ct.w = rational_from_json(require(k, "w"));
            ct.d = rational_from_json(require(k, "d"));
            c.containers.push_back(ct);
        }
        d.configurations.push_back(std::move(c));
    }
    return d;
}

inline json descriptor_to_json(const ContainerDescriptor& d) {
    json arr = json::array();
    for (const auto& c : d.configurations) {
        json ks = json::array();
        for (const auto& k : c.containers)
            ks.push_back({{"kind", container_kind_name(k.kind)},
                          {"x", rational_to_json(k.x)},
                          {"y", rational_to_json(k.y)},
                          {"w", rational_to_json(k.w)},
                          {"d", rational_to_json(k.d)}});
        json e{{"multiplicity", rational_to_json(c.multiplicity)}, {"containers", std::move(ks)}};
        if (c.height) e["height"] = rational_to_json(Rational(*c.height));
        arr.push_back(std::move(e));
    }
    return json{{"configurations", std::move(arr)}};
}

inline Rational round_up_grid(const Rational& v, long G) {
    return frac(ceil_int(v * Rational(G)), Integer(G));
}

inline Rational round_down_unit(const Rational& v, const Rational& unit) { return floor_r(v / unit) * unit; }

// Candidate configurations built from the rounded sizes present in the instance.
inline std::vector<Configuration> generate_configurations(const ConfigDemands& dm, const Rational& mu) {
    std::vector<Configuration> out;
    auto add = [&](Configuration c, const char* origin) {
        c.origin = origin;
        if (!c.containers.empty() && validate_configuration(c, mu).empty()) out.push_back(std::move(c));
    };
    // single-type grids
    for (const auto& [w, d] : dm.big_types) {
        Configuration c;
        std::size_t cols = to_size(floor_int(1 / w)), rows = to_size(floor_int(1 / d));
        for (std::size_t i = 0; i < cols; ++i)
            for (std::size_t j = 0; j < rows; ++j)
                c.containers.push_back({ContainerKind::big, w * Rational(static_cast<long>(i)),
                                        d * Rational(static_cast<long>(j)), w, d});
        add(std::move(c), "grid");
    }
    // greedy shelves over the remaining demand, deepest types first
    {
        std::vector<std::size_t> order(dm.big_types.size());
        for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return dm.big_types[a].second > dm.big_types[b].second; });
        std::vector<Rational> rest = dm.big_count;
        for (std::size_t iter = 0; iter < dm.big_types.size(); ++iter) {
            Configuration c;
            std::vector<Rational> used(rest.size(), Rational(0));
            Rational y = 0;
            for (std::size_t oi = 0; oi < order.size();) {
                std::size_t t = order[oi];
                if (rest[t] - used[t] <= 0 || y + dm.big_types[t].second > 1) {
                    ++oi;
                    continue;
                }
                const Rational depth = dm.big_types[t].second;
                Rational x = 0;
                for (std::size_t oj = oi; oj < order.size(); ++oj) {
                    std::size_t u = order[oj];
                    const auto& [w, d] = dm.big_types[u];
                    while (rest[u] - used[u] > 0 && x + w <= 1) {
                        c.containers.push_back({ContainerKind::big, x, y, w, d});
                        used[u] += 1;
                        x += w;
                    }
                }
                y += depth;
            }
            if (c.containers.empty()) break;
            Rational tiny_d = round_down_unit(1 - y, mu);
            if (tiny_d > 0) c.containers.push_back({ContainerKind::tiny, 0, y, 1, tiny_d});
            // copies until the first used type is exhausted
            Rational copies;
            bool first = true;
            for (std::size_t t = 0; t < rest.size(); ++t)
                if (used[t] > 0) {
                    Rational q = rest[t] / used[t];
                    if (first || q < copies) copies = q;
                    first = false;
                }
            for (std::size_t t = 0; t < rest.size(); ++t) rest[t] = positive_part(rest[t] - copies * used[t]);
            add(std::move(c), "shelf");
            bool any = false;
            for (const auto& v : rest) any = any || v > 0;
            if (!any) break;
        }
    }
    for (const auto& d : dm.vertical_depths) {
        Configuration c;
        std::size_t rows = to_size(floor_int(1 / d));
        for (std::size_t j = 0; j < rows; ++j)
            c.containers.push_back({ContainerKind::vertical, 0, d * Rational(static_cast<long>(j)), 1, d});
        add(std::move(c), "vertical");
    }
    for (const auto& w : dm.horizontal_widths) {
        Configuration c;
        std::size_t cols = to_size(floor_int(1 / w));
        for (std::size_t i = 0; i < cols; ++i)
            c.containers.push_back({ContainerKind::horizontal, w * Rational(static_cast<long>(i)), 0, w, 1});
        add(std::move(c), "horizontal");
    }
    {
        Configuration c;
        c.containers.push_back({ContainerKind::tiny, 0, 0, 1, 1});
        add(std::move(c), "tiny");
    }
    return out;
}

// ---------------------------------------------------------------- pipeline

struct AsymOptions {
    Rational epsilon{1, 4};
    ContainerSource source = ContainerSource::heuristic;
    std::optional<ContainerDescriptor> descriptor;
    long grid = 8;  // big widths/depths and thin sizes rounded up to multiples of 1/grid
};

struct AsymReport {
    std::string route;  // pipeline, fallback-volume, empty
    SliceParams params;
    std::string rect_count = "0";
    std::map<std::string, std::size_t> class_counts;
    std::size_t configurations_generated = 0;
    std::size_t configurations_used = 0;  // k-hat
    Integer lifted_height = 0;            // B, total of the lifted integer heights
    Rational lp_objective = 0;
    std::size_t lp_nonzeros = 0;
    std::size_t lp_rows = 0;
    std::size_t big_types = 0;
    std::size_t fractional_big = 0;
    Rational gap_total = 0;
    std::map<std::string, Rational> extension;        // per stage, summed over containers
    std::map<std::string, Rational> max_extension;
    std::map<std::string, Rational> overflow_volume;  // per route to the volume packer
    Rational thin_overflow_bound = 0;
    Rational tiny_overflow_bound = 0;
    Rational intermediate_bound = 0;
    bool accounting_holds = true;
    bool tall_not_sliced = true;
    Rational max_cut_height = 0;
    std::size_t core_bins = 0;
    std::size_t layer_bins = 0;
    std::size_t overflow_bins = 0;
    std::size_t bins = 0;
    std::vector<std::string> log;
    ContainerDescriptor descriptor;  // configurations with their multiplicities
};

struct AsymResult {
    Packing packing;
    AsymReport report;
};

namespace detail {

struct LiftedContainer {
    std::size_t config;
    Container box;
    Integer height;
    Rational top = 0;  // used height
};

}  // namespace detail

inline AsymResult solve_asymptotic_bp(const std::vector<Item>& items, const AsymOptions& opt = {}) {
    AsymResult res;
    auto& rep = res.report;
    res.packing.kind = PackingKind::bins;
    for (const auto& it : items)
        if (it.w > 1 || it.d > 1 || it.h > 1) throw PreconditionError("item '" + it.id + "' exceeds a unit bin");
    if (!(opt.epsilon > 0 && opt.epsilon <= Rational(1, 4))) throw PreconditionError("epsilon must lie in (0,1/4]");
    if (items.empty()) {
        rep.route = "empty";
        return res;
    }
    const Rational eps = opt.epsilon;
    SlicedInstance sl = build_sliced_2d_instance(items, eps);
    rep.params = sl.params;
    rep.rect_count = sl.rect_count.get_str();
    const Rational s = sl.params.slice_height, delta = sl.params.delta, mu = sl.params.mu;
    const std::size_t n = items.size();

    std::vector<Class2D> cls(n);
    for (std::size_t i = 0; i < n; ++i) {
        cls[i] = classify_2d(sl.rounded[i].w, sl.rounded[i].d, delta, mu);
        ++rep.class_counts[class_name(cls[i])];
    }
    auto slices = [&](std::size_t i) { return Rational(sl.slices[i]); };

    // configurations and lifted heights
    std::vector<Configuration> configs;
    if (opt.source == ContainerSource::explicit_descriptor) {
        if (!opt.descriptor) throw PreconditionError("explicit container source needs a descriptor");
        configs = opt.descriptor->configurations;
        for (std::size_t c = 0; c < configs.size(); ++c) {
            std::string why = validate_configuration(configs[c], mu);
            if (!why.empty()) throw PreconditionError("configuration " + std::to_string(c) + ": " + why);
        }
        rep.configurations_generated = configs.size();
    } else {
        ConfigDemands dm;
        std::map<std::pair<Rational, Rational>, Rational> big;
        std::map<Rational, Rational> vert, hor;
        for (std::size_t i = 0; i < n; ++i) {
            const Item& it = sl.rounded[i];
            switch (cls[i]) {
                case Class2D::big:
                    big[{round_up_grid(it.w, opt.grid), round_up_grid(it.d, opt.grid)}] += slices(i);
                    break;
                case Class2D::vertical: vert[round_up_grid(it.d, opt.grid)] += slices(i) * it.w; break;
                case Class2D::horizontal: hor[round_up_grid(it.w, opt.grid)] += slices(i) * it.d; break;
                case Class2D::tiny: dm.tiny_area += slices(i) * it.w * it.d; break;
                case Class2D::intermediate: break;
            }
        }
        for (auto& [k, v] : big) {
            dm.big_types.push_back(k);
            dm.big_count.push_back(v);
        }
        for (auto& [k, v] : vert) {
            dm.vertical_depths.push_back(k);
            dm.vertical_width.push_back(v);
        }
        for (auto& [k, v] : hor) {
            dm.horizontal_widths.push_back(k);
            dm.horizontal_depth.push_back(v);
        }
        configs = generate_configurations(dm, mu);
        rep.configurations_generated = configs.size();
        ConfigLpResult lp = config_lp_solve(configs, dm);
        if (!lp.feasible) throw InfeasibleError("generated configurations cannot cover the demands");
        rep.lp_objective = lp.solution.objective;
        rep.lp_nonzeros = nonzero_count(lp.solution.x);
        rep.lp_rows = dm.rows();
        for (std::size_t c = 0; c < configs.size(); ++c) configs[c].multiplicity = lp.solution.x[c];
    }
    std::vector<Integer> H(configs.size());
    for (std::size_t c = 0; c < configs.size(); ++c) {
        H[c] = configs[c].height ? *configs[c].height : ceil_int(configs[c].multiplicity * s);
        rep.lifted_height += H[c];
        if (H[c] > 0) {
            ++rep.configurations_used;
            rep.descriptor.configurations.push_back(configs[c]);
        }
    }

    std::vector<detail::LiftedContainer> lifted;
    for (std::size_t c = 0; c < configs.size(); ++c)
        if (H[c] > 0)
            for (const auto& k : configs[c].containers) lifted.push_back({c, k, H[c]});

    // per item: container index into `lifted` and local coordinates (rounded heights)
    struct Spot {
        std::size_t lc;
        Rational x, y, z;
    };
    std::vector<std::optional<Spot>> spot(n);
    std::vector<std::size_t> to_volume;
    auto overflow = [&](std::size_t i, const char* why) {
        to_volume.push_back(i);
        rep.overflow_volume[why] += sl.original[i].volume();
    };

    // big items
    {
        std::vector<std::pair<Rational, Rational>> types;
        std::map<std::pair<Rational, Rational>, std::size_t> type_index;
        for (const auto& lc : lifted)
            if (lc.box.kind == ContainerKind::big && !type_index.count({lc.box.w, lc.box.d})) {
                type_index[{lc.box.w, lc.box.d}] = types.size();
                types.push_back({lc.box.w, lc.box.d});
            }
        rep.big_types = types.size();
        std::vector<Rational> cap(types.size(), Rational(0));
        std::vector<std::vector<std::size_t>> by_type(types.size());
        for (std::size_t k = 0; k < lifted.size(); ++k)
            if (lifted[k].box.kind == ContainerKind::big) {
                std::size_t t = type_index[{lifted[k].box.w, lifted[k].box.d}];
                cap[t] += Rational(lifted[k].height);
                by_type[t].push_back(k);
            }
        std::vector<std::size_t> bigs;
        std::vector<Rational> hs;
        std::vector<std::vector<std::size_t>> adm;
        for (std::size_t i = 0; i < n; ++i) {
            if (cls[i] != Class2D::big) continue;
            std::vector<std::size_t> a;
            for (std::size_t t = 0; t < types.size(); ++t)
                if (types[t].first >= sl.rounded[i].w && types[t].second >= sl.rounded[i].d) a.push_back(t);
            std::stable_sort(a.begin(), a.end(), [&](std::size_t p, std::size_t q) {
                return types[p].first * types[p].second < types[q].first * types[q].second;
            });
            if (a.empty()) {
                overflow(i, "unplaced");
                continue;
            }
            bigs.push_back(i);
            hs.push_back(sl.rounded[i].h);
            adm.push_back(std::move(a));
        }
        BigAssignment asg;
        try {
            asg = assign_big_lp(hs, adm, cap);
        } catch (const InfeasibleError& e) {
            rep.log.push_back(std::string("big assignment: ") + e.what());
            for (std::size_t i : bigs) overflow(i, "unplaced");
            bigs.clear();
            asg.type.clear();
        }
        rep.fractional_big = asg.fractional.size();
        for (std::size_t f : asg.fractional) overflow(bigs[f], "fractional");
        for (std::size_t t = 0; t < types.size(); ++t) {
            std::vector<std::size_t> members;
            for (std::size_t b = 0; b < asg.type.size(); ++b)
                if (asg.type[b] && *asg.type[b] == t) members.push_back(bigs[b]);
            std::stable_sort(members.begin(), members.end(),
                             [&](std::size_t p, std::size_t q) { return sl.rounded[p].h > sl.rounded[q].h; });
            std::vector<Rational> mh;
            for (std::size_t i : members) mh.push_back(sl.rounded[i].h);
            std::vector<Integer> ch;
            for (std::size_t k : by_type[t]) ch.push_back(lifted[k].height);
            StackResult st = stack_big(mh, ch, eps);
            rep.gap_total += st.gap_total;
            for (std::size_t m = 0; m < members.size(); ++m) {
                std::size_t k = by_type[t][st.container[m]];
                spot[members[m]] = Spot{k, lifted[k].box.x, lifted[k].box.y, st.z[m]};
                lifted[k].top = rmax(lifted[k].top, st.z[m] + mh[m]);
            }
            for (std::size_t c = 0; c < st.extension.size(); ++c) {
                rep.extension["big"] += st.extension[c];
                rep.max_extension["big"] = rmax(rep.max_extension["big"], st.extension[c]);
            }
        }
    }

    // vertical (faces in xz) and horizontal (faces in yz) items
    for (int dir = 0; dir < 2; ++dir) {
        const ContainerKind kind = dir == 0 ? ContainerKind::vertical : ContainerKind::horizontal;
        const Class2D want = dir == 0 ? Class2D::vertical : Class2D::horizontal;
        const char* stage = dir == 0 ? "vertical" : "horizontal";
        // long side of the container selects the group
        auto along = [&](const Container& k) { return dir == 0 ? k.d : k.w; };
        auto across = [&](const Container& k) { return dir == 0 ? k.w : k.d; };
        std::map<Rational, std::vector<std::size_t>> groups;  // long side -> lifted containers
        for (std::size_t k = 0; k < lifted.size(); ++k)
            if (lifted[k].box.kind == kind) groups[along(lifted[k].box)].push_back(k);
        std::map<Rational, std::vector<Face>> members;
        for (std::size_t i = 0; i < n; ++i) {
            if (cls[i] != want) continue;
            const Item& it = sl.rounded[i];
            Rational len = dir == 0 ? it.d : it.w, thin = dir == 0 ? it.w : it.d;
            auto g = groups.lower_bound(len);
            if (g == groups.end()) {
                overflow(i, "unplaced");
                continue;
            }
            members[g->first].push_back({i, thin, it.h});
        }
        for (auto& [len, faces] : members) {
            const auto& ks = groups[len];
            std::vector<std::pair<Rational, Integer>> cf;
            for (std::size_t k : ks) cf.push_back({across(lifted[k].box), lifted[k].height});
            ThinResult tr = place_thin_containers(faces, cf, mu, eps);
            for (const auto& p : tr.placements) {
                std::size_t k = ks[p.container];
                const Container& b = lifted[k].box;
                spot[p.id] = dir == 0 ? Spot{k, b.x + p.x, b.y, p.z} : Spot{k, b.x, b.y + p.x, p.z};
                lifted[k].top = rmax(lifted[k].top, p.z + sl.rounded[p.id].h);
            }
            for (std::size_t i : tr.overflow) overflow(i, dir == 0 ? "vertical-border" : "horizontal-border");
            for (std::size_t i : tr.unplaced) overflow(i, "unplaced");
            for (std::size_t c = 0; c < ks.size(); ++c) {
                const Container& b = lifted[ks[c]].box;
                Rational bound = 3 * mu * along(b) * (Rational(lifted[ks[c]].height) + 2);
                rep.thin_overflow_bound += bound;
                if (tr.overflow_area[c] * along(b) > bound) rep.accounting_holds = false;
                rep.extension[stage] += tr.extension[c];
                rep.max_extension[stage] = rmax(rep.max_extension[stage], tr.extension[c]);
            }
        }
    }

    // tiny items
    {
        std::vector<std::size_t> ks;
        std::vector<TinyContainer> tc;
        for (std::size_t k = 0; k < lifted.size(); ++k)
            if (lifted[k].box.kind == ContainerKind::tiny) {
                ks.push_back(k);
                tc.push_back({lifted[k].box.w, lifted[k].box.d, lifted[k].height});
            }
        std::vector<TinyItem> ti;
        for (std::size_t i = 0; i < n; ++i)
            if (cls[i] == Class2D::tiny) ti.push_back({i, sl.rounded[i].w, sl.rounded[i].d, sl.rounded[i].h});
        TinyResult tr = place_tiny_containers(ti, tc, mu, eps);
        for (const auto& p : tr.placements) {
            std::size_t k = ks[p.container];
            const Container& b = lifted[k].box;
            spot[p.id] = Spot{k, b.x + p.x, b.y + p.y, p.z};
            lifted[k].top = rmax(lifted[k].top, p.z + sl.rounded[p.id].h);
        }
        for (std::size_t i : tr.overflow) overflow(i, "tiny-border");
        for (std::size_t i : tr.unplaced) overflow(i, "unplaced");
        for (std::size_t c = 0; c < ks.size(); ++c) {
            const Container& b = lifted[ks[c]].box;
            Rational bound = 3 * mu * (b.w + b.d + 4 * mu) * (Rational(lifted[ks[c]].height) + 2);
            rep.tiny_overflow_bound += bound;
            if (tr.overflow_volume[c] > bound) rep.accounting_holds = false;
            rep.extension["tiny"] += tr.extension[c];
            rep.max_extension["tiny"] = rmax(rep.max_extension["tiny"], tr.extension[c]);
        }
    }

    // intermediates
    {
        Rational all = 0, inter = 0;
        for (std::size_t i = 0; i < n; ++i) {
            Rational a = sl.rounded[i].w * sl.rounded[i].d * slices(i) * s;
            all += a;
            if (cls[i] == Class2D::intermediate) {
                inter += a;
                overflow(i, "intermediate");
            }
        }
        rep.intermediate_bound = eps * all;
        if (inter > rep.intermediate_bound) rep.accounting_holds = false;
    }

    // configurations stacked at integer offsets in one strip
    std::vector<Rational> col_top(configs.size(), Rational(0));
    for (std::size_t c = 0; c < configs.size(); ++c) col_top[c] = Rational(H[c]);
    for (const auto& lc : lifted) col_top[lc.config] = rmax(col_top[lc.config], lc.top);
    std::vector<Rational> offset(configs.size(), Rational(0));
    Rational z0 = 0;
    for (std::size_t c = 0; c < configs.size(); ++c) {
        if (H[c] == 0) continue;
        offset[c] = z0;
        z0 = ceil_r(z0 + col_top[c]);
    }
    Packing strip;
    strip.kind = PackingKind::strip;
    strip.strip_axis = Axis::z;
    for (std::size_t i = 0; i < n; ++i)
        if (spot[i]) {
            const auto& sp = *spot[i];
            strip.placements.push_back({sl.rounded[i].id, 0, sp.x, sp.y, offset[lifted[sp.lc].config] + sp.z, {}});
        }
    ItemTable rounded_table(sl.rounded);
    TallCheck tall = check_tall_not_sliced(strip, rounded_table, eps);
    rep.tall_not_sliced = tall.ok;
    if (!tall.ok) {
        rep.log.push_back("tall item sliced before the cut: " + tall.witnesses.front().item_id);
        res.packing = volume_bin_pack(items);
        rep.route = "fallback-volume";
        rep.bins = res.packing.bin_count();
        return res;
    }
    CutResult cut = cut_strip_to_bins(strip, rounded_table, CutMode::layers(eps));
    for (const auto& set : cut.sliced_item_sets)
        for (const auto& id : set) rep.max_cut_height = rmax(rep.max_cut_height, rounded_table.at(id).h);
    rep.core_bins = cut.core_bins;
    rep.layer_bins = cut.extra_bins_used;

    BinAssembler out;
    out.append(cut.bins);
    if (!to_volume.empty()) {
        std::vector<Item> rest;
        for (std::size_t i : to_volume) rest.push_back(sl.original[i]);
        Packing vp = volume_bin_pack(rest);
        rep.overflow_bins = vp.bin_count();
        out.append(vp);
    }
    res.packing = out.finish();
    rep.route = "pipeline";
    if (!verify_packing(res.packing, items, VerifyOptions{true}).feasible) {
        rep.log.push_back("assembled packing failed verification");
        res.packing = volume_bin_pack(items);
        rep.route = "fallback-volume";
    }
    rep.bins = res.packing.bin_count();
    return res;
}

inline json asym_report_to_json(const AsymReport& r) {
    auto rat_map = [](const std::map<std::string, Rational>& m) {
        json o = json::object();
        for (const auto& [k, v] : m) o[k] = rational_to_json(v);
        return o;
    };
    json classes = json::object();
    for (const auto& [k, v] : r.class_counts) classes[k] = v;
    return json{{"route", r.route},
                {"epsilon", rational_to_json(r.params.epsilon)},
                {"slice_height", rational_to_json(r.params.slice_height)},
                {"delta", rational_to_json(r.params.delta)},
                {"mu", rational_to_json(r.params.mu)},
                {"rect_count", r.rect_count},
                {"classes", classes},
                {"configurations_generated", r.configurations_generated},
                {"configurations_used", r.configurations_used},
                {"lifted_height", r.lifted_height.get_str()},
                {"lp_objective", rational_to_json(r.lp_objective)},
                {"lp_nonzeros", r.lp_nonzeros},
                {"lp_rows", r.lp_rows},
                {"big_types", r.big_types},
                {"fractional_big", r.fractional_big},
                {"gap_total", rational_to_json(r.gap_total)},
                {"extension", rat_map(r.extension)},
                {"max_extension", rat_map(r.max_extension)},
                {"overflow_volume", rat_map(r.overflow_volume)},
                {"thin_overflow_bound", rational_to_json(r.thin_overflow_bound)},
                {"tiny_overflow_bound", rational_to_json(r.tiny_overflow_bound)},
                {"intermediate_bound", rational_to_json(r.intermediate_bound)},
                {"accounting_holds", r.accounting_holds},
                {"tall_not_sliced", r.tall_not_sliced},
                {"max_cut_height", rational_to_json(r.max_cut_height)},
                {"core_bins", r.core_bins},
                {"layer_bins", r.layer_bins},
                {"overflow_bins", r.overflow_bins},
                {"bins", r.bins},
                {"log", r.log},
                {"descriptor", descriptor_to_json(r.descriptor)}};
}

}  // namespace packing3d
