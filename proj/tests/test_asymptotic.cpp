#include "support.hpp"

#include <set>

#include "packing3d/asymptotic_bp.hpp"
#include "packing3d/generators.hpp"

using namespace p3t;

namespace {

const Rational kMu = pow(R(1, 24), 4);

Configuration config(std::vector<Container> ks, const Rational& mult) {
    Configuration c;
    c.containers = std::move(ks);
    c.multiplicity = mult;
    return c;
}

}  // namespace

TEST(ComputeDelta, FirstBandEmpty) {
    EXPECT_EQ(compute_delta({}, R(1, 4)), R(1, 24));
    EXPECT_EQ(compute_delta({{R(1, 2), R(1, 2), 3}}, R(1, 6)), R(1, 24));
    EXPECT_EQ(multiple_of_24(R(1, 30)), R(1, 48));
}

TEST(ComputeDelta, HeavyFirstBand) {
    // width 1/48 lies in [delta^4, delta) for delta = 1/24 and carries almost all area
    std::vector<WeightedRect> rects{{R(1, 48), 1, 1000}, {R(1, 2), R(1, 2), 1}};
    EXPECT_EQ(compute_delta(rects, R(1, 4)), pow(R(1, 24), 4));
}

TEST(Slicing, CountsAndRounding) {
    std::vector<Item> items{box("a", R(1, 2), R(1, 2), R(1, 4)), box("b", R(1, 3), R(1, 2), R(3, 5)),
                            box("c", R(1, 2), R(1, 5), R(1, 5))};
    auto s = build_sliced_2d_instance(items, R(1, 4));
    // heights above 1/4 become unit fractions, the rest stay
    EXPECT_EQ(s.rounded[0].h, R(1, 4));
    EXPECT_EQ(s.rounded[1].h, 1);
    EXPECT_EQ(s.rounded[2].h, R(1, 5));
    EXPECT_EQ(s.params.slice_height, R(1, 4) * total_volume(s.rounded) / 3);
    Integer total = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        EXPECT_EQ(s.slices[i], ceil_int(s.rounded[i].h / s.params.slice_height));
        EXPECT_GE(Rational(s.slices[i]) * s.params.slice_height, s.rounded[i].h);
        total += s.slices[i];
    }
    EXPECT_EQ(s.rect_count, total);
    EXPECT_EQ(s.params.mu, pow(s.params.delta, 4));
    EXPECT_THROW(build_sliced_2d_instance({}, R(1, 4)), PreconditionError);
}

TEST(Slicing, CeilArithmetic) {
    EXPECT_EQ(ceil_int(R(1, 4) / R(1, 10)), 3);
    EXPECT_EQ(ceil_int(R(1, 5) / R(1, 10)), 2);
}

TEST(Slicing, RandomRectCount) {
    Rng rng(12);
    for (int t = 0; t < 20; ++t) {
        std::vector<Item> items;
        for (int i = 0; i < 30; ++i) items.push_back(random_item(rng, Family::uniform, i));
        auto s = build_sliced_2d_instance(items, R(1, 6));
        Rational v = 0;
        for (const auto& it : items) v += it.w * it.d * harmonic_round(it.h, 6);
        Rational sh = R(1, 6) * v / 30;
        Integer total = 0;
        for (const auto& it : items) total += ceil_int(harmonic_round(it.h, 6) / sh);
        EXPECT_EQ(s.rect_count, total);
    }
}

TEST(Class2D, Partition) {
    const Rational delta = R(1, 24), mu = kMu;
    EXPECT_EQ(classify_2d(R(1, 2), R(1, 2), delta, mu), Class2D::big);
    EXPECT_EQ(classify_2d(mu / 2, R(1, 2), delta, mu), Class2D::vertical);
    EXPECT_EQ(classify_2d(R(1, 2), mu / 2, delta, mu), Class2D::horizontal);
    EXPECT_EQ(classify_2d(mu / 2, mu / 2, delta, mu), Class2D::tiny);
    EXPECT_EQ(classify_2d(mu, R(1, 2), delta, mu), Class2D::intermediate);
    Rng rng(2);
    std::vector<Rational> pool{mu / 3, mu, 2 * mu, delta / 2, delta, R(1, 2), 1};
    for (const auto& w : pool)
        for (const auto& d : pool) {
            int hits = 0;
            hits += w >= delta && d >= delta;
            hits += d >= delta && w < mu;
            hits += w >= delta && d < mu;
            hits += w < mu && d < mu;
            hits += (w >= mu && w < delta) || (d >= mu && d < delta);
            EXPECT_EQ(hits, 1);
        }
}

TEST(Configurations, Validation) {
    auto ok = config({{ContainerKind::big, 0, 0, R(1, 2), 1}, {ContainerKind::big, R(1, 2), 0, R(1, 2), 1}}, 1);
    EXPECT_TRUE(validate_configuration(ok, kMu).empty());
    auto overlap = config({{ContainerKind::big, 0, 0, R(1, 2), 1}, {ContainerKind::big, R(1, 4), 0, R(1, 2), 1}}, 1);
    EXPECT_FALSE(validate_configuration(overlap, kMu).empty());
    auto outside = config({{ContainerKind::big, R(3, 4), 0, R(1, 2), 1}}, 1);
    EXPECT_FALSE(validate_configuration(outside, kMu).empty());
    auto badtiny = config({{ContainerKind::tiny, 0, 0, kMu / 2, 1}}, 1);
    EXPECT_FALSE(validate_configuration(badtiny, kMu).empty());
}

TEST(ConfigLp, ThreeConfigs) {
    ConfigDemands dm;
    dm.big_types = {{R(1, 2), 1}, {R(1, 2), R(1, 2)}};
    dm.big_count = {3, 2};
    std::vector<Configuration> cs{config({{ContainerKind::big, 0, 0, R(1, 2), 1}}, 0),
                                  config({{ContainerKind::big, 0, 0, R(1, 2), R(1, 2)}}, 0),
                                  config({{ContainerKind::big, 0, 0, R(1, 2), 1},
                                          {ContainerKind::big, R(1, 2), 0, R(1, 2), R(1, 2)}},
                                         0)};
    auto r = config_lp_solve(cs, dm);
    ASSERT_TRUE(r.feasible);
    EXPECT_EQ(r.solution.objective, 3);
    EXPECT_TRUE(lp_satisfied(r.problem, r.solution.x));
    EXPECT_LE(nonzero_count(r.solution.x), dm.rows());
}

TEST(ConfigLp, ZeroAndSingle) {
    ConfigDemands dm;
    dm.big_types = {{R(1, 2), R(1, 2)}};
    dm.big_count = {0};
    std::vector<Configuration> cs{config({{ContainerKind::big, 0, 0, R(1, 2), R(1, 2)},
                                          {ContainerKind::tiny, R(1, 2), 0, R(1, 2), R(1, 2)}},
                                         0)};
    EXPECT_EQ(config_lp_solve(cs, dm).solution.objective, 0);
    dm.big_count = {7};
    dm.tiny_area = R(7, 4);
    EXPECT_EQ(config_lp_solve(cs, dm).solution.objective, 7);
    dm.vertical_depths = {R(1, 2)};
    dm.vertical_width = {1};
    EXPECT_FALSE(config_lp_solve(cs, dm).feasible);
    EXPECT_THROW(config_lp_solve({}, dm), PreconditionError);
}

TEST(ConfigLp, RandomGeneratedSetsAreBasic) {
    Rng rng(31);
    for (int t = 0; t < 100; ++t) {
        ConfigDemands dm;
        std::set<std::pair<Rational, Rational>> seen;
        int T = rng.uniform_int(1, 4);
        for (int i = 0; i < T; ++i) {
            std::pair<Rational, Rational> ty{rng.grid(8, 1, 8), rng.grid(8, 1, 8)};
            if (!seen.insert(ty).second) continue;
            dm.big_types.push_back(ty);
            dm.big_count.push_back(rng.grid(2, 1, 40));
        }
        if (rng.coin()) {
            dm.vertical_depths = {rng.grid(8, 1, 8)};
            dm.vertical_width = {rng.grid(4, 1, 8)};
        }
        dm.tiny_area = rng.grid(4, 0, 4);
        auto cs = generate_configurations(dm, kMu);
        for (const auto& c : cs) EXPECT_TRUE(validate_configuration(c, kMu).empty());
        auto r = config_lp_solve(cs, dm);
        ASSERT_TRUE(r.feasible);
        EXPECT_TRUE(lp_satisfied(r.problem, r.solution.x));
        EXPECT_LE(nonzero_count(r.solution.x), dm.rows());
    }
}

TEST(AssignBig, Trivial) {
    auto one = assign_big_lp({R(1, 2)}, {{0}}, {1});
    ASSERT_TRUE(one.type[0].has_value());
    EXPECT_EQ(*one.type[0], 0u);
    EXPECT_TRUE(one.fractional.empty());
    auto none = assign_big_lp({}, {}, {1, 2});
    EXPECT_TRUE(none.type.empty());
    EXPECT_THROW(assign_big_lp({2}, {{0}}, {1}), InfeasibleError);
}

TEST(AssignBig, TightShared) {
    // two items of height 3/4 over two types of capacity 3/4 each; greedy fill forces an augmenting path
    auto r = assign_big_lp({R(1, 2), Rational(1)}, {{0, 1}, {0}}, {Rational(1), R(1, 2)});
    EXPECT_LE(r.fractional.size(), 2u);
    Rational col0 = 0;
    for (const auto& row : r.flow)
        for (const auto& [t, v] : row)
            if (t == 0) col0 += v;
    EXPECT_LE(col0, 1);
    ASSERT_TRUE(r.type[1].has_value());
    EXPECT_EQ(*r.type[1], 0u);
}

TEST(AssignBig, RandomBasic) {
    Rng rng(6);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = rng.uniform_int(0, 12), T = rng.uniform_int(1, 4);
        std::vector<Rational> h, cap(T, Rational(0));
        std::vector<std::vector<std::size_t>> adm(n);
        Rational total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            h.push_back(rng.grid(12, 1, 12));
            total += h.back();
            for (std::size_t k = 0; k < T; ++k)
                if (rng.coin(0.6)) adm[i].push_back(k);
            if (adm[i].empty()) adm[i].push_back(rng.uniform_int(0, T - 1));
            // make its first type large enough on its own
            cap[adm[i][0]] += h.back();
        }
        // squeeze capacities while staying feasible
        for (auto& c : cap) c = c * R(5, 4);
        BigAssignment r;
        try {
            r = assign_big_lp(h, adm, cap);
        } catch (const InfeasibleError&) {
            ADD_FAILURE() << "instance " << t;
            continue;
        }
        EXPECT_LE(r.fractional.size(), T);
        std::vector<Rational> used(T, Rational(0));
        for (std::size_t i = 0; i < n; ++i) {
            Rational s = 0;
            for (const auto& [k, v] : r.flow[i]) {
                EXPECT_GT(v, 0);
                EXPECT_NE(std::find(adm[i].begin(), adm[i].end(), k), adm[i].end());
                s += v;
                used[k] += v;
            }
            EXPECT_EQ(s, h[i]);
        }
        for (std::size_t k = 0; k < T; ++k) EXPECT_LE(used[k], cap[k]);
    }
}

TEST(StackBig, OneContainer) {
    auto r = stack_big({1, R(1, 2), R(1, 2)}, {2}, R(1, 4));
    EXPECT_EQ(r.z, (std::vector<Rational>{0, 1, R(3, 2)}));
    EXPECT_EQ(r.extension[0], 0);
    EXPECT_TRUE(stack_big({}, {1}, R(1, 4)).z.empty());
    EXPECT_THROW(stack_big({1, 1}, {1}, R(1, 4)), PreconditionError);
}

TEST(StackBig, AlignedCut) {
    auto r = stack_big({R(1, 2), R(1, 3), R(1, 3)}, {1, 1}, R(1, 4));
    EXPECT_EQ(r.container, (std::vector<std::size_t>{0, 0, 1}));
    EXPECT_EQ(r.z, (std::vector<Rational>{0, R(2, 3), 0}));
    EXPECT_EQ(r.gap_total, R(1, 6));
}

TEST(StackBig, ShortItemStaysAtop) {
    auto r = stack_big({R(1, 5), R(1, 5), R(1, 5), R(1, 5), R(1, 5), R(1, 5)}, {1, 1}, R(1, 4));
    // [4/5, 1] ends on the plane; nothing crosses it with six fifths
    EXPECT_EQ(r.container[5], 1u);
    auto s = stack_big({R(1, 4), R(1, 5), R(1, 5), R(1, 5), R(1, 5)}, {1, 1}, R(1, 4));
    // the item starting at 0.85 crosses z = 1 and stays in container 0
    EXPECT_EQ(s.container[4], 0u);
    EXPECT_EQ(s.extension[0], R(1, 4) + 4 * R(1, 5) - 1);
    EXPECT_LE(s.extension[0], R(1, 4));
}

TEST(ThinContainers, Empty) {
    auto r = place_thin_containers({}, {{R(3, 10), Integer(1)}}, kMu, R(1, 4));
    EXPECT_TRUE(r.placements.empty());
    EXPECT_TRUE(r.overflow.empty());
    EXPECT_THROW(place_thin_containers({{0, kMu, R(1, 2)}}, {{R(3, 10), Integer(1)}}, kMu, R(1, 4)),
                 PreconditionError);
}

TEST(ThinContainers, ShelfAlignmentAndBorder) {
    // container face mu wide and 2 high; shelves of halves then thirds
    std::vector<Face> faces;
    for (std::size_t i = 0; i < 6; ++i) faces.push_back({i, kMu / 2, R(1, 2)});
    for (std::size_t i = 6; i < 12; ++i) faces.push_back({i, kMu / 2, R(1, 3)});
    auto r = place_thin_containers(faces, {{kMu, Integer(2)}}, kMu, R(1, 4));
    std::size_t thirds = 0;
    for (const auto& p : r.placements) {
        EXPECT_LE(p.x + kMu / 2, kMu);
        if (p.id >= 6) {
            EXPECT_EQ(p.z, R(2, 3));  // shelf landing at 1/2 moves to 2/3
            ++thirds;
        } else {
            EXPECT_EQ(p.z, 0);
        }
    }
    EXPECT_GT(thirds, 0u);
    EXPECT_EQ(r.placements.size() + r.overflow.size() + r.unplaced.size(), 12u);
    EXPECT_LE(r.overflow_area[0], 3 * kMu * (2 + 2));
}

TEST(ThinContainers, AllConsumedWhenAreaSuffices) {
    Rng rng(9);
    std::vector<Face> faces;
    Rational area = 0;
    for (std::size_t i = 0; i < 400; ++i) {
        Rational h = std::vector<Rational>{R(1, 2), R(1, 3), R(1, 5), R(1, 7)}[rng.uniform_int(0, 3)];
        faces.push_back({i, kMu / rng.uniform_int(2, 5), h});
        area += faces.back().w * h;
    }
    Rational W = ceil_r(area / kMu) * kMu;
    auto r = place_thin_containers(faces, {{W / 2, Integer(1)}, {W / 2, Integer(1)}, {W, Integer(1)}}, kMu, R(1, 4));
    EXPECT_TRUE(r.unplaced.empty());
    for (const auto& p : r.placements) {
        const Face& f = faces[p.id];
        // never crosses an integer plane when tall
        if (f.h > R(1, 4)) { EXPECT_GE(floor_r(p.z) + 1, p.z + f.h); }
    }
}

TEST(TinyContainers, LayersAndBorder) {
    EXPECT_TRUE(place_tiny_containers({}, {{2 * kMu, 2 * kMu, Integer(1)}}, kMu, R(1, 4)).placements.empty());
    std::vector<TinyItem> items;
    for (std::size_t i = 0; i < 32; ++i) items.push_back({i, kMu / 2, kMu / 2, R(1, 2)});
    for (std::size_t i = 32; i < 48; ++i) items.push_back({i, kMu / 2, kMu / 2, R(1, 3)});
    auto r = place_tiny_containers(items, {{2 * kMu, 2 * kMu, Integer(1)}}, kMu, R(1, 4));
    EXPECT_TRUE(r.unplaced.empty());
    EXPECT_EQ(r.placements.size() + r.overflow.size(), 48u);
    for (const auto& p : r.placements) {
        EXPECT_LE(p.x + kMu / 2, 2 * kMu);
        EXPECT_LE(p.y + kMu / 2, 2 * kMu);
        if (p.id >= 32) EXPECT_EQ(p.z, 1);
        else EXPECT_TRUE(p.z == 0 || p.z == R(1, 2));
    }
    for (std::size_t i : r.overflow) EXPECT_LT(i, 48u);
    EXPECT_LE(r.overflow_volume[0], 3 * kMu * (4 * kMu + 4 * kMu) * 3);
}

TEST(TinyContainers, ShiftForTallLayer) {
    std::vector<TinyItem> items;
    for (std::size_t i = 0; i < 16; ++i) items.push_back({i, kMu / 2, kMu / 2, R(1, 2)});
    for (std::size_t i = 16; i < 32; ++i) items.push_back({i, kMu / 2, kMu / 2, R(1, 3)});
    auto r = place_tiny_containers(items, {{2 * kMu, 2 * kMu, Integer(2)}}, kMu, R(1, 4));
    for (const auto& p : r.placements)
        if (p.id >= 16) { EXPECT_EQ(p.z, R(2, 3)); }
}

TEST(SolveAsymptotic, SingleItem) {
    std::vector<Item> items{box("a", R(1, 2), R(1, 3), R(1, 5))};
    auto r = solve_asymptotic_bp(items);
    EXPECT_TRUE(complete_and_feasible(r.packing, items));
    EXPECT_LE(r.packing.bin_count(), 2u);
    EXPECT_TRUE(r.report.overflow_volume.empty());
    EXPECT_EQ(r.report.route, "pipeline");
}

TEST(SolveAsymptotic, EmptyAndBadEpsilon) {
    EXPECT_EQ(solve_asymptotic_bp({}).packing.bin_count(), 0u);
    AsymOptions o;
    o.epsilon = R(1, 2);
    EXPECT_THROW(solve_asymptotic_bp({cube("a", R(1, 2))}, o), PreconditionError);
}

TEST(SolveAsymptotic, RepeatedLargeCubes) {
    std::vector<Item> items;
    for (int i = 0; i < 20; ++i) items.push_back(cube("c" + std::to_string(i), R(3, 5)));
    auto r = solve_asymptotic_bp(items);
    EXPECT_TRUE(complete_and_feasible(r.packing, items));
    EXPECT_TRUE(r.report.tall_not_sliced);
    EXPECT_EQ(r.report.route, "pipeline");
    EXPECT_EQ(r.packing.bin_count(), 20u);
}

TEST(SolveAsymptotic, ExplicitDescriptor) {
    // eight half cubes: four containers of height one hold two each
    std::vector<Item> items;
    for (int i = 0; i < 8; ++i) items.push_back(cube("c" + std::to_string(i), R(1, 2)));
    json j = json::parse(R"({"configurations": [{"height": 1, "containers": [
        {"kind": "big", "x": 0, "y": 0, "w": "1/2", "d": "1/2"},
        {"kind": "big", "x": "1/2", "y": 0, "w": "1/2", "d": "1/2"},
        {"kind": "big", "x": 0, "y": "1/2", "w": "1/2", "d": "1/2"},
        {"kind": "big", "x": "1/2", "y": "1/2", "w": "1/2", "d": "1/2"}]}]})");
    AsymOptions o;
    o.source = ContainerSource::explicit_descriptor;
    o.descriptor = descriptor_from_json(j);
    auto r = solve_asymptotic_bp(items, o);
    EXPECT_TRUE(complete_and_feasible(r.packing, items));
    EXPECT_EQ(r.packing.bin_count(), 1u);
    EXPECT_TRUE(r.report.overflow_volume.empty());
    // round trip of the descriptor format
    auto back = descriptor_from_json(descriptor_to_json(*o.descriptor));
    ASSERT_EQ(back.configurations.size(), 1u);
    EXPECT_EQ(back.configurations[0].containers.size(), 4u);
    json bad = json::parse(R"({"configurations": [{"height": 1, "containers": [
        {"kind": "big", "x": 0, "y": 0, "w": 1, "d": 1}, {"kind": "big", "x": 0, "y": 0, "w": 1, "d": 1}]}]})");
    o.descriptor = descriptor_from_json(bad);
    EXPECT_THROW(solve_asymptotic_bp(items, o), PreconditionError);
    EXPECT_THROW(descriptor_from_json(json::parse(R"({"configurations": [{"containers": []}]})")), ParseError);
}

TEST(SolveAsymptotic, AllClassesExercised) {
    const Rational mu = kMu;
    std::vector<Item> items;
    for (int i = 0; i < 6; ++i) items.push_back(cube("b" + std::to_string(i), R(1, 2)));
    for (int i = 0; i < 40; ++i) items.push_back(box("v" + std::to_string(i), mu / 2, R(1, 2), R(1, 2)));
    for (int i = 0; i < 40; ++i) items.push_back(box("h" + std::to_string(i), R(3, 4), mu / 3, R(1, 3)));
    for (int i = 0; i < 40; ++i) items.push_back(box("t" + std::to_string(i), mu / 2, mu / 2, R(1, 5)));
    items.push_back(box("m", R(1, 30), R(1, 2), R(1, 2)));
    auto r = solve_asymptotic_bp(items);
    EXPECT_TRUE(complete_and_feasible(r.packing, items));
    EXPECT_EQ(r.report.params.delta, R(1, 24));
    EXPECT_EQ(r.report.class_counts.at("vertical"), 40u);
    EXPECT_EQ(r.report.class_counts.at("horizontal"), 40u);
    EXPECT_EQ(r.report.class_counts.at("tiny"), 40u);
    EXPECT_EQ(r.report.class_counts.at("intermediate"), 1u);
    EXPECT_TRUE(r.report.tall_not_sliced);
    EXPECT_TRUE(r.report.accounting_holds);
    EXPECT_EQ(r.report.overflow_volume.count("unplaced"), 0u);
    EXPECT_EQ(r.report.route, "pipeline");
}

TEST(SolveAsymptotic, RandomThousand) {
    Rng rng(1000);
    std::vector<Item> items;
    for (int i = 0; i < 1000; ++i) items.push_back(random_item(rng, Family::uniform, i));
    AsymOptions o;
    o.epsilon = R(1, 6);
    auto r = solve_asymptotic_bp(items, o);
    EXPECT_TRUE(complete_and_feasible(r.packing, items));
    EXPECT_TRUE(r.report.tall_not_sliced);
    EXPECT_TRUE(r.report.accounting_holds);
    EXPECT_LE(r.report.max_cut_height, o.epsilon);
    EXPECT_EQ(r.report.route, "pipeline");
    Rational over = 0;
    for (const auto& [k, v] : r.report.overflow_volume) over += v;
    Rational bound = r.report.thin_overflow_bound + r.report.tiny_overflow_bound + r.report.intermediate_bound +
                     Rational(static_cast<long>(r.report.big_types));
    EXPECT_LE(over, bound);
}
