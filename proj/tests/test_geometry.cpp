#include "support.hpp"

#include "packing3d/generators.hpp"
#include "packing3d/io.hpp"

using namespace p3t;

TEST(Rational, ParsesDecimalAndFractionExactly) {
    EXPECT_EQ(R("0.1"), R(1, 10));
    EXPECT_EQ(R("-3/6"), R(-1, 2));
    EXPECT_EQ(R(".5"), R(1, 2));
    EXPECT_EQ(R("1e-3"), R(1, 1000));
    EXPECT_EQ(R("2.5E+2"), Rational(250));
    EXPECT_EQ(R(" 7 "), Rational(7));
    EXPECT_THROW(R("1/0"), ParseError);
    EXPECT_THROW(R("abc"), ParseError);
    EXPECT_THROW(R(""), ParseError);
    EXPECT_THROW(R("."), ParseError);
}

TEST(Rational, FloorCeil) {
    EXPECT_EQ(floor_int(R("2.3")), 2);
    EXPECT_EQ(ceil_int(R("2.3")), 3);
    EXPECT_EQ(floor_int(R("-1/2")), -1);
    EXPECT_EQ(ceil_int(Rational(2)), 2);
    EXPECT_EQ(pow(R(1, 2), 4), R(1, 16));
}

TEST(Orientation, LabelsRoundTrip) {
    for (const auto& o : Orientation::all()) EXPECT_EQ(Orientation::parse(o.label()), o);
    Item it{"a", R(1, 2), R(1, 3), R(1, 4)};
    auto e = extents(it, Orientation::parse("zxy"));
    EXPECT_EQ(e[0], R(1, 4));
    EXPECT_EQ(e[1], R(1, 2));
    EXPECT_EQ(e[2], R(1, 3));
    EXPECT_THROW(Orientation::parse("xxz"), ParseError);
}

TEST(ItemsOverlap, IdenticalBoxes) {
    ItemTable t({cube("a", 1), cube("b", 1)});
    Placement p{"a", 0, 0, 0, 0, {}}, q{"b", 0, 0, 0, 0, {}};
    EXPECT_TRUE(items_overlap(p, q, t));
}

TEST(ItemsOverlap, TouchingFacesAllowed) {
    ItemTable t({box("a", R(1, 2), 1, 1), box("b", R(1, 2), 1, 1)});
    Placement p{"a", 0, 0, 0, 0, {}}, q{"b", 0, R(1, 2), 0, 0, {}};
    EXPECT_FALSE(items_overlap(p, q, t));
}

TEST(ItemsOverlap, DifferentBins) {
    ItemTable t({cube("a", 1), cube("b", 1)});
    Placement p{"a", 0, 0, 0, 0, {}}, q{"b", 1, 0, 0, 0, {}};
    EXPECT_FALSE(items_overlap(p, q, t));
}

TEST(ItemsOverlap, UnknownIdThrows) {
    ItemTable t({cube("a", 1)});
    Placement p{"a", 0, 0, 0, 0, {}}, q{"zz", 0, 0, 0, 0, {}};
    EXPECT_THROW(items_overlap(p, q, t), PreconditionError);
}

TEST(ItemsOverlap, Symmetric) {
    Rng rng(7);
    std::vector<Item> items;
    for (int i = 0; i < 12; ++i) items.push_back(random_item(rng, Family::grid12, i));
    ItemTable t(items);
    std::vector<Placement> ps;
    for (const auto& it : items)
        ps.push_back({it.id, static_cast<std::size_t>(rng.uniform_int(0, 1)), rng.grid(12, 0, 6), rng.grid(12, 0, 6),
                      rng.grid(12, 0, 6), Orientation::all()[rng.uniform_int(0, 5)]});
    for (const auto& a : ps)
        for (const auto& b : ps) EXPECT_EQ(items_overlap(a, b, t), items_overlap(b, a, t));
}

TEST(VerifyPacking, SingleUnitCube) {
    std::vector<Item> items{cube("a", 1)};
    Packing p;
    p.placements.push_back({"a", 0, 0, 0, 0, {}});
    auto rep = verify_packing(p, items);
    EXPECT_TRUE(rep.feasible);
    EXPECT_EQ(rep.used_bins, 1u);
    EXPECT_EQ(rep.total_volume, 1);
}

TEST(VerifyPacking, ContainmentViolation) {
    std::vector<Item> items{box("a", R("0.6"), R("0.5"), R("0.5"))};
    Packing p;
    p.placements.push_back({"a", 0, R("0.5"), 0, 0, {}});
    auto rep = verify_packing(p, items);
    ASSERT_FALSE(rep.feasible);
    ASSERT_EQ(rep.violations.size(), 1u);
    EXPECT_EQ(rep.violations[0].kind, ViolationKind::containment);
    EXPECT_EQ(rep.violations[0].witness.at(0), R("1.1"));
}

TEST(VerifyPacking, StripHeightIsTopCoordinate) {
    std::vector<Item> items{box("a", 1, 1, R("0.5")), box("b", 1, 1, R("0.4"))};
    Packing p;
    p.kind = PackingKind::strip;
    p.placements.push_back({"a", 0, 0, 0, 0, {}});
    p.placements.push_back({"b", 0, 0, 0, R("0.5"), {}});
    auto rep = verify_packing(p, items);
    EXPECT_TRUE(rep.feasible);
    ASSERT_TRUE(rep.strip_height.has_value());
    EXPECT_EQ(*rep.strip_height, R("0.9"));
}

TEST(VerifyPacking, WallContactIsFeasible) {
    std::vector<Item> items{box("a", R(1, 3), 1, 1), box("b", R(2, 3), 1, 1)};
    Packing p;
    p.placements.push_back({"a", 0, 0, 0, 0, {}});
    p.placements.push_back({"b", 0, R(1, 3), 0, 0, {}});
    EXPECT_TRUE(verify_packing(p, items).feasible);
}

TEST(VerifyPacking, DuplicateUnknownMissingAndOverlap) {
    std::vector<Item> items{cube("a", R(1, 2)), cube("b", R(1, 2)), cube("c", R(1, 2))};
    Packing p;
    p.placements.push_back({"a", 0, 0, 0, 0, {}});
    p.placements.push_back({"a", 1, 0, 0, 0, {}});
    p.placements.push_back({"b", 0, R(1, 4), R(1, 4), R(1, 4), {}});
    p.placements.push_back({"q", 0, 0, 0, 0, {}});
    auto rep = verify_packing(p, items, VerifyOptions{true});
    EXPECT_FALSE(rep.feasible);
    std::map<ViolationKind, int> count;
    for (const auto& v : rep.violations) ++count[v.kind];
    EXPECT_EQ(count[ViolationKind::duplicate], 1);
    EXPECT_EQ(count[ViolationKind::unknown_item], 1);
    EXPECT_EQ(count[ViolationKind::overlap], 1);
    EXPECT_EQ(count[ViolationKind::missing], 1);
    EXPECT_EQ(rep.used_bins, 2u);
}

TEST(VerifyPacking, RotatedExtentsAreUsed) {
    std::vector<Item> items{box("a", 1, R(1, 2), R(1, 4))};
    Packing p;
    p.placements.push_back({"a", 0, 0, 0, R(3, 4), Orientation::parse("zyx")});  // height becomes 1
    auto rep = verify_packing(p, items);
    EXPECT_FALSE(rep.feasible);
    p.placements[0].z = 0;
    EXPECT_TRUE(verify_packing(p, items).feasible);
}

TEST(VerifyPacking, SweepMatchesPairwiseCheck) {
    for (int seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        std::vector<Item> items = random_instance(rng, Family::grid12, 15);
        ItemTable t(items);
        Packing p;
        for (const auto& it : items)
            p.placements.push_back({it.id, static_cast<std::size_t>(rng.uniform_int(0, 2)), rng.grid(12, 0, 4),
                                    rng.grid(12, 0, 4), rng.grid(12, 0, 4), {}});
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < p.placements.size(); ++i)
            for (std::size_t j = i + 1; j < p.placements.size(); ++j)
                pairs += items_overlap(p.placements[i], p.placements[j], t);
        auto rep = verify_packing(p, t);
        std::size_t overlaps = 0;
        for (const auto& v : rep.violations) overlaps += v.kind == ViolationKind::overlap;
        EXPECT_EQ(overlaps, pairs) << "seed " << seed;
    }
}

TEST(Frame, RoundTripsPlacements) {
    Item it{"a", R(1, 2), R(1, 3), R(1, 5)};
    for (Axis a : {Axis::x, Axis::y, Axis::z}) {
        Frame f = Frame::with_height(a);
        Item fi = f.to_frame(it);
        EXPECT_EQ(fi.h, it.dims()[static_cast<int>(a)]);
        Placement fp{"a", 0, R(1, 7), R(2, 7), R(3, 7), {}};
        Placement op = f.from_frame(fp);
        // the item box in the original frame equals the frame box with axes permuted back
        Box fb = occupied_box(fp, fi), ob = occupied_box(op, it);
        for (int i = 0; i < 3; ++i) {
            EXPECT_EQ(ob.lo[f.perm[i]], fb.lo[i]);
            EXPECT_EQ(ob.hi[f.perm[i]], fb.hi[i]);
        }
    }
}

TEST(Json, InstanceRoundTrip) {
    auto j = json::parse(R"({"bin":{"w":"1","d":"1","h":"1"},"items":[{"id":"a","w":"0.5","d":"1/3","h":0.25}]})");
    Instance inst = instance_from_json(j);
    ASSERT_EQ(inst.items.size(), 1u);
    EXPECT_EQ(inst.items[0].d, R(1, 3));
    EXPECT_EQ(inst.items[0].h, R(1, 4));
    Instance back = instance_from_json(instance_to_json(inst));
    EXPECT_EQ(back.items[0].w, R(1, 2));
    EXPECT_EQ(back.items[0].id, "a");
}

TEST(Json, RejectsBadInstances) {
    EXPECT_THROW(instance_from_json(json::parse(R"({"items":[{"id":"a","w":"0","d":"1","h":"1"}]})")), ParseError);
    EXPECT_THROW(instance_from_json(json::parse(R"({"items":[{"id":"a","w":"1","d":"1"}]})")), ParseError);
    EXPECT_THROW(instance_from_json(json::parse(R"({"nothing":1})")), ParseError);
    EXPECT_THROW(instance_from_json(json::parse(
                     R"({"items":[{"id":"a","w":"1","d":"1","h":"1"},{"id":"a","w":"1","d":"1","h":"1"}]})")),
                 PreconditionError);
}

TEST(Json, PackingRoundTrip) {
    Packing p;
    p.kind = PackingKind::strip;
    p.strip_axis = Axis::y;
    p.placements.push_back({"a", 0, R(1, 3), 0, R("0.5"), Orientation::parse("yzx")});
    Packing q = packing_from_json(packing_to_json(p));
    EXPECT_EQ(q.kind, PackingKind::strip);
    EXPECT_EQ(q.strip_axis, Axis::y);
    ASSERT_EQ(q.placements.size(), 1u);
    EXPECT_EQ(q.placements[0].x, R(1, 3));
    EXPECT_EQ(q.placements[0].orient.label(), "yzx");
}
