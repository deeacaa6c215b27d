#include "support.hpp"

#include "packing3d/generators.hpp"
#include "packing3d/licheng.hpp"
#include "packing3d/nfdh.hpp"
#include "packing3d/steinberg.hpp"
#include "packing3d/volume_pack.hpp"

using namespace p3t;

namespace {

std::vector<Rect2D> rects_of(const std::vector<std::pair<Rational, Rational>>& wh) {
    std::vector<Rect2D> out;
    for (std::size_t i = 0; i < wh.size(); ++i) out.push_back({i, wh[i].first, wh[i].second});
    return out;
}

}  // namespace

TEST(Nfdh, HandSimulatedExample) {
    auto res = nfdh_2d(rects_of({{R("0.6"), R("0.5")}, {R("0.5"), R("0.4")}, {R("0.3"), R("0.3")}}), 1);
    ASSERT_EQ(res.shelves.size(), 2u);
    EXPECT_EQ(res.shelves[0].height, R("0.5"));
    EXPECT_EQ(res.shelves[0].members.size(), 1u);
    EXPECT_EQ(res.shelves[1].height, R("0.4"));
    EXPECT_EQ(res.shelves[1].members.size(), 2u);
    EXPECT_EQ(res.shelves[1].base_z, R("0.5"));
    EXPECT_EQ(res.height, R("0.9"));
}

TEST(Nfdh, EmptyAndSingle) {
    EXPECT_EQ(nfdh_2d({}, 1).height, 0);
    auto one = nfdh_2d(rects_of({{1, 1}}), 1);
    EXPECT_EQ(one.height, 1);
    EXPECT_EQ(one.shelves.size(), 1u);
}

TEST(Nfdh, WiderThanStripThrows) {
    EXPECT_THROW(nfdh_2d(rects_of({{R("1.5"), 1}}), 1), PreconditionError);
}

TEST(Nfdh, ShelfInvariants) {
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        std::vector<std::pair<Rational, Rational>> wh;
        int n = static_cast<int>(rng.uniform_int(1, 30));
        for (int i = 0; i < n; ++i) wh.push_back({rng.grid(60, 1, 60), rng.grid(60, 1, 60)});
        auto res = nfdh_2d(rects_of(wh), 1);
        Rational sum = 0, prev_h = 2;
        for (std::size_t s = 0; s < res.shelves.size(); ++s) {
            const auto& sh = res.shelves[s];
            Rational width = 0;
            for (const auto& m : sh.members) {
                EXPECT_LE(m.h, prev_h);
                prev_h = m.h;
                width += m.w;
            }
            EXPECT_LE(width, 1);
            EXPECT_EQ(sh.height, sh.members.front().h);
            if (s + 1 < res.shelves.size()) { EXPECT_GT(width + res.shelves[s + 1].members.front().w, 1); }
            sum += sh.height;
        }
        EXPECT_EQ(sum, res.height);
        EXPECT_TRUE(verify_2d(res.placements(), 1, res.height));
    }
}

TEST(NfdhFits, BoundaryOfBound) {
    auto r = rects_of({{R("0.5"), R("0.5")}});
    EXPECT_TRUE(nfdh_fits(1, 1, r));
    EXPECT_TRUE(nfdh_in_box(r, 1, 1).has_value());
}

TEST(NfdhFits, DenseSmallRects) {
    // 360 rects of 0.05 x 0.05 = area 0.9 <= 0.95^2
    std::vector<std::pair<Rational, Rational>> wh(360, {R("0.05"), R("0.05")});
    auto r = rects_of(wh);
    EXPECT_TRUE(nfdh_fits(1, 1, r));
    EXPECT_TRUE(nfdh_in_box(r, 1, 1).has_value());
}

TEST(NfdhFits, CertificateIsOnlySufficient) {
    auto r = rects_of({{1, 1}});
    EXPECT_FALSE(nfdh_fits(1, 1, r));
    EXPECT_TRUE(nfdh_in_box(r, 1, 1).has_value());
}

TEST(Steinberg, FourQuartersFailCondition) {
    auto r = rects_of({{R(1, 2), R(1, 2)}, {R(1, 2), R(1, 2)}, {R(1, 2), R(1, 2)}, {R(1, 2), R(1, 2)}});
    EXPECT_FALSE(steinberg_condition(r, 1, 1));
    EXPECT_FALSE(steinberg_2d(r, 1, 1).has_value());
}

TEST(Steinberg, SingleAndEmpty) {
    auto one = steinberg_2d(rects_of({{R(1, 2), R(1, 2)}}), 1, 1);
    ASSERT_TRUE(one.has_value());
    EXPECT_EQ(one->size(), 1u);
    auto none = steinberg_2d({}, 1, 1);
    ASSERT_TRUE(none.has_value());
    EXPECT_TRUE(none->empty());
}

TEST(Steinberg, BigItemPenaltyCase) {
    // a = 0.8, b = 0.6: penalty 0.6 * 0.2 = 0.12, so area up to 0.44 is covered
    auto r = rects_of({{R("0.8"), R("0.3")}, {R("0.2"), R("0.6")}, {R("0.1"), R("0.1")}});
    ASSERT_TRUE(steinberg_condition(r, 1, 1));
    auto pl = steinberg_2d(r, 1, 1);
    ASSERT_TRUE(pl.has_value());
    EXPECT_TRUE(verify_2d(*pl, 1, 1));
}

// Random instances scaled so the condition is tight or nearly tight.
TEST(Steinberg, PacksEveryConditionSatisfyingInstance) {
    Rng rng(11);
    int tested = 0;
    for (int t = 0; t < 3000; ++t) {
        int n = static_cast<int>(rng.uniform_int(1, rng.coin() ? 6 : 25));
        long den = std::vector<long>{12, 24, 60, 97}[rng.uniform_int(0, 3)];
        int fam = static_cast<int>(rng.uniform_int(0, 4));
        std::vector<Rect2D> r;
        for (int i = 0; i < n; ++i) {
            Rational w, h;
            switch (fam) {
                case 0: w = rng.grid(den, 1, den); h = rng.grid(den, 1, den); break;
                case 1: w = rng.grid(den, den / 3, den / 2); h = rng.grid(den, den / 3, den / 2); break;
                case 2: w = rng.grid(den, 1, den / 2); h = rng.grid(den, den / 2, den); break;
                case 3:
                    w = i == 0 ? rng.grid(den, den / 2, den) : rng.grid(den, 1, den / 2);
                    h = i == 0 ? rng.grid(den, den / 2, den) : rng.grid(den, 1, den / 2);
                    break;
                default: w = rng.grid(den, 1, den / 4); h = rng.grid(den, 1, den); break;
            }
            r.push_back({static_cast<std::size_t>(i), w, h});
        }
        while (!r.empty() && !steinberg_condition(r, 1, 1)) r.pop_back();
        if (r.empty()) continue;
        ++tested;
        auto pl = steinberg_2d(r, 1, 1);
        ASSERT_TRUE(pl.has_value()) << "trial " << t;
        EXPECT_EQ(pl->size(), r.size());
        EXPECT_TRUE(verify_2d(*pl, 1, 1));
    }
    EXPECT_GT(tested, 2000);
}

TEST(Steinberg, RectangularBox) {
    auto r = rects_of({{R("0.4"), R("1.5")}, {R("1.2"), R("0.5")}, {R("0.3"), R("0.3")}});
    ASSERT_TRUE(steinberg_condition(r, 2, 3));
    auto pl = steinberg_2d(r, 2, 3);
    ASSERT_TRUE(pl.has_value());
    EXPECT_TRUE(verify_2d(*pl, 2, 3));
}

TEST(LiCheng, TwoWideItemsOnePerLayer) {
    std::vector<Item> items{box("a", R("0.6"), R("0.7"), R("0.3")), box("b", R("0.8"), R("0.6"), R("0.2"))};
    auto res = licheng_strip(items, LiChengMode::general);
    EXPECT_EQ(res.height, R("0.5"));
    EXPECT_TRUE(complete_and_feasible(res.packing, items));
}

TEST(LiCheng, Empty) {
    auto res = licheng_strip({}, LiChengMode::general);
    EXPECT_EQ(res.height, 0);
    EXPECT_TRUE(res.packing.placements.empty());
}

TEST(LiCheng, HalfthinRejectsWideDeepItem) {
    std::vector<Item> items{box("a", R("0.6"), R("0.7"), R("0.3"))};
    EXPECT_THROW(licheng_strip(items, LiChengMode::halfthin), PreconditionError);
}

TEST(LiCheng, PairsLargeBaseItems) {
    // base area 0.2 > 1/6 and w <= 1/2: two per layer
    std::vector<Item> items{box("a", R("0.5"), R("0.4"), R("0.3")), box("b", R("0.4"), R("0.5"), R("0.2")),
                            box("c", R("0.5"), R("0.5"), R("0.1"))};
    auto res = licheng_strip(items, LiChengMode::halfthin);
    EXPECT_EQ(res.height, R("0.3") + R("0.1"));
    EXPECT_TRUE(complete_and_feasible(res.packing, items));
}

TEST(LiCheng, BoundsOnRandomInstances) {
    for (int seed = 0; seed < 150; ++seed) {
        Rng rng(seed);
        Family fam = static_cast<Family>(seed % 4);
        auto items = random_instance(rng, fam, static_cast<std::size_t>(rng.uniform_int(1, 50)));
        auto g = licheng_strip(items, LiChengMode::general);
        EXPECT_LE(g.height, licheng_bound(items, LiChengMode::general)) << seed;
        EXPECT_EQ(g.steinberg_fallbacks, 0u);
        EXPECT_TRUE(complete_and_feasible(g.packing, items)) << seed;
        std::vector<Item> thin;
        for (auto it : items) {
            if (it.w > R(1, 2) && it.d > R(1, 2)) it.w = it.w / 2;
            thin.push_back(it);
        }
        auto h = licheng_strip(thin, LiChengMode::halfthin);
        EXPECT_LE(h.height, licheng_bound(thin, LiChengMode::halfthin)) << seed;
        EXPECT_TRUE(complete_and_feasible(h.packing, thin)) << seed;
    }
}

TEST(LiCheng, ManySmallBases) {
    Rng rng(5);
    std::vector<Item> items;
    for (int i = 0; i < 400; ++i) items.push_back(box("s" + std::to_string(i), rng.grid(100, 1, 15), rng.grid(100, 1, 15), rng.grid(100, 1, 100)));
    auto res = licheng_strip(items, LiChengMode::halfthin);
    EXPECT_LE(res.height, licheng_bound(items, LiChengMode::halfthin));
    EXPECT_EQ(res.steinberg_fallbacks, 0u);
    EXPECT_TRUE(complete_and_feasible(res.packing, items));
}

TEST(VolumeBinPack, SingleAndEmpty) {
    std::vector<Item> one{cube("a", R("0.7"))};
    auto p = volume_bin_pack(one);
    EXPECT_EQ(p.bin_count(), 1u);
    EXPECT_TRUE(complete_and_feasible(p, one));
    EXPECT_EQ(volume_bin_pack({}).bin_count(), 0u);
}

TEST(VolumeBinPack, BoundOnRandomInstances) {
    for (int seed = 0; seed < 40; ++seed) {
        auto items = random_instance(static_cast<std::uint64_t>(seed), static_cast<Family>(seed % 3), 100);
        auto p = volume_bin_pack(items);
        EXPECT_LE(Rational(static_cast<long>(p.bin_count())), volume_bin_bound(items));
        EXPECT_TRUE(complete_and_feasible(p, items));
    }
}

TEST(VolumeBinPack, RejectsOversizedItems) {
    EXPECT_THROW(volume_bin_pack({box("a", R("1.2"), 1, 1)}), PreconditionError);
}

TEST(Backend, LiChengGuarantee) {
    const StripBackend& b = default_backend();
    auto g = b.guarantee();
    EXPECT_EQ(g.mult, 4);
    EXPECT_EQ(g.add_hmax_coeff, 8);
    EXPECT_TRUE(g.volume_based);
    EXPECT_EQ(b.name(), "licheng");
}
