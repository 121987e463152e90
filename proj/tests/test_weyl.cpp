#include <random>

#include <gtest/gtest.h>

#include "wpl/weyl.hpp"

using namespace wpl;

namespace {

// Oracle: reflect a vector directly, r_v(mu) = mu - (mu, a_v) a_v.
ZVec reflect(const CartanData& cd, int v, const ZVec& mu) {
    ZVec r = mu;
    r[v] -= cd.pair(mu, cd.simple(v));
    return r;
}

const std::vector<WeightData> kWeights{WeightData({2, 2}), WeightData({2, 3}),
                                       WeightData({2, 2, 2}), WeightData({3, 3, 3}),
                                       WeightData({2, 3, 7}), WeightData({2, 3, 5})};

}  // namespace

TEST(Cartan, Types) {
    auto a3 = cartan_matrix(StarQuiver(WeightData({2, 2})));
    EXPECT_EQ(a3, (std::vector<ZVec>{{2, -1, -1}, {-1, 2, 0}, {-1, 0, 2}}));
    auto d4 = cartan_matrix(StarQuiver(WeightData({2, 2, 2})));
    EXPECT_EQ(d4, (std::vector<ZVec>{{2, -1, -1, -1}, {-1, 2, 0, 0}, {-1, 0, 2, 0}, {-1, 0, 0, 2}}));
    auto a4 = cartan_matrix(StarQuiver(WeightData({2, 3})));
    EXPECT_EQ(a4, (std::vector<ZVec>{{2, -1, -1, 0}, {-1, 2, 0, 0}, {-1, 0, 2, -1}, {0, 0, -1, 2}}));
    EXPECT_EQ(dynkin_type(WeightData({2, 3})), "A4");
    EXPECT_EQ(dynkin_type(WeightData({2, 2, 2})), "D4");
    EXPECT_EQ(dynkin_type(WeightData({2, 3, 5})), "E8");
    EXPECT_EQ(dynkin_type(WeightData({2, 3, 6})), "infinite");
    EXPECT_EQ(dynkin_type(WeightData({3, 1})), "A3");
}

TEST(Quiver, Arrows) {
    StarQuiver q(WeightData({2, 3}));
    auto ar = q.arrows();
    ASSERT_EQ(ar.size(), 3u);
    EXPECT_EQ(ar[0], (std::pair<int, int>{1, 0}));
    EXPECT_EQ(ar[1], (std::pair<int, int>{2, 0}));
    EXPECT_EQ(ar[2], (std::pair<int, int>{3, 2}));
}

TEST(SimpleReflection, MatchesOracle) {
    for (const auto& w : kWeights) {
        CartanData cd = StarQuiver(w).cartan();
        int n = cd.rank();
        for (int v = 0; v < n; ++v) {
            WeylElement r = simple_reflection(cd, v);
            for (int u = 0; u < n; ++u) EXPECT_EQ(r(cd.simple(u)), reflect(cd, v, cd.simple(u)));
            ZVec neg(n, 0);
            neg[v] = -1;
            EXPECT_EQ(r(cd.simple(v)), neg);
            EXPECT_EQ(r * r, WeylElement::identity(n));
            EXPECT_TRUE(preserves_form(cd, r));
        }
    }
    CartanData a3 = StarQuiver(WeightData({2, 2})).cartan();
    EXPECT_EQ(simple_reflection(a3, 0)(a3.simple(1)), (ZVec{1, 1, 0}));
    EXPECT_THROW(simple_reflection(a3, 3), std::out_of_range);
}

TEST(RootReflection, Examples) {
    CartanData cd = linear_cartan(4);
    EXPECT_EQ(reflection_in_root(cd, cd.simple(2)), simple_reflection(cd, 2));
    WeylElement s1 = simple_reflection(cd, 0), s2 = simple_reflection(cd, 1);
    EXPECT_EQ(reflection_in_root(cd, ZVec{1, 1, 0, 0}), s1 * s2 * s1);
    CartanData aff = StarQuiver(WeightData({2, 2, 2, 2})).cartan();
    EXPECT_THROW(reflection_in_root(aff, ZVec{2, 1, 1, 1, 1}), std::invalid_argument);
}

TEST(RootReflection, FixesHyperplaneAndPreservesForm) {
    std::mt19937 rng(5);
    for (const auto& w : kWeights) {
        CartanData cd = StarQuiver(w).cartan();
        RootSet rs = enumerate_roots(cd, 6, is_finite_type(w));
        for (const auto& r : rs.roots) {
            if (!r.real) continue;
            WeylElement g = reflection_in_root(cd, r.v);
            EXPECT_TRUE(preserves_form(cd, g));
            EXPECT_EQ(g * g, WeylElement::identity(cd.rank()));
            std::uniform_int_distribution<int> d(-5, 5);
            for (int it = 0; it < 20; ++it) {
                ZVec mu(cd.rank());
                for (auto& x : mu) x = d(rng);
                // project onto the hyperplane: 2 mu - (mu, a) a is orthogonal to a
                Int s = cd.pair(mu, r.v);
                ZVec h = mu;
                for (int k = 0; k < cd.rank(); ++k) h[k] = 2 * mu[k] - s * r.v[k];
                ASSERT_EQ(cd.pair(h, r.v), 0);
                ASSERT_EQ(g(h), h);
            }
        }
    }
}

TEST(BraidOrder, Values) {
    for (const auto& w : kWeights) {
        CartanData cd = StarQuiver(w).cartan();
        for (int u = 0; u < cd.rank(); ++u)
            for (int v = 0; v < cd.rank(); ++v) {
                if (u == v) {
                    EXPECT_THROW(braid_order(cd, u, v), std::invalid_argument);
                    continue;
                }
                EXPECT_EQ(braid_order(cd, u, v), cd.c[u][v] == 0 ? 2 : 3);
            }
    }
}

TEST(Roots, FiniteCounts) {
    EXPECT_EQ(enumerate_roots(StarQuiver(WeightData({2, 2})), 100).roots.size(), 12u);
    EXPECT_EQ(enumerate_roots(StarQuiver(WeightData({2, 2, 2})), 100).roots.size(), 24u);
    for (const auto& w : kWeights) {
        if (!is_finite_type(w)) continue;
        RootSet rs = enumerate_roots(StarQuiver(w), 100);
        EXPECT_EQ(static_cast<int>(rs.roots.size()), classical_root_count(dynkin_type(w)));
        EXPECT_FALSE(rs.partial);
        CartanData cd = StarQuiver(w).cartan();
        for (const auto& r : rs.roots) {
            EXPECT_EQ(cd.pair(r.v, r.v), 2);
            ZVec neg = r.v;
            for (auto& x : neg) x = -x;
            EXPECT_TRUE(rs.contains(neg));
            for (int v = 0; v < cd.rank(); ++v) EXPECT_TRUE(rs.contains(reflect(cd, v, r.v)));
        }
    }
}

TEST(Roots, HeightCapOne) {
    for (const auto& w : kWeights) {
        RootSet rs = enumerate_roots(StarQuiver(w), 1);
        EXPECT_EQ(static_cast<int>(rs.roots.size()), 2 * w.rank());
        for (const auto& r : rs.roots) EXPECT_EQ(std::abs(height(r.v)), 1);
    }
}

TEST(Roots, AffineImaginary) {
    // D4 affine: delta = (2,1,1,1,1) is the first imaginary root
    RootSet rs = enumerate_roots(StarQuiver(WeightData({2, 2, 2, 2})), 6);
    EXPECT_TRUE(rs.partial);
    bool found = false;
    for (const auto& r : rs.roots)
        if (r.v == ZVec{2, 1, 1, 1, 1}) found = !r.real;
    EXPECT_TRUE(found);
}

TEST(LinearIdentities, AllHold) {
    for (int n = 2; n <= 6; ++n) {
        Report rep = verify_linear_identities(n);
        EXPECT_EQ(rep.checks.size(), static_cast<size_t>(4 * (n - 1)));
        EXPECT_TRUE(rep.all_pass()) << n;
    }
    CartanData cd = linear_cartan(2);
    EXPECT_EQ(reflection_in_root(cd, ZVec{1, 1})(cd.simple(0)), (ZVec{0, -1}));
}
