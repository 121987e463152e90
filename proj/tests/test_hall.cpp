#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "wpl/hall.hpp"

using namespace wpl;

namespace {

// Brute-force subrepresentation count over F_p (p prime): subspaces as explicit vector sets.
using Vec = std::vector<int>;

std::vector<std::set<Vec>> all_subspaces(int dim, int p) {
    std::vector<Vec> vecs;
    int total = 1;
    for (int i = 0; i < dim; ++i) total *= p;
    for (int code = 0; code < total; ++code) {
        Vec v(dim);
        for (int i = 0, c = code; i < dim; ++i, c /= p) v[i] = c % p;
        vecs.push_back(v);
    }
    std::set<std::set<Vec>> found;
    std::set<Vec> zero = {Vec(dim, 0)};
    found.insert(zero);
    std::vector<std::set<Vec>> frontier = {zero};
    while (!frontier.empty()) {
        std::vector<std::set<Vec>> next;
        for (auto& S : frontier)
            for (auto& v : vecs) {
                if (S.count(v)) continue;
                std::set<Vec> T;
                for (auto& s : S)
                    for (int a = 0; a < p; ++a) {
                        Vec w(dim);
                        for (int i = 0; i < dim; ++i) w[i] = (s[i] + a * v[i]) % p;
                        T.insert(w);
                    }
                if (found.insert(T).second) next.push_back(T);
            }
        frontier = next;
    }
    return {found.begin(), found.end()};
}

long brute_subrep_count(const IsoClass& L, const ZVec& dimN, int p) {
    detail::Rep rep(L);
    int n = L.quiver.n;
    std::vector<std::vector<std::set<Vec>>> subs(n);
    for (int s = 0; s < n; ++s) {
        for (auto& S : all_subspaces(static_cast<int>(rep.d[s]), p)) {
            long size = 1;
            for (Int k = 0; k < dimN[s]; ++k) size *= p;
            if (static_cast<long>(S.size()) == size) subs[s].push_back(S);
        }
    }
    const GF& F = field(p);
    long count = 0;
    std::vector<const std::set<Vec>*> pick(n);
    std::function<void(int)> rec = [&](int s) {
        if (s == n) {
            for (int a = 0; a < n; ++a) {
                if (!L.quiver.has_arrow_from(a)) continue;
                std::vector<std::vector<int>> vs(pick[a]->begin(), pick[a]->end());
                for (auto& w : rep.apply(F, a, vs))
                    if (!pick[L.quiver.target(a)]->count(w)) return;
            }
            ++count;
            return;
        }
        for (auto& S : subs[s]) {
            pick[s] = &S;
            rec(s + 1);
        }
    };
    rec(0);
    return count;
}

}  // namespace

TEST(FiniteField, AxiomsForPrimePowers) {
    for (int q : {4, 8, 9}) {
        const GF& F = field(q);
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b) {
                EXPECT_EQ(F.mul(a, b), F.mul(b, a));
                for (int c = 0; c < q; ++c)
                    EXPECT_EQ(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)));
            }
        for (int a = 1; a < q; ++a) EXPECT_EQ(F.mul(a, F.inv(a)), 1);
    }
    EXPECT_THROW(GF(6), std::invalid_argument);
}

TEST(IsoClasses, Examples) {
    auto A2 = Quiver::linear(2);
    auto a = enumerate_isoclasses(A2, {1, 1});
    ASSERT_EQ(a.size(), 2u);
    std::set<std::string> keys;
    for (auto& x : a) keys.insert(x.key());
    EXPECT_EQ(keys, (std::set<std::string>{"[1,1]+[2,2]", "[1,2]"}));
    EXPECT_EQ(enumerate_isoclasses(A2, {1, 0}).size(), 1u);
    auto C2 = Quiver::cyclic(2);
    auto c = enumerate_isoclasses(C2, {1, 1});
    EXPECT_EQ(c.size(), 3u);
    EXPECT_THROW(enumerate_isoclasses(A2, {7, 0}), std::out_of_range);
    // A_3 dim (1,1,1): 4 partitions of the interval [1,3] into consecutive blocks
    EXPECT_EQ(enumerate_isoclasses(Quiver::linear(3), {1, 1, 1}).size(), 4u);
}

TEST(HallNumber, Examples) {
    auto A2 = Quiver::linear(2);
    IsoClass S1 = IsoClass::simple(A2, 0), S2 = IsoClass::simple(A2, 1), P2 = IsoClass::interval(A2, 1, 2);
    for (int q : {2, 3, 4, 5}) {
        EXPECT_EQ(hall_number(P2, S2, S1, q), 1);
        EXPECT_EQ(hall_number(P2, S1, S2, q), 0);
        EXPECT_EQ(hall_number(P2, IsoClass::zero(A2), P2, q), 1);
        EXPECT_EQ(hall_number(S1 + S2, S1, S2, q), 1);
    }
    EXPECT_THROW(hall_number(P2, S1, S1, 2), std::invalid_argument);
    EXPECT_THROW(hall_number(P2, S2, S1, 6), std::out_of_range);
    // F^{S1+S1}_{S1,S1} = q + 1 lines in a plane
    auto A1 = Quiver::linear(1);
    IsoClass s = IsoClass::simple(A1, 0);
    EXPECT_EQ(hall_number(s + s, s, s, 7), 8);
}

TEST(HallNumber, CyclicUniserial) {
    for (int p : {2, 3, 4}) {
        auto C = Quiver::cyclic(p);
        for (int j = 0; j < p; ++j)
            for (int k = 2; k <= p + 1; ++k) {
                IsoClass L = IsoClass::uniserial(C, j, k);
                IsoClass top = IsoClass::simple(C, j);
                IsoClass rest = IsoClass::uniserial(C, j - 1, k - 1);
                EXPECT_EQ(hall_number(L, top, rest, 3), 1) << L.key();
                IsoClass sock = IsoClass::simple(C, ((j - k + 1) % p + p) % p);
                IsoClass upper = IsoClass::uniserial(C, j, k - 1);
                EXPECT_EQ(hall_number(L, upper, sock, 3), 1) << L.key();
                if (!(top == sock)) EXPECT_EQ(hall_number(L, rest, top, 3), 0) << L.key();
            }
    }
}

TEST(HallNumber, SubrepresentationCountMatchesBruteForce) {
    for (auto Qv : {Quiver::linear(2), Quiver::cyclic(2)}) {
        for (Int a = 0; a <= 2; ++a)
            for (Int b = 0; b <= 2; ++b)
                for (auto& L : enumerate_isoclasses(Qv, {a, b}))
                    for (Int x = 0; x <= a; ++x)
                        for (Int y = 0; y <= b; ++y)
                            for (int q : {2, 3}) {
                                long total = 0;
                                for (auto& [mn, c] : compute_hall_table(L, {x, y}, q)) total += c;
                                EXPECT_EQ(total, brute_subrep_count(L, {x, y}, q))
                                    << Qv.name() << " " << L.key() << " q=" << q;
                            }
    }
}

TEST(HallProduct, Examples) {
    auto A2 = Quiver::linear(2);
    for (int q : {2, 3, 5}) {
        HallAlgebra<NumericRing> H(A2, NumericRing{q});
        IsoClass S1 = IsoClass::simple(A2, 0), S2 = IsoClass::simple(A2, 1), P2 = IsoClass::interval(A2, 1, 2);
        EXPECT_EQ(H.mul(H.u(S1), H.u(S2)), H.u(S1 + S2));
        EXPECT_EQ(H.mul(H.u(S2), H.u(S1)), (H.u(S1 + S2) + H.u(P2)).scaled(H.ring().vpow(-1)));
        EXPECT_EQ(H.mul(H.u(P2), H.one()), H.u(P2));
        EXPECT_EQ(H.mul(H.one(), H.u(P2)), H.u(P2));
    }
}

TEST(SkewCommutator, ExamplesAndReversal) {
    auto A2 = Quiver::linear(2);
    HallAlgebra<NumericRing> H(A2, NumericRing{3});
    auto P2 = H.u(IsoClass::interval(A2, 1, 2));
    auto u1 = H.simple(0), u2 = H.simple(1);
    EXPECT_EQ(H.skew(u1, u2, H.ring().vpow(1)), P2.scaled(SqrtQ(3, -1)));
    EXPECT_EQ(H.skew(u2, u1, H.ring().vpow(-1)), P2.scaled(H.ring().vpow(-1)));
    EXPECT_TRUE(H.skew(u1, u1, H.ring().one()).is_zero());

    auto A3 = Quiver::linear(3);
    HallAlgebra<NumericRing> H3(A3, NumericRing{2});
    std::vector<HallElement<NumericRing>> xs = {H3.simple(1), H3.simple(0) + H3.simple(2), H3.simple(0),
                                               H3.u(IsoClass::interval(A3, 2, 3))};
    for (size_t n = 2; n <= xs.size(); ++n) {
        std::vector<HallElement<NumericRing>> f(xs.begin(), xs.begin() + static_cast<long>(n)), r(f.rbegin(), f.rend());
        for (int sgn : {1, -1}) {
            SqrtQ c = SqrtQ(2, -1) * H3.ring().vpow(sgn), pw = H3.ring().one();
            for (size_t k = 1; k < n; ++k) pw *= c;
            EXPECT_EQ(H3.iterated_skew(f, sgn), H3.iterated_skew(r, -sgn).scaled(pw)) << n << " " << sgn;
        }
    }
}

TEST(HallProduct, Associativity) {
    std::mt19937 rng(7);
    for (auto Qv : {Quiver::linear(2), Quiver::linear(3), Quiver::cyclic(2), Quiver::cyclic(3)}) {
        std::vector<IsoClass> pool;
        std::vector<ZVec> dims;
        if (Qv.n == 2) dims = {{1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}};
        else dims = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {0, 1, 1}, {1, 1, 1}};
        for (auto& d : dims)
            for (auto& x : enumerate_isoclasses(Qv, d)) pool.push_back(x);
        for (int q : {2, 3}) {
            HallAlgebra<NumericRing> H(Qv, NumericRing{q});
            for (int t = 0; t < 200; ++t) {
                auto& a = pool[rng() % pool.size()];
                auto& b = pool[rng() % pool.size()];
                auto& c = pool[rng() % pool.size()];
                auto lhs = H.mul(H.mul(H.u(a), H.u(b)), H.u(c));
                auto rhs = H.mul(H.u(a), H.mul(H.u(b), H.u(c)));
                ASSERT_EQ(lhs, rhs) << Qv.name() << " " << a.key() << " " << b.key() << " " << c.key();
            }
        }
    }
}

TEST(HallPolynomial, GenericProducts) {
    auto A1 = Quiver::linear(1);
    HallAlgebra<GenericRing> G(A1, GenericRing{});
    IsoClass s = IsoClass::simple(A1, 0);
    auto prod = G.mul(G.u(s), G.u(s));
    // v^<S,S> (q + 1) = v (v^2 + 1)
    EXPECT_EQ(prod, G.u(s + s).scaled(VFrac(Laurent::vpow(3) + Laurent::vpow(1))));
    auto A2 = Quiver::linear(2);
    HallAlgebra<GenericRing> G2(A2, GenericRing{});
    auto lhs = G2.skew(G2.simple(0), G2.simple(1), VFrac::vpow(1));
    EXPECT_EQ(lhs, G2.u(IsoClass::interval(A2, 1, 2)).scaled(VFrac(-1)));
}

TEST(AppendixHall, LemmaHolds) {
    for (int n : {2, 3, 4}) {
        Stopwatch sw;
        Report r = verify_appendix_hall(n, {2, 3, 5});
        EXPECT_TRUE(r.all_pass()) << r.to_json(false).dump(1);
        EXPECT_LT(sw.ms(), 60000.0);
    }
}

TEST(HallCache, PersistAndAdmin) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "wpl_hall_cache_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    EXPECT_EQ(cache_admin("stats", dir.string()).records, 0);

    auto& store = HallStore::instance();
    store.clear_memory();
    store.attach(dir.string());
    auto A2 = Quiver::linear(2);
    IsoClass P2 = IsoClass::interval(A2, 1, 2);
    long before = store.computed_tables();
    EXPECT_EQ(hall_number(P2, IsoClass::simple(A2, 1), IsoClass::simple(A2, 0), 3), 1);
    EXPECT_EQ(store.computed_tables(), before + 1);
    long recs = cache_admin("stats", dir.string()).records;
    EXPECT_GT(recs, 0);

    store.clear_memory();
    store.attach(dir.string());
    EXPECT_EQ(hall_number(P2, IsoClass::simple(A2, 1), IsoClass::simple(A2, 0), 3), 1);
    EXPECT_EQ(store.computed_tables(), before + 1);  // served from the file

    auto v = cache_admin("verify", dir.string());
    EXPECT_GT(v.checked, 0);
    EXPECT_EQ(v.mismatches, 0);

    {
        std::ifstream in(dir / "hall_numbers.txt");
        std::string first;
        std::getline(in, first);
        std::ofstream out(dir / "hall_numbers.txt", std::ios::app);
        out << first << "\n";
    }
    auto c = cache_admin("compact", dir.string());
    EXPECT_EQ(c.removed, 1);
    EXPECT_EQ(c.records, recs);

    {
        std::ofstream out(dir / "hall_numbers.txt", std::ios::app);
        out << "garbage line\n";
    }
    try {
        cache_admin("stats", dir.string());
        FAIL() << "corrupt record accepted";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find(":" + std::to_string(recs + 1) + ":"), std::string::npos) << e.what();
    }
    store.detach();
    store.clear_memory();
    fs::remove_all(dir);
}
