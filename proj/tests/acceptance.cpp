#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "wpl/suites.hpp"

using namespace wpl;

namespace {

struct Outcome {
    bool ok = true;
    std::string note;
    void need(bool cond, const std::string& why) {
        if (!cond && ok) {
            ok = false;
            note = why;
        }
    }
    void need(const Report& r, const std::string& tag) {
        for (auto& c : r.checks)
            if (c.status == Status::Fail) return need(false, tag + ": " + c.id);
    }
};

int failures = 0;

void criterion(int k, const std::function<Outcome()>& body, double limit_s = 0) {
    Stopwatch sw;
    Outcome o = body();
    double s = sw.ms() / 1000.0;
    if (limit_s > 0 && s >= limit_s) o.need(false, "runtime " + std::to_string(s) + " s");
    if (!o.ok) ++failures;
    std::printf("criterion %2d: %s (%.2f s)%s%s\n", k, o.ok ? "PASS" : "FAIL", s, o.ok ? "" : "  ", o.note.c_str());
    std::fflush(stdout);
}

const std::vector<int> kQ = {2, 3, 5};

}  // namespace

int main() {
    criterion(1, [] {
        Outcome o;
        for (int n = 2; n <= 6; ++n) o.need(verify_linear_identities(n), "n=" + std::to_string(n));
        return o;
    }, 1.0);

    criterion(2, [] {
        Outcome o;
        for (auto p : {std::vector<int>{2, 3}, {2, 2, 2}, {3, 3, 3}, {2, 3, 5}, {2, 3, 7}}) {
            Stopwatch sw;
            o.need(verify_simple_reflection_theorem(WeightData{p}), render_list(p));
            o.need(sw.ms() < 1000, render_list(p) + " over 1 s");
        }
        return o;
    });

    criterion(3, [] {
        Outcome o;
        Report r = verify_weight13_remark();
        o.need(r, "remark");
        o.need(r.count(Status::Pass) == r.checks.size(), "unsettled check");
        return o;
    });

    criterion(4, [] {
        Outcome o;
        WeightData a({2, 3});
        for (auto& x : braid_twists(a))
            for (int k = 1; k <= 2; ++k) o.need(verify_upsilon_braid(a, x, k), "(2,3) arm " + std::to_string(k));
        WeightData d({2, 2, 2});
        for (auto& x : {LVector::zero(d), LVector::arm(d, 1, 1)}) o.need(verify_upsilon_braid(d, x, 1), "(2,2,2)");
        return o;
    }, 5.0);

    criterion(5, [] {
        Outcome o;
        WeightData w({2, 3});
        for (auto& x : {LVector::zero(w), LVector::arm(w, 1, 1), LVector::arm(w, 2, 1), LVector::arm(w, 2, 2)})
            o.need(verify_exp_ad_theorems(w, x), "exp-ad");
        return o;
    });

    criterion(6, [] {
        Outcome o;
        for (auto p : {std::vector<int>{2, 2}, {2, 2, 2}}) o.need(verify_corollary_for_Rx(WeightData{p}, 3), render_list(p));
        return o;
    }, 30.0);

    criterion(7, [] {
        Outcome o;
        for (auto p : {std::vector<int>{2, 2}, {2, 2, 2}}) o.need(verify_km_integrity(WeightData{p}), render_list(p));
        return o;
    });

    criterion(8, [] {
        Outcome o;
        for (int n = 2; n <= 3; ++n) o.need(verify_appendix_hall(n, kQ), "n=" + std::to_string(n));
        o.need(verify_appendix_hall(4, {2, 3}), "n=4");
        HallStore::instance().clear_memory();
        Stopwatch sw;
        o.need(verify_appendix_hall(4, {5}), "n=4 q=5");
        o.need(sw.ms() < 60000, "n=4 q=5 cold over 60 s");
        return o;
    });

    criterion(9, [] {
        Outcome o;
        for (int n = 2; n <= 4; ++n)
            o.need(verify_lusztig_appendix(n, kQ, OracleMode::Probabilistic), "prob n=" + std::to_string(n));
        for (int n = 2; n <= 3; ++n)
            o.need(verify_lusztig_appendix(n, {}, OracleMode::Exact), "exact n=" + std::to_string(n));
        return o;
    });

    criterion(10, [] {
        Outcome o;
        o.need(theta_and_theorem5(WeightData{{2, 2}}, {}, OracleMode::Exact), "(2,2) exact");
        o.need(theta_and_theorem5(WeightData{{2, 3}}, kQ, OracleMode::Probabilistic), "(2,3)");
        return o;
    }, 600.0);

    criterion(11, [] {
        Outcome o;
        std::mt19937 rng(11);
        std::uniform_int_distribution<int> d(-9, 9);
        for (auto p : {std::vector<int>{2, 3}, {2, 2, 2}, {2, 3, 7}}) {
            WeightData w{p};
            for (int it = 0; it < 1000; ++it) {
                K0Class k = K0Class::zero(w);
                for (auto& v : k.zi) v = d(rng);
                k.nd = d(rng);
                o.need(euler_sym(K0Class::delta(w), k, w) == 0, "delta radical " + render_list(p));
            }
        }
        for (auto p : {std::vector<int>{2, 3}, {2, 2, 2}, {3, 3, 3}, {2, 3, 5}, {2, 3, 7}}) {
            WeightData w{p};
            CartanData cd = StarQuiver(w).cartan();
            auto check = [&](const LVector& x) {
                WeylElement g = mutation_reflection(x, w).action;
                o.need(g * g == WeylElement::identity(cd.rank()), "mutation involution " + render_list(p));
                o.need(preserves_form(cd, g), "mutation isometry " + render_list(p));
            };
            check(LVector::zero(w));
            for (int i = 1; i <= w.t(); ++i)
                for (int j = 1; j < w.p[i - 1]; ++j) check(LVector::arm(w, i, j));
        }
        for (auto p : {std::vector<int>{2, 2}, {2, 2, 2}}) {
            WeightData w{p};
            KMAlgebra a = KMAlgebra::build(w, KMMode::Finite);
            PhiDictionary dict = phi_dictionary(a, w, 3);
            o.need(dict.conflicts == 0 && dict.comparisons > 0, "phi dictionary " + render_list(p));
        }
        for (auto Qv : {Quiver::linear(2), Quiver::linear(3), Quiver::cyclic(2), Quiver::cyclic(3)}) {
            std::vector<IsoClass> pool;
            std::vector<ZVec> dims;
            if (Qv.n == 2) dims = {{1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}};
            else dims = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {0, 1, 1}, {1, 1, 1}};
            for (auto& dv : dims)
                for (auto& x : enumerate_isoclasses(Qv, dv)) pool.push_back(x);
            for (int q : {2, 3}) {
                HallAlgebra<NumericRing> H(Qv, NumericRing{q});
                for (int t = 0; t < 200; ++t) {
                    auto& a = pool[rng() % pool.size()];
                    auto& b = pool[rng() % pool.size()];
                    auto& c = pool[rng() % pool.size()];
                    o.need(H.mul(H.mul(H.u(a), H.u(b)), H.u(c)) == H.mul(H.u(a), H.mul(H.u(b), H.u(c))),
                           "hall associativity " + Qv.name());
                }
            }
        }
        for (auto p : {std::vector<int>{2, 2}, {2, 3}})
            o.need(oracle_smoke_test(WeightData{p}, kQ, OracleMode::Probabilistic), "smoke " + render_list(p));
        return o;
    });

    std::printf("%d criteria failed\n", failures);
    return failures ? 1 : 0;
}
