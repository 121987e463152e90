#ifndef WPL_TRANSPORT_HPP
#define WPL_TRANSPORT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kacmoody.hpp"
#include "mutation.hpp"
#include "rootcat.hpp"

namespace wpl {

/** \brief Inverse of Phi on canonical symbols, grown from the generator assignments. */
struct PhiDictionary {
    std::map<SheafSymbol, LieElement> inv;
    long comparisons = 0;  // derivations that hit an already known value
    long conflicts = 0;
    std::vector<std::string> conflict_log;
};

namespace detail {

inline std::optional<std::pair<SheafSymbol, Q>> single_term(const SymbolCombination& c) {
    if (c.terms.size() != 1) return std::nullopt;
    return std::make_pair(c.terms.begin()->first, c.terms.begin()->second);
}

/** Phi^{-1}(h_alpha) = -h_alpha. */
inline LieElement cartan_image(const KMAlgebra& a, const std::vector<Q>& h) {
    if (h.empty()) return a.zero();
    return -a.h_of(h);
}

inline bool is_period(const SheafSymbol& s, const WeightData& w) {
    return s.is_torsion() && s.k == w.weight(s.i);
}

}  // namespace detail

/** \brief Base generators of the quotient algebra with their preimages in g_Q. */
inline std::vector<std::pair<SheafSymbol, LieElement>> phi_base(const KMAlgebra& a, const WeightData& w) {
    std::vector<std::pair<SheafSymbol, LieElement>> out;
    out.push_back({SheafSymbol::line(LVector::zero(w), w), a.e(0)});
    out.push_back({SheafSymbol::line(LVector::zero(w), w, 1), -a.f(0)});
    for (int i = 1; i <= w.t(); ++i)
        for (int j = 1; j < w.p[i - 1]; ++j) {
            out.push_back({SheafSymbol::torsion(i, j, 1, w), a.e(w.index(i, j))});
            out.push_back({SheafSymbol::torsion(i, j, 1, w, 1), -a.f(w.index(i, j))});
        }
    return out;
}

/**
 * \brief Grow Phi^{-1} for `depth` rounds of the bracket rule table, comparing every
 * derivation of an already known symbol (path independence).
 */
inline PhiDictionary phi_dictionary(const KMAlgebra& a, const WeightData& w, int depth) {
    SymbolAlgebra A(w);
    PhiDictionary d;
    auto record = [&](const SheafSymbol& z, const LieElement& v, const std::string& how,
                      std::map<SheafSymbol, LieElement>& fresh) {
        auto it = d.inv.find(z);
        if (it != d.inv.end()) {
            ++d.comparisons;
            if (!(it->second == v)) {
                ++d.conflicts;
                d.conflict_log.push_back(render(z) + " via " + how);
            }
            return;
        }
        auto f = fresh.find(z);
        if (f != fresh.end()) {
            ++d.comparisons;
            if (!(f->second == v)) {
                ++d.conflicts;
                d.conflict_log.push_back(render(z) + " via " + how);
            }
            return;
        }
        fresh.emplace(z, v);
    };
    {
        std::map<SheafSymbol, LieElement> fresh;
        for (auto& [g, v] : phi_base(a, w)) {
            auto t = detail::single_term(A.sym(g));
            fresh.emplace(t->first, v * (1 / t->second));
        }
        d.inv = fresh;
    }
    for (int round = 0; round < depth; ++round) {
        std::map<SheafSymbol, LieElement> fresh;
        std::vector<std::pair<SheafSymbol, LieElement>> known(d.inv.begin(), d.inv.end());
        for (auto& [x, vx] : known)
            for (auto& [y, vy] : known) {
                auto r = A.bracket(A.sym(x), A.sym(y));
                if (!r) continue;
                LieElement lhs = a.bracket(vx, vy);
                std::string how = "[" + render(x) + "," + render(y) + "]";
                if (r->terms.empty()) {
                    ++d.comparisons;
                    if (!(lhs == detail::cartan_image(a, r->h))) {
                        ++d.conflicts;
                        d.conflict_log.push_back(how + " Cartan part");
                    }
                    continue;
                }
                auto t = detail::single_term(*r);
                if (!t || detail::is_period(t->first, w)) continue;
                LieElement v = (lhs - detail::cartan_image(a, r->h)) * (1 / t->second);
                record(t->first, v, how, fresh);
            }
        for (auto& [z, v] : fresh) d.inv.emplace(z, v);
    }
    return d;
}

/** \brief Phi^{-1} of a combination; nullopt if a symbol is missing. */
inline std::optional<LieElement> phi_inverse(const KMAlgebra& a, const PhiDictionary& d,
                                             const SymbolCombination& c) {
    LieElement r = detail::cartan_image(a, c.h);
    for (auto& [s, v] : c.terms) {
        auto it = d.inv.find(s);
        if (it == d.inv.end()) return std::nullopt;
        r += it->second * v;
    }
    return r;
}

/** \brief Xi_x = Phi^{-1} Upsilon~_x Phi on Chevalley generators, extended to g_Q. */
inline LieOperator xi(const KMAlgebra& a, const PhiDictionary& d, const WeightData& w, const LVector& x) {
    SymbolAlgebra A(w);
    int n = w.rank();
    std::vector<LieElement> te(n), tf(n);
    auto img = [&](const SymbolCombination& c, const std::string& what) {
        auto v = phi_inverse(a, d, upsilon(A, x, c));
        if (!v) throw std::out_of_range("dictionary has no entry for the image of " + what);
        return *v;
    };
    te[0] = img(A.line(LVector::zero(w)), "e_star");
    tf[0] = img(A.line(LVector::zero(w), 1, -1), "f_star");
    for (int i = 1; i <= w.t(); ++i)
        for (int j = 1; j < w.p[i - 1]; ++j) {
            te[w.index(i, j)] = img(A.torsion(i, j, 1), "e_" + w.vertex_name(w.index(i, j)));
            tf[w.index(i, j)] = img(A.torsion(i, j, 1, 1, -1), "f_" + w.vertex_name(w.index(i, j)));
        }
    return a.from_generators(te, tf);
}

/** \brief Sign character s with lhs = rhs * s or lhs = s * rhs; returns (s, side) or nullopt. */
inline std::optional<std::pair<std::vector<int>, std::string>> find_sign_character(const KMAlgebra& a,
                                                                                  const LieOperator& lhs,
                                                                                  const LieOperator& rhs) {
    int n = a.rank();
    for (long mask = 0; mask < (1L << n); ++mask) {
        std::vector<int> s(n);
        for (int i = 0; i < n; ++i) s[i] = (mask >> i) & 1 ? -1 : 1;
        LieOperator sc = a.sign_character(s);
        if (lhs == rhs * sc) return std::make_pair(s, std::string("right"));
        if (lhs == sc * rhs) return std::make_pair(s, std::string("left"));
    }
    return std::nullopt;
}

/** \brief Xi_0 against the star Tits automorphism, and arm composites against the arm ones, up to sign. */
inline Report verify_corollary_for_Rx(const WeightData& w, int depth = 3) {
    KMAlgebra a = KMAlgebra::build(w, KMMode::Finite);
    PhiDictionary d = phi_dictionary(a, w, depth);
    Report rep;
    rep.suite = "tits";
    rep.params["weights"] = w.p;
    rep.params["dim"] = a.dim();
    std::string tag = "p" + render_list(w.p);
    rep.add(tag + ".dictionary", "Phi generator dictionary", d.conflicts == 0,
            std::to_string(d.conflicts) + " conflicts", std::to_string(d.comparisons) + " comparisons");
    auto check = [&](const std::string& id, const std::function<LieOperator()>& lhs_fn, int vertex) {
        LieOperator lhs;
        try {
            lhs = lhs_fn();
        } catch (const std::exception& e) {
            rep.add(id, "corollary for Rx", false, e.what(), "Tits automorphism");
            return;
        }
        std::string wit;
        if (!a.is_automorphism(lhs, &wit)) {
            rep.add(id, "corollary for Rx", false, "not an automorphism: " + wit, "Tits automorphism");
            return;
        }
        auto sc = find_sign_character(a, lhs, a.tits(vertex));
        if (!sc) {
            rep.add(id, "corollary for Rx", false, "no sign character", "Tits automorphism");
            return;
        }
        rep.add(id, "corollary for Rx", true, "sign character " + render_list(sc->first) + " on the " + sc->second,
                "Tits automorphism at " + w.vertex_name(vertex));
    };
    check(tag + ".star", [&] { return xi(a, d, w, LVector::zero(w)); }, 0);
    for (int i = 1; i <= w.t(); ++i)
        for (int j = 1; j < w.p[i - 1]; ++j) {
            LVector y = LVector::arm(w, i, j - 1), x = LVector::arm(w, i, j);
            check(tag + ".w" + std::to_string(i) + std::to_string(j),
                  [&] {
                      LieOperator u = xi(a, d, w, y);
                      return u * xi(a, d, w, x) * u;
                  },
                  w.index(i, j));
        }
    return rep;
}

}  // namespace wpl

#endif
