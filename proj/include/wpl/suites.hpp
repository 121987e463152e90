#ifndef WPL_SUITES_HPP
#define WPL_SUITES_HPP

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hall.hpp"
#include "kacmoody.hpp"
#include "mutation.hpp"
#include "quantum.hpp"
#include "report.hpp"
#include "rootcat.hpp"
#include "transport.hpp"
#include "weyl.hpp"

namespace wpl {

/** \brief Bad command-line or suite configuration. */
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SuiteConfig {
    std::string suite;
    std::vector<WeightData> weights;
    std::vector<int> q_list = {2, 3, 5};
    OracleMode mode = OracleMode::Probabilistic;
    int height_cap = 0;  // 0: not requested
    int depth = 3;
    std::vector<int> n_list;  // empty: suite default
    std::string cache_dir;
    unsigned seed = 1;
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"weyl",         "mutation",         "upsilon-braid",
                                                   "exp-ad",       "tits",             "hall-appendix",
                                                   "lusztig-appendix", "eta",          "theorem5"};
    return names;
}

/** "2,3;2,2,2" -> {(2,3), (2,2,2)}. */
inline std::vector<WeightData> parse_weights(const std::string& s) {
    std::vector<WeightData> out;
    std::stringstream outer(s);
    std::string tuple;
    while (std::getline(outer, tuple, ';')) {
        std::vector<int> p;
        std::stringstream inner(tuple);
        std::string tok;
        while (std::getline(inner, tok, ',')) {
            try {
                size_t used = 0;
                int v = std::stoi(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                p.push_back(v);
            } catch (const std::exception&) {
                throw ConfigError("bad weight entry '" + tok + "'");
            }
        }
        try {
            out.emplace_back(p);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("bad weight tuple '") + tuple + "': " + e.what());
        }
    }
    if (out.empty()) throw ConfigError("no weights given");
    return out;
}

inline std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stoi(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError("bad " + what + " entry '" + tok + "'");
        }
    }
    return out;
}

inline void validate(const SuiteConfig& cfg) {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), cfg.suite) == names.end())
        throw ConfigError("unknown suite '" + cfg.suite + "'");
    const auto& sup = supported_q();
    for (int q : cfg.q_list) {
        if (!is_prime_power(q)) throw ConfigError("q = " + std::to_string(q) + " is not a prime power");
        if (std::find(sup.begin(), sup.end(), q) == sup.end())
            throw ConfigError("q = " + std::to_string(q) + " is outside the supported fields");
    }
    if (cfg.depth < 0) throw ConfigError("depth must be nonnegative");
    if (cfg.height_cap < 0) throw ConfigError("height cap must be nonnegative");
}

namespace detail {

inline std::vector<LVector> normal_forms(const WeightData& w, Int lc_lo, Int lc_hi) {
    std::vector<LVector> out;
    std::vector<Int> l(w.t(), 0);
    for (Int lc = lc_lo; lc <= lc_hi; ++lc) {
        std::fill(l.begin(), l.end(), 0);
        while (true) {
            out.push_back(LVector{l, 0} + LVector::canonical(w, lc));
            int k = 0;
            while (k < w.t() && ++l[k] == w.p[k]) l[k++] = 0;
            if (k == w.t()) break;
        }
    }
    return out;
}

inline std::vector<int> n_or(const SuiteConfig& cfg, std::vector<int> dflt) {
    return cfg.n_list.empty() ? dflt : cfg.n_list;
}

inline void absorb(Report& into, const Report& part) { into.append(part); }

}  // namespace detail

/** Twists used by the braid suite: normal forms with lc in {-1, 0, 1}. */
inline std::vector<LVector> braid_twists(const WeightData& w) { return detail::normal_forms(w, -1, 1); }

/** Twists used by the exp-ad suite: 0 and j x_i for 1 <= j < p_i. */
inline std::vector<LVector> exp_ad_twists(const WeightData& w) {
    std::vector<LVector> out = {LVector::zero(w)};
    for (int i = 1; i <= w.t(); ++i)
        for (int j = 1; j < w.p[i - 1]; ++j) out.push_back(LVector::arm(w, i, j));
    return out;
}

/** \brief Dispatch one suite; deterministic given the config. */
inline Report run_suite(const SuiteConfig& cfg) {
    validate(cfg);
    if (!cfg.cache_dir.empty()) {
        try {
            HallStore::instance().attach(cfg.cache_dir);
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string("cache: ") + e.what());
        }
    }
    Report rep;
    rep.suite = cfg.suite;
    nlohmann::json ws = nlohmann::json::array();
    for (auto& w : cfg.weights) ws.push_back(w.p);
    const std::string& s = cfg.suite;
    auto need_weights = [&] {
        if (cfg.weights.empty()) throw ConfigError("suite '" + s + "' needs --weights");
    };

    if (s == "weyl") {
        auto ns = detail::n_or(cfg, {2, 3, 4, 5, 6});
        for (int n : ns) {
            if (n < 1 || n > 12) throw ConfigError("weyl suite needs 1 <= n <= 12");
            detail::absorb(rep, verify_linear_identities(n));
        }
        rep.params["n"] = ns;
    } else if (s == "mutation") {
        need_weights();
        for (auto& w : cfg.weights) {
            detail::absorb(rep, verify_simple_reflection_theorem(w));
            if (cfg.height_cap > 0) {
                if (!is_finite_type(w)) throw ConfigError("sign coherence needs a finite type weight");
                for (int i = 1; i <= w.t(); ++i)
                    for (int j = 0; j < w.p[i - 1]; ++j)
                        detail::absorb(rep, verify_sign_coherence(LVector::arm(w, i, j), w, cfg.height_cap));
            }
        }
        rep.params["weights"] = ws;
        if (cfg.height_cap > 0) rep.params["height_cap"] = cfg.height_cap;
    } else if (s == "upsilon-braid") {
        need_weights();
        for (auto& w : cfg.weights)
            for (auto& x : braid_twists(w))
                for (int k = 1; k <= w.t(); ++k)
                    if (w.p[k - 1] > 1) detail::absorb(rep, verify_upsilon_braid(w, x, k));
        rep.params["weights"] = ws;
        rep.params["twists"] = "normal forms with lc in {-1,0,1}";
    } else if (s == "exp-ad") {
        need_weights();
        for (auto& w : cfg.weights)
            for (auto& x : exp_ad_twists(w)) detail::absorb(rep, verify_exp_ad_theorems(w, x));
        rep.params["weights"] = ws;
        rep.params["twists"] = "0 and j x_i for 1 <= j < p_i";
    } else if (s == "tits") {
        need_weights();
        for (auto& w : cfg.weights) {
            if (!is_finite_type(w)) throw ConfigError("tits suite needs a finite type weight");
            detail::absorb(rep, verify_km_integrity(w));
            detail::absorb(rep, verify_corollary_for_Rx(w, cfg.depth));
        }
        rep.params["weights"] = ws;
        rep.params["depth"] = cfg.depth;
    } else if (s == "hall-appendix") {
        auto ns = detail::n_or(cfg, {2, 3, 4});
        for (int n : ns) {
            if (n < 2 || n > 4) throw ConfigError("hall-appendix needs 2 <= n <= 4");
            detail::absorb(rep, verify_appendix_hall(n, cfg.q_list));
        }
        rep.params["n"] = ns;
        rep.params["q"] = cfg.q_list;
    } else if (s == "lusztig-appendix") {
        auto ns = detail::n_or(cfg, {2, 3, 4});
        for (int n : ns) {
            if (n < 2 || n > 4) throw ConfigError("lusztig-appendix needs 2 <= n <= 4");
            detail::absorb(rep, verify_lusztig_appendix(n, cfg.q_list, cfg.mode));
        }
        rep.params["n"] = ns;
        rep.params["q"] = cfg.q_list;
    } else if (s == "eta") {
        need_weights();
        for (auto& w : cfg.weights) {
            Report r = declared_symbol_checks(w, cfg.q_list, cfg.mode, cfg.seed);
            rep.params["model"] = r.params["model"];
            detail::absorb(rep, r);
        }
        rep.params["weights"] = ws;
        rep.params["q"] = cfg.q_list;
    } else if (s == "theorem5") {
        need_weights();
        for (auto& w : cfg.weights) {
            if (!is_finite_type(w) || w.rank() > 5) throw ConfigError("theorem5 needs finite type with |I| <= 5");
            try {
                star_model(w);
            } catch (const std::exception& e) {
                throw ConfigError(e.what());
            }
            detail::absorb(rep, oracle_smoke_test(w, cfg.q_list, cfg.mode));
            Report r = theta_and_theorem5(w, cfg.q_list, cfg.mode);
            rep.params["axioms"] = r.params["axioms"];
            detail::absorb(rep, r);
        }
        rep.params["weights"] = ws;
        rep.params["q"] = cfg.q_list;
    }
    if (s == "lusztig-appendix" || s == "eta" || s == "theorem5")
        rep.params["mode"] = cfg.mode == OracleMode::Exact ? "exact" : "probabilistic";
    if (s == "eta") rep.params["seed"] = cfg.seed;
    return rep;
}

}  // namespace wpl

#endif
