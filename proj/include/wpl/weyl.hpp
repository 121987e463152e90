#ifndef WPL_WEYL_HPP
#define WPL_WEYL_HPP

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lattice.hpp"
#include "report.hpp"

namespace wpl {

/** \brief Dense square integer matrix acting on column vectors. */
class IntMatrix {
public:
    IntMatrix() = default;
    explicit IntMatrix(int n) : n_(n), d_(static_cast<size_t>(n) * n, 0) {}
    static IntMatrix identity(int n) {
        IntMatrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static IntMatrix from_rows(const std::vector<ZVec>& rows) {
        IntMatrix m(static_cast<int>(rows.size()));
        for (int i = 0; i < m.n_; ++i)
            for (int j = 0; j < m.n_; ++j) m(i, j) = rows[i].at(j);
        return m;
    }
    int size() const { return n_; }
    Int& operator()(int i, int j) { return d_[static_cast<size_t>(i) * n_ + j]; }
    Int operator()(int i, int j) const { return d_[static_cast<size_t>(i) * n_ + j]; }

    IntMatrix operator*(const IntMatrix& o) const {
        IntMatrix r(n_);
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k) {
                Int a = (*this)(i, k);
                if (a == 0) continue;
                for (int j = 0; j < n_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }
    ZVec operator*(const ZVec& v) const {
        ZVec r(n_, 0);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) r[i] += (*this)(i, j) * v.at(j);
        return r;
    }
    ZVec column(int j) const {
        ZVec c(n_);
        for (int i = 0; i < n_; ++i) c[i] = (*this)(i, j);
        return c;
    }
    bool operator==(const IntMatrix&) const = default;

    std::string str() const {
        std::ostringstream os;
        os << '[';
        for (int i = 0; i < n_; ++i) {
            if (i) os << ',';
            os << '[';
            for (int j = 0; j < n_; ++j) os << (j ? "," : "") << (*this)(i, j);
            os << ']';
        }
        os << ']';
        return os.str();
    }

    /** Determinant by fraction-free Bareiss elimination. */
    Int det() const {
        if (n_ == 0) return 1;
        std::vector<Int> a = d_;
        auto at = [&](int i, int j) -> Int& { return a[static_cast<size_t>(i) * n_ + j]; };
        Int sign = 1, prev = 1;
        for (int k = 0; k < n_ - 1; ++k) {
            if (at(k, k) == 0) {
                int r = k + 1;
                while (r < n_ && at(r, k) == 0) ++r;
                if (r == n_) return 0;
                for (int j = 0; j < n_; ++j) std::swap(at(k, j), at(r, j));
                sign = -sign;
            }
            for (int i = k + 1; i < n_; ++i)
                for (int j = k + 1; j < n_; ++j)
                    at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
            prev = at(k, k);
        }
        return sign * at(n_ - 1, n_ - 1);
    }

private:
    int n_ = 0;
    std::vector<Int> d_;
};

inline std::string render_vec(const ZVec& v) { return render_list(v); }

/** \brief Symmetric generalized Cartan matrix with vertex labels. */
struct CartanData {
    std::vector<ZVec> c;
    std::vector<std::string> names;

    int rank() const { return static_cast<int>(c.size()); }
    Int pair(const ZVec& a, const ZVec& b) const { return bilinear(a, c, b); }
    ZVec simple(int v) const {
        ZVec e(rank(), 0);
        e.at(v) = 1;
        return e;
    }
};

/** \brief Star quiver with arrows * <- w_{i1} <- w_{i2} <- ... on every arm. */
struct StarQuiver {
    WeightData w;
    explicit StarQuiver(WeightData wd) : w(std::move(wd)) {}
    int rank() const { return w.rank(); }
    /** Arrows as (tail, head) vertex indices. */
    std::vector<std::pair<int, int>> arrows() const {
        std::vector<std::pair<int, int>> out;
        for (int i = 1; i <= w.t(); ++i) {
            int head = 0;
            for (int j = 1; j <= w.p[i - 1] - 1; ++j) {
                int tail = w.index(i, j);
                out.push_back({tail, head});
                head = tail;
            }
        }
        return out;
    }
    CartanData cartan() const {
        CartanData d{star_cartan(w), {}};
        for (int v = 0; v < rank(); ++v) d.names.push_back(w.vertex_name(v));
        return d;
    }
};

inline std::vector<ZVec> cartan_matrix(const StarQuiver& q) { return star_cartan(q.w); }

/** \brief Equioriented A_n with arrows i <- i+1; vertex i has index i-1. */
inline CartanData linear_cartan(int n) {
    CartanData d;
    d.c.assign(n, ZVec(n, 0));
    for (int i = 0; i < n; ++i) {
        d.c[i][i] = 2;
        if (i + 1 < n) d.c[i][i + 1] = d.c[i + 1][i] = -1;
        d.names.push_back(std::to_string(i + 1));
    }
    return d;
}

/** \brief Weyl group element stored as a dense matrix on ZI. */
struct WeylElement {
    IntMatrix m;
    WeylElement operator*(const WeylElement& o) const { return {m * o.m}; }
    ZVec operator()(const ZVec& v) const { return m * v; }
    bool operator==(const WeylElement&) const = default;
    static WeylElement identity(int n) { return {IntMatrix::identity(n)}; }
};

inline WeylElement simple_reflection(const CartanData& cd, int v) {
    int n = cd.rank();
    if (v < 0 || v >= n) throw std::out_of_range("unknown vertex");
    IntMatrix m = IntMatrix::identity(n);
    for (int u = 0; u < n; ++u) m(v, u) -= cd.c[v][u];
    return {m};
}
inline WeylElement simple_reflection(const StarQuiver& q, int v) {
    return simple_reflection(q.cartan(), v);
}

/** \brief mu -> mu - (mu, alpha) alpha; alpha must be real. */
inline WeylElement reflection_in_root(const CartanData& cd, const ZVec& alpha) {
    if (cd.pair(alpha, alpha) != 2) throw std::invalid_argument("not a real root: (a,a) != 2");
    int n = cd.rank();
    IntMatrix m = IntMatrix::identity(n);
    for (int u = 0; u < n; ++u) {
        Int s = 0;
        for (int k = 0; k < n; ++k) s += cd.c[u][k] * alpha[k];
        for (int r = 0; r < n; ++r) m(r, u) -= s * alpha[r];
    }
    return {m};
}
inline WeylElement reflection_in_root(const StarQuiver& q, const ZVec& alpha) {
    return reflection_in_root(q.cartan(), alpha);
}

inline int braid_order(const CartanData& cd, int u, int v) {
    if (u == v) throw std::invalid_argument("braid_order needs distinct vertices");
    WeylElement g = simple_reflection(cd, u) * simple_reflection(cd, v);
    WeylElement id = WeylElement::identity(cd.rank());
    WeylElement acc = g;
    for (int m = 1; m <= 6; ++m) {
        if (acc == id) return m;
        acc = acc * g;
    }
    throw std::runtime_error("braid order exceeds cap 6");
}

inline bool preserves_form(const CartanData& cd, const WeylElement& g) {
    int n = cd.rank();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (cd.pair(g.m.column(a), g.m.column(b)) != cd.c[a][b]) return false;
    return true;
}

/** \brief Finite (ADE) iff sum 1/p_i > t - 2. */
inline bool is_finite_type(const WeightData& w) {
    // compare sum_i prod_{k != i} p_k > (t-2) prod p_k in integers
    Int prod = 1;
    for (int v : w.p) prod *= v;
    Int lhs = 0;
    for (int v : w.p) lhs += prod / v;
    return lhs > static_cast<Int>(w.t() - 2) * prod;
}

/** \brief Classical root count for finite types, identified by the star shape. */
inline std::string dynkin_type(const WeightData& w) {
    if (!is_finite_type(w)) return "infinite";
    std::vector<int> arms;
    for (int v : w.p)
        if (v > 1) arms.push_back(v);
    std::sort(arms.begin(), arms.end());
    int n = w.rank();
    if (arms.size() <= 2) return "A" + std::to_string(n);
    if (arms[0] == 2 && arms[1] == 2) return "D" + std::to_string(n);
    return "E" + std::to_string(n);
}

inline int classical_root_count(const std::string& type) {
    char k = type[0];
    int n = std::stoi(type.substr(1));
    if (k == 'A') return n * (n + 1);
    if (k == 'D') return 2 * n * (n - 1);
    if (n == 6) return 72;
    if (n == 7) return 126;
    if (n == 8) return 240;
    throw std::invalid_argument("unknown Dynkin type " + type);
}

inline Int height(const ZVec& v) {
    Int h = 0;
    for (auto x : v) h += x;
    return h;
}

struct Root {
    ZVec v;
    bool real = true;
    auto operator<=>(const Root&) const = default;
};

struct RootSet {
    std::vector<Root> roots;
    int height_cap = 0;
    bool partial = false;
    bool contains(const ZVec& v) const {
        return std::any_of(roots.begin(), roots.end(), [&](const Root& r) { return r.v == v; });
    }
};

namespace detail {

inline bool connected_support(const CartanData& cd, const ZVec& v) {
    std::vector<int> supp;
    for (int i = 0; i < cd.rank(); ++i)
        if (v[i] != 0) supp.push_back(i);
    if (supp.empty()) return false;
    std::set<int> seen{supp[0]};
    std::vector<int> stack{supp[0]};
    while (!stack.empty()) {
        int a = stack.back();
        stack.pop_back();
        for (int b : supp)
            if (!seen.count(b) && cd.c[a][b] != 0) {
                seen.insert(b);
                stack.push_back(b);
            }
    }
    return seen.size() == supp.size();
}

inline void all_positive(int n, Int cap, ZVec& cur, int pos, Int used, std::vector<ZVec>& out) {
    if (pos == n) {
        if (used > 0) out.push_back(cur);
        return;
    }
    for (Int k = 0; used + k <= cap; ++k) {
        cur[pos] = k;
        all_positive(n, cap, cur, pos + 1, used + k, out);
    }
    cur[pos] = 0;
}

/** Upward closure of seeds under simple reflections that raise height within cap. */
inline std::set<ZVec> raise_closure(const CartanData& cd, std::vector<ZVec> seeds, Int cap) {
    std::set<ZVec> seen(seeds.begin(), seeds.end());
    while (!seeds.empty()) {
        ZVec a = seeds.back();
        seeds.pop_back();
        for (int i = 0; i < cd.rank(); ++i) {
            Int s = 0;
            for (int k = 0; k < cd.rank(); ++k) s += cd.c[i][k] * a[k];
            if (s >= 0) continue;
            ZVec b = a;
            b[i] -= s;
            if (height(b) > cap) continue;
            if (seen.insert(b).second) seeds.push_back(b);
        }
    }
    return seen;
}

}  // namespace detail

/** \brief Roots of height at most height_cap; complete for finite types. */
inline RootSet enumerate_roots(const CartanData& cd, int height_cap, bool finite) {
    if (height_cap < 1) throw std::invalid_argument("height_cap must be >= 1");
    int n = cd.rank();
    RootSet rs;
    rs.height_cap = height_cap;
    std::vector<ZVec> simples;
    for (int i = 0; i < n; ++i) simples.push_back(cd.simple(i));
    Int cap = finite ? static_cast<Int>(n) * 64 : height_cap;
    std::set<ZVec> real = detail::raise_closure(cd, simples, cap);
    std::set<ZVec> imag;
    if (!finite) {
        std::vector<ZVec> cand;
        ZVec cur(n, 0);
        detail::all_positive(n, height_cap, cur, 0, 0, cand);
        std::vector<ZVec> fund;
        for (auto& v : cand) {
            if (!detail::connected_support(cd, v)) continue;
            bool ok = true;
            for (int i = 0; i < n && ok; ++i) ok = cd.pair(v, cd.simple(i)) <= 0;
            if (ok) fund.push_back(v);
        }
        imag = detail::raise_closure(cd, fund, height_cap);
        rs.partial = true;
    }
    Int maxh = 0;
    for (auto& v : real) maxh = std::max(maxh, height(v));
    if (finite && maxh > height_cap) rs.partial = true;
    for (auto& v : real) {
        if (height(v) > height_cap) continue;
        ZVec neg = v;
        for (auto& x : neg) x = -x;
        rs.roots.push_back({v, true});
        rs.roots.push_back({neg, true});
    }
    for (auto& v : imag) {
        ZVec neg = v;
        for (auto& x : neg) x = -x;
        rs.roots.push_back({v, false});
        rs.roots.push_back({neg, false});
    }
    std::sort(rs.roots.begin(), rs.roots.end());
    return rs;
}

inline RootSet enumerate_roots(const StarQuiver& q, int height_cap) {
    return enumerate_roots(q.cartan(), height_cap, is_finite_type(q.w));
}

/** \brief Product of simple reflections s_{w[0]} s_{w[1]} ... (0-based vertices). */
inline WeylElement word_element(const CartanData& cd, const std::vector<int>& word) {
    WeylElement g = WeylElement::identity(cd.rank());
    for (int v : word) g = g * simple_reflection(cd, v);
    return g;
}

namespace detail {
inline std::string word_name(const std::vector<int>& w) {
    std::string s;
    for (int v : w) s += "s" + std::to_string(v + 1);
    return s;
}
}  // namespace detail

/** \brief Both identity families of the A_n reflection lemma, for 2 <= i <= n. */
inline Report verify_linear_identities(int n) {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    CartanData cd = linear_cartan(n);
    Report rep;
    rep.suite = "weyl";
    rep.params["n"] = n;
    auto P = [&](int i) {
        ZVec v(n, 0);
        for (int k = 0; k < i; ++k) v[k] = 1;
        return reflection_in_root(cd, v);
    };
    auto pad = [](int i) {
        std::string s = std::to_string(i);
        return std::string(2 - std::min<size_t>(2, s.size()), '0') + s;
    };
    for (int i = 2; i <= n; ++i) {
        std::vector<int> down, up;
        for (int k = i; k >= 1; --k) down.push_back(k - 1);
        for (int k = 2; k <= i; ++k) down.push_back(k - 1);
        for (int k = 1; k <= i; ++k) up.push_back(k - 1);
        for (int k = i - 1; k >= 1; --k) up.push_back(k - 1);
        WeylElement sp = P(i);
        WeylElement a = word_element(cd, down), b = word_element(cd, up);
        std::string base = "n" + pad(n) + ".i" + pad(i);
        rep.add(base + ".1a", "A-type (1)", sp == a, "s[P" + std::to_string(i) + "]=" + sp.m.str(),
                detail::word_name(down) + "=" + a.m.str());
        rep.add(base + ".1b", "A-type (1)", sp == b, "s[P" + std::to_string(i) + "]=" + sp.m.str(),
                detail::word_name(up) + "=" + b.m.str());
        WeylElement si = simple_reflection(cd, i - 1);
        WeylElement pm = P(i - 1);
        WeylElement c = pm * sp * pm, d = sp * pm * sp;
        rep.add(base + ".2a", "A-type (2)", si == c, "s" + std::to_string(i) + "=" + si.m.str(),
                "s[P" + std::to_string(i - 1) + "]s[P" + std::to_string(i) + "]s[P" +
                    std::to_string(i - 1) + "]=" + c.m.str());
        rep.add(base + ".2b", "A-type (2)", si == d, "s" + std::to_string(i) + "=" + si.m.str(),
                "s[P" + std::to_string(i) + "]s[P" + std::to_string(i - 1) + "]s[P" +
                    std::to_string(i) + "]=" + d.m.str());
    }
    return rep;
}

}  // namespace wpl

#endif
