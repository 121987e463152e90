#ifndef WPL_HALL_HPP
#define WPL_HALL_HPP

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lattice.hpp"
#include "laurent.hpp"
#include "report.hpp"

namespace wpl {

// ---------------------------------------------------------------- finite fields

/** \brief F_q for a prime power q, elements encoded 0..q-1 with table arithmetic. */
class GF {
public:
    explicit GF(int q) : q_(q) {
        if (q < 2 || q > 32) throw std::invalid_argument("field size out of range: " + std::to_string(q));
        p_ = 0;
        for (int d = 2; d <= q; ++d)
            if (q % d == 0) {
                p_ = d;
                break;
            }
        int k = 0;
        for (int r = q; r > 1; r /= p_) {
            if (r % p_) throw std::invalid_argument(std::to_string(q) + " is not a prime power");
            ++k;
        }
        k_ = k;
        add_.assign(q * q, 0);
        mul_.assign(q * q, 0);
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b) add_[a * q + b] = encode(vadd(decode(a), decode(b)));
        if (k_ == 1) {
            for (int a = 0; a < q; ++a)
                for (int b = 0; b < q; ++b) mul_[a * q + b] = (a * b) % p_;
        } else {
            find_modulus();
        }
        neg_.assign(q, 0);
        inv_.assign(q, 0);
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b) {
                if (add(a, b) == 0) neg_[a] = b;
                if (mul(a, b) == 1) inv_[a] = b;
            }
    }
    int q() const { return q_; }
    int add(int a, int b) const { return add_[a * q_ + b]; }
    int mul(int a, int b) const { return mul_[a * q_ + b]; }
    int neg(int a) const { return neg_[a]; }
    int sub(int a, int b) const { return add(a, neg_[b]); }
    int inv(int a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        return inv_[a];
    }

private:
    std::vector<int> decode(int a) const {
        std::vector<int> d(k_);
        for (int i = 0; i < k_; ++i, a /= p_) d[i] = a % p_;
        return d;
    }
    int encode(const std::vector<int>& d) const {
        int a = 0;
        for (int i = k_ - 1; i >= 0; --i) a = a * p_ + d[i];
        return a;
    }
    std::vector<int> vadd(const std::vector<int>& a, const std::vector<int>& b) const {
        std::vector<int> r(k_);
        for (int i = 0; i < k_; ++i) r[i] = (a[i] + b[i]) % p_;
        return r;
    }
    // Multiplication modulo a monic polynomial x^k + f; accept the first f giving a field.
    void find_modulus() {
        int count = 1;
        for (int i = 0; i < k_; ++i) count *= p_;
        for (int f = 1; f < count; ++f) {
            std::vector<int> low = decode(f);
            auto mulpoly = [&](int a, int b) {
                std::vector<int> x = decode(a), y = decode(b), r(2 * k_, 0);
                for (int i = 0; i < k_; ++i)
                    for (int j = 0; j < k_; ++j) r[i + j] = (r[i + j] + x[i] * y[j]) % p_;
                for (int d = 2 * k_ - 1; d >= k_; --d) {
                    int c = r[d];
                    if (!c) continue;
                    r[d] = 0;
                    for (int i = 0; i < k_; ++i) r[d - k_ + i] = ((r[d - k_ + i] - c * low[i]) % p_ + p_) % p_;
                }
                r.resize(k_);
                return encode(r);
            };
            bool field = true;
            for (int a = 0; a < q_ && field; ++a)
                for (int b = 0; b < q_; ++b) {
                    mul_[a * q_ + b] = mulpoly(a, b);
                    if (a && b && mul_[a * q_ + b] == 0) {
                        field = false;
                        break;
                    }
                }
            if (field) return;
        }
        throw std::logic_error("no irreducible modulus found");
    }

    int q_, p_, k_;
    std::vector<int> add_, mul_, neg_, inv_;
};

inline const GF& field(int q) {
    static std::mutex m;
    static std::map<int, std::unique_ptr<GF>> cache;
    std::lock_guard<std::mutex> lock(m);
    auto& slot = cache[q];
    if (!slot) slot = std::make_unique<GF>(q);
    return *slot;
}

inline bool is_prime_power(long q) {
    if (q < 2) return false;
    long p = 2;
    while (q % p) ++p;
    while (q % p == 0) q /= p;
    return q == 1;
}

/** Field sizes accepted by hall_number. */
inline const std::vector<int>& supported_q() {
    static const std::vector<int> qs = {2, 3, 4, 5, 7, 8, 9, 11, 13};
    return qs;
}

using FMatrix = std::vector<std::vector<int>>;  // row-major over some F_q

/** Reduced row echelon form in place; returns pivot columns. */
inline std::vector<int> rref(const GF& F, FMatrix& m, int cols) {
    std::vector<int> piv;
    int r = 0;
    for (int c = 0; c < cols && r < static_cast<int>(m.size()); ++c) {
        int s = -1;
        for (int i = r; i < static_cast<int>(m.size()); ++i)
            if (m[i][c]) {
                s = i;
                break;
            }
        if (s < 0) continue;
        std::swap(m[r], m[s]);
        int iv = F.inv(m[r][c]);
        for (int j = 0; j < cols; ++j) m[r][j] = F.mul(m[r][j], iv);
        for (int i = 0; i < static_cast<int>(m.size()); ++i)
            if (i != r && m[i][c]) {
                int f = m[i][c];
                for (int j = 0; j < cols; ++j) m[i][j] = F.sub(m[i][j], F.mul(f, m[r][j]));
            }
        piv.push_back(c);
        ++r;
    }
    m.resize(r);
    return piv;
}

inline int rank_of(const GF& F, FMatrix m, int cols) { return static_cast<int>(rref(F, m, cols).size()); }

// ---------------------------------------------------------------- quivers and isoclasses

/** \brief Equioriented A_n (arrows s -> s-1) or the cyclic quiver Z/n (arrows s -> s-1 mod n). */
struct Quiver {
    enum class Kind { Linear, Cyclic };
    Kind kind = Kind::Linear;
    int n = 0;

    static Quiver linear(int n) {
        if (n < 1) throw std::invalid_argument("A_n needs n >= 1");
        return {Kind::Linear, n};
    }
    static Quiver cyclic(int n) {
        if (n < 2) throw std::invalid_argument("cyclic quiver needs at least 2 vertices");
        return {Kind::Cyclic, n};
    }
    bool cyclic_kind() const { return kind == Kind::Cyclic; }
    std::string name() const { return (cyclic_kind() ? "C" : "A") + std::to_string(n); }
    bool has_arrow_from(int s) const { return cyclic_kind() || s >= 1; }
    int target(int s) const { return cyclic_kind() ? (s - 1 + n) % n : s - 1; }
    /** <x, y> = sum x_i y_i - sum_{arrows} x_tail y_head. */
    Int euler(const ZVec& x, const ZVec& y) const {
        Int r = 0;
        for (int s = 0; s < n; ++s) {
            r += x[s] * y[s];
            if (has_arrow_from(s)) r -= x[s] * y[target(s)];
        }
        return r;
    }
    Int symmetric(const ZVec& x, const ZVec& y) const { return euler(x, y) + euler(y, x); }
    bool operator==(const Quiver&) const = default;
    auto operator<=>(const Quiver&) const = default;
};

/** \brief Uniserial indecomposable: top at `top`, composition factors top, top-1, ... */
struct Segment {
    int top = 0;
    int len = 1;
    auto operator<=>(const Segment&) const = default;
};

/** \brief Isomorphism class of a (nilpotent) representation as a sorted multiset of segments. */
struct IsoClass {
    Quiver quiver;
    std::vector<Segment> segs;

    IsoClass() = default;
    IsoClass(Quiver q, std::vector<Segment> s) : quiver(q), segs(std::move(s)) {
        for (auto& g : segs) {
            if (g.len < 1 || g.top < 0 || g.top >= q.n) throw std::invalid_argument("bad segment");
            if (!q.cyclic_kind() && g.top - g.len + 1 < 0) throw std::invalid_argument("segment leaves A_n");
        }
        std::sort(segs.begin(), segs.end());
    }
    static IsoClass zero(Quiver q) { return IsoClass(q, {}); }
    static IsoClass simple(Quiver q, int s) { return IsoClass(q, {{s, 1}}); }
    /** Linear interval [a, b] in 1-based labels. */
    static IsoClass interval(Quiver q, int a, int b) { return IsoClass(q, {{b - 1, b - a + 1}}); }
    static IsoClass uniserial(Quiver q, int top, int len) {
        return IsoClass(q, {{((top % q.n) + q.n) % q.n, len}});
    }

    ZVec dim() const {
        ZVec d(quiver.n, 0);
        for (auto& g : segs)
            for (int t = 0; t < g.len; ++t) d[((g.top - t) % quiver.n + quiver.n) % quiver.n] += 1;
        return d;
    }
    std::string key() const {
        if (segs.empty()) return "0";
        std::string s;
        for (size_t i = 0; i < segs.size(); ++i) {
            if (i) s += "+";
            if (quiver.cyclic_kind())
                s += "(" + std::to_string(segs[i].top) + "," + std::to_string(segs[i].len) + ")";
            else
                s += "[" + std::to_string(segs[i].top - segs[i].len + 2) + "," + std::to_string(segs[i].top + 1) + "]";
        }
        return s;
    }
    IsoClass operator+(const IsoClass& o) const {
        auto s = segs;
        s.insert(s.end(), o.segs.begin(), o.segs.end());
        return IsoClass(quiver, s);
    }
    bool operator==(const IsoClass& o) const { return quiver == o.quiver && segs == o.segs; }
    bool operator<(const IsoClass& o) const {
        if (!(quiver == o.quiver)) return quiver < o.quiver;
        ZVec a = dim(), b = o.dim();
        if (a != b) return a < b;
        return segs < o.segs;
    }
};

inline std::string dim_str(const ZVec& d) {
    std::string s;
    for (size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
    return s;
}

/** \brief All isoclasses of the given dimension vector (nilpotent ones for the cyclic quiver). */
inline std::vector<IsoClass> enumerate_isoclasses(const Quiver& q, const ZVec& d) {
    if (static_cast<int>(d.size()) != q.n) throw std::invalid_argument("dimension vector length mismatch");
    Int total = 0;
    for (auto x : d) {
        if (x < 0) throw std::invalid_argument("negative dimension");
        if (x > 6) throw std::out_of_range("dimension guard exceeded (entries <= 6)");
        total += x;
    }
    std::vector<Segment> cand;
    for (int top = 0; top < q.n; ++top)
        for (int len = 1; len <= total; ++len) {
            if (!q.cyclic_kind() && top - len + 1 < 0) break;
            cand.push_back({top, len});
        }
    std::vector<IsoClass> out;
    std::vector<Segment> cur;
    ZVec rem = d;
    std::function<void(size_t)> rec = [&](size_t k) {
        bool done = std::all_of(rem.begin(), rem.end(), [](Int x) { return x == 0; });
        if (done) {
            out.emplace_back(q, cur);
            return;
        }
        if (k == cand.size()) return;
        rec(k + 1);
        const Segment& g = cand[k];
        int added = 0;
        while (true) {
            bool fits = true;
            for (int t = 0; t < g.len; ++t)
                if (rem[((g.top - t) % q.n + q.n) % q.n] <= 0) fits = false;
            // a segment may revisit a vertex on the cyclic quiver
            ZVec need(q.n, 0);
            for (int t = 0; t < g.len; ++t) need[((g.top - t) % q.n + q.n) % q.n] += 1;
            for (int s = 0; s < q.n; ++s)
                if (need[s] > rem[s]) fits = false;
            if (!fits) break;
            for (int s = 0; s < q.n; ++s) rem[s] -= need[s];
            cur.push_back(g);
            ++added;
            rec(k + 1);
        }
        for (int a = 0; a < added; ++a) {
            for (int t = 0; t < g.len; ++t) rem[((g.top - t) % q.n + q.n) % q.n] += 1;
            cur.pop_back();
        }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- submodule counting

namespace detail {

/** Explicit representation with the standard segment basis. */
struct Rep {
    Quiver quiver;
    ZVec d;
    std::vector<FMatrix> arrow;  // arrow[s]: d[target] x d[s]

    explicit Rep(const IsoClass& L) : quiver(L.quiver), d(L.dim()) {
        int n = quiver.n;
        std::vector<std::vector<std::pair<int, int>>> at(n);  // (segment, depth) per vertex slot
        std::vector<std::vector<int>> slot(L.segs.size());
        for (size_t g = 0; g < L.segs.size(); ++g)
            for (int t = 0; t < L.segs[g].len; ++t) {
                int s = ((L.segs[g].top - t) % n + n) % n;
                slot[g].push_back(static_cast<int>(at[s].size()));
                at[s].push_back({static_cast<int>(g), t});
            }
        arrow.assign(n, {});
        for (int s = 0; s < n; ++s) {
            if (!quiver.has_arrow_from(s)) continue;
            int h = quiver.target(s);
            arrow[s].assign(d[h], std::vector<int>(d[s], 0));
            for (int c = 0; c < d[s]; ++c) {
                auto [g, t] = at[s][c];
                if (t + 1 < L.segs[g].len) arrow[s][slot[g][t + 1]][c] = 1;
            }
        }
    }

    /** Image of column vectors under arrow s. */
    std::vector<std::vector<int>> apply(const GF& F, int s, const std::vector<std::vector<int>>& vs) const {
        std::vector<std::vector<int>> out;
        int h = quiver.target(s);
        for (auto& v : vs) {
            std::vector<int> w(d[h], 0);
            for (int r = 0; r < d[h]; ++r) {
                int acc = 0;
                for (int c = 0; c < d[s]; ++c)
                    if (arrow[s][r][c] && v[c]) acc = F.add(acc, F.mul(arrow[s][r][c], v[c]));
                w[r] = acc;
            }
            out.push_back(std::move(w));
        }
        return out;
    }
};

/** Reduce w modulo the row space of an RREF basis. */
inline std::vector<int> reduce_mod(const GF& F, const FMatrix& basis, const std::vector<int>& piv, std::vector<int> w) {
    for (size_t r = 0; r < basis.size(); ++r) {
        int f = w[piv[r]];
        if (!f) continue;
        for (size_t j = 0; j < w.size(); ++j) w[j] = F.sub(w[j], F.mul(f, basis[r][j]));
    }
    return w;
}

/** Kernel of the linear map given by images of the standard basis (columns). */
inline FMatrix kernel(const GF& F, const std::vector<std::vector<int>>& images, int dom, int cod) {
    FMatrix m(cod, std::vector<int>(dom, 0));
    for (int c = 0; c < dom; ++c)
        for (int r = 0; r < cod; ++r) m[r][c] = images[c][r];
    auto piv = rref(F, m, dom);
    std::set<int> ps(piv.begin(), piv.end());
    FMatrix ker;
    for (int f = 0; f < dom; ++f) {
        if (ps.count(f)) continue;
        std::vector<int> v(dom, 0);
        v[f] = 1;
        for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = F.neg(m[r][f]);
        ker.push_back(v);
    }
    return ker;
}

/** Visit every k-dimensional subspace of span(W) (rows of W), as a basis in ambient coordinates. */
inline void for_each_subspace(const GF& F, const FMatrix& W, int k, int amb,
                              const std::function<void(const FMatrix&)>& visit) {
    int m = static_cast<int>(W.size());
    if (k > m) return;
    if (k == 0) {
        visit({});
        return;
    }
    std::vector<int> piv(k);
    std::function<void(int, int)> choose = [&](int idx, int from) {
        if (idx == k) {
            std::vector<std::pair<int, int>> free;
            std::set<int> ps(piv.begin(), piv.end());
            for (int r = 0; r < k; ++r)
                for (int c = piv[r] + 1; c < m; ++c)
                    if (!ps.count(c)) free.push_back({r, c});
            std::vector<int> val(free.size(), 0);
            while (true) {
                FMatrix coef(k, std::vector<int>(m, 0));
                for (int r = 0; r < k; ++r) coef[r][piv[r]] = 1;
                for (size_t f = 0; f < free.size(); ++f) coef[free[f].first][free[f].second] = val[f];
                FMatrix sub(k, std::vector<int>(amb, 0));
                for (int r = 0; r < k; ++r)
                    for (int c = 0; c < m; ++c)
                        if (coef[r][c])
                            for (int j = 0; j < amb; ++j) sub[r][j] = F.add(sub[r][j], F.mul(coef[r][c], W[c][j]));
                visit(sub);
                size_t f = 0;
                while (f < val.size() && ++val[f] == F.q()) val[f++] = 0;
                if (f == val.size()) break;
            }
            return;
        }
        for (int c = from; c <= m - (k - idx); ++c) {
            piv[idx] = c;
            choose(idx + 1, c + 1);
        }
    };
    choose(0, 0);
}

/** Segment multiplicities from ranks r(s, m) of the path maps of length m starting at s. */
inline IsoClass classify(const Quiver& q, const std::function<int(int, int)>& r, int maxlen) {
    std::vector<Segment> segs;
    std::vector<std::vector<int>> memo(q.n, std::vector<int>(maxlen + 2, -1));
    auto R = [&](int s, int m) -> int {
        if (!q.cyclic_kind() && (s >= q.n || s - m < 0)) return 0;
        int& slot = memo[((s % q.n) + q.n) % q.n][m];
        if (slot < 0) slot = r(((s % q.n) + q.n) % q.n, m);
        return slot;
    };
    for (int s = 0; s < q.n; ++s)
        for (int k = 1; k <= maxlen; ++k) {
            int mult = (R(s, k - 1) - R(s + 1, k)) - (R(s, k) - R(s + 1, k + 1));
            for (int a = 0; a < mult; ++a) segs.push_back({s, k});
        }
    return IsoClass(q, segs);
}

}  // namespace detail

/** F^L_{M,N} for all (M, N) with dim N fixed: counts of submodules N' of L with (L/N', N') of type (M, N). */
using HallTable = std::map<std::pair<IsoClass, IsoClass>, long>;

inline HallTable compute_hall_table(const IsoClass& L, const ZVec& dimN, int q) {
    const GF& F = field(q);
    const Quiver& Q = L.quiver;
    detail::Rep rep(L);
    int n = Q.n;
    for (int s = 0; s < n; ++s)
        if (dimN[s] < 0 || dimN[s] > rep.d[s]) return {};
    int maxlen = 0;
    for (auto& g : L.segs) maxlen = std::max(maxlen, g.len);

    // Path images of the ambient basis: img[s][m] = images of e_c under the path of length m from s.
    std::vector<std::vector<std::vector<std::vector<int>>>> path(n);
    for (int s = 0; s < n; ++s) {
        std::vector<std::vector<int>> cur;
        for (int c = 0; c < rep.d[s]; ++c) {
            std::vector<int> e(rep.d[s], 0);
            e[c] = 1;
            cur.push_back(e);
        }
        path[s].push_back(cur);
        int at = s;
        for (int m = 1; m <= maxlen + 1; ++m) {
            if (!Q.has_arrow_from(at) || cur.empty()) break;
            cur = rep.apply(F, at, cur);
            at = Q.target(at);
            path[s].push_back(cur);
        }
    }
    auto path_image = [&](int s, int m, const FMatrix& U) {
        // U rows are vectors in L_s; combine the basis images
        std::vector<std::vector<int>> out;
        if (m >= static_cast<int>(path[s].size())) return out;
        const auto& im = path[s][m];
        int h = ((s - m) % n + n) % n;
        for (auto& u : U) {
            std::vector<int> w(rep.d[h], 0);
            for (int c = 0; c < rep.d[s]; ++c)
                if (u[c])
                    for (int j = 0; j < rep.d[h]; ++j) w[j] = F.add(w[j], F.mul(u[c], im[c][j]));
            out.push_back(w);
        }
        return out;
    };
    auto full = [&](int s) {
        FMatrix I;
        for (int c = 0; c < rep.d[s]; ++c) {
            std::vector<int> e(rep.d[s], 0);
            e[c] = 1;
            I.push_back(e);
        }
        return I;
    };

    HallTable table;
    std::vector<FMatrix> U(n);
    auto record = [&]() {
        if (Q.cyclic_kind()) {
            // close the cycle: arrow 0 -> n-1 must map U_0 into U_{n-1}
            FMatrix b = U[n - 1];
            auto piv = rref(F, b, static_cast<int>(rep.d[n - 1]));
            for (auto& w : rep.apply(F, 0, U[0]))
                for (auto x : detail::reduce_mod(F, b, piv, w))
                    if (x) return;
        }
        auto rsub = [&](int s, int m) {
            if (m == 0) return static_cast<int>(U[s].size());
            auto im = path_image(s, m, U[s]);
            if (im.empty()) return 0;
            int h = ((s - m) % n + n) % n;
            return rank_of(F, im, static_cast<int>(rep.d[h]));
        };
        auto rquo = [&](int s, int m) {
            int h = ((s - m) % n + n) % n;
            if (m == 0) return static_cast<int>(rep.d[s] - U[s].size());
            auto im = path_image(s, m, full(s));
            if (im.empty()) return 0;
            for (auto& u : U[h]) im.push_back(u);
            return rank_of(F, im, static_cast<int>(rep.d[h])) - static_cast<int>(U[h].size());
        };
        IsoClass N = detail::classify(Q, rsub, maxlen);
        IsoClass M = detail::classify(Q, rquo, maxlen);
        ++table[{M, N}];
    };
    std::function<void(int)> rec = [&](int s) {
        if (s == n) {
            record();
            return;
        }
        FMatrix W;
        int ds = static_cast<int>(rep.d[s]);
        if (Q.has_arrow_from(s) && !(Q.cyclic_kind() && s == 0)) {
            int h = Q.target(s);
            FMatrix b = U[h];
            auto piv = rref(F, b, static_cast<int>(rep.d[h]));
            std::vector<std::vector<int>> res;
            for (auto& w : rep.apply(F, s, full(s))) res.push_back(detail::reduce_mod(F, b, piv, w));
            W = detail::kernel(F, res, ds, static_cast<int>(rep.d[h]));
        } else {
            W = full(s);
        }
        detail::for_each_subspace(F, W, static_cast<int>(dimN[s]), ds, [&](const FMatrix& sub) {
            U[s] = sub;
            rec(s + 1);
        });
        U[s].clear();
    };
    rec(0);
    return table;
}

// ---------------------------------------------------------------- cache

/** \brief Process-wide Hall-number store, optionally persisted as line records. */
class HallStore {
public:
    static HallStore& instance() {
        static HallStore s;
        return s;
    }

    static std::string record_key(const IsoClass& L, const IsoClass& M, const IsoClass& N, int q) {
        return L.quiver.name() + "|" + dim_str(L.dim()) + ";" + dim_str(M.dim()) + ";" + dim_str(N.dim()) + "|" +
               L.key() + ";" + M.key() + ";" + N.key() + "|" + std::to_string(q);
    }

    /** Bind to dir/hall_numbers.txt; existing records are loaded. */
    void attach(const std::string& dir) {
        std::lock_guard<std::mutex> lock(m_);
        std::filesystem::create_directories(dir);
        path_ = (std::filesystem::path(dir) / "hall_numbers.txt").string();
        std::ifstream in(path_);
        std::string line;
        long lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            auto pos = line.rfind('|');
            if (pos == std::string::npos) throw std::runtime_error(path_ + ":" + std::to_string(lineno) + ": corrupt record");
            try {
                records_[line.substr(0, pos)] = std::stol(line.substr(pos + 1));
            } catch (const std::exception&) {
                throw std::runtime_error(path_ + ":" + std::to_string(lineno) + ": corrupt record");
            }
        }
    }
    void detach() {
        std::lock_guard<std::mutex> lock(m_);
        path_.clear();
    }
    void clear_memory() {
        std::lock_guard<std::mutex> lock(m_);
        records_.clear();
        tables_.clear();
    }
    std::string path() const { return path_; }
    long computed_tables() const { return computed_; }

    const HallTable& table(const IsoClass& L, const ZVec& dimN, int q) {
        auto tkey = std::make_tuple(L, dimN, q);
        {
            std::lock_guard<std::mutex> lock(m_);
            auto it = tables_.find(tkey);
            if (it != tables_.end()) return it->second;
            // try to assemble from persisted records
            ZVec dM = L.dim();
            for (size_t s = 0; s < dM.size(); ++s) dM[s] -= dimN[s];
            if (std::all_of(dM.begin(), dM.end(), [](Int x) { return x >= 0; })) {
                HallTable t;
                bool complete = !path_.empty() && !records_.empty();
                if (complete)
                    for (auto& M : enumerate_isoclasses(L.quiver, dM)) {
                        for (auto& N : enumerate_isoclasses(L.quiver, dimN)) {
                            auto r = records_.find(record_key(L, M, N, q));
                            if (r == records_.end()) {
                                complete = false;
                                break;
                            }
                            if (r->second) t[{M, N}] = r->second;
                        }
                        if (!complete) break;
                    }
                if (complete) return tables_.emplace(tkey, std::move(t)).first->second;
            }
        }
        HallTable t = compute_hall_table(L, dimN, q);
        std::lock_guard<std::mutex> lock(m_);
        ++computed_;
        persist(L, dimN, q, t);
        return tables_.emplace(tkey, std::move(t)).first->second;
    }

private:
    void persist(const IsoClass& L, const ZVec& dimN, int q, const HallTable& t) {
        ZVec dM = L.dim();
        for (size_t s = 0; s < dM.size(); ++s) dM[s] -= dimN[s];
        if (path_.empty() || std::any_of(dM.begin(), dM.end(), [](Int x) { return x < 0; })) return;
        std::ofstream out(path_, std::ios::app);
        for (auto& M : enumerate_isoclasses(L.quiver, dM))
            for (auto& N : enumerate_isoclasses(L.quiver, dimN)) {
                auto it = t.find({M, N});
                long c = it == t.end() ? 0 : it->second;
                std::string k = record_key(L, M, N, q);
                if (records_.emplace(k, c).second && out) out << k << "|" << c << "\n";
            }
    }

    std::mutex m_;
    std::string path_;
    std::map<std::string, long> records_;
    std::map<std::tuple<IsoClass, ZVec, int>, HallTable> tables_;
    long computed_ = 0;
};

/** \brief Number of submodules of L isomorphic to N with quotient isomorphic to M, over F_q. */
inline long hall_number(const IsoClass& L, const IsoClass& M, const IsoClass& N, int q) {
    if (!(L.quiver == M.quiver) || !(L.quiver == N.quiver)) throw std::invalid_argument("quiver mismatch");
    if (std::find(supported_q().begin(), supported_q().end(), q) == supported_q().end())
        throw std::out_of_range("field size " + std::to_string(q) + " outside the supported list");
    ZVec dl = L.dim(), dm = M.dim(), dn = N.dim();
    for (size_t s = 0; s < dl.size(); ++s)
        if (dl[s] != dm[s] + dn[s]) throw std::invalid_argument("dimension vectors do not add up");
    const HallTable& t = HallStore::instance().table(L, dn, q);
    auto it = t.find({M, N});
    return it == t.end() ? 0 : it->second;
}

/** Default cache directory from WPL_CACHE_DIR, else empty (memory only). */
inline std::string default_cache_dir() {
    const char* e = std::getenv("WPL_CACHE_DIR");
    return e ? std::string(e) : std::string();
}

/** \brief Summary of cache maintenance. */
struct CacheSummary {
    long records = 0;
    long checked = 0;
    long mismatches = 0;
    long removed = 0;
    std::string detail;
};

/** stats | verify | compact on dir/hall_numbers.txt. */
inline CacheSummary cache_admin(const std::string& cmd, const std::string& dir, unsigned seed = 1) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw std::runtime_error("cache directory does not exist: " + dir);
    fs::path file = fs::path(dir) / "hall_numbers.txt";
    struct Rec {
        std::string key;
        long count;
        long line;
    };
    std::vector<Rec> recs;
    {
        std::ifstream in(file);
        std::string line;
        long n = 0;
        while (std::getline(in, line)) {
            ++n;
            if (line.empty()) continue;
            std::vector<std::string> f;
            std::stringstream ss(line);
            std::string part;
            while (std::getline(ss, part, '|')) f.push_back(part);
            long c = 0;
            bool ok = f.size() == 5;
            if (ok) try {
                    size_t used = 0;
                    c = std::stol(f[4], &used);
                    ok = used == f[4].size() && c >= 0;
                    (void)std::stoi(f[3]);
                } catch (const std::exception&) {
                    ok = false;
                }
            if (!ok) throw std::runtime_error(file.string() + ":" + std::to_string(n) + ": corrupt record");
            recs.push_back({line.substr(0, line.rfind('|')), c, n});
        }
    }
    CacheSummary s;
    s.records = static_cast<long>(recs.size());
    if (cmd == "stats") return s;
    if (cmd == "compact") {
        std::map<std::string, long> seen;
        std::vector<Rec> keep;
        for (auto& r : recs) {
            auto [it, fresh] = seen.emplace(r.key, r.count);
            if (fresh) keep.push_back(r);
            else if (it->second != r.count)
                throw std::runtime_error(file.string() + ":" + std::to_string(r.line) + ": conflicting duplicate");
        }
        s.removed = s.records - static_cast<long>(keep.size());
        std::ofstream out(file, std::ios::trunc);
        for (auto& r : keep) out << r.key << "|" << r.count << "\n";
        s.records = static_cast<long>(keep.size());
        return s;
    }
    if (cmd != "verify") throw std::invalid_argument("unknown cache command: " + cmd);
    // recompute a 1% sample (at least one record) with a deterministic stride
    if (recs.empty()) return s;
    size_t stride = std::max<size_t>(1, recs.size() / std::max<size_t>(1, recs.size() / 100));
    size_t start = seed % stride;
    auto parse_class = [](const Quiver& q, const std::string& key) {
        std::vector<Segment> segs;
        if (key == "0") return IsoClass(q, segs);
        std::stringstream ss(key);
        std::string part;
        while (std::getline(ss, part, '+')) {
            int a = 0, b = 0;
            if (std::sscanf(part.c_str(), q.cyclic_kind() ? "(%d,%d)" : "[%d,%d]", &a, &b) != 2)
                throw std::runtime_error("unparsable isoclass key " + part);
            if (q.cyclic_kind()) segs.push_back({a, b});
            else segs.push_back({b - 1, b - a + 1});
        }
        return IsoClass(q, segs);
    };
    for (size_t i = start; i < recs.size(); i += stride) {
        std::vector<std::string> f;
        std::stringstream ss(recs[i].key);
        std::string part;
        while (std::getline(ss, part, '|')) f.push_back(part);
        Quiver q = f[0][0] == 'C' ? Quiver::cyclic(std::stoi(f[0].substr(1))) : Quiver::linear(std::stoi(f[0].substr(1)));
        std::vector<std::string> ks;
        std::stringstream ks_s(f[2]);
        while (std::getline(ks_s, part, ';')) ks.push_back(part);
        IsoClass L = parse_class(q, ks.at(0)), M = parse_class(q, ks.at(1)), N = parse_class(q, ks.at(2));
        HallTable t = compute_hall_table(L, N.dim(), std::stoi(f[3]));
        auto it = t.find({M, N});
        long c = it == t.end() ? 0 : it->second;
        ++s.checked;
        if (c != recs[i].count) {
            ++s.mismatches;
            s.detail += "line " + std::to_string(recs[i].line) + " ";
        }
    }
    return s;
}

// ---------------------------------------------------------------- Hall polynomials

namespace detail {

/** Coefficients (ascending) of the polynomial through the points (x_k, y_k). */
inline std::vector<Q> interpolate(const std::vector<Q>& xs, const std::vector<Q>& ys) {
    size_t n = xs.size();
    std::vector<Q> coef(n, Q(0));
    for (size_t k = 0; k < n; ++k) {
        std::vector<Q> basis = {Q(1)};
        Q denom = 1;
        for (size_t j = 0; j < n; ++j) {
            if (j == k) continue;
            std::vector<Q> nb(basis.size() + 1, Q(0));
            for (size_t i = 0; i < basis.size(); ++i) {
                nb[i + 1] += basis[i];
                nb[i] -= basis[i] * xs[j];
            }
            basis = nb;
            denom *= xs[k] - xs[j];
        }
        for (size_t i = 0; i < basis.size(); ++i) coef[i] += ys[k] * basis[i] / denom;
    }
    while (!coef.empty() && coef.back() == 0) coef.pop_back();
    return coef;
}

}  // namespace detail

/** Degree bound for F^L_{M,N}(q): the Grassmannian dimension sum n_s (d_s - n_s). */
inline int hall_degree_bound(const ZVec& dimL, const ZVec& dimN) {
    Int d = 0;
    for (size_t s = 0; s < dimL.size(); ++s) d += dimN[s] * (dimL[s] - dimN[s]);
    return static_cast<int>(d);
}

using HallPolyTable = std::map<std::pair<IsoClass, IsoClass>, Laurent>;  // polynomials in v^2

/** \brief Hall polynomials for (L, dim N), interpolated from supported field sizes with one spare point. */
inline const HallPolyTable& hall_polynomials(const IsoClass& L, const ZVec& dimN) {
    static std::mutex m;
    static std::map<std::pair<IsoClass, ZVec>, HallPolyTable> memo;
    {
        std::lock_guard<std::mutex> lock(m);
        auto it = memo.find({L, dimN});
        if (it != memo.end()) return it->second;
    }
    int D = hall_degree_bound(L.dim(), dimN);
    const auto& qs = supported_q();
    if (static_cast<int>(qs.size()) < D + 1)
        throw std::out_of_range("insufficient q-points for exact mode (degree bound " + std::to_string(D) + ")");
    size_t npts = std::min<size_t>(qs.size(), static_cast<size_t>(D) + 2);
    std::vector<const HallTable*> tabs;
    std::set<std::pair<IsoClass, IsoClass>> keys;
    for (size_t k = 0; k < npts; ++k) {
        tabs.push_back(&HallStore::instance().table(L, dimN, qs[k]));
        for (auto& [mn, c] : *tabs.back()) keys.insert(mn);
    }
    HallPolyTable out;
    for (auto& mn : keys) {
        std::vector<Q> xs, ys;
        for (size_t k = 0; k < npts; ++k) {
            xs.push_back(qs[k]);
            auto it = tabs[k]->find(mn);
            ys.push_back(it == tabs[k]->end() ? 0 : it->second);
        }
        std::vector<Q> sub_x(xs.begin(), xs.begin() + D + 1), sub_y(ys.begin(), ys.begin() + D + 1);
        auto coef = detail::interpolate(sub_x, sub_y);
        for (size_t k = static_cast<size_t>(D) + 1; k < npts; ++k) {
            Q val = 0, pw = 1;
            for (auto& c : coef) {
                val += c * pw;
                pw *= xs[k];
            }
            if (val != ys[k]) throw std::logic_error("Hall polynomial interpolation inconsistent at " + L.key());
        }
        Laurent p;
        for (size_t i = 0; i < coef.size(); ++i) {
            if (coef[i].get_den() != 1) throw std::logic_error("non-integral Hall polynomial at " + L.key());
            p += Laurent::vpow(2 * static_cast<int>(i), coef[i]);
        }
        if (!p.is_zero()) out[mn] = p;
    }
    std::lock_guard<std::mutex> lock(m);
    return memo.emplace(std::make_pair(L, dimN), std::move(out)).first->second;
}

// ---------------------------------------------------------------- Hall algebras

/** \brief Scalars specialized at v = sqrt q. */
struct NumericRing {
    using S = SqrtQ;
    int q;
    S zero() const { return SqrtQ(q, 0); }
    S one() const { return SqrtQ(q, 1); }
    S from(const VFrac& f) const { return evaluate(f, q); }
    S vpow(int k) const { return SqrtQ::vpow(q, k); }
    S coeff(const IsoClass& L, const IsoClass& M, const IsoClass& N) const {
        const HallTable& t = HallStore::instance().table(L, N.dim(), q);
        auto it = t.find({M, N});
        return SqrtQ(q, it == t.end() ? 0 : it->second);
    }
    std::string tag() const { return "q=" + std::to_string(q); }
};

/** \brief Generic scalars in Q(v) with interpolated Hall polynomials. */
struct GenericRing {
    using S = VFrac;
    S zero() const { return VFrac(); }
    S one() const { return VFrac(1); }
    S from(const VFrac& f) const { return f; }
    S vpow(int k) const { return VFrac::vpow(k); }
    S coeff(const IsoClass& L, const IsoClass& M, const IsoClass& N) const {
        const HallPolyTable& t = hall_polynomials(L, N.dim());
        auto it = t.find({M, N});
        return it == t.end() ? VFrac() : VFrac(it->second);
    }
    std::string tag() const { return "generic"; }
};

template <class Ring>
struct HallElement {
    using S = typename Ring::S;
    std::map<IsoClass, S> terms;

    bool is_zero() const { return terms.empty(); }
    void add(const IsoClass& x, const S& c) {
        if (c.is_zero()) return;
        auto it = terms.find(x);
        if (it == terms.end()) terms.emplace(x, c);
        else {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }
    HallElement operator+(const HallElement& o) const {
        HallElement r = *this;
        for (auto& [x, c] : o.terms) r.add(x, c);
        return r;
    }
    HallElement scaled(const S& s) const {
        HallElement r;
        for (auto& [x, c] : terms) r.add(x, c * s);
        return r;
    }
    HallElement operator-(const HallElement& o) const {
        HallElement r = *this;
        for (auto& [x, c] : o.terms) r.add(x, -c);
        return r;
    }
    bool operator==(const HallElement& o) const { return terms == o.terms; }
    std::string str() const {
        if (terms.empty()) return "0";
        std::string s;
        for (auto& [x, c] : terms) s += (s.empty() ? "" : " + ") + ("(" + c.str() + ")u_" + x.key());
        return s;
    }
};

/** \brief Twisted Ringel-Hall algebra: u_M u_N = v^<M,N> sum_L F^L_{M,N} u_L. */
template <class Ring>
class HallAlgebra {
public:
    using S = typename Ring::S;
    using Elem = HallElement<Ring>;

    HallAlgebra(Quiver q, Ring r) : quiver_(q), ring_(r) {}
    const Quiver& quiver() const { return quiver_; }
    const Ring& ring() const { return ring_; }

    Elem u(const IsoClass& x) const {
        if (!(x.quiver == quiver_)) throw std::invalid_argument("quiver mismatch");
        Elem e;
        e.add(x, ring_.one());
        return e;
    }
    Elem simple(int s) const { return u(IsoClass::simple(quiver_, s)); }
    Elem one() const { return u(IsoClass::zero(quiver_)); }

    Elem mul(const Elem& a, const Elem& b) const {
        Elem r;
        for (auto& [M, x] : a.terms)
            for (auto& [N, y] : b.terms) {
                ZVec dm = M.dim(), dn = N.dim(), dl(dm.size());
                for (size_t s = 0; s < dm.size(); ++s) dl[s] = dm[s] + dn[s];
                S pre = x * y * ring_.vpow(static_cast<int>(quiver_.euler(dm, dn)));
                for (auto& L : enumerate_isoclasses(quiver_, dl)) r.add(L, pre * ring_.coeff(L, M, N));
            }
        return r;
    }
    /** [x, y]_c = xy - c yx. */
    Elem skew(const Elem& x, const Elem& y, const S& c) const { return mul(x, y) - mul(y, x).scaled(c); }
    /** v^{-1}: left-nested [[x1, x2]_c, ...]; v: right-nested [x1, [x2, ...]_c]_c. */
    Elem iterated_skew(const std::vector<Elem>& xs, int sign) const {
        if (xs.empty()) throw std::invalid_argument("empty skew commutator");
        S c = ring_.vpow(sign);
        if (sign < 0) {
            Elem r = xs[0];
            for (size_t k = 1; k < xs.size(); ++k) r = skew(r, xs[k], c);
            return r;
        }
        Elem r = xs.back();
        for (size_t k = xs.size() - 1; k-- > 0;) r = skew(xs[k], r, c);
        return r;
    }

private:
    Quiver quiver_;
    Ring ring_;
};

/** \brief Lemma A.2(1),(3) in the Hall algebra of A_n at each q. */
inline Report verify_appendix_hall(int n, const std::vector<int>& q_list) {
    if (n < 2 || n > 4) throw std::out_of_range("appendix Hall check needs 2 <= n <= 4");
    Report rep;
    rep.suite = "hall-appendix";
    rep.params["n"] = n;
    rep.params["q"] = q_list;
    Quiver Qv = Quiver::linear(n);
    for (int q : q_list) {
        HallAlgebra<NumericRing> H(Qv, NumericRing{q});
        std::string tag = "A" + std::to_string(n) + ".q" + std::to_string(q);
        auto check = [&](const std::string& id, const std::string& ref, const HallElement<NumericRing>& lhs,
                         const HallElement<NumericRing>& rhs) {
            Stopwatch sw;
            bool ok = lhs == rhs;
            rep.add({tag + "." + id, ref, ok ? Status::Pass : Status::Fail, lhs.str(), rhs.str(), sw.ms()});
        };
        auto u = [&](int i) { return H.simple(i - 1); };
        auto P = [&](int m) { return H.u(IsoClass::interval(Qv, 1, m)); };
        check("1.v", "drinfeld relations for A2 (1)", H.skew(u(1), u(2), H.ring().vpow(1)),
              P(2).scaled(H.ring().vpow(0) * SqrtQ(q, -1)));
        check("1.vinv", "drinfeld relations for A2 (1)", H.skew(u(2), u(1), H.ring().vpow(-1)),
              P(2).scaled(H.ring().vpow(-1)));
        for (int m = 2; m <= n; ++m) {
            std::vector<HallElement<NumericRing>> up, down;
            for (int i = 1; i <= m; ++i) up.push_back(u(i));
            for (int i = m; i >= 1; --i) down.push_back(u(i));
            check("3.v.m" + std::to_string(m), "drinfeld relations for A2 (3)", H.iterated_skew(up, 1),
                  P(m).scaled(SqrtQ(q, (m - 1) % 2 ? -1 : 1)));
            check("3.vinv.m" + std::to_string(m), "drinfeld relations for A2 (3)", H.iterated_skew(down, -1),
                  P(m).scaled(H.ring().vpow(-(m - 1))));
        }
    }
    return rep;
}

}  // namespace wpl

#endif
