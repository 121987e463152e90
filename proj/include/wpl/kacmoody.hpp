#ifndef WPL_KACMOODY_HPP
#define WPL_KACMOODY_HPP

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lattice.hpp"
#include "numeric.hpp"
#include "report.hpp"
#include "weyl.hpp"

namespace wpl {

/** \brief Coordinates of an element in the stored basis of a KMAlgebra. */
struct LieElement {
    std::vector<Q> c;

    LieElement() = default;
    explicit LieElement(size_t n) : c(n, Q(0)) {}
    static LieElement unit(size_t n, int k, const Q& s = 1) {
        LieElement e(n);
        e.c[k] = s;
        return e;
    }
    size_t size() const { return c.size(); }
    bool is_zero() const {
        for (auto& v : c)
            if (v != 0) return false;
        return true;
    }
    LieElement& operator+=(const LieElement& o) {
        for (size_t k = 0; k < c.size(); ++k) c[k] += o.c[k];
        return *this;
    }
    LieElement operator+(const LieElement& o) const {
        LieElement r = *this;
        r += o;
        return r;
    }
    LieElement operator*(const Q& s) const {
        LieElement r = *this;
        for (auto& v : r.c) v *= s;
        return r;
    }
    LieElement operator-() const { return *this * Q(-1); }
    LieElement operator-(const LieElement& o) const { return *this + (-o); }
    bool operator==(const LieElement& o) const {
        if (c.size() != o.c.size()) return false;
        for (size_t k = 0; k < c.size(); ++k)
            if (c[k] != o.c[k]) return false;
        return true;
    }
};

/** \brief Linear map stored by the images of basis vectors. */
struct LieOperator {
    std::vector<LieElement> cols;

    static LieOperator identity(size_t n) {
        LieOperator t;
        for (size_t k = 0; k < n; ++k) t.cols.push_back(LieElement::unit(n, static_cast<int>(k)));
        return t;
    }
    size_t size() const { return cols.size(); }
    LieElement operator()(const LieElement& x) const {
        LieElement r(cols.size());
        for (size_t k = 0; k < cols.size(); ++k)
            if (x.c[k] != 0) r += cols[k] * x.c[k];
        return r;
    }
    /** Composition: (A * B)(x) = A(B(x)). */
    LieOperator operator*(const LieOperator& o) const {
        LieOperator r;
        for (auto& col : o.cols) r.cols.push_back((*this)(col));
        return r;
    }
    bool operator==(const LieOperator& o) const { return cols == o.cols; }
};

enum class KMMode { Finite, Truncated };

struct SparseTerm {
    int idx;
    Q coef;
};
using SparseVec = std::vector<SparseTerm>;

/** \brief Basis element: degree, and how it is produced from a generator bracket. */
struct KMBasis {
    ZVec deg;
    bool cartan = false;
    int gen = -1;  // vertex of the generator used
    bool gen_is_e = true;
    int child = -1;  // -1: basis = scalar * generator
    Q scalar = 1;
};

class KMAlgebra;

namespace detail {

using QMat = std::vector<std::vector<Q>>;  // rows x cols

inline std::vector<Q> mat_vec(const QMat& m, const std::vector<Q>& v) {
    std::vector<Q> r(m.size(), Q(0));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j)
            if (v[j] != 0 && m[i][j] != 0) r[i] += m[i][j] * v[j];
    return r;
}

/** Reduced row echelon form in place; returns pivot columns. */
inline std::vector<int> rref(QMat& m, size_t cols) {
    std::vector<int> piv;
    size_t row = 0;
    for (size_t col = 0; col < cols && row < m.size(); ++col) {
        size_t sel = row;
        while (sel < m.size() && m[sel][col] == 0) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[sel], m[row]);
        Q inv = 1 / m[row][col];
        for (auto& v : m[row]) v *= inv;
        for (size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col] == 0) continue;
            Q f = m[r][col];
            for (size_t k = 0; k < cols; ++k) m[r][k] -= f * m[row][k];
        }
        piv.push_back(static_cast<int>(col));
        ++row;
    }
    return piv;
}

inline ZVec negate(ZVec v) {
    for (auto& x : v) x = -x;
    return v;
}

inline bool nonneg_vec(const ZVec& v) {
    for (auto x : v)
        if (x < 0) return false;
    return true;
}

inline bool is_zero_vec(const ZVec& v) {
    for (auto x : v)
        if (x != 0) return false;
    return true;
}

struct OutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

}  // namespace detail

/**
 * \brief Kac-Moody algebra g_Q with basis {root vectors, h_i}.
 * Finite mode: Chevalley basis from a sign function. Truncated mode: root spaces up to a height,
 * realized as the quotient of the free algebra on f_i by the radical of the e-action.
 */
class KMAlgebra {
public:
    static KMAlgebra build(const CartanData& cd, KMMode mode, int height_cap = 0) {
        KMAlgebra a;
        a.cd_ = cd;
        a.mode_ = mode;
        if (mode == KMMode::Finite) {
            if (!a.finite_cartan()) throw std::invalid_argument("finite mode requires a finite-type Cartan matrix");
            a.build_finite();
        } else {
            if (height_cap < 1) throw std::invalid_argument("truncated mode needs height_cap >= 1");
            a.H_ = height_cap;
            a.build_truncated();
        }
        return a;
    }
    static KMAlgebra build(const WeightData& w, KMMode mode, int height_cap = 0) {
        return build(StarQuiver(w).cartan(), mode, height_cap);
    }

    int rank() const { return cd_.rank(); }
    int dim() const { return static_cast<int>(basis_.size()); }
    KMMode mode() const { return mode_; }
    int height_cap() const { return H_; }
    const CartanData& cartan() const { return cd_; }
    const KMBasis& basis(int k) const { return basis_[k]; }
    const std::vector<KMBasis>& basis() const { return basis_; }
    std::vector<int> indices_of_degree(const ZVec& d) const {
        auto it = by_deg_.find(d);
        return it == by_deg_.end() ? std::vector<int>{} : it->second;
    }
    std::vector<ZVec> root_degrees() const {
        std::vector<ZVec> out;
        for (auto& [d, v] : by_deg_)
            if (!detail::is_zero_vec(d)) out.push_back(d);
        return out;
    }

    LieElement zero() const { return LieElement(basis_.size()); }
    LieElement e(int i) const { return LieElement::unit(basis_.size(), e_idx_.at(i), e_sc_.at(i)); }
    LieElement f(int i) const { return LieElement::unit(basis_.size(), f_idx_.at(i), f_sc_.at(i)); }
    LieElement h(int i) const { return LieElement::unit(basis_.size(), h_idx_.at(i)); }
    /** h_alpha = sum alpha_k h_k. */
    LieElement h_of(const std::vector<Q>& alpha) const {
        LieElement r = zero();
        for (int k = 0; k < rank(); ++k) r.c[h_idx_[k]] = alpha[k];
        return r;
    }

    bool defined(int a, int b) const { return table_[a][b].has_value(); }
    const SparseVec& bracket_basis(int a, int b) const {
        if (!table_[a][b]) throw detail::OutOfRange("bracket beyond the height truncation");
        return *table_[a][b];
    }

    LieElement bracket(const LieElement& x, const LieElement& y) const {
        LieElement r = zero();
        for (size_t a = 0; a < x.size(); ++a) {
            if (x.c[a] == 0) continue;
            for (size_t b = 0; b < y.size(); ++b) {
                if (y.c[b] == 0) continue;
                Q s = x.c[a] * y.c[b];
                for (auto& t : bracket_basis(static_cast<int>(a), static_cast<int>(b))) r.c[t.idx] += s * t.coef;
            }
        }
        return r;
    }

    /** Iterated bracket nested to the left: [[x1, x2], ..., xn]. */
    LieElement nested(const std::vector<LieElement>& xs) const {
        if (xs.empty()) throw std::invalid_argument("empty bracket");
        LieElement r = xs[0];
        for (size_t k = 1; k < xs.size(); ++k) r = bracket(r, xs[k]);
        return r;
    }

    LieOperator ad(const LieElement& x) const {
        LieOperator t;
        for (int k = 0; k < dim(); ++k) t.cols.push_back(bracket(x, LieElement::unit(basis_.size(), k)));
        return t;
    }

    /** exp(ad x) for ad-nilpotent x; cap dim + 1. */
    LieOperator exp_ad(const LieElement& x) const {
        LieOperator t;
        for (int k = 0; k < dim(); ++k) {
            LieElement cur = LieElement::unit(basis_.size(), k), sum = cur;
            int n = 1;
            for (;; ++n) {
                if (n > dim() + 1) throw std::runtime_error("ad is not nilpotent within dim + 1 steps");
                cur = bracket(x, cur) * (Q(1) / n);
                if (cur.is_zero()) break;
                sum += cur;
            }
            t.cols.push_back(sum);
        }
        return t;
    }

    /** exp(ad e) exp(ad -f) exp(ad e) for an sl2 pair (e, f). */
    LieOperator tits(const LieElement& e, const LieElement& f) const {
        LieOperator a = exp_ad(e);
        return a * exp_ad(-f) * a;
    }
    LieOperator tits(int i) const { return tits(e(i), f(i)); }

    /** Algebra map determined by the images of e_i, f_i. */
    LieOperator from_generators(const std::vector<LieElement>& te, const std::vector<LieElement>& tf) const {
        std::vector<std::optional<LieElement>> img(basis_.size());
        std::function<const LieElement&(int)> get = [&](int k) -> const LieElement& {
            if (img[k]) return *img[k];
            const KMBasis& b = basis_[k];
            LieElement v;
            if (b.cartan) {
                int i = b.gen;
                v = bracket(te[i], tf[i]);
            } else {
                const LieElement& g = b.gen_is_e ? te[b.gen] : tf[b.gen];
                v = b.child < 0 ? g * b.scalar : bracket(g, get(b.child)) * b.scalar;
            }
            img[k] = v;
            return *img[k];
        };
        LieOperator t;
        for (int k = 0; k < dim(); ++k) t.cols.push_back(get(k));
        return t;
    }

    /** Diagonal sign character e_i -> s_i e_i, f_i -> s_i f_i. */
    LieOperator sign_character(const std::vector<int>& s) const {
        std::vector<LieElement> te, tf;
        for (int i = 0; i < rank(); ++i) {
            te.push_back(e(i) * Q(s[i]));
            tf.push_back(f(i) * Q(s[i]));
        }
        return from_generators(te, tf);
    }

    /** Bracket preservation on all basis pairs, or a seeded sample of 500 in truncated mode. */
    bool is_automorphism(const LieOperator& t, std::string* witness = nullptr, unsigned seed = 1) const {
        auto test = [&](int a, int b) {
            if (!defined(a, b)) return true;
            LieElement lhs = t(bracket(LieElement::unit(basis_.size(), a), LieElement::unit(basis_.size(), b)));
            LieElement rhs;
            try {
                rhs = bracket(t.cols[a], t.cols[b]);
            } catch (const detail::OutOfRange&) {
                return true;
            }
            if (lhs == rhs) return true;
            if (witness) *witness = "basis pair (" + std::to_string(a) + "," + std::to_string(b) + ")";
            return false;
        };
        if (mode_ == KMMode::Finite) {
            for (int a = 0; a < dim(); ++a)
                for (int b = 0; b < dim(); ++b)
                    if (!test(a, b)) return false;
            return true;
        }
        std::mt19937 rng(seed);
        std::uniform_int_distribution<int> d(0, dim() - 1);
        for (int s = 0; s < 500; ++s)
            if (!test(d(rng), d(rng))) return false;
        return true;
    }

    /** Jacobi identity: all unordered basis triples (finite) or a seeded 500-triple sample. */
    std::pair<long, long> jacobi_failures(unsigned seed = 1) const {
        long checked = 0, bad = 0;
        auto one = [&](int a, int b, int c) {
            LieElement x = LieElement::unit(basis_.size(), a), y = LieElement::unit(basis_.size(), b),
                       z = LieElement::unit(basis_.size(), c);
            try {
                LieElement s = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
                ++checked;
                if (!s.is_zero()) ++bad;
            } catch (const detail::OutOfRange&) {
            }
        };
        if (mode_ == KMMode::Finite) {
            for (int a = 0; a < dim(); ++a)
                for (int b = a; b < dim(); ++b)
                    for (int c = b; c < dim(); ++c) one(a, b, c);
        } else {
            std::mt19937 rng(seed);
            std::uniform_int_distribution<int> d(0, dim() - 1);
            for (int s = 0; s < 500; ++s) one(d(rng), d(rng), d(rng));
        }
        return {checked, bad};
    }

    bool antisymmetric() const {
        for (int a = 0; a < dim(); ++a)
            for (int b = 0; b < dim(); ++b) {
                if (!defined(a, b) || !defined(b, a)) continue;
                LieElement x = bracket(LieElement::unit(basis_.size(), a), LieElement::unit(basis_.size(), b));
                LieElement y = bracket(LieElement::unit(basis_.size(), b), LieElement::unit(basis_.size(), a));
                if (!(x == -y)) return false;
            }
        return true;
    }

    /** Serre relations for e and f; pairs beyond the truncation count as skipped. */
    Report serre_report() const {
        Report rep;
        rep.suite = "kacmoody-serre";
        for (int i = 0; i < rank(); ++i)
            for (int j = 0; j < rank(); ++j) {
                if (i == j) continue;
                Int n = 1 - cd_.c[i][j];
                for (int side = 0; side < 2; ++side) {
                    std::string id = std::string(side ? "f" : "e") + std::to_string(i) + "." + std::to_string(j);
                    LieElement x = side ? f(i) : e(i), y = side ? f(j) : e(j);
                    try {
                        for (Int k = 0; k < n; ++k) y = bracket(x, y);
                        rep.add(id, "Serre relations", y.is_zero(), y.is_zero() ? "0" : "nonzero", "0");
                    } catch (const detail::OutOfRange&) {
                        rep.add({id, "Serre relations", Status::Skipped, "beyond truncation", "0", 0.0});
                    }
                }
            }
        return rep;
    }

    /** Degree of a homogeneous element; nullopt if zero or inhomogeneous. */
    std::optional<ZVec> degree_of(const LieElement& x) const {
        std::optional<ZVec> d;
        for (int k = 0; k < dim(); ++k) {
            if (x.c[k] == 0) continue;
            if (d && *d != basis_[k].deg) return std::nullopt;
            d = basis_[k].deg;
        }
        return d;
    }

    /** Finite mode: N_{a,b} with [E_a, E_b] = N E_{a+b}. */
    Q structure_constant(const ZVec& a, const ZVec& b) const {
        auto ia = indices_of_degree(a), ib = indices_of_degree(b);
        if (ia.size() != 1 || ib.size() != 1) throw std::invalid_argument("not a root pair");
        ZVec s = a;
        for (size_t k = 0; k < s.size(); ++k) s[k] += b[k];
        auto is = indices_of_degree(s);
        if (is.size() != 1 || detail::is_zero_vec(s)) return 0;
        for (auto& t : bracket_basis(ia[0], ib[0]))
            if (t.idx == is[0]) return t.coef;
        return 0;
    }

    std::string render(const LieElement& x) const {
        std::ostringstream os;
        bool first = true;
        for (int k = 0; k < dim(); ++k) {
            if (x.c[k] == 0) continue;
            if (!first) os << " + ";
            first = false;
            os << x.c[k].get_str() << "*";
            if (basis_[k].cartan) os << "h" << basis_[k].gen;
            else os << "E" << render_list(basis_[k].deg);
        }
        return first ? "0" : os.str();
    }

    /** Structure constants as CSV rows: root, root, target, coefficient. */
    std::string structure_csv() const {
        std::ostringstream os;
        os << "root,root,target,coefficient\n";
        auto name = [&](int k) {
            std::string s;
            if (basis_[k].cartan) return "h" + std::to_string(basis_[k].gen);
            for (size_t u = 0; u < basis_[k].deg.size(); ++u) s += (u ? " " : "") + std::to_string(basis_[k].deg[u]);
            return s;
        };
        for (int a = 0; a < dim(); ++a)
            for (int b = 0; b < dim(); ++b) {
                if (basis_[a].cartan || basis_[b].cartan || !defined(a, b)) continue;
                for (auto& t : bracket_basis(a, b))
                    if (t.coef != 0) os << name(a) << "," << name(b) << "," << name(t.idx) << "," << t.coef.get_str() << "\n";
            }
        return os.str();
    }

private:
    CartanData cd_;
    KMMode mode_ = KMMode::Finite;
    int H_ = 0;
    std::vector<KMBasis> basis_;
    std::map<ZVec, std::vector<int>> by_deg_;
    std::vector<std::vector<std::optional<SparseVec>>> table_;
    std::vector<int> e_idx_, f_idx_, h_idx_;
    std::vector<Q> e_sc_, f_sc_;

    bool finite_cartan() const {
        // positive definite iff all leading principal minors are positive
        int n = cd_.rank();
        for (int m = 1; m <= n; ++m) {
            std::vector<ZVec> rows;
            for (int i = 0; i < m; ++i) rows.push_back(ZVec(cd_.c[i].begin(), cd_.c[i].begin() + m));
            if (IntMatrix::from_rows(rows).det() <= 0) return false;
        }
        return true;
    }

    void index_basis() {
        by_deg_.clear();
        for (int k = 0; k < dim(); ++k) by_deg_[basis_[k].deg].push_back(k);
        table_.assign(basis_.size(), std::vector<std::optional<SparseVec>>(basis_.size()));
    }

    static SparseVec sparse(const LieElement& x) {
        SparseVec s;
        for (size_t k = 0; k < x.size(); ++k)
            if (x.c[k] != 0) s.push_back({static_cast<int>(k), x.c[k]});
        return s;
    }

    // ---- finite mode ----

    int eps(const ZVec& a, const ZVec& b) const {
        Int s = 0;
        int n = rank();
        for (int i = 0; i < n; ++i) {
            s += a[i] * b[i];
            for (int j = i + 1; j < n; ++j)
                if (cd_.c[i][j] != 0) s += a[i] * b[j];
        }
        return (s % 2 == 0) ? 1 : -1;
    }

    void build_finite() {
        int n = rank();
        RootSet rs = enumerate_roots(cd_, 1000, true);
        std::vector<ZVec> pos;
        for (auto& r : rs.roots)
            if (detail::nonneg_vec(r.v)) pos.push_back(r.v);
        std::sort(pos.begin(), pos.end(), [](const ZVec& a, const ZVec& b) {
            Int ha = height(a), hb = height(b);
            return ha != hb ? ha < hb : a > b;
        });
        std::map<ZVec, int> idx;
        for (auto& v : pos) {
            idx[v] = dim();
            basis_.push_back({v});
        }
        for (auto& v : pos) {
            idx[detail::negate(v)] = dim();
            basis_.push_back({detail::negate(v)});
        }
        for (int i = 0; i < n; ++i) {
            KMBasis b;
            b.deg = ZVec(n, 0);
            b.cartan = true;
            b.gen = i;
            h_idx_.push_back(dim());
            basis_.push_back(b);
        }
        for (int i = 0; i < n; ++i) {
            e_idx_.push_back(idx.at(cd_.simple(i)));
            e_sc_.push_back(1);
            f_idx_.push_back(idx.at(detail::negate(cd_.simple(i))));
            f_sc_.push_back(-1);
        }
        // derivations
        for (auto& [v, k] : idx) {
            KMBasis& b = basis_[k];
            bool positive = detail::nonneg_vec(v);
            ZVec a = positive ? v : detail::negate(v);
            if (height(a) == 1) {
                int i = 0;
                while (a[i] == 0) ++i;
                b.gen = i;
                b.gen_is_e = positive;
                b.scalar = positive ? 1 : -1;
                continue;
            }
            for (int i = 0; i < n; ++i) {
                ZVec g = a;
                g[i] -= 1;
                if (!idx.count(g)) continue;
                int s = eps(cd_.simple(i), g);
                b.gen = i;
                b.gen_is_e = positive;
                b.child = idx.at(positive ? g : detail::negate(g));
                b.scalar = positive ? s : -s;
                break;
            }
        }
        index_basis();
        size_t N = basis_.size();
        for (int a = 0; a < dim(); ++a)
            for (int b = 0; b < dim(); ++b) {
                const KMBasis &x = basis_[a], &y = basis_[b];
                LieElement r(N);
                if (x.cartan && y.cartan) {
                } else if (x.cartan) {
                    r.c[b] = cd_.pair(cd_.simple(x.gen), y.deg);
                } else if (y.cartan) {
                    r.c[a] = -cd_.pair(cd_.simple(y.gen), x.deg);
                } else {
                    ZVec s = x.deg;
                    for (int u = 0; u < n; ++u) s[u] += y.deg[u];
                    if (detail::is_zero_vec(s)) {
                        for (int u = 0; u < n; ++u) r.c[h_idx_[u]] = -x.deg[u];
                    } else if (idx.count(s)) {
                        r.c[idx.at(s)] = eps(x.deg, y.deg);
                    }
                }
                table_[a][b] = sparse(r);
            }
    }

    // ---- truncated mode ----

    struct Level {
        int dim = 0;
        std::vector<std::pair<int, int>> deriv;
        std::map<int, detail::QMat> E;  // j -> [e_j, .] into level beta - alpha_j
        std::map<int, detail::QMat> F;  // i -> [f_i, .] into level beta + alpha_i
    };
    std::map<ZVec, Level> neg_;
    std::map<ZVec, int> neg_off_, pos_off_;

    // graded pieces: degree (signed) -> coordinates in that block
    using Graded = std::map<ZVec, std::vector<Q>>;

    static void add_into(Graded& g, const ZVec& d, const std::vector<Q>& v, const Q& s = 1) {
        bool nz = false;
        for (auto& x : v) nz = nz || x != 0;
        if (!nz) return;
        auto it = g.find(d);
        if (it == g.end()) {
            std::vector<Q> w = v;
            for (auto& x : w) x *= s;
            g.emplace(d, w);
        } else {
            for (size_t k = 0; k < v.size(); ++k) it->second[k] += s * v[k];
        }
    }
    static void add_into(Graded& g, const Graded& o, const Q& s = 1) {
        for (auto& [d, v] : o) add_into(g, d, v, s);
    }

    int side(const ZVec& d) const {
        for (auto x : d) {
            if (x > 0) return 1;
            if (x < 0) return -1;
        }
        return 0;
    }

    Graded theta(const Graded& x) const {
        Graded r;
        for (auto& [d, v] : x) {
            if (side(d) == 0) add_into(r, d, v, -1);
            else add_into(r, detail::negate(d), v);
        }
        return r;
    }

    Graded f_act(int i, const Graded& x) const {
        Graded r;
        int n = rank();
        for (auto& [d, v] : x) {
            int sd = side(d);
            if (sd == 0) {
                Q s = 0;
                for (int k = 0; k < n; ++k) s += v[k] * cd_.c[k][i];
                ZVec t(n, 0);
                t[i] = -1;
                add_into(r, t, {s});
            } else if (sd < 0) {
                ZVec beta = detail::negate(d);
                ZVec up = beta;
                up[i] += 1;
                if (height(up) > H_) throw detail::OutOfRange("beyond truncation");
                const Level& L = neg_.at(beta);
                auto it = L.F.find(i);
                if (it == L.F.end()) continue;
                add_into(r, detail::negate(up), detail::mat_vec(it->second, v));
            } else {
                Graded one{{d, v}};
                add_into(r, theta(e_act(i, theta(one))), -1);
            }
        }
        return r;
    }

    Graded e_act(int j, const Graded& x) const {
        Graded r;
        int n = rank();
        for (auto& [d, v] : x) {
            int sd = side(d);
            if (sd == 0) {
                Q s = 0;
                for (int k = 0; k < n; ++k) s += v[k] * cd_.c[k][j];
                ZVec t(n, 0);
                t[j] = 1;
                // e_j is -1 times the positive basis vector of degree alpha_j
                add_into(r, t, {s});
            } else if (sd < 0) {
                ZVec beta = detail::negate(d);
                ZVec down = beta;
                down[j] -= 1;
                if (detail::is_zero_vec(down)) {
                    std::vector<Q> h(n, Q(0));
                    h[j] = v[0];
                    add_into(r, ZVec(n, 0), h);
                    continue;
                }
                if (!detail::nonneg_vec(down)) continue;
                const Level& L = neg_.at(beta);
                auto it = L.E.find(j);
                if (it == L.E.end()) continue;
                add_into(r, detail::negate(down), detail::mat_vec(it->second, v));
            } else {
                Graded one{{d, v}};
                add_into(r, theta(f_act(j, theta(one))), -1);
            }
        }
        return r;
    }

    Graded bracket_graded(const Graded& x, const Graded& y) const {
        Graded r;
        int n = rank();
        for (auto& [dx, vx] : x)
            for (auto& [dy, vy] : y) {
                int sx = side(dx), sy = side(dy);
                if (sx == 0 && sy == 0) continue;
                if (sx == 0) {
                    Q s = 0;
                    for (int k = 0; k < n; ++k) s += vx[k] * cd_.pair(cd_.simple(k), dy);
                    add_into(r, dy, vy, s);
                    continue;
                }
                if (sy == 0 || (sx > 0 && sy < 0)) {
                    add_into(r, bracket_graded(Graded{{dy, vy}}, Graded{{dx, vx}}), -1);
                    continue;
                }
                Graded yy{{dy, vy}};
                ZVec beta = sx < 0 ? detail::negate(dx) : dx;
                const Level& L = neg_.at(beta);
                for (int k = 0; k < L.dim; ++k) {
                    if (vx[k] == 0) continue;
                    Q s = vx[k];
                    if (height(beta) == 1) {
                        int i = 0;
                        while (beta[i] == 0) ++i;
                        // negative basis is f_i; positive basis is theta(f_i) = -e_i
                        if (sx < 0) add_into(r, f_act(i, yy), s);
                        else add_into(r, e_act(i, yy), -s);
                        continue;
                    }
                    auto [i, c] = L.deriv[k];
                    ZVec cb = beta;
                    cb[i] -= 1;
                    std::vector<Q> cu(neg_.at(cb).dim, Q(0));
                    cu[c] = 1;
                    if (sx < 0) {
                        // [[f_i, c], y] = [f_i, [c, y]] - [c, [f_i, y]]
                        Graded cg{{detail::negate(cb), cu}};
                        add_into(r, f_act(i, bracket_graded(cg, yy)), s);
                        add_into(r, bracket_graded(cg, f_act(i, yy)), -s);
                    } else {
                        // [[-e_i, tc], y] = -[e_i, [tc, y]] + [tc, [e_i, y]]
                        Graded cg{{cb, cu}};
                        add_into(r, e_act(i, bracket_graded(cg, yy)), -s);
                        add_into(r, bracket_graded(cg, e_act(i, yy)), s);
                    }
                }
            }
        return r;
    }

    void build_truncated() {
        int n = rank();
        for (int i = 0; i < n; ++i) {
            Level L;
            L.dim = 1;
            L.deriv.push_back({i, -1});
            neg_[cd_.simple(i)] = L;
        }
        for (int ht = 1; ht < H_; ++ht) {
            std::set<ZVec> cands;
            for (auto& [b, L] : neg_)
                if (height(b) == ht)
                    for (int i = 0; i < n; ++i) {
                        ZVec u = b;
                        u[i] += 1;
                        cands.insert(u);
                    }
            for (const ZVec& beta : cands) {
                std::vector<int> comps;  // j with beta - alpha_j a stored level
                std::vector<size_t> offs;
                size_t rows = 0;
                for (int j = 0; j < n; ++j) {
                    ZVec d = beta;
                    d[j] -= 1;
                    if (!neg_.count(d)) continue;
                    comps.push_back(j);
                    offs.push_back(rows);
                    rows += neg_.at(d).dim;
                }
                std::vector<std::pair<int, int>> span;
                std::vector<std::vector<Q>> colv;
                for (int i = 0; i < n; ++i) {
                    ZVec g = beta;
                    g[i] -= 1;
                    if (!neg_.count(g)) continue;
                    const Level& G = neg_.at(g);
                    for (int b = 0; b < G.dim; ++b) {
                        std::vector<Q> col(rows, Q(0));
                        for (size_t cj = 0; cj < comps.size(); ++cj) {
                            int j = comps[cj];
                            ZVec dj = beta;
                            dj[j] -= 1;
                            if (i == j) col[offs[cj] + b] += -cd_.pair(cd_.simple(i), g);
                            ZVec gj = g;
                            gj[j] -= 1;
                            if (detail::is_zero_vec(gj)) {
                                // [e_j, f_j] = h_j, [f_i, h_j] = c_ji f_i
                                col[offs[cj]] += cd_.c[j][i];
                                continue;
                            }
                            if (!detail::nonneg_vec(gj) || !neg_.count(gj)) continue;
                            auto ite = G.E.find(j);
                            if (ite == G.E.end()) continue;
                            std::vector<Q> unit(G.dim, Q(0));
                            unit[b] = 1;
                            std::vector<Q> y = detail::mat_vec(ite->second, unit);
                            const Level& GJ = neg_.at(gj);
                            auto itf = GJ.F.find(i);
                            if (itf == GJ.F.end()) continue;
                            std::vector<Q> z = detail::mat_vec(itf->second, y);
                            for (size_t k = 0; k < z.size(); ++k) col[offs[cj] + k] += z[k];
                        }
                        span.push_back({i, b});
                        colv.push_back(col);
                    }
                }
                detail::QMat m(rows, std::vector<Q>(span.size(), Q(0)));
                for (size_t c = 0; c < span.size(); ++c)
                    for (size_t r = 0; r < rows; ++r) m[r][c] = colv[c][r];
                detail::QMat red = m;
                auto piv = detail::rref(red, span.size());
                if (piv.empty()) continue;
                Level L;
                L.dim = static_cast<int>(piv.size());
                for (int p : piv) L.deriv.push_back(span[p]);
                for (size_t cj = 0; cj < comps.size(); ++cj) {
                    int j = comps[cj];
                    ZVec dj = beta;
                    dj[j] -= 1;
                    int dd = neg_.at(dj).dim;
                    detail::QMat Ej(dd, std::vector<Q>(L.dim, Q(0)));
                    for (int r = 0; r < dd; ++r)
                        for (int k = 0; k < L.dim; ++k) Ej[r][k] = m[offs[cj] + r][piv[k]];
                    L.E[j] = Ej;
                }
                // F maps from each beta - alpha_i into beta
                for (size_t c = 0; c < span.size(); ++c) {
                    auto [i, b] = span[c];
                    ZVec g = beta;
                    g[i] -= 1;
                    Level& G = neg_.at(g);
                    auto& Fi = G.F[i];
                    if (Fi.empty()) Fi.assign(L.dim, std::vector<Q>(G.dim, Q(0)));
                    for (int k = 0; k < L.dim; ++k) Fi[k][b] = red[k][c];
                }
                neg_[beta] = L;
            }
        }
        // global basis: positive blocks, negative blocks, Cartan
        std::vector<ZVec> order;
        for (auto& [b, L] : neg_) order.push_back(b);
        std::sort(order.begin(), order.end(), [](const ZVec& a, const ZVec& b) {
            Int ha = height(a), hb = height(b);
            return ha != hb ? ha < hb : a > b;
        });
        for (int s = 0; s < 2; ++s)
            for (auto& b : order) {
                const Level& L = neg_.at(b);
                (s == 0 ? pos_off_ : neg_off_)[b] = dim();
                for (int k = 0; k < L.dim; ++k) {
                    KMBasis kb;
                    kb.deg = s == 0 ? b : detail::negate(b);
                    basis_.push_back(kb);
                }
            }
        for (int i = 0; i < n; ++i) {
            KMBasis b;
            b.deg = ZVec(n, 0);
            b.cartan = true;
            b.gen = i;
            h_idx_.push_back(dim());
            basis_.push_back(b);
        }
        for (auto& b : order) {
            const Level& L = neg_.at(b);
            for (int k = 0; k < L.dim; ++k) {
                auto [i, c] = L.deriv[k];
                KMBasis& pb = basis_[pos_off_[b] + k];
                KMBasis& nb = basis_[neg_off_[b] + k];
                pb.gen = nb.gen = i;
                pb.gen_is_e = true;
                nb.gen_is_e = false;
                if (c < 0) {
                    nb.scalar = 1;
                    pb.scalar = -1;
                } else {
                    ZVec cb = b;
                    cb[i] -= 1;
                    nb.child = neg_off_[cb] + c;
                    nb.scalar = 1;
                    pb.child = pos_off_[cb] + c;
                    pb.scalar = -1;
                }
            }
        }
        for (int i = 0; i < n; ++i) {
            e_idx_.push_back(pos_off_[cd_.simple(i)]);
            e_sc_.push_back(-1);
            f_idx_.push_back(neg_off_[cd_.simple(i)]);
            f_sc_.push_back(1);
        }
        index_basis();
        size_t N = basis_.size();
        auto to_graded = [&](int k) {
            const KMBasis& b = basis_[k];
            Graded g;
            if (b.cartan) {
                std::vector<Q> h(n, Q(0));
                h[b.gen] = 1;
                g[b.deg] = h;
                return g;
            }
            int sd = side(b.deg);
            ZVec key = sd > 0 ? b.deg : detail::negate(b.deg);
            int off = (sd > 0 ? pos_off_ : neg_off_).at(key);
            std::vector<Q> v(neg_.at(key).dim, Q(0));
            v[k - off] = 1;
            g[b.deg] = v;
            return g;
        };
        for (int a = 0; a < dim(); ++a)
            for (int b = 0; b < dim(); ++b) {
                ZVec s = basis_[a].deg;
                for (int u = 0; u < n; ++u) s[u] += basis_[b].deg[u];
                ZVec as = s;
                for (auto& x : as) x = std::abs(x);
                if (height(as) > H_) continue;
                try {
                    Graded g = bracket_graded(to_graded(a), to_graded(b));
                    LieElement r(N);
                    for (auto& [d, v] : g) {
                        int sd = side(d);
                        if (sd == 0) {
                            for (int u = 0; u < n; ++u) r.c[h_idx_[u]] += v[u];
                            continue;
                        }
                        ZVec key = sd > 0 ? d : detail::negate(d);
                        int off = (sd > 0 ? pos_off_ : neg_off_).at(key);
                        for (size_t k = 0; k < v.size(); ++k) r.c[off + k] += v[k];
                    }
                    table_[a][b] = sparse(r);
                } catch (const detail::OutOfRange&) {
                }
            }
    }
};

/** \brief Vertex index of the star quiver: star 0, arm (i, j) via WeightData::index. */
inline int star_vertex(const WeightData& w, int i, int j) { return i == 0 ? 0 : w.index(i, j); }

/** \brief The arm automorphism Omega~_ij on Chevalley generators, extended as an algebra map. */
inline LieOperator omega_tilde(const KMAlgebra& a, const WeightData& w, int i, int j) {
    int p = w.weight(i);
    if (j < 1 || j > p - 1) throw std::out_of_range("(i,j) outside the index set");
    int n = w.rank();
    std::vector<LieElement> te(n), tf(n);
    auto arm = [&](int l) { return w.index(i, l); };
    {
        std::vector<LieElement> xe, xf;
        for (int l = p - j; l >= 1; --l) {
            xe.push_back(a.e(arm(l)));
            xf.push_back(a.f(arm(l)));
        }
        xe.push_back(a.e(0));
        xf.push_back(a.f(0));
        te[0] = a.nested(xe);
        tf[0] = a.nested(xf) * Q((p - j) % 2 == 0 ? 1 : -1);
    }
    {
        std::vector<LieElement> xe, xf;
        for (int l = p - 1; l >= 1; --l) {
            xe.push_back(a.e(arm(l)));
            xf.push_back(a.f(arm(l)));
        }
        te[arm(j)] = a.nested(xf) * Q(p % 2 == 0 ? 1 : -1);
        tf[arm(j)] = a.nested(xe);
    }
    for (int k = 1; k <= w.t(); ++k)
        for (int l = 1; l < w.p[k - 1]; ++l) {
            if (k == i && l == j) continue;
            int tl = k == i ? static_cast<int>(mod_pos(l - j, p)) : l;
            te[w.index(k, l)] = a.e(w.index(k, tl));
            tf[w.index(k, l)] = a.f(w.index(k, tl));
        }
    return a.from_generators(te, tf);
}

/** \brief varpi = (r_{i,p-j} ... r_{i,p-1})(r_{i,p-j-1} ... r_{i,p-2}) ... (r_{i,1} ... r_{i,j}). */
inline WeylElement varpi(const WeightData& w, int i, int j) {
    int p = w.weight(i);
    std::vector<int> word;
    for (int m = 0; m <= p - j - 1; ++m)
        for (int l = p - j - m; l <= p - 1 - m; ++l) word.push_back(w.index(i, l));
    return word_element(StarQuiver(w).cartan(), word);
}

/** \brief Jacobi, antisymmetry, Serre, and Omega~_ij automorphism with root-space transport. */
inline Report verify_km_integrity(const WeightData& w) {
    KMAlgebra a = KMAlgebra::build(w, KMMode::Finite);
    Report rep;
    rep.suite = "kacmoody";
    rep.params["weights"] = w.p;
    std::string tag = "p" + render_list(w.p);
    auto [checked, bad] = a.jacobi_failures();
    rep.add(tag + ".jacobi", "Jacobi identity", bad == 0, std::to_string(bad) + " failures", std::to_string(checked) + " triples");
    rep.add(tag + ".antisymmetry", "Chevalley antisymmetry", a.antisymmetric(), "", "");
    Report s = a.serre_report();
    for (auto& c : s.checks) c.id = tag + ".serre." + c.id;
    rep.append(s);
    for (int i = 1; i <= w.t(); ++i)
        for (int j = 1; j < w.p[i - 1]; ++j) {
            std::string id = tag + ".omega" + std::to_string(i) + std::to_string(j);
            LieOperator om = omega_tilde(a, w, i, j);
            std::string wit;
            bool aut = a.is_automorphism(om, &wit);
            rep.add(id + ".automorphism", "iso of Kac-Moody", aut, wit.empty() ? "ok" : wit, "bracket preserved");
            WeylElement vp = varpi(w, i, j);
            bool graded = true;
            std::string bad_root;
            for (int k = 0; k < a.dim(); ++k) {
                if (a.basis(k).cartan) continue;
                auto d = a.degree_of(om.cols[k]);
                ZVec want = vp(a.basis(k).deg);
                if (!d || *d != want) {
                    graded = false;
                    bad_root = render_list(a.basis(k).deg);
                    break;
                }
            }
            rep.add(id + ".rootspaces", "iso of Kac-Moody", graded, bad_root.empty() ? "all roots" : bad_root,
                    "g_alpha -> g_varpi(alpha)");
        }
    return rep;
}

}  // namespace wpl

#endif
