#ifndef WPL_LATTICE_HPP
#define WPL_LATTICE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wpl {

using Int = std::int64_t;
using ZVec = std::vector<Int>;

/** \brief Floor division and nonnegative remainder. */
inline Int floor_div(Int a, Int b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
inline Int mod_pos(Int a, Int b) { return a - b * floor_div(a, b); }

/** \brief Arm weights p_1..p_t of a weighted projective line. */
struct WeightData {
    std::vector<int> p;

    WeightData() = default;
    explicit WeightData(std::vector<int> ps) : p(std::move(ps)) {
        if (p.empty()) throw std::invalid_argument("weight sequence must be nonempty");
        for (int v : p)
            if (v < 1) throw std::invalid_argument("weights must be positive");
    }
    int t() const { return static_cast<int>(p.size()); }
    int weight(int i) const {
        if (i < 1 || i > t()) throw std::out_of_range("invalid arm index");
        return p[i - 1];
    }
    /** Number of vertices |I| = 1 + sum (p_i - 1). */
    int rank() const {
        int r = 1;
        for (int v : p) r += v - 1;
        return r;
    }
    /** Index of alpha_star (0) or alpha_{ij} (1 <= j <= p_i - 1) in ZI. */
    int index(int i, int j) const {
        if (i == 0 && j == 0) return 0;
        int w = weight(i);
        if (j < 1 || j > w - 1) throw std::out_of_range("vertex (i,j) outside the index set");
        int r = 1;
        for (int a = 1; a < i; ++a) r += p[a - 1] - 1;
        return r + j - 1;
    }
    /** Inverse of index(): (0,0) for the star vertex. */
    std::pair<int, int> vertex(int idx) const {
        if (idx == 0) return {0, 0};
        int r = 1;
        for (int a = 1; a <= t(); ++a) {
            int len = p[a - 1] - 1;
            if (idx < r + len) return {a, idx - r + 1};
            r += len;
        }
        throw std::out_of_range("vertex index out of range");
    }
    std::string vertex_name(int idx) const {
        auto [i, j] = vertex(idx);
        if (i == 0) return "*";
        return std::to_string(i) + std::to_string(j);
    }
    bool operator==(const WeightData&) const = default;
};

/** \brief sum a_i x_i + a_c c, not necessarily normal. */
struct LVector {
    std::vector<Int> a;
    Int ac = 0;

    static LVector zero(const WeightData& w) { return {std::vector<Int>(w.t(), 0), 0}; }
    static LVector arm(const WeightData& w, int i, Int k = 1) {
        LVector v = zero(w);
        v.a.at(i - 1) = k;
        return v;
    }
    static LVector canonical(const WeightData& w, Int k = 1) {
        LVector v = zero(w);
        v.ac = k;
        return v;
    }
    LVector operator+(const LVector& o) const {
        LVector r = *this;
        for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += o.a.at(i);
        r.ac += o.ac;
        return r;
    }
    LVector operator-() const {
        LVector r = *this;
        for (auto& v : r.a) v = -v;
        r.ac = -r.ac;
        return r;
    }
    LVector operator-(const LVector& o) const { return *this + (-o); }
};

/** \brief Normal form: 0 <= l_i <= p_i - 1 and integer c-coefficient lc. */
struct LNormalForm {
    std::vector<Int> l;
    Int lc = 0;

    bool operator==(const LNormalForm&) const = default;
    auto operator<=>(const LNormalForm&) const = default;

    LVector vec() const { return {l, lc}; }
    Int sum_l() const {
        Int s = 0;
        for (auto v : l) s += v;
        return s;
    }
};

inline LNormalForm normal_form(const LVector& x, const WeightData& w) {
    if (static_cast<int>(x.a.size()) != w.t()) throw std::invalid_argument("LVector arity mismatch");
    LNormalForm nf;
    nf.l.resize(w.t());
    nf.lc = x.ac;
    for (int i = 0; i < w.t(); ++i) {
        Int p = w.p[i];
        nf.l[i] = mod_pos(x.a[i], p);
        nf.lc += floor_div(x.a[i], p);
    }
    return nf;
}

/** \brief Canonical element c and dualizing element (t-2)c - sum x_i. */
inline std::pair<LNormalForm, LNormalForm> special_elements(const WeightData& w) {
    LVector c = LVector::canonical(w);
    LVector om = LVector::canonical(w, w.t() - 2);
    for (auto& v : om.a) v = -1;
    return {normal_form(c, w), normal_form(om, w)};
}

/** \brief Class in K0 as (ZI vector, delta coefficient). */
struct K0Class {
    ZVec zi;
    Int nd = 0;

    static K0Class zero(const WeightData& w) { return {ZVec(w.rank(), 0), 0}; }
    static K0Class delta(const WeightData& w) { return {ZVec(w.rank(), 0), 1}; }
    static K0Class simple(const WeightData& w, int idx) {
        K0Class k = zero(w);
        k.zi.at(idx) = 1;
        return k;
    }
    K0Class operator+(const K0Class& o) const {
        K0Class r = *this;
        for (size_t i = 0; i < r.zi.size(); ++i) r.zi[i] += o.zi.at(i);
        r.nd += o.nd;
        return r;
    }
    K0Class operator-() const {
        K0Class r = *this;
        for (auto& v : r.zi) v = -v;
        r.nd = -r.nd;
        return r;
    }
    K0Class operator-(const K0Class& o) const { return *this + (-o); }
    K0Class operator*(Int k) const {
        K0Class r = *this;
        for (auto& v : r.zi) v *= k;
        r.nd *= k;
        return r;
    }
    bool operator==(const K0Class&) const = default;
};

inline K0Class class_of_line_bundle(const LVector& x, const WeightData& w) {
    LNormalForm nf = normal_form(x, w);
    K0Class k = K0Class::simple(w, 0);
    for (int i = 1; i <= w.t(); ++i)
        for (int j = 1; j <= nf.l[i - 1]; ++j) k.zi[w.index(i, j)] += 1;
    k.nd = nf.lc;
    return k;
}

/** \brief Class of the simple torsion sheaf S_{ij}, j taken mod p_i. */
inline K0Class class_of_simple_torsion(int i, Int j, const WeightData& w) {
    int p = w.weight(i);
    Int jr = mod_pos(j, p);
    K0Class k = K0Class::zero(w);
    if (jr != 0) {
        k.zi[w.index(i, static_cast<int>(jr))] = 1;
    } else {
        k.nd = 1;
        for (int l = 1; l <= p - 1; ++l) k.zi[w.index(i, l)] = -1;
    }
    return k;
}

/** \brief Class of S_{ij}^{(k)}: sum of [S_{i,j-m}] for m = 0..k-1. */
inline K0Class class_of_torsion(int i, Int j, Int k, const WeightData& w) {
    w.weight(i);
    if (k < 1) throw std::invalid_argument("torsion length must be positive");
    K0Class r = K0Class::zero(w);
    for (Int m = 0; m < k; ++m) r = r + class_of_simple_torsion(i, j - m, w);
    return r;
}

/** \brief Star quiver Cartan matrix: 2 on the diagonal, -1 per edge. */
inline std::vector<ZVec> star_cartan(const WeightData& w) {
    int n = w.rank();
    std::vector<ZVec> c(n, ZVec(n, 0));
    for (int a = 0; a < n; ++a) c[a][a] = 2;
    for (int i = 1; i <= w.t(); ++i) {
        int prev = 0;
        for (int j = 1; j <= w.p[i - 1] - 1; ++j) {
            int cur = w.index(i, j);
            c[prev][cur] = c[cur][prev] = -1;
            prev = cur;
        }
    }
    return c;
}

inline Int bilinear(const ZVec& a, const std::vector<ZVec>& c, const ZVec& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) s += a[i] * c[i][j] * b[j];
    }
    return s;
}

/** \brief Symmetric Euler form; delta is in the radical. */
inline Int euler_sym(const K0Class& a, const K0Class& b, const WeightData& w) {
    return bilinear(a.zi, star_cartan(w), b.zi);
}

inline ZVec reduce_mod_delta(const K0Class& a) { return a.zi; }

}  // namespace wpl

#endif
