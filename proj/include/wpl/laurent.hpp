#ifndef WPL_LAURENT_HPP
#define WPL_LAURENT_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "numeric.hpp"

namespace wpl {

/** \brief Laurent polynomial in v with rational coefficients: sum c[k] v^(lo+k). */
struct Laurent {
    int lo = 0;
    std::vector<Q> c;

    Laurent() = default;
    Laurent(const Q& s) {  // NOLINT(google-explicit-constructor)
        if (s != 0) c = {s};
    }
    Laurent(long s) : Laurent(Q(s)) {}  // NOLINT(google-explicit-constructor)
    static Laurent vpow(int k, const Q& s = 1) {
        Laurent r(s);
        r.lo = k;
        return r;
    }

    bool is_zero() const { return c.empty(); }
    int hi() const { return lo + static_cast<int>(c.size()) - 1; }
    Q at(int k) const {
        int i = k - lo;
        return (i < 0 || i >= static_cast<int>(c.size())) ? Q(0) : c[i];
    }
    void trim() {
        size_t a = 0;
        while (a < c.size() && c[a] == 0) ++a;
        if (a == c.size()) {
            c.clear();
            lo = 0;
            return;
        }
        size_t b = c.size();
        while (c[b - 1] == 0) --b;
        c = std::vector<Q>(c.begin() + static_cast<long>(a), c.begin() + static_cast<long>(b));
        lo += static_cast<int>(a);
    }

    Laurent operator+(const Laurent& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        Laurent r;
        r.lo = std::min(lo, o.lo);
        int h = std::max(hi(), o.hi());
        r.c.assign(h - r.lo + 1, Q(0));
        for (size_t i = 0; i < c.size(); ++i) r.c[lo - r.lo + i] += c[i];
        for (size_t i = 0; i < o.c.size(); ++i) r.c[o.lo - r.lo + i] += o.c[i];
        r.trim();
        return r;
    }
    Laurent operator-() const {
        Laurent r = *this;
        for (auto& x : r.c) x = -x;
        return r;
    }
    Laurent operator-(const Laurent& o) const { return *this + (-o); }
    Laurent operator*(const Laurent& o) const {
        if (is_zero() || o.is_zero()) return {};
        Laurent r;
        r.lo = lo + o.lo;
        r.c.assign(c.size() + o.c.size() - 1, Q(0));
        for (size_t i = 0; i < c.size(); ++i)
            if (c[i] != 0)
                for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
        r.trim();
        return r;
    }
    Laurent shifted(int k) const {
        Laurent r = *this;
        if (!r.is_zero()) r.lo += k;
        return r;
    }
    Laurent& operator+=(const Laurent& o) { return *this = *this + o; }
    Laurent& operator*=(const Laurent& o) { return *this = *this * o; }
    bool operator==(const Laurent& o) const { return lo == o.lo && c == o.c; }

    /** Quotient by v^2 - 1 when exact. */
    bool divide_v2_minus_1(Laurent& out) const {
        if (is_zero()) {
            out = {};
            return true;
        }
        // num = v^lo * P(v); P / (v^2 - 1) by synthetic division from the top.
        std::vector<Q> p = c;
        int n = static_cast<int>(p.size());
        if (n < 3) return false;
        std::vector<Q> quo(n - 2, Q(0));
        for (int k = n - 1; k >= 2; --k) {
            Q t = p[k];
            quo[k - 2] = t;
            p[k] = 0;
            p[k - 2] += t;
        }
        if (p[0] != 0 || p[1] != 0) return false;
        out.lo = lo;
        out.c = quo;
        out.trim();
        return true;
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::string s;
        for (int k = hi(); k >= lo; --k) {
            Q x = at(k);
            if (x == 0) continue;
            std::string mono = k == 0 ? "" : (k == 1 ? "v" : "v^" + std::to_string(k));
            std::string coef = qstr(abs(x));
            bool neg = x < 0;
            if (s.empty()) s += neg ? "-" : "";
            else s += neg ? " - " : " + ";
            if (mono.empty()) s += coef;
            else if (abs(x) == 1) s += mono;
            else s += coef + mono;
        }
        return s;
    }
};

/** \brief Element num / (v - v^-1)^den of Q(v), kept reduced. */
struct VFrac {
    Laurent num;
    int den = 0;

    VFrac() = default;
    VFrac(const Laurent& n, int d = 0) : num(n), den(d) { reduce(); }  // NOLINT
    VFrac(const Q& s) : num(s) {}                                         // NOLINT
    VFrac(long s) : num(Q(s)) {}                                          // NOLINT
    static VFrac vpow(int k, const Q& s = 1) { return VFrac(Laurent::vpow(k, s)); }
    /** 1 / (v - v^-1). */
    static VFrac inv_v_minus_vinv() { return VFrac(Laurent(1), 1); }

    static Laurent denom_poly() { return Laurent::vpow(1) - Laurent::vpow(-1); }

    void reduce() {
        if (num.is_zero()) {
            den = 0;
            return;
        }
        while (den > 0) {
            Laurent q;
            if (!num.divide_v2_minus_1(q)) break;
            num = q.shifted(1);  // num / (v - v^-1) = v num / (v^2 - 1)
            --den;
        }
    }
    bool is_zero() const { return num.is_zero(); }

    VFrac operator+(const VFrac& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        int d = std::max(den, o.den);
        Laurent a = num, b = o.num;
        for (int k = den; k < d; ++k) a *= denom_poly();
        for (int k = o.den; k < d; ++k) b *= denom_poly();
        return VFrac(a + b, d);
    }
    VFrac operator-() const {
        VFrac r = *this;
        r.num = -r.num;
        return r;
    }
    VFrac operator-(const VFrac& o) const { return *this + (-o); }
    VFrac operator*(const VFrac& o) const {
        if (is_zero() || o.is_zero()) return {};
        return VFrac(num * o.num, den + o.den);
    }
    VFrac& operator+=(const VFrac& o) { return *this = *this + o; }
    VFrac& operator-=(const VFrac& o) { return *this = *this - o; }
    VFrac& operator*=(const VFrac& o) { return *this = *this * o; }
    bool operator==(const VFrac& o) const { return den == o.den && num == o.num; }

    std::string str() const {
        if (den == 0) return num.str();
        return "(" + num.str() + ")/(v - v^-1)" + (den > 1 ? "^" + std::to_string(den) : "");
    }
};

/** \brief Exact element a + b*sqrt(q) of Q(sqrt q). */
struct SqrtQ {
    Q a, b;
    long q = 0;

    SqrtQ() = default;
    SqrtQ(long qq, const Q& aa, const Q& bb = 0) : a(aa), b(bb), q(qq) { fold(); }

    static long isqrt_exact(long q) {
        for (long r = 0; r * r <= q; ++r)
            if (r * r == q) return r;
        return -1;
    }
    void fold() {
        if (b == 0 || q == 0) return;
        long r = isqrt_exact(q);
        if (r >= 0) {
            a += b * r;
            b = 0;
        }
    }
    /** v^k with v = sqrt q. */
    static SqrtQ vpow(long q, int k) {
        Q base = 1;
        int e = k >= 0 ? k : -k;
        for (int i = 0; i < e / 2; ++i) base *= q;
        SqrtQ r = (e % 2 == 0) ? SqrtQ(q, base) : SqrtQ(q, 0, base);
        return k >= 0 ? r : r.inverse();
    }
    bool is_zero() const { return a == 0 && b == 0; }
    SqrtQ operator+(const SqrtQ& o) const { return SqrtQ(q ? q : o.q, a + o.a, b + o.b); }
    SqrtQ operator-() const { return SqrtQ(q, -a, -b); }
    SqrtQ operator-(const SqrtQ& o) const { return *this + (-o); }
    SqrtQ operator*(const SqrtQ& o) const {
        long qq = q ? q : o.q;
        return SqrtQ(qq, a * o.a + b * o.b * qq, a * o.b + b * o.a);
    }
    SqrtQ inverse() const {
        Q n = a * a - b * b * q;
        if (n == 0) throw std::domain_error("division by zero in Q(sqrt q)");
        return SqrtQ(q, a / n, -b / n);
    }
    SqrtQ& operator+=(const SqrtQ& o) { return *this = *this + o; }
    SqrtQ& operator*=(const SqrtQ& o) { return *this = *this * o; }
    bool operator==(const SqrtQ& o) const { return a == o.a && b == o.b; }
    std::string str() const {
        if (b == 0) return qstr(a);
        std::string s = a == 0 ? "" : qstr(a) + " + ";
        return s + qstr(b) + "*sqrt(" + std::to_string(q) + ")";
    }
};

/** \brief Specialize v -> sqrt q. */
inline SqrtQ evaluate(const Laurent& l, long q) {
    SqrtQ r(q, 0);
    for (int k = l.lo; k <= l.hi(); ++k) {
        Q x = l.at(k);
        if (x != 0) r += SqrtQ::vpow(q, k) * SqrtQ(q, x);
    }
    return r;
}

inline SqrtQ evaluate(const VFrac& f, long q) {
    SqrtQ r = evaluate(f.num, q);
    if (f.den == 0) return r;
    SqrtQ d = evaluate(VFrac::denom_poly(), q).inverse();
    for (int k = 0; k < f.den; ++k) r *= d;
    return r;
}

}  // namespace wpl

#endif
