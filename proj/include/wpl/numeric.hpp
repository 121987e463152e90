#ifndef WPL_NUMERIC_HPP
#define WPL_NUMERIC_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

namespace wpl {

using Q = mpq_class;

inline Q make_q(long num, long den = 1) {
    Q r(num, den);
    r.canonicalize();
    return r;
}

inline std::string qstr(const Q& q) { return q.get_str(); }

inline Q factorial_q(int n) {
    mpz_class f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return Q(f);
}

}  // namespace wpl

#endif
