#pragma once

#include "k3q/qseries.hpp"
#include "k3q/rational.hpp"

#include <stdexcept>
#include <vector>

namespace k3q {

inline std::vector<long long> divisors(long long m) {
    if (m < 1) throw std::invalid_argument("divisors: m must be positive");
    std::vector<long long> small, large;
    for (long long d = 1; d * d <= m; ++d) {
        if (m % d != 0) continue;
        small.push_back(d);
        if (d != m / d) large.push_back(m / d);
    }
    for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
    return small;
}

inline int mobius(long long n) {
    if (n < 1) throw std::invalid_argument("mobius: n must be positive");
    int factors = 0;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        ++factors;
    }
    if (n > 1) ++factors;
    return factors % 2 == 0 ? 1 : -1;
}

// m-th Hecke operator acting on an expansion of declared weight k:
//   T_m = sum_{ad=m} a^{k-1} B_a U_d .
// The weight is a caller-supplied annotation; a bare q-expansion has none.
inline QSeries hecke_t(long long m, long long k, const QSeries& f) {
    if (m < 1) throw std::invalid_argument("hecke_t: m must be positive");
    bool have = false;
    QSeries acc = QSeries::zero(0, 0);
    for (long long a : divisors(m)) {
        long long d = m / a;
        QSeries term = scalar_mul(pow_int(Rational(a), k - 1), b_op(a, u_op(d, f)));
        acc = have ? add(acc, term) : term;
        have = true;
    }
    return acc;
}

// Hecke operator of the wrong weight (weight ell acting on weight-k forms):
//   T_{m,ell} = sum_{ad=m} a^{ell-1} B_a U_d .
inline QSeries t_wrong(long long m, long long ell, const QSeries& f) {
    return hecke_t(m, ell, f);
}

// c_{k,ell}(a) = sum_{r|a} r^{ell-1} mu(a/r) (a/r)^{k-1}, the Dirichlet
// convolution coefficients expressing T_{m,ell} = sum_{ad=m} c_{k,ell}(a) B_a T_d.
inline Rational c_coeff(long long k, long long ell, long long a) {
    if (a < 1) throw std::invalid_argument("c_coeff: a must be positive");
    Rational acc(0);
    for (long long r : divisors(a)) {
        long long q = a / r;
        acc += pow_int(Rational(r), ell - 1) * Rational(mobius(q)) * pow_int(Rational(q), k - 1);
    }
    return acc;
}

}  // namespace k3q
