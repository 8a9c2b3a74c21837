#pragma once

#include "k3q/linalg.hpp"
#include "k3q/qseries.hpp"
#include "k3q/rational.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace k3q {

// ---------------------------------------------------------------------------
// Arithmetic helpers
// ---------------------------------------------------------------------------

// Bernoulli number B_n (B_1 = -1/2 convention); cached.
inline Rational bernoulli(long long n) {
    if (n < 0) throw std::invalid_argument("bernoulli: negative index");
    static std::vector<Rational> cache{Rational(1)};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<long long>(cache.size()) <= n) {
        long long m = static_cast<long long>(cache.size());
        Rational acc(0);
        for (long long j = 0; j < m; ++j)
            acc += Rational(binomial(m + 1, j)) * cache[static_cast<size_t>(j)];
        cache.push_back(-acc / Rational(m + 1));
    }
    return cache[static_cast<size_t>(n)];
}

// sigma_k(n) = sum of k-th powers of the divisors of n.
inline Integer sigma(long long k, long long n) {
    if (n < 1) throw std::invalid_argument("sigma: n must be positive");
    Integer acc(0);
    for (long long d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        Integer dk(1), ek(1);
        for (long long i = 0; i < k; ++i) dk *= d;
        long long e = n / d;
        for (long long i = 0; i < k; ++i) ek *= e;
        acc += dk;
        if (e != d) acc += ek;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Classical expansions
// ---------------------------------------------------------------------------

// E_{k}(q) = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, window [0, N].
inline QSeries eisenstein_e(int k2, long long N) {
    if (k2 <= 0 || k2 % 2 != 0) throw std::invalid_argument("eisenstein_e: weight must be even and positive");
    std::vector<Rational> c(static_cast<size_t>(N + 1));
    c[0] = Rational(1);
    Rational factor = Rational(-2 * k2) / bernoulli(k2);
    for (long long n = 1; n <= N; ++n) c[static_cast<size_t>(n)] = factor * Rational(sigma(k2 - 1, n));
    return QSeries(0, std::move(c));
}

// Renormalized Eisenstein series C_k = -B_k/(k * k!) E_k. Its q^n coefficient
// for n >= 1 is (2/k!) sigma_{k-1}(n); the constant term is -B_k/(k * k!).
inline QSeries eisenstein_c(int k2, long long N) {
    if (k2 <= 0 || k2 % 2 != 0) throw std::invalid_argument("eisenstein_c: weight must be even and positive");
    if (N < 0) throw std::invalid_argument("eisenstein_c: negative order");
    std::vector<Rational> c(static_cast<size_t>(N + 1));
    Rational kfact(factorial(k2));
    c[0] = -bernoulli(k2) / (Rational(k2) * kfact);
    Rational factor = Rational(2) / kfact;
    for (long long n = 1; n <= N; ++n) c[static_cast<size_t>(n)] = factor * Rational(sigma(k2 - 1, n));
    return QSeries(0, std::move(c));
}

// prod_{n>=1} (1 - q^n) on [0, N] via the pentagonal number expansion.
inline QSeries euler_product(long long N) {
    std::vector<Rational> c(static_cast<size_t>(N + 1));
    for (long long j = 0;; ++j) {
        long long e1 = j * (3 * j - 1) / 2;
        long long e2 = j * (3 * j + 1) / 2;
        if (e1 > N && e2 > N) break;
        Rational sign((j % 2 == 0) ? 1 : -1);
        if (e1 <= N) c[static_cast<size_t>(e1)] += sign;
        if (j > 0 && e2 <= N) c[static_cast<size_t>(e2)] += sign;
    }
    return QSeries(0, std::move(c));
}

// Modular discriminant Delta = q prod (1-q^n)^24, window [1, N].
inline QSeries discriminant(long long N) {
    if (N < 1) throw std::invalid_argument("discriminant: order must be >= 1");
    QSeries p = euler_product(N - 1);
    QSeries p3 = mul(mul(p, p), p);
    QSeries p6 = mul(p3, p3);
    QSeries p12 = mul(p6, p6);
    QSeries p24 = mul(p12, p12);
    return mul(QSeries::monomial(Rational(1), 1, N), p24);
}

// Generators of the modular forms for Gamma_0(2):
//   X2 = 2 E2(q^2) - E2(q)  (weight 2, constant term 1)
//   X4 = E4(q)
inline std::pair<QSeries, QSeries> level2_generators(long long N) {
    QSeries e2 = eisenstein_e(2, N);
    QSeries x2 = add(scalar_mul(Rational(2), b_op(2, e2)), scalar_mul(Rational(-1), e2));
    return {x2.restricted(0, N), eisenstein_e(4, N)};
}

// ---------------------------------------------------------------------------
// Quasimodular forms as C2-polynomials
// ---------------------------------------------------------------------------

// Exponents of the three generators, in the order
//   level 1: (C2, C4, C6)     level 2: (C2, X2, X4)
using ExpVec = std::array<int, 3>;

inline std::array<int, 3> generator_weights(int level) {
    if (level == 1) return {2, 4, 6};
    if (level == 2) return {2, 2, 4};
    throw std::invalid_argument("level must be 1 or 2");
}

inline std::array<const char*, 3> generator_names(int level) {
    if (level == 1) return {"C2", "C4", "C6"};
    return {"C2", "X2", "X4"};
}

// A weakly holomorphic quasimodular form f of the given level and weight with
// pole of order at most `pole_order` at q = 0, stored as the polynomial
// Delta^{pole_order} * f in the level's generators. Every monomial has total
// generator weight  weight + 12 * pole_order.
struct QMForm {
    int level = 1;
    int weight = 0;
    int pole_order = 0;
    std::map<ExpVec, Rational> poly;

    bool is_zero() const {
        for (auto& [e, c] : poly)
            if (c != 0) return false;
        return true;
    }

    int c2_degree() const {
        int d = 0;
        for (auto& [e, c] : poly)
            if (c != 0) d = std::max(d, e[0]);
        return d;
    }

    std::string str() const {
        auto names = generator_names(level);
        std::string s;
        for (auto& [e, c] : poly) {
            if (c == 0) continue;
            if (!s.empty()) s += " + ";
            s += rational_to_string(c);
            for (int i = 0; i < 3; ++i) {
                if (e[i] == 0) continue;
                s += std::string("*") + names[i];
                if (e[i] > 1) s += "^" + std::to_string(e[i]);
            }
        }
        if (s.empty()) s = "0";
        if (pole_order > 0) s = "(" + s + ") / Delta^" + std::to_string(pole_order);
        return s;
    }
};

// Formal partial derivative with respect to the C2 variable.
// Weight drops by 2; level and pole order are unchanged.
inline QMForm ddc2(const QMForm& f) {
    QMForm out{f.level, f.weight - 2, f.pole_order, {}};
    for (auto& [e, c] : f.poly) {
        if (e[0] == 0 || c == 0) continue;
        ExpVec d = e;
        d[0] -= 1;
        out.poly[d] += Rational(e[0]) * c;
    }
    for (auto it = out.poly.begin(); it != out.poly.end();)
        it = (it->second == 0) ? out.poly.erase(it) : std::next(it);
    return out;
}

// All generator-exponent vectors of total weight w at the given level.
inline std::vector<ExpVec> monomials_of_weight(int level, int w) {
    std::vector<ExpVec> out;
    if (w < 0) return out;
    auto gw = generator_weights(level);
    for (int a = 0; a * gw[0] <= w; ++a)
        for (int b = 0; a * gw[0] + b * gw[1] <= w; ++b) {
            int rest = w - a * gw[0] - b * gw[1];
            if (rest % gw[2] == 0) out.push_back({a, b, rest / gw[2]});
        }
    return out;
}

namespace detail {

// Expansions of the basis monomials (1/Delta^m) * C2^a G1^b G2^c on
// [-m, N], cached per (level, total weight, pole, N).
inline std::shared_ptr<const std::vector<QSeries>> monomial_expansions(
    int level, int total_weight, int pole, long long N,
    const std::vector<ExpVec>& monos) {
    using Key = std::tuple<int, int, int, long long>;
    static std::map<Key, std::shared_ptr<const std::vector<QSeries>>> cache;
    static std::mutex mu;
    Key key{level, total_weight, pole, N};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    long long M = N + pole + 1;
    std::array<QSeries, 3> gens = [&] {
        if (level == 1)
            return std::array<QSeries, 3>{eisenstein_c(2, M), eisenstein_c(4, M), eisenstein_c(6, M)};
        auto [x2, x4] = level2_generators(M);
        return std::array<QSeries, 3>{eisenstein_c(2, M), x2, x4};
    }();

    int maxexp[3] = {0, 0, 0};
    for (auto& e : monos)
        for (int i = 0; i < 3; ++i) maxexp[i] = std::max(maxexp[i], e[i]);
    std::array<std::vector<QSeries>, 3> powers;
    for (int i = 0; i < 3; ++i) {
        powers[i].push_back(QSeries::constant(Rational(1), M));
        for (int e = 1; e <= maxexp[i]; ++e) powers[i].push_back(mul(powers[i].back(), gens[i]));
    }
    QSeries pole_factor = QSeries::constant(Rational(1), M);
    if (pole > 0) {
        QSeries invd = invert(discriminant(M + 2));
        for (int i = 0; i < pole; ++i) pole_factor = mul(pole_factor, invd);
    }

    auto out = std::make_shared<std::vector<QSeries>>();
    for (auto& e : monos) {
        QSeries s = mul(mul(powers[0][e[0]], powers[1][e[1]]), powers[2][e[2]]);
        s = mul(s, pole_factor);
        out->push_back(s.restricted(-pole, N));
    }
    std::lock_guard<std::mutex> lock(mu);
    cache[key] = out;
    return out;
}

}  // namespace detail

// q-expansions (to order N) of the basis of weakly holomorphic quasimodular
// forms of the given level, weight and pole order: (1/Delta^m) times each
// generator monomial of weight  k + 12m. The expansions are certified
// linearly independent on the window; a too-small window is an error.
inline std::vector<QSeries> basis(int level, int weight, int pole, long long N) {
    if (weight + 12 * pole < 0) return {};
    auto monos = monomials_of_weight(level, weight + 12 * pole);
    auto exps = detail::monomial_expansions(level, weight + 12 * pole, pole, N, monos);
    if (!monos.empty()) {
        linalg::RMatrix A(static_cast<size_t>(N + pole + 1), std::vector<Rational>(monos.size()));
        for (size_t j = 0; j < exps->size(); ++j)
            for (long long e = -pole; e <= N; ++e)
                A[static_cast<size_t>(e + pole)][j] = (*exps)[j].coeff(e);
        if (!linalg::full_column_rank(A))
            throw PrecisionError("basis: window too small to certify independence");
    }
    return *exps;
}

// Write the expansion f as a C2-polynomial over the modular forms of the
// given level, with pole of order at most `pole`: solve the over-determined
// exact linear system against the monomial basis on f's entire window. The
// surplus equations certify membership numerically.
inline QMForm decompose(const QSeries& f, int level, int weight, int pole, int surplus = 10) {
    if (pole < 0) throw std::invalid_argument("decompose: negative pole order");
    auto monos = monomials_of_weight(level, weight + 12 * pole);
    const long long D = static_cast<long long>(monos.size());
    long long rows_beyond_pole = f.order() - (-pole) + 1;
    if (rows_beyond_pole < D + surplus)
        throw PrecisionError("decompose: window provides " + std::to_string(rows_beyond_pole) +
                             " coefficients beyond q^" + std::to_string(-pole) + ", needs " +
                             std::to_string(D + surplus));
    if (D == 0) {
        if (!f.is_zero()) throw MembershipError("membership failure: only the zero form has weight " +
                                                std::to_string(weight) + " at pole order " + std::to_string(pole));
        return QMForm{level, weight, pole, {}};
    }

    auto exps = detail::monomial_expansions(level, weight + 12 * pole, pole, f.order(), monos);
    long long lo = std::min(f.valuation(), static_cast<long long>(-pole));
    long long hi = f.order();
    linalg::RMatrix A(static_cast<size_t>(hi - lo + 1), std::vector<Rational>(static_cast<size_t>(D)));
    std::vector<Rational> b(static_cast<size_t>(hi - lo + 1));
    for (long long e = lo; e <= hi; ++e) {
        for (long long j = 0; j < D; ++j)
            A[static_cast<size_t>(e - lo)][static_cast<size_t>(j)] =
                e < -pole ? Rational(0) : (*exps)[static_cast<size_t>(j)].coeff(e);
        b[static_cast<size_t>(e - lo)] = f.coeff(e);
    }
    auto x = linalg::solve_overdetermined(A, b, [&](size_t i) {
        return "coefficient of q^" + std::to_string(lo + static_cast<long long>(i));
    });

    QMForm out{level, weight, pole, {}};
    for (long long j = 0; j < D; ++j)
        if (x[static_cast<size_t>(j)] != 0) out.poly[monos[static_cast<size_t>(j)]] = x[static_cast<size_t>(j)];
    return out;
}

// Expansion of the represented function on the window [-pole_order, N].
inline QSeries to_qseries(const QMForm& f, long long N) {
    auto monos = monomials_of_weight(f.level, f.weight + 12 * f.pole_order);
    auto exps = detail::monomial_expansions(f.level, f.weight + 12 * f.pole_order, f.pole_order, N, monos);
    QSeries acc = QSeries::zero(-f.pole_order, N);
    for (size_t j = 0; j < monos.size(); ++j) {
        auto it = f.poly.find(monos[j]);
        if (it == f.poly.end() || it->second == 0) continue;
        acc = add(acc, scalar_mul(it->second, (*exps)[j]));
    }
    return acc;
}

}  // namespace k3q
