#pragma once

#include "k3q/rational.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace k3q {

// Thrown when an operation would leave an empty coefficient window, or when
// a linear problem has too few exact coefficients to pin down its answer.
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Truncated Laurent series in q over the rationals.
//
// A series stores exact coefficients on the window [valuation(), order()].
// Exponents below the window are exactly zero (the window's lower end is a
// proven bound on the pole), exponents above it are unknown. Every operation
// propagates the window so that stored coefficients stay exact; knowledge is
// never extended silently.
class QSeries {
public:
    QSeries(long long valuation, std::vector<Rational> coeffs)
        : val_(valuation), coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw std::invalid_argument("QSeries with empty window");
    }

    static QSeries zero(long long v, long long N) {
        if (N < v) throw std::invalid_argument("QSeries window with order < valuation");
        return QSeries(v, std::vector<Rational>(static_cast<size_t>(N - v + 1)));
    }

    // c on the window [0, N].
    static QSeries constant(const Rational& c, long long N) {
        QSeries s = zero(0, N);
        s.coeffs_[0] = c;
        return s;
    }

    // c * q^e on the window [e, N].
    static QSeries monomial(const Rational& c, long long e, long long N) {
        QSeries s = zero(e, N);
        s.coeffs_[0] = c;
        return s;
    }

    long long valuation() const { return val_; }
    long long order() const { return val_ + static_cast<long long>(coeffs_.size()) - 1; }

    // Coefficient of q^e. Exactly zero below the window; above it the value
    // is unknown and asking for it is an error.
    const Rational& coeff(long long e) const {
        static const Rational kZero(0);
        if (e < val_) return kZero;
        if (e > order()) {
            throw PrecisionError("coefficient of q^" + std::to_string(e) +
                                 " lies above the known window [" + std::to_string(val_) +
                                 ", " + std::to_string(order()) + "]");
        }
        return coeffs_[static_cast<size_t>(e - val_)];
    }

    bool knows(long long e) const { return e <= order(); }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(),
                           [](const Rational& c) { return c == 0; });
    }

    // Shrink the window to [v, N] (must be contained in the known region).
    QSeries restricted(long long v, long long N) const {
        if (N < v) throw std::invalid_argument("restricted: empty window");
        if (N > order()) throw PrecisionError("restricted: window exceeds known order");
        std::vector<Rational> c(static_cast<size_t>(N - v + 1));
        for (long long e = v; e <= N; ++e) c[static_cast<size_t>(e - v)] = coeff(e);
        return QSeries(v, std::move(c));
    }

    QSeries truncated(long long N) const { return restricted(std::min(val_, N), N); }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (long long e = val_; e <= order(); ++e) {
            const Rational& c = coeff(e);
            if (c == 0) continue;
            if (!first) os << " + ";
            os << rational_to_string(c);
            if (e != 0) os << "*q^" << e;
            first = false;
        }
        if (first) os << "0";
        os << "  (window [" << val_ << ", " << order() << "])";
        return os.str();
    }

private:
    long long val_;
    std::vector<Rational> coeffs_;
};

// f + g on the window [min(v_f, v_g), min(N_f, N_g)].
inline QSeries add(const QSeries& f, const QSeries& g) {
    long long v = std::min(f.valuation(), g.valuation());
    long long N = std::min(f.order(), g.order());
    if (N < v) throw PrecisionError("add: empty result window");
    std::vector<Rational> c(static_cast<size_t>(N - v + 1));
    for (long long e = v; e <= N; ++e) c[static_cast<size_t>(e - v)] = f.coeff(e) + g.coeff(e);
    return QSeries(v, std::move(c));
}

inline QSeries scalar_mul(const Rational& c, const QSeries& f) {
    std::vector<Rational> out(static_cast<size_t>(f.order() - f.valuation() + 1));
    for (long long e = f.valuation(); e <= f.order(); ++e)
        out[static_cast<size_t>(e - f.valuation())] = c * f.coeff(e);
    return QSeries(f.valuation(), std::move(out));
}

inline QSeries sub(const QSeries& f, const QSeries& g) { return add(f, scalar_mul(Rational(-1), g)); }

// Cauchy product on the window [v_f + v_g, min(v_f + N_g, v_g + N_f)].
inline QSeries mul(const QSeries& f, const QSeries& g) {
    long long v = f.valuation() + g.valuation();
    long long N = std::min(f.valuation() + g.order(), g.valuation() + f.order());
    if (N < v) throw PrecisionError("mul: empty result window");
    std::vector<Rational> c(static_cast<size_t>(N - v + 1));
    for (long long i = f.valuation(); i <= f.order(); ++i) {
        const Rational& fi = f.coeff(i);
        if (fi == 0) continue;
        long long jmax = std::min(g.order(), N - i);
        for (long long j = g.valuation(); j <= jmax; ++j) {
            c[static_cast<size_t>(i + j - v)] += fi * g.coeff(j);
        }
    }
    return QSeries(v, std::move(c));
}

// Multiplicative inverse; requires a nonzero coefficient at the valuation.
// Result window [-v_f, N_f - 2 v_f], so that mul(f, invert(f)) == 1 on the
// full window of f shifted appropriately.
inline QSeries invert(const QSeries& f) {
    const Rational& lead = f.coeff(f.valuation());
    if (lead == 0) throw std::domain_error("invert: zero leading coefficient");
    long long v = -f.valuation();
    long long len = f.order() - f.valuation() + 1;
    std::vector<Rational> g(static_cast<size_t>(len));
    g[0] = Rational(1) / lead;
    for (long long n = 1; n < len; ++n) {
        // coefficient of q^{v_f + v + n} in f*g must be zero
        Rational acc(0);
        for (long long i = 1; i <= n; ++i)
            acc += f.coeff(f.valuation() + i) * g[static_cast<size_t>(n - i)];
        g[static_cast<size_t>(n)] = -acc / lead;
    }
    return QSeries(v, std::move(g));
}

// D_q = q d/dq: multiplies the coefficient of q^n by n. Window unchanged.
inline QSeries dq(const QSeries& f) {
    std::vector<Rational> c(static_cast<size_t>(f.order() - f.valuation() + 1));
    for (long long e = f.valuation(); e <= f.order(); ++e)
        c[static_cast<size_t>(e - f.valuation())] = Rational(e) * f.coeff(e);
    return QSeries(f.valuation(), std::move(c));
}

inline QSeries dq_pow(const QSeries& f, int times) {
    QSeries out = f;
    for (int i = 0; i < times; ++i) out = dq(out);
    return out;
}

// B_d: q -> q^d. Window [d v, d N]; exponents that are not multiples of d
// are exactly zero.
inline QSeries b_op(long long d, const QSeries& f) {
    if (d < 1) throw std::invalid_argument("b_op: d must be positive");
    long long v = d * f.valuation();
    long long N = d * f.order();
    std::vector<Rational> c(static_cast<size_t>(N - v + 1));
    for (long long e = f.valuation(); e <= f.order(); ++e)
        c[static_cast<size_t>(d * e - v)] = f.coeff(e);
    return QSeries(v, std::move(c));
}

// U_d: keeps a_{dn} at exponent n. Known for all n <= floor(N/d); when no
// multiple of d lies in the window the result is a zero series.
inline QSeries u_op(long long d, const QSeries& f) {
    if (d < 1) throw std::invalid_argument("u_op: d must be positive");
    auto floordiv = [](long long a, long long b) {
        long long q = a / b;
        return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
    };
    long long hi = floordiv(f.order(), d);
    long long lo = std::min(-floordiv(-f.valuation(), d), hi);  // ceil(v/d), clamped
    std::vector<Rational> c(static_cast<size_t>(hi - lo + 1));
    for (long long n = lo; n <= hi; ++n) {
        long long e = d * n;
        c[static_cast<size_t>(n - lo)] = e < f.valuation() ? Rational(0) : f.coeff(e);
    }
    return QSeries(lo, std::move(c));
}

// Exact comparison on the intersection of the known windows.
// Returns the first mismatching exponent, if any.
inline std::optional<long long> first_mismatch(const QSeries& f, const QSeries& g) {
    long long v = std::min(f.valuation(), g.valuation());
    long long N = std::min(f.order(), g.order());
    if (N < v) throw PrecisionError("first_mismatch: windows do not overlap");
    for (long long e = v; e <= N; ++e)
        if (f.coeff(e) != g.coeff(e)) return e;
    return std::nullopt;
}

inline bool equal_on_common_window(const QSeries& f, const QSeries& g) {
    return !first_mismatch(f, g).has_value();
}

inline QSeries operator+(const QSeries& f, const QSeries& g) { return add(f, g); }
inline QSeries operator-(const QSeries& f, const QSeries& g) { return sub(f, g); }
inline QSeries operator*(const QSeries& f, const QSeries& g) { return mul(f, g); }
inline QSeries operator*(const Rational& c, const QSeries& f) { return scalar_mul(c, f); }
inline QSeries operator-(const QSeries& f) { return scalar_mul(Rational(-1), f); }

}  // namespace k3q
