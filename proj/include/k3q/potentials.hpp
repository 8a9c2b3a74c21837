#pragma once

#include "k3q/hecke.hpp"
#include "k3q/qseries.hpp"
#include "k3q/rational.hpp"

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace k3q {

// ---------------------------------------------------------------------------
// The descendent alphabet on the elliptic K3
//
// Insertions are drawn from {1, F, W, p} together with a formal basis
// e_1..e_20 of the orthogonal complement of the hyperbolic plane, paired
// against its dual basis e^1..e^20. Only the basis/dual-basis pairing of
// that rank-20 block is modeled.
// ---------------------------------------------------------------------------

constexpr int kUPerpRank = 20;

struct InsClass {
    enum Kind : int { One = 0, F = 1, W = 2, P = 3, U = 4, UDual = 5 };
    Kind kind = One;
    int index = 0;  // 1..kUPerpRank for U / UDual

    auto operator<=>(const InsClass&) const = default;

    static InsClass one() { return {One, 0}; }
    static InsClass fiber() { return {F, 0}; }
    static InsClass section_sum() { return {W, 0}; }
    static InsClass point() { return {P, 0}; }
    static InsClass uperp(int i) { return {U, i}; }
    static InsClass uperp_dual(int i) { return {UDual, i}; }

    std::string str() const {
        switch (kind) {
            case One: return "1";
            case F: return "F";
            case W: return "W";
            case P: return "p";
            case U: return "u" + std::to_string(index);
            case UDual: return "v" + std::to_string(index);
        }
        return "?";
    }
};

inline int cdeg(const InsClass& c) {
    switch (c.kind) {
        case InsClass::One: return 0;
        case InsClass::P: return 2;
        default: return 1;
    }
}

inline int mdeg(const InsClass& c) {
    switch (c.kind) {
        case InsClass::One:
        case InsClass::F: return 0;
        case InsClass::U:
        case InsClass::UDual: return 1;
        default: return 2;  // W and p
    }
}

// Intersection pairing on H^2; zero against classes outside H^2.
inline Rational pairing(const InsClass& a, const InsClass& b) {
    using K = InsClass::Kind;
    if (cdeg(a) != 1 || cdeg(b) != 1) return Rational(0);
    K x = a.kind, y = b.kind;
    if ((x == K::F && y == K::W) || (x == K::W && y == K::F)) return Rational(1);
    if ((x == K::U && y == K::UDual) || (x == K::UDual && y == K::U))
        return Rational(a.index == b.index ? 1 : 0);
    if ((x == K::U && y == K::U) || (x == K::UDual && y == K::UDual))
        throw std::logic_error("pairing of two primal (or two dual) U-perp classes is outside the model");
    return Rational(0);  // <F,F>, <W,W> (W = B+F has square zero), U-perp against U
}

// Cup product; the alphabet is closed under it. nullopt means zero.
inline std::optional<std::pair<Rational, InsClass>> cup(const InsClass& a, const InsClass& b) {
    using K = InsClass::Kind;
    if (a.kind == K::One) return std::make_pair(Rational(1), b);
    if (b.kind == K::One) return std::make_pair(Rational(1), a);
    if (cdeg(a) + cdeg(b) > 2) return std::nullopt;  // beyond the point class
    Rational c = pairing(a, b);                      // two H^2 classes
    if (c == 0) return std::nullopt;
    return std::make_pair(c, InsClass::point());
}

struct Insertion {
    int a = 0;
    InsClass cls;
    auto operator<=>(const Insertion&) const = default;
    std::string str() const { return "t" + std::to_string(a) + "(" + cls.str() + ")"; }
};

inline Insertion tau(int a, InsClass c) { return Insertion{a, c}; }

// ---------------------------------------------------------------------------
// Potentials and expressions
// ---------------------------------------------------------------------------

// Marker for the tautological classes appearing in the catalogued psi-class
// identities; anything else is out of range for this calculus.
enum class Marker { None, Psi1 };

struct PotentialKey {
    int g = 0;
    long long m = 1;
    Marker marker = Marker::None;
    std::vector<Insertion> ins;  // canonical: sorted

    void canonicalize() { std::sort(ins.begin(), ins.end()); }

    auto operator<=>(const PotentialKey&) const = default;

    std::string str() const {
        std::string s = "F_{" + std::to_string(g) + "," + std::to_string(m) + "}(";
        if (marker == Marker::Psi1) s += "psi1; ";
        for (size_t i = 0; i < ins.size(); ++i) {
            if (i) s += " ";
            s += ins[i].str();
        }
        s += ")";
        return s;
    }
};

struct DegreeData {
    long long deg = 0;
    long long degbar = 0;
    long long ell = 0;
    long long k = 0;
};

inline DegreeData degree_data(int g, const std::vector<Insertion>& ins) {
    DegreeData d;
    for (auto& i : ins) {
        d.deg += cdeg(i.cls);
        d.degbar += mdeg(i.cls);
    }
    d.ell = 2 * g - 2 + d.degbar;
    d.k = 2 * g - 12 + d.degbar;
    return d;
}

// The reduced virtual dimension must match the integrand degree, otherwise
// the potential vanishes identically.
inline bool dimension_ok(const PotentialKey& key) {
    long long lhs = key.g + static_cast<long long>(key.ins.size());
    long long rhs = key.marker == Marker::Psi1 ? 1 : 0;
    for (auto& i : key.ins) rhs += i.a + cdeg(i.cls);
    return lhs == rhs;
}

// A rational-linear combination of Dq-words applied to potential atoms.
struct PotentialExpr {
    // (atom, Dq power) -> coefficient; zeros pruned
    std::map<std::pair<PotentialKey, int>, Rational> terms;

    static PotentialExpr zero() { return {}; }

    static PotentialExpr atom(PotentialKey key, Rational coeff = Rational(1), int dqpow = 0) {
        key.canonicalize();
        PotentialExpr e;
        if (coeff != 0) e.terms[{std::move(key), dqpow}] = std::move(coeff);
        return e;
    }

    void add_term(PotentialKey key, int dqpow, const Rational& coeff) {
        if (coeff == 0) return;
        key.canonicalize();
        auto it = terms.find({key, dqpow});
        if (it == terms.end()) {
            terms[{std::move(key), dqpow}] = coeff;
        } else {
            it->second += coeff;
            if (it->second == 0) terms.erase(it);
        }
    }

    PotentialExpr& operator+=(const PotentialExpr& other) {
        for (auto& [kd, c] : other.terms) add_term(kd.first, kd.second, c);
        return *this;
    }

    friend PotentialExpr operator+(PotentialExpr a, const PotentialExpr& b) { return a += b; }

    friend PotentialExpr operator*(const Rational& c, const PotentialExpr& e) {
        PotentialExpr out;
        if (c == 0) return out;
        for (auto& [kd, x] : e.terms) out.terms[kd] = c * x;
        return out;
    }

    // Dq applied to the whole expression.
    PotentialExpr dq_shifted() const {
        PotentialExpr out;
        for (auto& [kd, c] : terms) out.terms[{kd.first, kd.second + 1}] = c;
        return out;
    }

    bool operator==(const PotentialExpr&) const = default;

    std::string str() const {
        if (terms.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [kd, c] : terms) {
            if (!first) os << " + ";
            os << rational_to_string(c) << "*";
            if (kd.second > 0) os << "Dq^" << kd.second << " ";
            os << kd.first.str();
            first = false;
        }
        return os.str();
    }
};

// Künneth pieces of the diagonal of the K3 surface, restricted to the
// modeled alphabet: 1 x p + p x 1 + F x W + W x F + sum e_i x e^i.
inline std::vector<std::pair<InsClass, InsClass>> k3_diagonal() {
    std::vector<std::pair<InsClass, InsClass>> out;
    out.emplace_back(InsClass::one(), InsClass::point());
    out.emplace_back(InsClass::point(), InsClass::one());
    out.emplace_back(InsClass::fiber(), InsClass::section_sum());
    out.emplace_back(InsClass::section_sum(), InsClass::fiber());
    for (int i = 1; i <= kUPerpRank; ++i)
        out.emplace_back(InsClass::uperp(i), InsClass::uperp_dual(i));
    return out;
}

// ---------------------------------------------------------------------------
// Reduction to catalogue normal form
// ---------------------------------------------------------------------------

// Picks which applicable rewrite to apply next; used to randomize the
// reduction order in confluence tests. Receives the number of candidates.
using RuleChooser = std::function<size_t(size_t)>;

namespace detail {

struct WorkTerm {
    Rational coeff;
    int dqpow;
    PotentialKey key;
};

inline bool reducible_at(const PotentialKey& key, size_t i) {
    const Insertion& t = key.ins[i];
    if (t.cls.kind == InsClass::One && (t.a == 0 || t.a == 1)) return true;  // string / dilaton
    if (t.a == 0 && cdeg(t.cls) == 1) return true;                           // divisor
    return false;
}

inline void apply_rule(const WorkTerm& wt, size_t i, std::vector<WorkTerm>& out) {
    const PotentialKey& key = wt.key;
    const Insertion t = key.ins[i];
    std::vector<Insertion> rest;
    rest.reserve(key.ins.size() - 1);
    for (size_t j = 0; j < key.ins.size(); ++j)
        if (j != i) rest.push_back(key.ins[j]);

    auto rest_key = [&](std::vector<Insertion> v) {
        PotentialKey k{key.g, key.m, key.marker, std::move(v)};
        k.canonicalize();
        return k;
    };

    if (t.cls.kind == InsClass::One && t.a == 0) {
        // string equation
        for (size_t j = 0; j < rest.size(); ++j) {
            if (rest[j].a == 0) continue;
            std::vector<Insertion> v = rest;
            v[j].a -= 1;
            out.push_back({wt.coeff, wt.dqpow, rest_key(std::move(v))});
        }
        return;
    }
    if (t.cls.kind == InsClass::One && t.a == 1) {
        // dilaton equation
        Rational factor(2 * key.g - 2 + static_cast<long long>(rest.size()));
        if (factor != 0) out.push_back({wt.coeff * factor, wt.dqpow, rest_key(rest)});
        return;
    }

    // divisor equation: d/dgamma = <gamma,F> Dq + m <gamma,W>, plus contacts
    Rational cf = pairing(t.cls, InsClass::fiber());
    Rational cw = pairing(t.cls, InsClass::section_sum());
    if (cf != 0) out.push_back({wt.coeff * cf, wt.dqpow + 1, rest_key(rest)});
    if (cw != 0) out.push_back({wt.coeff * cw * Rational(key.m), wt.dqpow, rest_key(rest)});
    for (size_t j = 0; j < rest.size(); ++j) {
        if (rest[j].a == 0) continue;
        auto c = cup(rest[j].cls, t.cls);
        if (!c) continue;
        std::vector<Insertion> v = rest;
        v[j].a -= 1;
        v[j].cls = c->second;
        out.push_back({wt.coeff * c->first, wt.dqpow, rest_key(std::move(v))});
    }
}

inline void expand_psi1(const WorkTerm& wt, std::vector<WorkTerm>& out) {
    const PotentialKey& key = wt.key;
    bool shape_ok = key.g == 1 && (key.ins.size() == 1 || key.ins.size() == 2) &&
                    std::all_of(key.ins.begin(), key.ins.end(),
                                [](const Insertion& t) { return t.a == 0; });
    if (!shape_ok)
        throw std::domain_error("psi-decorated atom outside the catalogued identities: " + key.str());

    if (key.ins.size() == 2) {
        // psi_1 = [delta_1] + (1/24)[delta_0]: the rational bubble carries
        // both markings and feeds their cup product through the node
        auto c = cup(key.ins[0].cls, key.ins[1].cls);
        if (c) {
            PotentialKey k{key.g, key.m, Marker::None, {tau(0, c->second)}};
            out.push_back({wt.coeff * c->first, wt.dqpow, std::move(k)});
        }
    }
    // (1/24)[delta_0]: genus drops, the K3 diagonal splits over two new markings
    for (auto& [left, right] : k3_diagonal()) {
        std::vector<Insertion> v = key.ins;
        v.push_back(tau(0, left));
        v.push_back(tau(0, right));
        PotentialKey k{key.g - 1, key.m, Marker::None, std::move(v)};
        k.canonicalize();
        out.push_back({wt.coeff * rat(1, 24), wt.dqpow, std::move(k)});
    }
}

}  // namespace detail

// Rewrites every atom with the string, dilaton and divisor equations (and
// the catalogued psi-class identities) until only irreducible atoms remain.
// Dimension-constraint violations vanish. The result is a canonical normal
// form independent of the order in which rules fire.
inline PotentialExpr reduce(const PotentialExpr& expr, const RuleChooser& choose = {}) {
    PotentialExpr out;
    std::vector<detail::WorkTerm> work;
    for (auto& [kd, c] : expr.terms) work.push_back({c, kd.second, kd.first});

    while (!work.empty()) {
        detail::WorkTerm wt = std::move(work.back());
        work.pop_back();
        if (wt.key.g < 0 || !dimension_ok(wt.key)) continue;
        if (wt.key.marker == Marker::Psi1) {
            detail::expand_psi1(wt, work);
            continue;
        }
        std::vector<size_t> candidates;
        for (size_t i = 0; i < wt.key.ins.size(); ++i)
            if (detail::reducible_at(wt.key, i)) candidates.push_back(i);
        if (candidates.empty()) {
            out.add_term(wt.key, wt.dqpow, wt.coeff);
            continue;
        }
        size_t pick = choose ? candidates[choose(candidates.size()) % candidates.size()]
                             : candidates.front();
        detail::apply_rule(wt, pick, work);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Multiple cover transform
// ---------------------------------------------------------------------------

// F_{g,m} = m^{deg - degbar} T_{m,ell} F_{g,1} with ell = 2g - 2 + degbar.
inline QSeries apply_mcf(const QSeries& primitive, int g, long long m,
                         const std::vector<Insertion>& ins) {
    DegreeData d = degree_data(g, ins);
    QSeries t = t_wrong(m, d.ell, primitive);
    return scalar_mul(pow_int(Rational(m), d.deg - d.degbar), t);
}

// ---------------------------------------------------------------------------
// Holomorphic anomaly assembly
// ---------------------------------------------------------------------------

// sigma endomorphism of H^*(S x S), as Künneth terms (coeff, left, right).
inline std::vector<std::tuple<Rational, InsClass, InsClass>> sigma_pair(const InsClass& a,
                                                                        const InsClass& b) {
    using K = InsClass::Kind;
    std::vector<std::tuple<Rational, InsClass, InsClass>> out;
    auto in_uperp = [](const InsClass& c) { return c.kind == K::U || c.kind == K::UDual; };
    if (a.kind == K::W && b.kind == K::W) {
        for (int i = 1; i <= kUPerpRank; ++i)
            out.emplace_back(Rational(1), InsClass::uperp(i), InsClass::uperp_dual(i));
        return out;
    }
    if (a.kind == K::W && in_uperp(b)) {
        out.emplace_back(Rational(-1), b, InsClass::fiber());
        return out;
    }
    if (in_uperp(a) && b.kind == K::W) {
        out.emplace_back(Rational(-1), InsClass::fiber(), a);
        return out;
    }
    if (in_uperp(a) && in_uperp(b)) {
        Rational c = pairing(a, b);
        if (c != 0) out.emplace_back(c, InsClass::fiber(), InsClass::fiber());
        return out;
    }
    return out;  // zero on H^0, Q<F>, H^4 factors
}

namespace detail {

// <tau_{a_1} ... tau_{a_n}>, pure psi integrals over the moduli of genus-0
// pointed curves: (n-3)! / prod a_i! when the dimensions match.
inline Rational psi_integral_genus0(const std::vector<int>& a) {
    long long n = static_cast<long long>(a.size());
    if (n < 3) return Rational(0);
    long long total = 0;
    for (int x : a) total += x;
    if (total != n - 3) return Rational(0);
    Rational val(factorial(n - 3));
    for (int x : a) val /= Rational(factorial(x));
    return val;
}

// Genus-1 pure psi integrals via the genus-1 topological recursion relation,
// which rewrites tau_{k+1} in terms of genus-0 data.
inline Rational psi_integral_genus1(const std::vector<int>& a) {
    long long n = static_cast<long long>(a.size());
    if (n < 1) return Rational(0);
    long long total = 0;
    for (int x : a) total += x;
    if (total != n) return Rational(0);

    size_t lead = 0;
    while (lead < a.size() && a[lead] == 0) ++lead;
    if (lead == a.size()) return Rational(0);
    std::vector<int> rest;
    for (size_t i = 0; i < a.size(); ++i)
        if (i != lead) rest.push_back(a[i]);

    // (1/24) <tau_{k} tau_0 tau_0 rest>_0  +  sum over splittings
    std::vector<int> g0 = rest;
    g0.push_back(a[lead] - 1);
    g0.push_back(0);
    g0.push_back(0);
    Rational val = rat(1, 24) * psi_integral_genus0(g0);
    size_t r = rest.size();
    for (size_t mask = 0; mask < (size_t(1) << r); ++mask) {
        std::vector<int> left{a[lead] - 1, 0}, right{0};
        for (size_t i = 0; i < r; ++i)
            (mask >> i & 1 ? left : right).push_back(rest[i]);
        val += psi_integral_genus0(left) * psi_integral_genus1(right);
    }
    return val;
}

// The constant generating series attached to the trivial curve class. For
// genus 0 the class is the fundamental one and the surface integral pairs
// against the point class; for genus 1 it is cut by c_2(S), of integral 24.
inline Rational vir_series(int g2, const std::vector<Insertion>& parts, const InsClass& extra) {
    std::vector<int> alist;
    Rational cupcoeff(1);
    InsClass cls = InsClass::one();
    auto fold = [&](const InsClass& c) {
        if (cupcoeff == 0) return;
        auto r = cup(cls, c);
        if (!r) {
            cupcoeff = Rational(0);
            return;
        }
        cupcoeff *= r->first;
        cls = r->second;
    };
    for (auto& p : parts) {
        alist.push_back(p.a);
        fold(p.cls);
    }
    alist.push_back(0);
    fold(extra);

    if (g2 == 0) {
        if (cupcoeff == 0 || cls.kind != InsClass::P) return Rational(0);
        return cupcoeff * psi_integral_genus0(alist);
    }
    if (g2 == 1) {
        if (cupcoeff == 0 || cls.kind != InsClass::One) return Rational(0);
        return Rational(24) * cupcoeff * psi_integral_genus1(alist);
    }
    return Rational(0);
}

}  // namespace detail

// The five-term combination whose equality with d/dC2 F_{g,m} is the
// holomorphic anomaly equation. Returned unreduced.
inline PotentialExpr assemble_H(int g, long long m, const std::vector<Insertion>& ins) {
    if (g < 0) throw std::invalid_argument("assemble_H: negative genus");
    if (m < 1) throw std::invalid_argument("assemble_H: divisibility must be positive");
    const size_t n = ins.size();
    PotentialExpr H;

    // (1) diagonal of P^1 inserted into genus g-1
    if (g >= 1) {
        const std::pair<InsClass, InsClass> diag[2] = {
            {InsClass::one(), InsClass::fiber()}, {InsClass::fiber(), InsClass::one()}};
        for (auto& [l, r] : diag) {
            std::vector<Insertion> v = ins;
            v.push_back(tau(0, l));
            v.push_back(tau(0, r));
            H.add_term(PotentialKey{g - 1, m, Marker::None, std::move(v)}, 0, Rational(1));
        }
    }

    // (2) splittings against the trivial-class series
    const std::pair<InsClass, InsClass> deltas[2] = {
        {InsClass::one(), InsClass::fiber()}, {InsClass::fiber(), InsClass::one()}};
    for (int g2 = 0; g2 <= 1 && g2 <= g; ++g2) {
        int g1 = g - g2;
        for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
            std::vector<Insertion> i1, i2;
            for (size_t i = 0; i < n; ++i) (mask >> i & 1 ? i2 : i1).push_back(ins[i]);
            for (auto& [delta, delta_dual] : deltas) {
                Rational v = detail::vir_series(g2, i2, delta_dual);
                if (v == 0) continue;
                std::vector<Insertion> v1 = i1;
                v1.push_back(tau(0, delta));
                H.add_term(PotentialKey{g1, m, Marker::None, std::move(v1)}, 0, Rational(2) * v);
            }
        }
    }

    // (3) psi-terms with pi^* pi_* applied to the insertion
    for (size_t i = 0; i < n; ++i) {
        InsClass pushed;
        switch (ins[i].cls.kind) {
            case InsClass::P: pushed = InsClass::fiber(); break;
            case InsClass::W: pushed = InsClass::one(); break;
            default: continue;  // F and U-perp classes push to zero
        }
        std::vector<Insertion> v = ins;
        v[i] = tau(ins[i].a + 1, pushed);
        H.add_term(PotentialKey{g, m, Marker::None, std::move(v)}, 0, Rational(-2));
    }

    // (4) F-replacement terms
    for (size_t i = 0; i < n; ++i) {
        Rational c = pairing(ins[i].cls, InsClass::fiber());
        if (c == 0) continue;
        std::vector<Insertion> v = ins;
        v[i].cls = InsClass::fiber();
        H.add_term(PotentialKey{g, m, Marker::None, std::move(v)}, 0, rat(20) / Rational(m) * c);
    }

    // (5) sigma-terms over pairs
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            for (auto& [c, left, right] : sigma_pair(ins[i].cls, ins[j].cls)) {
                std::vector<Insertion> v = ins;
                v[i].cls = left;
                v[j].cls = right;
                H.add_term(PotentialKey{g, m, Marker::None, std::move(v)}, 0,
                           rat(-2) / Rational(m) * c);
            }
        }
    }
    return H;
}

// ---------------------------------------------------------------------------
// Divisor-equation compatibility of the anomaly assembly
// ---------------------------------------------------------------------------

// d/dgamma applied to a whole expression: <gamma,F> Dq + m <gamma,W>.
inline PotentialExpr apply_divisor_operator(const InsClass& gamma, long long m,
                                            const PotentialExpr& e) {
    PotentialExpr out = pairing(gamma, InsClass::fiber()) * e.dq_shifted();
    out += (Rational(m) * pairing(gamma, InsClass::section_sum())) * e;
    return out;
}

struct CompatReport {
    bool ok = false;
    long long weight = 0;        // weight of F_{g,m}(base)
    Rational residual_coeff;     // -2k <gamma_n, F>
    PotentialExpr lhs, rhs, residual;
    std::string text;
};

// Checks that appending tau_0(gamma_n) to the anomaly assembly agrees with
// applying the divisor operator to it, up to the commutator correction
// -2k <gamma_n,F> F_{g,m}(base) and the contact assemblies.
inline CompatReport check_divisor_compat(int g, long long m, const std::vector<Insertion>& base,
                                         const InsClass& gamma_n) {
    if (cdeg(gamma_n) != 1) throw std::invalid_argument("divisor compatibility needs an H^2 class");
    CompatReport rep;
    rep.weight = degree_data(g, base).k;

    std::vector<Insertion> with = base;
    with.push_back(tau(0, gamma_n));
    rep.lhs = reduce(assemble_H(g, m, with));

    PotentialExpr rhs = apply_divisor_operator(gamma_n, m, reduce(assemble_H(g, m, base)));
    rep.residual_coeff = Rational(-2 * rep.weight) * pairing(gamma_n, InsClass::fiber());
    rep.residual = rep.residual_coeff *
                   reduce(PotentialExpr::atom(PotentialKey{g, m, Marker::None, base}));
    rhs += rep.residual;
    for (size_t i = 0; i < base.size(); ++i) {
        if (base[i].a == 0) continue;
        auto c = cup(base[i].cls, gamma_n);
        if (!c) continue;
        std::vector<Insertion> contact = base;
        contact[i].a -= 1;
        contact[i].cls = c->second;
        rhs += c->first * reduce(assemble_H(g, m, contact));
    }
    rep.rhs = rhs;
    rep.ok = rep.lhs == rep.rhs;

    std::ostringstream os;
    os << (rep.ok ? "ok" : "MISMATCH") << "  H_{" << g << "," << m << "}(base + t0("
       << gamma_n.str() << "))\n"
       << "  lhs  = " << rep.lhs.str() << "\n"
       << "  rhs  = " << rep.rhs.str() << "\n"
       << "  residual term = " << rep.residual.str() << "\n";
    rep.text = os.str();
    return rep;
}

}  // namespace k3q
