#pragma once

#include "k3q/catalogue.hpp"
#include "k3q/degeneration.hpp"
#include "k3q/hecke.hpp"
#include "k3q/modforms.hpp"
#include "k3q/potentials.hpp"
#include "k3q/qseries.hpp"

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace k3q::verify {

struct CheckResult {
    int criterion = 0;  // acceptance criterion this check belongs to
    std::string name;
    bool ok = false;
    std::string detail;
};
using Suite = std::vector<CheckResult>;

inline bool all_ok(const Suite& s) {
    for (auto& r : s)
        if (!r.ok) return false;
    return true;
}

namespace detail {

inline Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<long long> num(-9, 9);
    std::uniform_int_distribution<long long> den(1, 4);
    return rat(num(rng), den(rng));
}

inline QSeries random_series(std::mt19937_64& rng, long long order) {
    std::uniform_int_distribution<long long> vd(-3, 0);
    long long v = vd(rng);
    std::vector<Rational> c(static_cast<size_t>(order - v + 1));
    for (auto& x : c) x = random_rational(rng);
    return QSeries(v, std::move(c));
}

inline QMForm random_form(std::mt19937_64& rng, int level, int weight, int pole) {
    auto monos = monomials_of_weight(level, weight + 12 * pole);
    QMForm f{level, weight, pole, {}};
    std::uniform_int_distribution<int> keep(0, 2);
    for (auto& m : monos) {
        if (keep(rng) == 0) continue;
        Rational c = random_rational(rng);
        if (c != 0) f.poly[m] = c;
    }
    if (f.poly.empty() && !monos.empty()) f.poly[monos[0]] = Rational(1);
    return f;
}

inline CheckResult series_check(int criterion, const std::string& name, const QSeries& lhs,
                                const QSeries& rhs) {
    CheckResult r{criterion, name, false, ""};
    auto mismatch = first_mismatch(lhs, rhs);
    r.ok = !mismatch.has_value();
    if (!r.ok) r.detail = "first mismatch at q^" + std::to_string(*mismatch);
    return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Suite: commutators (Lemma-style operator identities)
// ---------------------------------------------------------------------------

inline Suite commutators(long long order, std::uint64_t seed) {
    Suite suite;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long long> dd(1, 6), ld(-4, 4);

    bool ok_i = true, ok_ii = true, ok_iii = true, ok_iv = true;
    std::string di, dii, diii, div;
    for (int trial = 0; trial < 10; ++trial) {
        QSeries f = detail::random_series(rng, order);
        long long d = dd(rng), e = dd(rng);
        if (!equal_on_common_window(b_op(d, b_op(e, f)), b_op(d * e, f))) ok_i = false;
        if (!equal_on_common_window(u_op(d, u_op(e, f)), u_op(d * e, f))) ok_ii = false;
        if (!equal_on_common_window(dq(b_op(d, f)), scalar_mul(Rational(d), b_op(d, dq(f)))) ||
            !equal_on_common_window(u_op(d, dq(f)), scalar_mul(Rational(d), dq(u_op(d, f)))))
            ok_iii = false;
        long long m = dd(rng) * 2, ell = ld(rng);
        if (!equal_on_common_window(t_wrong(m, ell + 2, dq(f)),
                                    scalar_mul(Rational(m), dq(t_wrong(m, ell, f)))))
            ok_iv = false;
    }
    suite.push_back({7, "(i) B_d B_e = B_de on random series", ok_i, di});
    suite.push_back({7, "(ii) U_d U_e = U_de on random series", ok_ii, dii});
    suite.push_back({7, "(iii) Dq B_d = d B_d Dq and U_d Dq = d Dq U_d", ok_iii, diii});
    suite.push_back({7, "(iv) T_{m,l+2} Dq = m Dq T_{m,l}", ok_iv, div});

    // (v) d/dC2 T_{2,l+2} = 2 T_{2,l} d/dC2 through the level-2 decomposition
    {
        std::uniform_int_distribution<int> kd(-6, 6), lvd(-3, 3);
        int weights[3] = {2 * kd(rng), 2 * kd(rng), 6};
        bool ok = true;
        std::string detail;
        for (int t = 0; t < 3 && ok; ++t) {
            int k = weights[t];
            long long ell = lvd(rng);
            QMForm f = detail::random_form(rng, 1, k, 1);
            long long dim2 = static_cast<long long>(monomials_of_weight(2, k + 24).size());
            long long inner = 2 * std::max(order, dim2 + 14);
            QSeries fq = to_qseries(f, inner);
            QMForm dec = decompose(t_wrong(2, ell + 2, fq), 2, k, 2);
            QSeries lhs = to_qseries(ddc2(dec), order);
            QSeries rhs = scalar_mul(Rational(2), t_wrong(2, ell, to_qseries(ddc2(f), inner)));
            auto mm = first_mismatch(lhs, rhs.truncated(order));
            if (mm) {
                ok = false;
                detail = "weight " + std::to_string(k) + ", first mismatch at q^" + std::to_string(*mm);
            }
        }
        suite.push_back({7, "(v) d/dC2 T_{2,l+2} = 2 T_{2,l} d/dC2 on random forms", ok, detail});
    }

    // (vi) [d/dC2, Dq] = -2k on decomposable forms
    {
        bool ok = true;
        std::string detail;
        std::uniform_int_distribution<int> kd(-6, 6), lv(1, 2), pd(0, 1);
        for (int t = 0; t < 5 && ok; ++t) {
            int level = lv(rng), pole = pd(rng);
            int k = 2 * kd(rng);
            if (k + 12 * pole < 0) k = -k;
            QMForm f = detail::random_form(rng, level, k, pole);
            long long dim = static_cast<long long>(monomials_of_weight(level, k + 2 + 12 * pole).size());
            long long N = std::max(order, dim + 14 + pole);
            QSeries fq = to_qseries(f, N);
            QMForm df = decompose(dq(fq), level, k + 2, pole);
            QSeries lhs = to_qseries(ddc2(df), N);
            QSeries rhs = add(dq(to_qseries(ddc2(f), N)), scalar_mul(Rational(-2 * k), fq));
            auto mm = first_mismatch(lhs.truncated(std::min(N, order)), rhs.truncated(std::min(N, order)));
            if (mm) {
                ok = false;
                detail = "level " + std::to_string(level) + " weight " + std::to_string(k) +
                         ", first mismatch at q^" + std::to_string(*mm);
            }
        }
        suite.push_back({7, "(vi) [d/dC2, Dq] = -2k on decomposable forms", ok, detail});
    }
    return suite;
}

// ---------------------------------------------------------------------------
// Suite: hecke-decomp (wrong-weight operators as convolutions)
// ---------------------------------------------------------------------------

inline Suite hecke_decomp(long long order, std::uint64_t seed) {
    Suite suite;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long long> kd(-12, 12), ld(-6, 6);
    bool ok = true;
    std::string detail;
    for (int trial = 0; trial < 100 && ok; ++trial) {
        QSeries f = detail::random_series(rng, order);
        long long k = kd(rng), ell = ld(rng);
        for (long long m = 1; m <= 12 && ok; ++m) {
            QSeries lhs = t_wrong(m, ell, f);
            bool have = false;
            QSeries rhs = QSeries::zero(0, 0);
            for (long long a : divisors(m)) {
                QSeries term = scalar_mul(c_coeff(k, ell, a), b_op(a, hecke_t(m / a, k, f)));
                rhs = have ? add(rhs, term) : term;
                have = true;
            }
            auto mm = first_mismatch(lhs, rhs);
            if (mm) {
                ok = false;
                detail = "trial " + std::to_string(trial) + ", m=" + std::to_string(m) +
                         ", first mismatch at q^" + std::to_string(*mm);
            }
        }
    }
    suite.push_back({6, "T_{m,l} = sum c_{k,l}(a) B_a T_d on 100 random series, m <= 12", ok, detail});
    suite.push_back({6, "c_{-12,-2}(2) = 1023/8192", c_coeff(-12, -2, 2) == rat(1023, 8192), ""});

    bool ones = true;
    for (long long k = -12; k <= 12; ++k)
        for (long long ell = -6; ell <= 6; ++ell) ones = ones && c_coeff(k, ell, 1) == 1;
    suite.push_back({6, "c_{k,l}(1) = 1", ones, ""});
    return suite;
}

// ---------------------------------------------------------------------------
// Suite: examples (worked identities of the final section)
// ---------------------------------------------------------------------------

inline Suite examples(long long order) {
    Suite suite;

    // genus-one fiber descendent in divisibility two:
    // (1/3) Dq F_{0,2} = 2 T_2 F_{1,1}(t1 F) + (1023/1024) B_2 F_{1,1}(t1 F)
    {
        QSeries f11_t1f = scalar_mul(rat(1, 12), dq(catalogue::f01(2 * order)));
        QSeries lhs = scalar_mul(rat(1, 3), dq(catalogue::f02(order)));
        QSeries rhs = add(scalar_mul(Rational(2), hecke_t(2, -10, f11_t1f)),
                          scalar_mul(rat(1023, 1024), b_op(2, f11_t1f)));
        suite.push_back(detail::series_check(3, "(1/3) Dq F_{0,2} agrees with the transformed primitive",
                                             lhs, rhs.truncated(order)));
    }

    // structure of F_{0,2}
    {
        QSeries f02 = catalogue::f02(order);
        CheckResult lead{4, "F_{0,2} has q^-2 coefficient 1/8 and q^0 coefficient 27", false, ""};
        lead.ok = f02.coeff(-2) == rat(1, 8) && f02.coeff(0) == 27;
        suite.push_back(lead);

        QSeries f01 = catalogue::f01(2 * order);
        QSeries formA = add(u_op(2, f01), scalar_mul(rat(1, 8), b_op(2, f01)));
        QSeries formB = add(hecke_t(2, -12, f01), scalar_mul(rat(1023, 8192), b_op(2, f01)));
        suite.push_back(detail::series_check(
            4, "U_2 + (1/8) B_2 and T_2 + (1023/8192) B_2 agree on 1/Delta", formA.truncated(order),
            formB.truncated(order)));
    }

    // elliptic fiber series for g = 1..5
    {
        const Rational table[5] = {rat(1, 6), rat(-1, 30), rat(1, 42), rat(-1, 30), rat(5, 66)};
        bool ok = true;
        std::string detail;
        for (int g = 1; g <= 5 && ok; ++g) {
            QSeries s = catalogue::fiber_series(g, std::min<long long>(order, 12));
            Rational expect = -table[g - 1] * Rational(factorial(g)) /
                              (pow_int(Rational(2), g - 1) * Rational(2 * g) * Rational(factorial(2 * g)));
            if (s.coeff(0) != expect) {
                ok = false;
                detail = "constant term at genus " + std::to_string(g);
            }
            Rational coeff1 = Rational(2) * Rational(factorial(g)) /
                              (pow_int(Rational(2), g - 1) * Rational(factorial(2 * g)));
            if (g <= 5 && s.coeff(1) != coeff1) {
                ok = false;
                detail = "q^1 coefficient at genus " + std::to_string(g);
            }
        }
        suite.push_back({11, "F^E_g(t_{g-1} w) = (g!/2^{g-1}) C_{2g} for g = 1..5", ok, detail});
    }
    return suite;
}

// ---------------------------------------------------------------------------
// Suite: degeneration (genus-two golden values and the cross-check)
// ---------------------------------------------------------------------------

inline Suite degeneration(long long order) {
    Suite suite;
    const Rational golden[4] = {Rational(36), Rational(8760), Rational(754992), Rational(36694512)};

    QSeries f = assemble_f22(std::max<long long>(order, 4));
    bool ok = f.coeff(-2) == 0 && f.coeff(-1) == 0 && f.coeff(0) == 0;
    for (int n = 1; n <= 4; ++n) ok = ok && f.coeff(n) == golden[n - 1];
    suite.push_back({1, "genus-2 series is 36q + 8760q^2 + 754992q^3 + 36694512q^4 + ...", ok, ""});

    CrossCheck cc = crosscheck_mcf(order);
    CheckResult r{2, "degeneration output equals the transformed primitive through q^" +
                         std::to_string(order),
                  cc.ok, ""};
    if (!cc.ok) r.detail = "first mismatch at q^" + std::to_string(*cc.mismatch_exponent);
    suite.push_back(r);

    // mutation test: any perturbation of the genus-one entry is detected
    {
        bool detected = true;
        std::string detail;
        long long inner = 2 * (4 + 4);
        QSeries base = catalogue::f11_p(inner);
        for (long long e : {0, 1, 2, 4, 6}) {
            std::vector<Rational> coeffs;
            for (long long i = base.valuation(); i <= base.order(); ++i)
                coeffs.push_back(base.coeff(i));
            coeffs[static_cast<size_t>(e - base.valuation())] += rat(1, 7);
            QSeries mutated = assemble_f22_from(QSeries(base.valuation(), coeffs), 4);
            bool differs = false;
            for (int n = 1; n <= 4; ++n) differs = differs || mutated.coeff(n) != golden[n - 1];
            if (!differs) {
                detected = false;
                detail = "perturbation at q^" + std::to_string(e) + " went unnoticed";
            }
        }
        // a perturbation beyond the golden window still breaks the deep cross-check
        long long deep = 30;
        QSeries wide = catalogue::f11_p(2 * (deep + 4));
        std::vector<Rational> coeffs;
        for (long long i = wide.valuation(); i <= wide.order(); ++i) coeffs.push_back(wide.coeff(i));
        coeffs[static_cast<size_t>(3 - wide.valuation())] += rat(1, 7);
        QSeries mutated = assemble_f22_from(QSeries(wide.valuation(), coeffs), deep);
        if (!first_mismatch(mutated, catalogue::f22_pp(deep)).has_value()) {
            detected = false;
            detail = "perturbation at q^3 agrees with the transform through q^30";
        }
        suite.push_back({5, "perturbed genus-one entry breaks the golden values", detected, detail});
    }
    return suite;
}

// ---------------------------------------------------------------------------
// Suite: compat (divisor compatibility of the anomaly assembly)
// ---------------------------------------------------------------------------

inline Suite compat() {
    Suite suite;
    const InsClass W = InsClass::section_sum();
    for (long long m : {1, 2}) {
        CompatReport r0 = check_divisor_compat(0, m, {tau(0, W)}, W);
        bool ok0 = r0.ok && r0.residual_coeff == 20;
        suite.push_back({10, "genus 0, m=" + std::to_string(m) + ": residual 20 F(t0(W))", ok0,
                         ok0 ? "" : r0.text});

        CompatReport r1 = check_divisor_compat(1, m, {tau(1, W)}, W);
        bool ok1 = r1.ok && r1.residual_coeff == 16;
        suite.push_back({10, "genus 1, m=" + std::to_string(m) + ": residual 16 F(t1(W))", ok1,
                         ok1 ? "" : r1.text});

        CompatReport rf = check_divisor_compat(0, m, {}, InsClass::fiber());
        bool okf = rf.ok && rf.lhs.terms.empty() && rf.rhs.terms.empty();
        suite.push_back({10, "genus 0, m=" + std::to_string(m) + ": fiber divisor is trivial", okf,
                         okf ? "" : rf.text});
    }
    return suite;
}

// ---------------------------------------------------------------------------
// Suite: membership (decomposition round trips and modularity)
// ---------------------------------------------------------------------------

inline Suite membership(long long order, std::uint64_t seed) {
    Suite suite;
    std::mt19937_64 rng(seed);

    {
        bool ok = true;
        std::string detail;
        std::uniform_int_distribution<int> kd(-6, 6), pd(0, 1);
        for (int trial = 0; trial < 50 && ok; ++trial) {
            int level = trial % 2 + 1;
            int pole = pd(rng);
            int k = 2 * kd(rng);
            if (k + 12 * pole < 0) k = -k;
            QMForm f = detail::random_form(rng, level, k, pole);
            long long dim = static_cast<long long>(monomials_of_weight(level, k + 12 * pole).size());
            long long N = dim + 14;
            QSeries fq = to_qseries(f, N);
            QMForm back = decompose(fq, level, k, pole);
            if (back.poly != f.poly || !equal_on_common_window(to_qseries(back, N), fq)) {
                ok = false;
                detail = "trial " + std::to_string(trial) + " (level " + std::to_string(level) +
                         ", weight " + std::to_string(k) + ", pole " + std::to_string(pole) + ")";
            }
        }
        suite.push_back({8, "decompose/expand round trip on 50 random forms", ok, detail});
    }

    {
        QMForm f = decompose(dq(eisenstein_c(2, 24)), 1, 4, 0);
        bool ok = f.poly.size() == 2 && f.poly.count(ExpVec{2, 0, 0}) &&
                  f.poly.at(ExpVec{2, 0, 0}) == -2 && f.poly.count(ExpVec{0, 1, 0}) &&
                  f.poly.at(ExpVec{0, 1, 0}) == 10;
        suite.push_back({8, "Dq C2 decomposes as -2 C2^2 + 10 C4", ok, ""});
    }

    {
        long long N = std::max<long long>(order, 48);
        QSeries f22 = assemble_f22(N);
        QSeries d = discriminant(N + 4);
        QSeries prod = mul(mul(d, d), f22).truncated(N);
        CheckResult r{8, "Delta^2 * genus-2 series lies in the level-2 space of weight 20", false, ""};
        try {
            QMForm dec = decompose(prod, 2, 20, 0);
            r.ok = equal_on_common_window(to_qseries(dec, N), prod);
        } catch (const std::exception& ex) {
            r.detail = ex.what();
        }
        suite.push_back(r);
    }

    {
        long long N = std::max<long long>(order, 30);
        QSeries f02 = catalogue::f02(N);
        QSeries d = discriminant(N + 4);
        QSeries prod = mul(mul(d, d), f02).truncated(N);
        CheckResult r{9, "Delta^2 F_{0,2} is modular of weight 12 for level 2 (no C2)", false, ""};
        try {
            QMForm dec = decompose(prod, 2, 12, 0);
            r.ok = dec.c2_degree() == 0 && ddc2(dec).is_zero() &&
                   equal_on_common_window(to_qseries(dec, N), prod);
        } catch (const std::exception& ex) {
            r.detail = ex.what();
        }
        suite.push_back(r);
    }
    return suite;
}

}  // namespace k3q::verify
