#include "k3q/degeneration.hpp"
#include "k3q/modforms.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace k3q;

TEST_CASE("genus-two golden coefficients") {
    QSeries f = assemble_f22(4);
    CHECK(f.coeff(-2) == 0);
    CHECK(f.coeff(-1) == 0);
    CHECK(f.coeff(0) == 0);
    CHECK(f.coeff(1) == 36);
    CHECK(f.coeff(2) == 8760);
    CHECK(f.coeff(3) == 754992);
    CHECK(f.coeff(4) == 36694512);
}

TEST_CASE("degeneration matches the multiple cover transform") {
    CHECK(crosscheck_mcf(4).ok);
    CrossCheck deep = crosscheck_mcf(30);
    CHECK(deep.ok);
    CHECK(!deep.mismatch_exponent.has_value());
}

TEST_CASE("the assembled series is quasimodular of level two") {
    long long N = 50;
    QSeries f = assemble_f22(N);
    QSeries d = discriminant(N + 4);
    QSeries prod = mul(mul(d, d), f);
    QMForm dec = decompose(prod.truncated(N), 2, 20, 0);
    CHECK(!dec.is_zero());
    CHECK(equal_on_common_window(to_qseries(dec, N), prod));
}

TEST_CASE("plan excludes all-point profiles on the K3 side") {
    for (const auto& split : f22_plan().splittings) {
        bool all_omega = true;
        for (const auto& part : split.left) all_omega = all_omega && part.omega;
        CHECK(!all_omega);
    }
}

TEST_CASE("perturbing the genus-one primitive breaks the golden values") {
    const std::vector<Rational> golden = {Rational(36), Rational(8760), Rational(754992),
                                          Rational(36694512)};
    long long inner = 2 * (4 + 4);
    QSeries base = catalogue::f11_p(inner);
    for (long long e : {0, 1, 2, 4, 6}) {
        std::vector<Rational> coeffs;
        for (long long i = base.valuation(); i <= base.order(); ++i) coeffs.push_back(base.coeff(i));
        coeffs[static_cast<size_t>(e - base.valuation())] += rat(1, 7);
        QSeries mutated(base.valuation(), coeffs);
        QSeries f = assemble_f22_from(mutated, 4);
        bool differs = false;
        for (long long n = 1; n <= 4; ++n) differs = differs || f.coeff(n) != golden[size_t(n - 1)];
        CHECK(differs);
    }
    // sanity: the unperturbed series reproduces them
    QSeries f = assemble_f22_from(base, 4);
    for (long long n = 1; n <= 4; ++n) CHECK(f.coeff(n) == golden[size_t(n - 1)]);
}
