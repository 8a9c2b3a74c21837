#include "k3q/modforms.hpp"

#include "testutil.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace k3q;
using k3q::testutil::random_rational;

namespace {

QMForm random_form(std::mt19937_64& rng, int level, int weight, int pole) {
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

}  // namespace

TEST_CASE("bernoulli numbers") {
    CHECK(bernoulli(2) == rat(1, 6));
    CHECK(bernoulli(4) == rat(-1, 30));
    CHECK(bernoulli(6) == rat(1, 42));
    CHECK(bernoulli(8) == rat(-1, 30));
    CHECK(bernoulli(10) == rat(5, 66));
    CHECK(bernoulli(12) == rat(-691, 2730));
}

TEST_CASE("renormalized Eisenstein series") {
    QSeries c2 = eisenstein_c(2, 6);
    CHECK(c2.coeff(0) == rat(-1, 24));
    CHECK(c2.coeff(1) == 1);
    CHECK(c2.coeff(2) == 3);
    CHECK(c2.coeff(3) == 4);

    QSeries c4 = eisenstein_c(4, 3);
    CHECK(c4.coeff(0) == rat(1, 2880));
    CHECK(c4.coeff(1) == rat(1, 12));

    for (int g = 1; g <= 5; ++g) {
        QSeries c = eisenstein_c(2 * g, 1);
        CHECK(c.coeff(0) == -bernoulli(2 * g) / (Rational(2 * g) * Rational(factorial(2 * g))));
    }

    CHECK_THROWS_AS(eisenstein_c(3, 5), std::invalid_argument);
    CHECK_THROWS_AS(eisenstein_c(0, 5), std::invalid_argument);
}

TEST_CASE("discriminant") {
    QSeries delta = discriminant(8);
    CHECK(delta.valuation() == 1);
    CHECK(delta.coeff(1) == 1);
    CHECK(delta.coeff(2) == -24);
    CHECK(delta.coeff(3) == 252);
    CHECK(delta.coeff(4) == -1472);

    auto p24 = k3q::testutil::partitions24(5);
    QSeries inv = invert(delta);
    for (long long n = 0; n <= 5; ++n) CHECK(inv.coeff(n - 1) == Rational(p24[size_t(n)]));

    QSeries one = mul(delta, inv);
    CHECK(one.coeff(0) == 1);
    for (long long e = 1; e <= one.order(); ++e) CHECK(one.coeff(e) == 0);
}

TEST_CASE("level 2 generators") {
    auto [x2, x4] = level2_generators(8);
    CHECK(x2.coeff(0) == 1);
    CHECK(x2.coeff(1) == 24);
    CHECK(x2.coeff(2) == 24);   // 2*(-24) + 24*sigma1(2)
    CHECK(x2.coeff(3) == 96);
    CHECK(equal_on_common_window(x4, eisenstein_e(4, 8)));

    for (int k = 0; k <= 12; k += 2) {
        size_t count = 0;
        for (auto& e : monomials_of_weight(2, k))
            if (e[0] == 0) ++count;
        CHECK(count == size_t(k / 4 + 1));
    }
}

TEST_CASE("basis enumeration and independence") {
    auto b00 = basis(1, 0, 0, 12);
    REQUIRE(b00.size() == 1);
    CHECK(b00[0].coeff(0) == 1);

    auto b40 = basis(1, 4, 0, 16);
    CHECK(b40.size() == 2);  // C2^2, C4

    auto lvl2 = basis(2, 12, 0, 30);
    size_t c2free = 0;
    auto monos = monomials_of_weight(2, 12);
    REQUIRE(monos.size() == lvl2.size());
    for (auto& e : monos)
        if (e[0] == 0) ++c2free;
    CHECK(c2free == 4);  // dim M_12(Gamma_0(2)) = 4
}

TEST_CASE("decompose recovers the Ramanujan identity") {
    QSeries dqc2 = dq(eisenstein_c(2, 24));
    QMForm f = decompose(dqc2, 1, 4, 0);
    REQUIRE(f.poly.size() == 2);
    CHECK(f.poly.at(ExpVec{2, 0, 0}) == -2);
    CHECK(f.poly.at(ExpVec{0, 1, 0}) == 10);

    // and the reverse direction coefficientwise
    CHECK(equal_on_common_window(to_qseries(f, 24), dqc2));
}

TEST_CASE("decompose roundtrips") {
    QSeries c2 = eisenstein_c(2, 14);
    QMForm f = decompose(c2, 1, 2, 0);
    REQUIRE(f.poly.size() == 1);
    CHECK(f.poly.at(ExpVec{1, 0, 0}) == 1);

    QSeries invd = invert(discriminant(30));
    QMForm g = decompose(invd, 1, -12, 1);
    REQUIRE(g.poly.size() == 1);
    CHECK(g.poly.at(ExpVec{0, 0, 0}) == 1);
    CHECK(g.pole_order == 1);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 6; ++trial) {
        int level = trial % 2 + 1;
        int weight = 2 * (trial % 4);
        int pole = trial % 2;
        QMForm h = random_form(rng, level, weight, pole);
        long long dim = static_cast<long long>(monomials_of_weight(level, weight + 12 * pole).size());
        long long N = dim + 14;
        QSeries hq = to_qseries(h, N);
        QMForm back = decompose(hq, level, weight, pole);
        CHECK(back.poly == h.poly);
        CHECK(equal_on_common_window(to_qseries(back, N), hq));
    }
}

TEST_CASE("decompose failure modes") {
    // a series that is not modular of the claimed weight
    QSeries e6 = eisenstein_e(6, 24);
    CHECK_THROWS_AS(decompose(e6, 1, 4, 0), MembershipError);

    // window too small to certify anything
    QSeries c2 = eisenstein_c(2, 5);
    CHECK_THROWS_AS(decompose(c2, 1, 2, 0), PrecisionError);
}

TEST_CASE("ddc2") {
    QMForm c2{1, 2, 0, {{ExpVec{1, 0, 0}, Rational(1)}}};
    QMForm one = ddc2(c2);
    CHECK(one.weight == 0);
    REQUIRE(one.poly.size() == 1);
    CHECK(one.poly.at(ExpVec{0, 0, 0}) == 1);

    QMForm c4{1, 4, 0, {{ExpVec{0, 1, 0}, Rational(1)}}};
    CHECK(ddc2(c4).is_zero());

    QSeries dqc2 = dq(eisenstein_c(2, 24));
    QMForm d = ddc2(decompose(dqc2, 1, 4, 0));
    REQUIRE(d.poly.size() == 1);
    CHECK(d.poly.at(ExpVec{1, 0, 0}) == -4);

    // depth drops by one per application; depth-p forms die after p+1
    std::mt19937_64 rng(11);
    QMForm f = random_form(rng, 1, 8, 0);
    int depth = f.c2_degree();
    QMForm g = f;
    for (int i = 0; i <= depth; ++i) {
        CHECK(g.weight == f.weight - 2 * i);
        g = ddc2(g);
    }
    CHECK(g.is_zero());
}

TEST_CASE("commutator of d/dC2 with Dq on decomposable forms") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 5; ++trial) {
        int level = trial % 2 + 1;
        int weight = -2 + 2 * (trial % 3);
        int pole = 1;
        QMForm f = random_form(rng, level, weight, pole);
        long long dim = static_cast<long long>(monomials_of_weight(level, weight + 2 + 12 * pole).size());
        long long N = dim + 16;
        QSeries fq = to_qseries(f, N);

        QMForm df = decompose(dq(fq), level, weight + 2, pole);
        QSeries lhs = to_qseries(ddc2(df), N);
        QSeries rhs = add(dq(to_qseries(ddc2(f), N)),
                          scalar_mul(Rational(-2 * weight), fq));
        CHECK(equal_on_common_window(lhs, rhs));
    }
}
