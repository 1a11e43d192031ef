#include "cubicmoments/verify.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace cubicmoments;

namespace {
const FieldTower& tower5() {
    static FieldTower T = make_tower(5, 1);
    return T;
}
}  // namespace

TEST_CASE("zeta series and values") {
    TruncSeries1 z = zeta_series(5, 6);
    CHECK(z.coeff(3) == 125);
    CHECK(zeta_value(5, 3) == Rat(25, 24));
    CHECK_THROWS_AS(zeta_value(5, 1), std::domain_error);
    // zeta_q(3/2)^2 zeta_q(3)^{-1} assembled exactly in the QuadExt ring
    QuadExtNumber z32 = zeta_value_three_halves(5);
    QuadExtNumber v = z32 * z32;
    v = v.scaled(Rat(1) / zeta_value(5, 3));
    double expect = 1.0 / std::pow(1.0 - 1.0 / std::sqrt(5.0), 2) * (24.0 / 25.0);
    CHECK(std::abs(v.to_complex().real() - expect) < 1e-12);
    CHECK(v.is_real());
    // zeta_value_three_halves is the exact inverse of (1 - s)
    CHECK(z32 * (QuadExtNumber(5, 1) - QuadExtNumber::s_pow(5, 1)) == QuadExtNumber(5, 1));
}

TEST_CASE("series ring axioms (random triples, exact)") {
    std::mt19937 rng(9);
    auto rnd = [&](int N) {
        TruncSeries1 s(N);
        for (int i = 0; i <= N; ++i) s.c[static_cast<size_t>(i)] = Rat(static_cast<int>(rng() % 13) - 6, 1 + rng() % 4);
        return s;
    };
    for (int t = 0; t < 20; ++t) {
        TruncSeries1 a = rnd(6), b = rnd(6), c = rnd(6);
        CHECK(((a * b) * c).c == (a * (b * c)).c);
        CHECK((a * (b + c)).c == (a * b + a * c).c);
    }
    TruncSeries1 u = rnd(6);
    u.c[0] = Rat(3, 2);
    CHECK((u * u.inverse()).c == TruncSeries1::one(6).c);
    TruncSeries1 zero_const(4);
    CHECK_THROWS_AS(zero_const.inverse(), std::domain_error);
}

TEST_CASE("perron extraction equals direct enumeration") {
    FieldSpec F = make_field(5, 1);
    TruncSeries1 z2 = zeta_series(5, 4) * zeta_series(5, 4);
    // d_2 at n = 2: 75
    CHECK(perron_extract(z2, 2, PerronMode::ExactN) == 75);
    BigInt direct = 0;
    enumerate_monic(F, 2, [&](const Poly& f) { direct += divisor_count(F, f); });
    CHECK(Rat(direct) == perron_extract(z2, 2, PerronMode::ExactN));
    // a = 1: up to n = 2 gives 31 = 1 + 5 + 25
    CHECK(perron_extract(zeta_series(5, 4), 2, PerronMode::UpToN) == 31);
    CHECK(perron_extract(zeta_series(5, 4), 0, PerronMode::ExactN) == 1);
    CHECK_THROWS_AS(perron_extract(z2, 5, PerronMode::ExactN), std::invalid_argument);
}

TEST_CASE("euler products") {
    // local factor (1-u^d)^{-1} over all degrees reproduces Z(u) (necklace identity)
    int N = 6;
    auto local = [&](int d) {
        TruncSeries1 f = TruncSeries1::one(N);
        if (d <= N) f.c[static_cast<size_t>(d)] = -1;
        return f.inverse();
    };
    TruncSeries1 z = euler_product(5, N, DegreeParity::All, local);
    for (int n = 0; n <= N; ++n) CHECK(z.coeff(n) == rat_pow(Rat(5), n));
    // local factor 1 gives the constant series
    TruncSeries1 one = euler_product(5, N, DegreeParity::All,
                                     [&](int) { return TruncSeries1::one(N); });
    CHECK(one.c == TruncSeries1::one(N).c);
    // constant term != 1 rejected
    CHECK_THROWS_AS(euler_product(5, 2, DegreeParity::All,
                                  [&](int) {
                                      TruncSeries1 f(2);
                                      f.c[0] = 2;
                                      return f;
                                  }),
                    std::invalid_argument);
    // A_q(0,0) = 1: the constant term of the assembled series
    TruncSeries2 aq = a_q_series(5, 4, 3);
    CHECK(aq.coeff(0, 0) == 1);
}

TEST_CASE("family-count generating function for l in {1, T, T(T+1)}") {
    const FieldTower& T = tower5();
    CHECK(family_count_genfun_check(T, poly_one(), 3));
    CHECK(family_count_genfun_check(T, poly_T(), 3));
    CHECK(family_count_genfun_check(T, poly_mul(T.Fq, poly_T(), Poly{{1, 1}}), 3));
    // the z^2 coefficient is the (5, g=2) family count, 480
    TruncSeries1 g1 = family_count_genfun(T, poly_one(), 3);
    CHECK(g1.coeff(0) == 1);
    CHECK(g1.coeff(1) == 20);
    CHECK(g1.coeff(2) == 480);
    CHECK(g1.coeff(3) == 12120);
}

TEST_CASE("B_2 identity grid (i <= 4, j <= 3)") {
    const FieldTower& T = tower5();
    TruncSeries2 brute, closed;
    bool ok = b2_identity_check(T, 4, 3, &brute, &closed);
    CHECK(ok);
    // the (i=0, j) row is the family-count generating function at l = 1
    TruncSeries1 g1 = family_count_genfun(T, poly_one(), 3);
    for (int j = 0; j <= 3; ++j) CHECK(brute.coeff(0, j) == g1.coeff(j));
    // the (i, j=0) column is the full d(l^3) sum (coprimality to F = 1 is vacuous)
    FieldSpec F5 = make_field(5, 1);
    for (int i = 1; i <= 4; ++i) {
        Rat s = 0;
        enumerate_monic(F5, i, [&](const Poly& l) { s += Rat(d_of_cube(F5, l)); });
        CHECK(brute.coeff(i, 0) == s);
    }
}

TEST_CASE("certified A_q value") {
    AqValue aq = a_q_value(5, Rat(1, 100000000));
    CHECK(aq.value.width() < Rat(1, 100000000));
    CHECK(aq.value.lo > 0);
    CHECK(aq.value.hi < 1);
    // enclosure widths shrink monotonically with the truncation degree
    for (size_t i = 1; i < aq.widths.size(); ++i) CHECK(aq.widths[i] <= aq.widths[i - 1]);
    // successive truncations agree within the tolerance: rerun at a tighter
    // tolerance and check the enclosures overlap
    AqValue aq2 = a_q_value(5, Rat(1, 10000000000LL));
    CHECK(aq2.truncation_degree >= aq.truncation_degree);
    CHECK(aq2.value.lo >= aq.value.lo);
    CHECK(aq2.value.hi <= aq.value.hi);
    CHECK_THROWS_AS(a_q_value(5, Rat(0)), std::invalid_argument);
    // q = 11 as well
    AqValue aq11 = a_q_value(11, Rat(1, 100000000));
    CHECK(aq11.value.width() < Rat(1, 100000000));
}

TEST_CASE("series checks battery") {
    const FieldTower& T = tower5();
    SeriesSummary s = series_checks(T);
    CHECK(s.b2_grid);
    CHECK(s.genfun_l1);
    CHECK(s.genfun_lT);
    CHECK(s.genfun_lTT1);
    CHECK(s.perron_registry);
    CHECK(s.genfun_z2_coeff == 480);
}
