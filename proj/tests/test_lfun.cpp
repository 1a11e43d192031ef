#include "cubicmoments/verify.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace cubicmoments;

namespace {
const FieldTower& tower5() {
    static FieldTower T = make_tower(5, 1);
    return T;
}
}  // namespace

TEST_CASE("MonicTables matches factorize for every monic of degree <= 5") {
    FieldSpec F = make_field(5, 1);
    MonicTables mt(F, 5);
    for (int n = 0; n <= 5; ++n)
        for (uint64_t k = 0; k < static_cast<uint64_t>(monic_count(5, n)); ++k) {
            Poly f = monic_at(5, n, k);
            uint64_t fi = mt.flat(n, k);
            CHECK(BigInt(mt.dk(fi, 2)) == (n == 0 ? BigInt(1) : divisor_count(F, f, 2)));
            CHECK(BigInt(mt.dk(fi, 3)) == (n == 0 ? BigInt(1) : divisor_count(F, f, 3)));
            bool cube = true;
            if (n > 0)
                for (const auto& [P, e] : factorize(F, f).factors)
                    if (e % 3 != 0) cube = false;
            CHECK((mt.cube[fi] != 0) == cube);
        }
}

TEST_CASE("genus 0: every L-polynomial is 1 - u") {
    const FieldTower& T = tower5();
    auto fam = family_conductors(T, 1);
    REQUIRE(fam.size() == 20);
    for (const Poly& F : fam) {
        CubicChar chi = make_cubic_char(T, F);
        CharTable tab(T, chi, 2);
        LPolynomial L = l_polynomial(T, tab, 0);
        REQUIRE(L.a.size() == 2);
        CHECK(L.a[0] == QuadExtNumber(5, 1));
        CHECK(L.a[1] == QuadExtNumber(5, -1));
        CHECK(root_number_sum(L) == QuadExtNumber(5, 1));
        // L(1/2) = 1 - q^{-1/2}
        CHECK(central_value(L, 1) == QuadExtNumber(5, 1) - QuadExtNumber::s_pow(5, 1));
    }
}

TEST_CASE("the full (5, g=2) L-function suite") {
    const FieldTower& T = tower5();
    FamilySpec spec(5, 1, 2);
    LSuiteSummary s = lfun_suite(T, spec);
    CHECK(s.count == 480);
    CHECK(s.a0);
    CHECK(s.a_top_zero);
    CHECK(s.trivial_zero);
    CHECK(s.fe_k1);
    CHECK(s.fe_k2);
    CHECK(s.afe_k1);
    CHECK(s.afe_k2);
    CHECK(s.rh_worst < 1e-6);
    CHECK(s.omega_sum_eq_gauss);
    CHECK(s.omega_sq_identity);
    CHECK(s.gauss_crt_identity);
    CHECK(s.omega_modulus_worst < 1e-10);
    CHECK(s.omega_conj);
    CHECK(s.central_conj);
    CHECK(s.pairing_integer);
    // frozen exact moments for this family
    CHECK(s.m1 == QuadExtNumber(5, 384));
    CHECK(s.m2 == QuadExtNumber(5, 192, 0, 192, 0));
}

TEST_CASE("central value powers and the rh diagnostic") {
    const FieldTower& T = tower5();
    auto fam = family_conductors(T, 2);
    CubicChar chi = make_cubic_char(T, fam[42]);
    CharTable tab(T, chi, 4);
    LPolynomial L = l_polynomial(T, tab, 2);
    CHECK(central_value(L, 2) == central_value(L, 1) * central_value(L, 1));
    RhDiagnostic rh = rh_diagnostic(L);
    REQUIRE(rh.trivial_zero);
    REQUIRE(rh.root_moduli.size() == 2);
    for (double m : rh.root_moduli) CHECK(std::abs(m - 1.0 / std::sqrt(5.0)) < 1e-6);
    // conjugate character has the conjugate root multiset
    CubicChar chic = make_cubic_char(T, frobenius_conjugate(T, fam[42]));
    CharTable tabc(T, chic, 4);
    RhDiagnostic rhc = rh_diagnostic(l_polynomial(T, tabc, 2));
    std::vector<double> a = rh.root_moduli, b = rhc.root_moduli;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-9);
}

TEST_CASE("odd characters are rejected by the root-number machinery") {
    const FieldTower& T = tower5();
    auto fam = family_conductors(T, 2);
    CubicChar chi = make_cubic_char(T, fam[0]);
    CharTable tab(T, chi, 4);
    LPolynomial L = l_polynomial(T, tab, 2);
    CHECK_THROWS_AS(root_number_sum(L, /*is_even=*/false), std::invalid_argument);
    CHECK(restricted_char_is_even(T, chi));  // non-Kummer: conductor degree sums to 0 mod 3
}

TEST_CASE("afe rejects an out-of-range cutoff") {
    const FieldTower& T = tower5();
    auto fam = family_conductors(T, 2);
    CubicChar chi = make_cubic_char(T, fam[1]);
    CharTable tab(T, chi, 4);
    MonicTables mt(T.Fq, 4);
    LPolynomial L = l_polynomial(T, tab, 2);
    QuadExtNumber om = root_number_sum(L);
    CHECK_THROWS_AS(afe_check(T, tab, mt, 2, 2, 4, om, central_value(L, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(afe_check(T, tab, mt, 2, 2, -1, om, central_value(L, 2)),
                    std::invalid_argument);
}
