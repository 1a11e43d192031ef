#include "cubicmoments/field.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace cubicmoments;

TEST_CASE("make_field picks the deterministic modulus") {
    FieldSpec F5 = make_field(5, 1);
    CHECK(F5.q == 5);
    CHECK(F5.modulus == std::vector<uint32_t>{0, 1});  // degenerate: T

    // exhaustive search over the 25 monic quadratics: x^2+1 splits (2^2 = -1),
    // x^2+2 is the smallest irreducible
    FieldSpec F25 = make_field(5, 2);
    CHECK(F25.q == 25);
    CHECK(F25.modulus == std::vector<uint32_t>{2, 0, 1});
}

TEST_CASE("make_field rejects bad parameters") {
    CHECK_THROWS_AS(make_field(2, 1), std::invalid_argument);   // even
    CHECK_THROWS_AS(make_field(9, 1), std::invalid_argument);   // composite
    CHECK_THROWS_AS(make_field(15, 2), std::invalid_argument);  // composite
    CHECK_THROWS_AS(make_field(5, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_field(5, -1), std::invalid_argument);
    // 7 is a fine field; the family gate (7 = 1 mod 3) lives elsewhere
    CHECK(make_field(7, 1).q == 7);
}

TEST_CASE("field arithmetic basics") {
    FieldSpec F = make_field(5, 2);
    // every nonzero element has an inverse
    for (uint32_t a = 1; a < F.q; ++a) CHECK(F.mul(a, F.inv(a)) == 1);
    // associativity / distributivity spot grid
    for (uint32_t a = 0; a < F.q; a += 3)
        for (uint32_t b = 0; b < F.q; b += 5)
            for (uint32_t c = 0; c < F.q; c += 7) {
                CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
                CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
            }
    FieldElem x(F, 7), y(F, 13);
    CHECK((x * y).key == F.mul(7, 13));
    CHECK((x * x.inverse()).key == 1);
}

TEST_CASE("trace to the prime field") {
    FieldSpec F = make_field(5, 2);
    CHECK(F.trace_to_prime(1) == 2);  // trace of 1 is e * 1
    CHECK(F.trace_to_prime(0) == 0);
    // additivity, exhaustive over all 625 pairs
    for (uint32_t a = 0; a < F.q; ++a)
        for (uint32_t b = 0; b < F.q; ++b)
            CHECK(F.trace_to_prime(F.add(a, b)) ==
                  (F.trace_to_prime(a) + F.trace_to_prime(b)) % 5);
    FieldElem one(F, 1);
    CHECK(trace_to_prime(one) == 2);
}

TEST_CASE("Frobenius x -> x^q fixes exactly F_q inside F_{q^2}") {
    FieldTower T = make_tower(5, 1);
    const FieldSpec& F = T.Fq2;
    int fixed = 0;
    for (uint32_t a = 0; a < F.q; ++a) {
        uint32_t fa = F.frobenius_iter(a, T.Fq.e);
        // field automorphism
        for (uint32_t b = 0; b < F.q; b += 7) {
            CHECK(F.frobenius_iter(F.mul(a, b), T.Fq.e) == F.mul(fa, F.frobenius_iter(b, T.Fq.e)));
            CHECK(F.frobenius_iter(F.add(a, b), T.Fq.e) == F.add(fa, F.frobenius_iter(b, T.Fq.e)));
        }
        if (fa == a) ++fixed;
    }
    CHECK(fixed == 5);
}

TEST_CASE("omega map") {
    FieldTower T = make_tower(5, 1);
    const FieldSpec& F = T.Fq2;
    // exactly 3 cube roots of 1 in F_25
    int nroots = 0;
    for (uint32_t a = 1; a < F.q; ++a)
        if (F.pow(a, 3) == 1) ++nroots;
    CHECK(nroots == 3);
    CHECK(T.omega.omega_exp(1) == 0);                      // Omega(1) = 1
    CHECK(F.mul(T.omega.zeta, T.omega.zeta2) == 1);        // inverse pair
    CHECK(T.omega.zeta < T.omega.zeta2);                   // smaller-key choice
    // group isomorphism on all nine pairs
    auto img = [&](int j) { return j == 0 ? 1u : j == 1 ? T.omega.zeta : T.omega.zeta2; };
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            CHECK(F.mul(img(a), img(b)) == img((a + b) % 3));

    // no cube roots when 3 does not divide q-1
    FieldSpec F5 = make_field(5, 1);
    CHECK_THROWS_AS(make_omega_map(F5), std::invalid_argument);
}

TEST_CASE("tower lift is a field embedding") {
    // nontrivial case: F_25 inside F_625
    FieldTower T = make_tower(5, 2);
    CHECK(T.Fq.q == 25);
    CHECK(T.Fq2.q == 625);
    for (uint32_t a = 0; a < T.Fq.q; ++a)
        for (uint32_t b = 0; b < T.Fq.q; ++b) {
            CHECK(T.lift[T.Fq.add(a, b)] == T.Fq2.add(T.lift[a], T.lift[b]));
            CHECK(T.lift[T.Fq.mul(a, b)] == T.Fq2.mul(T.lift[a], T.lift[b]));
        }
    CHECK(T.lift[0] == 0);
    CHECK(T.lift[1] == 1);
}
