#include "cubicmoments/cyclo.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace cubicmoments;

namespace {
CycloNumber random_cyclo(std::mt19937& rng, int64_t p) {
    CycloNumber x(p);
    for (int i = 0; i <= p - 2; ++i)
        for (int j = 0; j <= 1; ++j)
            x.accumulate(i, j, Rat(static_cast<int>(rng() % 21) - 10, 1 + rng() % 7));
    return x;
}
QuadExtNumber random_qe(std::mt19937& rng, int64_t q) {
    return QuadExtNumber(q, Rat(static_cast<int>(rng() % 19) - 9, 1 + rng() % 5),
                         Rat(static_cast<int>(rng() % 19) - 9, 1 + rng() % 5),
                         Rat(static_cast<int>(rng() % 19) - 9, 1 + rng() % 5),
                         Rat(static_cast<int>(rng() % 19) - 9, 1 + rng() % 5));
}
}  // namespace

TEST_CASE("cyclotomic relations") {
    const int64_t p = 5;
    // 1 + omega + omega^2 = 0
    CycloNumber s = CycloNumber::root(p, 0, 0) + CycloNumber::root(p, 0, 1) + CycloNumber::root(p, 0, 2);
    CHECK(s.is_zero());
    // sum of all zeta_5 powers = 0
    CycloNumber z(p);
    for (int i = 0; i < 5; ++i) z += CycloNumber::root(p, i, 0);
    CHECK(z.is_zero());
    // canonical: reductions land in the basis and equality is structural
    CHECK(CycloNumber::root(p, 4, 0) ==
          CycloNumber(p) - CycloNumber::root(p, 0, 0) - CycloNumber::root(p, 1, 0) -
              CycloNumber::root(p, 2, 0) - CycloNumber::root(p, 3, 0));
}

TEST_CASE("cyclotomic ring axioms on random triples, exact") {
    std::mt19937 rng(42);
    for (int t = 0; t < 25; ++t) {
        CycloNumber a = random_cyclo(rng, 5), b = random_cyclo(rng, 5), c = random_cyclo(rng, 5);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
    }
}

TEST_CASE("conjugation is an involutive ring homomorphism") {
    std::mt19937 rng(43);
    for (int t = 0; t < 25; ++t) {
        CycloNumber a = random_cyclo(rng, 5), b = random_cyclo(rng, 5);
        CHECK(a.conj().conj() == a);
        CHECK((a * b).conj() == a.conj() * b.conj());
        CHECK((a + b).conj() == a.conj() + b.conj());
        // x * conj(x) is real under the float evaluation
        CHECK(std::abs((a * a.conj()).to_complex().imag()) < 1e-12);
    }
}

TEST_CASE("to_complex diagnostics") {
    CHECK(std::abs(std::abs(CycloNumber::root(5, 0, 1).to_complex()) - 1.0) < 1e-12);
    CHECK(std::abs(CycloNumber(5).to_complex()) == 0.0);
    // exact equality implies float distance < 1e-10
    std::mt19937 rng(44);
    for (int t = 0; t < 1000; ++t) {
        CycloNumber a = random_cyclo(rng, 5);
        CycloNumber b = a;
        CHECK(std::abs(a.to_complex() - b.to_complex()) < 1e-10);
    }
    CHECK_THROWS_AS(CycloNumber(5) + CycloNumber(7), std::invalid_argument);
}

TEST_CASE("quadratic extension ring") {
    const int64_t q = 5;
    QuadExtNumber s = QuadExtNumber::s_pow(q, 1);
    CHECK(s * s == QuadExtNumber(q, Rat(1, 5)));  // s^2 = 1/q exactly
    // (1-s)^2 = 1 - 2s + 1/q: the AFE prefactor at k = 2
    QuadExtNumber pref = QuadExtNumber(q, 1) - s;
    CHECK(pref * pref == QuadExtNumber(q, Rat(6, 5), 0, -2, 0));
    // omega powers
    CHECK(QuadExtNumber::omega_pow(q, 1) * QuadExtNumber::omega_pow(q, 2) == QuadExtNumber(q, 1));
    CHECK(QuadExtNumber::omega_pow(q, 1) + QuadExtNumber::omega_pow(q, 2) == QuadExtNumber(q, -1));

    std::mt19937 rng(45);
    for (int t = 0; t < 50; ++t) {
        QuadExtNumber x = random_qe(rng, q), y = random_qe(rng, q), z = random_qe(rng, q);
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * (y + z) == x * y + x * z);
        CHECK((x * y).conj() == x.conj() * y.conj());
        QuadExtNumber r = x + x.conj();
        CHECK(r.is_real());
        CHECK(r.conj() == r);
    }
    CHECK_THROWS_AS(QuadExtNumber(5, 1) + QuadExtNumber(11, 1), std::invalid_argument);
}

TEST_CASE("cyclo to quadext embedding") {
    CycloNumber x = CycloNumber::root(5, 0, 1).scaled(Rat(3, 2)) + CycloNumber::from_rat(5, Rat(7));
    QuadExtNumber y = cyclo_to_quadext(x, 5);
    CHECK(y == QuadExtNumber(5, 7, Rat(3, 2)));
    CHECK_THROWS_AS(cyclo_to_quadext(CycloNumber::root(5, 1, 0), 5), std::domain_error);
}
