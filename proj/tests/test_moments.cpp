#include "cubicmoments/verify.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace cubicmoments;

namespace {
const FieldTower& tower5() {
    static FieldTower T = make_tower(5, 1);
    return T;
}
QuadExtNumber qe5(int64_t a, int64_t b, int64_t c, int64_t d) {
    return QuadExtNumber(5, a, b, c, d);
}
}  // namespace

TEST_CASE("(5, g=0) sweep: 20 characters with identical central values") {
    FamilySpec spec(5, 1, 0);
    MomentLedger led = sweep(tower5(), spec);
    CHECK(led.family_count == 20);
    CHECK(led.m1 == qe5(20, 0, -20, 0));   // 20 (1 - s)
    CHECK(led.m2 == qe5(24, 0, -40, 0));   // 20 (1 - s)^2
    CHECK(led.m2.is_real());
    MainTerm mt = main_term(5, 0);
    CHECK(mt.value.lo == 0);
    CHECK(mt.value.hi == 0);  // the g(g+2) factor kills it
}

TEST_CASE("(5, g=2) sweep: frozen exact moments and S-term tables") {
    FamilySpec spec(5, 1, 2);
    SweepOptions opts;
    opts.with_sterms = true;
    opts.with_gauss = true;
    MomentLedger led = sweep(tower5(), spec, opts);

    CHECK(led.family_count == 480);
    CHECK(led.m1 == qe5(384, 0, 0, 0));
    CHECK(led.m2 == qe5(192, 0, 192, 0));
    CHECK(led.m2.is_real());
    CHECK(led.records.size() == 480);

    REQUIRE(led.has_sterms);
    // S_{t,prin} and the cube/non-cube split, frozen from the exact sweep
    CHECK(led.s_prin[0] == qe5(480, 0, 0, 0));
    CHECK(led.s_prin[1] == qe5(480, 0, 0, 0));
    CHECK(led.s_prin[2] == qe5(192, 0, 0, 0));
    CHECK(led.s_prin[3] == qe5(192, 0, 192, 0));
    CHECK(led.s_prin_cube[0] == qe5(480, 0, 0, 0));
    CHECK(led.s_prin_cube[1] == qe5(480, 0, 0, 0));
    CHECK(led.s_prin_cube[2] == qe5(480, 0, 0, 0));
    CHECK(led.s_prin_cube[3] == qe5(480, 0, 1920, 0));
    CHECK(led.s_prin_noncube[2] == qe5(-288, 0, 0, 0));
    CHECK(led.s_prin_noncube[3] == qe5(-288, 0, -1728, 0));
    // duals: nonzero only at t = 0
    CHECK(led.s_dual[0] == qe5(0, 0, 960, 0));
    CHECK(led.s_dual[1] == qe5(0, 0, 0, 0));
    CHECK(led.s_dual[2] == qe5(0, 0, 0, 0));
    CHECK(led.s_dual[3] == qe5(0, 0, 0, 0));
    // the Gauss-sum route gives a different table: it needs
    // G_{q^2}(1,F) = q^{g/2+1}, which holds for F over F_q but not for
    // general family conductors
    CHECK(led.s_dual_gauss[0] == qe5(1152, 0, -960, 0));
    CHECK(led.s_dual_gauss[1] == qe5(1152, 0, 960, 0));
    CHECK(led.s_dual_gauss[2] == qe5(0, 0, 960, 0));
    CHECK(led.s_dual_gauss[3] == qe5(0, 0, 0, 0));

    // per-t consistency: prin = cube + noncube
    for (int t = 0; t <= 3; ++t) {
        auto [sp, sc, sn, sd] = s_terms(led, t);
        CHECK(sp == sc + sn);
        (void)sd;
    }
    CHECK_THROWS_AS(s_terms(led, 4), std::invalid_argument);

    // decomposition for every cutoff; the paper's printed dual index fails at A=0
    for (int A = 0; A <= 3; ++A) CHECK(decomposition_check(led, A));
    CHECK_FALSE(decomposition_check_alt_index(led, 0));

    // S_{t,prin,cube} equals the family count for t < 3 (only l = 1 contributes)
    for (int t = 0; t < 3; ++t) CHECK(led.s_prin_cube[static_cast<size_t>(t)] == qe5(480, 0, 0, 0));
}

TEST_CASE("budget gate") {
    FamilySpec big(5, 1, 6);
    CHECK_THROWS_AS(sweep(tower5(), big), BudgetExceeded);
    // S-term aggregation at (5,4) exceeds the budget; the plain sweep fits
    FamilySpec g4(5, 1, 4);
    SweepOptions with_st;
    with_st.with_sterms = true;
    CHECK_THROWS_AS(sweep(tower5(), g4, with_st), BudgetExceeded);
}

TEST_CASE("decomposition suite: invariances and the series cross-check") {
    FamilySpec spec(5, 1, 2);
    DecompositionSummary ds = decomposition_suite(tower5(), spec, 1);
    CHECK(ds.moment_real);
    CHECK(ds.decomposition_all_A);
    CHECK_FALSE(ds.alt_index_at_A0);
    REQUIRE(ds.dual_routes_agree.size() == 4);
    CHECK_FALSE(ds.dual_routes_agree[0]);
    CHECK_FALSE(ds.dual_routes_agree[1]);
    CHECK_FALSE(ds.dual_routes_agree[2]);
    CHECK(ds.dual_routes_agree[3]);  // both vanish at t = 2g-1
    CHECK(ds.cube_term_matches_series);
    CHECK(ds.omega_invariance);
    CHECK(ds.partition_independence);
}

TEST_CASE("main term and compare report") {
    FamilySpec spec(5, 1, 2);
    SweepOptions opts;
    opts.with_sterms = true;
    opts.with_gauss = true;
    MomentLedger led = sweep(tower5(), spec, opts);
    MainTerm mt = main_term(5, 2);
    CHECK(mt.value.width() < Rat(1, 10000000));
    CHECK(mt.mid > 0);
    CompareReport rep = compare_report(led);
    CHECK(rep.family_count == 480);
    CHECK(rep.m2 == led.m2);
    CHECK(rep.rel_deviation_vs_main > 0);
    // JSON round-trip is lossless on the exact fields
    nlohmann::json j = report_json(rep);
    CompareReport back = report_from_json(5, j);
    CHECK(back.m1 == rep.m1);
    CHECK(back.m2 == rep.m2);
    REQUIRE(back.sterm_table.size() == rep.sterm_table.size());
    for (size_t t = 0; t < rep.sterm_table.size(); ++t)
        for (int c = 0; c < 5; ++c)
            CHECK(back.sterm_table[t][static_cast<size_t>(c)] ==
                  rep.sterm_table[t][static_cast<size_t>(c)]);
}

TEST_CASE("character records round-trip through the store format") {
    FamilySpec spec(5, 1, 0);
    MomentLedger led = sweep(tower5(), spec);
    const FieldSpec& Fq2 = tower5().Fq2;
    for (const auto& r : led.records) {
        std::string line = char_record_encode(Fq2, r);
        CharRecord back = char_record_decode(Fq2, 5, line);
        CHECK(back.F == r.F);
        CHECK(back.omega == r.omega);
        CHECK(back.L == r.L);
        CHECK(back.cv1 == r.cv1);
        CHECK(back.cv2 == r.cv2);
    }
}
