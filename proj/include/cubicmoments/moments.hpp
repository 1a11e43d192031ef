#pragma once

// Full (q, g) experiments: family sweep with exact first/second moments,
// S-term decomposition, cube/non-cube split, dual terms by definition and by
// the Gauss-sum route, main-term evaluation, and comparison reports.
//
// The decomposition identity is implemented in its exact form
//   moment = (1-1/sqrt q)^2 [ sum_i (i+1) q^{-i/2} S_{A-i,prin}
//                           + sum_i (i+1) q^{-i/2} S_{A+i,dual} ],
// with the q^{-i/2} weights and the dual index A+i, which makes the inner
// f-range match the AFE term by term.  The variant with dual index
// 2g-A-1+i is kept as a documented failing form.

#include "lfun.hpp"
#include "series.hpp"

#include <atomic>
#include <thread>

namespace cubicmoments {

struct CharRecord {
    Poly F;                        // conductor over F_{q^2}
    std::vector<QuadExtNumber> L;  // a_0..a_{g+1}
    QuadExtNumber omega;
    QuadExtNumber cv1, cv2;        // L(1/2,chi), L(1/2,chi)^2
};

struct SweepOptions {
    int jobs = 1;
    bool with_sterms = false;   // accumulate the per-degree S-term aggregates
    bool with_gauss = false;    // compute G_{q^2}(1,F) per character
    bool force = false;         // override the evaluation budget
    bool keep_records = true;
};

constexpr double kEvalBudget = 1e9;

struct MomentLedger {
    int64_t p = 0;
    int e = 1;
    uint32_t q = 0;
    int g = 0;
    uint64_t family_count = 0;
    QuadExtNumber m1, m2;

    bool has_sterms = false;
    // indexed by t = 0..2g-1
    std::vector<QuadExtNumber> s_prin, s_prin_cube, s_prin_noncube, s_dual, s_dual_gauss;

    bool has_gauss = false;
    std::vector<CycloNumber> gauss1;  // G_{q^2}(1,F) per character, family order

    std::vector<CharRecord> records;
};

namespace detail {

struct SweepAccum {
    QuadExtNumber m1, m2;
    // per degree n: d-weighted exponent sums, split cube/noncube, and the
    // omega^2- and Gauss-weighted duals
    std::vector<QuadExtNumber> v_cube, v_noncube, w_dual, u_gauss;
    std::vector<CharRecord> records;
    std::vector<CycloNumber> gauss1;

    SweepAccum(int64_t q, int D)
        : m1(q), m2(q),
          v_cube(static_cast<size_t>(D) + 1, QuadExtNumber(q)),
          v_noncube(static_cast<size_t>(D) + 1, QuadExtNumber(q)),
          w_dual(static_cast<size_t>(D) + 1, QuadExtNumber(q)),
          u_gauss(static_cast<size_t>(D) + 1, QuadExtNumber(q)) {}

    void merge(SweepAccum&& o) {
        m1 += o.m1;
        m2 += o.m2;
        for (size_t i = 0; i < v_cube.size(); ++i) {
            v_cube[i] += o.v_cube[i];
            v_noncube[i] += o.v_noncube[i];
            w_dual[i] += o.w_dual[i];
            u_gauss[i] += o.u_gauss[i];
        }
        for (auto& r : o.records) records.push_back(std::move(r));
        for (auto& gv : o.gauss1) gauss1.push_back(std::move(gv));
    }
};

// G_{q^2}(1, F) over the residues mod F, using the per-prime symbol tables;
// the Hayes head of u/F is the top coefficient of u
inline CycloNumber gauss_one_fast(const FieldTower& T, const Poly& F,
                                  const std::vector<std::shared_ptr<const ResidueCtx>>& ctx) {
    const FieldSpec& Fq2 = T.Fq2;
    int m = F.deg();
    std::vector<std::vector<std::vector<uint32_t>>> bases;
    for (const auto& R : ctx) {
        std::vector<std::vector<uint32_t>> base(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) {
            Poly ti;
            ti.c.assign(static_cast<size_t>(i) + 1, 0);
            ti.c[static_cast<size_t>(i)] = 1;
            base[static_cast<size_t>(i)] = poly_coeff_vec(poly_mod(Fq2, ti, R->pi), R->d);
        }
        bases.push_back(std::move(base));
    }
    LinearWalk walk(Fq2, m, std::move(bases));
    CycloBuckets buckets(Fq2.p);
    while (true) {
        int e = 0;
        bool zero = false;
        for (size_t c = 0; c < ctx.size(); ++c) {
            const auto& rv = walk.value(c);
            uint64_t key = 0, pw = 1;
            for (int j = 0; j < ctx[c]->d; ++j) {
                key += rv[static_cast<size_t>(j)] * pw;
                pw *= Fq2.q;
            }
            uint8_t s = ctx[c]->symexp[key];
            if (s == 3) {
                zero = true;
                break;
            }
            e += s;  // family characters have all exponents 1
        }
        if (!zero) buckets.add(Fq2.trace_to_prime(walk.top_digit()), e % 3);
        if (!walk.advance()) break;
    }
    return buckets.value();
}

}  // namespace detail

inline double sweep_cost_estimate(const FamilySpec& spec, int D) {
    double fam = std::pow(double(spec.q), 2.0 * spec.m);
    double tab = 0;
    for (int n = 0; n <= D; ++n) tab += std::pow(double(spec.q), n);
    return fam * tab;
}

class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

inline MomentLedger sweep(const FieldTower& T, const FamilySpec& spec, const SweepOptions& opts = {}) {
    const int g = spec.g;
    const int64_t q = spec.q;
    const int D = opts.with_sterms ? std::max(g + 1, 2 * g - 1) : g + 1;

    double cost = sweep_cost_estimate(spec, D);
    if (cost > kEvalBudget && !opts.force) {
        throw BudgetExceeded("sweep: estimated " + std::to_string(cost) +
                             " character evaluations exceeds budget; pass force to override");
    }

    std::vector<Poly> family = family_conductors(T, spec.m);
    MonicTables mt(T.Fq, D);

    int jobs = std::max(1, opts.jobs);
    std::vector<detail::SweepAccum> parts;
    parts.reserve(static_cast<size_t>(jobs));
    for (int j = 0; j < jobs; ++j) parts.emplace_back(q, D);

    auto work = [&](int widx, size_t lo, size_t hi) {
        detail::SweepAccum& acc = parts[static_cast<size_t>(widx)];
        for (size_t fi = lo; fi < hi; ++fi) {
            const Poly& F = family[fi];
            CubicChar chi = make_cubic_char(T, F);
            CharTable tab(T, chi, D);

            LPolynomial L;
            L.q = q;
            L.g = g;
            for (int n = 0; n <= g + 1; ++n) {
                int64_t c[3] = {0, 0, 0};
                uint64_t cnt = static_cast<uint64_t>(monic_count(T.Fq.q, n));
                for (uint64_t k = 0; k < cnt; ++k) {
                    int e = tab.exp_at(n, k);
                    if (e >= 0) c[e]++;
                }
                L.a.push_back(omega_counts(q, c[0], c[1], c[2]));
            }
            QuadExtNumber omega = root_number_sum(L);
            QuadExtNumber cv1 = L.eval_at_s(1);
            QuadExtNumber cv2 = cv1 * cv1;
            acc.m1 += cv1;
            acc.m2 += cv2;

            CycloNumber g1;
            if (opts.with_gauss || opts.with_sterms) {
                std::vector<std::shared_ptr<const detail::ResidueCtx>> ctx;
                for (const auto& P : chi.primes) ctx.push_back(detail::residue_ctx_cached(T, P));
                g1 = detail::gauss_one_fast(T, F, ctx);
            }
            if (opts.with_gauss) acc.gauss1.push_back(g1);

            if (opts.with_sterms) {
                QuadExtNumber om2 = omega * omega;
                QuadExtNumber g1n = cyclo_to_quadext(g1, q).scaled(
                    Rat(1, ipow(q, static_cast<uint64_t>(g / 2 + 1))));
                for (int n = 0; n <= 2 * g - 1; ++n) {
                    int64_t cc[3] = {0, 0, 0}, cn[3] = {0, 0, 0};
                    uint64_t cnt = static_cast<uint64_t>(monic_count(T.Fq.q, n));
                    for (uint64_t k = 0; k < cnt; ++k) {
                        int e = tab.exp_at(n, k);
                        if (e < 0) continue;
                        uint64_t fi2 = mt.flat(n, k);
                        int64_t w = mt.d2t[fi2];
                        (mt.cube[fi2] ? cc : cn)[e] += w;
                    }
                    QuadExtNumber vc = omega_counts(q, cc[0], cc[1], cc[2]);
                    QuadExtNumber vn = omega_counts(q, cn[0], cn[1], cn[2]);
                    acc.v_cube[static_cast<size_t>(n)] += vc;
                    acc.v_noncube[static_cast<size_t>(n)] += vn;
                    // dual aggregates use the conjugate character
                    QuadExtNumber vbar = (vc + vn).conj();
                    acc.w_dual[static_cast<size_t>(n)] += om2 * vbar;
                    acc.u_gauss[static_cast<size_t>(n)] += g1n * vbar;
                }
            }
            if (opts.keep_records) acc.records.push_back({F, L.a, omega, cv1, cv2});
        }
    };

    if (jobs == 1) {
        work(0, 0, family.size());
    } else {
        std::vector<std::thread> threads;
        size_t chunk = (family.size() + static_cast<size_t>(jobs) - 1) / static_cast<size_t>(jobs);
        for (int j = 0; j < jobs; ++j) {
            size_t lo = static_cast<size_t>(j) * chunk;
            size_t hi = std::min(family.size(), lo + chunk);
            if (lo >= hi) break;
            threads.emplace_back(work, j, lo, hi);
        }
        for (auto& t : threads) t.join();
    }

    detail::SweepAccum total(q, D);
    for (auto& p : parts) total.merge(std::move(p));

    MomentLedger led;
    led.p = spec.p;
    led.e = spec.e;
    led.q = spec.q;
    led.g = g;
    led.family_count = family.size();
    led.m1 = total.m1;
    led.m2 = total.m2;
    led.records = std::move(total.records);
    led.has_gauss = opts.with_gauss;
    led.gauss1 = std::move(total.gauss1);

    if (opts.with_sterms) {
        led.has_sterms = true;
        int tmax = 2 * g - 1;
        for (int t = 0; t <= tmax; ++t) {
            QuadExtNumber sp(q), sc(q), sn(q), sd(q), sg(q);
            for (int n = 0; n <= t; ++n) {
                QuadExtNumber sn_pow = QuadExtNumber::s_pow(q, n);
                sc += total.v_cube[static_cast<size_t>(n)] * sn_pow;
                sn += total.v_noncube[static_cast<size_t>(n)] * sn_pow;
            }
            sp = sc + sn;
            for (int n = 0; n <= 2 * g - t - 1; ++n) {
                QuadExtNumber sn_pow = QuadExtNumber::s_pow(q, n);
                sd += total.w_dual[static_cast<size_t>(n)] * sn_pow;
                sg += total.u_gauss[static_cast<size_t>(n)] * sn_pow;
            }
            led.s_prin.push_back(sp);
            led.s_prin_cube.push_back(sc);
            led.s_prin_noncube.push_back(sn);
            led.s_dual.push_back(sd);
            led.s_dual_gauss.push_back(sg);
        }
    }
    return led;
}

// one character end-to-end: L-coefficients, root number, central values
inline CharRecord analyze_character(const FieldTower& T, int g, const Poly& F) {
    CubicChar chi = make_cubic_char(T, F);
    CharTable tab(T, chi, g + 1);
    LPolynomial L = l_polynomial(T, tab, g);
    CharRecord r;
    r.F = F;
    r.L = L.a;
    r.omega = root_number_sum(L);
    r.cv1 = L.eval_at_s(1);
    r.cv2 = r.cv1 * r.cv1;
    return r;
}

// (S_prin, S_cube, S_noncube, S_dual) for one t
inline std::array<QuadExtNumber, 4> s_terms(const MomentLedger& led, int t) {
    if (!led.has_sterms) throw std::logic_error("s_terms: sweep ran without S-term aggregation");
    if (t < 0 || t > 2 * led.g - 1) throw std::invalid_argument("s_terms: t out of range");
    size_t i = static_cast<size_t>(t);
    return {led.s_prin[i], led.s_prin_cube[i], led.s_prin_noncube[i], led.s_dual[i]};
}

// the exact decomposition identity at cutoff A (dual index A+i, weights
// (i+1) q^{-i/2})
inline bool decomposition_check(const MomentLedger& led, int A) {
    int g = led.g;
    int64_t q = led.q;
    if (A < 0 || A > 2 * g - 1) throw std::invalid_argument("decomposition_check: A out of range");
    QuadExtNumber tot(q);
    for (int i = 0; i <= A; ++i)
        tot += led.s_prin[static_cast<size_t>(A - i)].scaled(Rat(i + 1)) * QuadExtNumber::s_pow(q, i);
    for (int i = 0; i <= 2 * g - A - 1; ++i)
        tot += led.s_dual[static_cast<size_t>(A + i)].scaled(Rat(i + 1)) * QuadExtNumber::s_pow(q, i);
    QuadExtNumber pref = QuadExtNumber(q, 1) - QuadExtNumber::s_pow(q, 1);
    return pref * pref * tot == led.m2;
}

// the same assembly with the alternative dual index 2g-A-1+i (documented
// failing variant; out-of-range dual subscripts contribute empty sums)
inline bool decomposition_check_alt_index(const MomentLedger& led, int A) {
    int g = led.g;
    int64_t q = led.q;
    QuadExtNumber tot(q);
    for (int i = 0; i <= A; ++i)
        tot += led.s_prin[static_cast<size_t>(A - i)].scaled(Rat(i + 1)) * QuadExtNumber::s_pow(q, i);
    for (int i = 0; i <= 2 * g - A - 1; ++i) {
        int t = 2 * g - A - 1 + i;
        if (t <= 2 * g - 1)
            tot += led.s_dual[static_cast<size_t>(t)].scaled(Rat(i + 1)) * QuadExtNumber::s_pow(q, i);
    }
    QuadExtNumber pref = QuadExtNumber(q, 1) - QuadExtNumber::s_pow(q, 1);
    return pref * pref * tot == led.m2;
}

struct MainTerm {
    RatInterval value;      // certified enclosure of the displayed constant
    int aq_truncation = 0;
    double mid = 0;
};

// g(g+2) A_q(1/q^2, 1/q^{3/2}) zeta_q(3/2)^2 / (8 zeta_q(3)) q^{g+2};
// tol bounds the width of the final enclosure
inline MainTerm main_term(uint32_t q, int g, const Rat& tol = Rat(1, 10000000)) {
    MainTerm out;
    if (g == 0) {
        out.value = RatInterval::exact(0);
        return out;
    }
    RatInterval rsq = inv_sqrt_interval(q);
    // zeta_q(3/2)^2 = 1/(1-q^{-1/2})^2
    RatInterval om{Rat(1) - rsq.hi, Rat(1) - rsq.lo};
    RatInterval z32sq{Rat(1) / (om.hi * om.hi), Rat(1) / (om.lo * om.lo)};
    Rat z3 = zeta_value(q, 3);
    Rat scale = Rat(g * (g + 2)) * ipow(q, static_cast<uint64_t>(g) + 2);
    scale /= 8 * z3;
    Rat inner = tol / (scale * z32sq.hi * 4);
    AqValue aq = a_q_value(q, inner);
    out.value = (aq.value * z32sq).scaled(scale);
    out.aq_truncation = aq.truncation_degree;
    out.mid = out.value.mid();
    if (out.value.width() >= tol) {
        aq = a_q_value(q, inner * (tol / out.value.width()) / 4);
        out.value = (aq.value * z32sq).scaled(scale);
        out.aq_truncation = aq.truncation_degree;
        out.mid = out.value.mid();
    }
    return out;
}

struct CompareReport {
    int64_t p = 0;
    int e = 1;
    uint32_t q = 0;
    int g = 0;
    uint64_t family_count = 0;
    QuadExtNumber m1, m2;
    double m2_float = 0;
    double main_term_mid = 0;
    Rat main_enclosure_width;
    int aq_truncation = 0;
    double rel_deviation_vs_empirical = 0;  // |emp - main| / |emp|
    double rel_deviation_vs_main = 0;       // |emp - main| / |main|
    // diagnostic: the corrected-shape constant zeta(3/2)^4 A_q / zeta(3) q^{g+2}
    double corrected_scale_mid = 0;
    bool has_sterms = false;
    std::vector<std::array<QuadExtNumber, 5>> sterm_table;  // prin, cube, noncube, dual, dual-gauss
};

inline CompareReport compare_report(const MomentLedger& led, const Rat& tol = Rat(1, 100000000)) {
    CompareReport r;
    r.p = led.p;
    r.e = led.e;
    r.q = led.q;
    r.g = led.g;
    r.family_count = led.family_count;
    r.m1 = led.m1;
    r.m2 = led.m2;
    r.m2_float = led.m2.to_complex().real();
    MainTerm mt = main_term(led.q, led.g, tol);
    r.main_term_mid = mt.mid;
    r.main_enclosure_width = mt.value.width();
    r.aq_truncation = mt.aq_truncation;
    if (r.m2_float != 0) r.rel_deviation_vs_empirical = std::abs(r.m2_float - r.main_term_mid) / std::abs(r.m2_float);
    if (r.main_term_mid != 0) r.rel_deviation_vs_main = std::abs(r.m2_float - r.main_term_mid) / std::abs(r.main_term_mid);
    if (led.g > 0) {
        AqValue aq = a_q_value(led.q, tol);
        RatInterval rsq = inv_sqrt_interval(led.q);
        RatInterval om{Rat(1) - rsq.hi, Rat(1) - rsq.lo};
        RatInterval z32p4{Rat(1) / (om.hi * om.hi * om.hi * om.hi), Rat(1) / (om.lo * om.lo * om.lo * om.lo)};
        Rat sc = Rat(ipow(led.q, static_cast<uint64_t>(led.g) + 2)) / zeta_value(led.q, 3);
        r.corrected_scale_mid = (aq.value * z32p4).scaled(sc).mid();
    }
    r.has_sterms = led.has_sterms;
    if (led.has_sterms) {
        for (int t = 0; t <= 2 * led.g - 1; ++t) {
            size_t i = static_cast<size_t>(t);
            r.sterm_table.push_back({led.s_prin[i], led.s_prin_cube[i], led.s_prin_noncube[i],
                                     led.s_dual[i], led.s_dual_gauss[i]});
        }
    }
    return r;
}

// swap the two primitive cube roots in Omega: the family maps to the
// conjugate characters and every moment must be unchanged
inline FieldTower tower_with_alt_omega(const FieldTower& T) {
    FieldTower alt = T;
    std::swap(alt.omega.zeta, alt.omega.zeta2);
    for (uint32_t c = 1; c < alt.Fq2.q; ++c) {
        int j = alt.omega.omega_exp(alt.Fq2.pow(c, (alt.Fq2.q - 1) / 3));
        alt.chi_exp[c] = static_cast<uint32_t>(j);
    }
    return alt;
}

}  // namespace cubicmoments
