#pragma once

// Exact-rational truncated power series in one and two variables, zeta
// series, Euler products over monic irreducibles grouped by degree, the
// A_q(z,u) correction factor, generating-series identity checks, Perron
// coefficient extraction, and certified numeric evaluation of A_q at
// (1/q^2, 1/q^{3/2}).

#include "characters.hpp"

namespace cubicmoments {

struct TruncSeries1 {
    int N = 0;
    std::vector<Rat> c;

    TruncSeries1() = default;
    explicit TruncSeries1(int n) : N(n), c(static_cast<size_t>(n) + 1) {}
    static TruncSeries1 one(int n) {
        TruncSeries1 s(n);
        s.c[0] = 1;
        return s;
    }
    Rat coeff(int i) const { return c[static_cast<size_t>(i)]; }

    friend TruncSeries1 operator+(const TruncSeries1& a, const TruncSeries1& b) {
        TruncSeries1 r(a.N);
        for (int i = 0; i <= a.N; ++i) r.c[static_cast<size_t>(i)] = a.coeff(i) + b.coeff(i);
        return r;
    }
    friend TruncSeries1 operator-(const TruncSeries1& a, const TruncSeries1& b) {
        TruncSeries1 r(a.N);
        for (int i = 0; i <= a.N; ++i) r.c[static_cast<size_t>(i)] = a.coeff(i) - b.coeff(i);
        return r;
    }
    friend TruncSeries1 operator*(const TruncSeries1& a, const TruncSeries1& b) {
        TruncSeries1 r(a.N);
        for (int i = 0; i <= a.N; ++i) {
            if (a.coeff(i) == 0) continue;
            for (int j = 0; i + j <= a.N; ++j)
                if (b.coeff(j) != 0) r.c[static_cast<size_t>(i + j)] += a.coeff(i) * b.coeff(j);
        }
        return r;
    }
    TruncSeries1 inverse() const {
        if (c[0] == 0) throw std::domain_error("TruncSeries1::inverse: constant term is zero");
        TruncSeries1 r(N);
        r.c[0] = Rat(1) / c[0];
        for (int k = 1; k <= N; ++k) {
            Rat s = 0;
            for (int j = 1; j <= k; ++j) s += c[static_cast<size_t>(j)] * r.c[static_cast<size_t>(k - j)];
            r.c[static_cast<size_t>(k)] = -s / c[0];
        }
        return r;
    }
    TruncSeries1 pow(BigInt e) const {
        TruncSeries1 r = one(N), b = *this;
        while (e > 0) {
            if ((e & 1) != 0) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }
};

struct TruncSeries2 {
    int Nu = 0, Nz = 0;
    std::vector<Rat> c;  // row-major: c[iu*(Nz+1)+iz]

    TruncSeries2() = default;
    TruncSeries2(int nu, int nz)
        : Nu(nu), Nz(nz), c(static_cast<size_t>(nu + 1) * static_cast<size_t>(nz + 1)) {}
    static TruncSeries2 one(int nu, int nz) {
        TruncSeries2 s(nu, nz);
        s.c[0] = 1;
        return s;
    }
    Rat coeff(int iu, int iz) const {
        return c[static_cast<size_t>(iu) * static_cast<size_t>(Nz + 1) + static_cast<size_t>(iz)];
    }
    Rat& at(int iu, int iz) {
        return c[static_cast<size_t>(iu) * static_cast<size_t>(Nz + 1) + static_cast<size_t>(iz)];
    }
    friend TruncSeries2 operator+(const TruncSeries2& a, const TruncSeries2& b) {
        TruncSeries2 r(a.Nu, a.Nz);
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] + b.c[i];
        return r;
    }
    friend TruncSeries2 operator*(const TruncSeries2& a, const TruncSeries2& b) {
        TruncSeries2 r(a.Nu, a.Nz);
        for (int iu = 0; iu <= a.Nu; ++iu)
            for (int iz = 0; iz <= a.Nz; ++iz) {
                Rat x = a.coeff(iu, iz);
                if (x == 0) continue;
                for (int ju = 0; iu + ju <= a.Nu; ++ju)
                    for (int jz = 0; iz + jz <= a.Nz; ++jz) {
                        Rat y = b.coeff(ju, jz);
                        if (y != 0) r.at(iu + ju, iz + jz) += x * y;
                    }
            }
        return r;
    }
    TruncSeries2 inverse() const {
        // invert along u-blocks: view as series in u with coefficients that
        // are z-series
        if (coeff(0, 0) == 0) throw std::domain_error("TruncSeries2::inverse: constant term is zero");
        // reduce to 1d inversion in lex order by Newton-free direct recursion
        TruncSeries2 r(Nu, Nz);
        // invert the z-constant block first
        TruncSeries1 a0(Nz), a0inv(Nz);
        for (int iz = 0; iz <= Nz; ++iz) a0.c[static_cast<size_t>(iz)] = coeff(0, iz);
        a0inv = a0.inverse();
        for (int iz = 0; iz <= Nz; ++iz) r.at(0, iz) = a0inv.c[static_cast<size_t>(iz)];
        for (int iu = 1; iu <= Nu; ++iu) {
            // r_iu = -a0^{-1} * sum_{j=1..iu} a_j r_{iu-j}   (as z-series)
            TruncSeries1 s(Nz);
            for (int j = 1; j <= iu; ++j)
                for (int iz = 0; iz <= Nz; ++iz) {
                    Rat x = coeff(j, iz);
                    if (x == 0) continue;
                    for (int jz = 0; iz + jz <= Nz; ++jz)
                        s.c[static_cast<size_t>(iz + jz)] += x * r.coeff(iu - j, jz);
                }
            TruncSeries1 t = TruncSeries1(Nz);
            for (int iz = 0; iz <= Nz; ++iz) {
                Rat acc = 0;
                for (int jz = 0; jz <= iz; ++jz) acc += a0inv.c[static_cast<size_t>(jz)] * s.c[static_cast<size_t>(iz - jz)];
                t.c[static_cast<size_t>(iz)] = -acc;
            }
            for (int iz = 0; iz <= Nz; ++iz) r.at(iu, iz) = t.c[static_cast<size_t>(iz)];
        }
        return r;
    }
    TruncSeries2 pow(BigInt e) const {
        TruncSeries2 r = one(Nu, Nz), b = *this;
        while (e > 0) {
            if ((e & 1) != 0) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }
};

// Z(u) = 1/(1-qu): coefficient of u^n is q^n
inline TruncSeries1 zeta_series(uint32_t q, int N) {
    TruncSeries1 s(N);
    Rat pw = 1;
    for (int n = 0; n <= N; ++n) {
        s.c[static_cast<size_t>(n)] = pw;
        pw *= q;
    }
    return s;
}

// zeta_q(s) = 1/(1 - q^{1-s}) for integer s != 1
inline Rat zeta_value(uint32_t q, int64_t s) {
    if (s == 1) throw std::domain_error("zeta_value: pole at s = 1");
    Rat x = rat_pow(Rat(q), 1 - s);
    return Rat(1) / (Rat(1) - x);
}

// zeta_q(3/2) = 1/(1 - q^{-1/2}) = (1+s) q/(q-1) in the QuadExt ring
inline QuadExtNumber zeta_value_three_halves(int64_t q) {
    return (QuadExtNumber(q, 1) + QuadExtNumber::s_pow(q, 1)).scaled(Rat(q, q - 1));
}

enum class PerronMode { ExactN, UpToN };

// Perron's formula realized as literal coefficient extraction: mode ExactN
// returns c_n, mode UpToN the prefix sum (the 1/(1-u) factor)
inline Rat perron_extract(const TruncSeries1& s, int n, PerronMode mode) {
    if (n > s.N || n < 0) throw std::invalid_argument("perron_extract: n out of range");
    if (mode == PerronMode::ExactN) return s.coeff(n);
    Rat acc = 0;
    for (int i = 0; i <= n; ++i) acc += s.coeff(i);
    return acc;
}

enum class DegreeParity { Odd, Even, All };

inline bool parity_match(int d, DegreeParity p) {
    if (p == DegreeParity::All) return true;
    return (d % 2 == 1) == (p == DegreeParity::Odd);
}

// product over monic irreducibles R of F_q[T] of local(deg R), grouped by
// degree with exponent = irreducible_count(q, d); local factors must have
// constant term 1
inline TruncSeries1 euler_product(uint32_t q, int N, DegreeParity parity,
                                  const std::function<TruncSeries1(int)>& local) {
    TruncSeries1 r = TruncSeries1::one(N);
    for (int d = 1; d <= N; ++d) {
        if (!parity_match(d, parity)) continue;
        TruncSeries1 f = local(d);
        if (f.coeff(0) != 1) throw std::invalid_argument("euler_product: local factor constant term != 1");
        r = r * f.pow(irreducible_count(q, d));
    }
    return r;
}

inline TruncSeries2 euler_product_2d(uint32_t q, int Nu, int Nz, int Dmax, DegreeParity parity,
                                     const std::function<TruncSeries2(int)>& local) {
    TruncSeries2 r = TruncSeries2::one(Nu, Nz);
    for (int d = 1; d <= Dmax; ++d) {
        if (!parity_match(d, parity)) continue;
        TruncSeries2 f = local(d);
        if (f.coeff(0, 0) != 1) throw std::invalid_argument("euler_product_2d: constant term != 1");
        r = r * f.pow(irreducible_count(q, d));
    }
    return r;
}

// A_q(z, u) truncated: the product over monic irreducibles R of F_q[T] of
//   odd deg R:  (1 - 3u^{2d} + 2u^{3d}) / (1 + z^d)
//   even deg R: (2 z^{d/2} (1-u^d)^4 + 1 - 3u^{2d} + 2u^{3d}) / (1 + z^{d/2})^2
inline TruncSeries2 a_q_series(uint32_t q, int Nu, int Nz) {
    int Dmax = std::max(Nu, 2 * Nz);
    auto local = [&](int d) {
        TruncSeries2 f = TruncSeries2::one(Nu, Nz);
        auto upow = [&](int k, const Rat& coef) {
            TruncSeries2 t(Nu, Nz);
            if (k <= Nu) t.at(k, 0) = coef;
            return t;
        };
        auto zpow = [&](int k, const Rat& coef) {
            TruncSeries2 t(Nu, Nz);
            if (k <= Nz) t.at(0, k) = coef;
            return t;
        };
        TruncSeries2 one = TruncSeries2::one(Nu, Nz);
        if (d % 2 == 1) {
            TruncSeries2 num = one + upow(2 * d, -3) + upow(3 * d, 2);
            TruncSeries2 den = one + zpow(d, 1);
            return num * den.inverse();
        }
        TruncSeries2 um = one + upow(d, -1);
        TruncSeries2 um4 = um * um;
        um4 = um4 * um4;
        TruncSeries2 num = zpow(d / 2, 2) * um4 + one + upow(2 * d, -3) + upow(3 * d, 2);
        TruncSeries2 den = one + zpow(d / 2, 1);
        return num * (den * den).inverse();
    };
    return euler_product_2d(q, Nu, Nz, Dmax, DegreeParity::All, local);
}

// ---- generating-series identity checks -----------------------------------

// d(l^3) over F_q[T]
inline BigInt d_of_cube(const FieldSpec& F, const Poly& l) {
    auto fac = factorize(F, l);
    BigInt r = 1;
    for (const auto& [P, e] : fac.factors) r *= (3 * e + 1);
    return r;
}

// closed form of the family-count generating series with coprimality to l:
// eq (maineq 1) truncated at z^Nz
inline TruncSeries1 family_count_genfun(const FieldTower& T, const Poly& l, int Nz) {
    uint32_t q = T.Fq.q;
    uint32_t Q = T.Fq2.q;

    // Z_{q^2}(z) / Z_{q^2}(z^2)
    TruncSeries1 zq2 = zeta_series(Q, Nz);
    TruncSeries1 zq2sq(Nz);
    for (int k = 0; 2 * k <= Nz; ++k) zq2sq.c[static_cast<size_t>(2 * k)] = rat_pow(Rat(Q), k);
    TruncSeries1 r = zq2 * zq2sq.inverse();

    // global products of A_R (odd) and B_R (even)
    auto a_local = [&](int d) {
        TruncSeries1 den = TruncSeries1::one(Nz);
        if (d <= Nz) den.c[static_cast<size_t>(d)] = 1;
        return den.inverse();  // 1/(1+z^d)
    };
    auto b_local = [&](int d) {
        int h = d / 2;
        TruncSeries1 num = TruncSeries1::one(Nz);
        if (h <= Nz) num.c[static_cast<size_t>(h)] = 2;
        TruncSeries1 den = TruncSeries1::one(Nz);
        if (h <= Nz) den.c[static_cast<size_t>(h)] = 1;
        return num * (den * den).inverse();  // (1+2z^h)/(1+z^h)^2
    };
    r = r * euler_product(q, Nz, DegreeParity::Odd, a_local);
    // even-degree R contribute through z^{d/2}: include degrees up to 2*Nz
    for (int d = 2; d <= 2 * Nz; d += 2) r = r * b_local(d).pow(irreducible_count(q, d));

    // divide out the l-local factors
    if (!l.is_zero() && l.deg() >= 1) {
        auto fac = factorize(T.Fq, l);
        for (const auto& [R, e] : fac.factors) {
            (void)e;
            int d = R.deg();
            if (d % 2 == 1) {
                // inert R: the 1/(1+z^d) from the P|l product and the removal
                // of A_R = 1/(1+z^d) cancel; nothing to do
            } else {
                int h = d / 2;
                TruncSeries1 oneplus = TruncSeries1::one(Nz);
                if (h <= Nz) oneplus.c[static_cast<size_t>(h)] = 1;
                TruncSeries1 num = TruncSeries1::one(Nz);
                if (h <= Nz) num.c[static_cast<size_t>(h)] = 2;
                // divide by (1+z^h)^2 (the two primes above R) and by B_R
                r = r * (oneplus * oneplus).inverse();
                r = r * (oneplus * oneplus) * num.inverse();
            }
        }
    }
    return r;
}

// brute-force family-count series: number of squarefree monic F over F_{q^2}
// of each degree with gcd(F, sigma F) = 1 and (F, l) = 1
inline TruncSeries1 family_count_brute(const FieldTower& T, const Poly& l, int Nz) {
    TruncSeries1 r(Nz);
    Poly ll = lift_poly(T, l);
    for (int m = 0; m <= Nz; ++m) {
        BigInt n = 0;
        for (const Poly& F : family_conductors(T, m)) {
            if (ll.deg() >= 1 && poly_gcd(T.Fq2, F, ll).deg() != 0) continue;
            ++n;
        }
        r.c[static_cast<size_t>(m)] = Rat(n);
    }
    return r;
}

inline bool family_count_genfun_check(const FieldTower& T, const Poly& l, int Nz) {
    TruncSeries1 closed = family_count_genfun(T, l, Nz);
    TruncSeries1 brute = family_count_brute(T, l, Nz);
    for (int k = 0; k <= Nz; ++k)
        if (closed.coeff(k) != brute.coeff(k)) return false;
    return true;
}

// B_2(u,z) = sum_l d(l^3) u^{deg l} sum_{F family, (F,l)=1} z^{deg F}
// against the closed form Z_q(u)^4 Z_{q^2}(z)/Z_{q^2}(z^2) A_q(z,u)
inline bool b2_identity_check(const FieldTower& T, int Nu, int Nz,
                              TruncSeries2* brute_out = nullptr, TruncSeries2* closed_out = nullptr) {
    uint32_t q = T.Fq.q;
    uint32_t Q = T.Fq2.q;

    // brute force double enumeration
    TruncSeries2 brute(Nu, Nz);
    std::vector<std::vector<Poly>> fam(static_cast<size_t>(Nz) + 1);
    for (int m = 0; m <= Nz; ++m) fam[static_cast<size_t>(m)] = family_conductors(T, m);
    for (int dl = 0; dl <= Nu; ++dl) {
        uint64_t cnt = static_cast<uint64_t>(monic_count(q, dl));
        for (uint64_t k = 0; k < cnt; ++k) {
            Poly l = monic_at(q, dl, k);
            Rat w = (dl == 0) ? Rat(1) : Rat(d_of_cube(T.Fq, l));
            Poly ll = lift_poly(T, l);
            for (int m = 0; m <= Nz; ++m)
                for (const Poly& F : fam[static_cast<size_t>(m)]) {
                    if (dl >= 1 && poly_gcd(T.Fq2, F, ll).deg() != 0) continue;
                    brute.at(dl, m) += w;
                }
        }
    }

    // closed form
    TruncSeries2 closed = a_q_series(q, Nu, Nz);
    TruncSeries2 zq4(Nu, Nz);
    for (int n = 0; n <= Nu; ++n) zq4.at(n, 0) = rat_pow(Rat(q), n);
    closed = closed * zq4.pow(4);
    TruncSeries2 zr(Nu, Nz);
    {
        TruncSeries1 zq2 = zeta_series(Q, Nz);
        TruncSeries1 zq2sq(Nz);
        for (int k2 = 0; 2 * k2 <= Nz; ++k2) zq2sq.c[static_cast<size_t>(2 * k2)] = rat_pow(Rat(Q), k2);
        TruncSeries1 ratio = zq2 * zq2sq.inverse();
        for (int k2 = 0; k2 <= Nz; ++k2) zr.at(0, k2) = ratio.coeff(k2);
    }
    closed = closed * zr;

    if (brute_out) *brute_out = brute;
    if (closed_out) *closed_out = closed;
    for (int iu = 0; iu <= Nu; ++iu)
        for (int iz = 0; iz <= Nz; ++iz)
            if (brute.coeff(iu, iz) != closed.coeff(iu, iz)) return false;
    return true;
}

// ---- certified evaluation of A_q(1/q^2, 1/q^{3/2}) ------------------------

struct RatInterval {
    Rat lo, hi;

    static RatInterval exact(const Rat& x) { return {x, x}; }
    RatInterval operator+(const RatInterval& o) const { return {lo + o.lo, hi + o.hi}; }
    RatInterval operator-(const RatInterval& o) const { return {lo - o.hi, hi - o.lo}; }
    RatInterval operator*(const RatInterval& o) const {
        Rat a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
        return {std::min(std::min(a, b), std::min(c, d)), std::max(std::max(a, b), std::max(c, d))};
    }
    RatInterval scaled(const Rat& r) const {
        if (r >= 0) return {lo * r, hi * r};
        return {hi * r, lo * r};
    }
    Rat width() const { return hi - lo; }
    double mid() const { return rat_double((lo + hi) / 2); }

    // outward rounding to denominator 2^bits, keeping numbers small
    RatInterval rounded(unsigned bits = 256) const {
        BigInt scale = BigInt(1) << bits;
        BigInt nlo = numerator(lo) * scale / denominator(lo);
        if (Rat(nlo, scale) > lo) nlo -= 1;
        BigInt nhi = numerator(hi) * scale / denominator(hi);
        if (Rat(nhi, scale) < hi) nhi += 1;
        return {Rat(nlo, scale), Rat(nhi, scale)};
    }
    RatInterval pow(BigInt e, unsigned bits = 256) const {
        RatInterval r = exact(1), b = *this;
        while (e > 0) {
            if ((e & 1) != 0) r = (r * b).rounded(bits);
            b = (b * b).rounded(bits);
            e >>= 1;
        }
        return r;
    }
};

// enclosure of q^{-1/2} to 2^-bits
inline RatInterval inv_sqrt_interval(uint32_t q, unsigned bits = 192) {
    BigInt scale = BigInt(1) << bits;
    BigInt target = BigInt(q) * scale * scale;
    BigInt s = boost::multiprecision::sqrt(target);  // floor sqrt
    // s <= sqrt(q)*2^bits < s+1  =>  1/(s+1) < q^{-1/2}*2^{-bits} <= 1/s
    return {Rat(scale, s + 1), Rat(scale, s)};
}

struct AqValue {
    RatInterval value;
    int truncation_degree = 0;
    std::vector<Rat> widths;  // per-degree enclosure widths (monotone)
};

// A_q(1/q^2, 1/q^{3/2}) with a certified enclosure.  Per-degree factors are
// within |delta_d| <= 14 q^{-2d} of 1:
//   odd d:  |num-den| <= 3q^{-3d} + 2q^{-9d/2} + q^{-2d} <= 6 q^{-2d}
//   even d: |num-den| <= 8q^{-5d/2} + 3q^{-3d} + 2q^{-9d/2} + q^{-2d} <= 14 q^{-2d}
// with den >= 1, so the omitted tail beyond degree D multiplies the product
// by something in [1 - eps, 1 + 2 eps] for eps = sum_{d>D} pi_q(d) 14 q^{-2d}
// <= 14 q^{-D}/(q-1)  (using pi_q(d) <= q^d), valid once eps <= 1/2.
inline AqValue a_q_value(uint32_t q, const Rat& tol) {
    if (tol <= 0) throw std::invalid_argument("a_q_value: tol must be positive");
    RatInterval rsq = inv_sqrt_interval(q);  // q^{-1/2}
    AqValue out;
    RatInterval prod = RatInterval::exact(1);
    for (int D = 1; D <= 96; ++D) {
        int d = D;
        RatInterval factor;
        if (d % 2 == 1) {
            // (1 - 3 q^{-3d} + 2 q^{-9d/2}) / (1 + q^{-2d})
            Rat u2d = rat_pow(Rat(1, q), 3 * d);
            RatInterval u3d = rsq.scaled(rat_pow(Rat(1, q), (9 * d - 1) / 2));
            RatInterval num = RatInterval::exact(Rat(1) - 3 * u2d) + u3d.scaled(2);
            Rat den = Rat(1) + rat_pow(Rat(1, q), 2 * d);
            factor = num.scaled(Rat(1) / den);
        } else {
            Rat ud = rat_pow(Rat(1, q), 3 * d / 2);
            Rat zh = rat_pow(Rat(1, q), d);
            Rat um = Rat(1) - ud;
            Rat um4 = um * um * um * um;
            Rat num = 2 * zh * um4 + Rat(1) - 3 * rat_pow(Rat(1, q), 3 * d) + 2 * rat_pow(Rat(1, q), 9 * d / 2);
            Rat den = (Rat(1) + zh) * (Rat(1) + zh);
            factor = RatInterval::exact(num / den);
        }
        prod = (prod * factor.pow(irreducible_count(q, d))).rounded();

        // certified tail and enclosure
        Rat eps = Rat(14) * rat_pow(Rat(1, q), d) / Rat(q - 1);
        if (eps <= Rat(1, 2)) {
            RatInterval enc{prod.lo * (Rat(1) - eps), prod.hi * (Rat(1) + 2 * eps)};
            out.widths.push_back(enc.width());
            if (enc.width() < tol) {
                out.value = enc;
                out.truncation_degree = d;
                return out;
            }
        }
    }
    throw std::runtime_error("a_q_value: did not converge within degree budget");
}

}  // namespace cubicmoments
