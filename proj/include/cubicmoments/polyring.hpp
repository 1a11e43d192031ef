#pragma once

// F_q[T]: dense polynomials on packed field keys, division, gcd,
// deterministic factorization (squarefree + distinct-degree + equal-degree),
// monic/squarefree enumeration in canonical order, and the arithmetic
// functions mu, phi, d_k, |f|, sigma-conjugation, irreducible counts.

#include "field.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace cubicmoments {

struct Poly {
    std::vector<uint32_t> c;  // little-endian keys; empty = zero polynomial

    int deg() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    bool operator==(const Poly& o) const { return c == o.c; }
    bool operator!=(const Poly& o) const { return c != o.c; }
    bool operator<(const Poly& o) const {  // (degree, canonical key) order
        if (c.size() != o.c.size()) return c.size() < o.c.size();
        for (size_t i = c.size(); i-- > 0;)
            if (c[i] != o.c[i]) return c[i] < o.c[i];
        return false;
    }
};

inline Poly poly_trim(Poly f) {
    while (!f.c.empty() && f.c.back() == 0) f.c.pop_back();
    return f;
}
inline Poly poly_one() { return Poly{{1}}; }
inline Poly poly_const(uint32_t a) { return a ? Poly{{a}} : Poly{}; }
inline Poly poly_T() { return Poly{{0, 1}}; }

inline bool is_monic(const Poly& f) { return !f.c.empty() && f.c.back() == 1; }

inline Poly poly_add(const FieldSpec& F, const Poly& a, const Poly& b) {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i) {
        uint32_t x = i < a.c.size() ? a.c[i] : 0;
        uint32_t y = i < b.c.size() ? b.c[i] : 0;
        r.c[i] = F.add(x, y);
    }
    return poly_trim(std::move(r));
}
inline Poly poly_neg(const FieldSpec& F, const Poly& a) {
    Poly r = a;
    for (auto& x : r.c) x = F.neg(x);
    return r;
}
inline Poly poly_sub(const FieldSpec& F, const Poly& a, const Poly& b) {
    return poly_add(F, a, poly_neg(F, b));
}
inline Poly poly_scale(const FieldSpec& F, const Poly& a, uint32_t s) {
    if (s == 0) return {};
    Poly r = a;
    for (auto& x : r.c) x = F.mul(x, s);
    return r;
}
inline Poly poly_mul(const FieldSpec& F, const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Poly r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            if (b.c[j]) r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
    }
    return r;
}

// f = g*Q + R with deg R < deg g
inline std::pair<Poly, Poly> poly_divmod(const FieldSpec& F, const Poly& f, const Poly& g) {
    if (g.is_zero()) throw std::domain_error("poly_divmod: division by zero");
    Poly r = f, q;
    if (f.deg() >= g.deg()) q.c.assign(static_cast<size_t>(f.deg() - g.deg()) + 1, 0);
    uint32_t lg = F.inv(g.c.back());
    while (!r.is_zero() && r.deg() >= g.deg()) {
        uint32_t coef = F.mul(r.c.back(), lg);
        size_t sh = static_cast<size_t>(r.deg() - g.deg());
        q.c[sh] = coef;
        for (size_t j = 0; j < g.c.size(); ++j)
            r.c[sh + j] = F.sub(r.c[sh + j], F.mul(coef, g.c[j]));
        r = poly_trim(std::move(r));
    }
    return {poly_trim(std::move(q)), r};
}
inline Poly poly_mod(const FieldSpec& F, const Poly& f, const Poly& g) {
    return poly_divmod(F, f, g).second;
}

inline Poly poly_monic(const FieldSpec& F, const Poly& f) {
    if (f.is_zero()) return f;
    return poly_scale(F, f, F.inv(f.c.back()));
}

inline Poly poly_gcd(const FieldSpec& F, Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly t = poly_mod(F, a, b);
        a = std::move(b);
        b = std::move(t);
    }
    return poly_monic(F, a);
}

inline Poly poly_mulmod(const FieldSpec& F, const Poly& a, const Poly& b, const Poly& m) {
    return poly_mod(F, poly_mul(F, a, b), m);
}
inline Poly poly_powmod(const FieldSpec& F, Poly a, BigInt n, const Poly& m) {
    Poly r = poly_one();
    a = poly_mod(F, a, m);
    while (n > 0) {
        if ((n & 1) != 0) r = poly_mulmod(F, r, a, m);
        a = poly_mulmod(F, a, a, m);
        n >>= 1;
    }
    return r;
}

inline Poly poly_pow(const FieldSpec& F, const Poly& f, int e) {
    Poly r = poly_one();
    for (int i = 0; i < e; ++i) r = poly_mul(F, r, f);
    return r;
}

inline uint32_t poly_eval(const FieldSpec& F, const Poly& f, uint32_t x) {
    uint32_t acc = 0;
    for (size_t i = f.c.size(); i-- > 0;) acc = F.add(F.mul(acc, x), f.c[i]);
    return acc;
}

inline Poly poly_derivative(const FieldSpec& F, const Poly& f) {
    Poly r;
    if (f.deg() < 1) return r;
    r.c.resize(f.c.size() - 1);
    for (size_t i = 1; i < f.c.size(); ++i) {
        uint32_t coef = 0;
        for (uint64_t k = 0; k < i % static_cast<uint64_t>(F.p); ++k) coef = F.add(coef, f.c[i]);
        r.c[i - 1] = coef;
    }
    return poly_trim(std::move(r));
}

// frobenius conjugation sigma: coefficientwise x -> x^q, for polynomials over
// F_{q^2}.  Rejected over the base field where sigma would be trivial.
inline Poly frobenius_conjugate(const FieldTower& T, const Poly& f) {
    Poly r = f;
    for (auto& x : r.c) x = T.Fq2.frobenius_iter(x, T.Fq.e);
    return r;
}
inline Poly frobenius_conjugate_checked(const FieldSpec& F, const FieldSpec& base, const Poly& f) {
    if (F.q == base.q)
        throw std::invalid_argument("frobenius_conjugate: base field has trivial sigma");
    Poly r = f;
    for (auto& x : r.c) x = F.frobenius_iter(x, base.e);
    return r;
}

// ---- enumeration ------------------------------------------------------

// number of monic polynomials of degree n
inline BigInt monic_count(uint32_t q, int n) { return ipow(q, static_cast<uint64_t>(n)); }

// k-th monic polynomial of degree n, canonical key order (k < q^n)
inline Poly monic_at(uint32_t q, int n, uint64_t k) {
    Poly f;
    f.c.resize(static_cast<size_t>(n) + 1);
    for (int i = 0; i < n; ++i) {
        f.c[static_cast<size_t>(i)] = static_cast<uint32_t>(k % q);
        k /= q;
    }
    f.c[static_cast<size_t>(n)] = 1;
    return f;
}
inline uint64_t monic_index(uint32_t q, const Poly& f) {
    uint64_t k = 0, pw = 1;
    for (int i = 0; i < f.deg(); ++i) {
        k += f.c[static_cast<size_t>(i)] * pw;
        pw *= q;
    }
    return k;
}

// stream all monic f of degree n in canonical order
inline void enumerate_monic(const FieldSpec& F, int n, const std::function<void(const Poly&)>& fn) {
    if (n < 0) throw std::invalid_argument("enumerate_monic: n must be >= 0");
    uint64_t total = static_cast<uint64_t>(monic_count(F.q, n));
    for (uint64_t k = 0; k < total; ++k) fn(monic_at(F.q, n, k));
}

inline bool is_squarefree(const FieldSpec& F, const Poly& f) {
    if (f.is_zero()) return false;
    Poly d = poly_derivative(F, f);
    if (d.is_zero()) return f.deg() == 0;
    return poly_gcd(F, f, d).deg() == 0;
}

inline void enumerate_squarefree(const FieldSpec& F, int n, const std::function<void(const Poly&)>& fn) {
    enumerate_monic(F, n, [&](const Poly& f) {
        if (is_squarefree(F, f)) fn(f);
    });
}

// ---- factorization -----------------------------------------------------

struct Factorization {
    std::vector<std::pair<Poly, int>> factors;  // monic primes, sorted, with multiplicities
    uint32_t unit = 1;

    int total_degree() const {
        int d = 0;
        for (const auto& [P, e] : factors) d += P.deg() * e;
        return d;
    }
    bool squarefree() const {
        for (const auto& [P, e] : factors)
            if (e > 1) return false;
        return true;
    }
};

namespace detail {

// deterministic equal-degree splitting: product of irreducibles of degree d
inline void edf(const FieldSpec& F, const Poly& f, int d, std::vector<Poly>& out) {
    if (f.deg() == d) {
        out.push_back(f);
        return;
    }
    // iterate candidate elements in canonical key order; (q^d-1)/2 power map
    BigInt m = (ipow(F.q, static_cast<uint64_t>(d)) - 1) / 2;
    for (uint64_t k = 1;; ++k) {
        // candidate of degree < deg f built from the key k (skip constants
        // only when they cannot split, but trying them is harmless)
        Poly r;
        uint64_t kk = k;
        while (kk) {
            r.c.push_back(static_cast<uint32_t>(kk % F.q));
            kk /= F.q;
        }
        r = poly_trim(std::move(r));
        if (r.deg() >= f.deg()) throw std::logic_error("edf: ran out of candidates");
        Poly s = poly_powmod(F, r, m, f);
        s = poly_sub(F, s, poly_one());
        Poly g = poly_gcd(F, s, f);
        if (g.deg() > 0 && g.deg() < f.deg()) {
            edf(F, g, d, out);
            edf(F, poly_divmod(F, f, g).first, d, out);
            return;
        }
    }
}

}  // namespace detail

inline Factorization factorize(const FieldSpec& F, const Poly& f0) {
    if (f0.is_zero()) throw std::invalid_argument("factorize: zero polynomial");
    Factorization out;
    out.unit = f0.c.back();
    std::map<Poly, int> acc;

    std::function<void(Poly, int)> fac = [&](Poly f, int mult) {
        f = poly_monic(F, f);
        while (f.deg() > 0) {
            Poly d = poly_derivative(F, f);
            if (d.is_zero()) {
                // f = g(T^p)
                Poly g;
                g.c.resize(static_cast<size_t>(f.deg()) / static_cast<size_t>(F.p) + 1);
                uint64_t root_pow = static_cast<uint64_t>(ipow(F.p, static_cast<uint64_t>(F.e - 1)));
                for (size_t i = 0; i < g.c.size(); ++i)
                    g.c[i] = F.pow(f.c[i * static_cast<size_t>(F.p)], root_pow);
                fac(g, mult * static_cast<int>(F.p));
                return;
            }
            Poly w = poly_gcd(F, f, d);
            Poly sqf = poly_divmod(F, f, w).first;  // product of distinct primes of f
            // distinct-degree factorization of sqf
            Poly rem = sqf;
            Poly h = poly_mod(F, poly_T(), rem);
            int dd = 1;
            std::vector<Poly> primes;
            while (rem.deg() > 0) {
                if (2 * dd > rem.deg()) {
                    primes.push_back(rem);
                    break;
                }
                h = poly_powmod(F, h, BigInt(F.q), rem);
                Poly g = poly_gcd(F, poly_sub(F, h, poly_T()), rem);
                if (g.deg() > 0) {
                    detail::edf(F, g, dd, primes);
                    rem = poly_divmod(F, rem, g).first;
                    h = poly_mod(F, h, rem);
                }
                ++dd;
            }
            for (const auto& P : primes) {
                int e = 0;
                while (true) {
                    auto [quo, r] = poly_divmod(F, f, P);
                    if (!r.is_zero()) break;
                    f = quo;
                    ++e;
                }
                acc[P] += e * mult;
            }
        }
    };
    fac(f0, 1);

    for (auto& [P, e] : acc) out.factors.push_back({P, e});
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

inline Poly factorization_product(const FieldSpec& F, const Factorization& fac) {
    Poly r = poly_const(fac.unit);
    for (const auto& [P, e] : fac.factors)
        for (int i = 0; i < e; ++i) r = poly_mul(F, r, P);
    return r;
}

inline bool is_irreducible(const FieldSpec& F, const Poly& f) {
    if (f.deg() < 1) return false;
    auto fac = factorize(F, f);
    return fac.factors.size() == 1 && fac.factors[0].second == 1;
}

// ---- arithmetic functions ----------------------------------------------

inline BigInt poly_norm(uint32_t q, const Poly& f) { return ipow(q, static_cast<uint64_t>(f.deg())); }

inline int mobius(const FieldSpec& F, const Poly& f) {
    if (f.is_zero()) throw std::invalid_argument("mobius: zero polynomial");
    auto fac = factorize(F, f);
    for (const auto& [P, e] : fac.factors)
        if (e > 1) return 0;
    return fac.factors.size() % 2 == 0 ? 1 : -1;
}

inline BigInt euler_phi(const FieldSpec& F, const Poly& f) {
    if (f.is_zero()) throw std::invalid_argument("euler_phi: zero polynomial");
    auto fac = factorize(F, f);
    BigInt r = 1;
    for (const auto& [P, e] : fac.factors) {
        BigInt pd = ipow(F.q, static_cast<uint64_t>(P.deg()));
        r *= ipow(pd, static_cast<uint64_t>(e - 1)) * (pd - 1);
    }
    return r;
}

// d_k(f) for monic f; non-monic input is an error, not a normalization
inline BigInt divisor_count(const FieldSpec& F, const Poly& f, int k = 2) {
    if (k < 2) throw std::invalid_argument("divisor_count: order must be >= 2");
    if (!is_monic(f)) throw std::invalid_argument("divisor_count: f must be monic");
    auto fac = factorize(F, f);
    BigInt r = 1;
    for (const auto& [P, e] : fac.factors) r *= binomial(e + k - 1, k - 1);
    return r;
}

// count of monic irreducibles of degree d: (1/d) sum_{e|d} mu(e) q^{d/e}
inline BigInt irreducible_count(uint32_t q, int d) {
    if (d <= 0) throw std::invalid_argument("irreducible_count: d must be >= 1");
    BigInt s = 0;
    for (int e = 1; e <= d; ++e) {
        if (d % e) continue;
        int mu = int_mobius(static_cast<uint64_t>(e));
        if (mu) s += mu * ipow(q, static_cast<uint64_t>(d / e));
    }
    return s / d;
}

// canonical text encoding: comma-separated coefficients, constant term
// first; prime-field elements as integers, extension elements bracketed
inline std::string poly_encode(const FieldSpec& F, const Poly& f) {
    std::string s;
    for (size_t i = 0; i < f.c.size(); ++i) {
        if (i) s += ",";
        if (F.e == 1) {
            s += std::to_string(f.c[i]);
        } else {
            auto digits = F.coeffs_of(f.c[i]);
            s += "[";
            for (size_t j = 0; j < digits.size(); ++j) {
                if (j) s += " ";
                s += std::to_string(digits[j]);
            }
            s += "]";
        }
    }
    return s;
}

inline Poly poly_decode(const FieldSpec& F, const std::string& s) {
    Poly f;
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] == ',') {
            ++i;
            continue;
        }
        if (s[i] == '[') {
            size_t close = s.find(']', i);
            if (close == std::string::npos) throw std::invalid_argument("poly_decode: unbalanced bracket");
            std::vector<uint32_t> digits;
            size_t j = i + 1;
            while (j < close) {
                size_t end = std::min(close, s.find(' ', j));
                digits.push_back(static_cast<uint32_t>(std::stoul(s.substr(j, end - j))));
                j = end + (end < close ? 1 : 0);
            }
            f.c.push_back(F.from_coeffs(digits));
            i = close + 1;
        } else {
            size_t end = std::min(s.size(), s.find(',', i));
            f.c.push_back(static_cast<uint32_t>(std::stoul(s.substr(i, end - i))));
            i = end;
        }
    }
    return poly_trim(std::move(f));
}

}  // namespace cubicmoments
