#pragma once

// Finite fields F_{p^e} with a deterministic modulus, packed-index element
// encoding, log/exp multiplication, Frobenius, trace to F_p, and the fixed
// bijection Omega between abstract cube roots of unity and mu_3 in the
// quadratic extension.
//
// Elements are encoded by their canonical integer key sum c_i p^i of the
// little-endian coefficient vector; the key doubles as the table index.

#include "numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <vector>

namespace cubicmoments {

class FieldSpec {
public:
    int64_t p = 0;
    int e = 0;
    uint32_t q = 0;                  // p^e
    std::vector<uint32_t> modulus;   // little-endian coefficients, length e+1, monic

    uint32_t add(uint32_t a, uint32_t b) const {
        if (!add_tab_.empty()) return add_tab_[a * q + b];
        return add_slow(a, b);
    }
    uint32_t neg(uint32_t a) const { return neg_tab_[a]; }
    uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }
    uint32_t mul(uint32_t a, uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        uint64_t s = uint64_t(log_[a]) + log_[b];
        if (s >= q - 1) s -= q - 1;
        return exp_[s];
    }
    uint32_t inv(uint32_t a) const {
        if (a == 0) throw std::domain_error("field inverse of zero");
        uint32_t l = log_[a];
        return exp_[l == 0 ? 0 : q - 1 - l];
    }
    uint32_t pow(uint32_t a, uint64_t n) const {
        if (a == 0) return n == 0 ? 1u : 0u;
        return exp_[(uint64_t(log_[a]) * (n % (q - 1))) % (q - 1)];
    }
    uint32_t frobenius(uint32_t a) const { return frob_[a]; }  // x -> x^p
    // x -> x^{p^k}
    uint32_t frobenius_iter(uint32_t a, int k) const {
        for (int i = 0; i < k; ++i) a = frob_[a];
        return a;
    }
    // trace to the prime field, returned as an integer in 0..p-1
    uint32_t trace_to_prime(uint32_t a) const { return trace_[a]; }

    uint32_t generator() const { return exp_[1]; }
    uint32_t exp_at(uint32_t k) const { return exp_[k % (q - 1)]; }
    uint32_t log(uint32_t a) const {
        if (a == 0) throw std::domain_error("log of zero");
        return log_[a];
    }

    std::vector<uint32_t> coeffs_of(uint32_t a) const {
        std::vector<uint32_t> c(static_cast<size_t>(e));
        for (int i = 0; i < e; ++i) {
            c[static_cast<size_t>(i)] = a % static_cast<uint32_t>(p);
            a /= static_cast<uint32_t>(p);
        }
        return c;
    }
    uint32_t from_coeffs(const std::vector<uint32_t>& c) const {
        uint64_t key = 0, pw = 1;
        for (size_t i = 0; i < c.size(); ++i) {
            key += (c[i] % static_cast<uint32_t>(p)) * pw;
            pw *= static_cast<uint64_t>(p);
        }
        return static_cast<uint32_t>(key);
    }

    friend FieldSpec make_field(int64_t p, int e);

private:
    uint32_t add_slow(uint32_t a, uint32_t b) const {
        uint32_t r = 0, pw = 1;
        const uint32_t up = static_cast<uint32_t>(p);
        for (int i = 0; i < e; ++i) {
            r += ((a + b) % up) * pw;
            a /= up;
            b /= up;
            pw *= up;
        }
        return r;
    }

    std::vector<uint32_t> add_tab_;  // q*q when q small
    std::vector<uint32_t> neg_tab_;
    std::vector<uint32_t> exp_;      // size q-1
    std::vector<uint32_t> log_;      // size q
    std::vector<uint32_t> frob_;
    std::vector<uint32_t> trace_;
};

namespace detail {

// polynomial arithmetic over Z/p on small int vectors, used only while
// constructing a FieldSpec
using ZpPoly = std::vector<int64_t>;

inline ZpPoly zp_trim(ZpPoly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}
inline ZpPoly zp_mulmod(const ZpPoly& a, const ZpPoly& b, const ZpPoly& m, int64_t p) {
    std::vector<int64_t> r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    // reduce mod monic m (degree m.size()-1)
    for (size_t i = r.size(); i-- > m.size() - 1;) {
        int64_t c = r[i] % p;
        if (c) {
            size_t sh = i - (m.size() - 1);
            for (size_t j = 0; j < m.size(); ++j)
                r[sh + j] = ((r[sh + j] - c * m[j]) % p + p) % p;
        }
    }
    r.resize(m.size() - 1, 0);
    return r;
}
inline ZpPoly zp_powmod(ZpPoly a, BigInt n, const ZpPoly& m, int64_t p) {
    ZpPoly r{1};
    r.resize(m.size() - 1, 0);
    a.resize(m.size() - 1, 0);
    while (n > 0) {
        if ((n & 1) != 0) r = zp_mulmod(r, a, m, p);
        a = zp_mulmod(a, a, m, p);
        n >>= 1;
    }
    return r;
}
inline ZpPoly zp_gcd(ZpPoly a, ZpPoly b, int64_t p) {
    a = zp_trim(a);
    b = zp_trim(b);
    auto mod = [p](ZpPoly f, const ZpPoly& g) {
        while (f.size() >= g.size() && !f.empty()) {
            int64_t lg = g.back();
            // lg^{-1} mod p
            int64_t inv = 1;
            for (int64_t k = 0; k < p - 2; ++k) inv = inv * lg % p;
            int64_t c = f.back() * inv % p;
            size_t sh = f.size() - g.size();
            for (size_t j = 0; j < g.size(); ++j) f[sh + j] = ((f[sh + j] - c * g[j]) % p + p) % p;
            f = zp_trim(f);
        }
        return f;
    };
    while (!b.empty()) {
        ZpPoly t = mod(a, b);
        a = b;
        b = t;
    }
    return a;
}

inline bool zp_irreducible(const ZpPoly& m, int64_t p) {
    int e = static_cast<int>(m.size()) - 1;
    // x^{p^e} == x mod m, and gcd(x^{p^d} - x, m) = 1 for proper divisors d
    ZpPoly x{0, 1};
    ZpPoly xe = zp_powmod(x, ipow(p, static_cast<uint64_t>(e)), m, p);
    ZpPoly diff = xe;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = ((diff[1] - 1) % p + p) % p;
    if (!zp_trim(diff).empty()) return false;
    for (int d = 1; d <= e / 2; ++d) {
        if (e % d != 0) continue;
        ZpPoly xd = zp_powmod(x, ipow(p, static_cast<uint64_t>(d)), m, p);
        ZpPoly dd = xd;
        dd.resize(std::max<size_t>(dd.size(), 2), 0);
        dd[1] = ((dd[1] - 1) % p + p) % p;
        ZpPoly g = zp_gcd(zp_trim(dd), m, p);
        if (g.size() > 1) return false;
    }
    return true;
}

}  // namespace detail

// Deterministic modulus: the monic irreducible of degree e whose coefficient
// vector is lexicographically smallest compared from the subleading
// coefficient down, i.e. smallest canonical key.
inline FieldSpec make_field(int64_t p, int e) {
    if (p < 3 || p % 2 == 0 || !is_prime_u64(static_cast<uint64_t>(p)))
        throw std::invalid_argument("make_field: p must be an odd prime");
    if (e <= 0) throw std::invalid_argument("make_field: e must be >= 1");
    BigInt qb = ipow(p, static_cast<uint64_t>(e));
    if (qb > (1 << 26)) throw std::invalid_argument("make_field: field too large");
    FieldSpec F;
    F.p = p;
    F.e = e;
    F.q = static_cast<uint32_t>(qb);

    if (e == 1) {
        F.modulus = {0, 1};  // degenerate: T
    } else {
        uint64_t count = static_cast<uint64_t>(ipow(p, static_cast<uint64_t>(e)));
        for (uint64_t key = 0; key < count; ++key) {
            detail::ZpPoly m(static_cast<size_t>(e) + 1, 0);
            uint64_t k = key;
            for (int i = 0; i < e; ++i) {
                m[static_cast<size_t>(i)] = static_cast<int64_t>(k % static_cast<uint64_t>(p));
                k /= static_cast<uint64_t>(p);
            }
            m[static_cast<size_t>(e)] = 1;
            if (detail::zp_irreducible(m, p)) {
                F.modulus.assign(m.begin(), m.end());
                break;
            }
        }
        if (F.modulus.empty()) throw std::logic_error("make_field: no irreducible found");
    }

    // multiplication on packed keys via coefficient convolution + reduction
    const uint32_t up = static_cast<uint32_t>(p);
    auto raw_mul = [&](uint32_t a, uint32_t b) -> uint32_t {
        std::vector<int64_t> r(2 * static_cast<size_t>(e) - 1, 0);
        std::vector<int64_t> ca(static_cast<size_t>(e)), cb(static_cast<size_t>(e));
        for (int i = 0; i < e; ++i) {
            ca[static_cast<size_t>(i)] = a % up;
            a /= up;
            cb[static_cast<size_t>(i)] = b % up;
            b /= up;
        }
        for (int i = 0; i < e; ++i)
            for (int j = 0; j < e; ++j) r[static_cast<size_t>(i + j)] += ca[static_cast<size_t>(i)] * cb[static_cast<size_t>(j)];
        for (size_t i = r.size(); i-- > static_cast<size_t>(e);) {
            int64_t c = r[i] % p;
            if (c) {
                size_t sh = i - static_cast<size_t>(e);
                for (int j = 0; j <= e; ++j)
                    r[sh + static_cast<size_t>(j)] -= c * static_cast<int64_t>(F.modulus[static_cast<size_t>(j)]);
            }
        }
        uint32_t key = 0, pw = 1;
        for (int i = 0; i < e; ++i) {
            key += static_cast<uint32_t>(((r[static_cast<size_t>(i)] % p) + p) % p) * pw;
            pw *= up;
        }
        return key;
    };

    // generator of the multiplicative group: smallest key passing the order test
    auto factors = prime_divisors_u64(F.q - 1);
    auto raw_pow = [&](uint32_t a, uint64_t n) {
        uint32_t r = 1;
        while (n) {
            if (n & 1) r = raw_mul(r, a);
            a = raw_mul(a, a);
            n >>= 1;
        }
        return r;
    };
    uint32_t gen = 0;
    for (uint32_t cand = 2; cand < F.q; ++cand) {
        bool ok = true;
        for (uint64_t ell : factors)
            if (raw_pow(cand, (F.q - 1) / ell) == 1) {
                ok = false;
                break;
            }
        if (ok) {
            gen = cand;
            break;
        }
    }
    if (gen == 0) throw std::logic_error("make_field: no generator");

    F.exp_.resize(F.q - 1);
    F.log_.assign(F.q, 0);
    uint32_t acc = 1;
    for (uint32_t k = 0; k < F.q - 1; ++k) {
        F.exp_[k] = acc;
        F.log_[acc] = k;
        acc = raw_mul(acc, gen);
    }

    F.neg_tab_.resize(F.q);
    for (uint32_t a = 0; a < F.q; ++a) {
        uint32_t r = 0, pw = 1, x = a;
        for (int i = 0; i < e; ++i) {
            r += ((up - x % up) % up) * pw;
            x /= up;
            pw *= up;
        }
        F.neg_tab_[a] = r;
    }
    if (static_cast<uint64_t>(F.q) * F.q <= (1u << 22)) {
        F.add_tab_.resize(static_cast<size_t>(F.q) * F.q);
        for (uint32_t a = 0; a < F.q; ++a)
            for (uint32_t b = 0; b < F.q; ++b) F.add_tab_[a * F.q + b] = F.add_slow(a, b);
    }

    F.frob_.resize(F.q);
    for (uint32_t a = 0; a < F.q; ++a) F.frob_[a] = F.pow(a, static_cast<uint64_t>(p));
    F.trace_.resize(F.q);
    for (uint32_t a = 0; a < F.q; ++a) {
        uint32_t s = 0, x = a;
        for (int i = 0; i < e; ++i) {
            s = F.add(s, x);
            x = F.frob_[x];
        }
        if (s >= up) throw std::logic_error("trace not in prime field");
        F.trace_[a] = s;
    }
    return F;
}

// Typed element wrapper over the packed-key representation.  Hot paths use
// raw keys through FieldSpec directly; this is the value type of the public
// surface.
struct FieldElem {
    const FieldSpec* spec = nullptr;
    uint32_t key = 0;

    FieldElem() = default;
    FieldElem(const FieldSpec& F, uint32_t k) : spec(&F), key(k) {}

    std::vector<uint32_t> coeffs() const { return spec->coeffs_of(key); }

    friend FieldElem operator+(FieldElem a, FieldElem b) { return {*a.spec, a.spec->add(a.key, b.key)}; }
    friend FieldElem operator-(FieldElem a, FieldElem b) { return {*a.spec, a.spec->sub(a.key, b.key)}; }
    friend FieldElem operator*(FieldElem a, FieldElem b) { return {*a.spec, a.spec->mul(a.key, b.key)}; }
    FieldElem inverse() const { return {*spec, spec->inv(key)}; }
    FieldElem pow(uint64_t n) const { return {*spec, spec->pow(key, n)}; }
    bool operator==(const FieldElem& o) const { return key == o.key; }
};

inline uint32_t trace_to_prime(const FieldElem& x) { return x.spec->trace_to_prime(x.key); }

// The fixed bijection Omega between {1, omega, omega^2} and mu_3 in the
// field; the image of omega is the primitive cube root with the smaller
// canonical key.
struct OmegaMap {
    uint32_t zeta = 0;   // Omega(omega)
    uint32_t zeta2 = 0;  // Omega(omega^2)

    // exponent j with x = Omega(omega^j); -1 if x is not a cube root of 1
    int omega_exp(uint32_t x) const {
        if (x == 1) return 0;
        if (x == zeta) return 1;
        if (x == zeta2) return 2;
        return -1;
    }
};

inline OmegaMap make_omega_map(const FieldSpec& F) {
    if ((F.q - 1) % 3 != 0)
        throw std::invalid_argument("make_omega_map: 3 does not divide q-1");
    uint32_t a = F.exp_at((F.q - 1) / 3), b = F.exp_at(2 * (F.q - 1) / 3);
    OmegaMap om;
    om.zeta = std::min(a, b);
    om.zeta2 = std::max(a, b);
    // min/max on packed keys realizes the smaller-canonical-encoding choice;
    // zeta2 = zeta^2 automatically since the two primitive roots are inverse
    if (F.mul(om.zeta, om.zeta) != om.zeta2) throw std::logic_error("omega map inconsistent");
    return om;
}

// The pair (F_q, F_{q^2}) with the subfield embedding and Omega, as used by
// the character machinery.
struct FieldTower {
    FieldSpec Fq;
    FieldSpec Fq2;
    OmegaMap omega;
    std::vector<uint32_t> lift;      // F_q key -> F_{q^2} key, a field embedding
    std::vector<uint32_t> chi_exp;   // cubic character of F_{q^2}^x via Omega; 3 = "zero"

    uint32_t q() const { return Fq.q; }
    uint32_t q2() const { return Fq2.q; }
};

inline FieldTower make_tower(int64_t p, int e) {
    FieldTower T;
    T.Fq = make_field(p, e);
    T.Fq2 = make_field(p, 2 * e);
    T.omega = make_omega_map(T.Fq2);

    T.lift.resize(T.Fq.q);
    if (e == 1) {
        for (uint32_t a = 0; a < T.Fq.q; ++a) T.lift[a] = a;  // prime subfield
    } else {
        // smallest root of the F_q modulus inside F_{q^2}; prime-subfield
        // constants have the same packed key in both fields
        uint32_t root = 0;
        bool found = false;
        for (uint32_t x = 0; x < T.Fq2.q && !found; ++x) {
            uint32_t acc = 0;
            for (int i = T.Fq.e; i >= 0; --i)
                acc = T.Fq2.add(T.Fq2.mul(acc, x), T.Fq.modulus[static_cast<size_t>(i)]);
            if (acc == 0) {
                root = x;
                found = true;
            }
        }
        if (!found) throw std::logic_error("make_tower: modulus has no root upstairs");
        for (uint32_t a = 0; a < T.Fq.q; ++a) {
            uint32_t x = a, acc = 0;
            std::vector<uint32_t> digits;
            for (int i = 0; i < T.Fq.e; ++i) {
                digits.push_back(x % static_cast<uint32_t>(p));
                x /= static_cast<uint32_t>(p);
            }
            for (int i = T.Fq.e - 1; i >= 0; --i)
                acc = T.Fq2.add(T.Fq2.mul(acc, root), digits[static_cast<size_t>(i)]);
            T.lift[a] = acc;
        }
    }

    // chi(c) = Omega^{-1}(c^{(q^2-1)/3}) for c != 0
    T.chi_exp.assign(T.Fq2.q, 3);
    for (uint32_t c = 1; c < T.Fq2.q; ++c) {
        int j = T.omega.omega_exp(T.Fq2.pow(c, (T.Fq2.q - 1) / 3));
        if (j < 0) throw std::logic_error("cube character value not a cube root");
        T.chi_exp[c] = static_cast<uint32_t>(j);
    }
    return T;
}

}  // namespace cubicmoments
