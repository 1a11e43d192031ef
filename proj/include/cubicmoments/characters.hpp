#pragma once

// Cubic residue symbols over F_{q^2}[T], composite characters chi_F,
// the sigma-conjugation symmetry, and enumeration of the genus-g family in
// the non-Kummer case q = 2 mod 3.
//
// Family membership: squarefree monic F of degree g/2+1 over F_{q^2} not
// divisible by any prime of F_q[T].  Divisibility is in F_{q^2}[T], so this
// excludes inert odd-degree F_q-primes and split pairs pi*sigma(pi) alike;
// equivalently gcd(F, sigma(F)) = 1.

#include "cyclo.hpp"
#include "polyring.hpp"

namespace cubicmoments {

// value of a cubic character: zero, or omega^exp
struct CharValue {
    int exp = 0;     // 0,1,2 when nonzero
    bool zero = false;

    static CharValue zero_value() { return {0, true}; }
    static CharValue root(int e) { return {((e % 3) + 3) % 3, false}; }
    CharValue operator*(const CharValue& o) const {
        if (zero || o.zero) return zero_value();
        return root(exp + o.exp);
    }
    bool operator==(const CharValue& o) const {
        return zero == o.zero && (zero || exp == o.exp);
    }
    QuadExtNumber to_quadext(int64_t q) const {
        if (zero) return QuadExtNumber(q);
        return QuadExtNumber::omega_pow(q, exp);
    }
};

// cubic residue symbol chi_P(a) = Omega^{-1}(a^{(|P|-1)/3} mod P); the power
// is the norm to F_{q^2} composed with the cubic character of F_{q^2}^x
inline CharValue cubic_symbol(const FieldTower& T, const Poly& P, const Poly& a) {
    if (!is_irreducible(T.Fq2, P)) throw std::invalid_argument("cubic_symbol: P must be prime");
    Poly r = poly_mod(T.Fq2, a, P);
    if (r.is_zero()) return CharValue::zero_value();
    BigInt e = (ipow(T.Fq2.q, static_cast<uint64_t>(P.deg())) - 1) / 3;
    Poly x = poly_powmod(T.Fq2, r, e, P);
    if (x.deg() != 0) throw std::logic_error("cubic_symbol: power not a constant");
    int j = T.omega.omega_exp(x.c[0]);
    if (j < 0) throw std::logic_error("cubic_symbol: value not a cube root of unity");
    return CharValue::root(j);
}

// primitive cubic character given by its factored squarefree conductor and
// exponent vector (each 1 or 2)
struct CubicChar {
    const FieldTower* T = nullptr;
    Poly conductor;                 // product of the primes
    std::vector<Poly> primes;       // sorted, distinct
    std::vector<int> exps;          // in {1,2}

    CubicChar conjugate() const {
        CubicChar c = *this;
        for (auto& e : c.exps) e = 3 - e;
        return c;
    }
};

inline CubicChar make_cubic_char(const FieldTower& T, const Poly& F, int exp_all = 1) {
    auto fac = factorize(T.Fq2, F);
    if (!fac.squarefree()) throw std::invalid_argument("make_cubic_char: conductor must be squarefree");
    CubicChar chi;
    chi.T = &T;
    chi.conductor = poly_monic(T.Fq2, F);
    for (const auto& [P, e] : fac.factors) {
        chi.primes.push_back(P);
        chi.exps.push_back(exp_all);
    }
    return chi;
}

// chi_f for an arbitrary monic modulus (exponents are the multiplicities);
// primitive only when f is squarefree
inline CubicChar make_cubic_char_general(const FieldTower& T, const Poly& f) {
    auto fac = factorize(T.Fq2, f);
    CubicChar chi;
    chi.T = &T;
    chi.conductor = poly_monic(T.Fq2, f);
    for (const auto& [P, e] : fac.factors) {
        chi.primes.push_back(P);
        chi.exps.push_back(e);
    }
    return chi;
}

inline CharValue char_eval(const CubicChar& chi, const Poly& f) {
    int e = 0;
    for (size_t i = 0; i < chi.primes.size(); ++i) {
        CharValue v = cubic_symbol(*chi.T, chi.primes[i], f);
        if (v.zero) return CharValue::zero_value();
        e += v.exp * chi.exps[i];
    }
    return CharValue::root(e);
}

// lift of a polynomial over F_q into F_{q^2}[T]
inline Poly lift_poly(const FieldTower& T, const Poly& f) {
    Poly r = f;
    for (auto& c : r.c) c = T.lift[c];
    return r;
}

// Lemma "chi_F(f)=1": for squarefree F, f in F_q[T] with (f,F)=1 the lifted
// symbol is 1.  Returns false if the value is zero or a nontrivial root.
inline bool restriction_triviality_check(const FieldTower& T, const Poly& F5, const Poly& f5) {
    if (!is_squarefree(T.Fq, F5) || !is_squarefree(T.Fq, f5))
        throw std::invalid_argument("restriction_triviality_check: inputs must be squarefree");
    CubicChar chi = make_cubic_char(T, lift_poly(T, F5));
    CharValue v = char_eval(chi, lift_poly(T, f5));
    return !v.zero && v.exp == 0;
}

// chi_{sigma(F)}(f) = conj(chi_F(f)) for f defined over F_q
inline bool conjugation_symmetry(const FieldTower& T, const Poly& F, const Poly& f_over_Fq) {
    CubicChar chi = make_cubic_char(T, F);
    CubicChar chis = make_cubic_char(T, frobenius_conjugate(T, F));
    Poly f = lift_poly(T, f_over_Fq);
    CharValue a = char_eval(chis, f);
    CharValue b = char_eval(chi, f);
    CharValue bconj = b.zero ? b : CharValue::root(-b.exp);
    return a == bconj;
}

// ---- family ------------------------------------------------------------

struct FamilySpec {
    int64_t p = 0;
    int e = 1;
    uint32_t q = 0;  // p^e
    int g = 0;
    int m = 0;       // g/2 + 1

    FamilySpec(int64_t p_, int e_, int g_) : p(p_), e(e_), g(g_) {
        BigInt qb = ipow(p_, static_cast<uint64_t>(e_));
        if (qb > 1000000) throw std::invalid_argument("FamilySpec: q too large");
        q = static_cast<uint32_t>(qb);
        if (p <= 2 || !is_prime_u64(static_cast<uint64_t>(p)))
            throw std::invalid_argument("FamilySpec: p must be an odd prime");
        if (q % 3 != 2) throw std::invalid_argument("FamilySpec: q must be 2 mod 3");
        if (g < 0 || g % 2 != 0) throw std::invalid_argument("FamilySpec: genus must be even and >= 0");
        m = g / 2 + 1;
    }
};

// all family conductors of degree m, canonical order
inline std::vector<Poly> family_conductors(const FieldTower& T, int m) {
    std::vector<Poly> out;
    uint64_t total = static_cast<uint64_t>(monic_count(T.Fq2.q, m));
    for (uint64_t k = 0; k < total; ++k) {
        Poly F = monic_at(T.Fq2.q, m, k);
        if (!is_squarefree(T.Fq2, F)) continue;
        if (poly_gcd(T.Fq2, F, frobenius_conjugate(T, F)).deg() != 0) continue;
        out.push_back(F);
    }
    return out;
}

// diagnostic: the weaker condition "no F_{q^2}[T]-prime divisor lies in
// F_q[T]" admits the sigma-invariant conductors pi*sigma(pi) as well
inline uint64_t family_count_weak_condition(const FieldTower& T, int m) {
    uint64_t n = 0;
    uint64_t total = static_cast<uint64_t>(monic_count(T.Fq2.q, m));
    int e = T.Fq.e;
    for (uint64_t k = 0; k < total; ++k) {
        Poly F = monic_at(T.Fq2.q, m, k);
        if (!is_squarefree(T.Fq2, F)) continue;
        auto fac = factorize(T.Fq2, F);
        bool ok = true;
        for (const auto& [P, mult] : fac.factors) {
            bool in_base = true;
            for (uint32_t c : P.c)
                if (T.Fq2.frobenius_iter(c, e) != c) {
                    in_base = false;
                    break;
                }
            if (in_base) {
                ok = false;
                break;
            }
        }
        if (ok) ++n;
    }
    return n;
}

inline void family_iter(const FieldTower& T, const FamilySpec& spec,
                        const std::function<void(const CubicChar&)>& fn) {
    for (const Poly& F : family_conductors(T, spec.m)) fn(make_cubic_char(T, F));
}

inline BigInt binomial_big(const BigInt& n, int k) {
    if (k < 0) return 0;
    BigInt r = 1;
    for (int i = 0; i < k; ++i) {
        r *= (n - i);
        r /= (i + 1);
    }
    return r;
}

// independent inclusion-exclusion oracle for the family count, counting by
// factorization type of squarefree F with gcd(F, sigma F) = 1:
// every allowed prime pi has orbit {pi, sigma pi} of size 2 and at most one
// orbit member divides F.  Orbits of degree-d primes with pi != sigma pi:
//   b_d = (#primes of F_{q^2}[T] of degree d - #inert F_q-primes of degree d)/2,
// where inert primes of degree d exist when d is odd (count pi_q(d)).
// The count of F is then sum over multisets of distinct orbits with total
// degree m of 2^{#orbits}.
inline BigInt family_count_oracle(const FieldTower& T, int m) {
    std::vector<BigInt> orbits(static_cast<size_t>(m) + 1, 0);
    for (int d = 1; d <= m; ++d) {
        BigInt total = irreducible_count(T.Fq2.q, d);
        BigInt inert = (d % 2 == 1) ? irreducible_count(T.Fq.q, d) : 0;
        orbits[static_cast<size_t>(d)] = (total - inert) / 2;
    }
    // dp over degrees: choose k distinct orbits of degree d, weight (b_d choose k) 2^k
    std::vector<BigInt> dp(static_cast<size_t>(m) + 1, 0);
    dp[0] = 1;
    for (int d = 1; d <= m; ++d) {
        std::vector<BigInt> ndp(static_cast<size_t>(m) + 1, 0);
        for (int used = 0; used <= m; ++used) {
            if (dp[static_cast<size_t>(used)] == 0) continue;
            for (int k = 0; used + k * d <= m; ++k) {
                BigInt ways = binomial_big(orbits[static_cast<size_t>(d)], k) * ipow(2, static_cast<uint64_t>(k));
                ndp[static_cast<size_t>(used + k * d)] += dp[static_cast<size_t>(used)] * ways;
            }
        }
        dp = std::move(ndp);
    }
    return dp[static_cast<size_t>(m)];
}

// ---- fast per-character tables ------------------------------------------

namespace detail {

// residue ring F_{q^2}[T]/(pi) on packed keys (base-q2 digit vectors)
struct ResidueCtx {
    const FieldSpec* F;
    Poly pi;
    int d;
    uint64_t size;                 // q2^d
    std::vector<uint32_t> shiftmul;  // r -> T*r mod pi
    std::vector<uint8_t> symexp;     // cubic-symbol exponent; 3 for the zero residue

    uint64_t key_of(const Poly& r) const {
        uint64_t k = 0, pw = 1;
        for (int i = 0; i < d; ++i) {
            k += (i <= r.deg() ? r.c[static_cast<size_t>(i)] : 0u) * pw;
            pw *= F->q;
        }
        return k;
    }
    Poly poly_of(uint64_t k) const {
        Poly r;
        for (int i = 0; i < d; ++i) {
            r.c.push_back(static_cast<uint32_t>(k % F->q));
            k /= F->q;
        }
        return poly_trim(std::move(r));
    }
    // add a field constant c to residue key r
    uint64_t add_const(uint64_t r, uint32_t c, const FieldSpec& Fld) const {
        uint32_t low = static_cast<uint32_t>(r % Fld.q);
        return r - low + Fld.add(low, c);
    }
};

inline ResidueCtx make_residue_ctx(const FieldTower& T, const Poly& pi) {
    ResidueCtx R;
    R.F = &T.Fq2;
    R.pi = pi;
    R.d = pi.deg();
    BigInt sz = ipow(T.Fq2.q, static_cast<uint64_t>(R.d));
    if (sz > (1 << 26)) throw std::invalid_argument("residue table too large");
    R.size = static_cast<uint64_t>(sz);
    const FieldSpec& F = T.Fq2;

    R.shiftmul.resize(R.size);
    for (uint64_t k = 0; k < R.size; ++k) {
        // decode, multiply by T, reduce by monic pi
        uint64_t kk = k;
        std::vector<uint32_t> cf(static_cast<size_t>(R.d));
        for (int i = 0; i < R.d; ++i) {
            cf[static_cast<size_t>(i)] = static_cast<uint32_t>(kk % F.q);
            kk /= F.q;
        }
        uint32_t top = cf[static_cast<size_t>(R.d - 1)];
        // shift up, subtract top * pi
        std::vector<uint32_t> nf(static_cast<size_t>(R.d));
        for (int i = R.d - 1; i >= 1; --i) nf[static_cast<size_t>(i)] = cf[static_cast<size_t>(i - 1)];
        nf[0] = 0;
        if (top) {
            for (int i = 0; i < R.d; ++i)
                nf[static_cast<size_t>(i)] =
                    F.sub(nf[static_cast<size_t>(i)], F.mul(top, R.pi.c[static_cast<size_t>(i)]));
        }
        uint64_t nk = 0, pw = 1;
        for (int i = 0; i < R.d; ++i) {
            nk += nf[static_cast<size_t>(i)] * pw;
            pw *= F.q;
        }
        R.shiftmul[k] = static_cast<uint32_t>(nk);
    }

    // symbol exponents via a discrete-log walk of the residue field
    R.symexp.assign(R.size, 3);
    uint64_t N = R.size;  // field size of the residue field
    auto factors = prime_divisors_u64(N - 1);
    // residue multiplication (schoolbook, small d)
    auto rmul = [&](uint64_t a, uint64_t b) -> uint64_t {
        std::vector<uint32_t> ca(static_cast<size_t>(R.d)), cb(static_cast<size_t>(R.d));
        uint64_t aa = a, bb = b;
        for (int i = 0; i < R.d; ++i) {
            ca[static_cast<size_t>(i)] = static_cast<uint32_t>(aa % F.q);
            aa /= F.q;
            cb[static_cast<size_t>(i)] = static_cast<uint32_t>(bb % F.q);
            bb /= F.q;
        }
        std::vector<uint32_t> r(2 * static_cast<size_t>(R.d) - 1, 0);
        for (int i = 0; i < R.d; ++i) {
            if (!ca[static_cast<size_t>(i)]) continue;
            for (int j = 0; j < R.d; ++j)
                if (cb[static_cast<size_t>(j)])
                    r[static_cast<size_t>(i + j)] =
                        F.add(r[static_cast<size_t>(i + j)], F.mul(ca[static_cast<size_t>(i)], cb[static_cast<size_t>(j)]));
        }
        for (int i = 2 * R.d - 2; i >= R.d; --i) {
            uint32_t c = r[static_cast<size_t>(i)];
            if (c) {
                for (int j = 0; j <= R.d; ++j)
                    r[static_cast<size_t>(i - R.d + j)] =
                        F.sub(r[static_cast<size_t>(i - R.d + j)], F.mul(c, R.pi.c[static_cast<size_t>(j)]));
            }
        }
        uint64_t nk = 0, pw = 1;
        for (int i = 0; i < R.d; ++i) {
            nk += r[static_cast<size_t>(i)] * pw;
            pw *= F.q;
        }
        return nk;
    };
    auto rpow = [&](uint64_t a, uint64_t n) {
        uint64_t r = 1;
        while (n) {
            if (n & 1) r = rmul(r, a);
            a = rmul(a, a);
            n >>= 1;
        }
        return r;
    };
    uint64_t gen = 0;
    for (uint64_t cand = 2; cand < N; ++cand) {
        bool ok = true;
        for (uint64_t ell : factors)
            if (rpow(cand, (N - 1) / ell) == 1) {
                ok = false;
                break;
            }
        if (ok) {
            gen = cand;
            break;
        }
    }
    if (!gen) throw std::logic_error("residue field generator not found");
    uint64_t zt = rpow(gen, (N - 1) / 3);  // a constant: primitive cube root
    int j0 = T.omega.omega_exp(static_cast<uint32_t>(zt));
    if (j0 <= 0) throw std::logic_error("residue cube root not matched to Omega");
    uint64_t r = 1;
    for (uint64_t k = 0; k + 1 < N; ++k) {
        R.symexp[r] = static_cast<uint8_t>((static_cast<uint64_t>(j0) * k) % 3);
        r = rmul(r, gen);
    }
    return R;
}

// per-thread memo of residue contexts, keyed by (q^2, prime coefficients);
// symbol tables are reused across characters sharing a conductor prime
inline std::shared_ptr<const ResidueCtx> residue_ctx_cached(const FieldTower& T, const Poly& pi) {
    using Key = std::pair<uint32_t, std::vector<uint32_t>>;
    thread_local std::map<Key, std::shared_ptr<const ResidueCtx>> cache;
    Key key{T.Fq2.q, pi.c};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto ctx = std::make_shared<const ResidueCtx>(make_residue_ctx(T, pi));
    if (cache.size() > 4096) cache.clear();
    cache.emplace(std::move(key), ctx);
    return ctx;
}

}  // namespace detail

// degree offsets for flat indexing of monic polynomials over a field with
// q elements, degrees 0..D
inline std::vector<uint64_t> monic_offsets(uint32_t q, int D) {
    std::vector<uint64_t> off(static_cast<size_t>(D) + 2, 0);
    for (int n = 0; n <= D; ++n)
        off[static_cast<size_t>(n) + 1] = off[static_cast<size_t>(n)] + static_cast<uint64_t>(ipow(q, static_cast<uint64_t>(n)));
    return off;
}

// chi_F on all monic f over F_q of degree <= D, as exponent table
// (-1 encodes the zero value)
class CharTable {
public:
    CharTable(const FieldTower& T, const CubicChar& chi, int D) : T_(&T), chi_(chi), D_(D) {
        off_ = monic_offsets(T.Fq.q, D);
        exp_.assign(off_.back(), 0);
        std::vector<std::shared_ptr<const detail::ResidueCtx>> ctx;
        for (const auto& P : chi.primes) ctx.push_back(detail::residue_ctx_cached(T, P));

        const uint32_t q = T.Fq.q;
        std::vector<std::vector<uint32_t>> prev(ctx.size()), cur(ctx.size());
        // degree 0: f = 1
        for (size_t c = 0; c < ctx.size(); ++c) prev[c] = {1};
        accumulate_degree(ctx, prev, 0);
        for (int n = 1; n <= D; ++n) {
            uint64_t cnt = off_[static_cast<size_t>(n) + 1] - off_[static_cast<size_t>(n)];
            for (size_t c = 0; c < ctx.size(); ++c) {
                cur[c].resize(cnt);
                const auto& R = *ctx[c];
                for (uint64_t k = 0; k < cnt; ++k) {
                    uint32_t shifted = R.shiftmul[prev[c][k / q]];
                    cur[c][k] = static_cast<uint32_t>(R.add_const(shifted, T.lift[k % q], T.Fq2));
                }
            }
            std::swap(prev, cur);
            accumulate_degree(ctx, prev, n);
        }
    }

    int max_degree() const { return D_; }
    const CubicChar& character() const { return chi_; }

    // exponent of chi(f) for the monic f with degree n and in-degree index k
    int exp_at(int n, uint64_t k) const {
        return exp_[off_[static_cast<size_t>(n)] + k];
    }
    CharValue value_at(int n, uint64_t k) const {
        int e = exp_at(n, k);
        return e < 0 ? CharValue::zero_value() : CharValue::root(e);
    }
    CharValue value_of(const Poly& f_over_Fq) const {
        if (!is_monic(f_over_Fq) || f_over_Fq.deg() > D_)
            throw std::invalid_argument("CharTable: f out of range");
        return value_at(f_over_Fq.deg(), monic_index(T_->Fq.q, f_over_Fq));
    }

private:
    void accumulate_degree(const std::vector<std::shared_ptr<const detail::ResidueCtx>>& ctx,
                           const std::vector<std::vector<uint32_t>>& res, int n) {
        uint64_t base = off_[static_cast<size_t>(n)];
        uint64_t cnt = off_[static_cast<size_t>(n) + 1] - base;
        for (uint64_t k = 0; k < cnt; ++k) {
            int e = 0;
            bool zero = false;
            for (size_t c = 0; c < ctx.size(); ++c) {
                uint8_t s = ctx[c]->symexp[res[c][k]];
                if (s == 3) {
                    zero = true;
                    break;
                }
                e += chi_.exps[c] * s;
            }
            exp_[base + k] = zero ? int8_t(-1) : int8_t(e % 3);
        }
    }

    const FieldTower* T_;
    CubicChar chi_;
    int D_;
    std::vector<uint64_t> off_;
    std::vector<int8_t> exp_;
};

}  // namespace cubicmoments
