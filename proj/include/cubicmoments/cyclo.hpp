#pragma once

// Exact arithmetic in the two value rings:
//   CycloNumber  = Q(zeta_p, omega), reduced basis zeta_p^i * omega^j with
//                  0 <= i <= p-2, j in {0,1}  (dimension 2(p-1))
//   QuadExtNumber = Q(omega)[s]/(s^2 - 1/q), basis {1, omega, s, omega*s}
// Reduction uses 1 + omega + omega^2 = 0 and sum_{i<p} zeta_p^i = 0.
// Both are canonical: equality of coefficient vectors is equality of values.

#include "numeric.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace cubicmoments {

class CycloNumber {
public:
    CycloNumber() : p_(0) {}
    explicit CycloNumber(int64_t p) : p_(p), c_(2 * (p - 1)) {}

    static CycloNumber from_rat(int64_t p, const Rat& r) {
        CycloNumber x(p);
        x.c_[0] = r;
        return x;
    }
    // zeta_p^i * omega^j, arbitrary i mod p and j mod 3
    static CycloNumber root(int64_t p, int64_t i, int64_t j, const Rat& coeff = 1) {
        CycloNumber x(p);
        x.accumulate(i, j, coeff);
        return x;
    }

    int64_t p() const { return p_; }
    bool is_zero() const {
        for (const auto& v : c_)
            if (v != 0) return false;
        return true;
    }
    const Rat& coeff(int64_t i, int64_t j) const { return c_[idx(i, j)]; }

    // accumulate coeff * zeta^i * omega^j, reducing to the basis
    void accumulate(int64_t i, int64_t j, const Rat& coeff) {
        if (coeff == 0) return;
        i %= p_;
        if (i < 0) i += p_;
        j %= 3;
        if (j < 0) j += 3;
        if (j == 2) {  // omega^2 = -1 - omega
            accumulate_zeta(i, 0, -coeff);
            accumulate_zeta(i, 1, -coeff);
        } else {
            accumulate_zeta(i, j, coeff);
        }
    }

    CycloNumber& operator+=(const CycloNumber& o) {
        check(o);
        for (size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    CycloNumber& operator-=(const CycloNumber& o) {
        check(o);
        for (size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    friend CycloNumber operator+(CycloNumber a, const CycloNumber& b) { return a += b; }
    friend CycloNumber operator-(CycloNumber a, const CycloNumber& b) { return a -= b; }

    friend CycloNumber operator*(const CycloNumber& a, const CycloNumber& b) {
        a.check(b);
        CycloNumber r(a.p_);
        for (int64_t i1 = 0; i1 <= a.p_ - 2; ++i1)
            for (int64_t j1 = 0; j1 <= 1; ++j1) {
                const Rat& x = a.c_[a.idx(i1, j1)];
                if (x == 0) continue;
                for (int64_t i2 = 0; i2 <= a.p_ - 2; ++i2)
                    for (int64_t j2 = 0; j2 <= 1; ++j2) {
                        const Rat& y = b.c_[b.idx(i2, j2)];
                        if (y == 0) continue;
                        r.accumulate(i1 + i2, j1 + j2, x * y);
                    }
            }
        return r;
    }
    CycloNumber& operator*=(const CycloNumber& o) { return *this = *this * o; }

    CycloNumber scaled(const Rat& r) const {
        CycloNumber x = *this;
        for (auto& v : x.c_) v *= r;
        return x;
    }

    // complex conjugation: zeta_p -> zeta_p^{-1}, omega -> omega^2
    CycloNumber conj() const {
        CycloNumber r(p_);
        for (int64_t i = 0; i <= p_ - 2; ++i)
            for (int64_t j = 0; j <= 1; ++j) {
                const Rat& v = c_[idx(i, j)];
                if (v != 0) r.accumulate(-i, -j, v);
            }
        return r;
    }

    bool operator==(const CycloNumber& o) const { return p_ == o.p_ && c_ == o.c_; }
    bool operator!=(const CycloNumber& o) const { return !(*this == o); }

    // true iff the value lies in Q(omega); extracts the two coordinates.
    // In the reduced basis that is exactly: no zeta^i component with i > 0.
    bool omega_part(Rat& re, Rat& omc) const {
        for (int64_t i = 1; i <= p_ - 2; ++i)
            for (int64_t j = 0; j <= 1; ++j)
                if (c_[idx(i, j)] != 0) return false;
        re = c_[idx(0, 0)];
        omc = c_[idx(0, 1)];
        return true;
    }

    std::complex<double> to_complex() const {
        const double pi = 3.14159265358979323846;
        std::complex<double> z(0.0, 0.0);
        std::complex<double> om = std::polar(1.0, 2 * pi / 3);
        for (int64_t i = 0; i <= p_ - 2; ++i)
            for (int64_t j = 0; j <= 1; ++j) {
                const Rat& v = c_[idx(i, j)];
                if (v == 0) continue;
                z += rat_double(v) * std::polar(1.0, 2 * pi * double(i) / double(p_)) *
                     (j ? om : std::complex<double>(1.0));
            }
        return z;
    }

    const std::vector<Rat>& coeffs() const { return c_; }

private:
    size_t idx(int64_t i, int64_t j) const { return static_cast<size_t>(2 * i + j); }
    void check(const CycloNumber& o) const {
        if (p_ != o.p_) throw std::invalid_argument("CycloNumber: mismatched characteristic p");
    }
    void accumulate_zeta(int64_t i, int64_t j, const Rat& coeff) {
        if (i == p_ - 1) {  // zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2})
            for (int64_t k = 0; k <= p_ - 2; ++k) c_[idx(k, j)] -= coeff;
        } else {
            c_[idx(i, j)] += coeff;
        }
    }

    int64_t p_;
    std::vector<Rat> c_;
};

// Bucket accumulator for huge exponential sums: counts per (zeta-power,
// omega-power), materialized into a CycloNumber once at the end.
class CycloBuckets {
public:
    CycloBuckets(int64_t p) : p_(p), n_(p * 3, 0) {}
    void add(int64_t zexp, int64_t oexp, int64_t count = 1) {
        n_[static_cast<size_t>(3 * (zexp % p_) + (oexp % 3))] += count;
    }
    CycloNumber value() const {
        CycloNumber v(p_);
        for (int64_t i = 0; i < p_; ++i)
            for (int64_t j = 0; j < 3; ++j) {
                int64_t c = n_[static_cast<size_t>(3 * i + j)];
                if (c) v.accumulate(i, j, Rat(c));
            }
        return v;
    }

private:
    int64_t p_;
    std::vector<int64_t> n_;
};

class QuadExtNumber {
public:
    QuadExtNumber() : q_(0) {}
    explicit QuadExtNumber(int64_t q, Rat a = 0, Rat b = 0, Rat c = 0, Rat d = 0)
        : q_(q), c_{std::move(a), std::move(b), std::move(c), std::move(d)} {}

    static QuadExtNumber omega_pow(int64_t q, int64_t j, const Rat& scale = 1) {
        j %= 3;
        if (j < 0) j += 3;
        if (j == 0) return QuadExtNumber(q, scale);
        if (j == 1) return QuadExtNumber(q, 0, scale);
        return QuadExtNumber(q, -scale, -scale);  // omega^2 = -1-omega
    }
    // s^n with s = q^{-1/2}
    static QuadExtNumber s_pow(int64_t q, int64_t n) {
        if (n < 0) throw std::domain_error("s_pow: negative exponent");
        Rat qp = rat_pow(Rat(1, q), n / 2);
        if (n % 2 == 0) return QuadExtNumber(q, qp);
        return QuadExtNumber(q, 0, 0, qp);
    }

    int64_t q() const { return q_; }
    const Rat& a() const { return c_[0]; }
    const Rat& b() const { return c_[1]; }
    const Rat& c() const { return c_[2]; }
    const Rat& d() const { return c_[3]; }
    const std::array<Rat, 4>& coeffs() const { return c_; }

    bool is_zero() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }

    QuadExtNumber& operator+=(const QuadExtNumber& o) {
        check(o);
        for (int k = 0; k < 4; ++k) c_[k] += o.c_[k];
        return *this;
    }
    QuadExtNumber& operator-=(const QuadExtNumber& o) {
        check(o);
        for (int k = 0; k < 4; ++k) c_[k] -= o.c_[k];
        return *this;
    }
    friend QuadExtNumber operator+(QuadExtNumber a, const QuadExtNumber& b) { return a += b; }
    friend QuadExtNumber operator-(QuadExtNumber a, const QuadExtNumber& b) { return a -= b; }
    QuadExtNumber operator-() const { return QuadExtNumber(q_, -c_[0], -c_[1], -c_[2], -c_[3]); }

    friend QuadExtNumber operator*(const QuadExtNumber& x, const QuadExtNumber& y) {
        x.check(y);
        // split into omega-parts: x = X0 + X1 s with Xi in Q(omega)
        auto wmul = [](const Rat& p1, const Rat& q1, const Rat& p2, const Rat& q2) {
            // (p1 + q1 w)(p2 + q2 w), w^2 = -1-w
            return std::pair<Rat, Rat>(p1 * p2 - q1 * q2, p1 * q2 + q1 * p2 - q1 * q2);
        };
        auto [A, B] = wmul(x.c_[0], x.c_[1], y.c_[0], y.c_[1]);
        auto [C1, D1] = wmul(x.c_[0], x.c_[1], y.c_[2], y.c_[3]);
        auto [C2, D2] = wmul(x.c_[2], x.c_[3], y.c_[0], y.c_[1]);
        auto [E, F] = wmul(x.c_[2], x.c_[3], y.c_[2], y.c_[3]);
        Rat invq(1, x.q_);
        return QuadExtNumber(x.q_, A + invq * E, B + invq * F, C1 + C2, D1 + D2);
    }
    QuadExtNumber& operator*=(const QuadExtNumber& o) { return *this = *this * o; }

    QuadExtNumber scaled(const Rat& r) const {
        return QuadExtNumber(q_, c_[0] * r, c_[1] * r, c_[2] * r, c_[3] * r);
    }

    // complex conjugation fixes s, sends omega -> omega^2
    QuadExtNumber conj() const {
        return QuadExtNumber(q_, c_[0] - c_[1], -c_[1], c_[2] - c_[3], -c_[3]);
    }
    bool is_real() const { return conj() == *this; }

    QuadExtNumber pow(uint64_t e) const {
        QuadExtNumber r(q_, 1), b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    bool operator==(const QuadExtNumber& o) const { return q_ == o.q_ && c_ == o.c_; }
    bool operator!=(const QuadExtNumber& o) const { return !(*this == o); }

    std::complex<double> to_complex() const {
        const double pi = 3.14159265358979323846;
        std::complex<double> om = std::polar(1.0, 2 * pi / 3);
        double s = 1.0 / std::sqrt(double(q_));
        return rat_double(c_[0]) + rat_double(c_[1]) * om + s * (rat_double(c_[2]) + rat_double(c_[3]) * om);
    }

private:
    void check(const QuadExtNumber& o) const {
        if (q_ != o.q_) throw std::invalid_argument("QuadExtNumber: mismatched q");
    }

    int64_t q_;
    std::array<Rat, 4> c_;
};

// embed a Q(omega)-valued CycloNumber into the QuadExt ring (throws if the
// value has nonzero zeta_p-components)
inline QuadExtNumber cyclo_to_quadext(const CycloNumber& x, int64_t q) {
    Rat re, om;
    if (!x.omega_part(re, om)) throw std::domain_error("cyclo_to_quadext: value not in Q(omega)");
    return QuadExtNumber(q, re, om);
}

}  // namespace cubicmoments
