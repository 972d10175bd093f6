#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

#include "lattheta/errors.hpp"

namespace lattheta {

// All exact scalars in this library are GMP-backed.
using BigInt = mpz_class;
using BigRat = mpq_class;

inline BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline BigInt abs(const BigInt& a) {
    BigInt r;
    mpz_abs(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

inline BigInt pow(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

// Floor of sqrt(n); n must be nonnegative.
inline BigInt isqrt(const BigInt& n) {
    if (n < 0) throw PreconditionViolation("isqrt of a negative number");
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_perfect_square(const BigInt& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline bool is_probable_prime(const BigInt& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

// Largest k with p^k | n; n must be nonzero, p > 1.
inline long valuation(const BigInt& n, const BigInt& p) {
    if (n == 0) throw PreconditionViolation("valuation of zero");
    if (p <= 1) throw PreconditionViolation("valuation at a non-prime base");
    BigInt m = abs(n);
    long v = 0;
    BigInt q, r;
    for (;;) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        if (r != 0) return v;
        m = q;
        ++v;
    }
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline BigInt ceil_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// Representative of a mod m in [0, m); m must be positive.
inline BigInt mod_reduce(const BigInt& a, const BigInt& m) {
    if (m <= 0) throw PreconditionViolation("mod_reduce needs a positive modulus");
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Canonicalized fraction; the raw two-argument mpq_class constructor keeps
// num/den as given, so every fraction literal must go through here.
inline BigRat make_rat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw PreconditionViolation("fraction with zero denominator");
    BigRat q(num, den);
    q.canonicalize();
    return q;
}

inline const BigInt& numerator(const BigRat& q) { return q.get_num(); }
inline const BigInt& denominator(const BigRat& q) { return q.get_den(); }

inline bool is_integer(const BigRat& q) { return q.get_den() == 1; }

inline BigInt floor(const BigRat& q) { return floor_div(q.get_num(), q.get_den()); }
inline BigInt ceil(const BigRat& q) { return ceil_div(q.get_num(), q.get_den()); }

// Fractional part in [0, 1).
inline BigRat frac(const BigRat& q) {
    BigRat f = q - BigRat(floor(q));
    f.canonicalize();
    return f;
}

// Valuation of a nonzero rational at a prime p (may be negative).
inline long valuation(const BigRat& q, const BigInt& p) {
    if (q == 0) throw PreconditionViolation("valuation of zero");
    return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

// Trial-division factorization, smallest prime first; n must be positive.
inline std::vector<std::pair<BigInt, int>> factorize(const BigInt& n) {
    if (n <= 0) throw PreconditionViolation("factorize needs a positive integer");
    std::vector<std::pair<BigInt, int>> out;
    BigInt m = n;
    auto strip = [&](const BigInt& p) {
        int e = 0;
        while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
            m /= p;
            ++e;
        }
        if (e > 0) out.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    BigInt p = 5;
    while (p * p <= m) {
        strip(p);
        strip(p + 2);
        p += 6;
    }
    if (m > 1) out.emplace_back(m, 1);
    return out;
}

// ---- Machine-word arithmetic mod a small prime (p < 2^32). ----

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e > 0) {
        if (e & 1) r = mulmod_u64(r, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return r;
}

// Inverse of a mod prime p; a must be nonzero mod p.
inline std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) throw PreconditionViolation("inverse of zero mod p");
    return powmod_u64(a, p - 2, p);
}

inline std::uint64_t to_u64_mod(const BigInt& a, std::uint64_t p) {
    BigInt r = mod_reduce(a, BigInt(static_cast<unsigned long>(p)));
    return static_cast<std::uint64_t>(r.get_ui());
}

// Reduce a rational with denominator coprime to p; throws when p divides the denominator.
inline std::uint64_t to_u64_mod(const BigRat& q, std::uint64_t p) {
    std::uint64_t den = to_u64_mod(q.get_den(), p);
    if (den == 0) throw PreconditionViolation("rational is not integral at p");
    return mulmod_u64(to_u64_mod(q.get_num(), p), invmod_u64(den, p), p);
}

} // namespace lattheta
