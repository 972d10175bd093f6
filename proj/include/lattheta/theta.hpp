#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "lattheta/discriminant.hpp"
#include "lattheta/lattice.hpp"
#include "lattheta/qseries.hpp"

namespace lattheta {

struct ThetaOptions {
    int threads = 1;              // result is identical for every thread count
    double budget = 1e9;          // advisory bound on the estimated point count
    bool override_budget = false; // enumerate anyway when the estimate is too big
};

namespace enumdetail {

// Fraction-free LDL^T data for a symmetric positive definite integer matrix:
//   x^T A x = sum_k (m_{k+1}/m_k) * (x_k + c_k)^2,
//   c_k = (sum_{j>k} row[k][j] * x_j) / m_{k+1},
// where m_k is the k-th leading principal minor (m_0 = 1) and row[k][j] is the
// Bareiss-scaled Schur complement row kept exactly in integers.
struct Ladder {
    int n = 0;
    std::vector<BigInt> minors;        // m_0 .. m_n
    std::vector<std::vector<BigInt>> row; // row[k][j] for j in (k, n)
    BigInt delta;                      // lcm_k of m_k * m_{k+1}
    std::vector<BigInt> kfac;          // delta / (m_k * m_{k+1})
};

inline Ladder build_ladder(const IntMatrix& a) {
    const int n = a.rows;
    Ladder l;
    l.n = n;
    l.minors.assign(static_cast<std::size_t>(n) + 1, BigInt(1));
    l.row.resize(n);
    IntMatrix w = a;
    BigInt prev = 1;
    for (int k = 0; k < n; ++k) {
        if (w(k, k) <= 0) throw NotPositiveDefinite();
        l.minors[k + 1] = w(k, k);
        l.row[k].assign(static_cast<std::size_t>(n - k - 1), BigInt(0));
        for (int j = k + 1; j < n; ++j) l.row[k][j - k - 1] = w(k, j);
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                BigInt num = w(k, k) * w(i, j) - w(i, k) * w(k, j);
                mpz_divexact(w(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
        prev = w(k, k);
    }
    l.delta = 1;
    for (int k = 0; k < n; ++k) l.delta = lcm(l.delta, l.minors[k] * l.minors[k + 1]);
    l.kfac.resize(n);
    for (int k = 0; k < n; ++k) {
        BigInt prod = l.minors[k] * l.minors[k + 1];
        mpz_divexact(l.kfac[k].get_mpz_t(), l.delta.get_mpz_t(), prod.get_mpz_t());
    }
    return l;
}

using I128 = __int128;

inline I128 i128_abs(I128 v) { return v < 0 ? -v : v; }

inline I128 i128_floor_div(I128 a, I128 b) {
    I128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline I128 i128_ceil_div(I128 a, I128 b) {
    I128 q = a / b;
    if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
    return q;
}

// Exact floor of sqrt for nonnegative arguments below 2^126.
inline I128 i128_isqrt(I128 v) {
    if (v < 0) throw InternalInconsistency("isqrt of a negative value");
    if (v == 0) return 0;
    long double approx = sqrtl(static_cast<long double>(v));
    I128 s = static_cast<I128>(approx);
    while (s > 0 && s * s > v) --s;
    while ((s + 1) * (s + 1) <= v) ++s;
    return s;
}

inline BigInt i128_to_bigint(I128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    BigInt hi(static_cast<unsigned long>(u >> 64));
    BigInt lo(static_cast<unsigned long>(u & 0xffffffffffffffffULL));
    BigInt r = (hi << 64) + lo;
    return neg ? BigInt(-r) : r;
}

// Caller guarantees the value fits.
inline I128 bigint_to_i128(const BigInt& v) {
    BigInt m = abs(v);
    unsigned long lo = mpz_get_ui(BigInt(m & BigInt("18446744073709551615")).get_mpz_t());
    unsigned long hi = mpz_get_ui(BigInt(m >> 64).get_mpz_t());
    I128 r = (static_cast<I128>(hi) << 64) | static_cast<I128>(lo);
    return v < 0 ? -r : r;
}

template <class Z> struct Ops;

template <> struct Ops<I128> {
    static I128 from(const BigInt& v) { return bigint_to_i128(v); }
    static std::uint64_t to_index(I128 v) { return static_cast<std::uint64_t>(v); }
    static I128 floor_div(I128 a, I128 b) { return i128_floor_div(a, b); }
    static I128 ceil_div(I128 a, I128 b) { return i128_ceil_div(a, b); }
    static I128 isqrt(I128 v) { return i128_isqrt(v); }
};

template <> struct Ops<BigInt> {
    static BigInt from(const BigInt& v) { return v; }
    static std::uint64_t to_index(const BigInt& v) { return mpz_get_ui(v.get_mpz_t()); }
    static BigInt floor_div(const BigInt& a, const BigInt& b) { return lattheta::floor_div(a, b); }
    static BigInt ceil_div(const BigInt& a, const BigInt& b) { return lattheta::ceil_div(a, b); }
    static BigInt isqrt(const BigInt& v) { return lattheta::isqrt(v); }
};

// Exact depth-first enumeration of y = sigma*x + t over x in Z^n with
// y^T A y <= sigma^2 * bound, accumulating counts per scaled value
// W = y^T A y (so W = sigma^2 * u^T A u for u = x + t/sigma).
//
// Levels run from n-1 (outermost) to 0.  The remaining budget is kept as the
// integer R = delta * (sigma^2 * bound - consumed); level k admits y_k exactly
// when kfac[k] * S_k^2 <= R with S_k = m_{k+1} y_k + sum_{j>k} row[k][j] y_j.
template <class Z>
struct Engine {
    int n;
    Z sigma;
    std::vector<Z> mval;               // m_{k+1}
    std::vector<std::vector<Z>> row;   // scaled Schur rows
    std::vector<Z> kfac;
    std::vector<Z> tres;               // shift numerators, 0 <= t_k < sigma
    Z delta;
    bool half;                         // exploit y -> -y symmetry (t = 0 only)
    std::vector<std::uint64_t>* counts = nullptr;
    std::vector<Z> y;

    void run(Z r0, int top_from, int top_step) {
        y.assign(static_cast<std::size_t>(n), Z(0));
        if (n == 0) {
            record(r0, r0, true);
            return;
        }
        descend(n - 1, r0, r0, true, top_from, top_step);
    }

    void record(Z r0, Z r, bool all_zero) {
        Z used = r0 - r;
        Z w = used / delta;
        internal_check(w * delta == used, "scaled value must be divisible by the ladder lcm");
        std::uint64_t idx = Ops<Z>::to_index(w);
        if (!half)
            (*counts)[idx] += 1;
        else
            (*counts)[idx] += all_zero ? 1 : 2;
    }

    void descend(int k, Z r0, Z r, bool all_zero, int top_from, int top_step) {
        // Center contribution of the fixed outer coordinates.
        Z c(0);
        const auto& rw = row[k];
        for (int j = k + 1; j < n; ++j) {
            const Z& yj = y[j];
            if (yj != 0) c += rw[j - k - 1] * yj;
        }
        Z t = Ops<Z>::floor_div(r, kfac[k]);
        Z s = Ops<Z>::isqrt(t);
        // m_{k+1} y_k + c in [-s, s], y_k == tres_k (mod sigma)
        Z lo = Ops<Z>::ceil_div(-s - c, mval[k]);
        Z hi = Ops<Z>::floor_div(s - c, mval[k]);
        if (half && all_zero && lo < 0) lo = 0;
        // First y >= lo congruent to tres_k mod sigma.
        Z rem = lo % sigma;
        if (rem < 0) rem += sigma;
        Z shift = tres[k] - rem;
        if (tres[k] < rem) shift += sigma;
        Z yk = lo + shift;
        bool is_top = (k == n - 1);
        if (is_top && top_step > 1) yk += sigma * Z(top_from);
        Z step = is_top && top_step > 1 ? sigma * Z(top_step) : sigma;
        for (; yk <= hi; yk += step) {
            Z sk = mval[k] * yk + c;
            Z term = kfac[k] * sk * sk;
            internal_check(term <= r, "range bound admitted an out-of-budget point");
            y[k] = yk;
            bool az = all_zero && yk == 0;
            if (k == 0)
                record(r0, r - term, az);
            else
                descend(k - 1, r0, r - term, az, top_from, top_step);
        }
        y[k] = Z(0);
    }
};

// Worst-case magnitude bounds deciding whether the 128-bit engine is safe.
struct CoreProblem {
    IntMatrix a;
    BigInt bound;               // value bound on u^T A u (before sigma scaling)
    std::vector<BigInt> tnum;   // shift numerators in [0, sigma)
    BigInt sigma;
    bool half = false;
    int threads = 1;
};

inline std::vector<std::uint64_t> core_counts(const CoreProblem& p) {
    const int n = p.a.rows;
    Ladder lad = build_ladder(p.a);
    BigInt s2b = p.sigma * p.sigma * p.bound;
    BigInt wmax = s2b;
    if (wmax > 50000000) throw PreconditionViolation("scaled value range is too large to tabulate");
    std::vector<std::uint64_t> totals(static_cast<std::size_t>(wmax.get_ui()) + 1, 0);
    if (n == 0) {
        totals[0] = 1;
        return totals;
    }

    // Coordinate bounds: y_j^2 <= sigma^2 * bound * (A^-1)_{jj}.
    RatMatrix inv = rational_inverse(p.a);
    std::vector<BigInt> ybound(n);
    for (int j = 0; j < n; ++j) {
        BigRat q = BigRat(s2b) * inv(j, j);
        ybound[j] = isqrt(floor(q)) + 1;
    }
    BigInt r0 = lad.delta * s2b;
    BigInt maxmag = r0;
    for (int k = 0; k < n; ++k) {
        BigInt cb = 0;
        for (int j = k + 1; j < n; ++j) cb += abs(lad.row[k][j - k - 1]) * ybound[j];
        BigInt sb = lad.minors[k + 1] * ybound[k] + cb + abs(lad.minors[k + 1]) * p.sigma;
        BigInt term = lad.kfac[k] * sb * sb;
        if (term > maxmag) maxmag = term;
    }
    bool fits_i128 = mpz_sizeinbase(maxmag.get_mpz_t(), 2) <= 120;

    auto run_engine = [&](auto zero, int from, int stride, std::vector<std::uint64_t>& out) {
        using Z = decltype(zero);
        Engine<Z> e;
        e.n = n;
        e.sigma = Ops<Z>::from(p.sigma);
        e.delta = Ops<Z>::from(lad.delta);
        e.half = p.half;
        e.mval.resize(n);
        e.kfac.resize(n);
        e.tres.resize(n);
        e.row.resize(n);
        for (int k = 0; k < n; ++k) {
            e.mval[k] = Ops<Z>::from(lad.minors[k + 1]);
            e.kfac[k] = Ops<Z>::from(lad.kfac[k]);
            e.tres[k] = Ops<Z>::from(p.tnum[k]);
            e.row[k].resize(lad.row[k].size());
            for (std::size_t j = 0; j < lad.row[k].size(); ++j) e.row[k][j] = Ops<Z>::from(lad.row[k][j]);
        }
        e.counts = &out;
        e.run(Ops<Z>::from(r0), from, stride);
    };

    int threads = p.threads;
    if (threads < 1) threads = 1;
    if (threads == 1) {
        if (fits_i128)
            run_engine(I128(0), 0, 1, totals);
        else
            run_engine(BigInt(0), 0, 1, totals);
        return totals;
    }

    std::vector<std::vector<std::uint64_t>> parts(
        static_cast<std::size_t>(threads),
        std::vector<std::uint64_t>(static_cast<std::size_t>(wmax.get_ui()) + 1, 0));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            if (fits_i128)
                run_engine(I128(0), w, threads, parts[static_cast<std::size_t>(w)]);
            else
                run_engine(BigInt(0), w, threads, parts[static_cast<std::size_t>(w)]);
        });
    for (auto& th : pool) th.join();
    for (const auto& part : parts)
        for (std::size_t i = 0; i < totals.size(); ++i) totals[i] += part[i];
    return totals;
}

// Gaussian-heuristic estimate of the number of points with u^T A u <= bound.
inline double estimate_points(int n, const BigInt& bound, const BigInt& det) {
    if (n == 0) return 1.0;
    double b = mpz_get_d(bound.get_mpz_t());
    double d = mpz_get_d(det.get_mpz_t());
    double log_est = 0.5 * n * std::log(3.14159265358979323846 * std::max(b, 1.0)) -
                     std::lgamma(0.5 * n + 1.0) - 0.5 * std::log(d);
    return std::exp(log_est);
}

inline void check_budget(const Lattice& lat, const BigInt& bound, const ThetaOptions& opts) {
    if (opts.override_budget) return;
    double est = estimate_points(lat.rank, bound, lat.det);
    if (est > opts.budget)
        throw PreconditionViolation("estimated enumeration size exceeds the budget; raise it to proceed");
}

} // namespace enumdetail

// Theta series coefficients r_L(0..N): r_L(m) = #{x : b(x,x) = 2m}.
inline QSeries<BigInt> theta_series(const Lattice& lat, int N, const ThetaOptions& opts = {}) {
    if (N < 0) throw PreconditionViolation("negative precision");
    QSeries<BigInt> out(N);
    out.c[0] = 1;
    if (lat.rank == 0 || N == 0) return out;
    enumdetail::check_budget(lat, BigInt(2 * N), opts);

    enumdetail::CoreProblem p;
    p.a = lat.gram;
    p.bound = 2 * N;
    p.tnum.assign(static_cast<std::size_t>(lat.rank), BigInt(0));
    p.sigma = 1;
    p.half = true;
    p.threads = opts.threads;
    auto counts = enumdetail::core_counts(p);
    for (std::size_t w = 0; w < counts.size(); ++w) {
        if (counts[w] == 0) continue;
        internal_check(w % 2 == 0, "even lattice produced an odd value");
        out.c[w / 2] = BigInt(static_cast<unsigned long>(counts[w]));
    }
    internal_check(out.c[0] == 1, "zero vector must be counted exactly once");
    return out;
}

// Independent oracle: direct box scan, exact Gram evaluation, no ladder.
inline QSeries<BigInt> brute_force_counts(const Lattice& lat, int N) {
    if (N < 0) throw PreconditionViolation("negative precision");
    if (lat.rank > 6) throw PreconditionViolation("brute_force_counts is limited to rank 6");
    QSeries<BigInt> out(N);
    out.c[0] = 1;
    if (lat.rank == 0 || N == 0) return out;
    const int n = lat.rank;
    RatMatrix inv = rational_inverse(lat.gram);
    std::vector<long> lo(n), hi(n), x(n);
    for (int j = 0; j < n; ++j) {
        BigRat q = BigRat(2 * N) * inv(j, j);
        long b = static_cast<long>(isqrt(floor(q)).get_si()) + 1;
        lo[j] = -b;
        hi[j] = b;
        x[j] = lo[j];
    }
    std::vector<BigInt> xv(n);
    for (;;) {
        for (int j = 0; j < n; ++j) xv[j] = x[j];
        BigInt v = bilinear(lat, xv, xv);
        if (v <= 2 * N && v > 0) {
            internal_check(mod_reduce(v, 2) == 0, "even lattice produced an odd value");
            out.c[mpz_get_ui(BigInt(v / 2).get_mpz_t())] += 1;
        }
        int j = n - 1;
        while (j >= 0 && x[j] == hi[j]) {
            x[j] = lo[j];
            --j;
        }
        if (j < 0) break;
        ++x[j];
    }
    return out;
}

// One representative per antipodal pair {x, -x} of nonzero integer vectors
// with x^T A x <= bound, sorted by value (ties keep enumeration order).  The
// representative has its highest-index nonzero coordinate positive.  A must be
// symmetric positive definite; evenness is not required.
struct ShortVector {
    std::vector<BigInt> coords;
    BigInt value; // x^T A x
};

inline std::vector<ShortVector> short_vectors(const IntMatrix& a, const BigInt& bound) {
    if (!is_symmetric(a)) throw NotSymmetric();
    std::vector<ShortVector> out;
    const int n = a.rows;
    if (n == 0 || bound < 1) return out;
    enumdetail::Ladder lad = enumdetail::build_ladder(a);
    BigInt r0 = lad.delta * bound;
    std::vector<BigInt> y(static_cast<std::size_t>(n), BigInt(0));
    auto descend = [&](auto&& self, int k, const BigInt& r, bool all_zero) -> void {
        BigInt c = 0;
        for (int j = k + 1; j < n; ++j)
            if (y[static_cast<std::size_t>(j)] != 0)
                c += lad.row[static_cast<std::size_t>(k)][static_cast<std::size_t>(j - k - 1)] *
                     y[static_cast<std::size_t>(j)];
        const BigInt& m = lad.minors[static_cast<std::size_t>(k) + 1];
        BigInt s = isqrt(floor_div(r, lad.kfac[static_cast<std::size_t>(k)]));
        BigInt lo = ceil_div(-s - c, m);
        BigInt hi = floor_div(s - c, m);
        if (all_zero && lo < 0) lo = 0;
        for (BigInt yk = lo; yk <= hi; yk += 1) {
            BigInt sk = m * yk + c;
            BigInt term = lad.kfac[static_cast<std::size_t>(k)] * sk * sk;
            internal_check(term <= r, "range bound admitted an out-of-budget point");
            y[static_cast<std::size_t>(k)] = yk;
            bool az = all_zero && yk == 0;
            if (k == 0) {
                if (!az) {
                    BigInt used = r0 - (r - term);
                    BigInt v = used / lad.delta;
                    internal_check(v * lad.delta == used, "scaled value must be divisible by the ladder lcm");
                    out.push_back({y, v});
                }
            } else {
                self(self, k - 1, r - term, az);
            }
        }
        y[static_cast<std::size_t>(k)] = 0;
    };
    descend(descend, n - 1, r0, true);
    std::stable_sort(out.begin(), out.end(),
                     [](const ShortVector& l, const ShortVector& r) { return l.value < r.value; });
    return out;
}

// Theta series of the coset rho + L for an isotropic rho in Det(L):
// coefficients of q^m with m = b(x,x)/2 over x in rho + L.
inline QSeries<BigInt> coset_theta(const Lattice& lat, const DiscriminantGroup& group,
                                   const DiscElement& rho, int N, const ThetaOptions& opts = {}) {
    if (N < 0) throw PreconditionViolation("negative precision");
    if (group.qbar(rho) != 0)
        throw PreconditionViolation("coset_theta needs an isotropic coset");
    QSeries<BigInt> out(N);
    if (lat.rank == 0) {
        out.c[0] = 1;
        return out;
    }
    enumdetail::check_budget(lat, BigInt(2 * N), opts);

    std::vector<BigRat> v = group.rational_representative(rho);
    BigInt sigma = 1;
    for (const auto& q : v) sigma = lcm(sigma, denominator(q));
    bool zero_coset = true;
    enumdetail::CoreProblem p;
    p.a = lat.gram;
    p.bound = 2 * N;
    p.sigma = sigma;
    p.tnum.resize(static_cast<std::size_t>(lat.rank));
    for (int i = 0; i < lat.rank; ++i) {
        BigRat scaled = BigRat(sigma) * v[static_cast<std::size_t>(i)];
        internal_check(is_integer(scaled), "shift must clear the common denominator");
        p.tnum[static_cast<std::size_t>(i)] = numerator(scaled);
        if (p.tnum[static_cast<std::size_t>(i)] != 0) zero_coset = false;
    }
    p.half = zero_coset;
    p.threads = opts.threads;
    auto counts = enumdetail::core_counts(p);
    BigInt s2 = sigma * sigma;
    unsigned long s2u = s2.get_ui();
    for (std::size_t w = 0; w < counts.size(); ++w) {
        if (counts[w] == 0) continue;
        internal_check(w % (2 * s2u) == 0, "isotropic coset produced a non-integral exponent");
        out.c[w / (2 * s2u)] += BigInt(static_cast<unsigned long>(counts[w]));
    }
    return out;
}

} // namespace lattheta
