#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "lattheta/automorphism.hpp"
#include "lattheta/congruence.hpp"

namespace lattheta {

// The localization S^-1 Z of the integers at the multiplicative set S of
// nonzero integers whose prime factors p satisfy p != ell and p != -1 mod ell.
struct Localization {
    std::uint64_t ell;

    bool admits_prime(const BigInt& p) const {
        return p != BigInt(ell) && mod_reduce(p, BigInt(ell)) != BigInt(ell - 1);
    }
    bool in_multiplicative_set(const BigInt& n) const {
        if (n == 0) return false;
        for (const auto& [p, e] : factorize(abs(n)))
            if (!admits_prime(p)) return false;
        return true;
    }
    // x lies in the ring S^-1 Z.
    bool contains(const BigRat& x) const { return in_multiplicative_set(denominator(x)); }
    // x is invertible in S^-1 Z.
    bool is_unit(const BigRat& x) const {
        return x != 0 && in_multiplicative_set(numerator(abs(x)));
    }
};

inline Localization make_localization(std::uint64_t ell) {
    require_admissible_prime(BigInt(ell));
    return Localization{ell};
}

// A value of a binary quadratic form all of whose prime factors stay away
// from 0 and -1 mod ell, together with the witnessing argument pair.
struct AdmissibleValue {
    BigInt x, y, value;
    std::vector<std::pair<BigInt, int>> factorization;
};

// Finds integers (x, y) with Q(x, y) divisible only by primes p != 0, -1
// mod ell.  Scans boxes of doubling radius in a fixed order: y then x
// ascending from zero, each with sign patterns (+,+), (-,+), (+,-), (-,-).
// Existence is guaranteed for ell >= 5; the radius cap is a search budget,
// not a nonexistence claim.
inline AdmissibleValue represent_admissible(const BinaryForm& q, std::uint64_t ell,
                                            long max_radius = 1024) {
    if (ell < 5 || !is_probable_prime(BigInt(ell)))
        throw PreconditionViolation("admissible values are only guaranteed for primes of at least five");
    if (q.a <= 0 || q.b * q.b - 4 * q.a * q.c >= 0)
        throw PreconditionViolation("the form must be positive definite");
    if (gcd(gcd(q.a, q.b), q.c) != 1)
        throw PreconditionViolation("the form must be primitive");
    Localization loc{ell};
    const long signs[4][2] = {{1, 1}, {-1, 1}, {1, -1}, {-1, -1}};
    long prev = 0;
    for (long rad = 1; rad <= max_radius; rad *= 2) {
        for (long yy = 0; yy <= rad; ++yy)
            for (long xx = 0; xx <= rad; ++xx) {
                if (xx <= prev && yy <= prev) continue;
                for (const auto& s : signs) {
                    if (xx == 0 && s[0] < 0) continue;
                    if (yy == 0 && s[1] < 0) continue;
                    BigInt x(s[0] * xx), y(s[1] * yy);
                    BigInt v = q.a * x * x + q.b * x * y + q.c * y * y;
                    if (v <= 0) continue;
                    auto fac = factorize(v);
                    bool ok = true;
                    for (const auto& [p, e] : fac)
                        if (!loc.admits_prime(p)) {
                            ok = false;
                            break;
                        }
                    if (ok) return {std::move(x), std::move(y), std::move(v), std::move(fac)};
                }
            }
        prev = rad;
    }
    throw PreconditionViolation("admissible value search exceeded its radius budget");
}

// Orthogonal basis of S^-1 Z tensor L, normalized so that L is contained in
// the ambient lattice H spanned by the basis over Z.
struct DiagonalizedBasis {
    RatMatrix basis;           // column i: e_i in the lattice's coordinates
    RatMatrix coords;          // integral; column j: j-th lattice basis vector over the e_i
    std::vector<BigRat> norms; // b(e_i, e_i) = units[i] * ell^alphas[i]
    std::vector<BigRat> units;
    std::vector<long> alphas;
    BigInt index_in_ambient;   // [H : L]
    BigInt d;                  // d*H inside L and d*b even on H
};

namespace liftdetail {

// Minimal valuation, over the nonzero entries of a rational Gram matrix, at
// each prime outside the multiplicative set.  These generate the value ideal.
inline std::vector<std::pair<BigInt, long>> value_ideal_exponents(const RatMatrix& gram,
                                                                  const Localization& loc) {
    std::vector<BigInt> primes{BigInt(loc.ell)};
    for (const auto& e : gram.a) {
        if (e == 0) continue;
        internal_check(loc.contains(e), "Gram denominators must stay in the multiplicative set");
        for (const auto& [p, ex] : factorize(abs(numerator(e))))
            if (!loc.admits_prime(p) && std::find(primes.begin(), primes.end(), p) == primes.end())
                primes.push_back(p);
    }
    std::vector<std::pair<BigInt, long>> out;
    for (const auto& p : primes) {
        long w = -1;
        for (const auto& e : gram.a) {
            if (e == 0) continue;
            long v = valuation(e, p);
            if (w < 0 || v < w) w = v;
        }
        internal_check(w >= 0, "a positive definite form has nonzero entries");
        out.emplace_back(p, w);
    }
    return out;
}

inline bool value_admissible(const BigRat& norm, const Localization& loc,
                             const std::vector<std::pair<BigInt, long>>& ideal) {
    BigRat rest = norm;
    for (const auto& [p, w] : ideal) {
        if (valuation(norm, p) != w) return false;
        BigRat scale(1);
        for (long i = 0; i < w; ++i) scale *= BigRat(p);
        rest /= scale;
    }
    return loc.is_unit(rest) && loc.contains(rest);
}

// Candidate vectors of the scaled integral form, in shells of doubling value
// bound, each shell sorted by value.  Stops after the first shell in which
// pred accepts a vector; throws when the cap is exhausted.
template <class Pred>
inline std::vector<BigInt> first_candidate(const IntMatrix& scaled, const BigInt& cap,
                                           const Pred& pred) {
    BigInt maxdiag = 0;
    for (int i = 0; i < scaled.rows; ++i)
        if (scaled(i, i) > maxdiag) maxdiag = scaled(i, i);
    BigInt prev = 0;
    for (BigInt b = maxdiag; prev < cap; b *= 2) {
        if (b > cap) b = cap;
        for (const auto& sv : short_vectors(scaled, b)) {
            if (sv.value <= prev) continue;
            if (pred(sv)) return sv.coords;
        }
        prev = b;
    }
    return {};
}

struct PivotSearch {
    RatMatrix gram;      // current block, rational
    Localization loc;
    BigInt cap;          // admitted value bound, in the scaled integral units
    BigInt den;          // scale: scaled = den^2 * gram entrywise
    IntMatrix scaled;
};

inline PivotSearch make_pivot_search(const RatMatrix& gram, const Localization& loc,
                                     const BigInt& cap_value) {
    PivotSearch s{gram, loc, 0, 1, IntMatrix(gram.rows, gram.cols)};
    for (const auto& e : gram.a) s.den = lcm(s.den, denominator(e));
    RatMatrix scaled = BigRat(s.den * s.den) * gram;
    internal_check(is_integral(scaled), "denominator scaling must clear the Gram matrix");
    s.scaled = to_integral(scaled);
    s.cap = s.den * s.den * cap_value;
    return s;
}

inline BigRat unscaled_value(const PivotSearch& s, const BigInt& scaled_value) {
    return make_rat(scaled_value, s.den * s.den);
}

inline BigRat vector_norm(const RatMatrix& gram, const std::vector<BigInt>& x) {
    BigRat v(0);
    for (int i = 0; i < gram.rows; ++i) {
        if (x[static_cast<std::size_t>(i)] == 0) continue;
        for (int j = 0; j < gram.cols; ++j) {
            if (x[static_cast<std::size_t>(j)] == 0) continue;
            v += BigRat(x[static_cast<std::size_t>(i)]) * gram(i, j) * BigRat(x[static_cast<std::size_t>(j)]);
        }
    }
    return v;
}

// Vector whose norm generates the value ideal of the block with an admissible
// cofactor: first the direct increasing-norm scan, then the two-vector step
// (Chinese remaindering a partner and representing the spanned binary form).
inline std::vector<BigInt> find_pivot(const RatMatrix& gram, const Localization& loc,
                                      const BigInt& cap_value) {
    const int k = gram.rows;
    if (k == 1) return {BigInt(1)};
    auto ideal = value_ideal_exponents(gram, loc);
    PivotSearch s = make_pivot_search(gram, loc, cap_value);

    std::vector<BigInt> direct = first_candidate(s.scaled, s.cap, [&](const ShortVector& sv) {
        return value_admissible(unscaled_value(s, sv.value), loc, ideal);
    });
    if (!direct.empty()) return direct;

    // Two-vector step.  y: the shortest vector; its norm exceeds the ideal at
    // the primes in defect.
    std::vector<ShortVector> pool = short_vectors(s.scaled, s.cap);
    if (pool.empty()) throw PreconditionViolation("pivot candidate search exceeded its budget");
    std::vector<BigInt> y = pool.front().coords;
    BigRat ny = unscaled_value(s, pool.front().value);

    // Defect: bad primes where the norm exceeds the value ideal's exponent.
    // Primes absent from the ideal's list have exponent zero there, so any
    // bad prime left in the cofactor is a defect too.
    std::vector<std::pair<BigInt, long>> defect;
    BigRat rest = ny;
    for (const auto& [p, w] : ideal) {
        long v = valuation(ny, p);
        internal_check(v >= w, "values must lie in the value ideal");
        if (v > w) defect.emplace_back(p, w);
        BigRat scale(1);
        for (long i = 0; i < w; ++i) scale *= BigRat(p);
        rest /= scale;
    }
    for (const auto& [p, e] : factorize(abs(numerator(rest)))) {
        if (loc.admits_prime(p)) continue;
        bool tracked = false;
        for (const auto& [q, w] : ideal)
            if (q == p) {
                tracked = true;
                break;
            }
        if (!tracked) defect.emplace_back(p, 0);
    }
    internal_check(!defect.empty(), "a rejected shortest vector must exceed the ideal somewhere");

    // CRT a partner z with the complementary valuations.
    BigInt modulus = 1;
    std::vector<BigInt> z(static_cast<std::size_t>(k), BigInt(0));
    for (const auto& [p, w] : defect) {
        BigInt pw = pow(p, static_cast<unsigned long>(w) + 1);
        std::vector<BigInt> partner = first_candidate(s.scaled, s.cap, [&](const ShortVector& sv) {
            return valuation(unscaled_value(s, sv.value), p) == w;
        });
        if (partner.empty())
            throw PreconditionViolation("pivot candidate search exceeded its budget");
        // z := z mod modulus, partner mod p^(w+1).
        BigInt g, u, v;
        mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), modulus.get_mpz_t(), pw.get_mpz_t());
        internal_check(g == 1, "the CRT moduli must be coprime");
        for (int i = 0; i < k; ++i) {
            BigInt c = z[static_cast<std::size_t>(i)] * v * pw +
                       partner[static_cast<std::size_t>(i)] * u * modulus;
            z[static_cast<std::size_t>(i)] = mod_reduce(c, modulus * pw);
        }
        modulus *= pw;
    }

    // Keep z independent from y; adding multiples of the modulus preserves
    // every congruence.
    auto independent = [&](const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)] !=
                    a[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(i)])
                    return true;
        return false;
    };
    if (!independent(y, z)) {
        for (int j = 0; j < k; ++j) {
            std::vector<BigInt> cand = z;
            cand[static_cast<std::size_t>(j)] += modulus;
            if (independent(y, cand)) {
                z = std::move(cand);
                break;
            }
        }
        internal_check(independent(y, z), "a rank two block admits an independent partner");
    }

    // Binary form of the pair, cleared to a primitive integral form.
    BigRat dfull(1);
    for (const auto& [p, w] : ideal)
        for (long i = 0; i < w; ++i) dfull *= BigRat(p);
    BigRat a0 = vector_norm(gram, y) / dfull;
    BigRat c0 = vector_norm(gram, z) / dfull;
    BigRat b0(0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            b0 += BigRat(y[static_cast<std::size_t>(i)]) * gram(i, j) * BigRat(z[static_cast<std::size_t>(j)]);
    b0 = BigRat(2) * b0 / dfull;
    internal_check(loc.contains(a0) && loc.contains(b0) && loc.contains(c0),
                   "the value ideal divides the pair's values");
    BigInt e1 = lcm(lcm(denominator(a0), denominator(b0)), denominator(c0));
    BigInt qa = numerator(BigRat(e1) * a0);
    BigInt qb = numerator(BigRat(e1) * b0);
    BigInt qc = numerator(BigRat(e1) * c0);
    BigInt g = gcd(gcd(qa, qb), qc);
    internal_check(loc.in_multiplicative_set(g), "the pair's content must be a unit");
    qa /= g;
    qb /= g;
    qc /= g;
    AdmissibleValue rep = represent_admissible(BinaryForm{qa, qb, qc}, loc.ell);

    std::vector<BigInt> x(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        x[static_cast<std::size_t>(i)] =
            rep.x * y[static_cast<std::size_t>(i)] + rep.y * z[static_cast<std::size_t>(i)];
    internal_check(value_admissible(vector_norm(gram, x), loc, ideal),
                   "the represented combination must generate the value ideal");
    return x;
}

} // namespace liftdetail

// Orthogonalizes the lattice over S^-1 Z, following the inductive splitting:
// pick a vector whose norm generates the value ideal with an admissible
// cofactor, project it off, recurse.  The resulting basis is rescaled per
// direction so that L sits inside the ambient Z-span H, columns sorted by
// ell-valuation of the norm.  The unit parts must avoid inadmissible primes,
// which is automatic when the level of L is a power of ell.
inline DiagonalizedBasis diagonalize(const Lattice& lat, std::uint64_t ell,
                                     const BigInt& cap_override = BigInt(0)) {
    Localization loc = make_localization(ell);
    const int n = lat.rank;
    RatMatrix g = to_rational(lat.gram);

    BigInt maxdiv = n > 0 ? lat.divisors.back() : BigInt(1);
    RatMatrix w = to_rational(IntMatrix::identity(n)); // current block basis, n x k
    RatMatrix basis(n, n);
    std::vector<BigRat> rawnorm(static_cast<std::size_t>(n), BigRat(0));
    for (int step = 0; step < n; ++step) {
        const int k = w.cols;
        RatMatrix gm = transpose(w) * g * w;
        BigInt cap = cap_override;
        if (cap == 0) {
            BigRat maxdiag(0);
            for (int i = 0; i < k; ++i)
                if (gm(i, i) > maxdiag) maxdiag = gm(i, i);
            cap = BigInt(2) * maxdiv * ceil(maxdiag);
        }
        std::vector<BigInt> x = liftdetail::find_pivot(gm, loc, cap);
        std::vector<BigRat> v(static_cast<std::size_t>(n), BigRat(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < k; ++j)
                v[static_cast<std::size_t>(i)] += w(i, j) * BigRat(x[static_cast<std::size_t>(j)]);
        BigRat nx = liftdetail::vector_norm(gm, x);
        for (int i = 0; i < n; ++i) basis(i, step) = v[static_cast<std::size_t>(i)];
        rawnorm[static_cast<std::size_t>(step)] = nx;
        if (k == 1) break;

        // Project every block vector and take a Hermite basis of the module
        // the projections generate.  The module has rank k-1 (the pivot's own
        // projection relation removes one), and keeping all of it rather than
        // dropping a coordinate keeps every change of basis invertible over
        // the ring even when no single pivot coordinate is a unit.
        std::vector<BigRat> t(static_cast<std::size_t>(k));
        BigInt dcom = 1;
        for (int j = 0; j < k; ++j) {
            // b(v, w_j) in block coordinates.
            BigRat bj(0);
            for (int r = 0; r < k; ++r)
                if (x[static_cast<std::size_t>(r)] != 0) bj += BigRat(x[static_cast<std::size_t>(r)]) * gm(r, j);
            t[static_cast<std::size_t>(j)] = bj / nx;
            internal_check(loc.contains(t[static_cast<std::size_t>(j)]),
                           "projection coefficients must stay in the ring");
            dcom = lcm(dcom, denominator(t[static_cast<std::size_t>(j)]));
        }
        IntMatrix proj(k, k);
        for (int j = 0; j < k; ++j)
            for (int r = 0; r < k; ++r) {
                BigRat e = (r == j ? BigRat(1) : BigRat(0)) -
                           t[static_cast<std::size_t>(j)] * BigRat(x[static_cast<std::size_t>(r)]);
                e *= BigRat(dcom);
                internal_check(is_integer(e), "scaled projections must be integral");
                proj(r, j) = numerator(e);
            }
        IntMatrix hb = basis_from_generators(proj);
        internal_check(hb.cols == k - 1, "the projection must drop exactly one rank");
        RatMatrix next(n, k - 1);
        for (int i = 0; i < n; ++i)
            for (int jj = 0; jj < k - 1; ++jj) {
                BigRat acc(0);
                for (int r = 0; r < k; ++r) acc += w(i, r) * BigRat(hb(r, jj));
                next(i, jj) = acc / BigRat(dcom);
            }
        w = std::move(next);
    }

    // Rescale each direction so the lattice basis has integer coordinates
    // over the e_i: L inside H.
    DiagonalizedBasis out;
    out.basis = basis;
    out.norms = rawnorm;
    if (n > 0) {
        RatMatrix c = rational_inverse(basis);
        for (int i = 0; i < n; ++i) {
            BigInt ni = 1;
            for (int j = 0; j < n; ++j) ni = lcm(ni, denominator(c(i, j)));
            internal_check(loc.in_multiplicative_set(ni), "rescaling factors must be units");
            for (int j = 0; j < n; ++j) {
                out.basis(j, i) /= BigRat(ni);
                c(i, j) *= BigRat(ni);
            }
            out.norms[static_cast<std::size_t>(i)] /= BigRat(ni * ni);
        }
        internal_check(is_integral(c), "lattice coordinates over the ambient basis must be integral");
        out.coords = c;
    } else {
        out.coords = RatMatrix(0, 0);
    }

    // Split each norm into ell power times unit, sort by exponent.
    out.alphas.resize(static_cast<std::size_t>(n));
    out.units.resize(static_cast<std::size_t>(n));
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        long a = valuation(out.norms[static_cast<std::size_t>(i)], BigInt(ell));
        internal_check(a >= 0, "norm denominators must avoid ell");
        BigRat unit = out.norms[static_cast<std::size_t>(i)];
        for (long t = 0; t < a; ++t) unit /= BigRat(BigInt(ell));
        if (!loc.is_unit(unit))
            throw PreconditionViolation("the determinant carries an inadmissible prime");
        out.alphas[static_cast<std::size_t>(i)] = a;
        out.units[static_cast<std::size_t>(i)] = unit;
        order[static_cast<std::size_t>(i)] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
        return out.alphas[static_cast<std::size_t>(l)] < out.alphas[static_cast<std::size_t>(r)];
    });
    DiagonalizedBasis sorted = out;
    for (int i = 0; i < n; ++i) {
        int src = order[static_cast<std::size_t>(i)];
        sorted.norms[static_cast<std::size_t>(i)] = out.norms[static_cast<std::size_t>(src)];
        sorted.units[static_cast<std::size_t>(i)] = out.units[static_cast<std::size_t>(src)];
        sorted.alphas[static_cast<std::size_t>(i)] = out.alphas[static_cast<std::size_t>(src)];
        for (int j = 0; j < n; ++j) {
            sorted.basis(j, i) = out.basis(j, src);
            sorted.coords(i, j) = out.coords(src, j);
        }
    }
    out = std::move(sorted);

    // The ell parts of the norms are the ell parts of the elementary divisors.
    std::vector<long> expect;
    for (const auto& dv : lat.divisors) expect.push_back(valuation(dv, BigInt(ell)));
    std::vector<long> got = out.alphas;
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    internal_check(expect == got, "norm exponents must match the elementary divisors");

    if (n > 0) {
        out.index_in_ambient = abs(determinant(to_integral(out.coords)));
        internal_check(loc.in_multiplicative_set(out.index_in_ambient),
                       "the ambient index must be a unit");
    } else {
        out.index_in_ambient = 1;
    }

    // Smallest d with d*H inside L and d*b even on H: scan multiples of the
    // basis denominator lcm until every d*norm is an even integer.
    BigInt d0 = 1;
    for (const auto& e : out.basis.a) d0 = lcm(d0, denominator(e));
    BigInt limit = d0;
    for (const auto& q : out.norms) limit = lcm(limit, denominator(q / BigRat(2)));
    BigInt d = d0;
    while (d <= limit) {
        bool even = true;
        for (const auto& q : out.norms)
            if (!is_integer(BigRat(d) * q / BigRat(2))) {
                even = false;
                break;
            }
        if (even) break;
        d += d0;
    }
    internal_check(d <= limit, "the scaling scan must terminate at the lcm bound");
    internal_check(loc.in_multiplicative_set(d), "the scaling integer must be a unit");
    out.d = d;

    // Exactness checks: orthogonality and reconstruction of the Gram matrix.
    RatMatrix diag = transpose(out.basis) * g * out.basis;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i != j) internal_check(diag(i, j) == 0, "the basis must be orthogonal");
            else internal_check(diag(i, i) == out.norms[static_cast<std::size_t>(i)],
                                "recorded norms must match the basis");
        }
    return out;
}

// Construction record of the lifted lattice.
struct LiftLog {
    std::vector<BigInt> block_sizes; // ell^alpha_i
    std::vector<BigRat> block_norms; // a_i
    BigInt d;
};

struct LiftedLattice {
    Lattice hat;
    LatticeAutomorphism sigma;
    IntMatrix fixed_embedding; // columns: the lattice's basis inside hat
    LiftLog log;
};

// Builds the rank e(L) lattice with a block-cyclic automorphism of ell-power
// order whose fixed lattice is L: ambient blocks of size ell^alpha_i with
// diagonal norm a_i, cut down by the congruences x_{i,j} = x_{i,1} mod d and
// "the first coordinates land in L".
inline LiftedLattice hat_lattice(const Lattice& lat, std::uint64_t ell) {
    require_admissible_prime(BigInt(ell));
    if (!has_prime_power_level(lat, BigInt(ell)))
        throw PreconditionViolation("the level must be a power of the prime");
    Localization loc{ell};
    DiagonalizedBasis diag = diagonalize(lat, ell);
    const int n = lat.rank;

    BigInt rank_big = 0;
    std::vector<BigInt> blocks;
    for (long a : diag.alphas) {
        blocks.push_back(pow(BigInt(ell), static_cast<unsigned long>(a)));
        rank_big += blocks.back();
    }
    internal_check(rank_big == lat.e_sum, "the lift rank must be the divisor sum");
    if (rank_big > 4096) throw PreconditionViolation("the lift rank is too large to build");
    const int m = static_cast<int>(rank_big.get_si());

    // Ambient data: block starts, diagonal norms, cyclic permutation.
    std::vector<int> start(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 0; i < n; ++i)
        start[static_cast<std::size_t>(i) + 1] =
            start[static_cast<std::size_t>(i)] + static_cast<int>(blocks[static_cast<std::size_t>(i)].get_si());
    std::vector<BigRat> anorm(static_cast<std::size_t>(m));
    IntMatrix perm(m, m);
    for (int i = 0; i < n; ++i) {
        int b = start[static_cast<std::size_t>(i)];
        int len = start[static_cast<std::size_t>(i) + 1] - b;
        for (int j = 0; j < len; ++j) {
            anorm[static_cast<std::size_t>(b + j)] = diag.units[static_cast<std::size_t>(i)];
            perm(b + (j + 1) % len, b + j) = 1;
        }
    }

    // Congruence rows over Z^m: block equalities mod d, then membership of
    // the first coordinates in L (cleared by the basis denominator).
    BigInt bden = 1;
    for (const auto& e : diag.basis.a) bden = lcm(bden, denominator(e));
    const int rows = (m - n) + n;
    IntMatrix sys(rows, m + rows);
    int r = 0;
    for (int i = 0; i < n; ++i) {
        int b = start[static_cast<std::size_t>(i)];
        int len = start[static_cast<std::size_t>(i) + 1] - b;
        for (int j = 1; j < len; ++j) {
            sys(r, b + j) = 1;
            sys(r, b) = -1;
            sys(r, m + r) = -diag.d;
            ++r;
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            BigRat scaled = BigRat(bden) * diag.basis(i, j);
            internal_check(is_integer(scaled), "the membership rows must clear the denominator");
            sys(r, start[static_cast<std::size_t>(j)]) = numerator(scaled);
        }
        sys(r, m + r) = -bden;
        ++r;
    }
    internal_check(r == rows, "congruence row count");
    IntMatrix kernel = integer_kernel(sys);
    internal_check(kernel.cols == m, "the congruence lattice must have full rank");
    IntMatrix gens(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) gens(i, j) = kernel(i, j);
    IntMatrix bm = basis_from_generators(gens);

    // Gram of the cut lattice; integrality and evenness are the deferred
    // verification of the construction.
    RatMatrix bq = to_rational(bm);
    RatMatrix gram_rat(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            BigRat s(0);
            for (int t = 0; t < m; ++t) s += bq(t, i) * anorm[static_cast<std::size_t>(t)] * bq(t, j);
            gram_rat(i, j) = s;
        }
    internal_check(is_integral(gram_rat), "the lift's Gram matrix must be integral");
    IntMatrix gram = to_integral(gram_rat);
    for (int i = 0; i < m; ++i)
        internal_check(mod_reduce(gram(i, i), 2) == 0, "the lift's Gram matrix must be even");
    LiftedLattice out;
    out.hat = make_lattice(std::move(gram), lat.name.empty() ? std::string() : lat.name + ".hat");

    // The level avoids ell and the primes -1 mod ell.
    for (const auto& [p, e] : factorize(out.hat.level))
        internal_check(loc.admits_prime(p), "the lift's level must avoid inadmissible primes");

    // Restrict the block shift to the cut lattice.
    RatMatrix binv = rational_inverse(bq);
    RatMatrix restricted = binv * to_rational(perm * bm);
    internal_check(is_integral(restricted), "the shift must preserve the cut lattice");
    out.sigma = make_automorphism(out.hat, to_integral(restricted));
    internal_check(is_power_of(BigInt(out.sigma.order), BigInt(ell)),
                   "the shift must have ell-power order");

    // Canonical embedding of L: constant coordinates on each block.
    RatMatrix amb(m, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            BigRat c = diag.coords(i, j);
            for (int t = start[static_cast<std::size_t>(i)]; t < start[static_cast<std::size_t>(i) + 1]; ++t)
                amb(t, j) = c;
        }
    RatMatrix emb = binv * amb;
    internal_check(is_integral(emb), "the embedded basis must have integral coordinates");
    out.fixed_embedding = to_integral(emb);
    IntMatrix fixed_gram = transpose(out.fixed_embedding) * out.hat.gram * out.fixed_embedding;
    internal_check(fixed_gram == lat.gram, "the fixed Gram matrix must equal the input");

    // The embedding exhausts the fixed lattice.
    FixedLattice fx = fixed_lattice(out.hat, out.sigma);
    internal_check(fx.lattice.rank == n, "the fixed lattice must have the input's rank");
    if (n > 0) {
        RatMatrix kq = to_rational(fx.embedding);
        RatMatrix sol = rational_inverse(transpose(kq) * kq) * transpose(kq) * to_rational(out.fixed_embedding);
        internal_check(kq * sol == to_rational(out.fixed_embedding),
                       "the embedded basis must consist of fixed vectors");
        internal_check(is_integral(sol) && abs(determinant(to_integral(sol))) == 1,
                       "the embedding must exhaust the fixed lattice");
    }

    out.log.block_sizes = std::move(blocks);
    out.log.block_norms = diag.units;
    out.log.d = diag.d;
    return out;
}

// Full verification record: the lift, the discriminant facts forcing the
// level-one congruence, the theta congruence itself, and the certificate.
struct LiftReport {
    LiftedLattice lift;
    IndexReport indices;          // for (hat, sigma)
    BigInt hat_disc_order;        // |Det(hat)|
    bool disc_fixed_trivial;      // Det(hat)^sigma = 0
    bool disc_order_one_mod_ell;  // |Det(hat)| = 1 mod ell
    bool rank_multiple_of_four;
    bool theta_congruent;         // theta_hat = theta_L mod ell up to N
    CongruenceCertificate certificate;
    int verified_to = 0;
};

inline LiftReport main_theorem_pipeline(const Lattice& lat, std::uint64_t ell, int N,
                                        const ThetaOptions& opts = {}) {
    LiftReport rep{hat_lattice(lat, ell), {}, 0, false, false, false, false, {}, N};
    BigInt weight = lat.e_sum / 2;
    BigInt sturm = weight / 12 + 1;
    if (BigInt(N) < sturm)
        throw PreconditionViolation("the precision must reach the Sturm bound");

    rep.indices = index_report(rep.lift.hat, rep.lift.sigma, ell);
    rep.disc_fixed_trivial = rep.indices.disc_fixed_order == 1;
    internal_check(rep.disc_fixed_trivial, "the lift's fixed discriminant must vanish");

    rep.hat_disc_order = rep.lift.hat.det;
    rep.disc_order_one_mod_ell = mod_reduce(rep.hat_disc_order, BigInt(ell)) == 1;
    internal_check(rep.disc_order_one_mod_ell, "the lift's discriminant order must be 1 mod ell");

    rep.rank_multiple_of_four = rep.lift.hat.rank % 4 == 0;
    internal_check(rep.rank_multiple_of_four, "the lift's rank must be divisible by four");

    QSeries<BigInt> theta_hat = theta_series(rep.lift.hat, N, opts);
    QSeries<BigInt> theta_l = theta_series(lat, N, opts);
    rep.theta_congruent = verify_congruence(theta_hat, theta_l, ell, N).ok;
    internal_check(rep.theta_congruent, "the lift's theta series must be congruent to the input's");

    rep.certificate = find_congruent_form(lat, ell, N, opts);
    CongruenceCheck cross = verify_congruence(theta_hat, rep.certificate.form.expansion, ell, N);
    internal_check(cross.ok, "the certificate must also bound the lift's theta series");
    return rep;
}

} // namespace lattheta
