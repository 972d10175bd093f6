#pragma once

#include <cstdint>
#include <vector>

#include "lattheta/congruence.hpp"
#include "lattheta/discriminant.hpp"
#include "lattheta/theta.hpp"

namespace lattheta {

// Isometry of a lattice, acting on basis coordinates: x maps to U x.
struct LatticeAutomorphism {
    IntMatrix matrix;
    long order = 0;
};

namespace autdetail {

inline IntMatrix mat_mul_mod3(const IntMatrix& x, const IntMatrix& y) {
    const int n = x.rows;
    IntMatrix r(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (x(i, k) == 0) continue;
            for (int j = 0; j < n; ++j) r(i, j) += x(i, k) * y(k, j);
        }
    for (auto& v : r.a) v = mod_reduce(v, 3);
    return r;
}

inline IntMatrix mat_pow(const IntMatrix& u, long e) {
    IntMatrix r = IntMatrix::identity(u.rows);
    IntMatrix b = u;
    while (e > 0) {
        if (e & 1) r = r * b;
        if (e > 1) b = b * b;
        e >>= 1;
    }
    return r;
}

} // namespace autdetail

// Validates the isometry condition and computes the exact order.  The order
// is found from the action mod 3 first (faithful for isometries of positive
// definite lattices), then certified by exact integer arithmetic.
inline LatticeAutomorphism make_automorphism(const Lattice& lat, IntMatrix u,
                                             long max_order = 1000000L) {
    if (u.rows != lat.rank || u.cols != lat.rank)
        throw InvalidInput("automorphism matrix shape must match the rank");
    if (transpose(u) * lat.gram * u != lat.gram) throw NotIsometry();
    long order = 1;
    if (lat.rank > 0) {
        IntMatrix base(u.rows, u.cols);
        for (int i = 0; i < u.rows; ++i)
            for (int j = 0; j < u.cols; ++j) base(i, j) = mod_reduce(u(i, j), 3);
        IntMatrix id = IntMatrix::identity(u.rows);
        IntMatrix acc = base;
        order = 1;
        while (acc != id) {
            acc = autdetail::mat_mul_mod3(acc, base);
            ++order;
            if (order > max_order) throw OrderBoundExceeded();
        }
        internal_check(autdetail::mat_pow(u, order) == id, "mod-3 order must be the exact order");
        long rem = order;
        for (long p = 2; p * p <= rem; ++p)
            if (rem % p == 0) {
                internal_check(autdetail::mat_pow(u, order / p) != id, "order must be minimal");
                while (rem % p == 0) rem /= p;
            }
        if (rem > 1 && rem != order)
            internal_check(autdetail::mat_pow(u, order / rem) != id, "order must be minimal");
    }
    return {std::move(u), order};
}

struct FixedLattice {
    Lattice lattice;
    IntMatrix embedding; // columns: basis of the fixed sublattice in L's coordinates
};

// Saturated sublattice of vectors fixed by the automorphism, with the
// restricted form.
inline FixedLattice fixed_lattice(const Lattice& lat, const LatticeAutomorphism& s) {
    IntMatrix diff = s.matrix;
    for (int i = 0; i < diff.rows; ++i) diff(i, i) -= 1;
    IntMatrix kernel = integer_kernel(diff);
    IntMatrix gram = transpose(kernel) * lat.gram * kernel;
    std::string name = lat.name.empty() ? std::string() : lat.name + ".fixed";
    return {make_lattice(std::move(gram), std::move(name)), std::move(kernel)};
}

inline bool is_power_of(BigInt v, const BigInt& p) {
    if (v < 1) return false;
    while (v % p == 0) v /= p;
    return v == 1;
}

inline void require_order_power_of(const LatticeAutomorphism& s, std::uint64_t ell) {
    if (!is_power_of(BigInt(s.order), BigInt(ell)))
        throw PreconditionViolation("automorphism order must be a power of the prime");
}

// Action of the automorphism on the discriminant group, as an integer matrix
// on generator residues.
inline IntMatrix disc_action_matrix(const DiscriminantGroup& g, const LatticeAutomorphism& s) {
    const int k = g.ngens();
    const int n = g.gram.rows;
    IntMatrix a(k, k);
    for (int j = 0; j < k; ++j) {
        std::vector<BigRat> image(static_cast<std::size_t>(n), BigRat(0));
        for (int i = 0; i < n; ++i)
            for (int t = 0; t < n; ++t)
                image[static_cast<std::size_t>(i)] += BigRat(s.matrix(i, t)) * g.generators(t, j);
        DiscElement e = g.coords_of(image);
        for (int i = 0; i < k; ++i) a(i, j) = e.residues[static_cast<std::size_t>(i)];
    }
    return a;
}

// Theta congruence of a lattice with the fixed lattice of an automorphism of
// prime power order: r_L(n) = r_{L^sigma}(n) mod ell for every n.  Guaranteed
// by orbit counting, so a mismatch is an internal failure.
inline bool check_fixed_congruence(const Lattice& lat, const LatticeAutomorphism& s,
                                   std::uint64_t ell, int N, const ThetaOptions& opts = {}) {
    require_admissible_prime(BigInt(ell));
    require_order_power_of(s, ell);
    FixedLattice fixed = fixed_lattice(lat, s);
    QSeries<BigInt> full = theta_series(lat, N, opts);
    QSeries<BigInt> sub = theta_series(fixed.lattice, N, opts);
    CongruenceCheck chk = verify_congruence(full, sub, ell, N);
    if (!chk.ok)
        throw InternalInconsistency("fixed lattice theta congruence failed");
    return true;
}

// Orders and mutual indices of the three groups attached to the fixed
// sublattice: (L*)^sigma / L^sigma embeds into both Det(L^sigma) and
// Det(L)^sigma with prime power index.
struct IndexReport {
    BigInt fixed_disc_order;    // |Det(L^sigma)|
    BigInt disc_fixed_order;    // |Det(L)^sigma|
    BigInt quotient_order;      // |(L*)^sigma / L^sigma|
    BigInt index_in_fixed_disc; // fixed_disc_order / quotient_order
    BigInt index_in_disc_fixed; // disc_fixed_order / quotient_order
};

inline IndexReport index_report(const Lattice& lat, const LatticeAutomorphism& s,
                                std::uint64_t ell) {
    require_admissible_prime(BigInt(ell));
    require_order_power_of(s, ell);
    FixedLattice fixed = fixed_lattice(lat, s);
    const int k = fixed.lattice.rank;

    IndexReport rep;
    rep.fixed_disc_order = fixed.lattice.det;

    DiscriminantGroup g = discriminant_group(lat);
    rep.disc_fixed_order = fixed_subgroup_order(g, disc_action_matrix(g, s));

    // Basis of (L*)^sigma: G^-1 * kernel(U^T - I).
    IntMatrix diff_t = transpose(s.matrix);
    for (int i = 0; i < diff_t.rows; ++i) diff_t(i, i) -= 1;
    IntMatrix dual_kernel = integer_kernel(diff_t);
    internal_check(dual_kernel.cols == k, "fixed subspaces of L and L* have equal rank");
    RatMatrix ginv = rational_inverse(lat.gram);
    RatMatrix dual_basis = ginv * to_rational(dual_kernel);

    if (k == 0) {
        rep.quotient_order = 1;
    } else {
        // Solve dual_basis * X = embedding; X is integral with |det X| the index.
        RatMatrix gtg = transpose(dual_basis) * dual_basis;
        RatMatrix x = rational_inverse(gtg) * transpose(dual_basis) * to_rational(fixed.embedding);
        internal_check(dual_basis * x == to_rational(fixed.embedding),
                       "fixed lattice must lie in the fixed dual lattice");
        internal_check(is_integral(x), "inclusion coordinates must be integral");
        rep.quotient_order = abs(determinant(to_integral(x)));
    }

    internal_check(rep.fixed_disc_order % rep.quotient_order == 0,
                   "quotient must embed into the fixed lattice's discriminant");
    internal_check(rep.disc_fixed_order % rep.quotient_order == 0,
                   "quotient must embed into the fixed discriminant subgroup");
    rep.index_in_fixed_disc = rep.fixed_disc_order / rep.quotient_order;
    rep.index_in_disc_fixed = rep.disc_fixed_order / rep.quotient_order;
    internal_check(is_power_of(rep.index_in_fixed_disc, BigInt(ell)) || rep.index_in_fixed_disc == 1,
                   "index into Det(fixed) must be a prime power");
    internal_check(is_power_of(rep.index_in_disc_fixed, BigInt(ell)) || rep.index_in_disc_fixed == 1,
                   "index into the fixed discriminant must be a prime power");
    if (lat.det % BigInt(ell) != 0)
        internal_check(rep.quotient_order == rep.disc_fixed_order,
                       "away from the prime the quotient is the whole fixed discriminant");
    return rep;
}

} // namespace lattheta
