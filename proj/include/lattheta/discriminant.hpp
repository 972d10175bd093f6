#pragma once

#include <complex>
#include <cmath>
#include <vector>

#include "lattheta/lattice.hpp"

namespace lattheta {

// Element of a discriminant group, stored as residues against the group's
// cyclic orders.  Residues are always kept in [0, order_i).
struct DiscElement {
    std::vector<BigInt> residues;

    bool operator==(const DiscElement& o) const { return residues == o.residues; }
    bool operator!=(const DiscElement& o) const { return !(*this == o); }
};

// Finite quadratic module Det(L) = L*/L with the form qbar(x) = b(x,x)/2 mod 1.
//
// Presentation: generators g_1 .. g_k (columns of `generators`, rational
// coordinates in the lattice basis) of cyclic orders d_1 | ... | d_k, the
// nontrivial elementary divisors of the Gram matrix.  `coord_map` recovers
// residues of any dual vector y: c_i = (coord_map * gram * y)_i mod d_i.
struct DiscriminantGroup {
    IntMatrix gram;               // Gram of the underlying lattice
    std::vector<BigInt> orders;   // nontrivial divisors, ascending chain
    RatMatrix generators;         // rank x k
    RatMatrix generator_gram;     // k x k, entries b(g_i, g_j)
    IntMatrix coord_map;          // k x rank
    BigInt order;                 // group order = det

    int ngens() const { return static_cast<int>(orders.size()); }

    DiscElement zero() const { return DiscElement{std::vector<BigInt>(orders.size(), BigInt(0))}; }

    DiscElement element(std::vector<BigInt> residues) const {
        if (residues.size() != orders.size()) throw PreconditionViolation("residue count mismatch");
        for (std::size_t i = 0; i < residues.size(); ++i) residues[i] = mod_reduce(residues[i], orders[i]);
        return DiscElement{std::move(residues)};
    }

    DiscElement add(const DiscElement& x, const DiscElement& y) const {
        std::vector<BigInt> r(orders.size());
        for (std::size_t i = 0; i < orders.size(); ++i) r[i] = mod_reduce(x.residues[i] + y.residues[i], orders[i]);
        return DiscElement{std::move(r)};
    }

    DiscElement negate(const DiscElement& x) const {
        std::vector<BigInt> r(orders.size());
        for (std::size_t i = 0; i < orders.size(); ++i) r[i] = mod_reduce(-x.residues[i], orders[i]);
        return DiscElement{std::move(r)};
    }

    DiscElement scale(const BigInt& s, const DiscElement& x) const {
        std::vector<BigInt> r(orders.size());
        for (std::size_t i = 0; i < orders.size(); ++i) r[i] = mod_reduce(s * x.residues[i], orders[i]);
        return DiscElement{std::move(r)};
    }

    // qbar(x) = b(x,x)/2 mod 1, in [0, 1).
    BigRat qbar(const DiscElement& x) const {
        BigRat s(0);
        const int k = ngens();
        for (int i = 0; i < k; ++i) {
            if (x.residues[i] == 0) continue;
            for (int j = 0; j < k; ++j) {
                if (x.residues[j] == 0) continue;
                s += BigRat(x.residues[i]) * generator_gram(i, j) * BigRat(x.residues[j]);
            }
        }
        s /= 2;
        return frac(s);
    }

    // bbar(x, y) = b(x, y) mod 1, in [0, 1).
    BigRat bbar(const DiscElement& x, const DiscElement& y) const {
        BigRat s(0);
        const int k = ngens();
        for (int i = 0; i < k; ++i) {
            if (x.residues[i] == 0) continue;
            for (int j = 0; j < k; ++j) {
                if (y.residues[j] == 0) continue;
                s += BigRat(x.residues[i]) * generator_gram(i, j) * BigRat(y.residues[j]);
            }
        }
        return frac(s);
    }

    // Canonical coset representative: coordinates in [0, 1)^rank.
    std::vector<BigRat> rational_representative(const DiscElement& x) const {
        std::vector<BigRat> v(static_cast<std::size_t>(generators.rows), BigRat(0));
        for (int i = 0; i < generators.rows; ++i) {
            for (int j = 0; j < ngens(); ++j) v[i] += BigRat(x.residues[j]) * generators(i, j);
            v[i] = frac(v[i]);
        }
        return v;
    }

    // Residues of a dual vector given by rational coordinates in the lattice
    // basis; rejects vectors outside the dual.
    DiscElement coords_of(const std::vector<BigRat>& y) const {
        if (static_cast<int>(y.size()) != gram.rows) throw PreconditionViolation("dual vector size mismatch");
        std::vector<BigInt> gy(gram.rows);
        for (int i = 0; i < gram.rows; ++i) {
            BigRat s(0);
            for (int j = 0; j < gram.cols; ++j) s += BigRat(gram(i, j)) * y[j];
            if (!is_integer(s)) throw PreconditionViolation("vector is not in the dual lattice");
            gy[i] = numerator(s);
        }
        std::vector<BigInt> r(orders.size());
        for (int i = 0; i < ngens(); ++i) {
            BigInt s = 0;
            for (int j = 0; j < gram.rows; ++j) s += coord_map(i, j) * gy[j];
            r[i] = mod_reduce(s, orders[i]);
        }
        return DiscElement{std::move(r)};
    }

    // All group elements in odometer order (last residue varies fastest).
    std::vector<DiscElement> all_elements(unsigned long budget = 10000000UL) const {
        if (order > static_cast<unsigned long>(budget))
            throw PreconditionViolation("discriminant group too large to enumerate");
        std::vector<DiscElement> out;
        out.reserve(order.get_ui());
        DiscElement cur = zero();
        const int k = ngens();
        for (;;) {
            out.push_back(cur);
            int i = k - 1;
            while (i >= 0) {
                cur.residues[i] += 1;
                if (cur.residues[i] < orders[i]) break;
                cur.residues[i] = 0;
                --i;
            }
            if (i < 0) break;
        }
        internal_check(BigInt(static_cast<unsigned long>(out.size())) == order,
                       "element enumeration must cover the whole group");
        return out;
    }
};

inline DiscriminantGroup discriminant_group(const Lattice& lat) {
    DiscriminantGroup g;
    g.gram = lat.gram;
    g.order = lat.det;
    const int n = lat.rank;
    if (n == 0) {
        g.generators = RatMatrix(0, 0);
        g.generator_gram = RatMatrix(0, 0);
        g.coord_map = IntMatrix(0, 0);
        return g;
    }
    SmithDecomposition s = smith_normal_form(lat.gram);
    RatMatrix uinv = rational_inverse(s.U);
    internal_check(is_integral(uinv), "Smith transform must be unimodular");
    RatMatrix ginv = rational_inverse(lat.gram);

    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (s.divisors[i] > 1) keep.push_back(i);
    const int k = static_cast<int>(keep.size());

    g.orders.resize(k);
    g.generators = RatMatrix(n, k);
    g.coord_map = IntMatrix(k, n);
    for (int c = 0; c < k; ++c) {
        int idx = keep[c];
        g.orders[c] = s.divisors[idx];
        // generator g_c = gram^-1 * (column idx of U^-1); its image under gram
        // is a standard basis vector of Z^n / D Z^n after applying U.
        for (int i = 0; i < n; ++i) {
            BigRat v(0);
            for (int j = 0; j < n; ++j) v += ginv(i, j) * uinv(j, idx);
            g.generators(i, c) = v;
        }
        for (int j = 0; j < n; ++j) g.coord_map(c, j) = s.U(idx, j);
    }
    g.generator_gram = RatMatrix(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            BigRat v(0);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    v += g.generators(a, i) * BigRat(lat.gram(a, b)) * g.generators(b, j);
            g.generator_gram(i, j) = v;
        }

    // Sanity: each generator must have the stated order in L*/L.
    for (int c = 0; c < k; ++c) {
        for (int i = 0; i < n; ++i) {
            BigRat scaled = BigRat(g.orders[c]) * g.generators(i, c);
            internal_check(is_integer(scaled), "generator order must kill the coset");
        }
    }
    return g;
}

// Gauss sum of the discriminant form: sum over Det(L) of e^{2 pi i qbar(x)}.
inline std::complex<double> gauss_sum(const Lattice& lat, unsigned long budget = 10000000UL) {
    DiscriminantGroup g = discriminant_group(lat);
    std::complex<double> s(0.0, 0.0);
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (const auto& x : g.all_elements(budget)) {
        double t = mpq_get_d(g.qbar(x).get_mpq_t());
        s += std::complex<double>(std::cos(two_pi * t), std::sin(two_pi * t));
    }
    return s;
}

// | gauss_sum - e^{pi i k / 2} sqrt(|Det|) | for rank 2k; small for every
// even lattice.
inline double milgram_residual(const Lattice& lat, unsigned long budget = 10000000UL) {
    if (lat.rank % 2 != 0) throw PreconditionViolation("milgram_residual needs even rank");
    const long k = lat.rank / 2;
    constexpr double half_pi = 1.5707963267948966192313216916398;
    double angle = half_pi * static_cast<double>(k);
    double mag = std::sqrt(mpz_get_d(lat.det.get_mpz_t()));
    std::complex<double> expected(mag * std::cos(angle), mag * std::sin(angle));
    return std::abs(gauss_sum(lat, budget) - expected);
}

// Order of the kernel of an endomorphism of the group, given by an integer
// matrix action on residues.  Equal to the cokernel order
// |Z^k / ((A - I) Z^k + diag(d) Z^k)|.
inline BigInt fixed_subgroup_order(const DiscriminantGroup& g, const IntMatrix& action) {
    const int k = g.ngens();
    if (action.rows != k || action.cols != k) throw PreconditionViolation("action shape mismatch");
    if (k == 0) return 1;
    // The lift must be a well-defined endomorphism: A * (d_j e_j) lands in
    // diag(d) Z^k, i.e. d_j A_ij == 0 mod d_i.
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i)
            internal_check(mod_reduce(g.orders[j] * action(i, j), g.orders[i]) == 0,
                           "action must respect the cyclic orders");
    IntMatrix stacked(k, 2 * k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) stacked(i, j) = action(i, j) - (i == j ? BigInt(1) : BigInt(0));
        stacked(i, k + i) = g.orders[i];
    }
    SmithDecomposition s = smith_decompose(stacked);
    internal_check(s.rank == k, "padded relation matrix must have full rank");
    BigInt o = 1;
    for (int i = 0; i < k; ++i) o *= s.divisors[i];
    return o;
}

} // namespace lattheta
