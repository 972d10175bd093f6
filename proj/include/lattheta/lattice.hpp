#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lattheta/matrix.hpp"
#include "lattheta/snf.hpp"

namespace lattheta {

// a x^2 + b xy + c y^2
struct BinaryForm {
    BigInt a, b, c;
};

// Even positive definite lattice presented by its Gram matrix, with the
// invariants computed once at construction.
struct Lattice {
    IntMatrix gram;
    std::string name;
    int rank = 0;
    BigInt det;
    std::vector<BigInt> divisors; // elementary divisors d_1 | ... | d_r
    BigInt level;                 // least l with l*gram^-1 integral and even on the diagonal
    BigInt e_sum;                 // sum of the elementary divisors
};

// Least l >= 1 such that l * gram^-1 is integral with even diagonal.
// Any valid l clears every denominator of gram^-1, so the minimum is the
// denominator lcm l0, or 2*l0 when some diagonal entry of l0*gram^-1 is odd.
inline BigInt compute_level(const IntMatrix& gram) {
    if (gram.rows == 0) return 1;
    RatMatrix inv = rational_inverse(gram);
    BigInt l0 = 1;
    for (const auto& v : inv.a) l0 = lcm(l0, denominator(v));
    bool even_diag = true;
    for (int i = 0; i < gram.rows; ++i) {
        BigRat scaled = BigRat(l0) * inv(i, i);
        internal_check(is_integer(scaled), "denominator lcm must clear the inverse");
        if (mod_reduce(numerator(scaled), 2) != 0) even_diag = false;
    }
    return even_diag ? l0 : 2 * l0;
}

inline Lattice make_lattice(IntMatrix gram, std::string name = "") {
    if (gram.rows != gram.cols) throw InvalidInput("gram matrix is not square");
    if (!is_symmetric(gram)) throw NotSymmetric();
    for (int i = 0; i < gram.rows; ++i)
        if (mod_reduce(gram(i, i), 2) != 0) throw NotEven();
    if (gram.rows > 0) {
        auto minors = leading_principal_minors(gram);
        if (static_cast<int>(minors.size()) != gram.rows) throw NotPositiveDefinite();
        for (const auto& d : minors)
            if (d <= 0) throw NotPositiveDefinite();
    }

    Lattice l;
    l.rank = gram.rows;
    l.name = std::move(name);
    l.det = l.rank == 0 ? BigInt(1) : determinant(gram);
    if (l.rank > 0) {
        SmithDecomposition s = smith_normal_form(gram);
        l.divisors = s.divisors;
    }
    l.level = compute_level(gram);
    l.e_sum = 0;
    for (const auto& d : l.divisors) l.e_sum += d;
    l.gram = std::move(gram);
    return l;
}

// Gram of the binary form [a, b, c] as an even lattice: ((2a, b), (b, 2c)).
inline Lattice binary_to_lattice(const BinaryForm& f, std::string name = "") {
    IntMatrix g(2, 2);
    g(0, 0) = 2 * f.a;
    g(0, 1) = f.b;
    g(1, 0) = f.b;
    g(1, 1) = 2 * f.c;
    return make_lattice(std::move(g), std::move(name));
}

inline Lattice direct_sum(const Lattice& x, const Lattice& y) {
    std::string name;
    if (!x.name.empty() || !y.name.empty())
        name = (x.name.empty() ? "?" : x.name) + "+" + (y.name.empty() ? "?" : y.name);
    return make_lattice(block_diag(x.gram, y.gram), std::move(name));
}

// x^T gram y for coordinate vectors in the lattice basis.
inline BigInt bilinear(const Lattice& l, const std::vector<BigInt>& x, const std::vector<BigInt>& y) {
    if (static_cast<int>(x.size()) != l.rank || static_cast<int>(y.size()) != l.rank)
        throw PreconditionViolation("bilinear argument size mismatch");
    BigInt s = 0;
    for (int i = 0; i < l.rank; ++i)
        for (int j = 0; j < l.rank; ++j) s += x[i] * l.gram(i, j) * y[j];
    return s;
}

inline BigRat bilinear_rational(const IntMatrix& gram, const std::vector<BigRat>& x,
                                const std::vector<BigRat>& y) {
    BigRat s(0);
    for (int i = 0; i < gram.rows; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < gram.cols; ++j) {
            if (y[j] == 0) continue;
            s += x[i] * BigRat(gram(i, j)) * y[j];
        }
    }
    return s;
}

// True when the level is a positive power of the prime l (level 1 lattices
// qualify for every l: the power may be zero).
inline bool has_prime_power_level(const Lattice& lat, const BigInt& l) {
    BigInt lv = lat.level;
    while (lv % l == 0) lv /= l;
    return lv == 1;
}

inline void require_admissible_prime(const BigInt& l) {
    if (l < 5 || !is_probable_prime(l))
        throw PreconditionViolation("the prime must be at least 5");
}

// Weight bookkeeping for a lattice of l-power level: e(L)/2 mod (l-1)
// must equal r/2 when det is a perfect square and (r + l - 1)/2 otherwise.
struct WeightResidue {
    BigInt weight;        // e(L)/2
    long weight_residue;  // e(L)/2 mod (l-1)
    long expected_residue;
    bool consistent;
};

inline WeightResidue weight_residue(const Lattice& lat, const BigInt& l) {
    require_admissible_prime(l);
    if (!has_prime_power_level(lat, l))
        throw PreconditionViolation("weight_residue needs an l-power level");
    internal_check(mod_reduce(lat.e_sum, 2) == 0, "e(L) must be even for an l-power level");
    internal_check(mod_reduce(BigInt(lat.rank), 2) == 0, "rank must be even for an l-power level");
    WeightResidue w;
    w.weight = lat.e_sum / 2;
    BigInt m = l - 1;
    w.weight_residue = static_cast<long>(mod_reduce(w.weight, m).get_ui());
    BigInt expected = is_perfect_square(lat.det) ? BigInt(BigInt(lat.rank) / 2)
                                                 : BigInt((BigInt(lat.rank) + l - 1) / 2);
    w.expected_residue = static_cast<long>(mod_reduce(expected, m).get_ui());
    w.consistent = w.weight_residue == w.expected_residue;
    return w;
}

} // namespace lattheta
