#pragma once

#include <algorithm>
#include <vector>

#include "lattheta/matrix.hpp"

namespace lattheta {

// U * M * V = diag(divisors), with U, V unimodular.  divisors holds
// min(rows, cols) nonnegative entries forming a divisibility chain;
// `rank` of them are nonzero.
struct SmithDecomposition {
    std::vector<BigInt> divisors;
    IntMatrix U;
    IntMatrix V;
    int rank = 0;
};

namespace detail {

inline void add_row(IntMatrix& m, int dst, int src, const BigInt& f) {
    for (int j = 0; j < m.cols; ++j) m(dst, j) += f * m(src, j);
}

inline void add_col(IntMatrix& m, int dst, int src, const BigInt& f) {
    for (int i = 0; i < m.rows; ++i) m(i, dst) += f * m(i, src);
}

inline void swap_rows(IntMatrix& m, int a, int b) {
    if (a == b) return;
    for (int j = 0; j < m.cols; ++j) std::swap(m(a, j), m(b, j));
}

inline void swap_cols(IntMatrix& m, int a, int b) {
    if (a == b) return;
    for (int i = 0; i < m.rows; ++i) std::swap(m(i, a), m(i, b));
}

inline void negate_row(IntMatrix& m, int r) {
    for (int j = 0; j < m.cols; ++j) m(r, j) = -m(r, j);
}

} // namespace detail

// Smith decomposition of an arbitrary integer matrix.  Deterministic pivoting:
// at every step the entry of minimal absolute value (ties broken by row-major
// position) in the trailing block becomes the pivot.
inline SmithDecomposition smith_decompose(const IntMatrix& m) {
    const int rows = m.rows, cols = m.cols;
    SmithDecomposition out;
    out.U = IntMatrix::identity(rows);
    out.V = IntMatrix::identity(cols);
    IntMatrix d = m;
    const int steps = std::min(rows, cols);

    for (int t = 0; t < steps; ++t) {
        for (;;) {
            int pi = -1, pj = -1;
            BigInt best;
            for (int i = t; i < rows; ++i)
                for (int j = t; j < cols; ++j) {
                    if (d(i, j) == 0) continue;
                    BigInt v = abs(d(i, j));
                    if (pi < 0 || v < best) {
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
            if (pi < 0) goto finished;
            detail::swap_rows(d, t, pi);
            detail::swap_rows(out.U, t, pi);
            detail::swap_cols(d, t, pj);
            detail::swap_cols(out.V, t, pj);

            bool residue = false;
            for (int i = t + 1; i < rows; ++i) {
                if (d(i, t) == 0) continue;
                BigInt q;
                mpz_tdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
                if (q != 0) {
                    detail::add_row(d, i, t, -q);
                    detail::add_row(out.U, i, t, -q);
                }
                if (d(i, t) != 0) residue = true;
            }
            for (int j = t + 1; j < cols; ++j) {
                if (d(t, j) == 0) continue;
                BigInt q;
                mpz_tdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
                if (q != 0) {
                    detail::add_col(d, j, t, -q);
                    detail::add_col(out.V, j, t, -q);
                }
                if (d(t, j) != 0) residue = true;
            }
            if (residue) continue;

            bool fold = false;
            for (int i = t + 1; i < rows && !fold; ++i)
                for (int j = t + 1; j < cols && !fold; ++j)
                    if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
                        detail::add_row(d, t, i, BigInt(1));
                        detail::add_row(out.U, t, i, BigInt(1));
                        fold = true;
                    }
            if (!fold) break;
        }
        if (d(t, t) < 0) {
            detail::negate_row(d, t);
            detail::negate_row(out.U, t);
        }
    }
finished:
    out.divisors.resize(steps);
    for (int t = 0; t < steps; ++t) {
        out.divisors[t] = d(t, t);
        if (d(t, t) != 0) ++out.rank;
    }
    return out;
}

// Smith normal form of a square nonsingular matrix: positive divisors
// d_1 | d_2 | ... | d_n with product |det|.
inline SmithDecomposition smith_normal_form(const IntMatrix& m) {
    if (m.rows != m.cols) throw PreconditionViolation("smith_normal_form needs a square matrix");
    SmithDecomposition s = smith_decompose(m);
    if (s.rank != m.rows) throw PreconditionViolation("smith_normal_form needs a nonsingular matrix");
    return s;
}

// Saturated basis of {x : M x = 0}, as columns of an n-by-k matrix.
// The basis is the zero-divisor block of the Smith V, so the spanned
// sublattice is the full kernel saturation; each column's leading
// nonzero entry is normalized positive.
inline IntMatrix integer_kernel(const IntMatrix& m) {
    SmithDecomposition s = smith_decompose(m);
    const int n = m.cols;
    const int k = n - s.rank;
    IntMatrix basis(n, k);
    for (int c = 0; c < k; ++c) {
        int src = s.rank + c;
        int lead = -1;
        for (int i = 0; i < n; ++i) {
            basis(i, c) = s.V(i, src);
            if (lead < 0 && basis(i, c) != 0) lead = i;
        }
        if (lead >= 0 && basis(lead, c) < 0)
            for (int i = 0; i < n; ++i) basis(i, c) = -basis(i, c);
    }
    return basis;
}

// Canonical column-Hermite basis of the sublattice generated by the columns
// of `gens`: echelon columns with positive pivots, entries left of each pivot
// reduced into [0, pivot).  Returns an n-by-rank matrix.
inline IntMatrix basis_from_generators(const IntMatrix& gens) {
    const int n = gens.rows, k = gens.cols;
    IntMatrix w = gens;
    int c = 0;
    for (int row = 0; row < n && c < k; ++row) {
        for (;;) {
            int piv = -1;
            BigInt best;
            for (int j = c; j < k; ++j) {
                if (w(row, j) == 0) continue;
                BigInt v = abs(w(row, j));
                if (piv < 0 || v < best) {
                    best = v;
                    piv = j;
                }
            }
            if (piv < 0) goto next_row;
            detail::swap_cols(w, c, piv);
            {
                bool residue = false;
                for (int j = c + 1; j < k; ++j) {
                    if (w(row, j) == 0) continue;
                    BigInt q;
                    mpz_tdiv_q(q.get_mpz_t(), w(row, j).get_mpz_t(), w(row, c).get_mpz_t());
                    if (q != 0) detail::add_col(w, j, c, -q);
                    if (w(row, j) != 0) residue = true;
                }
                if (residue) continue;
            }
            if (w(row, c) < 0)
                for (int i = 0; i < n; ++i) w(i, c) = -w(i, c);
            for (int j = 0; j < c; ++j) {
                BigInt q = floor_div(w(row, j), w(row, c));
                if (q != 0) detail::add_col(w, j, c, -q);
            }
            ++c;
            break;
        }
    next_row:;
    }
    IntMatrix basis(n, c);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < c; ++j) basis(i, j) = w(i, j);
    return basis;
}

// A GL_n(Z) matrix whose first column is the given primitive vector.
inline IntMatrix unimodular_with_first_column(const std::vector<BigInt>& v) {
    const int n = static_cast<int>(v.size());
    if (n == 0) throw PreconditionViolation("empty vector");
    IntMatrix col(n, 1);
    BigInt content = 0;
    for (int i = 0; i < n; ++i) {
        col(i, 0) = v[i];
        content = gcd(content, v[i]);
    }
    if (content != 1) throw PreconditionViolation("vector is not primitive");
    SmithDecomposition s = smith_decompose(col);
    internal_check(s.rank == 1 && s.divisors[0] == 1, "primitive column must have trivial Smith form");
    IntMatrix t = to_integral(rational_inverse(s.U));
    if (s.V(0, 0) < 0)
        for (int i = 0; i < n; ++i) t(i, 0) = -t(i, 0);
    for (int i = 0; i < n; ++i)
        internal_check(t(i, 0) == v[i], "first column reconstruction failed");
    return t;
}

} // namespace lattheta
