#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lattheta/matrix.hpp"

namespace lattheta {

// One solution of A x = b over F_p (free variables set to zero), or nullopt
// when the system is inconsistent.  Deterministic first-nonzero pivoting.
// p must be a prime below 2^32.
inline std::optional<std::vector<std::uint64_t>> solve_mod_p(const IntMatrix& a,
                                                             const std::vector<BigInt>& b,
                                                             std::uint64_t p) {
    if (static_cast<int>(b.size()) != a.rows) throw PreconditionViolation("solve_mod_p shape mismatch");
    if (p < 2 || p >= (std::uint64_t(1) << 32) || !is_probable_prime(BigInt(static_cast<unsigned long>(p))))
        throw PreconditionViolation("solve_mod_p needs a prime modulus below 2^32");
    const int rows = a.rows, cols = a.cols;
    std::vector<std::vector<std::uint64_t>> w(rows, std::vector<std::uint64_t>(cols + 1));
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) w[i][j] = to_u64_mod(a(i, j), p);
        w[i][cols] = to_u64_mod(b[i], p);
    }

    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (w[i][c] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(w[r], w[piv]);
        std::uint64_t inv = invmod_u64(w[r][c], p);
        for (int j = c; j <= cols; ++j) w[r][j] = mulmod_u64(w[r][j], inv, p);
        for (int i = 0; i < rows; ++i) {
            if (i == r || w[i][c] == 0) continue;
            std::uint64_t f = w[i][c];
            for (int j = c; j <= cols; ++j) {
                std::uint64_t sub = mulmod_u64(f, w[r][j], p);
                w[i][j] = (w[i][j] + p - sub) % p;
            }
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (int i = r; i < rows; ++i)
        if (w[i][cols] != 0) return std::nullopt;

    std::vector<std::uint64_t> x(cols, 0);
    for (int i = 0; i < r; ++i) x[pivot_col[i]] = w[i][cols];
    return x;
}

} // namespace lattheta
