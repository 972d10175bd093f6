#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "lattheta/lattice.hpp"
#include "lattheta/snf.hpp"

namespace lattheta {

// Root lattice E8: Cartan matrix of the E8 diagram, determinant 1.
inline Lattice fixture_e8() {
    IntMatrix g(8, 8);
    for (int i = 0; i < 8; ++i) g(i, i) = 2;
    auto bond = [&](int i, int j) {
        g(i, j) = -1;
        g(j, i) = -1;
    };
    for (int i = 0; i + 1 < 7; ++i) bond(i, i + 1); // chain 0-1-2-3-4-5-6
    bond(7, 4);                                     // branch node
    return make_lattice(g, "E8");
}

// Quaternary lattice of level 5 and determinant 25.
inline Lattice fixture_f5() {
    IntMatrix g(4, 4);
    const int rows[4][4] = {{2, 1, 1, 1}, {1, 2, 0, 1}, {1, 0, 4, 2}, {1, 1, 2, 4}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = rows[i][j];
    return make_lattice(g, "F");
}

// Binary forms ax^2 + bxy + cy^2 used throughout the suite, keyed by the
// prime for which their theta series has a level-one companion.
inline std::vector<std::pair<BinaryForm, long>> fixture_binary_forms() {
    return {
        {{1, 1, 2}, 7},  {{1, 1, 3}, 11}, {{2, 1, 3}, 23},
        {{2, 1, 4}, 31}, {{3, 1, 4}, 47}, {{4, 3, 5}, 71},
    };
}

// Extended binary Golay code [24,12,8] as 12 generator words (24-bit masks,
// bit i = coordinate i).  Built as [I | A] with A the bordered circulant of
// the quadratic residues mod 11.
inline std::vector<std::uint32_t> golay_basis() {
    bool q[11] = {};
    for (int t = 0; t < 11; ++t) q[(t * t) % 11] = true; // includes 0
    auto a = [&](int i, int j) -> bool {
        if (i == 0 && j == 0) return false;
        if (i == 0 || j == 0) return true;
        return q[((j - i) % 11 + 11) % 11];
    };
    std::vector<std::uint32_t> rows(12, 0);
    for (int i = 0; i < 12; ++i) {
        rows[static_cast<std::size_t>(i)] = 1u << i;
        for (int j = 0; j < 12; ++j)
            if (a(i, j)) rows[static_cast<std::size_t>(i)] |= 1u << (12 + j);
    }
    return rows;
}

// Expands the span and checks the weight distribution 1/759/2576/759/1,
// which pins the code as the doubly even self-dual [24,12,8] code.
inline std::vector<std::uint32_t> golay_codewords() {
    auto rows = golay_basis();
    std::vector<std::uint32_t> words{0};
    words.reserve(4096);
    for (std::uint32_t r : rows) {
        std::size_t sz = words.size();
        for (std::size_t i = 0; i < sz; ++i) words.push_back(words[i] ^ r);
    }
    internal_check(words.size() == 4096, "code must have dimension 12");
    long dist[25] = {};
    for (std::uint32_t w : words) dist[std::popcount(w)] += 1;
    bool ok = dist[0] == 1 && dist[8] == 759 && dist[12] == 2576 && dist[16] == 759 &&
              dist[24] == 1;
    for (int k = 0; k < 25; ++k)
        if (k != 0 && k != 8 && k != 12 && k != 16 && k != 24) ok = ok && dist[k] == 0;
    internal_check(ok, "weight distribution must match the Golay code");
    return words;
}

// Leech lattice, scaled so that coordinates are integers and the form is
// x.y/8: generated by doubled codewords, 4(e_i +- e_j), and (-3,1,...,1).
// The span has determinant 8^12, so the Gram below is unimodular.
inline Lattice fixture_leech() {
    auto rows = golay_basis();
    IntMatrix gens(24, 12 + 1 + 23 + 1);
    int col = 0;
    for (std::uint32_t r : rows) {
        for (int i = 0; i < 24; ++i) gens(i, col) = (r >> i) & 1u ? 2 : 0;
        ++col;
    }
    gens(0, col) = 4;
    gens(1, col) = 4;
    ++col;
    for (int i = 0; i < 23; ++i) {
        gens(i, col) = 4;
        gens(i + 1, col) = -4;
        ++col;
    }
    gens(0, col) = -3;
    for (int i = 1; i < 24; ++i) gens(i, col) = 1;
    IntMatrix basis = basis_from_generators(gens);
    internal_check(basis.cols == 24, "generators must span a rank-24 lattice");
    internal_check(abs(determinant(basis)) == pow(BigInt(2), 36),
                   "covolume must match the Leech lattice");
    IntMatrix big = transpose(basis) * basis;
    IntMatrix g(24, 24);
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j) {
            internal_check(mod_reduce(big(i, j), 8) == 0, "form must be integral after scaling");
            g(i, j) = big(i, j) / 8;
        }
    Lattice lat = make_lattice(g, "Leech");
    internal_check(lat.det == 1, "Leech lattice is unimodular");
    return lat;
}

} // namespace lattheta
