#pragma once

#include <cstdint>
#include <vector>

#include "lattheta/discriminant.hpp"
#include "lattheta/modforms.hpp"
#include "lattheta/theta.hpp"

namespace lattheta {

// Level-one form of weight e(L)/2 congruent to theta_L mod ell, together
// with how far the congruence was verified.
struct CongruenceCertificate {
    std::string lattice_name;
    std::uint64_t ell = 0;
    long weight = 0;
    ModularForm form; // integer coordinates lifted into [0, ell)
    QSeries<BigInt> theta;
    int verified_to = 0;
    long sturm_bound = 0;
};

struct GradingTag {
    long residue = 0; // e(L)/2 mod (ell - 1)
    long modulus = 0;
};

struct CongruenceCheck {
    bool ok = false;
    int first_mismatch = -1;
};

inline CongruenceCheck verify_congruence(const QSeries<BigRat>& s1, const QSeries<BigRat>& s2,
                                         std::uint64_t ell, int N) {
    if (N > s1.prec || N > s2.prec)
        throw PreconditionViolation("verification beyond stored precision");
    for (int k = 0; k <= N; ++k) {
        if (to_u64_mod(s1.c[static_cast<std::size_t>(k)], ell) !=
            to_u64_mod(s2.c[static_cast<std::size_t>(k)], ell))
            return {false, k};
    }
    return {true, -1};
}

inline CongruenceCheck verify_congruence(const QSeries<BigInt>& s1, const QSeries<BigRat>& s2,
                                         std::uint64_t ell, int N) {
    return verify_congruence(to_rational(s1), s2, ell, N);
}

inline CongruenceCheck verify_congruence(const QSeries<BigInt>& s1, const QSeries<BigInt>& s2,
                                         std::uint64_t ell, int N) {
    return verify_congruence(to_rational(s1), to_rational(s2), ell, N);
}

inline int default_verification_precision(long weight) {
    long sturm = weight / 12 + 1;
    return static_cast<int>(std::max(20L, sturm + 4));
}

// Find the unique level-one form of weight e(L)/2 whose reduction matches
// theta_L mod ell, by solving for the monomial-basis coordinates against the
// first dim M_k theta coefficients and verifying the congruence out to N.
inline CongruenceCertificate find_congruent_form(const Lattice& lat, std::uint64_t ell, int N = -1,
                                                 const ThetaOptions& opts = {}) {
    require_admissible_prime(BigInt(ell));
    if (!has_prime_power_level(lat, BigInt(ell)))
        throw PreconditionViolation("the lattice level must be a power of the prime");
    internal_check(mod_reduce(lat.e_sum, 4) == 0, "divisor sum must be divisible by four");
    long k = static_cast<long>(BigInt(lat.e_sum / 2).get_si());
    long sturm = k / 12 + 1;
    if (N < 0) N = default_verification_precision(k);
    if (N < sturm)
        throw PreconditionViolation("verification precision is below the weight's coefficient bound");

    QSeries<BigInt> theta = theta_series(lat, N, opts);
    auto basis = basis_Mk(k, N);
    const int dim = static_cast<int>(basis.size());
    internal_check(dim >= 1, "weight with an empty basis cannot carry a congruence");

    // Coefficient-matching system: column j is basis_j's first dim coefficients.
    IntMatrix a(dim, dim);
    std::vector<BigInt> b(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const BigRat& v = basis[static_cast<std::size_t>(j)].expansion.c[static_cast<std::size_t>(i)];
            internal_check(is_integer(v), "monomial basis expansions are integral");
            a(i, j) = numerator(v);
        }
        b[static_cast<std::size_t>(i)] = theta.c[static_cast<std::size_t>(i)];
    }
    auto sol = solve_mod_p(a, b, ell);
    if (!sol)
        throw InternalInconsistency("no congruent form exists at the guaranteed weight");

    std::vector<BigRat> coords(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) coords[static_cast<std::size_t>(j)] = BigRat(BigInt((*sol)[static_cast<std::size_t>(j)]));
    ModularForm f = form_from_coords(k, coords, N);

    CongruenceCheck chk = verify_congruence(to_rational(theta), f.expansion, ell, N);
    if (!chk.ok)
        throw InternalInconsistency("congruence verification failed past the matched coefficients");

    CongruenceCertificate cert;
    cert.lattice_name = lat.name;
    cert.ell = ell;
    cert.weight = k;
    cert.form = std::move(f);
    cert.theta = std::move(theta);
    cert.verified_to = N;
    cert.sturm_bound = sturm;
    return cert;
}

inline GradingTag grading_tag(const Lattice& lat, std::uint64_t ell) {
    WeightResidue w = weight_residue(lat, BigInt(ell));
    return {w.weight_residue, static_cast<long>(ell - 1)};
}

// Index-ell superlattice L_u = L + Z*u for a discriminant group element u of
// order ell, presented on the basis of L (so its Gram is B^T G B / ell^2 for
// the scaled column basis B of ell*L_u).
inline Lattice neighbor_lattice(const Lattice& lat, const DiscriminantGroup& group,
                                const DiscElement& u) {
    const int n = lat.rank;
    std::vector<BigRat> v = group.rational_representative(u);
    BigInt ell = 0;
    for (const auto& q : v) ell = lcm(ell == 0 ? BigInt(1) : ell, denominator(q));
    IntMatrix gens(n, n + 1);
    for (int i = 0; i < n; ++i) {
        gens(i, i) = ell;
        BigRat scaled = BigRat(ell) * v[static_cast<std::size_t>(i)];
        internal_check(is_integer(scaled), "coset representative must clear the denominator");
        gens(i, n) = numerator(scaled);
    }
    IntMatrix basis = basis_from_generators(gens);
    internal_check(basis.cols == n, "superlattice must have full rank");
    IntMatrix big = transpose(basis) * lat.gram * basis;
    BigInt ell2 = ell * ell;
    IntMatrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            internal_check(mod_reduce(big(i, j), ell2) == 0,
                           "neighbor form must be integral on the superlattice");
            g(i, j) = big(i, j) / ell2;
        }
    return make_lattice(std::move(g), lat.name.empty() ? "" : lat.name + "_u");
}

struct NeighborReport {
    FpSeries series;
    long isotropic_lines = 0;
    QSeries<BigInt> combined; // over the integers, before reduction
};

// Weight-six Eisenstein congruence from theta series of neighbor lattices:
// sum over isotropic lines u of theta_{L_u}, minus (count - 1) theta_L.
inline NeighborReport eisenstein_from_neighbors(const Lattice& lat, std::uint64_t ell, int N,
                                                const ThetaOptions& opts = {}) {
    require_admissible_prime(BigInt(ell));
    if (lat.level != BigInt(ell))
        throw PreconditionViolation("neighbor sum needs level exactly the prime");
    if (lat.rank != 12)
        throw PreconditionViolation("neighbor sum is implemented for rank twelve");
    BigInt det = lat.det;
    long twon = valuation(det, BigInt(ell));
    if (pow(BigInt(ell), static_cast<unsigned long>(twon)) != det || twon % 2 != 0 || twon < 4)
        throw PreconditionViolation("determinant must be an even power of the prime, at least its fourth");

    DiscriminantGroup g = discriminant_group(lat);
    for (const auto& d : g.orders)
        internal_check(d == BigInt(ell), "discriminant group must be elementary abelian");

    // Canonical line representatives: first nonzero residue equals one.
    std::vector<DiscElement> lines;
    for (const auto& x : g.all_elements()) {
        if (x == g.zero()) continue;
        std::size_t first = 0;
        while (x.residues[first] == 0) ++first;
        if (x.residues[first] != 1) continue;
        if (g.qbar(x) == 0) lines.push_back(x);
    }

    QSeries<BigInt> theta = theta_series(lat, N, opts);
    QSeries<BigInt> combined(N);
    for (const auto& u : lines) {
        Lattice nb = neighbor_lattice(lat, g, u);
        internal_check(nb.level == BigInt(ell), "neighbor lattices keep the level");
        combined = combined + theta_series(nb, N, opts);
    }
    BigInt excess(static_cast<long>(lines.size()) - 1);
    combined = combined - excess * theta;

    NeighborReport rep;
    rep.isotropic_lines = static_cast<long>(lines.size());
    rep.combined = combined;
    rep.series = reduce_mod(combined, ell);
    return rep;
}

} // namespace lattheta
