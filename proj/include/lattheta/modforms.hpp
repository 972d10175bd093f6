#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "lattheta/modp.hpp"
#include "lattheta/qseries.hpp"

namespace lattheta {

// Level-one modular form of even weight k, stored both as coordinates in the
// monomial basis E4^a E6^e Delta^b (4a + 6e + 12b = k, e in {0,1}, ordered by
// increasing b) and as its q-expansion.
struct ModularForm {
    long weight = 0;
    std::vector<BigRat> coords;
    QSeries<BigRat> expansion;
};

// Power series with coefficients reduced into [0, p).
struct FpSeries {
    std::uint64_t p = 0;
    int prec = -1;
    std::vector<std::uint64_t> c;

    bool operator==(const FpSeries& o) const { return p == o.p && prec == o.prec && c == o.c; }
    bool operator!=(const FpSeries& o) const { return !(*this == o); }
};

inline std::ostream& operator<<(std::ostream& os, const FpSeries& s) {
    os << "[";
    for (int k = 0; k <= s.prec; ++k) os << (k ? ", " : "") << s.c[static_cast<std::size_t>(k)];
    return os << "] + O(q^" << (s.prec + 1) << ") mod " << s.p;
}

// Exact Bernoulli numbers by the defining recurrence
// sum_{j=0}^{m} C(m+1, j) B_j = 0, B_0 = 1.
inline BigRat bernoulli(long k) {
    if (k < 0 || k % 2 != 0) throw PreconditionViolation("bernoulli is defined here for even k >= 0");
    std::vector<BigRat> b(static_cast<std::size_t>(k) + 1);
    b[0] = BigRat(1);
    for (long m = 1; m <= k; ++m) {
        BigRat s(0);
        for (long j = 0; j < m; ++j) {
            if (j > 1 && j % 2 == 1) continue; // odd Bernoulli numbers beyond B_1 vanish
            BigInt binom;
            mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(m + 1), static_cast<unsigned long>(j));
            s += BigRat(binom) * b[static_cast<std::size_t>(j)];
        }
        b[static_cast<std::size_t>(m)] = -s / BigRat(m + 1);
    }
    return b[static_cast<std::size_t>(k)];
}

namespace mfdetail {

inline QSeries<BigRat> eisenstein_series(long k, int N) {
    if (k < 4 || k % 2 != 0) throw PreconditionViolation("eisenstein needs even weight at least 4");
    QSeries<BigRat> s(N);
    s.c[0] = BigRat(1);
    BigRat factor = BigRat(-2 * k) / bernoulli(k);
    for (int m = 1; m <= N; ++m) {
        BigInt sig = 0;
        for (int d = 1; d <= m; ++d)
            if (m % d == 0) sig += pow(BigInt(d), static_cast<unsigned long>(k - 1));
        s.c[static_cast<std::size_t>(m)] = factor * BigRat(sig);
    }
    return s;
}

inline QSeries<BigRat> delta_series(int N) {
    // q * prod_{n>=1} (1 - q^n)^24, expanded exactly over the integers.
    QSeries<BigInt> prod = QSeries<BigInt>::one(N);
    for (int n = 1; n <= N; ++n) {
        QSeries<BigInt> f(N);
        f.c[0] = 1;
        if (n <= N) f.c[static_cast<std::size_t>(n)] = -1;
        prod = prod * pow(f, 24u);
    }
    QSeries<BigInt> d(N);
    for (int m = 1; m <= N; ++m) d.c[static_cast<std::size_t>(m)] = prod.c[static_cast<std::size_t>(m - 1)];
    QSeries<BigRat> out = to_rational(d);

    // Cross-check against (E4^3 - E6^2) / 1728 to the same precision.
    QSeries<BigRat> e4 = eisenstein_series(4, N);
    QSeries<BigRat> e6 = eisenstein_series(6, N);
    QSeries<BigRat> alt = pow(e4, 3u) - pow(e6, 2u);
    BigRat inv1728 = make_rat(1, 1728);
    alt = inv1728 * alt;
    internal_check(alt == out, "the two defining expansions of delta must agree");
    return out;
}

// Monomial exponents for weight k, ordered by increasing delta exponent.
struct Monomial {
    long a, e, b;
};

inline std::vector<Monomial> monomials(long k) {
    if (k < 0 || k % 2 != 0) throw PreconditionViolation("weight must be even and nonnegative");
    std::vector<Monomial> out;
    long e = (k % 4 == 2) ? 1 : 0;
    long rem = k - 6 * e;
    for (long b = 0; 12 * b <= rem; ++b) out.push_back({(rem - 12 * b) / 4, e, b});
    return out;
}

} // namespace mfdetail

inline long dim_Mk(long k) {
    if (k < 0 || k % 2 != 0) throw InvalidInput("dimension is defined for even k >= 0");
    return (k % 12 == 2) ? k / 12 : k / 12 + 1;
}

inline std::vector<ModularForm> basis_Mk(long k, int N) {
    auto mons = mfdetail::monomials(k);
    internal_check(static_cast<long>(mons.size()) == dim_Mk(k),
                   "monomial count must match the dimension");
    QSeries<BigRat> e4 = mfdetail::eisenstein_series(4, N);
    QSeries<BigRat> e6 = mfdetail::eisenstein_series(6, N);
    QSeries<BigRat> del = mfdetail::delta_series(N);
    std::vector<ModularForm> out;
    out.reserve(mons.size());
    for (std::size_t i = 0; i < mons.size(); ++i) {
        const auto& m = mons[i];
        QSeries<BigRat> s = pow(e4, static_cast<unsigned>(m.a));
        if (m.e) s = s * e6;
        if (m.b) s = s * pow(del, static_cast<unsigned>(m.b));
        ModularForm f;
        f.weight = k;
        f.coords.assign(mons.size(), BigRat(0));
        f.coords[i] = BigRat(1);
        f.expansion = std::move(s);
        out.push_back(std::move(f));
    }
    return out;
}

// Combine basis coordinates into a single form.
inline ModularForm form_from_coords(long k, const std::vector<BigRat>& coords, int N) {
    auto basis = basis_Mk(k, N);
    if (coords.size() != basis.size()) throw PreconditionViolation("coordinate count mismatch");
    ModularForm f;
    f.weight = k;
    f.coords = coords;
    f.expansion = QSeries<BigRat>(N);
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (coords[i] != 0) f.expansion = f.expansion + coords[i] * basis[i].expansion;
    return f;
}

inline ModularForm eisenstein(long k, int N) {
    if (k < 4 || k % 2 != 0) throw PreconditionViolation("eisenstein needs even weight at least 4");
    int work = std::max(N, static_cast<int>(dim_Mk(k)));
    QSeries<BigRat> s = mfdetail::eisenstein_series(k, work);
    // Solve for the monomial coordinates by back-substitution: the basis is
    // unit triangular in the leading coefficients.
    auto basis = basis_Mk(k, work);
    QSeries<BigRat> rest = s;
    std::vector<BigRat> coords(basis.size(), BigRat(0));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        coords[i] = rest.c[i];
        if (coords[i] != 0) rest = rest - coords[i] * basis[i].expansion;
    }
    for (const auto& v : rest.c) internal_check(v == 0, "eisenstein must lie in the monomial span");
    ModularForm f;
    f.weight = k;
    f.coords = std::move(coords);
    f.expansion = s.truncate(N);
    return f;
}

inline ModularForm delta(int N) {
    ModularForm f;
    f.weight = 12;
    f.coords = {BigRat(0), BigRat(1)};
    f.expansion = mfdetail::delta_series(N);
    return f;
}

// The unique weight-k form with expansion 1 + 0*q + ... + 0*q^{dim-1}.
inline ModularForm extremal_form(long k, int N) {
    long dim = dim_Mk(k);
    if (dim < 1) throw PreconditionViolation("no form of this weight has constant term one");
    int work = std::max(N, static_cast<int>(dim));
    auto basis = basis_Mk(k, work);
    QSeries<BigRat> acc(work);
    std::vector<BigRat> coords(basis.size(), BigRat(0));
    for (long j = 0; j < dim; ++j) {
        BigRat want = (j == 0) ? BigRat(1) : BigRat(0);
        BigRat c = want - acc.c[static_cast<std::size_t>(j)];
        coords[static_cast<std::size_t>(j)] = c;
        if (c != 0) acc = acc + c * basis[static_cast<std::size_t>(j)].expansion;
    }
    ModularForm f;
    f.weight = k;
    f.coords = std::move(coords);
    f.expansion = acc.truncate(N);
    for (long j = 1; j < dim && j <= N; ++j)
        internal_check(f.expansion.c[static_cast<std::size_t>(j)] == 0,
                       "extremal expansion must start 1 + O(q^dim)");
    return f;
}

inline FpSeries reduce_mod(const QSeries<BigRat>& s, std::uint64_t p) {
    FpSeries r;
    r.p = p;
    r.prec = s.prec;
    r.c.resize(static_cast<std::size_t>(s.prec) + 1);
    for (int k = 0; k <= s.prec; ++k) r.c[static_cast<std::size_t>(k)] = to_u64_mod(s.c[static_cast<std::size_t>(k)], p);
    return r;
}

inline FpSeries reduce_mod(const QSeries<BigInt>& s, std::uint64_t p) {
    return reduce_mod(to_rational(s), p);
}

inline FpSeries reduce_mod(const ModularForm& f, std::uint64_t p) { return reduce_mod(f.expansion, p); }

} // namespace lattheta
