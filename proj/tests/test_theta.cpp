#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lattheta/fixtures.hpp"
#include "lattheta/theta.hpp"

using namespace lattheta;

namespace {

IntMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
    IntMatrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (long v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

// Random even lattice 2 B^T B for a random nonsingular B.
Lattice random_even_lattice(std::mt19937_64& rng, int n, int spread) {
    std::uniform_int_distribution<int> d(-spread, spread);
    for (;;) {
        IntMatrix b(n, n);
        for (auto& v : b.a) v = d(rng);
        if (determinant(b) == 0) continue;
        IntMatrix g = transpose(b) * b;
        for (auto& v : g.a) v *= 2;
        return make_lattice(std::move(g));
    }
}

IntMatrix random_unimodular(std::mt19937_64& rng, int n, int ops) {
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    IntMatrix u = IntMatrix::identity(n);
    for (int k = 0; k < ops; ++k) {
        int i = pick(rng), j = pick(rng);
        int s = coef(rng);
        if (i == j || s == 0) continue;
        for (int c = 0; c < n; ++c) u(i, c) += BigInt(s) * u(j, c);
    }
    return u;
}

// Independent shifted-coset oracle in plain machine integers: counts x with
// (x + v)^T G (x + v) = 2m for rational v, scanning a certified box.
QSeries<BigInt> shifted_oracle(const Lattice& lat, const std::vector<BigRat>& v, int N) {
    const int n = lat.rank;
    BigInt sig = 1;
    for (const auto& q : v) sig = lcm(sig, denominator(q));
    long s = sig.get_si();
    std::vector<long> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        BigRat sc = BigRat(sig) * v[static_cast<std::size_t>(i)];
        REQUIRE(is_integer(sc));
        t[static_cast<std::size_t>(i)] = numerator(sc).get_si();
    }
    std::vector<std::vector<long>> g(static_cast<std::size_t>(n), std::vector<long>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = lat.gram(i, j).get_si();
    RatMatrix inv = rational_inverse(lat.gram);
    std::vector<long> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n)), x(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        BigRat q = BigRat(2 * N) * inv(j, j);
        long b = isqrt(floor(q)).get_si() + 2;
        lo[static_cast<std::size_t>(j)] = -b;
        hi[static_cast<std::size_t>(j)] = b;
        x[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
    }
    QSeries<BigInt> out(N);
    long s2 = s * s;
    for (;;) {
        long val = 0; // (s x + t)^T G (s x + t)
        for (int i = 0; i < n; ++i) {
            long yi = s * x[static_cast<std::size_t>(i)] + t[static_cast<std::size_t>(i)];
            if (yi == 0) continue;
            for (int j = 0; j < n; ++j) {
                long yj = s * x[static_cast<std::size_t>(j)] + t[static_cast<std::size_t>(j)];
                val += yi * g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * yj;
            }
        }
        if (val % s2 == 0) {
            long w = val / s2;
            if (w % 2 == 0 && w / 2 <= N) out.c[static_cast<std::size_t>(w / 2)] += 1;
        }
        int j = n - 1;
        while (j >= 0 && x[static_cast<std::size_t>(j)] == hi[static_cast<std::size_t>(j)]) {
            x[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
            --j;
        }
        if (j < 0) break;
        ++x[static_cast<std::size_t>(j)];
    }
    return out;
}

} // namespace

TEST_CASE("theta of the norm form of discriminant -7") {
    Lattice l = binary_to_lattice({1, 1, 2});
    auto s = theta_series(l, 2);
    CHECK(s.c == std::vector<BigInt>{1, 2, 4});
    auto s15 = theta_series(l, 15);
    CHECK(s15 == brute_force_counts(l, 15));
    CHECK(s15.c[3] == 0); // 3 is not represented by x^2 + xy + 2y^2
}

TEST_CASE("theta of E8 matches the weight 4 Eisenstein expansion") {
    auto s = theta_series(fixture_e8(), 20);
    CHECK(s.c[0] == 1);
    for (int m = 1; m <= 20; ++m) {
        BigInt sigma3 = 0;
        for (int d = 1; d <= m; ++d)
            if (m % d == 0) sigma3 += BigInt(d) * d * d;
        CHECK(s.c[static_cast<std::size_t>(m)] == 240 * sigma3);
    }
}

TEST_CASE("theta of the rank zero lattice") {
    Lattice z = make_lattice(IntMatrix(0, 0));
    auto s = theta_series(z, 5);
    CHECK(s.c == std::vector<BigInt>{1, 0, 0, 0, 0, 0});
    CHECK(brute_force_counts(z, 5) == s);
}

TEST_CASE("brute force guard") {
    Lattice big = make_lattice(BigInt(2) * IntMatrix::identity(7));
    CHECK_THROWS_AS(brute_force_counts(big, 3), PreconditionViolation);
    auto s = theta_series(big, 2);
    CHECK(s.c == std::vector<BigInt>{1, 14, 84});
}

TEST_CASE("oracle equivalence on random even lattices") {
    std::mt19937_64 rng(0xfeedbeef);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);
        Lattice l = random_even_lattice(rng, n, 3);
        INFO("trial " << trial << " gram " << l.gram);
        CHECK(theta_series(l, 10) == brute_force_counts(l, 10));
    }
}

TEST_CASE("theta is a basis invariant") {
    std::mt19937_64 rng(0x5eed);
    for (const Lattice& l : {binary_to_lattice({1, 1, 2}), fixture_f5()}) {
        auto ref = theta_series(l, 8);
        for (int trial = 0; trial < 10; ++trial) {
            IntMatrix u = random_unimodular(rng, l.rank, 12);
            Lattice m = make_lattice(transpose(u) * l.gram * u);
            CHECK(theta_series(m, 8) == ref);
        }
    }
}

TEST_CASE("thread counts do not change the result") {
    Lattice f = fixture_f5();
    auto ref = theta_series(f, 12);
    for (int threads : {2, 3, 5}) {
        ThetaOptions o;
        o.threads = threads;
        CHECK(theta_series(f, 12, o) == ref);
    }
    std::mt19937_64 rng(0xabcd);
    Lattice r = random_even_lattice(rng, 3, 3);
    ThetaOptions two;
    two.threads = 2;
    CHECK(theta_series(r, 9, two) == theta_series(r, 9));
}

TEST_CASE("direct sums multiply theta series") {
    Lattice a = binary_to_lattice({1, 1, 2});
    Lattice b = binary_to_lattice({1, 1, 3});
    auto lhs = theta_series(direct_sum(a, b), 8);
    auto rhs = theta_series(a, 8) * theta_series(b, 8);
    CHECK(lhs == rhs);

    auto lhs2 = theta_series(direct_sum(fixture_e8(), a), 6);
    auto rhs2 = theta_series(fixture_e8(), 6) * theta_series(a, 6);
    CHECK(lhs2 == rhs2);
}

TEST_CASE("enumeration budget guard") {
    CHECK_THROWS_AS(theta_series(fixture_leech(), 20), PreconditionViolation);
    ThetaOptions tight;
    tight.budget = 2.0;
    Lattice l = binary_to_lattice({1, 1, 2});
    CHECK_THROWS_AS(theta_series(l, 5, tight), PreconditionViolation);
    tight.override_budget = true;
    CHECK(theta_series(l, 5, tight) == brute_force_counts(l, 5));
}

TEST_CASE("wide dynamic range uses the big integer engine") {
    // Huge determinant forces the fallback engine; values stay tiny.
    BigInt huge = pow(BigInt(10), 36);
    IntMatrix g(2, 2);
    g(0, 0) = 2;
    g(1, 1) = 2 * huge;
    Lattice wide = make_lattice(g);
    auto s = theta_series(wide, 10);
    CHECK(s == brute_force_counts(wide, 10));
    for (int m = 1; m <= 10; ++m) {
        bool square = is_perfect_square(BigInt(m));
        CHECK(s.c[static_cast<std::size_t>(m)] == (square ? 2 : 0));
    }

    IntMatrix g2(2, 2);
    g2(0, 0) = 2;
    g2(1, 1) = 2 * pow(BigInt(10), 12);
    Lattice mid = make_lattice(g2);
    CHECK(theta_series(mid, 10) == brute_force_counts(mid, 10));
}

TEST_CASE("Leech lattice has no vectors of norm two") {
    auto s = theta_series(fixture_leech(), 1);
    CHECK(s.c == std::vector<BigInt>{1, 0});
}

TEST_CASE("coset theta at the trivial coset") {
    for (const Lattice& l : {binary_to_lattice({1, 1, 2}), fixture_f5()}) {
        DiscriminantGroup g = discriminant_group(l);
        CHECK(coset_theta(l, g, g.zero(), 10) == theta_series(l, 10));
    }
}

TEST_CASE("non-isotropic cosets are rejected") {
    Lattice l = binary_to_lattice({1, 1, 2});
    DiscriminantGroup g = discriminant_group(l);
    int rejected = 0;
    for (const auto& x : g.all_elements()) {
        if (x == g.zero()) continue;
        CHECK_THROWS_AS(coset_theta(l, g, x, 5), PreconditionViolation);
        ++rejected;
    }
    CHECK(rejected == 6);

    // The level 5 fixture's discriminant form is anisotropic as well.
    DiscriminantGroup gf = discriminant_group(fixture_f5());
    int isotropic = 0;
    for (const auto& x : gf.all_elements())
        if (gf.qbar(x) == 0) ++isotropic;
    CHECK(isotropic == 1);
}

TEST_CASE("isotropic cosets of a doubled lattice") {
    Lattice ff = direct_sum(fixture_f5(), fixture_f5());
    DiscriminantGroup g = discriminant_group(ff);
    REQUIRE(g.order == 625);
    std::vector<DiscElement> iso;
    for (const auto& x : g.all_elements())
        if (x != g.zero() && g.qbar(x) == 0) iso.push_back(x);
    REQUIRE(!iso.empty());

    int checked = 0;
    for (const auto& rho : iso) {
        if (checked == 3) break; // box oracle is the slow part; sample a few
        auto v = g.rational_representative(rho);
        auto s = coset_theta(ff, g, rho, 3);
        CHECK(s.c[0] == 0); // a nonzero coset has no vector of norm zero
        CHECK(s == shifted_oracle(ff, v, 3));
        ++checked;
    }
    CHECK(checked == 3);

    ThetaOptions two;
    two.threads = 2;
    CHECK(coset_theta(ff, g, iso.front(), 3, two) == coset_theta(ff, g, iso.front(), 3));
}
