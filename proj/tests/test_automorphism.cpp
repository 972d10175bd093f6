#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "lattheta/automorphism.hpp"
#include "lattheta/fixtures.hpp"

using namespace lattheta;

namespace {

IntMatrix from_rows(const std::vector<std::vector<long>>& rows) {
    IntMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows.empty() ? 0 : rows[0].size()));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

Lattice scaled_cube(int n) {
    IntMatrix g = IntMatrix::identity(n);
    for (int i = 0; i < n; ++i) g(i, i) = 2;
    return make_lattice(std::move(g));
}

IntMatrix cyclic_shift(int n) {
    IntMatrix p(n, n);
    for (int i = 0; i < n; ++i) p((i + 1) % n, i) = 1;
    return p;
}

Lattice a4_lattice() {
    return make_lattice(from_rows({{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {0, 0, -1, 2}}), "A4");
}

// Product of the simple reflections of a root lattice whose Gram matrix has
// diagonal 2: the reflection in basis vector i sends e_j to e_j - G(i,j) e_i.
IntMatrix coxeter_element(const IntMatrix& gram) {
    const int n = gram.rows;
    IntMatrix u = IntMatrix::identity(n);
    for (int i = 0; i < n; ++i) {
        IntMatrix r = IntMatrix::identity(n);
        for (int j = 0; j < n; ++j) r(i, j) -= gram(i, j);
        u = u * r;
    }
    return u;
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

RatMatrix unimodular_inverse(const IntMatrix& u) {
    RatMatrix inv = rational_inverse(to_rational(u));
    REQUIRE(is_integral(inv));
    return inv;
}

} // namespace

TEST_CASE("automorphism construction validates isometry and shape") {
    Lattice l = binary_to_lattice(BinaryForm{1, 1, 2});
    LatticeAutomorphism id = make_automorphism(l, IntMatrix::identity(2));
    CHECK(id.order == 1);
    IntMatrix neg = IntMatrix::identity(2);
    neg(0, 0) = -1;
    neg(1, 1) = -1;
    CHECK(make_automorphism(l, neg).order == 2);
    CHECK_THROWS_AS(make_automorphism(l, from_rows({{1, 1}, {0, 1}})), NotIsometry);
    CHECK_THROWS_AS(make_automorphism(l, IntMatrix::identity(3)), InvalidInput);
}

TEST_CASE("orders of coordinate isometries") {
    Lattice c5 = scaled_cube(5);
    IntMatrix p5 = cyclic_shift(5);
    CHECK(make_automorphism(c5, p5).order == 5);
    CHECK(make_automorphism(c5, p5 * p5).order == 5);

    IntMatrix negshift = BigInt(-1) * p5;
    CHECK(make_automorphism(c5, negshift).order == 10);

    Lattice c7 = scaled_cube(7);
    CHECK(make_automorphism(c7, cyclic_shift(7)).order == 7);

    Lattice c25 = scaled_cube(25);
    CHECK(make_automorphism(c25, cyclic_shift(25)).order == 25);

    Lattice c12 = scaled_cube(12);
    IntMatrix mixed = block_diag(cyclic_shift(5), cyclic_shift(7));
    CHECK(make_automorphism(c12, mixed).order == 35);

    Lattice a4 = a4_lattice();
    IntMatrix cox = coxeter_element(a4.gram);
    CHECK(make_automorphism(a4, cox).order == 5);
}

TEST_CASE("order search respects the configured cap") {
    Lattice c5 = scaled_cube(5);
    CHECK_THROWS_AS(make_automorphism(c5, cyclic_shift(5), 3), OrderBoundExceeded);
    CHECK(make_automorphism(c5, cyclic_shift(5), 5).order == 5);
}

TEST_CASE("fixed lattice of a coordinate shift is the diagonal") {
    Lattice c5 = scaled_cube(5);
    LatticeAutomorphism s = make_automorphism(c5, cyclic_shift(5));
    FixedLattice f = fixed_lattice(c5, s);
    REQUIRE(f.lattice.rank == 1);
    CHECK(f.lattice.gram(0, 0) == 10);
    for (int i = 0; i < 5; ++i) CHECK(abs(f.embedding(i, 0)) == 1);

    // Saturation: the swap on a rank 2 cube fixes (1,1), not a proper multiple.
    Lattice c2 = scaled_cube(2);
    LatticeAutomorphism swap = make_automorphism(c2, from_rows({{0, 1}, {1, 0}}));
    FixedLattice g = fixed_lattice(c2, swap);
    REQUIRE(g.lattice.rank == 1);
    CHECK(g.lattice.gram(0, 0) == 4);
}

TEST_CASE("fixed lattice at the extremes") {
    Lattice e8 = fixture_e8();
    LatticeAutomorphism id = make_automorphism(e8, IntMatrix::identity(8));
    FixedLattice whole = fixed_lattice(e8, id);
    CHECK(whole.lattice.rank == 8);
    CHECK(whole.lattice.det == 1);
    CHECK(transpose(whole.embedding) * e8.gram * whole.embedding == whole.lattice.gram);

    IntMatrix neg(8, 8);
    for (int i = 0; i < 8; ++i) neg(i, i) = -1;
    FixedLattice none = fixed_lattice(e8, make_automorphism(e8, neg));
    CHECK(none.lattice.rank == 0);
    CHECK(none.lattice.det == 1);

    Lattice a4 = a4_lattice();
    LatticeAutomorphism cox = make_automorphism(a4, coxeter_element(a4.gram));
    CHECK(fixed_lattice(a4, cox).lattice.rank == 0);
}

TEST_CASE("theta congruence with the fixed lattice") {
    Lattice c5 = scaled_cube(5);
    LatticeAutomorphism s5 = make_automorphism(c5, cyclic_shift(5));
    CHECK(check_fixed_congruence(c5, s5, 5, 12));

    // Spot check the underlying residues: 112 vectors of value 5 in the cube,
    // 2 in its fixed line.
    QSeries<BigInt> full = theta_series(c5, 6);
    QSeries<BigInt> diag = theta_series(fixed_lattice(c5, s5).lattice, 6);
    CHECK(full.coeff(5) == 112);
    CHECK(diag.coeff(5) == 2);
    CHECK((full.coeff(5) - diag.coeff(5)) % 5 == 0);
    CHECK(full.coeff(1) == 10);
    CHECK(diag.coeff(1) == 0);

    Lattice c7 = scaled_cube(7);
    CHECK(check_fixed_congruence(c7, make_automorphism(c7, cyclic_shift(7)), 7, 10));

    Lattice a4 = a4_lattice();
    LatticeAutomorphism cox = make_automorphism(a4, coxeter_element(a4.gram));
    CHECK(check_fixed_congruence(a4, cox, 5, 15));
    QSeries<BigInt> ta4 = theta_series(a4, 15);
    for (int n = 1; n <= 15; ++n) CHECK(ta4.coeff(n) % 5 == 0);
}

TEST_CASE("congruence is invariant under base change") {
    std::mt19937_64 rng(0xc0a7ed);
    Lattice a4 = a4_lattice();
    IntMatrix cox = coxeter_element(a4.gram);
    Lattice c5 = scaled_cube(5);
    IntMatrix p5 = cyclic_shift(5);
    struct Case {
        const Lattice* lat;
        const IntMatrix* aut;
        std::uint64_t ell;
    };
    const Case cases[] = {{&a4, &cox, 5}, {&c5, &p5, 5}};
    for (const Case& c : cases) {
        for (int trial = 0; trial < 5; ++trial) {
            IntMatrix v = random_unimodular(rng, c.lat->rank, 14);
            RatMatrix vinv = unimodular_inverse(v);
            Lattice moved = make_lattice(transpose(v) * c.lat->gram * v);
            IntMatrix aut = to_integral(vinv * to_rational(*c.aut * v));
            LatticeAutomorphism s = make_automorphism(moved, aut);
            CHECK(s.order == make_automorphism(*c.lat, *c.aut).order);
            CHECK(check_fixed_congruence(moved, s, c.ell, 8));
        }
    }
}

TEST_CASE("congruence preconditions screen the prime and the order") {
    Lattice l2 = binary_to_lattice(BinaryForm{1, 1, 2});
    IntMatrix neg(2, 2);
    neg(0, 0) = -1;
    neg(1, 1) = -1;
    LatticeAutomorphism s = make_automorphism(l2, neg);
    CHECK_THROWS_AS(check_fixed_congruence(l2, s, 5, 6), PreconditionViolation);

    Lattice c5 = scaled_cube(5);
    LatticeAutomorphism shift = make_automorphism(c5, cyclic_shift(5));
    CHECK_THROWS_AS(check_fixed_congruence(c5, shift, 4, 6), PreconditionViolation);
    CHECK_THROWS_AS(check_fixed_congruence(c5, shift, 3, 6), PreconditionViolation);
    LatticeAutomorphism ten = make_automorphism(c5, BigInt(-1) * cyclic_shift(5));
    CHECK_THROWS_AS(check_fixed_congruence(c5, ten, 5, 6), PreconditionViolation);
    CHECK_THROWS_AS(index_report(c5, ten, 5), PreconditionViolation);
}

TEST_CASE("discriminant action of an isometry") {
    Lattice c5 = scaled_cube(5);
    DiscriminantGroup g = discriminant_group(c5);
    REQUIRE(g.ngens() == 5);
    LatticeAutomorphism s = make_automorphism(c5, cyclic_shift(5));
    IntMatrix a = disc_action_matrix(g, s);
    CHECK(fixed_subgroup_order(g, a) == 2);

    Lattice a4 = a4_lattice();
    DiscriminantGroup h = discriminant_group(a4);
    REQUIRE(h.ngens() == 1);
    REQUIRE(h.orders[0] == 5);
    IntMatrix act = disc_action_matrix(h, make_automorphism(a4, coxeter_element(a4.gram)));
    CHECK(mod_reduce(act(0, 0), 5) == 1); // order 5 forces a trivial action on Z/5
    CHECK(fixed_subgroup_order(h, act) == 5);
}

TEST_CASE("index bookkeeping for fixed lattices") {
    Lattice c5 = scaled_cube(5);
    LatticeAutomorphism s5 = make_automorphism(c5, cyclic_shift(5));
    IndexReport r = index_report(c5, s5, 5);
    CHECK(r.fixed_disc_order == 10);
    CHECK(r.disc_fixed_order == 2);
    CHECK(r.quotient_order == 2);
    CHECK(r.index_in_fixed_disc == 5);
    CHECK(r.index_in_disc_fixed == 1);

    Lattice c25 = scaled_cube(25);
    IndexReport r25 = index_report(c25, make_automorphism(c25, cyclic_shift(25)), 5);
    CHECK(r25.fixed_disc_order == 50);
    CHECK(r25.disc_fixed_order == 2);
    CHECK(r25.quotient_order == 2);
    CHECK(r25.index_in_fixed_disc == 25);
    CHECK(r25.index_in_disc_fixed == 1);

    Lattice a4 = a4_lattice();
    IndexReport ra = index_report(a4, make_automorphism(a4, coxeter_element(a4.gram)), 5);
    CHECK(ra.fixed_disc_order == 1);
    CHECK(ra.disc_fixed_order == 5);
    CHECK(ra.quotient_order == 1);
    CHECK(ra.index_in_fixed_disc == 1);
    CHECK(ra.index_in_disc_fixed == 5);

    Lattice mixed = direct_sum(a4, c5);
    IntMatrix blocks = block_diag(coxeter_element(a4.gram), cyclic_shift(5));
    LatticeAutomorphism sm = make_automorphism(mixed, blocks);
    CHECK(sm.order == 5);
    IndexReport rm = index_report(mixed, sm, 5);
    CHECK(rm.fixed_disc_order == 10);
    CHECK(rm.disc_fixed_order == 10);
    CHECK(rm.quotient_order == 2);
    CHECK(rm.index_in_fixed_disc == 5);
    CHECK(rm.index_in_disc_fixed == 5);
}

TEST_CASE("index report transports along base change") {
    std::mt19937_64 rng(0x1dbeefULL);
    Lattice c5 = scaled_cube(5);
    IntMatrix p5 = cyclic_shift(5);
    IndexReport ref = index_report(c5, make_automorphism(c5, p5), 5);
    for (int trial = 0; trial < 4; ++trial) {
        IntMatrix v = random_unimodular(rng, 5, 15);
        RatMatrix vinv = unimodular_inverse(v);
        Lattice moved = make_lattice(transpose(v) * c5.gram * v);
        IntMatrix aut = to_integral(vinv * to_rational(p5 * v));
        IndexReport got = index_report(moved, make_automorphism(moved, aut), 5);
        CHECK(got.fixed_disc_order == ref.fixed_disc_order);
        CHECK(got.disc_fixed_order == ref.disc_fixed_order);
        CHECK(got.quotient_order == ref.quotient_order);
        CHECK(got.index_in_fixed_disc == ref.index_in_fixed_disc);
        CHECK(got.index_in_disc_fixed == ref.index_in_disc_fixed);
    }
}

TEST_CASE("rank drop at a fixed lattice is a multiple of ell minus one") {
    struct Case {
        Lattice lat;
        IntMatrix aut;
        long ell;
    };
    std::vector<Case> cases;
    cases.push_back({scaled_cube(5), cyclic_shift(5), 5});
    cases.push_back({scaled_cube(7), cyclic_shift(7), 7});
    cases.push_back({scaled_cube(25), cyclic_shift(25), 5});
    {
        Lattice a4 = a4_lattice();
        IntMatrix cox = coxeter_element(a4.gram);
        cases.push_back({std::move(a4), std::move(cox), 5});
    }
    for (const Case& c : cases) {
        LatticeAutomorphism s = make_automorphism(c.lat, c.aut);
        FixedLattice f = fixed_lattice(c.lat, s);
        CHECK((c.lat.rank - f.lattice.rank) % (c.ell - 1) == 0);
    }
}
