#include <catch2/catch_amalgamated.hpp>

#include "lattheta/discriminant.hpp"
#include "lattheta/fixtures.hpp"
#include "lattheta/lattice.hpp"

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

} // namespace

TEST_CASE("make_lattice validates its input") {
    CHECK_THROWS_AS(make_lattice(IntMatrix(2, 3)), InvalidInput);
    CHECK_THROWS_AS(make_lattice(from_rows({{2, 1}, {0, 2}})), NotSymmetric);
    CHECK_THROWS_AS(make_lattice(from_rows({{1, 0}, {0, 2}})), NotEven);
    CHECK_THROWS_AS(make_lattice(from_rows({{2, 3}, {3, 2}})), NotPositiveDefinite);
    CHECK_THROWS_AS(make_lattice(from_rows({{-2, 0}, {0, -2}})), NotPositiveDefinite);
    CHECK_THROWS_AS(make_lattice(from_rows({{2, 0}, {0, 0}})), NotPositiveDefinite);
}

TEST_CASE("rank zero lattice") {
    Lattice l = make_lattice(IntMatrix(0, 0), "0");
    CHECK(l.rank == 0);
    CHECK(l.det == 1);
    CHECK(l.level == 1);
    CHECK(l.e_sum == 0);
    CHECK(l.divisors.empty());
}

TEST_CASE("binary form invariants") {
    Lattice l = binary_to_lattice({1, 1, 2});
    CHECK(l.rank == 2);
    CHECK(l.gram == from_rows({{2, 1}, {1, 4}}));
    CHECK(l.det == 7);
    CHECK(l.divisors == std::vector<BigInt>{1, 7});
    CHECK(l.level == 7);
    CHECK(l.e_sum == 8);

    Lattice m = binary_to_lattice({1, 1, 3});
    CHECK(m.det == 11);
    CHECK(m.level == 11);
    CHECK(m.e_sum == 12);

    Lattice f23 = binary_to_lattice({2, 1, 3});
    CHECK(f23.det == 23);
    CHECK(f23.level == 23);
    CHECK(f23.e_sum == 24);
}

TEST_CASE("level needs the factor two when the scaled inverse has odd diagonal") {
    Lattice l = make_lattice(from_rows({{2, 0}, {0, 4}}));
    // 4 * gram^-1 = diag(2, 1) has an odd diagonal entry.
    CHECK(l.level == 8);
}

TEST_CASE("fixture invariants") {
    Lattice e8 = fixture_e8();
    CHECK(e8.rank == 8);
    CHECK(e8.det == 1);
    CHECK(e8.level == 1);
    CHECK(e8.e_sum == 8);
    for (const auto& d : e8.divisors) CHECK(d == 1);

    Lattice f = fixture_f5();
    CHECK(f.rank == 4);
    CHECK(f.det == 25);
    CHECK(f.level == 5);
    CHECK(f.divisors == std::vector<BigInt>{1, 1, 5, 5});
    CHECK(f.e_sum == 12);

    Lattice ff = direct_sum(f, f);
    CHECK(ff.rank == 8);
    CHECK(ff.det == 625);
    CHECK(ff.level == 5);
    CHECK(ff.e_sum == 24);
    CHECK(ff.name == "F+F");
}

TEST_CASE("Leech fixture: Golay code and unimodular even lattice") {
    CHECK(golay_codewords().size() == 4096);
    Lattice leech = fixture_leech();
    CHECK(leech.rank == 24);
    CHECK(leech.det == 1);
    CHECK(leech.level == 1);
    CHECK(leech.e_sum == 24);
}

TEST_CASE("bilinear evaluation") {
    Lattice l = binary_to_lattice({1, 1, 2});
    CHECK(bilinear(l, {1, 0}, {1, 0}) == 2);
    CHECK(bilinear(l, {0, 1}, {0, 1}) == 4);
    CHECK(bilinear(l, {1, 0}, {0, 1}) == 1);
    CHECK(bilinear(l, {1, -1}, {1, -1}) == 4);
    CHECK_THROWS_AS(bilinear(l, {1}, {1, 0}), PreconditionViolation);
}

TEST_CASE("prime power level predicate") {
    Lattice l = binary_to_lattice({1, 1, 2});
    CHECK(has_prime_power_level(l, 7));
    CHECK_FALSE(has_prime_power_level(l, 5));
    Lattice e8 = fixture_e8();
    CHECK(has_prime_power_level(e8, 5));
    CHECK(has_prime_power_level(e8, 7));
    Lattice f = fixture_f5();
    CHECK(has_prime_power_level(f, 5));
    CHECK_FALSE(has_prime_power_level(f, 7));
}

TEST_CASE("admissible prime guard") {
    CHECK_NOTHROW(require_admissible_prime(5));
    CHECK_NOTHROW(require_admissible_prime(7));
    CHECK_NOTHROW(require_admissible_prime(71));
    CHECK_THROWS_AS(require_admissible_prime(2), PreconditionViolation);
    CHECK_THROWS_AS(require_admissible_prime(3), PreconditionViolation);
    CHECK_THROWS_AS(require_admissible_prime(4), PreconditionViolation);
    CHECK_THROWS_AS(require_admissible_prime(9), PreconditionViolation);
}

TEST_CASE("weight residue consistency on the fixtures") {
    {
        WeightResidue w = weight_residue(binary_to_lattice({1, 1, 2}), 7);
        CHECK(w.weight == 4);
        CHECK(w.weight_residue == 4);
        CHECK(w.expected_residue == 4);
        CHECK(w.consistent);
    }
    {
        WeightResidue w = weight_residue(fixture_f5(), 5);
        CHECK(w.weight == 6);
        CHECK(w.weight_residue == 2); // det 25 is a square: rank/2 = 2 mod 4
        CHECK(w.consistent);
    }
    {
        WeightResidue w = weight_residue(fixture_e8(), 5);
        CHECK(w.weight == 4);
        CHECK(w.weight_residue == 0);
        CHECK(w.consistent);
    }
    for (const auto& [form, l] : fixture_binary_forms()) {
        WeightResidue w = weight_residue(binary_to_lattice(form), l);
        CHECK(w.consistent);
    }
    CHECK(weight_residue(direct_sum(fixture_f5(), fixture_f5()), 5).consistent);
    CHECK_THROWS_AS(weight_residue(binary_to_lattice({1, 1, 2}), 5), PreconditionViolation);
}

TEST_CASE("discriminant group of a cyclic example") {
    Lattice l = binary_to_lattice({1, 1, 2});
    DiscriminantGroup g = discriminant_group(l);
    REQUIRE(g.ngens() == 1);
    CHECK(g.orders == std::vector<BigInt>{7});
    CHECK(g.order == 7);

    auto all = g.all_elements();
    REQUIRE(all.size() == 7);
    int isotropic = 0;
    for (const auto& x : all) {
        BigRat q = g.qbar(x);
        CHECK(denominator(q) == (x == g.zero() ? 1 : 7));
        if (q == 0) ++isotropic;
    }
    // No nonzero isotropic coset exists for this form.
    CHECK(isotropic == 1);

    // qbar is a quadratic form refining bbar.
    for (const auto& x : all)
        for (const auto& y : all) {
            BigRat lhs = g.qbar(g.add(x, y));
            BigRat rhs = frac(g.qbar(x) + g.qbar(y) + g.bbar(x, y));
            CHECK(lhs == rhs);
        }
}

TEST_CASE("discriminant group of the level 5 fixture") {
    Lattice f = fixture_f5();
    DiscriminantGroup g = discriminant_group(f);
    REQUIRE(g.ngens() == 2);
    CHECK(g.orders == std::vector<BigInt>{5, 5});
    CHECK(g.order == 25);
    auto all = g.all_elements();
    CHECK(all.size() == 25);
    for (const auto& x : all) {
        // Level 5: all qbar values are fifths.
        BigRat q = g.qbar(x);
        CHECK(mod_reduce(5 * numerator(q), denominator(q)) == 0);
    }
}

TEST_CASE("coordinates round trip through rational representatives") {
    for (const Lattice& l : {binary_to_lattice({1, 1, 2}), fixture_f5()}) {
        DiscriminantGroup g = discriminant_group(l);
        for (const auto& x : g.all_elements()) {
            auto v = g.rational_representative(x);
            CHECK(g.coords_of(v) == x);
        }
    }
    DiscriminantGroup g = discriminant_group(binary_to_lattice({1, 1, 2}));
    CHECK_THROWS_AS(g.coords_of({make_rat(1, 3), BigRat(0)}), PreconditionViolation);
}

TEST_CASE("element arithmetic is consistent") {
    DiscriminantGroup g = discriminant_group(fixture_f5());
    auto x = g.element({2, 3});
    auto acc = g.zero();
    for (int k = 0; k < 4; ++k) acc = g.add(acc, x);
    CHECK(acc == g.scale(4, x));
    CHECK(g.add(x, g.negate(x)) == g.zero());
    CHECK(g.scale(5, x) == g.zero());
}

TEST_CASE("gauss sums and the signature identity") {
    auto f_sum = gauss_sum(fixture_f5());
    CHECK(std::abs(f_sum - std::complex<double>(-5.0, 0.0)) < 1e-9);

    CHECK(milgram_residual(binary_to_lattice({1, 1, 2})) < 1e-9);
    CHECK(milgram_residual(binary_to_lattice({1, 1, 3})) < 1e-9);
    CHECK(milgram_residual(fixture_f5()) < 1e-9);
    CHECK(milgram_residual(fixture_e8()) < 1e-9);
    CHECK(milgram_residual(fixture_leech()) < 1e-9);
    CHECK(milgram_residual(direct_sum(fixture_f5(), binary_to_lattice({1, 1, 2}))) < 1e-9);
}

TEST_CASE("fixed subgroup orders") {
    DiscriminantGroup trivial = discriminant_group(fixture_e8());
    CHECK(fixed_subgroup_order(trivial, IntMatrix(0, 0)) == 1);

    DiscriminantGroup g = discriminant_group(fixture_f5());
    CHECK(fixed_subgroup_order(g, IntMatrix::identity(2)) == 25);

    IntMatrix neg(2, 2);
    neg(0, 0) = -1;
    neg(1, 1) = -1;
    CHECK(fixed_subgroup_order(g, neg) == 1); // 2 is invertible mod 5

    IntMatrix mixed(2, 2);
    mixed(0, 0) = 1;
    mixed(1, 1) = -1;
    CHECK(fixed_subgroup_order(g, mixed) == 5);

    DiscriminantGroup c7 = discriminant_group(binary_to_lattice({1, 1, 2}));
    IntMatrix two(1, 1);
    two(0, 0) = 2;
    CHECK(fixed_subgroup_order(c7, two) == 1);
    IntMatrix eight(1, 1);
    eight(0, 0) = 8; // acts as the identity mod 7
    CHECK(fixed_subgroup_order(c7, eight) == 7);
}
