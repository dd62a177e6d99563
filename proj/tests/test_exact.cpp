#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stokeslab/qmatrix.hpp"
#include "stokeslab/qpoly.hpp"
#include "stokeslab/stokes.hpp"

using namespace stokeslab;

TEST_CASE("ray normalization") {
    CHECK(ray_normalize(GRat(Rat(1, 2), Rat(0))) == Ray(1, 0));
    CHECK(ray_normalize(GRat(Rat(0), Rat(-3, 4))) == Ray(0, -1));
    CHECK(ray_normalize(GRat(Rat(2, 3), Rat(2, 3))) == Ray(1, 1));
    CHECK_THROWS_AS(ray_normalize(GRat(0, 0)), SemanticError);
}

TEST_CASE("cyclic order of rays") {
    CHECK(cyclic_less(Ray(1, 0), Ray(0, 1)));
    CHECK(cyclic_less(Ray(0, 1), Ray(-1, 0)));
    CHECK(cyclic_less(Ray(1, 0), Ray(1, 1)));
    CHECK(cyclic_less(Ray(1, 1), Ray(0, 1)));
    // strict total order on distinct sampled rays
    auto dirs = primitive_directions(40);
    for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = 0; j < dirs.size(); ++j) {
            if (i == j) continue;
            CHECK(cyclic_less(dirs[i], dirs[j]) != cyclic_less(dirs[j], dirs[i]));
        }
}

TEST_CASE("dominance signs") {
    GRat zero(0, 0), one(1, 0);
    CHECK(dominance(zero, one, Ray(1, 0)) == -1);
    CHECK(dominance(zero, one, Ray(0, 1)) == 0);
    CHECK(dominance(zero, one, Ray(-1, 0)) == 1);
}

TEST_CASE("dominance antisymmetry and antipode flip") {
    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        GRat c(rng.rat(4, 3), rng.rat(4, 3));
        GRat cp(rng.rat(4, 3), rng.rat(4, 3));
        if (c == cp) continue;
        Ray u(1 + rng.below(5), rng.below(7) - 3);
        u = ray_make(u.x, u.y);
        CHECK(dominance(c, cp, u) == -dominance(cp, c, u));
        CHECK(dominance(c, cp, u.antipode()) == -dominance(c, cp, u));
        // zero exactly on the two antipodal wall rays
        Ray w = ray_normalize((c - cp).times_i());
        CHECK(dominance(c, cp, w) == 0);
        CHECK(dominance(c, cp, w.antipode()) == 0);
    }
}

TEST_CASE("rank and kernel") {
    QMatrix id2 = QMatrix::identity(2);
    auto rk = rank_and_kernel(id2);
    CHECK(rk.rank == 2);
    CHECK(rk.kernel.cols == 0);

    QMatrix z(2, 3);
    rk = rank_and_kernel(z);
    CHECK(rk.rank == 0);
    CHECK(rk.kernel.cols == 3);

    QMatrix m(2, 2);
    m.at(0, 0) = 1;
    m.at(0, 1) = 2;
    m.at(1, 0) = 2;
    m.at(1, 1) = 4;
    rk = rank_and_kernel(m);
    CHECK(rk.rank == 1);
    REQUIRE(rk.kernel.cols == 1);
    CHECK(rk.kernel.at(0, 0) == Rat(-2));
    CHECK(rk.kernel.at(1, 0) == Rat(1));
    // kernel vectors are exact
    CHECK((m * rk.kernel).is_zero());
}

TEST_CASE("solve and invert") {
    QMatrix d(2, 2);
    d.at(0, 0) = 2;
    d.at(1, 1) = 3;
    QMatrix inv = inverse(d);
    CHECK(inv.at(0, 0) == Rat(1, 2));
    CHECK(inv.at(1, 1) == Rat(1, 3));

    QMatrix a(1, 2);
    a.at(0, 0) = 1;
    a.at(0, 1) = 1;
    QMatrix b(1, 1);
    b.at(0, 0) = 2;
    auto x = solve(a, b);
    REQUIRE(x.has_value());
    CHECK(x->at(0, 0) == Rat(2));
    CHECK(x->at(1, 0) == Rat(0));

    QMatrix s(2, 2);
    s.at(0, 0) = 1;
    s.at(0, 1) = 1;
    s.at(1, 0) = 1;
    s.at(1, 1) = 1;
    CHECK_THROWS_AS(inverse(s), SemanticError);

    QMatrix rhs(2, 1);
    rhs.at(0, 0) = 1;
    rhs.at(1, 0) = 0;
    CHECK_FALSE(solve(s, rhs).has_value());
}

TEST_CASE("kernel composed with solve is exact") {
    Rng rng(11);
    for (int t = 0; t < 30; ++t) {
        QMatrix m(3, 4);
        for (auto& v : m.a) v = rng.rat(5, 3);
        auto rk = rank_and_kernel(m);
        CHECK((m * rk.kernel).is_zero());
        CHECK(rk.rank + rk.kernel.cols == 4);
    }
}

TEST_CASE("rational parsing") {
    CHECK(rat_from_string("3/6") == Rat(1, 2));
    CHECK(rat_from_string("-4") == Rat(-4));
    CHECK(rat_to_string(Rat(3)) == "3/1");
    CHECK_THROWS_AS(rat_from_string("1/0"), ParseError);
    CHECK_THROWS_AS(rat_from_string("a/2"), ParseError);
}

TEST_CASE("characteristic polynomial and invariant factors") {
    QMatrix m(2, 2);
    m.at(0, 0) = 2;
    m.at(1, 1) = 2;
    QPoly cp = char_poly(m);
    // (x-2)^2
    CHECK(cp == QPoly({Rat(4), Rat(-4), Rat(1)}));
    auto inv = invariant_factors(m);
    REQUIRE(inv.size() == 2);  // diagonalizable: x-2, x-2
    CHECK(inv[0] == QPoly({Rat(-2), Rat(1)}));
    CHECK(inv[1] == QPoly({Rat(-2), Rat(1)}));

    QMatrix j(2, 2);
    j.at(0, 0) = 2;
    j.at(0, 1) = 1;
    j.at(1, 1) = 2;
    auto invj = invariant_factors(j);
    REQUIRE(invj.size() == 1);  // one Jordan block: (x-2)^2
    CHECK(invj[0] == QPoly({Rat(4), Rat(-4), Rat(1)}));
}

TEST_CASE("quotient presentation") {
    QMatrix b(3, 1);
    b.at(0, 0) = 1;
    b.at(1, 0) = 1;
    Quotient q = quotient_of(b, 3);
    CHECK(q.dim == 2);
    // proj kills the subspace and is a retraction on the lift
    CHECK((q.proj * b).is_zero());
    CHECK(q.proj * q.lift == QMatrix::identity(2));
}
