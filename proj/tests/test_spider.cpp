#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stokeslab/spider.hpp"

using namespace stokeslab;

namespace {

SpiderSheaf one_point(const Rat& t, int phi, const Rat& g) {
    SpiderSheaf sp;
    sp.points = {GRat(0, 0)};
    sp.cut = choose_cut(sp.points);
    sp.base = default_base(sp.points, sp.cut);
    sp.psi_dim = 1;
    QMatrix T(1, 1);
    T.at(0, 0) = t;
    sp.T = {T};
    sp.phi_dim = {phi};
    QMatrix G(1, phi);
    if (phi == 1) G.at(0, 0) = g;
    sp.g = {G};
    return sp;
}

}  // namespace

TEST_CASE("spider validation") {
    CHECK(validate_spider(one_point(Rat(2), 0, Rat(0))).pass);
    CHECK(validate_spider(one_point(Rat(1), 1, Rat(1))).pass);
    // T g = g fails
    ValidationReport rep = validate_spider(one_point(Rat(2), 1, Rat(1)));
    CHECK_FALSE(rep.pass);
}

TEST_CASE("loop monodromy around squares") {
    SpiderSheaf sp;
    sp.points = {GRat(0, 0), GRat(1, 0)};
    sp.cut = choose_cut(sp.points);
    sp.base = default_base(sp.points, sp.cut);
    sp.psi_dim = 1;
    QMatrix t0(1, 1), t1(1, 1);
    t0.at(0, 0) = 2;
    t1.at(0, 0) = 3;
    sp.T = {t0, t1};
    sp.phi_dim = {0, 0};
    sp.g = {QMatrix(1, 0), QMatrix(1, 0)};
    REQUIRE(validate_spider(sp).pass);

    // counterclockwise diamonds avoid touching the diagonal cuts exactly
    auto diamond = [](const GRat& c, const Rat& r) {
        PolyPath p;
        p.pts = {GRat(c.re + r, c.im), GRat(c.re, c.im + r), GRat(c.re - r, c.im),
                 GRat(c.re, c.im - r)};
        p.closed = true;
        return p;
    };
    // contractible loop enclosing nothing
    CHECK(loop_monodromy(sp, diamond(GRat(5, 2), Rat(1, 2))) == QMatrix::identity(1));
    // small counterclockwise loops around each point
    CHECK(loop_monodromy(sp, diamond(GRat(0, 0), Rat(1, 4))) == t0);
    CHECK(loop_monodromy(sp, diamond(GRat(1, 0), Rat(1, 4))) == t1);
    // a large loop around both points sees the ordered product
    QMatrix big = loop_monodromy(sp, diamond(GRat(Rat(1, 2), Rat(0)), Rat(10)));
    CHECK(det(big) == det(t0 * t1));
    CHECK((big == t0 * t1 || big == t1 * t0));

    // waypoint insertion leaves the word unchanged
    PolyPath refined = diamond(GRat(0, 0), Rat(1, 4));
    refined.pts.insert(refined.pts.begin() + 1, GRat(Rat(1, 5), Rat(1, 9)));
    CHECK(loop_monodromy(sp, refined) == t0);

    // an elementary homotopy move across cut-free territory
    PolyPath moved = diamond(GRat(0, 0), Rat(1, 4));
    moved.pts[0] = GRat(Rat(1, 3), Rat(-1, 9));
    CHECK(loop_monodromy(sp, moved) == t0);

    // degenerate touches are rejected
    PolyPath through;
    through.pts = {GRat(-1, -1), GRat(1, 1)};
    CHECK_THROWS_AS(path_word(sp, through.pts), SemanticError);
}

TEST_CASE("half-plane sections of one-point spiders") {
    // no singularity in the half-plane: everything
    SpiderSheaf tw = one_point(Rat(2), 0, Rat(0));
    QMatrix all = halfplane_sections(tw, GRat(-5, 0), Ray(-1, 0));
    CHECK(all.cols == 1);

    // half-plane containing the point, twist nontrivial: zero
    QMatrix zero = halfplane_sections(tw, GRat(-5, 0), Ray(1, 0));
    CHECK(zero.cols == 0);

    // constant-sheaf-like data: conditions absorbed by g
    SpiderSheaf cs = one_point(Rat(1), 1, Rat(1));
    QMatrix full = halfplane_sections(cs, GRat(-5, 0), Ray(1, 0));
    CHECK(full.cols == 1);

    // boundary degeneracy
    CHECK_THROWS_AS(halfplane_sections(tw, GRat(Rat(0), Rat(-3)), Ray(1, 0)), SemanticError);
}

TEST_CASE("half-plane monotonicity") {
    SpiderSheaf sp;
    sp.points = {GRat(0, 0), GRat(1, 0)};
    sp.cut = choose_cut(sp.points);
    sp.base = default_base(sp.points, sp.cut);
    sp.psi_dim = 2;
    QMatrix t0 = QMatrix::identity(2), t1 = QMatrix::identity(2);
    t0.at(0, 1) = 1;  // unipotent
    sp.T = {t0, t1};
    sp.phi_dim = {1, 2};
    QMatrix g0(2, 1);
    g0.at(0, 0) = 1;
    sp.T[1] = QMatrix::identity(2);
    sp.g = {g0, QMatrix::identity(2)};
    REQUIRE(validate_spider(sp).pass);

    // same direction, deeper half-plane imposes fewer conditions
    QMatrix big = halfplane_sections(sp, GRat(-3, 0), Ray(1, 0));   // contains both
    QMatrix small = halfplane_sections(sp, GRat(5, 0), Ray(1, 0));  // contains none
    CHECK(subspace_contained(big, small));
}

TEST_CASE("plane cohomology") {
    auto pc = plane_cohomology(one_point(Rat(2), 0, Rat(0)));
    CHECK(pc == std::array<int, 3>{0, 0, 0});

    pc = plane_cohomology(one_point(Rat(1), 1, Rat(1)));
    CHECK(pc == std::array<int, 3>{1, 0, 0});

    // extension by zero of the trivial rank-1 system is acyclic on the
    // plane: the cone of (constant sheaf -> skyscraper) has no cohomology
    pc = plane_cohomology(one_point(Rat(1), 0, Rat(0)));
    CHECK(pc == std::array<int, 3>{0, 0, 0});

    // skyscraper only
    SpiderSheaf sky;
    sky.points = {GRat(0, 0)};
    sky.cut = choose_cut(sky.points);
    sky.base = default_base(sky.points, sky.cut);
    sky.psi_dim = 0;
    sky.T = {QMatrix(0, 0)};
    sky.phi_dim = {2};
    sky.g = {QMatrix(0, 2)};
    REQUIRE(validate_spider(sky).pass);
    pc = plane_cohomology(sky);
    CHECK(pc == std::array<int, 3>{2, 0, 0});
}

TEST_CASE("injectivity of generization under vanishing plane cohomology") {
    SpiderSheaf sp = one_point(Rat(2), 0, Rat(0));
    auto pc = plane_cohomology(sp);
    REQUIRE(pc == std::array<int, 3>{0, 0, 0});
    for (const auto& g : sp.g) CHECK(rank_of(g) == g.cols);
}
