#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stokeslab/circle.hpp"
#include "stokeslab/stokes.hpp"

using namespace stokeslab;

namespace {

// rank-1 constant sheaf on a 2-vertex complex
CellSheaf constant_sheaf_two_vertices() {
    CellSheaf f;
    f.cx = arc_complex({Ray(0, 1)});
    f.vdim = {1, 1};
    f.adim = {1, 1};
    f.rho_start = {QMatrix::identity(1), QMatrix::identity(1)};
    f.rho_end = {QMatrix::identity(1), QMatrix::identity(1)};
    return f;
}

// extension by zero of rank 1 on the arc through (1,0)
CellSheaf arc_supported_sheaf() {
    CellSheaf f;
    f.cx = arc_complex({Ray(0, 1)});
    // vertices sorted: (0,1), (0,-1); arc 0 = (0,1)->(0,-1) through (-1,0),
    // arc 1 = (0,-1)->(0,1) through (1,0)
    f.vdim = {0, 0};
    f.adim = {0, 1};
    f.rho_start = {QMatrix(0, 0), QMatrix(1, 0)};
    f.rho_end = {QMatrix(0, 0), QMatrix(1, 0)};
    return f;
}

}  // namespace

TEST_CASE("arc complexes") {
    ArcComplex empty = arc_complex({});
    CHECK(empty.n_vertices() == 0);
    CHECK(empty.n_arcs() == 1);
    CHECK(empty.reps[0] == Ray(1, 0));

    ArcComplex two = arc_complex({Ray(0, 1)});
    CHECK(two.n_vertices() == 2);  // antipodal closure
    CHECK(two.vertices[0] == Ray(0, 1));
    CHECK(two.vertices[1] == Ray(0, -1));
    CHECK(two.reps[0] == Ray(-1, 0));
    CHECK(two.reps[1] == Ray(1, 0));

    // Stokes rays of C = {0, 1, i}: four quadrant vertices
    std::vector<GRat> pts = {GRat(0, 0), GRat(1, 0), GRat(0, 1)};
    ArcComplex four = arc_complex(stokes_rays(pts));
    CHECK(four.n_vertices() == 6);
    ArcComplex quad = arc_complex(stokes_rays({GRat(0, 0), GRat(1, 0), GRat(0, 1)}));
    // pairs: 0-1 walls (0,+-1); 0-i walls (+-1,0); 1-i walls +-(1,1)
    CHECK(quad.vertex_index(Ray(0, 1)) >= 0);
    CHECK(quad.vertex_index(Ray(1, 0)) >= 0);
    CHECK(quad.vertex_index(Ray(1, 1)) >= 0);
    CHECK(quad.vertex_index(Ray(-1, -1)) >= 0);
}

TEST_CASE("cohomology of local systems without vertices") {
    CellSheaf f;
    f.cx = arc_complex({});
    f.adim = {1};
    f.monodromy = QMatrix::identity(1);
    Cohomology c = sheaf_cohomology(f);
    CHECK(c.h0 == 1);
    CHECK(c.h1 == 1);

    f.monodromy.at(0, 0) = 2;
    c = sheaf_cohomology(f);
    CHECK(c.h0 == 0);
    CHECK(c.h1 == 0);
}

TEST_CASE("cohomology of the constant and arc-supported sheaves") {
    Cohomology c = sheaf_cohomology(constant_sheaf_two_vertices());
    CHECK(c.h0 == 1);
    CHECK(c.h1 == 1);

    c = sheaf_cohomology(arc_supported_sheaf());
    CHECK(c.h0 == 0);
    CHECK(c.h1 == 1);
}

TEST_CASE("euler characteristic identity") {
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        // random sheaf on a 4-vertex complex with identity-friendly shapes
        CellSheaf f;
        f.cx = arc_complex({Ray(0, 1), Ray(1, 0)});
        int m = f.cx.n_vertices();
        f.vdim.resize(m);
        f.adim.resize(m);
        f.rho_start.resize(m);
        f.rho_end.resize(m);
        for (int i = 0; i < m; ++i) {
            f.vdim[i] = static_cast<int>(rng.below(3));
            f.adim[i] = static_cast<int>(rng.below(3));
        }
        for (int i = 0; i < m; ++i) {
            int ve = (i + 1) % m;
            f.rho_start[i] = QMatrix(f.adim[i], f.vdim[i]);
            f.rho_end[i] = QMatrix(f.adim[i], f.vdim[ve]);
            for (auto& v : f.rho_start[i].a) v = rng.rat(3, 2);
            for (auto& v : f.rho_end[i].a) v = rng.rat(3, 2);
        }
        Cohomology c = sheaf_cohomology(f);
        CHECK(c.h0 - c.h1 == f.total_vdim() - f.total_adim());
    }
}

TEST_CASE("refinement leaves cohomology unchanged") {
    CellSheaf f = arc_supported_sheaf();
    Refined r = refine_with_comparison(f, {Ray(2, 1), Ray(1, 3)});
    Cohomology c = sheaf_cohomology(r.fine);
    CHECK(c.h0 == 0);
    CHECK(c.h1 == 1);
    CHECK(is_invertible(r.h1_map));

    // refining inside the support keeps H1
    Refined r2 = refine_with_comparison(f, {Ray(1, 0)});
    CHECK(sheaf_cohomology(r2.fine).h1 == 1);

    // idempotence: refine twice equals refine once with the union
    CellSheaf a = refine(refine(f, {Ray(2, 1)}), {Ray(1, 3)});
    CellSheaf b = refine(f, {Ray(2, 1), Ray(1, 3)});
    CHECK(sheaves_equal(a, b));

    // vertexless local systems refine with a monodromy carrier
    CellSheaf ls;
    ls.cx = arc_complex({});
    ls.adim = {2};
    ls.monodromy = QMatrix::identity(2);
    ls.monodromy.at(0, 1) = 1;
    Refined r3 = refine_with_comparison(ls, {Ray(1, 2)});
    Cohomology c0 = sheaf_cohomology(ls);
    Cohomology c1 = sheaf_cohomology(r3.fine);
    CHECK(c0.h0 == c1.h0);
    CHECK(c0.h1 == c1.h1);
}

TEST_CASE("maps on cohomology") {
    CellSheaf f = constant_sheaf_two_vertices();
    Cohomology cf = sheaf_cohomology(f);

    SheafMap idm;
    idm.src = &f;
    idm.tgt = &f;
    idm.on_vertex = {QMatrix::identity(1), QMatrix::identity(1)};
    idm.on_arc = {QMatrix::identity(1), QMatrix::identity(1)};
    CohomologyMap m = map_on_cohomology(idm, cf, cf);
    CHECK(m.h0 == QMatrix::identity(1));
    CHECK(m.h1 == QMatrix::identity(1));

    SheafMap zm = idm;
    zm.on_vertex = {QMatrix(1, 1), QMatrix(1, 1)};
    zm.on_arc = {QMatrix(1, 1), QMatrix(1, 1)};
    m = map_on_cohomology(zm, cf, cf);
    CHECK(m.h0.is_zero());
    CHECK(m.h1.is_zero());

    // inclusion of the arc-supported subsheaf into the constant sheaf
    CellSheaf sub = arc_supported_sheaf();
    Cohomology cs = sheaf_cohomology(sub);
    SheafMap inc;
    inc.src = &sub;
    inc.tgt = &f;
    inc.on_vertex = {QMatrix(1, 0), QMatrix(1, 0)};
    inc.on_arc = {QMatrix(1, 0), QMatrix::identity(1)};
    m = map_on_cohomology(inc, cs, cf);
    CHECK(rank_of(m.h1) == 1);

    // a non-commuting map is rejected
    SheafMap bad = idm;
    bad.on_arc = {QMatrix::identity(1), -QMatrix::identity(1)};
    CHECK_THROWS_AS(map_on_cohomology(bad, cf, cf), SemanticError);
}

TEST_CASE("subdivision invariance is an isomorphism on random sheaves") {
    Rng rng(17);
    for (int t = 0; t < 10; ++t) {
        CellSheaf f;
        f.cx = arc_complex({Ray(0, 1)});
        int m = f.cx.n_vertices();
        f.vdim = {1 + static_cast<int>(rng.below(2)), 1 + static_cast<int>(rng.below(2))};
        f.adim = {2, 2};
        f.rho_start.resize(m);
        f.rho_end.resize(m);
        for (int i = 0; i < m; ++i) {
            int ve = (i + 1) % m;
            f.rho_start[i] = QMatrix(2, f.vdim[i]);
            f.rho_end[i] = QMatrix(2, f.vdim[ve]);
            for (auto& v : f.rho_start[i].a) v = rng.rat(2, 2);
            for (auto& v : f.rho_end[i].a) v = rng.rat(2, 2);
        }
        Refined r = refine_with_comparison(f, {Ray(3, 1), Ray(-1, 5)});
        Cohomology c0 = sheaf_cohomology(f), c1 = sheaf_cohomology(r.fine);
        CHECK(c0.h0 == c1.h0);
        CHECK(c0.h1 == c1.h1);
        CHECK(is_invertible(r.h0_map));
        CHECK(is_invertible(r.h1_map));
    }
}
