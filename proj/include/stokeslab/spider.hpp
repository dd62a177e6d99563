#ifndef STOKESLAB_SPIDER_HPP
#define STOKESLAB_SPIDER_HPP

#include <array>
#include <vector>

#include "stokeslab/circle.hpp"
#include "stokeslab/stokes.hpp"

namespace stokeslab {

// Constructible sheaf on the plane with singularities in C, presented by a
// generic stalk Psi at the base point, the monodromies T_i across parallel
// cuts, and the vanishing stalks Phi_i mapping into nearby sections.
struct SpiderSheaf {
    std::vector<GRat> points;
    GRat base;
    Ray cut;
    int psi_dim = 0;
    std::vector<QMatrix> T;        // psi x psi, crossing the cut of c_i ccw
    std::vector<int> phi_dim;
    std::vector<QMatrix> g;        // psi x phi_i
};

struct PolyPath {
    std::vector<GRat> pts;
    bool closed = false;
};

// First primitive direction not parallel to any difference c_i - c_j nor to
// any Stokes ray of the set.
Ray choose_cut(const std::vector<GRat>& points);
// Base point beyond the points along the antipode of the cut.
GRat default_base(const std::vector<GRat>& points, const Ray& cut);

// Oriented coordinates adapted to the cut system: h along the cut direction,
// s along its clockwise normal, so (s, h) is positively oriented and every
// cut is {s = s_i, h >= h_i}.
struct CutFrame {
    Ray d;
    std::vector<Rat> s_pt, h_pt;  // per point of C
    Rat s_of(const GRat& p) const;
    Rat h_of(const GRat& p) const;
    GRat point_of(const Rat& s, const Rat& h) const;
};
CutFrame cut_frame(const SpiderSheaf& sp);

ValidationReport validate_spider(const SpiderSheaf& sp);

// Far reference point near radius * u, sidestepped deterministically off
// every cut ray (directions parallel to the cut need a perpendicular shift).
GRat clean_far_point(const CutFrame& f, const std::vector<GRat>& points, const Ray& u,
                     const Rat& radius);

// Crossing word along an open polygonal path; degenerate touches (waypoint
// on a cut, segment through a point) raise SemanticError.
QMatrix path_word(const SpiderSheaf& sp, const std::vector<GRat>& pts);
QMatrix loop_monodromy(const SpiderSheaf& sp, const PolyPath& path);

// Basis of the sections of the sheaf over the closed half-plane
// {t : Re[(t - s) conj(u)] >= 0}, expressed in Psi. Points other than s on
// the boundary line raise SemanticError("wall").
QMatrix halfplane_sections(const SpiderSheaf& sp, const GRat& s, const Ray& u);
// Same, expressed in the fiber at an arbitrary given interior far point.
QMatrix halfplane_sections_at(const SpiderSheaf& sp, const GRat& s, const Ray& u,
                              const GRat& far_point);

// Ordinary sheaf cohomology of the plane, by Mayer-Vietoris over the cut
// complement and small discs.
std::array<int, 3> plane_cohomology(const SpiderSheaf& sp);

}  // namespace stokeslab

#endif
