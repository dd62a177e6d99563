#ifndef STOKESLAB_CIRCLE_HPP
#define STOKESLAB_CIRCLE_HPP

#include <vector>

#include "stokeslab/qmatrix.hpp"

namespace stokeslab {

// Arc decomposition of S^1. Vertices are antipodally closed and cyclically
// sorted from (1,0); arc i runs counterclockwise from vertices[i] to
// vertices[i+1 mod m] and carries an interior representative ray. With no
// vertices there is a single arc represented by (1,0).
struct ArcComplex {
    std::vector<Ray> vertices;
    std::vector<Ray> reps;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_arcs() const { return static_cast<int>(reps.size()); }
    // Index of the arc strictly containing ray u, or -1 when u is a vertex.
    int arc_of(const Ray& u) const;
    int vertex_index(const Ray& u) const;  // -1 when absent
    // Arcs adjacent to vertex i: preceding arc ends at v_i, following starts.
    int arc_before(int vi) const { return (vi + n_arcs() - 1) % n_arcs(); }
    int arc_after(int vi) const { return vi; }
};

ArcComplex arc_complex(std::vector<Ray> rays);

// Constructible sheaf on an ArcComplex: stalk dimensions per cell plus
// generization maps from each vertex into its two adjacent arcs. A sheaf on
// the vertexless complex is a bare local system given by its monodromy.
struct CellSheaf {
    ArcComplex cx;
    std::vector<int> vdim;
    std::vector<int> adim;
    std::vector<QMatrix> rho_start;  // per arc i: stalk(v_i)     -> stalk(arc i)
    std::vector<QMatrix> rho_end;    // per arc i: stalk(v_{i+1}) -> stalk(arc i)
    QMatrix monodromy;               // only when vdim is empty

    bool vertexless() const { return cx.n_vertices() == 0; }
    int total_vdim() const;
    int total_adim() const;
    void check_shapes() const;  // throws SemanticError on mismatch
};

// H^0 with explicit basis, H^1 as a quotient presentation of the arc space.
struct Cohomology {
    int h0 = 0, h1 = 0;
    QMatrix h0_basis;  // (total vertex dim) x h0
    QMatrix h1_proj;   // h1 x (total arc dim)
    QMatrix h1_lift;   // (total arc dim) x h1
};

QMatrix sheaf_differential(const CellSheaf& f);
Cohomology sheaf_cohomology(const CellSheaf& f);

// Map of sheaves over one complex; components must commute exactly.
struct SheafMap {
    const CellSheaf* src = nullptr;
    const CellSheaf* tgt = nullptr;
    std::vector<QMatrix> on_vertex;
    std::vector<QMatrix> on_arc;
};

bool sheaf_map_commutes(const SheafMap& f);
struct CohomologyMap {
    QMatrix h0, h1;
};
// Rejects non-commuting input with SemanticError.
CohomologyMap map_on_cohomology(const SheafMap& f, const Cohomology& src_coh,
                                const Cohomology& tgt_coh);

// Insert extra vertices (antipodally closed) carrying the ambient arc stalk
// with identity generization maps; cohomology is unchanged.
CellSheaf refine(const CellSheaf& f, const std::vector<Ray>& extra);

// Same, plus the comparison isomorphisms on cohomology (coarse to fine).
struct Refined {
    CellSheaf fine;
    QMatrix h0_map, h1_map;
};
Refined refine_with_comparison(const CellSheaf& f, const std::vector<Ray>& extra);

// Comparison maps when `fine` is a sheaf already known to restrict from
// `coarse` along a vertex-set inclusion (stalks over each coarse arc copied
// onto its subdivision cells with identity transports at the new vertices).
CohomologyMap subdivision_comparison(const CellSheaf& coarse, const CellSheaf& fine,
                                     const Cohomology& coarse_coh,
                                     const Cohomology& fine_coh);

bool sheaves_equal(const CellSheaf& a, const CellSheaf& b);

}  // namespace stokeslab

#endif
