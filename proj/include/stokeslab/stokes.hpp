#ifndef STOKESLAB_STOKES_HPP
#define STOKESLAB_STOKES_HPP

#include <functional>
#include <string>
#include <vector>

#include "stokeslab/circle.hpp"

namespace stokeslab {

// Stokes-filtered local system of exponential type on S^1: graded frame
// E_1 + ... + E_n on every arc of the base arrangement, invertible
// transitions at its vertices. The base arrangement is the Stokes rays of
// the point set together with +-(1,0); the extra pair carries the identity
// except that for n = 1 the vertex (1,0) holds the monodromy.
struct StokesSystem {
    std::vector<GRat> points;
    std::vector<int> ranks;
    ArcComplex base;
    std::vector<QMatrix> trans;      // per base vertex
    std::vector<bool> is_stokes;     // per base vertex: genuine Stokes ray?

    int rank_total() const;
    std::vector<int> block_offset() const;  // size n+1
    // Row indices of the blocks listed in idx (ascending point indices).
    std::vector<int> block_rows(const std::vector<int>& idx) const;
};

std::vector<Ray> stokes_rays(const std::vector<GRat>& points);
// Wall rays of t relative to the point set: +-i(c - t) over c != t.
std::vector<Ray> wall_rays(const std::vector<GRat>& points, const GRat& t);

// Transitions are given for genuine Stokes rays only; `monodromy` is used
// when n = 1. Throws SemanticError on shape or arrangement mismatches.
StokesSystem make_stokes(std::vector<GRat> points, std::vector<int> ranks,
                         const std::vector<std::pair<Ray, QMatrix>>& transitions,
                         const QMatrix* monodromy = nullptr);

struct ValidationReport {
    bool pass = true;
    std::string message = "ok";
};
ValidationReport validate(const StokesSystem& sys);

// Index set {i : c_i REL_u t} with REL = < (strict) or <= .
std::vector<int> below_set(const StokesSystem& sys, const GRat& t, const Ray& u, bool strict);

// Filtration sheaf L_{<t} or L_{<=t} on the arrangement refined by the wall
// rays of t and by `extra`. Stalks are expressed in the graded frame of the
// containing base arc.
CellSheaf filtration_sheaf(const StokesSystem& sys, const GRat& t, bool strict,
                           const std::vector<Ray>& extra = {});

// Same machinery with an arbitrary per-arc index-set rule (used for the
// two-endpoint intersection sheaves of transport steps).
using IndexRule = std::function<std::vector<int>(const Ray&)>;

// Sub-sheaf together with the frame data needed to build inclusion maps:
// per-arc frame rows and per-vertex germ bases in the full frame.
struct SubSheafData {
    CellSheaf sheaf;
    std::vector<std::vector<int>> arc_rows;
    std::vector<QMatrix> germ;
};
SubSheafData sub_sheaf_data(const StokesSystem& sys, const std::vector<Ray>& extra,
                            const IndexRule& rule);
CellSheaf sub_sheaf_on(const StokesSystem& sys, const std::vector<Ray>& extra,
                       const IndexRule& rule);

// Inclusion sub -> super over the same complex; fails if not contained.
SheafMap sub_sheaf_inclusion(const SubSheafData& sub, const SubSheafData& super);

struct FiltCohomology {
    int h0 = 0, h1 = 0;
    Cohomology coh;
    CellSheaf sheaf;
};
FiltCohomology filtration_cohomology(const StokesSystem& sys, const GRat& t, bool strict);

QMatrix gr_monodromy(const StokesSystem& sys, int point_index);
QMatrix total_monodromy(const StokesSystem& sys);

// Germ dimension pair (dim L_{<c,v}, dim L_{<=c,v}) for every base vertex
// and every point; rows follow the vertex order of the base complex.
std::vector<std::vector<std::pair<int, int>>> stalk_dimension_table(const StokesSystem& sys);

// The +/- kernel-sign variant: substitution tau -> -tau, i.e. antipodal
// reindexing c -> -c with transitions moved to the antipodal vertices.
StokesSystem antipode_twist(const StokesSystem& sys);

// Deterministic seeded generator of valid systems (block-triangular in the
// order at each wall, invertible diagonal blocks).
struct Rng {
    unsigned long long state;
    explicit Rng(unsigned long long seed) : state(seed ^ 0x9e3779b97f4a7c15ULL) {}
    unsigned long long next();
    long below(long bound);  // in [0, bound)
    Rat rat(long num_range, long den_max);
};
StokesSystem random_stokes_system(Rng& rng, int n_max, int r_max);

}  // namespace stokeslab

#endif
