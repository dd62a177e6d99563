#ifndef STOKESLAB_NEWTON_HPP
#define STOKESLAB_NEWTON_HPP

#include <optional>
#include <string>
#include <vector>

#include "stokeslab/exact.hpp"

namespace stokeslab {

// Vertex set of the hull of a union of shifted octants -e + N^ell, with
// recession cone the positive orthant. Vertices sorted lexicographically.
struct NewtonPolyhedron {
    int ell = 0;
    std::vector<std::vector<long>> vertices;

    bool operator==(const NewtonPolyhedron& o) const {
        return ell == o.ell && vertices == o.vertices;
    }
    bool has_vertex(const std::vector<long>& v) const;
};

NewtonPolyhedron newton_polyhedron(int ell, std::vector<std::vector<long>> generators);

// Leading data of phi + sum_k a_k u'_k x^{-e'(eta_k)}.
struct TwistConfig {
    int ell = 0;
    std::vector<long> e_phi;          // exponent of phi (poles as positives)
    GRat u_phi;                       // leading unit, zero iff phi absent
    std::vector<std::vector<long>> e_eta;
    std::vector<GRat> u_eta;          // zero entries mean the term vanishes
};
void check_twist_config(const TwistConfig& cfg);

// One affine equation u + sum_k coef_k a_k = 0 over the Gaussian rationals.
struct VertexHyperplane {
    std::vector<long> vertex;  // the vertex -e these coefficients belong to
    GRat constant;             // delta_{e(phi),e} u_phi(0,0)
    std::vector<GRat> coef;    // per twist index k, zero when not matching
    std::string text() const;
};
std::vector<VertexHyperplane> vertex_hyperplanes(const TwistConfig& cfg);

NewtonPolyhedron twisted_np(const TwistConfig& cfg, const std::vector<GRat>& a);
bool is_generic(const TwistConfig& cfg, const std::vector<GRat>& a);

// No relation sum m_i res_i = 0 with m in N^k minus 0; residues nonzero.
bool nonresonant(const std::vector<GRat>& residues);

struct ResidueMatrix {
    std::vector<std::vector<GRat>> res;     // [k][i]
    std::vector<std::vector<GRat>> A;       // exponent sets per component i
    long d = 1;                             // maximal ramification order
};
struct IntegralCoefReport {
    bool pass = true;
    std::vector<std::string> violations;
    std::vector<int> degenerate_components;  // linear form identically zero
};
IntegralCoefReport integral_coef_check(const ResidueMatrix& rm, const std::vector<GRat>& a);

// exp(-2 pi i alpha) is never a root of unity of order <= d, for each alpha.
bool criterion_eigenvalues(const std::vector<GRat>& alphas, long d);

struct BernsteinData {
    // s - (alpha - m) as the pair (1, -(alpha - m)), or the constant 1
    bool constant_one = false;
    GRat root;  // alpha - m when not constant
    bool jumping_nonintegral = false;
    std::string text() const;
};
BernsteinData bernstein_rank_one(const GRat& alpha, long m, bool in_pole_support);

// Membership in (1/d) Z for a Gaussian rational.
bool in_fractional_lattice(const GRat& z, long d);

}  // namespace stokeslab

#endif
