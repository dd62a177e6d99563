#ifndef STOKESLAB_EULER_HPP
#define STOKESLAB_EULER_HPP

#include <string>
#include <vector>

#include "stokeslab/exact.hpp"

namespace stokeslab {

// Elementary rank-one model d + d(phi) + sum alpha_i dx_i/x_i with
// phi = u x^{-e}; phi_leading is u(0), zero iff phi vanishes identically.
struct ElementaryModel {
    int ell = 1;
    std::vector<long> e;
    GRat phi_leading;
    std::vector<GRat> alpha;
    int rank = 1;
};

void check_model(const ElementaryModel& m);  // throws SemanticError

// chi((S^1)^ell, L_{<=0}); the classical irregularity is its negation.
long irr_elementary(const ElementaryModel& m);

// Independent combinatorial oracle for the decay locus
// {theta : Re(phi0 exp(-i<e,theta>)) > 0} on the torus, ell in {1,2}.
long torus_chi_c(const std::vector<long>& e, const GRat& phi_leading, int ell);

struct StratumDatum {
    long chi_local = 0;
    long chi_stratum = 0;
};
long chi_stratified(const std::vector<StratumDatum>& strata);

struct TripleReport {
    long value = 0;
    bool equal = true;
    std::string text;
};
TripleReport check_triple_equality(const ElementaryModel& m, const std::vector<GRat>& twist_beta);

struct RamifiedResult {
    long scaled_irr = 0;
    long degree = 1;
};
RamifiedResult ramified_irr(const ElementaryModel& m, const std::vector<long>& d);

}  // namespace stokeslab

#endif
