#ifndef STOKESLAB_LAPLACE_HPP
#define STOKESLAB_LAPLACE_HPP

#include <map>
#include <optional>
#include <string>

#include "stokeslab/spider.hpp"
#include "stokeslab/stokes.hpp"

namespace stokeslab {

int transport_depth_limit();  // STOKESLAB_DEPTH override, default 40

// Shared state for a chain of transports of one system: canonical H^1
// presentations per endpoint plus step accounting.
struct TransportCtx {
    const StokesSystem* sys = nullptr;
    int max_depth = 40;
    long steps = 0;

    struct Pres {
        CellSheaf sheaf;
        Cohomology coh;
    };
    std::map<std::string, Pres> cache;

    explicit TransportCtx(const StokesSystem& s);
    const Pres& pres(const GRat& t);
};

// Parallel transport H^1(S^1, L_{<t0}) -> H^1(S^1, L_{<t1}) along the
// straight segment, by safe two-endpoint intersection steps. Every step
// verifies that both inclusion maps are isomorphisms on H^1.
QMatrix transport(TransportCtx& ctx, const GRat& t0, const GRat& t1);
QMatrix transport_path(TransportCtx& ctx, const std::vector<GRat>& waypoints);
// Non-adaptive oracle with a fixed uniform subdivision.
QMatrix transport_fixed(TransportCtx& ctx, const GRat& t0, const GRat& t1, int steps);

// One-sided sandwich at a singular endpoint: H^1(L_{<c}) -> H^1(L_{<t}).
QMatrix sandwich_step(TransportCtx& ctx, const GRat& c, const GRat& t);

struct LaplaceForward {
    SpiderSheaf sp;
    long transport_steps = 0;
};
LaplaceForward laplace_fwd(const StokesSystem& sys);

// Co-Stokes data: per-arc subspace families inside an abstract fiber with
// vertex transitions given by far-circle transports.
struct CoStokesSystem {
    std::vector<GRat> points;
    ArcComplex cx;  // arc complex on the Stokes rays of C (vertexless if n=1)
    int fiber_dim = 0;
    std::vector<std::vector<QMatrix>> sub;  // [arc][point] basis of L'_{<c_j}
    std::vector<QMatrix> trans;             // per vertex (n >= 2)
    QMatrix mono;                           // full turn (n = 1)
};
CoStokesSystem laplace_bwd(const SpiderSheaf& sp);

// The family L'_{<s} assembled into a circle sheaf; returns its cohomology.
Cohomology costokes_circle_cohomology(const SpiderSheaf& sp, const GRat& s);

StokesSystem costokes_to_stokes(const CoStokesSystem& co);

struct RoundTripReport {
    bool pass = true;
    std::vector<std::string> lines;
    std::string text() const;
};
RoundTripReport roundtrip_report(const StokesSystem& sys);
RoundTripReport roundtrip_report_spider(const SpiderSheaf& sp);

// Explicit filtered isomorphism search on a bounded rational lattice.
std::optional<QMatrix> find_filtered_iso(const StokesSystem& a, const StokesSystem& b);
// Simultaneous conjugacy (P, Q_i) with P T_i = T'_i P and P g_i = g'_i Q_i.
bool find_spider_conjugacy(const SpiderSheaf& a, const SpiderSheaf& b);

}  // namespace stokeslab

#endif
