#include "stokeslab/suites.hpp"

#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stokeslab/euler.hpp"
#include "stokeslab/laplace.hpp"
#include "stokeslab/newton.hpp"
#include "stokeslab/qpoly.hpp"

namespace stokeslab {

namespace {

unsigned long long mix_seed(unsigned long long seed, int k) {
    Rng r(seed + 0x5851f42d4c957f2dULL * static_cast<unsigned long long>(k + 1));
    return r.next();
}

struct CaseOutcome {
    bool pass = true;
    std::string line;
};

SuiteResult drive(const std::string& name, unsigned long long seed, int cases, bool parallel,
                  const std::function<CaseOutcome(unsigned long long, int)>& one) {
    std::vector<CaseOutcome> out(cases);
    auto body = [&](int k) {
        try {
            out[k] = one(mix_seed(seed, k), k);
        } catch (const std::exception& e) {
            out[k] = {false, std::string("exception: ") + e.what()};
        }
    };
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int k = 0; k < cases; ++k) body(k);
    } else {
        for (int k = 0; k < cases; ++k) body(k);
    }
#else
    (void)parallel;
    for (int k = 0; k < cases; ++k) body(k);
#endif
    SuiteResult res;
    res.report = "suite " + name + " seed=" + std::to_string(seed) +
                 " cases=" + std::to_string(cases) + "\n";
    int passed = 0;
    for (int k = 0; k < cases; ++k) {
        res.pass = res.pass && out[k].pass;
        passed += out[k].pass ? 1 : 0;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%03d", k);
        res.report += std::string("case ") + buf + ": " + (out[k].pass ? "PASS" : "FAIL") + " " +
                      out[k].line + "\n";
    }
    res.report += "summary: " + std::to_string(passed) + "/" + std::to_string(cases) +
                  (res.pass ? " all pass" : " FAILURES") + "\n";
    return res;
}

}  // namespace

SuiteResult suite_hkfl(unsigned long long seed, int cases, bool parallel) {
    return drive("hkfl", seed, cases, parallel, [](unsigned long long s, int) {
        Rng rng(s);
        StokesSystem sys = random_stokes_system(rng, 4, 3);
        int r = sys.rank_total();
        std::vector<GRat> ts;
        for (const auto& c : sys.points) ts.push_back(c);
        while (ts.size() < sys.points.size() + 5) {
            GRat t(rng.rat(6, 2), rng.rat(6, 2));
            bool in_c = false;
            for (const auto& c : sys.points) in_c = in_c || c == t;
            if (!in_c) ts.push_back(t);
        }
        CaseOutcome out;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const GRat& t = ts[k];
            bool at_point = k < sys.points.size();
            FiltCohomology lt = filtration_cohomology(sys, t, true);
            int want = at_point ? r - sys.ranks[k] : r;
            if (lt.h0 != 0 || lt.h1 != want) {
                out.pass = false;
                out.line = "strict cohomology off at t=" + grat_to_string(t) + " got (" +
                           std::to_string(lt.h0) + "," + std::to_string(lt.h1) + ") want (0," +
                           std::to_string(want) + ")";
                return out;
            }
            if (at_point) {
                FiltCohomology le = filtration_cohomology(sys, t, false);
                QMatrix G = gr_monodromy(sys, static_cast<int>(k));
                int fixed = G.rows - rank_of(G - QMatrix::identity(G.rows));
                if (le.h0 != fixed || le.h1 != lt.h1 + fixed) {
                    out.pass = false;
                    out.line = "lax cohomology off at c_" + std::to_string(k);
                    return out;
                }
            } else {
                if (!sheaves_equal(filtration_sheaf(sys, t, true), filtration_sheaf(sys, t, false))) {
                    out.pass = false;
                    out.line = "strict and lax sheaves differ off C";
                    return out;
                }
            }
        }
        out.line = "n=" + std::to_string(sys.points.size()) + " rank=" + std::to_string(r) + " " +
                   std::to_string(ts.size()) + " parameters checked";
        return out;
    });
}

SuiteResult suite_roundtrip(unsigned long long seed, int cases, bool parallel) {
    return drive("roundtrip", seed, cases, parallel, [](unsigned long long s, int) {
        Rng rng(s);
        StokesSystem sys = random_stokes_system(rng, 3, 2);
        CaseOutcome out;

        // transport well-definedness: refinement independence and a
        // contractible rectangle away from the points
        {
            TransportCtx ctx(sys);
            Rat m(1);
            for (const auto& c : sys.points) m = std::max(m, linf(c));
            GRat t0(m + 1, rng.rat(2, 2));
            GRat t1(m + 2, rng.rat(2, 2) + 5);
            QMatrix direct = transport(ctx, t0, t1);
            GRat mid((t0.re + t1.re) / 2, (t0.im + t1.im) / 2);
            QMatrix split = transport(ctx, mid, t1) * transport(ctx, t0, mid);
            if (!(direct == split)) {
                out.pass = false;
                out.line = "transport refinement independence violated";
                return out;
            }
            GRat a(m + 1, m + 1), b(m + 3, m + 1), c(m + 3, m + 3), d(m + 1, m + 3);
            QMatrix loop = transport_path(ctx, {a, b, c, d, a});
            if (!(loop == QMatrix::identity(loop.rows))) {
                out.pass = false;
                out.line = "contractible loop transport differs from the identity";
                return out;
            }
        }

        RoundTripReport rep = roundtrip_report(sys);
        if (!rep.pass) {
            out.pass = false;
            out.line = "round trip battery failed:\n" + rep.text();
            return out;
        }

        // inverse-side cohomology: H^1 of the assembled co-Stokes family
        LaplaceForward fwd = laplace_fwd(sys);
        for (std::size_t j = 0; j < sys.points.size(); ++j) {
            Cohomology coh = costokes_circle_cohomology(fwd.sp, sys.points[j]);
            if (coh.h0 != 0 || coh.h1 != fwd.sp.phi_dim[j]) {
                out.pass = false;
                out.line = "co-Stokes circle cohomology off at c_" + std::to_string(j);
                return out;
            }
        }
        for (int extra = 0; extra < 2; ++extra) {
            GRat sgen(rng.rat(5, 2), rng.rat(5, 2));
            bool in_c = false;
            for (const auto& c : sys.points) in_c = in_c || c == sgen;
            if (in_c) continue;
            Cohomology coh = costokes_circle_cohomology(fwd.sp, sgen);
            if (coh.h0 != 0 || coh.h1 != fwd.sp.psi_dim) {
                out.pass = false;
                out.line = "co-Stokes circle cohomology off at generic s";
                return out;
            }
        }
        out.line = "n=" + std::to_string(sys.points.size()) +
                   " rank=" + std::to_string(sys.rank_total()) +
                   " steps=" + std::to_string(fwd.transport_steps);
        return out;
    });
}

SuiteResult suite_euler(unsigned long long seed, int cases, bool parallel) {
    return drive("euler", seed, cases, parallel, [](unsigned long long s, int k) {
        Rng rng(s);
        CaseOutcome out;
        GRat phi0(rng.rat(5, 3), rng.rat(5, 3));
        if (phi0.is_zero()) phi0 = GRat(1, 1);
        long checks = 0;
        // oracle agreement across the exponent grid for this direction
        for (long e1 = 1; e1 <= 4; ++e1) {
            ElementaryModel m;
            m.ell = 1;
            m.e = {e1};
            m.phi_leading = phi0;
            m.alpha = {GRat(rng.rat(3, 2), rng.rat(3, 2))};
            long oracle = torus_chi_c(m.e, phi0, 1);
            if (irr_elementary(m) != oracle) {
                out.pass = false;
                out.line = "oracle disagreement at ell=1 e=" + std::to_string(e1);
                return out;
            }
            // additivity in the rank
            ElementaryModel m3 = m;
            m3.rank = 3;
            if (irr_elementary(m3) != 3 * irr_elementary(m)) {
                out.pass = false;
                out.line = "rank additivity violated";
                return out;
            }
            ++checks;
        }
        for (long e1 = 0; e1 <= 4; ++e1)
            for (long e2 = 0; e2 <= 4; ++e2) {
                if (e1 == 0 && e2 == 0) continue;
                ElementaryModel m;
                m.ell = 2;
                m.e = {e1, e2};
                m.phi_leading = phi0;
                m.alpha = {GRat(0, 0), GRat(0, 0)};
                if (irr_elementary(m) != torus_chi_c(m.e, phi0, 2)) {
                    out.pass = false;
                    out.line = "oracle disagreement at ell=2";
                    return out;
                }
                ++checks;
            }
        // twist/dual equality and ramification scaling
        {
            ElementaryModel m;
            m.ell = 1 + static_cast<int>(rng.below(2));
            m.e.assign(m.ell, 0);
            for (auto& e : m.e) e = rng.below(5);
            bool zero_e = true;
            for (long e : m.e) zero_e = zero_e && e == 0;
            m.phi_leading = zero_e ? GRat(0, 0) : phi0;
            for (int i = 0; i < m.ell; ++i) m.alpha.push_back(GRat(rng.rat(3, 2), rng.rat(3, 2)));
            std::vector<GRat> beta;
            for (int i = 0; i < m.ell; ++i) beta.push_back(GRat(rng.rat(3, 2), rng.rat(3, 2)));
            TripleReport tr = check_triple_equality(m, beta);
            if (!tr.equal) {
                out.pass = false;
                out.line = "triple equality failed: " + tr.text;
                return out;
            }
            std::vector<long> d;
            for (int i = 0; i < m.ell; ++i) d.push_back(1 + rng.below(4));
            RamifiedResult rr = ramified_irr(m, d);
            long base = irr_elementary(m);
            if (m.ell == 1 && rr.scaled_irr != rr.degree * base) {
                out.pass = false;
                out.line = "ramification scaling violated";
                return out;
            }
        }
        if (k == 0) {
            // pinned values from the closed form
            ElementaryModel m;
            m.ell = 1;
            m.e = {3};
            m.phi_leading = GRat(1, 0);
            m.alpha = {GRat(0, 0)};
            if (irr_elementary(m) != -3 || chi_stratified({{3, 2}, {1, -1}}) != 5) {
                out.pass = false;
                out.line = "pinned euler values off";
                return out;
            }
        }
        out.line = "phi0=" + grat_to_string(phi0) + " " + std::to_string(checks) + " grid points";
        return out;
    });
}

SuiteResult suite_newton(unsigned long long seed, int cases, bool parallel) {
    return drive("newton", seed, cases, parallel, [](unsigned long long s, int k) {
        Rng rng(s);
        CaseOutcome out;
        TwistConfig cfg;
        cfg.ell = 1 + static_cast<int>(rng.below(3));
        int r = 1 + static_cast<int>(rng.below(3));
        bool with_phi = rng.below(2) == 0;
        cfg.e_phi.assign(cfg.ell, 0);
        cfg.u_phi = GRat(0, 0);
        if (with_phi) {
            for (auto& e : cfg.e_phi) e = rng.below(6);
            cfg.u_phi = GRat(Rat(1 + rng.below(3)), rng.rat(2, 1));
        }
        for (int i = 0; i < r; ++i) {
            std::vector<long> e(cfg.ell);
            for (auto& x : e) x = rng.below(6);
            cfg.e_eta.push_back(e);
            cfg.u_eta.push_back(GRat(Rat(1 + rng.below(3)), rng.rat(2, 1)));
        }

        NewtonPolyhedron full = newton_polyhedron(cfg.ell, [&] {
            std::vector<std::vector<long>> gens;
            auto neg = [](const std::vector<long>& e) {
                std::vector<long> v(e.size());
                for (std::size_t i = 0; i < e.size(); ++i) v[i] = -e[i];
                return v;
            };
            if (!cfg.u_phi.is_zero()) gens.push_back(neg(cfg.e_phi));
            for (const auto& e : cfg.e_eta) gens.push_back(neg(e));
            return gens;
        }());

        // generic coefficients reproduce the full polyhedron
        std::vector<GRat> a;
        for (int t = 0; t < 64; ++t) {
            a.clear();
            for (int i = 0; i < r; ++i) a.push_back(GRat(rng.rat(4, 2), rng.rat(4, 2)));
            bool nonzero = true;
            for (const auto& v : a) nonzero = nonzero && !v.is_zero();
            if (nonzero && is_generic(cfg, a)) break;
            if (t == 63) {
                out.line = "no generic coefficients found (degenerate draw)";
                return out;
            }
        }
        if (!(twisted_np(cfg, a) == full)) {
            out.pass = false;
            out.line = "NP equality fails for generic coefficients";
            return out;
        }

        // placing a on one vertex hyperplane deletes that vertex
        auto planes = vertex_hyperplanes(cfg);
        for (const auto& h : planes) {
            int pivot = -1;
            for (std::size_t i = 0; i < h.coef.size(); ++i)
                if (!h.coef[i].is_zero()) pivot = static_cast<int>(i);
            if (pivot < 0) continue;
            std::vector<GRat> b = a;
            GRat acc = h.constant;
            for (std::size_t i = 0; i < h.coef.size(); ++i)
                if (static_cast<int>(i) != pivot) acc = acc + b[i] * h.coef[i];
            b[pivot] = -(acc * grat_mul_inverse(h.coef[pivot]));
            bool deleted;
            try {
                deleted = !twisted_np(cfg, b).has_vertex(h.vertex);
            } catch (const SemanticError&) {
                deleted = true;  // total cancellation
            }
            if (!deleted) {
                out.pass = false;
                out.line = "vertex survives on its hyperplane " + h.text();
                return out;
            }
            break;
        }

        if (k == 0) {
            // hand cases pinned from the formulas
            bool ok = true;
            ok = ok && !nonresonant({GRat(1, 0), GRat(-1, 0)});
            ok = ok && nonresonant({GRat(1, 0), GRat(1, 0)});
            ok = ok && !nonresonant({GRat(1, 0), GRat(0, 1), GRat(Rat(-1), Rat(-1))});
            {
                ResidueMatrix rm;
                rm.res = {{GRat(1, 0)}};
                rm.A = {{GRat(0, 0)}};
                rm.d = 1;
                ok = ok && integral_coef_check(rm, {GRat(Rat(1, 2), Rat(0))}).pass;
                rm.A = {{GRat(Rat(1, 3), Rat(0))}};
                rm.d = 3;
                ok = ok && !integral_coef_check(rm, {GRat(0, 0)}).pass;
            }
            ok = ok && !criterion_eigenvalues({GRat(Rat(1, 3), Rat(0))}, 3);
            ok = ok && criterion_eigenvalues({GRat(Rat(1, 5), Rat(0))}, 3);
            ok = ok && criterion_eigenvalues({GRat(Rat(1, 2), Rat(1))}, 100);
            if (!ok) {
                out.pass = false;
                out.line = "pinned newton hand cases off";
                return out;
            }
        }
        out.line = "ell=" + std::to_string(cfg.ell) + " r=" + std::to_string(r) + " vertices=" +
                   std::to_string(full.vertices.size());
        return out;
    });
}

SuiteResult run_suite(const std::string& name, unsigned long long seed, int cases, bool parallel) {
    if (name == "hkfl") return suite_hkfl(seed, cases, parallel);
    if (name == "roundtrip") return suite_roundtrip(seed, cases, parallel);
    if (name == "euler") return suite_euler(seed, cases, parallel);
    if (name == "newton") return suite_newton(seed, cases, parallel);
    throw SemanticError("unknown suite: " + name);
}

}  // namespace stokeslab
