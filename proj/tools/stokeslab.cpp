#include <iostream>

#include <CLI11.hpp>

#include "stokeslab/io.hpp"
#include "stokeslab/qpoly.hpp"
#include "stokeslab/suites.hpp"

using namespace stokeslab;

namespace {

int dispatch_validate(const std::string& path) {
    Json j = load_json_file(path);
    std::string kind = j.value("kind", "stokes");
    ValidationReport rep;
    if (kind == "stokes") {
        StokesSystem sys = stokes_from_json(j);
        rep = validate(sys);
    } else if (kind == "spider") {
        SpiderSheaf sp = spider_from_json(j);
        rep = validate_spider(sp);
    } else {
        throw ParseError("unknown document kind: " + kind);
    }
    std::cout << (rep.pass ? "valid" : "invalid") << ": " << rep.message << "\n";
    return rep.pass ? 0 : 2;
}

int do_laplace(const std::string& dir, const std::string& path) {
    Json j = load_json_file(path);
    if (dir == "fwd") {
        StokesSystem sys = stokes_from_json(j);
        LaplaceForward fwd = laplace_fwd(sys);
        Json out;
        out["result"] = spider_to_json(fwd.sp);
        Json sum;
        sum["psi_dim"] = fwd.sp.psi_dim;
        sum["phi_dims"] = fwd.sp.phi_dim;
        auto pc = plane_cohomology(fwd.sp);
        sum["plane_cohomology"] = Json::array({pc[0], pc[1], pc[2]});
        sum["transport_steps"] = fwd.transport_steps;
        out["summary"] = sum;
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    if (dir == "bwd") {
        SpiderSheaf sp = spider_from_json(j);
        CoStokesSystem co = laplace_bwd(sp);
        StokesSystem sys = costokes_to_stokes(co);
        ValidationReport rep = validate(sys);
        if (!rep.pass) throw InternalError("reconstructed system invalid: " + rep.message);
        Json out;
        out["costokes"] = costokes_to_json(co);
        out["stokes"] = stokes_to_json(sys);
        Json sum;
        sum["fiber_dim"] = co.fiber_dim;
        sum["ranks"] = sys.ranks;
        out["summary"] = sum;
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    throw ParseError("laplace direction must be fwd or bwd");
}

int do_roundtrip(const std::string& path) {
    Json j = load_json_file(path);
    std::string kind = j.value("kind", "stokes");
    RoundTripReport rep;
    if (kind == "stokes")
        rep = roundtrip_report(stokes_from_json(j));
    else if (kind == "spider")
        rep = roundtrip_report_spider(spider_from_json(j));
    else
        throw ParseError("unknown document kind: " + kind);
    std::cout << rep.text();
    return rep.pass ? 0 : 2;
}

int do_cohomology(const std::string& path, const std::string& re, const std::string& im,
                  bool lax) {
    StokesSystem sys = stokes_from_json(load_json_file(path));
    GRat t(rat_from_string(re), rat_from_string(im));
    FiltCohomology c = filtration_cohomology(sys, t, !lax);
    std::cout << "H0 = " << c.h0 << "\nH1 = " << c.h1 << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stokeslab: exact Stokes-filtered local systems, their topological Laplace "
                 "transform, and the irregularity and Newton-polyhedron calculators"};
    app.require_subcommand(1);

    std::string path, dir, suite_name;
    bool lax = false, serial = false;
    unsigned long long seed = 1;
    int cases = 10;

    auto* v = app.add_subcommand("validate", "validate a Stokes or spider document");
    v->add_option("file", path)->required();

    auto* l = app.add_subcommand("laplace", "topological Laplace transform");
    l->add_option("direction", dir)->required()->check(CLI::IsMember({"fwd", "bwd"}));
    l->add_option("file", path)->required();

    auto* r = app.add_subcommand("roundtrip", "round-trip invariant battery");
    r->add_option("file", path)->required();

    std::vector<std::string> tvals{"0/1", "0/1"};
    auto* c = app.add_subcommand("cohomology", "circle cohomology of L_{<t} or L_{<=t}");
    c->add_option("file", path)->required();
    c->add_option("--t", tvals, "t as RE IM rationals p/q")->expected(2);
    auto* strict_flag = c->add_flag("--strict", "strict filtration (default)");
    c->add_flag("--lax", lax, "non-strict filtration");
    (void)strict_flag;

    auto* e = app.add_subcommand("euler", "irregularity calculators");
    std::string euler_op;
    e->add_option("op", euler_op)->required()->check(CLI::IsMember({"irr", "chi", "triple"}));
    e->add_option("file", path)->required();

    auto* nw = app.add_subcommand("newton", "Newton polyhedron calculators");
    std::string newton_op;
    nw->add_option("op", newton_op)
        ->required()
        ->check(CLI::IsMember({"hull", "generic", "forms", "nonres"}));
    nw->add_option("file", path)->required();

    auto* su = app.add_subcommand("suite", "randomized property suites");
    su->add_option("name", suite_name)
        ->required()
        ->check(CLI::IsMember({"hkfl", "roundtrip", "euler", "newton"}));
    su->add_option("--seed", seed);
    su->add_option("--cases", cases);
    su->add_flag("--serial", serial, "single-worker reference run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        app.exit(ex);
        return 1;
    }

    try {
        if (v->parsed()) return dispatch_validate(path);
        if (l->parsed()) return do_laplace(dir, path);
        if (r->parsed()) return do_roundtrip(path);
        if (c->parsed()) return do_cohomology(path, tvals[0], tvals[1], lax);
        if (e->parsed()) {
            Json j = load_json_file(path);
            if (euler_op == "irr") {
                ElementaryModel m = model_from_json(j);
                long chi = irr_elementary(m);
                std::cout << "chi = " << chi << "\nclassical irregularity = " << -chi << "\n";
                return 0;
            }
            if (euler_op == "chi") {
                std::vector<StratumDatum> strata;
                for (const auto& row : j.at("strata"))
                    strata.push_back({row[0].get<long>(), row[1].get<long>()});
                std::cout << "chi = " << chi_stratified(strata) << "\n";
                return 0;
            }
            ElementaryModel m = model_from_json(j);
            std::vector<GRat> beta;
            for (const auto& b : j.at("beta")) beta.push_back(grat_from_json(b));
            TripleReport tr = check_triple_equality(m, beta);
            std::cout << tr.text << "\n";
            if (!tr.equal) throw InternalError("triple equality violated");
            std::cout << "classical irregularity = " << -tr.value << "\n";
            return 0;
        }
        if (nw->parsed()) {
            Json j = load_json_file(path);
            if (newton_op == "hull") {
                int ell = j.at("ell").get<int>();
                std::vector<std::vector<long>> gens;
                for (const auto& g : j.at("generators")) gens.push_back(g.get<std::vector<long>>());
                NewtonPolyhedron np = newton_polyhedron(ell, gens);
                for (const auto& vtx : np.vertices) {
                    std::cout << "vertex (";
                    for (std::size_t i = 0; i < vtx.size(); ++i)
                        std::cout << vtx[i] << (i + 1 < vtx.size() ? "," : "");
                    std::cout << ")\n";
                }
                return 0;
            }
            if (newton_op == "generic") {
                TwistConfig cfg = twist_from_json(j);
                std::vector<GRat> a;
                for (const auto& x : j.at("a")) a.push_back(grat_from_json(x));
                for (const auto& h : vertex_hyperplanes(cfg)) std::cout << h.text() << "\n";
                bool g = is_generic(cfg, a);
                std::cout << (g ? "generic" : "non-generic") << "\n";
                return g ? 0 : 2;
            }
            if (newton_op == "forms") {
                ResidueMatrix rm = residues_from_json(j);
                std::vector<GRat> a;
                for (const auto& x : j.at("a")) a.push_back(grat_from_json(x));
                IntegralCoefReport rep = integral_coef_check(rm, a);
                for (const auto& line : rep.violations) std::cout << "violated: " << line << "\n";
                for (int i : rep.degenerate_components)
                    std::cout << "degenerate form at component " << i << "\n";
                std::cout << (rep.pass ? "pass" : "fail") << "\n";
                return rep.pass ? 0 : 2;
            }
            std::vector<GRat> res;
            for (const auto& x : j.at("residues")) res.push_back(grat_from_json(x));
            bool nr = nonresonant(res);
            std::cout << (nr ? "non-resonant" : "resonant") << "\n";
            return nr ? 0 : 2;
        }
        if (su->parsed()) {
            SuiteResult result = run_suite(suite_name, seed, cases, !serial);
            std::cout << result.report;
            return result.pass ? 0 : 2;
        }
    } catch (const ParseError& ex) {
        std::cerr << "parse error: " << ex.what() << "\n";
        return 1;
    } catch (const SemanticError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const InternalError& ex) {
        std::cerr << "internal invariant breach: " << ex.what() << "\n";
        return 3;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
