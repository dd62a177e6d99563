#include "stokeslab/io.hpp"

#include <fstream>

namespace stokeslab {

Json rat_to_json(const Rat& q) { return rat_to_string(q); }

Rat rat_from_json(const Json& j) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return rat_from_string(j.get<std::string>());
    throw ParseError("expected a rational");
}

Json grat_to_json(const GRat& z) { return Json::array({rat_to_json(z.re), rat_to_json(z.im)}); }

GRat grat_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("expected a two-element Gaussian rational");
    return {rat_from_json(j[0]), rat_from_json(j[1])};
}

Json ray_to_json(const Ray& u) {
    Json out = Json::array();
    for (const Int* c : {&u.x, &u.y}) {
        if (c->fits_slong_p())
            out.push_back(static_cast<long long>(c->get_si()));
        else
            out.push_back(c->get_str());
    }
    return out;
}

Ray ray_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("expected a two-element ray");
    auto get = [](const Json& v) {
        if (v.is_number_integer()) return Int(static_cast<long>(v.get<long long>()));
        if (v.is_string()) return Int(v.get<std::string>(), 10);
        throw ParseError("expected an integer ray coordinate");
    };
    Ray u(get(j[0]), get(j[1]));
    if (u.x == 0 && u.y == 0) throw ParseError("zero ray");
    Int g = gcd(u.x, u.y);
    if (g != 1) throw ParseError("ray coordinates not coprime");
    return u;
}

Json matrix_to_json(const QMatrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(rat_to_json(m.at(i, j)));
        rows.push_back(row);
    }
    Json out;
    out["rows"] = m.rows;
    out["cols"] = m.cols;
    out["entries"] = rows;
    return out;
}

QMatrix matrix_from_json(const Json& j) {
    if (j.is_array()) {
        // bare row-list form
        int rows = static_cast<int>(j.size());
        int cols = rows == 0 ? 0 : static_cast<int>(j[0].size());
        QMatrix m(rows, cols);
        for (int i = 0; i < rows; ++i) {
            if (static_cast<int>(j[i].size()) != cols) throw ParseError("ragged matrix");
            for (int c = 0; c < cols; ++c) m.at(i, c) = rat_from_json(j[i][c]);
        }
        return m;
    }
    if (!j.is_object()) throw ParseError("expected a matrix");
    QMatrix m(j.at("rows").get<int>(), j.at("cols").get<int>());
    const Json& rows = j.at("entries");
    if (static_cast<int>(rows.size()) != m.rows) throw ParseError("matrix row count mismatch");
    for (int i = 0; i < m.rows; ++i) {
        if (static_cast<int>(rows[i].size()) != m.cols) throw ParseError("matrix col count mismatch");
        for (int c = 0; c < m.cols; ++c) m.at(i, c) = rat_from_json(rows[i][c]);
    }
    return m;
}

Json stokes_to_json(const StokesSystem& sys) {
    Json j;
    j["kind"] = "stokes";
    Json pts = Json::array();
    for (const auto& c : sys.points) pts.push_back(grat_to_json(c));
    j["points"] = pts;
    j["ranks"] = sys.ranks;
    if (sys.points.size() == 1) {
        int v10 = sys.base.vertex_index(Ray(1, 0));
        j["monodromy"] = matrix_to_json(sys.trans[v10]);
        return j;
    }
    Json ts = Json::array();
    for (int v = 0; v < sys.base.n_vertices(); ++v) {
        if (!sys.is_stokes[v]) continue;
        Json t;
        t["vertex"] = ray_to_json(sys.base.vertices[v]);
        t["matrix"] = matrix_to_json(sys.trans[v]);
        ts.push_back(t);
    }
    j["transitions"] = ts;
    return j;
}

StokesSystem stokes_from_json(const Json& j) {
    std::vector<GRat> pts;
    for (const auto& p : j.at("points")) pts.push_back(grat_from_json(p));
    std::vector<int> ranks = j.at("ranks").get<std::vector<int>>();
    if (j.contains("monodromy")) {
        QMatrix mono = matrix_from_json(j.at("monodromy"));
        return make_stokes(pts, ranks, {}, &mono);
    }
    std::vector<std::pair<Ray, QMatrix>> trans;
    for (const auto& t : j.at("transitions"))
        trans.emplace_back(ray_from_json(t.at("vertex")), matrix_from_json(t.at("matrix")));
    return make_stokes(pts, ranks, trans);
}

Json spider_to_json(const SpiderSheaf& sp) {
    Json j;
    j["kind"] = "spider";
    Json pts = Json::array();
    for (const auto& c : sp.points) pts.push_back(grat_to_json(c));
    j["points"] = pts;
    j["base"] = grat_to_json(sp.base);
    j["cut"] = ray_to_json(sp.cut);
    j["psi_dim"] = sp.psi_dim;
    Json ms = Json::array(), gs = Json::array();
    for (const auto& t : sp.T) ms.push_back(matrix_to_json(t));
    for (const auto& g : sp.g) gs.push_back(matrix_to_json(g));
    j["monodromies"] = ms;
    j["stalks"] = sp.phi_dim;
    j["gen_maps"] = gs;
    return j;
}

SpiderSheaf spider_from_json(const Json& j) {
    SpiderSheaf sp;
    for (const auto& p : j.at("points")) sp.points.push_back(grat_from_json(p));
    sp.base = grat_from_json(j.at("base"));
    sp.cut = ray_from_json(j.at("cut"));
    sp.psi_dim = j.at("psi_dim").get<int>();
    for (const auto& m : j.at("monodromies")) sp.T.push_back(matrix_from_json(m));
    sp.phi_dim = j.at("stalks").get<std::vector<int>>();
    for (const auto& g : j.at("gen_maps")) sp.g.push_back(matrix_from_json(g));
    return sp;
}

Json costokes_to_json(const CoStokesSystem& co) {
    Json j;
    j["kind"] = "costokes";
    Json pts = Json::array();
    for (const auto& c : co.points) pts.push_back(grat_to_json(c));
    j["points"] = pts;
    j["fiber_dim"] = co.fiber_dim;
    Json arcs = Json::array();
    for (int a = 0; a < co.cx.n_arcs(); ++a) {
        Json e;
        e["rep"] = ray_to_json(co.cx.reps[a]);
        Json subs = Json::array();
        for (const auto& s : co.sub[a]) subs.push_back(matrix_to_json(s));
        e["subspaces"] = subs;
        arcs.push_back(e);
    }
    j["arcs"] = arcs;
    if (co.cx.n_vertices() == 0) {
        j["monodromy"] = matrix_to_json(co.mono);
    } else {
        Json ts = Json::array();
        for (int v = 0; v < co.cx.n_vertices(); ++v) {
            Json t;
            t["vertex"] = ray_to_json(co.cx.vertices[v]);
            t["matrix"] = matrix_to_json(co.trans[v]);
            ts.push_back(t);
        }
        j["transitions"] = ts;
    }
    return j;
}

CoStokesSystem costokes_from_json(const Json& j) {
    CoStokesSystem co;
    for (const auto& p : j.at("points")) co.points.push_back(grat_from_json(p));
    co.fiber_dim = j.at("fiber_dim").get<int>();
    co.cx = arc_complex(stokes_rays(co.points));
    const Json& arcs = j.at("arcs");
    if (static_cast<int>(arcs.size()) != co.cx.n_arcs())
        throw ParseError("arc count disagrees with the computed arrangement");
    co.sub.resize(co.cx.n_arcs());
    for (int a = 0; a < co.cx.n_arcs(); ++a) {
        if (ray_from_json(arcs[a].at("rep")) != co.cx.reps[a])
            throw ParseError("arc representative disagrees with the computed arrangement");
        for (const auto& s : arcs[a].at("subspaces")) co.sub[a].push_back(matrix_from_json(s));
        if (static_cast<int>(co.sub[a].size()) != static_cast<int>(co.points.size()))
            throw ParseError("subspace count disagrees with the point count");
    }
    if (co.cx.n_vertices() == 0) {
        co.mono = matrix_from_json(j.at("monodromy"));
    } else {
        co.trans.assign(co.cx.n_vertices(), QMatrix());
        std::vector<bool> seen(co.cx.n_vertices(), false);
        for (const auto& t : j.at("transitions")) {
            int v = co.cx.vertex_index(ray_from_json(t.at("vertex")));
            if (v < 0) throw ParseError("transition vertex disagrees with the computed arrangement");
            co.trans[v] = matrix_from_json(t.at("matrix"));
            seen[v] = true;
        }
        for (bool s : seen)
            if (!s) throw ParseError("missing co-Stokes transition");
    }
    return co;
}

Json cellsheaf_to_json(const CellSheaf& f) {
    Json j;
    j["kind"] = "cellsheaf";
    Json vs = Json::array(), rs = Json::array();
    for (const auto& v : f.cx.vertices) vs.push_back(ray_to_json(v));
    for (const auto& r : f.cx.reps) rs.push_back(ray_to_json(r));
    j["vertices"] = vs;
    j["reps"] = rs;
    j["vdim"] = f.vdim;
    j["adim"] = f.adim;
    if (f.vertexless()) {
        j["monodromy"] = matrix_to_json(f.monodromy);
        return j;
    }
    Json starts = Json::array(), ends = Json::array();
    for (const auto& m : f.rho_start) starts.push_back(matrix_to_json(m));
    for (const auto& m : f.rho_end) ends.push_back(matrix_to_json(m));
    j["rho_start"] = starts;
    j["rho_end"] = ends;
    return j;
}

CellSheaf cellsheaf_from_json(const Json& j) {
    CellSheaf f;
    std::vector<Ray> rays;
    for (const auto& v : j.at("vertices")) rays.push_back(ray_from_json(v));
    f.cx = arc_complex(rays);
    if (static_cast<int>(f.cx.vertices.size()) != static_cast<int>(j.at("vertices").size()))
        throw ParseError("vertex set not antipodally closed or not sorted");
    f.vdim = j.at("vdim").get<std::vector<int>>();
    f.adim = j.at("adim").get<std::vector<int>>();
    if (f.vertexless()) {
        f.monodromy = matrix_from_json(j.at("monodromy"));
    } else {
        for (const auto& m : j.at("rho_start")) f.rho_start.push_back(matrix_from_json(m));
        for (const auto& m : j.at("rho_end")) f.rho_end.push_back(matrix_from_json(m));
    }
    f.check_shapes();
    return f;
}

ElementaryModel model_from_json(const Json& j) {
    ElementaryModel m;
    m.ell = j.at("ell").get<int>();
    m.e = j.at("e").get<std::vector<long>>();
    m.phi_leading = grat_from_json(j.at("phi_leading"));
    for (const auto& a : j.at("alpha")) m.alpha.push_back(grat_from_json(a));
    if (j.contains("rank")) m.rank = j.at("rank").get<int>();
    check_model(m);
    return m;
}

Json model_to_json(const ElementaryModel& m) {
    Json j;
    j["kind"] = "euler_model";
    j["ell"] = m.ell;
    j["e"] = m.e;
    j["phi_leading"] = grat_to_json(m.phi_leading);
    Json as = Json::array();
    for (const auto& a : m.alpha) as.push_back(grat_to_json(a));
    j["alpha"] = as;
    j["rank"] = m.rank;
    return j;
}

TwistConfig twist_from_json(const Json& j) {
    TwistConfig cfg;
    cfg.ell = j.at("ell").get<int>();
    if (j.contains("phi") && !j.at("phi").is_null()) {
        cfg.e_phi = j.at("phi").at("e").get<std::vector<long>>();
        cfg.u_phi = grat_from_json(j.at("phi").at("u"));
    } else {
        cfg.e_phi.assign(cfg.ell, 0);
        cfg.u_phi = GRat(0, 0);
    }
    for (const auto& t : j.at("eta")) {
        cfg.e_eta.push_back(t.at("e").get<std::vector<long>>());
        cfg.u_eta.push_back(grat_from_json(t.at("u")));
    }
    check_twist_config(cfg);
    return cfg;
}

ResidueMatrix residues_from_json(const Json& j) {
    ResidueMatrix rm;
    for (const auto& row : j.at("res")) {
        std::vector<GRat> r;
        for (const auto& v : row) r.push_back(grat_from_json(v));
        rm.res.push_back(std::move(r));
    }
    for (const auto& row : j.at("A")) {
        std::vector<GRat> r;
        for (const auto& v : row) r.push_back(grat_from_json(v));
        rm.A.push_back(std::move(r));
    }
    rm.d = j.at("d").get<long>();
    return rm;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(std::string("json parse error: ") + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

}  // namespace stokeslab
