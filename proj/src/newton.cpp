#include "stokeslab/newton.hpp"

#include <algorithm>
#include <map>

namespace stokeslab {

namespace {

// Exact feasibility of {x >= 0, Ax = b} by Fourier-Motzkin after
// substituting the equalities; desk-scale variable counts only.
struct LinearSystem {
    // inequalities sum c_j x_j + c0 >= 0 over the active variable list
    std::vector<std::vector<Rat>> ineq;  // row: [c_1..c_n, c0]
    int nvars = 0;
};

bool fm_feasible(LinearSystem sys) {
    for (int v = sys.nvars; v >= 1; --v) {
        std::vector<std::vector<Rat>> lower, upper, rest;
        for (auto& row : sys.ineq) {
            int s = sign(row[v - 1]);
            if (s > 0)
                lower.push_back(row);
            else if (s < 0)
                upper.push_back(row);
            else
                rest.push_back(row);
        }
        for (const auto& lo : lower)
            for (const auto& up : upper) {
                // lo: a x_v + ... >= 0 (a>0)  =>  x_v >= -.../a
                // up: -b x_v + ... >= 0 (b>0) =>  x_v <= .../b
                std::vector<Rat> combo(v, Rat(0));
                Rat a = lo[v - 1], b = -up[v - 1];
                for (int j = 0; j < v - 1; ++j) combo[j] = lo[j] * b + up[j] * a;
                combo[v - 1] = lo[v] * b + up[v] * a;  // shifted constant slot
                std::vector<Rat> out(combo.begin(), combo.end());
                rest.push_back(out);
            }
        // drop the variable column: rows in `rest` built above already have
        // length v (vars v-1 plus constant).
        for (auto& row : rest)
            if (static_cast<int>(row.size()) == v + 1) row.erase(row.begin() + (v - 1));
        sys.ineq = std::move(rest);
    }
    for (const auto& row : sys.ineq)
        if (sign(row[0]) < 0) return false;
    return true;
}

// feasibility of {lambda >= 0, sum lambda_j = 1, sum lambda_j g_j <= target}
bool in_hull_plus_cone(const std::vector<std::vector<long>>& gens,
                       const std::vector<long>& target, int ell) {
    int k = static_cast<int>(gens.size());
    if (k == 0) return false;
    // substitute lambda_k = 1 - sum_{j<k} lambda_j
    LinearSystem sys;
    sys.nvars = k - 1;
    // lambda_j >= 0
    for (int j = 0; j < k - 1; ++j) {
        std::vector<Rat> row(k, Rat(0));
        row[j] = 1;
        sys.ineq.push_back(row);
    }
    // lambda_k >= 0: 1 - sum >= 0
    {
        std::vector<Rat> row(k, Rat(0));
        for (int j = 0; j < k - 1; ++j) row[j] = -1;
        row[k - 1] = 1;
        sys.ineq.push_back(row);
    }
    // componentwise: target_i - sum lambda_j g_{j,i} >= 0
    for (int i = 0; i < ell; ++i) {
        std::vector<Rat> row(k, Rat(0));
        for (int j = 0; j < k - 1; ++j) row[j] = Rat(gens[k - 1][i] - gens[j][i]);
        row[k - 1] = Rat(target[i] - gens[k - 1][i]);
        sys.ineq.push_back(row);
    }
    return fm_feasible(std::move(sys));
}

}  // namespace

bool NewtonPolyhedron::has_vertex(const std::vector<long>& v) const {
    return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

NewtonPolyhedron newton_polyhedron(int ell, std::vector<std::vector<long>> generators) {
    if (ell < 1 || ell > 3) throw SemanticError("supported dimensions: 1 <= ell <= 3");
    for (const auto& g : generators) {
        if (static_cast<int>(g.size()) != ell) throw SemanticError("generator dimension mismatch");
        for (long x : g)
            if (x > 0) throw SemanticError("generators must lie in the nonpositive octant");
    }
    std::sort(generators.begin(), generators.end());
    generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
    // drop componentwise-dominated generators first
    std::vector<std::vector<long>> kept;
    for (const auto& g : generators) {
        bool dominated = false;
        for (const auto& h : generators) {
            if (h == g) continue;
            bool ge = true;
            for (int i = 0; i < ell; ++i) ge = ge && g[i] >= h[i];
            if (ge) dominated = true;
        }
        if (!dominated) kept.push_back(g);
    }
    NewtonPolyhedron np;
    np.ell = ell;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        std::vector<std::vector<long>> others;
        for (std::size_t j = 0; j < kept.size(); ++j)
            if (j != i) others.push_back(kept[j]);
        if (!in_hull_plus_cone(others, kept[i], ell)) np.vertices.push_back(kept[i]);
    }
    std::sort(np.vertices.begin(), np.vertices.end());
    return np;
}

void check_twist_config(const TwistConfig& cfg) {
    if (cfg.ell < 1 || cfg.ell > 3) throw SemanticError("supported dimensions: 1 <= ell <= 3");
    if (static_cast<int>(cfg.e_phi.size()) != cfg.ell && !cfg.u_phi.is_zero())
        throw SemanticError("phi exponent dimension mismatch");
    if (cfg.e_eta.size() != cfg.u_eta.size()) throw SemanticError("eta field length mismatch");
    for (const auto& e : cfg.e_eta) {
        if (static_cast<int>(e.size()) != cfg.ell) throw SemanticError("eta exponent dimension mismatch");
        for (long x : e)
            if (x < 0) throw SemanticError("pole exponents must be nonnegative");
    }
    if (!cfg.u_phi.is_zero())
        for (long x : cfg.e_phi)
            if (x < 0) throw SemanticError("pole exponents must be nonnegative");
    bool any = !cfg.u_phi.is_zero();
    for (const auto& u : cfg.u_eta) any = any || !u.is_zero();
    if (!any) throw SemanticError("configuration has no nonzero term");
}

namespace {

std::vector<std::vector<long>> active_generators(const TwistConfig& cfg) {
    std::vector<std::vector<long>> gens;
    auto neg = [&](const std::vector<long>& e) {
        std::vector<long> v(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) v[i] = -e[i];
        return v;
    };
    if (!cfg.u_phi.is_zero()) gens.push_back(neg(cfg.e_phi));
    for (std::size_t k = 0; k < cfg.e_eta.size(); ++k)
        if (!cfg.u_eta[k].is_zero()) gens.push_back(neg(cfg.e_eta[k]));
    return gens;
}

}  // namespace

std::string VertexHyperplane::text() const {
    std::string s = "A_e at vertex (";
    for (std::size_t i = 0; i < vertex.size(); ++i) {
        s += std::to_string(vertex[i]);
        if (i + 1 < vertex.size()) s += ",";
    }
    s += "): " + grat_to_string(constant);
    for (std::size_t k = 0; k < coef.size(); ++k) {
        if (coef[k].is_zero()) continue;
        s += " + " + grat_to_string(coef[k]) + "*a_" + std::to_string(k + 1);
    }
    return s + " = 0";
}

std::vector<VertexHyperplane> vertex_hyperplanes(const TwistConfig& cfg) {
    check_twist_config(cfg);
    NewtonPolyhedron np = newton_polyhedron(cfg.ell, active_generators(cfg));
    std::vector<VertexHyperplane> out;
    for (const auto& v : np.vertices) {
        VertexHyperplane h;
        h.vertex = v;
        std::vector<long> e(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) e[i] = -v[i];
        h.constant = (!cfg.u_phi.is_zero() && cfg.e_phi == e) ? cfg.u_phi : GRat(0, 0);
        bool has_var = false;
        for (std::size_t k = 0; k < cfg.e_eta.size(); ++k) {
            bool match = !cfg.u_eta[k].is_zero() && cfg.e_eta[k] == e;
            h.coef.push_back(match ? cfg.u_eta[k] : GRat(0, 0));
            has_var = has_var || match;
        }
        // A_e is empty when no twist coefficient reaches the vertex
        if (has_var) out.push_back(h);
    }
    return out;
}

NewtonPolyhedron twisted_np(const TwistConfig& cfg, const std::vector<GRat>& a) {
    check_twist_config(cfg);
    if (a.size() != cfg.e_eta.size()) throw SemanticError("coefficient length mismatch");
    std::map<std::vector<long>, GRat> total;
    auto neg = [&](const std::vector<long>& e) {
        std::vector<long> v(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) v[i] = -e[i];
        return v;
    };
    if (!cfg.u_phi.is_zero()) {
        auto key = neg(cfg.e_phi);
        total[key] = total.count(key) ? total[key] + cfg.u_phi : cfg.u_phi;
    }
    for (std::size_t k = 0; k < cfg.e_eta.size(); ++k) {
        if (cfg.u_eta[k].is_zero()) continue;
        GRat contrib = a[k] * cfg.u_eta[k];
        auto key = neg(cfg.e_eta[k]);
        total[key] = total.count(key) ? total[key] + contrib : contrib;
    }
    std::vector<std::vector<long>> gens;
    for (const auto& [e, u] : total)
        if (!u.is_zero()) gens.push_back(e);
    if (gens.empty()) throw SemanticError("zero function");
    return newton_polyhedron(cfg.ell, std::move(gens));
}

bool is_generic(const TwistConfig& cfg, const std::vector<GRat>& a) {
    if (a.size() != cfg.e_eta.size()) throw SemanticError("coefficient length mismatch");
    for (const auto& h : vertex_hyperplanes(cfg)) {
        GRat v = h.constant;
        for (std::size_t k = 0; k < a.size(); ++k) v = v + a[k] * h.coef[k];
        if (v.is_zero()) return false;
    }
    return true;
}

bool nonresonant(const std::vector<GRat>& residues) {
    if (residues.empty()) throw SemanticError("empty residue list");
    for (const auto& r : residues)
        if (r.is_zero()) throw SemanticError("zero residue in input");
    int k = static_cast<int>(residues.size());
    // nonzero m in N^k with sum m_i res_i = 0 exists iff the rational LP
    // {m >= 0, sum m_i = 1, Re = 0, Im = 0} is feasible
    LinearSystem sys;
    sys.nvars = k - 1;  // substitute m_k = 1 - sum_{j<k} m_j
    for (int j = 0; j < k - 1; ++j) {
        std::vector<Rat> row(k, Rat(0));
        row[j] = 1;
        sys.ineq.push_back(row);
    }
    {
        std::vector<Rat> row(k, Rat(0));
        for (int j = 0; j < k - 1; ++j) row[j] = -1;
        row[k - 1] = 1;
        sys.ineq.push_back(row);
    }
    auto add_eq = [&](auto pick) {
        std::vector<Rat> row(k, Rat(0));
        for (int j = 0; j < k - 1; ++j) row[j] = pick(residues[j]) - pick(residues[k - 1]);
        row[k - 1] = pick(residues[k - 1]);
        sys.ineq.push_back(row);
        for (auto& x : row) x = -x;
        sys.ineq.push_back(row);
    };
    add_eq([](const GRat& z) { return z.re; });
    add_eq([](const GRat& z) { return z.im; });
    return !fm_feasible(std::move(sys));
}

bool in_fractional_lattice(const GRat& z, long d) {
    if (sign(z.im) != 0) return false;
    Rat scaled = z.re * d;
    return scaled.get_den() == 1;
}

IntegralCoefReport integral_coef_check(const ResidueMatrix& rm, const std::vector<GRat>& a) {
    IntegralCoefReport rep;
    if (rm.d < 1) throw SemanticError("ramification order must be positive");
    std::size_t r = rm.res.size();
    if (a.size() != r) throw SemanticError("coefficient length mismatch");
    std::size_t ncomp = rm.A.size();
    for (const auto& row : rm.res)
        if (row.size() != ncomp) throw SemanticError("residue matrix shape mismatch");
    for (std::size_t i = 0; i < ncomp; ++i) {
        bool all_zero = true;
        for (std::size_t k = 0; k < r; ++k) all_zero = all_zero && rm.res[k][i].is_zero();
        if (all_zero && r > 0) rep.degenerate_components.push_back(static_cast<int>(i));
        for (const auto& alpha : rm.A[i]) {
            GRat v = alpha;
            for (std::size_t k = 0; k < r; ++k) v = v + a[k] * rm.res[k][i];
            if (in_fractional_lattice(v, rm.d)) {
                rep.pass = false;
                rep.violations.push_back("component " + std::to_string(i) + ", alpha = " +
                                         grat_to_string(alpha) + ": value " + grat_to_string(v) +
                                         " lies in (1/" + std::to_string(rm.d) + ")Z");
            }
        }
    }
    return rep;
}

bool criterion_eigenvalues(const std::vector<GRat>& alphas, long d) {
    if (d < 1) throw SemanticError("order bound must be positive");
    for (const auto& alpha : alphas) {
        if (sign(alpha.im) != 0) continue;  // modulus differs from one
        // exp(-2 pi i p/q) has exact order q
        if (!alpha.re.get_den().fits_slong_p()) continue;
        long q = alpha.re.get_den().get_si();
        if (q <= d) return false;
    }
    return true;
}

std::string BernsteinData::text() const {
    if (constant_one) return "1";
    return "s - (" + grat_to_string(root) + ")";
}

BernsteinData bernstein_rank_one(const GRat& alpha, long m, bool in_pole_support) {
    BernsteinData out;
    if (in_pole_support) {
        out.constant_one = true;
        out.jumping_nonintegral = true;  // filtration constant, no integer jump
        return out;
    }
    out.root = alpha - GRat(Rat(m), Rat(0));
    out.jumping_nonintegral = !(sign(alpha.im) == 0 && alpha.re.get_den() == 1);
    return out;
}

}  // namespace stokeslab
