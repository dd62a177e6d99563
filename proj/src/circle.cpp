#include "stokeslab/circle.hpp"

#include <algorithm>

namespace stokeslab {

ArcComplex arc_complex(std::vector<Ray> rays) {
    std::vector<Ray> vs;
    for (const auto& r : rays) {
        vs.push_back(r);
        vs.push_back(r.antipode());
    }
    std::sort(vs.begin(), vs.end(), cyclic_less);
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    ArcComplex cx;
    cx.vertices = vs;
    if (vs.empty()) {
        cx.reps = {Ray(1, 0)};
        return cx;
    }
    int m = static_cast<int>(vs.size());
    for (int i = 0; i < m; ++i) {
        const Ray& u = vs[i];
        const Ray& v = vs[(i + 1) % m];
        if (v == u.antipode())
            cx.reps.push_back(u.rotate90());
        else
            cx.reps.push_back(ray_make(u.x + v.x, u.y + v.y));
    }
    return cx;
}

int ArcComplex::vertex_index(const Ray& u) const {
    for (int i = 0; i < n_vertices(); ++i)
        if (vertices[i] == u) return i;
    return -1;
}

int ArcComplex::arc_of(const Ray& u) const {
    if (vertices.empty()) return 0;
    if (vertex_index(u) >= 0) return -1;
    int m = n_vertices();
    for (int i = 0; i < m; ++i) {
        const Ray& a = vertices[i];
        const Ray& b = vertices[(i + 1) % m];
        bool last = (i + 1 == m);
        // u strictly between a and b in cyclic order from (1,0).
        if (!last) {
            if (cyclic_less(a, u) && cyclic_less(u, b)) return i;
        } else {
            if (cyclic_less(a, u) || cyclic_less(u, b)) return i;
        }
    }
    throw InternalError("arc_of failed");
}

int CellSheaf::total_vdim() const {
    int s = 0;
    for (int d : vdim) s += d;
    return s;
}

int CellSheaf::total_adim() const {
    int s = 0;
    for (int d : adim) s += d;
    return s;
}

void CellSheaf::check_shapes() const {
    if (vertexless()) {
        if (adim.size() != 1 || monodromy.rows != adim[0] || monodromy.cols != adim[0])
            throw SemanticError("cell sheaf shape mismatch (monodromy)");
        return;
    }
    int m = cx.n_vertices();
    if (static_cast<int>(vdim.size()) != m || static_cast<int>(adim.size()) != m ||
        static_cast<int>(rho_start.size()) != m || static_cast<int>(rho_end.size()) != m)
        throw SemanticError("cell sheaf shape mismatch (cell counts)");
    for (int i = 0; i < m; ++i) {
        int vs = i, ve = (i + 1) % m;
        if (rho_start[i].rows != adim[i] || rho_start[i].cols != vdim[vs] ||
            rho_end[i].rows != adim[i] || rho_end[i].cols != vdim[ve])
            throw SemanticError("cell sheaf shape mismatch (generization map)");
    }
}

QMatrix sheaf_differential(const CellSheaf& f) {
    f.check_shapes();
    if (f.vertexless()) return f.monodromy - QMatrix::identity(f.adim[0]);
    int m = f.cx.n_vertices();
    std::vector<int> voff(m + 1), aoff(m + 1);
    for (int i = 0; i < m; ++i) {
        voff[i + 1] = voff[i] + f.vdim[i];
        aoff[i + 1] = aoff[i] + f.adim[i];
    }
    QMatrix D(aoff[m], voff[m]);
    for (int i = 0; i < m; ++i) {
        int ve = (i + 1) % m;
        for (int r = 0; r < f.adim[i]; ++r) {
            for (int c = 0; c < f.vdim[ve]; ++c)
                D.at(aoff[i] + r, voff[ve] + c) += f.rho_end[i].at(r, c);
            for (int c = 0; c < f.vdim[i]; ++c)
                D.at(aoff[i] + r, voff[i] + c) -= f.rho_start[i].at(r, c);
        }
    }
    return D;
}

Cohomology sheaf_cohomology(const CellSheaf& f) {
    QMatrix D = sheaf_differential(f);
    Cohomology c;
    RankKernel rk = rank_and_kernel(D);
    c.h0 = rk.kernel.cols;
    c.h0_basis = rk.kernel;
    Quotient q = quotient_of(D, D.rows);
    c.h1 = q.dim;
    c.h1_proj = q.proj;
    c.h1_lift = q.lift;
    return c;
}

namespace {

QMatrix block_diag_apply(const std::vector<QMatrix>& comps) {
    int r = 0, c = 0;
    for (const auto& m : comps) {
        r += m.rows;
        c += m.cols;
    }
    QMatrix out(r, c);
    int i0 = 0, j0 = 0;
    for (const auto& m : comps) {
        out.set_block(i0, j0, m);
        i0 += m.rows;
        j0 += m.cols;
    }
    return out;
}

}  // namespace

bool sheaf_map_commutes(const SheafMap& f) {
    const CellSheaf& s = *f.src;
    const CellSheaf& t = *f.tgt;
    if (s.vertexless() != t.vertexless()) return false;
    if (s.vertexless()) {
        const QMatrix& c = f.on_arc[0];
        return c * s.monodromy == t.monodromy * c;
    }
    int m = s.cx.n_vertices();
    if (t.cx.n_vertices() != m) return false;
    for (int i = 0; i < m; ++i) {
        int ve = (i + 1) % m;
        if (!(f.on_arc[i] * s.rho_start[i] == t.rho_start[i] * f.on_vertex[i])) return false;
        if (!(f.on_arc[i] * s.rho_end[i] == t.rho_end[i] * f.on_vertex[ve])) return false;
    }
    return true;
}

CohomologyMap map_on_cohomology(const SheafMap& f, const Cohomology& src_coh,
                                const Cohomology& tgt_coh) {
    if (!sheaf_map_commutes(f)) throw SemanticError("sheaf map does not commute");
    QMatrix compV = f.src->vertexless() ? f.on_arc[0] : block_diag_apply(f.on_vertex);
    QMatrix compA = f.src->vertexless() ? f.on_arc[0] : block_diag_apply(f.on_arc);
    CohomologyMap out;
    auto h0 = solve(tgt_coh.h0_basis, compV * src_coh.h0_basis);
    if (!h0) throw InternalError("H0 image not contained in target kernel");
    out.h0 = *h0;
    out.h1 = tgt_coh.h1_proj * (compA * src_coh.h1_lift);
    return out;
}

namespace {

struct CellMatch {
    std::vector<int> vertex_src;  // fine vertex -> coarse vertex or -1
    std::vector<int> arc_src;     // fine arc -> coarse arc
    std::vector<int> last_subarc;  // coarse arc -> fine arc carrying the comparison
    int carrier = -1;              // fine vertex holding the monodromy (vertexless coarse)
};

CellMatch match_cells(const ArcComplex& coarse, const ArcComplex& fine) {
    CellMatch mm;
    int fm = fine.n_vertices();
    mm.vertex_src.assign(fm, -1);
    mm.arc_src.assign(fine.n_arcs(), -1);
    if (coarse.n_vertices() == 0) {
        mm.carrier = 0;
        for (int i = 0; i < fine.n_arcs(); ++i) mm.arc_src[i] = 0;
        mm.last_subarc = {(0 + fm - 1) % fm};  // arc ending at the carrier
        return mm;
    }
    for (int i = 0; i < fm; ++i) mm.vertex_src[i] = coarse.vertex_index(fine.vertices[i]);
    for (int i = 0; i < fine.n_arcs(); ++i) {
        int a = coarse.arc_of(fine.reps[i]);
        if (a < 0) throw InternalError("fine representative is a coarse vertex");
        mm.arc_src[i] = a;
    }
    mm.last_subarc.assign(coarse.n_arcs(), -1);
    for (int i = 0; i < fine.n_arcs(); ++i) {
        int endv = (i + 1) % fm;
        if (mm.vertex_src[endv] >= 0) {
            // subarc whose end is an old vertex closes its coarse arc
            mm.last_subarc[mm.arc_src[i]] = i;
        }
    }
    for (int a : mm.last_subarc)
        if (a < 0) throw InternalError("coarse arc without closing subarc");
    return mm;
}

}  // namespace

CellSheaf refine(const CellSheaf& f, const std::vector<Ray>& extra) {
    f.check_shapes();
    std::vector<Ray> rays = f.cx.vertices;
    for (const auto& r : extra) rays.push_back(r);
    ArcComplex fine = arc_complex(rays);
    if (fine.n_vertices() == f.cx.n_vertices() && !f.vertexless()) return f;
    CellMatch mm = match_cells(f.cx, fine);
    CellSheaf out;
    out.cx = fine;
    int fm = fine.n_vertices();
    out.vdim.resize(fm);
    out.adim.resize(fm);
    out.rho_start.resize(fm);
    out.rho_end.resize(fm);
    if (f.vertexless()) {
        int d = f.adim[0];
        for (int i = 0; i < fm; ++i) {
            out.vdim[i] = d;
            out.adim[i] = d;
            out.rho_start[i] = QMatrix::identity(d);
            out.rho_end[i] = QMatrix::identity(d);
        }
        // crossing the carrier applies the monodromy
        out.rho_start[fine.arc_after(mm.carrier)] = f.monodromy;
        return out;
    }
    for (int i = 0; i < fm; ++i) out.adim[i] = f.adim[mm.arc_src[i]];
    for (int i = 0; i < fm; ++i) {
        int cv = mm.vertex_src[i];
        out.vdim[i] = cv >= 0 ? f.vdim[cv] : f.adim[mm.arc_src[fine.arc_after(i)]];
    }
    for (int i = 0; i < fm; ++i) {
        int sv = i, ev = (i + 1) % fm;
        int ca = mm.arc_src[i];
        int csv = mm.vertex_src[sv], cev = mm.vertex_src[ev];
        out.rho_start[i] = csv >= 0 ? f.rho_start[ca] : QMatrix::identity(f.adim[ca]);
        out.rho_end[i] = cev >= 0 ? f.rho_end[ca] : QMatrix::identity(f.adim[ca]);
    }
    return out;
}

CohomologyMap subdivision_comparison(const CellSheaf& coarse, const CellSheaf& fine,
                                     const Cohomology& coarse_coh,
                                     const Cohomology& fine_coh) {
    CellMatch mm = match_cells(coarse.cx, fine.cx);
    int fm = fine.cx.n_vertices();
    if (fm == 0) throw InternalError("subdivision_comparison needs a subdivided target");

    std::vector<int> fvoff(fm + 1), faoff(fm + 1);
    for (int i = 0; i < fm; ++i) {
        fvoff[i + 1] = fvoff[i] + fine.vdim[i];
        faoff[i + 1] = faoff[i] + fine.adim[i];
    }

    CohomologyMap out;
    // H0: spread each coarse global section over the fine vertices.
    {
        QMatrix cand(fvoff[fm], coarse_coh.h0);
        for (int k = 0; k < coarse_coh.h0; ++k) {
            if (coarse.vertexless()) {
                for (int i = 0; i < fm; ++i)
                    for (int r = 0; r < fine.vdim[i]; ++r)
                        cand.at(fvoff[i] + r, k) = coarse_coh.h0_basis.at(r, k);
            } else {
                int cm = coarse.cx.n_vertices();
                std::vector<int> cvoff(cm + 1);
                for (int i = 0; i < cm; ++i) cvoff[i + 1] = cvoff[i] + coarse.vdim[i];
                // arc values of the section
                std::vector<QMatrix> aval(coarse.cx.n_arcs());
                for (int a = 0; a < coarse.cx.n_arcs(); ++a) {
                    QMatrix xa(coarse.vdim[a], 1);
                    for (int r = 0; r < coarse.vdim[a]; ++r)
                        xa.at(r, 0) = coarse_coh.h0_basis.at(cvoff[a] + r, k);
                    aval[a] = coarse.rho_start[a] * xa;
                }
                for (int i = 0; i < fm; ++i) {
                    int cv = mm.vertex_src[i];
                    if (cv >= 0) {
                        for (int r = 0; r < fine.vdim[i]; ++r)
                            cand.at(fvoff[i] + r, k) = coarse_coh.h0_basis.at(cvoff[cv] + r, k);
                    } else {
                        int ca = mm.arc_src[fine.cx.arc_after(i)];
                        for (int r = 0; r < fine.vdim[i]; ++r)
                            cand.at(fvoff[i] + r, k) = aval[ca].at(r, 0);
                    }
                }
            }
        }
        auto sol = solve(fine_coh.h0_basis, cand);
        if (!sol) throw InternalError("subdivision H0 comparison failed");
        out.h0 = *sol;
        if (out.h0.rows != out.h0.cols || !is_invertible(out.h0))
            throw InternalError("subdivision H0 comparison not invertible");
    }
    // H1: place a coarse 1-cochain on the designated subarc of each arc.
    {
        int ctot = coarse.total_adim();
        QMatrix iota(faoff[fm], ctot);
        int coff = 0;
        for (int a = 0; a < coarse.cx.n_arcs(); ++a) {
            int target = mm.last_subarc[a];
            Rat s = coarse.vertexless() ? Rat(-1) : Rat(1);
            if (coarse.vertexless()) target = fine.cx.arc_after(mm.carrier);
            for (int r = 0; r < coarse.adim[a]; ++r)
                iota.at(faoff[target] + r, coff + r) = s;
            coff += coarse.adim[a];
        }
        out.h1 = fine_coh.h1_proj * (iota * coarse_coh.h1_lift);
        if (out.h1.rows != out.h1.cols || !is_invertible(out.h1))
            throw InternalError("subdivision H1 comparison not invertible");
    }
    return out;
}

Refined refine_with_comparison(const CellSheaf& f, const std::vector<Ray>& extra) {
    Refined out;
    out.fine = refine(f, extra);
    Cohomology c0 = sheaf_cohomology(f);
    Cohomology c1 = sheaf_cohomology(out.fine);
    CohomologyMap cm = subdivision_comparison(f, out.fine, c0, c1);
    out.h0_map = cm.h0;
    out.h1_map = cm.h1;
    return out;
}

bool sheaves_equal(const CellSheaf& a, const CellSheaf& b) {
    if (a.cx.vertices != b.cx.vertices || a.cx.reps != b.cx.reps) return false;
    if (a.vdim != b.vdim || a.adim != b.adim) return false;
    if (a.vertexless()) return a.monodromy == b.monodromy;
    for (std::size_t i = 0; i < a.rho_start.size(); ++i)
        if (a.rho_start[i] != b.rho_start[i] || a.rho_end[i] != b.rho_end[i]) return false;
    return true;
}

}  // namespace stokeslab
