#include "stokeslab/laplace.hpp"

#include <algorithm>
#include <cstdlib>

#include "stokeslab/qpoly.hpp"

namespace stokeslab {

int transport_depth_limit() {
    const char* e = std::getenv("STOKESLAB_DEPTH");
    if (!e) return 40;
    int v = std::atoi(e);
    return v > 0 ? v : 40;
}

TransportCtx::TransportCtx(const StokesSystem& s) : sys(&s), max_depth(transport_depth_limit()) {}

static std::string grat_key(const GRat& t) {
    return rat_to_string(t.re) + "," + rat_to_string(t.im);
}

const TransportCtx::Pres& TransportCtx::pres(const GRat& t) {
    std::string k = grat_key(t);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    Pres p;
    p.sheaf = filtration_sheaf(*sys, t, true);
    p.coh = sheaf_cohomology(p.sheaf);
    auto [pos, ok] = cache.emplace(std::move(k), std::move(p));
    (void)ok;
    return pos->second;
}

namespace {

bool point_on_segment_g(const GRat& p, const GRat& q, const GRat& c) {
    GRat u = q - p, w = c - p;
    Rat cross = u.re * w.im - u.im * w.re;
    if (sign(cross) != 0) return false;
    Rat dot = u.re * w.re + u.im * w.im;
    Rat nn = u.re * u.re + u.im * u.im;
    return sign(dot) >= 0 && dot <= nn;
}

bool strictly_inside_sector(const Ray& r, const Ray& w0, const Ray& w1) {
    // r = mu w0 + nu w1 with mu, nu > 0 (w0, w1 independent, sector < pi)
    Int d = w0.x * w1.y - w0.y * w1.x;
    if (d == 0) return false;
    Int mu_num = r.x * w1.y - r.y * w1.x;
    Int nu_num = w0.x * r.y - w0.y * r.x;
    int sd = sgn(d);
    return sgn(mu_num) * sd > 0 && sgn(nu_num) * sd > 0;
}

// Sweep safety along [t0, t1]: for every c, the closed sector swept by the
// wall of (c, s) must contain no other vertex ray of the union arrangement.
bool sweep_safe(const StokesSystem& sys, const GRat& t0, const GRat& t1) {
    std::vector<Ray> fixed = sys.base.vertices;
    for (const auto& r : wall_rays(sys.points, t0)) fixed.push_back(r);
    for (const auto& r : wall_rays(sys.points, t1)) fixed.push_back(r);
    for (const auto& c : sys.points) {
        if (c == t0 || c == t1) continue;
        Ray w0 = ray_normalize((c - t0).times_i());
        Ray w1 = ray_normalize((c - t1).times_i());
        if (w0 == w1) continue;
        if (w0 == w1.antipode()) return false;  // c on the open segment
        for (const auto& r : fixed)
            if (strictly_inside_sector(r, w0, w1)) return false;
    }
    return true;
}

struct StepMaps {
    QMatrix from_t0;  // H1 canonical(t0) -> H1(K)
    QMatrix to_t1;    // H1(K) -> H1 canonical(t1)
};

StepMaps transport_step(TransportCtx& ctx, const GRat& t0, const GRat& t1, bool one_sided) {
    const StokesSystem& sys = *ctx.sys;
    std::vector<Ray> extra = wall_rays(sys.points, t0);
    for (const auto& r : wall_rays(sys.points, t1)) extra.push_back(r);

    auto rule0 = [&](const Ray& u) { return below_set(sys, t0, u, true); };
    auto rule1 = [&](const Ray& u) { return below_set(sys, t1, u, true); };
    auto ruleK = [&](const Ray& u) {
        std::vector<int> a = rule0(u), b = rule1(u), out;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    };
    SubSheafData F0 = sub_sheaf_data(sys, extra, rule0);
    SubSheafData F1 = sub_sheaf_data(sys, extra, rule1);
    SubSheafData K = sub_sheaf_data(sys, extra, ruleK);
    Cohomology C0 = sheaf_cohomology(F0.sheaf);
    Cohomology C1 = sheaf_cohomology(F1.sheaf);
    Cohomology CK = sheaf_cohomology(K.sheaf);

    SheafMap i0 = sub_sheaf_inclusion(K, F0);
    SheafMap i1 = sub_sheaf_inclusion(K, F1);
    CohomologyMap m0 = map_on_cohomology(i0, CK, C0);
    CohomologyMap m1 = map_on_cohomology(i1, CK, C1);
    // the sandwich toward a singular endpoint is an isomorphism on the
    // endpoint side and injective (corank the graded rank) on the other
    if (m0.h1.rows != m0.h1.cols || !is_invertible(m0.h1))
        throw InternalError("transport step acyclicity failed between " + grat_to_string(t0) +
                            " and " + grat_to_string(t1));
    if (one_sided) {
        if (rank_of(m1.h1) != m1.h1.cols)
            throw InternalError("sandwich inclusion not injective on H1 at " + grat_to_string(t0));
    } else if (m1.h1.rows != m1.h1.cols || !is_invertible(m1.h1)) {
        throw InternalError("transport step acyclicity failed between " + grat_to_string(t0) +
                            " and " + grat_to_string(t1));
    }

    const auto& p0 = ctx.pres(t0);
    const auto& p1 = ctx.pres(t1);
    CohomologyMap cmp0 = subdivision_comparison(p0.sheaf, F0.sheaf, p0.coh, C0);
    CohomologyMap cmp1 = subdivision_comparison(p1.sheaf, F1.sheaf, p1.coh, C1);
    ++ctx.steps;
    StepMaps sm;
    sm.from_t0 = inverse(m0.h1) * cmp0.h1;
    sm.to_t1 = inverse(cmp1.h1) * m1.h1;
    return sm;
}

QMatrix step_matrix(TransportCtx& ctx, const GRat& t0, const GRat& t1) {
    StepMaps sm = transport_step(ctx, t0, t1, false);
    return sm.to_t1 * sm.from_t0;
}

GRat segment_point(const GRat& t0, const GRat& t1, const Rat& l) {
    return {t0.re + l * (t1.re - t0.re), t0.im + l * (t1.im - t0.im)};
}

}  // namespace

QMatrix transport(TransportCtx& ctx, const GRat& t0, const GRat& t1) {
    const StokesSystem& sys = *ctx.sys;
    if (t0 == t1) return QMatrix::identity(ctx.pres(t0).coh.h1);
    for (const auto& c : sys.points)
        if (point_on_segment_g(t0, t1, c))
            throw SemanticError("transport segment through a point of C");

    // Pre-split at parameters where a moving wall collides with a fixed ray
    // of the base arrangement; the sweep predicate then terminates.
    std::vector<Rat> cuts{Rat(0), Rat(1)};
    for (const auto& c : sys.points)
        for (const auto& r : sys.base.vertices) {
            Ray w = r.rotate90();
            // cross(t0 + l (t1-t0) - c, w) = 0
            GRat d = t1 - t0, e = t0 - c;
            Rat b = d.re * Rat(w.y) - d.im * Rat(w.x);
            Rat a = e.re * Rat(w.y) - e.im * Rat(w.x);
            if (sign(b) == 0) continue;
            Rat l = -a / b;
            if (sign(l) > 0 && l < 1) cuts.push_back(l);
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    QMatrix acc = QMatrix::identity(ctx.pres(t0).coh.h1);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        // adaptive bisection within each pre-split piece
        std::vector<std::pair<std::pair<Rat, Rat>, int>> work{{{cuts[k], cuts[k + 1]}, 0}};
        std::vector<std::pair<Rat, Rat>> pieces;
        while (!work.empty()) {
            auto [iv, depth] = work.back();
            work.pop_back();
            GRat a = segment_point(t0, t1, iv.first);
            GRat b = segment_point(t0, t1, iv.second);
            if (sweep_safe(sys, a, b)) {
                pieces.push_back(iv);
                continue;
            }
            if (depth >= ctx.max_depth)
                throw SemanticError("transport bisection depth exceeded (degenerate configuration) near " +
                                    grat_to_string(a) + " -> " + grat_to_string(b));
            Rat mid = (iv.first + iv.second) / 2;
            // stack order: process the left half first
            work.push_back({{mid, iv.second}, depth + 1});
            work.push_back({{iv.first, mid}, depth + 1});
        }
        std::sort(pieces.begin(), pieces.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& iv : pieces)
            acc = step_matrix(ctx, segment_point(t0, t1, iv.first),
                              segment_point(t0, t1, iv.second)) *
                  acc;
    }
    return acc;
}

QMatrix transport_path(TransportCtx& ctx, const std::vector<GRat>& waypoints) {
    if (waypoints.size() < 2) throw InternalError("transport path needs two waypoints");
    QMatrix acc = QMatrix::identity(ctx.pres(waypoints[0]).coh.h1);
    for (std::size_t k = 0; k + 1 < waypoints.size(); ++k)
        acc = transport(ctx, waypoints[k], waypoints[k + 1]) * acc;
    return acc;
}

QMatrix transport_fixed(TransportCtx& ctx, const GRat& t0, const GRat& t1, int steps) {
    QMatrix acc = QMatrix::identity(ctx.pres(t0).coh.h1);
    for (int k = 0; k < steps; ++k) {
        GRat a = segment_point(t0, t1, Rat(k, steps));
        GRat b = segment_point(t0, t1, Rat(k + 1, steps));
        acc = step_matrix(ctx, a, b) * acc;
    }
    return acc;
}

QMatrix sandwich_step(TransportCtx& ctx, const GRat& c, const GRat& t) {
    StepMaps sm = transport_step(ctx, c, t, true);
    return sm.to_t1 * sm.from_t0;
}

namespace {

// Sandwich admissibility for the segment [c_i, t]: the wall of c_i is
// constant along it, and no other sweep may cover a fixed ray strictly.
bool sandwich_safe(const StokesSystem& sys, const GRat& ci, const GRat& t) {
    std::vector<Ray> fixed = sys.base.vertices;
    for (const auto& r : wall_rays(sys.points, t)) fixed.push_back(r);
    for (const auto& c : sys.points) {
        if (c == ci || c == t) continue;
        Ray w0 = ray_normalize((c - ci).times_i());
        Ray w1 = ray_normalize((c - t).times_i());
        if (w0 == w1) continue;
        if (w0 == w1.antipode()) return false;
        for (const auto& r : fixed)
            if (strictly_inside_sector(r, w0, w1)) return false;
    }
    return true;
}

struct FwdGeometry {
    Ray cut;
    GRat base;
    Rat hlo;
    CutFrame frame;
    std::vector<Rat> eps;    // per point: lane offset and square width
    std::vector<Rat> eps_h;  // per point: square height (jittered)
    std::vector<GRat> P;     // left-of-cut waypoint next to each point

    // A waypoint exactly on the line through two singular points makes the
    // moving walls merge at the endpoint, which bisection cannot separate.
    bool on_pair_line(const std::vector<GRat>& pts, const GRat& p) const {
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                GRat d = pts[j] - pts[i], w = p - pts[i];
                if (sign(d.re * w.im - d.im * w.re) == 0) return true;
            }
        return false;
    }
};

FwdGeometry fwd_geometry(const StokesSystem& sys) {
    FwdGeometry g;
    g.cut = choose_cut(sys.points);
    g.base = default_base(sys.points, g.cut);
    for (int tries = 0; g.on_pair_line(sys.points, g.base); ++tries) {
        g.base = GRat(g.base.re * 2, g.base.im * 2);
        if (tries > 60) throw InternalError("no admissible base point");
    }
    g.frame.d = g.cut;
    for (const auto& c : sys.points) {
        g.frame.s_pt.push_back(g.frame.s_of(c));
        g.frame.h_pt.push_back(g.frame.h_of(c));
    }
    g.hlo = g.frame.h_of(g.base);
    for (const auto& h : g.frame.h_pt) g.hlo = std::min(g.hlo, h);
    g.hlo -= 1;

    int n = static_cast<int>(sys.points.size());
    for (int i = 0; i < n; ++i) {
        Rat e(1, 2);
        for (int j = 0; j < n; ++j)
            if (j != i) e = std::min(e, Rat(abs(g.frame.s_pt[j] - g.frame.s_pt[i]) / 2));
        // shrink until the one-sided sandwich toward P_i is safe and P_i
        // avoids every pair line
        for (int tries = 0;; ++tries) {
            GRat p = g.frame.point_of(g.frame.s_pt[i] - e, g.frame.h_pt[i]);
            if (!g.on_pair_line(sys.points, p) && sandwich_safe(sys, sys.points[i], p)) {
                g.P.push_back(p);
                break;
            }
            e /= 2;
            if (tries > 60) throw InternalError("no admissible sandwich endpoint");
        }
        g.eps.push_back(e);
        // square height jittered off the pair lines
        Rat eh = e;
        for (int k = 2;; ++k) {
            const Rat& si = g.frame.s_pt[i];
            const Rat& hi = g.frame.h_pt[i];
            bool clean = !g.on_pair_line(sys.points, g.frame.point_of(si - e, hi - eh)) &&
                         !g.on_pair_line(sys.points, g.frame.point_of(si + e, hi - eh)) &&
                         !g.on_pair_line(sys.points, g.frame.point_of(si + e, hi + eh)) &&
                         !g.on_pair_line(sys.points, g.frame.point_of(si - e, hi + eh));
            if (clean) break;
            eh = e * Rat(k, k + 1);
            if (k > 60) throw InternalError("no admissible loop corners");
        }
        g.eps_h.push_back(eh);
    }
    // the low-level waypoints must avoid the pair lines as well
    for (int k = 2;; ++k) {
        bool clean = !g.on_pair_line(sys.points, g.frame.point_of(g.frame.s_of(g.base), g.hlo));
        for (int i = 0; i < n; ++i)
            clean = clean &&
                    !g.on_pair_line(sys.points, g.frame.point_of(g.frame.s_pt[i] - g.eps[i], g.hlo));
        if (clean) break;
        g.hlo -= Rat(1, k);
        if (k > 60) throw InternalError("no admissible low level");
    }
    return g;
}

}  // namespace

LaplaceForward laplace_fwd(const StokesSystem& sys) {
    ValidationReport vr = validate(sys);
    if (!vr.pass) throw SemanticError("invalid Stokes system: " + vr.message);
    FwdGeometry geo = fwd_geometry(sys);
    TransportCtx ctx(sys);
    int n = static_cast<int>(sys.points.size());
    int r = sys.rank_total();

    LaplaceForward out;
    SpiderSheaf& sp = out.sp;
    sp.points = sys.points;
    sp.base = geo.base;
    sp.cut = geo.cut;
    sp.psi_dim = ctx.pres(geo.base).coh.h1;
    if (sp.psi_dim != r)
        throw InternalError("forward transform: psi dimension differs from the total rank");

    for (int i = 0; i < n; ++i) {
        const Rat& si = geo.frame.s_pt[i];
        const Rat& hi = geo.frame.h_pt[i];
        const Rat& e = geo.eps[i];
        const Rat& eh = geo.eps_h[i];
        GRat B = geo.frame.point_of(geo.frame.s_of(geo.base), geo.hlo);
        GRat Q = geo.frame.point_of(si - e, geo.hlo);
        QMatrix R = transport_path(ctx, {geo.base, B, Q, geo.P[i]});
        // counterclockwise loop around the point, crossing its cut once
        GRat bl = geo.frame.point_of(si - e, hi - eh);
        GRat br = geo.frame.point_of(si + e, hi - eh);
        GRat tr = geo.frame.point_of(si + e, hi + eh);
        GRat tl = geo.frame.point_of(si - e, hi + eh);
        QMatrix S = transport_path(ctx, {geo.P[i], bl, br, tr, tl, geo.P[i]});
        QMatrix Rinv = inverse(R);
        sp.T.push_back(Rinv * S * R);

        int phi = ctx.pres(sys.points[i]).coh.h1;
        if (phi != r - sys.ranks[i])
            throw InternalError("forward transform: vanishing stalk dimension mismatch");
        sp.phi_dim.push_back(phi);
        QMatrix gs = sandwich_step(ctx, sys.points[i], geo.P[i]);
        sp.g.push_back(Rinv * gs);
    }
    out.transport_steps = ctx.steps;

    ValidationReport sr = validate_spider(sp);
    if (!sr.pass) throw InternalError("forward transform output invalid: " + sr.message);
    auto pc = plane_cohomology(sp);
    if (pc != std::array<int, 3>{0, 0, 0})
        throw InternalError("forward transform output has nonvanishing plane cohomology");
    return out;
}

namespace {

struct FarGeometry {
    CutFrame frame;
    Rat radius;
    std::vector<Ray> nodes;  // cyclically sorted far directions
    std::vector<GRat> pts;   // clean far point per node

    int node_index(const Ray& w) const {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i] == w) return static_cast<int>(i);
        throw InternalError("far node not found");
    }
    const GRat& far_point(const Ray& w) const { return pts[node_index(w)]; }
};

bool segment_meets_origin_square(const GRat& p, const GRat& q, const Rat& m) {
    Rat lo(0), hi(1);
    auto clip = [&](const Rat& a, const Rat& b, const Rat& bound, int dir) {
        Rat den = b - a;
        if (sign(den) == 0) return sign(Rat(dir) * (a - bound)) <= 0;
        Rat l = (bound - a) / den;
        if (sign(Rat(dir) * den) > 0)
            hi = std::min(hi, l);
        else
            lo = std::max(lo, l);
        return true;
    };
    if (!clip(p.re, q.re, m, +1)) return false;
    if (!clip(p.re, q.re, -m, -1)) return false;
    if (!clip(p.im, q.im, m, +1)) return false;
    if (!clip(p.im, q.im, -m, -1)) return false;
    return lo <= hi;
}

FarGeometry far_geometry(const SpiderSheaf& sp, const ArcComplex& cx) {
    FarGeometry g;
    g.frame = cut_frame(sp);
    Rat m(1);
    for (const auto& c : sp.points) m = std::max(m, linf(c));

    std::vector<Ray> nodes = cx.vertices;
    for (const auto& u : cx.reps) nodes.push_back(u);
    nodes.emplace_back(1, 0);
    nodes.emplace_back(-1, 0);
    nodes.emplace_back(0, 1);
    nodes.emplace_back(0, -1);
    std::sort(nodes.begin(), nodes.end(), cyclic_less);
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    g.radius = 2 * (1 + m);
    // subdivide until consecutive chords between the clean far points
    // stay outside the bounding box of the singular points
    for (int pass = 0; pass < 40; ++pass) {
        g.pts.clear();
        for (const auto& w : nodes) g.pts.push_back(clean_far_point(g.frame, sp.points, w, g.radius));
        bool changed = false;
        std::vector<Ray> next;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const Ray& a = nodes[i];
            const Ray& b = nodes[(i + 1) % nodes.size()];
            next.push_back(a);
            if (segment_meets_origin_square(g.pts[i], g.pts[(i + 1) % nodes.size()], m)) {
                next.push_back(ray_make(a.x + b.x, a.y + b.y));
                changed = true;
            }
        }
        if (!changed) break;
        nodes = std::move(next);
        std::sort(nodes.begin(), nodes.end(), cyclic_less);
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        if (pass == 39) throw InternalError("far polygon subdivision did not stabilize");
    }
    g.nodes = nodes;
    return g;
}

// Crossing word along the far polygon from node a counterclockwise to node b.
QMatrix far_word_ccw(const SpiderSheaf& sp, const FarGeometry& g, const Ray& a, const Ray& b) {
    std::vector<GRat> pts;
    int i = g.node_index(a);
    int j = g.node_index(b);
    int nn = static_cast<int>(g.nodes.size());
    pts.push_back(g.far_point(g.nodes[i]));
    int k = i;
    while (k != j) {
        k = (k + 1) % nn;
        pts.push_back(g.far_point(g.nodes[k]));
    }
    return path_word(sp, pts);
}

QMatrix full_turn_word(const SpiderSheaf& sp, const FarGeometry& g, const Ray& a) {
    std::vector<GRat> pts;
    int i = g.node_index(a);
    int nn = static_cast<int>(g.nodes.size());
    for (int k = 0; k <= nn; ++k) pts.push_back(g.far_point(g.nodes[(i + k) % nn]));
    return path_word(sp, pts);
}

}  // namespace

CoStokesSystem laplace_bwd(const SpiderSheaf& sp) {
    ValidationReport vr = validate_spider(sp);
    if (!vr.pass) throw SemanticError("invalid spider sheaf: " + vr.message);
    auto pc = plane_cohomology(sp);
    if (pc != std::array<int, 3>{0, 0, 0})
        throw SemanticError("inverse transform requires vanishing plane cohomology");

    CoStokesSystem co;
    co.points = sp.points;
    co.cx = arc_complex(stokes_rays(sp.points));
    co.fiber_dim = sp.psi_dim;
    FarGeometry geo = far_geometry(sp, co.cx);

    int n = static_cast<int>(sp.points.size());
    co.sub.resize(co.cx.n_arcs());
    for (int a = 0; a < co.cx.n_arcs(); ++a) {
        GRat p = geo.far_point(co.cx.reps[a]);
        for (int j = 0; j < n; ++j)
            co.sub[a].push_back(halfplane_sections_at(sp, sp.points[j], co.cx.reps[a], p));
    }
    if (co.cx.n_vertices() == 0) {
        co.mono = full_turn_word(sp, geo, co.cx.reps[0]);
    } else {
        co.trans.resize(co.cx.n_vertices());
        for (int v = 0; v < co.cx.n_vertices(); ++v)
            co.trans[v] = far_word_ccw(sp, geo, co.cx.reps[co.cx.arc_before(v)],
                                       co.cx.reps[co.cx.arc_after(v)]);
    }
    return co;
}

Cohomology costokes_circle_cohomology(const SpiderSheaf& sp, const GRat& s) {
    std::vector<Ray> rays = stokes_rays(sp.points);
    for (const auto& r : wall_rays(sp.points, s)) rays.push_back(r);
    ArcComplex cx = arc_complex(rays);
    FarGeometry geo = far_geometry(sp, cx);

    CellSheaf f;
    f.cx = cx;
    if (cx.n_vertices() == 0) {
        QMatrix V = halfplane_sections_at(sp, s, cx.reps[0], geo.far_point(cx.reps[0]));
        QMatrix M = full_turn_word(sp, geo, cx.reps[0]);
        auto T = solve(V, M * V);
        if (!T) throw InternalError("section family not monodromy invariant");
        f.adim = {V.cols};
        f.monodromy = *T;
        return sheaf_cohomology(f);
    }
    int m = cx.n_vertices();
    std::vector<QMatrix> V(m);
    for (int a = 0; a < m; ++a)
        V[a] = halfplane_sections_at(sp, s, cx.reps[a], geo.far_point(cx.reps[a]));
    f.vdim.resize(m);
    f.adim.resize(m);
    f.rho_start.resize(m);
    f.rho_end.resize(m);
    for (int a = 0; a < m; ++a) f.adim[a] = V[a].cols;
    for (int v = 0; v < m; ++v) {
        int ab = cx.arc_before(v), aa = cx.arc_after(v);
        QMatrix M = far_word_ccw(sp, geo, cx.reps[ab], cx.reps[aa]);
        // germ: x in V[ab] with M x in V[aa]
        QMatrix lhs = hstack(M * V[ab], V[aa].cols == 0 ? QMatrix(sp.psi_dim, 0) : -V[aa]);
        QMatrix ker = rank_and_kernel(lhs).kernel;
        QMatrix y = ker.block(0, 0, V[ab].cols, ker.cols);
        QMatrix z = ker.block(V[ab].cols, 0, V[aa].cols, ker.cols);
        f.vdim[v] = ker.cols;
        f.rho_end[ab] = y;
        f.rho_start[aa] = z;
    }
    return sheaf_cohomology(f);
}

StokesSystem costokes_to_stokes(const CoStokesSystem& co) {
    int n = static_cast<int>(co.points.size());
    int N = co.fiber_dim;
    int arcs = co.cx.n_arcs();

    // order points at each arc representative, build the flag, extract ranks
    std::vector<QMatrix> frame(arcs);
    std::vector<int> ranks(n, -1);
    for (int a = 0; a < arcs; ++a) {
        const Ray& u = co.cx.reps[a];
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int i, int j) {
            int d = dominance(co.points[i], co.points[j], u);
            if (d == 0) throw SemanticError("arc representative on a Stokes ray");
            return d < 0;
        });
        QMatrix B(N, 0);
        for (int k = 0; k < n; ++k) {
            int i = order[k];
            if (!subspaces_equal(co.sub[a][i], B))
                throw SemanticError("invalid co-Stokes input: strict family does not match flag");
            // L'_{<= c_(k)} = intersection of the strict spaces above it
            QMatrix le = QMatrix::identity(N);
            for (int k2 = k + 1; k2 < n; ++k2) le = intersect_subspaces(le, co.sub[a][order[k2]]);
            if (!subspace_contained(B, le))
                throw SemanticError("invalid co-Stokes input: flag not nested");
            // greedy pivot-based extension by columns of le
            int before = B.cols;
            for (int c = 0; c < le.cols && B.cols < le.cols; ++c) {
                QMatrix trial = hstack(B, le.col(c));
                if (rank_of(trial) == B.cols + 1) B = trial;
            }
            if (B.cols != le.cols)
                throw SemanticError("invalid co-Stokes input: flag extension failed");
            int got = B.cols - before;
            if (ranks[i] >= 0 && ranks[i] != got)
                throw SemanticError("invalid co-Stokes input: non-constant graded ranks");
            ranks[i] = got;
        }
        if (B.cols != N) throw SemanticError("invalid co-Stokes input: flag does not exhaust fiber");
        frame[a] = B;
    }
    for (int i = 0; i < n; ++i)
        if (ranks[i] <= 0) throw SemanticError("invalid co-Stokes input: vanishing graded rank");

    // rebuild frames with columns grouped by global point index
    std::vector<int> off(n + 1);
    for (int i = 0; i < n; ++i) off[i + 1] = off[i] + ranks[i];
    for (int a = 0; a < arcs; ++a) {
        const Ray& u = co.cx.reps[a];
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int i, int j) {
            return dominance(co.points[i], co.points[j], u) < 0;
        });
        // columns of frame[a] appear in theta-order; regroup by point
        QMatrix regrouped(N, N);
        int col = 0;
        for (int k = 0; k < n; ++k) {
            int i = order[k];
            for (int c = 0; c < ranks[i]; ++c) {
                for (int rr = 0; rr < N; ++rr)
                    regrouped.at(rr, off[i] + c) = frame[a].at(rr, col);
                ++col;
            }
        }
        frame[a] = regrouped;
        if (!is_invertible(frame[a]))
            throw InternalError("adapted frame not invertible");
    }

    if (n == 1) {
        QMatrix mono = inverse(frame[0]) * co.mono * frame[0];
        return make_stokes(co.points, ranks, {}, &mono);
    }
    std::vector<std::pair<Ray, QMatrix>> transitions;
    for (int v = 0; v < co.cx.n_vertices(); ++v) {
        int ab = co.cx.arc_before(v), aa = co.cx.arc_after(v);
        QMatrix S = inverse(frame[aa]) * (co.trans[v] * frame[ab]);
        transitions.emplace_back(co.cx.vertices[v], S);
    }
    return make_stokes(co.points, ranks, transitions);
}

std::string RoundTripReport::text() const {
    std::string s;
    for (const auto& l : lines) s += l + "\n";
    s += std::string("verdict: ") + (pass ? "pass" : "fail") + "\n";
    return s;
}

namespace {

std::string poly_list(const std::vector<QPoly>& ps) {
    std::string s = "[";
    for (std::size_t i = 0; i < ps.size(); ++i) {
        s += poly_to_string(ps[i]);
        if (i + 1 < ps.size()) s += "; ";
    }
    return s + "]";
}

void check_line(RoundTripReport& rep, bool ok, const std::string& what) {
    rep.lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    rep.pass = rep.pass && ok;
}

}  // namespace

RoundTripReport roundtrip_report(const StokesSystem& sys) {
    RoundTripReport rep;
    LaplaceForward fwd = laplace_fwd(sys);
    CoStokesSystem co = laplace_bwd(fwd.sp);
    StokesSystem back = costokes_to_stokes(co);

    check_line(rep, back.points == sys.points, "point sets agree");
    check_line(rep, back.ranks == sys.ranks, "rank vectors agree");
    ValidationReport bv = validate(back);
    check_line(rep, bv.pass, "reconstructed system passes validation (" + bv.message + ")");

    // per-arc dimension tables of L'_{<c_j} against those of L_{<c_j}
    bool dims_ok = true;
    for (int a = 0; a < co.cx.n_arcs(); ++a)
        for (std::size_t j = 0; j < sys.points.size(); ++j) {
            int want = 0;
            for (std::size_t i = 0; i < sys.points.size(); ++i)
                if (dominance(sys.points[i], sys.points[j], co.cx.reps[a]) < 0)
                    want += sys.ranks[i];
            dims_ok = dims_ok && co.sub[a][j].cols == want;
        }
    check_line(rep, dims_ok, "per-arc filtration dimension tables match (inverse vs direct)");

    check_line(rep, stalk_dimension_table(back) == stalk_dimension_table(sys),
               "per-vertex stalk filtration dimension tables agree");

    QMatrix mA = total_monodromy(sys), mB = total_monodromy(back);
    check_line(rep, char_poly(mA) == char_poly(mB), "total monodromy characteristic polynomials agree");
    bool inv_ok = true;
    if (mA.rows <= 8) inv_ok = invariant_factors(mA).size() == invariant_factors(mB).size() &&
                               [&] {
                                   auto fa = invariant_factors(mA);
                                   auto fb = invariant_factors(mB);
                                   for (std::size_t i = 0; i < fa.size(); ++i)
                                       if (!(fa[i] == fb[i])) return false;
                                   return true;
                               }();
    check_line(rep, inv_ok,
               "total monodromy invariant factors agree: " + poly_list(invariant_factors(mA)));
    for (std::size_t i = 0; i < sys.points.size(); ++i) {
        QMatrix gA = gr_monodromy(sys, static_cast<int>(i));
        QMatrix gB = gr_monodromy(back, static_cast<int>(i));
        bool ok = char_poly(gA) == char_poly(gB);
        if (gA.rows <= 8) {
            auto fa = invariant_factors(gA), fb = invariant_factors(gB);
            ok = ok && fa.size() == fb.size();
            for (std::size_t k = 0; ok && k < fa.size(); ++k) ok = fa[k] == fb[k];
        }
        check_line(rep, ok, "graded monodromy invariants agree at point " + std::to_string(i));
    }

    if (sys.points.size() <= 2 && sys.rank_total() <= 2) {
        auto iso = find_filtered_iso(sys, back);
        check_line(rep, iso.has_value(), "explicit filtered isomorphism found");
        if (iso) rep.lines.push_back("  iso on base arc: " + matrix_to_string(*iso));
    }
    return rep;
}

RoundTripReport roundtrip_report_spider(const SpiderSheaf& sp) {
    RoundTripReport rep;
    CoStokesSystem co = laplace_bwd(sp);
    StokesSystem mid = costokes_to_stokes(co);
    ValidationReport mv = validate(mid);
    check_line(rep, mv.pass, "intermediate Stokes system valid (" + mv.message + ")");
    LaplaceForward fwd = laplace_fwd(mid);
    const SpiderSheaf& b = fwd.sp;

    check_line(rep, b.points == sp.points, "point sets agree");
    check_line(rep, b.psi_dim == sp.psi_dim, "generic stalk dimensions agree");
    check_line(rep, b.phi_dim == sp.phi_dim, "vanishing stalk dimensions agree");
    for (std::size_t i = 0; i < sp.points.size(); ++i) {
        bool ok = char_poly(sp.T[i]) == char_poly(b.T[i]);
        if (sp.psi_dim <= 8) {
            auto fa = invariant_factors(sp.T[i]), fb = invariant_factors(b.T[i]);
            ok = ok && fa.size() == fb.size();
            for (std::size_t k = 0; ok && k < fa.size(); ++k) ok = fa[k] == fb[k];
        }
        ok = ok && rank_of(sp.g[i]) == rank_of(b.g[i]);
        check_line(rep, ok, "monodromy and generization invariants agree at point " +
                                std::to_string(i));
    }
    if (sp.points.size() <= 2 && sp.psi_dim <= 2)
        check_line(rep, find_spider_conjugacy(sp, b), "explicit simultaneous conjugacy found");
    return rep;
}

namespace {

// Enumerate small rational combinations of the kernel basis until one is
// invertible (entries of combination coefficients in {-2..2}).
std::optional<QMatrix> invertible_in_span(const std::vector<QMatrix>& basis, int dim) {
    if (basis.empty()) return std::nullopt;
    std::size_t k = basis.size();
    if (k > 6) {
        // fall back to a deterministic pseudorandom scan
        Rng rng(12345);
        for (int t = 0; t < 500; ++t) {
            QMatrix cand(dim, dim);
            for (std::size_t i = 0; i < k; ++i) {
                Rat c = Rat(rng.below(9) - 4);
                if (sign(c) == 0) continue;
                for (int a = 0; a < dim; ++a)
                    for (int b = 0; b < dim; ++b) cand.at(a, b) += c * basis[i].at(a, b);
            }
            if (is_invertible(cand)) return cand;
        }
        return std::nullopt;
    }
    std::vector<int> coef(k, -2);
    while (true) {
        QMatrix cand(dim, dim);
        for (std::size_t i = 0; i < k; ++i)
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b)
                    cand.at(a, b) += Rat(coef[i]) * basis[i].at(a, b);
        if (is_invertible(cand)) return cand;
        std::size_t pos = 0;
        while (pos < k && coef[pos] == 2) coef[pos++] = -2;
        if (pos == k) return std::nullopt;
        ++coef[pos];
    }
}

}  // namespace

std::optional<QMatrix> find_filtered_iso(const StokesSystem& A, const StokesSystem& B) {
    if (A.points != B.points || A.ranks != B.ranks) return std::nullopt;
    int r = A.rank_total();
    int m = A.base.n_vertices();
    auto off = A.block_offset();
    int n = static_cast<int>(A.points.size());

    // linear conditions on psi_base: propagate around the circle, demand
    // triangularity on every arc and closure after a full turn
    std::vector<QMatrix> sa(m), sbinv(m);
    for (int v = 0; v < m; ++v) {
        sa[v] = B.trans[v];
        sbinv[v] = inverse(A.trans[v]);
    }
    auto propagate = [&](const QMatrix& psi0) {
        std::vector<QMatrix> per_arc(m);
        per_arc[0] = psi0;
        for (int k = 1; k < m; ++k) per_arc[k] = sa[k] * per_arc[k - 1] * sbinv[k];
        return per_arc;
    };
    std::vector<QMatrix> cond_cols;  // each: violations vector for elementary psi
    int vars = r * r;
    std::vector<std::vector<Rat>> rows;  // constraint matrix rows built lazily
    QMatrix constraints(0, vars);
    {
        std::vector<std::vector<Rat>> cc;  // per var: violation column
        int viol_len = -1;
        for (int e = 0; e < vars; ++e) {
            QMatrix psi0(r, r);
            psi0.at(e / r, e % r) = 1;
            auto arcs = propagate(psi0);
            // closure: after crossing v_0 we must return to psi0
            QMatrix closure = sa[0] * arcs[m - 1] * sbinv[0] - psi0;
            std::vector<Rat> col;
            for (int a = 0; a < m; ++a)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        if (i == j) continue;
                        if (dominance(A.points[i], A.points[j], A.base.reps[a]) < 0) continue;
                        // block (i,j) must vanish on this arc
                        for (int a2 = off[i]; a2 < off[i + 1]; ++a2)
                            for (int b2 = off[j]; b2 < off[j + 1]; ++b2)
                                col.push_back(arcs[a].at(a2, b2));
                    }
            for (int a2 = 0; a2 < r; ++a2)
                for (int b2 = 0; b2 < r; ++b2) col.push_back(closure.at(a2, b2));
            if (viol_len < 0) viol_len = static_cast<int>(col.size());
            cc.push_back(std::move(col));
        }
        constraints = QMatrix(viol_len, vars);
        for (int e = 0; e < vars; ++e)
            for (int rr2 = 0; rr2 < viol_len; ++rr2) constraints.at(rr2, e) = cc[e][rr2];
    }
    QMatrix ker = rank_and_kernel(constraints).kernel;
    std::vector<QMatrix> basis;
    for (int c = 0; c < ker.cols; ++c) {
        QMatrix b(r, r);
        for (int e = 0; e < vars; ++e) b.at(e / r, e % r) = ker.at(e, c);
        basis.push_back(b);
    }
    return invertible_in_span(basis, r);
}

bool find_spider_conjugacy(const SpiderSheaf& A, const SpiderSheaf& B) {
    if (A.points != B.points || A.psi_dim != B.psi_dim || A.phi_dim != B.phi_dim) return false;
    int N = A.psi_dim;
    int n = static_cast<int>(A.points.size());
    // unknowns: P (N x N) and Q_i (phi_i x phi_i)
    int vars = N * N;
    std::vector<int> qoff(n + 1, N * N);
    for (int i = 0; i < n; ++i) qoff[i + 1] = qoff[i] + A.phi_dim[i] * A.phi_dim[i];
    vars = qoff[n];

    std::vector<std::vector<Rat>> cols(vars);
    int rows_count = -1;
    for (int e = 0; e < vars; ++e) {
        QMatrix P(N, N);
        std::vector<QMatrix> Q;
        for (int i = 0; i < n; ++i) Q.push_back(QMatrix(A.phi_dim[i], A.phi_dim[i]));
        if (e < N * N)
            P.at(e / N, e % N) = 1;
        else
            for (int i = 0; i < n; ++i)
                if (e >= qoff[i] && e < qoff[i + 1]) {
                    int l = e - qoff[i];
                    Q[i].at(l / A.phi_dim[i], l % A.phi_dim[i]) = 1;
                }
        std::vector<Rat> col;
        for (int i = 0; i < n; ++i) {
            QMatrix c1 = P * A.T[i] - B.T[i] * P;
            for (const auto& v : c1.a) col.push_back(v);
            QMatrix c2 = P * A.g[i] - B.g[i] * Q[i];
            for (const auto& v : c2.a) col.push_back(v);
        }
        if (rows_count < 0) rows_count = static_cast<int>(col.size());
        cols[e] = std::move(col);
    }
    QMatrix constraints(rows_count, vars);
    for (int e = 0; e < vars; ++e)
        for (int rr2 = 0; rr2 < rows_count; ++rr2) constraints.at(rr2, e) = cols[e][rr2];
    QMatrix ker = rank_and_kernel(constraints).kernel;
    // search for a solution with P and all Q_i invertible
    std::vector<QMatrix> pbasis;
    for (int c = 0; c < ker.cols; ++c) {
        QMatrix b(N, N);
        for (int e = 0; e < N * N; ++e) b.at(e / N, e % N) = ker.at(e, c);
        pbasis.push_back(b);
    }
    // coefficients in {-2..2}; accept when P invertible and each Q_i
    // (reconstructed from the same combination) is invertible
    std::size_t k = pbasis.size();
    if (k == 0 || k > 6) return false;
    std::vector<int> coef(k, -2);
    while (true) {
        QMatrix P(N, N);
        for (std::size_t i = 0; i < k; ++i)
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b) P.at(a, b) += Rat(coef[i]) * pbasis[i].at(a, b);
        bool ok = is_invertible(P);
        for (int i = 0; ok && i < n; ++i) {
            int d = A.phi_dim[i];
            QMatrix Qi(d, d);
            for (std::size_t b2 = 0; b2 < k; ++b2)
                for (int l = 0; l < d * d; ++l)
                    Qi.at(l / d, l % d) += Rat(coef[b2]) * ker.at(qoff[i] + l, static_cast<int>(b2));
            ok = ok && (d == 0 || is_invertible(Qi));
        }
        if (ok) return true;
        std::size_t pos = 0;
        while (pos < k && coef[pos] == 2) coef[pos++] = -2;
        if (pos == k) return false;
        ++coef[pos];
    }
}

}  // namespace stokeslab
