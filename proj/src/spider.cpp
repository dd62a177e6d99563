#include "stokeslab/spider.hpp"

#include <algorithm>
#include <map>

namespace stokeslab {

Ray choose_cut(const std::vector<GRat>& points) {
    std::vector<Ray> avoid;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (i == j) continue;
            GRat d = points[i] - points[j];
            avoid.push_back(ray_normalize(d));
            avoid.push_back(ray_normalize(d.times_i()));
        }
    for (const Ray& cand : primitive_directions(200)) {
        bool ok = true;
        for (const auto& r : avoid) ok = ok && !rays_parallel(cand, r);
        if (ok) return cand;
    }
    throw InternalError("no admissible cut direction found");
}

GRat default_base(const std::vector<GRat>& points, const Ray& cut) {
    Rat m(1);
    for (const auto& c : points) m = std::max(m, linf(c));
    Rat radius = 2 * (1 + m);
    return GRat(-radius * Rat(cut.x), -radius * Rat(cut.y));
}

Rat CutFrame::s_of(const GRat& p) const {
    return p.re * Rat(d.y) - p.im * Rat(d.x);
}

Rat CutFrame::h_of(const GRat& p) const {
    return p.re * Rat(d.x) + p.im * Rat(d.y);
}

GRat CutFrame::point_of(const Rat& s, const Rat& h) const {
    Rat n = Rat(d.x) * Rat(d.x) + Rat(d.y) * Rat(d.y);
    return GRat((s * Rat(d.y) + h * Rat(d.x)) / n, (-s * Rat(d.x) + h * Rat(d.y)) / n);
}

CutFrame cut_frame(const SpiderSheaf& sp) {
    CutFrame f;
    f.d = sp.cut;
    for (const auto& c : sp.points) {
        f.s_pt.push_back(f.s_of(c));
        f.h_pt.push_back(f.h_of(c));
    }
    return f;
}

GRat clean_far_point(const CutFrame& f, const std::vector<GRat>& points, const Ray& u,
                     const Rat& radius) {
    GRat base(radius * Rat(u.x), radius * Rat(u.y));
    auto off_cuts = [&](const GRat& p) {
        Rat spv = f.s_of(p), hpv = f.h_of(p);
        for (std::size_t j = 0; j < points.size(); ++j)
            if (spv == f.s_pt[j] && hpv >= f.h_pt[j]) return false;
        return true;
    };
    if (off_cuts(base)) return base;
    Ray w = u.rotate90();
    if (sign(f.s_of(GRat(Rat(w.x), Rat(w.y)))) == 0) w = u;
    Rat delta = radius / 2;
    for (int k = 0; k < 64; ++k) {
        GRat p(base.re + delta * Rat(w.x), base.im + delta * Rat(w.y));
        if (off_cuts(p)) return p;
        delta /= 2;
    }
    throw InternalError("no clean far reference point");
}

ValidationReport validate_spider(const SpiderSheaf& sp) {
    auto fail = [](std::string m) { return ValidationReport{false, std::move(m)}; };
    std::size_t n = sp.points.size();
    if (n == 0) return fail("empty singular set");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (sp.points[i] == sp.points[j]) return fail("duplicate points");
    if (sp.T.size() != n || sp.phi_dim.size() != n || sp.g.size() != n)
        return fail("field length mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (sp.T[i].rows != sp.psi_dim || sp.T[i].cols != sp.psi_dim)
            return fail("monodromy shape mismatch");
        if (sp.g[i].rows != sp.psi_dim || sp.g[i].cols != sp.phi_dim[i])
            return fail("generization map shape mismatch");
        if (!is_invertible(sp.T[i])) return fail("singular monodromy T_" + std::to_string(i));
        if (!(sp.T[i] * sp.g[i] == sp.g[i]))
            return fail("invariance T g = g violated at point " + std::to_string(i));
    }
    CutFrame f = cut_frame(sp);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (f.s_pt[i] == f.s_pt[j]) return fail("cut parallel to a difference of points");
    Rat sb = f.s_of(sp.base), hb = f.h_of(sp.base);
    for (std::size_t i = 0; i < n; ++i)
        if (sb == f.s_pt[i] && hb >= f.h_pt[i]) return fail("base point on a cut ray");
    return {};
}

namespace {

struct Crossing {
    Rat lambda;
    int point;
    int power;  // +1 ccw, -1 cw
};

bool point_on_segment(const GRat& p, const GRat& q, const GRat& c) {
    GRat u = q - p, w = c - p;
    Rat cross = u.re * w.im - u.im * w.re;
    if (sign(cross) != 0) return false;
    Rat dot = u.re * w.re + u.im * w.im;
    Rat nn = u.re * u.re + u.im * u.im;
    return sign(dot) >= 0 && dot <= nn;
}

}  // namespace

QMatrix path_word(const SpiderSheaf& sp, const std::vector<GRat>& pts) {
    if (pts.size() < 2) return QMatrix::identity(sp.psi_dim);
    CutFrame f = cut_frame(sp);
    std::size_t n = sp.points.size();
    // waypoints must be off the cut rays
    for (const auto& w : pts) {
        Rat sw = f.s_of(w), hw = f.h_of(w);
        for (std::size_t j = 0; j < n; ++j)
            if (sw == f.s_pt[j] && hw >= f.h_pt[j])
                throw SemanticError("degenerate crossing: waypoint on a cut");
    }
    QMatrix acc = QMatrix::identity(sp.psi_dim);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const GRat& p = pts[k];
        const GRat& q = pts[k + 1];
        if (p == q) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (point_on_segment(p, q, sp.points[j]))
                throw SemanticError("degenerate crossing: segment through a singular point");
        Rat sp_ = f.s_of(p), sq = f.s_of(q);
        Rat hp = f.h_of(p), hq = f.h_of(q);
        std::vector<Crossing> cr;
        for (std::size_t j = 0; j < n; ++j) {
            const Rat& sj = f.s_pt[j];
            int a = sign(sp_ - sj), b = sign(sq - sj);
            if (a == 0 && b == 0) {
                // runs along the cut line below its base, else degenerate
                if (std::max(Rat(hp), Rat(hq)) >= f.h_pt[j])
                    throw SemanticError("degenerate crossing: segment along a cut");
                continue;
            }
            if (a == 0 || b == 0 || a == b) continue;
            Rat lambda = (sj - sp_) / (sq - sp_);
            Rat hx = hp + lambda * (hq - hp);
            if (hx == f.h_pt[j])
                throw SemanticError("degenerate crossing: segment through a cut endpoint");
            if (hx > f.h_pt[j])
                cr.push_back({lambda, static_cast<int>(j), a > 0 ? +1 : -1});
        }
        std::sort(cr.begin(), cr.end(),
                  [](const Crossing& x, const Crossing& y) { return x.lambda < y.lambda; });
        for (const auto& c : cr) {
            const QMatrix& t = sp.T[c.point];
            acc = (c.power > 0 ? t : inverse(t)) * acc;
        }
    }
    return acc;
}

QMatrix loop_monodromy(const SpiderSheaf& sp, const PolyPath& path) {
    std::vector<GRat> pts = path.pts;
    if (pts.size() < 2) return QMatrix::identity(sp.psi_dim);
    if (!(pts.front() == pts.back())) pts.push_back(pts.front());
    return path_word(sp, pts);
}

namespace {

struct StarGeom {
    CutFrame f;
    Rat eps;  // common square radius in (s,h) coordinates
    std::vector<GRat> corners(const SpiderSheaf& sp, int i) const {
        Rat s = f.s_pt[i], h = f.h_pt[i];
        return {f.point_of(s - eps, h - eps), f.point_of(s + eps, h - eps),
                f.point_of(s + eps, h + eps), f.point_of(s - eps, h + eps)};
    }
};

bool in_halfplane(const GRat& t, const GRat& s, const Ray& u) {
    Rat v = (t.re - s.re) * Rat(u.x) + (t.im - s.im) * Rat(u.y);
    return sign(v) >= 0;
}

// segment [p,q] against the closed (s,h)-square around point i
bool segment_meets_square(const CutFrame& f, const GRat& p, const GRat& q, int i,
                          const Rat& eps) {
    Rat s0 = f.s_pt[i] - eps, s1 = f.s_pt[i] + eps;
    Rat h0 = f.h_pt[i] - eps, h1 = f.h_pt[i] + eps;
    Rat sp_ = f.s_of(p), sq = f.s_of(q), hp = f.h_of(p), hq = f.h_of(q);
    // clip the parameter interval against the four half-planes
    Rat lo(0), hi(1);
    auto clip = [&](const Rat& a, const Rat& b, const Rat& bound, int dir) {
        // keep dir * (a + l (b - a)) <= dir * bound
        Rat den = b - a;
        Rat num = bound - a;
        if (sign(den) == 0) return sign(Rat(dir) * (a - bound)) <= 0;
        Rat l = num / den;
        if (sign(Rat(dir) * den) > 0)
            hi = std::min(hi, l);
        else
            lo = std::max(lo, l);
        return true;
    };
    if (!clip(sp_, sq, s1, +1)) return false;
    if (!clip(sp_, sq, s0, -1)) return false;
    if (!clip(hp, hq, h1, +1)) return false;
    if (!clip(hp, hq, h0, -1)) return false;
    return lo <= hi;
}

// entry/exit parameters of segment through the square boundary
std::pair<Rat, Rat> segment_square_clip(const CutFrame& f, const GRat& p, const GRat& q,
                                        int i, const Rat& eps) {
    Rat s0 = f.s_pt[i] - eps, s1 = f.s_pt[i] + eps;
    Rat h0 = f.h_pt[i] - eps, h1 = f.h_pt[i] + eps;
    Rat sp_ = f.s_of(p), sq = f.s_of(q), hp = f.h_of(p), hq = f.h_of(q);
    Rat lo(0), hi(1);
    auto clip = [&](const Rat& a, const Rat& b, const Rat& bound, int dir) {
        Rat den = b - a;
        if (sign(den) == 0) return;
        Rat l = (bound - a) / den;
        if (sign(Rat(dir) * den) > 0)
            hi = std::min(hi, l);
        else
            lo = std::max(lo, l);
    };
    clip(sp_, sq, s1, +1);
    clip(sp_, sq, s0, -1);
    clip(hp, hq, h1, +1);
    clip(hp, hq, h0, -1);
    return {lo, hi};
}

GRat lerp(const GRat& p, const GRat& q, const Rat& l) {
    return {p.re + l * (q.re - p.re), p.im + l * (q.im - p.im)};
}

}  // namespace

QMatrix halfplane_sections_at(const SpiderSheaf& sp, const GRat& s, const Ray& u,
                              const GRat& far_pt) {
    ValidationReport vr = validate_spider(sp);
    if (!vr.pass) throw SemanticError("invalid spider sheaf: " + vr.message);
    CutFrame f = cut_frame(sp);
    std::size_t n = sp.points.size();
    std::vector<int> S;
    for (std::size_t i = 0; i < n; ++i) {
        int d = dominance(sp.points[i], s, u);
        if (d == 0 && !(sp.points[i] == s)) throw SemanticError("wall");
        if (d >= 0) S.push_back(static_cast<int>(i));
    }
    if (!in_halfplane(far_pt, s, u) || sign((far_pt.re - s.re) * Rat(u.x) +
                                            (far_pt.im - s.im) * Rat(u.y)) <= 0)
        throw InternalError("reference point not interior to the half-plane");
    if (S.empty()) return QMatrix::identity(sp.psi_dim);

    // common square radius: quarter of the min pairwise (s,h) distance,
    // shrunk until every square is clean (inside H where needed, meeting no
    // foreign route segment).
    Rat eps(1, 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Rat d = std::max(Rat(abs(f.s_pt[i] - f.s_pt[j])), Rat(abs(f.h_pt[i] - f.h_pt[j])));
            eps = std::min(eps, Rat(d / 4));
        }
    StarGeom geo{f, eps};
    for (int tries = 0; tries < 64; ++tries) {
        geo.eps = eps;
        bool ok = true;
        // interior members of S need their square inside H
        for (int i : S) {
            if (sp.points[i] == s) continue;
            for (const auto& c : geo.corners(sp, i))
                ok = ok && in_halfplane(c, s, u);
        }
        // a route segment may only meet the square of a point lying on it
        for (int i : S) {
            for (std::size_t m = 0; m < n; ++m) {
                if (static_cast<int>(m) == i) continue;
                if (!segment_meets_square(f, far_pt, sp.points[i], static_cast<int>(m), eps))
                    continue;
                if (!point_on_segment(far_pt, sp.points[i], sp.points[m])) ok = false;
            }
        }
        if (ok) break;
        eps /= 2;
        if (tries == 63) throw InternalError("could not separate star routes");
    }
    geo.eps = eps;

    // star routes with counterclockwise square bypasses around blockers
    QMatrix V = QMatrix::identity(sp.psi_dim);
    for (int i : S) {
        std::vector<GRat> route{far_pt};
        // blockers sorted along the segment
        std::vector<std::pair<Rat, int>> blockers;
        for (std::size_t m = 0; m < n; ++m) {
            if (static_cast<int>(m) == i) continue;
            if (!point_on_segment(far_pt, sp.points[i], sp.points[m])) continue;
            auto [lo, hi] = segment_square_clip(f, far_pt, sp.points[i], static_cast<int>(m), eps);
            blockers.emplace_back(lo, static_cast<int>(m));
        }
        std::sort(blockers.begin(), blockers.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [lo, m] : blockers) {
            auto [l0, l1] = segment_square_clip(f, far_pt, sp.points[i], m, eps);
            GRat entry = lerp(far_pt, sp.points[i], l0);
            GRat exit = lerp(far_pt, sp.points[i], l1);
            // walk the square boundary counterclockwise from entry to exit
            auto cs = geo.corners(sp, m);
            auto side_of = [&](const GRat& x) {
                Rat sx = f.s_of(x), hx = f.h_of(x);
                if (hx == f.h_pt[m] - eps) return 0;  // bottom
                if (sx == f.s_pt[m] + eps) return 1;  // right
                if (hx == f.h_pt[m] + eps) return 2;  // top
                return 3;                             // left
            };
            route.push_back(entry);
            int se = side_of(entry), sx = side_of(exit);
            int k = se;
            while (k != sx) {
                route.push_back(cs[(k + 1) % 4]);
                k = (k + 1) % 4;
            }
            route.push_back(exit);
        }
        // clip the terminal segment at the target square
        auto [tl0, tl1] = segment_square_clip(f, far_pt, sp.points[i], i, eps);
        route.push_back(lerp(far_pt, sp.points[i], tl0));
        QMatrix W = path_word(sp, route);
        QMatrix constraint = preimage_of_span(W, colspace_basis(sp.g[i]));
        V = intersect_subspaces(V, constraint);
    }
    return V;
}

QMatrix halfplane_sections(const SpiderSheaf& sp, const GRat& s, const Ray& u) {
    // The reference point depends on the direction only (never on s, so
    // nested half-planes share one frame); it is pushed outward when s is
    // extreme enough to cross it.
    Rat m(1);
    for (const auto& c : sp.points) m = std::max(m, linf(c));
    m = std::max(m, linf(sp.base));
    CutFrame f = cut_frame(sp);
    Rat radius = 2 * (1 + m);
    for (int tries = 0;; ++tries) {
        GRat p(radius * Rat(u.x), radius * Rat(u.y));
        Rat side = (p.re - s.re) * Rat(u.x) + (p.im - s.im) * Rat(u.y);
        if (sign(side) > 0) break;
        radius *= 2;
        if (tries > 64) throw InternalError("no interior far reference point");
    }
    GRat p = clean_far_point(f, sp.points, u, radius);
    // The identification of the fiber at p with Psi travels below every cut
    // and therefore crosses none of them.
    return halfplane_sections_at(sp, s, u, p);
}

std::array<int, 3> plane_cohomology(const SpiderSheaf& sp) {
    ValidationReport vr = validate_spider(sp);
    if (!vr.pass) throw SemanticError("invalid spider sheaf: " + vr.message);
    int n = static_cast<int>(sp.points.size());
    int N = sp.psi_dim;
    // invariants under every monodromy
    QMatrix stacked(0, N);
    for (int i = 0; i < n; ++i)
        stacked = stacked.rows == 0 ? (sp.T[i] - QMatrix::identity(N))
                                    : vstack(stacked, sp.T[i] - QMatrix::identity(N));
    QMatrix W = rank_and_kernel(stacked).kernel;
    std::vector<QMatrix> K(n);
    for (int i = 0; i < n; ++i) K[i] = rank_and_kernel(sp.T[i] - QMatrix::identity(N)).kernel;

    int phi_total = 0;
    for (int i = 0; i < n; ++i) phi_total += sp.phi_dim[i];
    int ker_total = 0;
    for (int i = 0; i < n; ++i) ker_total += K[i].cols;

    // alpha: (invariant section, germs) -> mismatch at each disc
    QMatrix alpha(ker_total, W.cols + phi_total);
    {
        int row0 = 0;
        for (int i = 0; i < n; ++i) {
            for (int c = 0; c < W.cols; ++c) {
                auto x = solve(K[i], W.col(c));
                if (!x) throw InternalError("invariant section not locally invariant");
                for (int r = 0; r < K[i].cols; ++r) alpha.at(row0 + r, c) = x->at(r, 0);
            }
            int col0 = W.cols;
            for (int j = 0; j < n; ++j) {
                for (int c = 0; c < sp.phi_dim[j]; ++c) {
                    if (j == i) {
                        auto x = solve(K[i], sp.g[i].col(c));
                        if (!x) throw InternalError("generization image not invariant");
                        for (int r = 0; r < K[i].cols; ++r)
                            alpha.at(row0 + r, col0 + c) = -x->at(r, 0);
                    }
                }
                col0 += sp.phi_dim[j];
            }
            row0 += K[i].cols;
        }
    }
    int rank_alpha = rank_of(alpha);
    int h0 = W.cols + phi_total - rank_alpha;
    int coker_alpha = ker_total - rank_alpha;

    // H^1 of the punctured plane as a quotient of Psi^n
    QMatrix B(n * N, N);
    for (int i = 0; i < n; ++i)
        B.set_block(i * N, 0, sp.T[i] - QMatrix::identity(N));
    Quotient qU = quotient_of(B, n * N);
    std::vector<Quotient> cok(n);
    int cok_total = 0;
    for (int i = 0; i < n; ++i) {
        cok[i] = quotient_of(sp.T[i] - QMatrix::identity(N), N);
        cok_total += cok[i].dim;
    }
    QMatrix beta(cok_total, qU.dim);
    for (int c = 0; c < qU.dim; ++c) {
        int row0 = 0;
        for (int i = 0; i < n; ++i) {
            QMatrix wi(N, 1);
            for (int r = 0; r < N; ++r) wi.at(r, 0) = qU.lift.at(i * N + r, c);
            QMatrix cls = cok[i].proj * wi;
            for (int r = 0; r < cok[i].dim; ++r) beta.at(row0 + r, c) = cls.at(r, 0);
            row0 += cok[i].dim;
        }
    }
    int rank_beta = rank_of(beta);
    int h1 = coker_alpha + (qU.dim - rank_beta);
    int h2 = cok_total - rank_beta;

    // Euler characteristic cross-check against the stratified formula.
    int chi_strat = N * (1 - n) + phi_total;
    if (h0 - h1 + h2 != chi_strat)
        throw InternalError("plane cohomology fails the stratified Euler identity");
    return {h0, h1, h2};
}

}  // namespace stokeslab
