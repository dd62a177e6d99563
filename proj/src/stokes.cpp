#include "stokeslab/stokes.hpp"

#include <algorithm>
#include <set>

namespace stokeslab {

int StokesSystem::rank_total() const {
    int s = 0;
    for (int r : ranks) s += r;
    return s;
}

std::vector<int> StokesSystem::block_offset() const {
    std::vector<int> off(points.size() + 1);
    for (std::size_t i = 0; i < points.size(); ++i) off[i + 1] = off[i] + ranks[i];
    return off;
}

std::vector<int> StokesSystem::block_rows(const std::vector<int>& idx) const {
    auto off = block_offset();
    std::vector<int> rows;
    for (int i : idx)
        for (int r = off[i]; r < off[i + 1]; ++r) rows.push_back(r);
    return rows;
}

std::vector<Ray> stokes_rays(const std::vector<GRat>& points) {
    std::vector<Ray> out;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (i == j) continue;
            out.push_back(ray_normalize((points[i] - points[j]).times_i()));
        }
    return out;
}

std::vector<Ray> wall_rays(const std::vector<GRat>& points, const GRat& t) {
    std::vector<Ray> out;
    for (const auto& c : points) {
        if (c == t) continue;
        Ray w = ray_normalize((c - t).times_i());
        out.push_back(w);
        out.push_back(w.antipode());
    }
    return out;
}

static ArcComplex base_complex(const std::vector<GRat>& points) {
    std::vector<Ray> rays = stokes_rays(points);
    rays.emplace_back(1, 0);
    rays.emplace_back(-1, 0);
    return arc_complex(rays);
}

StokesSystem make_stokes(std::vector<GRat> points, std::vector<int> ranks,
                         const std::vector<std::pair<Ray, QMatrix>>& transitions,
                         const QMatrix* monodromy) {
    if (points.empty()) throw SemanticError("empty point set rejected");
    if (points.size() != ranks.size()) throw SemanticError("points/ranks length mismatch");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j]) throw SemanticError("duplicate points");
    for (int r : ranks)
        if (r <= 0) throw SemanticError("ranks must be positive");

    StokesSystem sys;
    sys.points = std::move(points);
    sys.ranks = std::move(ranks);
    sys.base = base_complex(sys.points);
    int r = sys.rank_total();

    std::vector<Ray> srays = stokes_rays(sys.points);
    auto is_sray = [&](const Ray& u) {
        for (const auto& s : srays)
            if (s == u) return true;
        return false;
    };
    int m = sys.base.n_vertices();
    sys.trans.assign(m, QMatrix::identity(r));
    sys.is_stokes.assign(m, false);
    for (int v = 0; v < m; ++v) sys.is_stokes[v] = is_sray(sys.base.vertices[v]);

    std::vector<bool> seen(m, false);
    for (const auto& [ray, mat] : transitions) {
        int v = sys.base.vertex_index(ray);
        if (v < 0 || !sys.is_stokes[v])
            throw SemanticError("transition at " + ray_to_string(ray) +
                                " disagrees with the computed arrangement");
        if (mat.rows != r || mat.cols != r) throw SemanticError("transition shape mismatch");
        sys.trans[v] = mat;
        seen[v] = true;
    }
    for (int v = 0; v < m; ++v)
        if (sys.is_stokes[v] && !seen[v])
            throw SemanticError("missing transition at " + ray_to_string(sys.base.vertices[v]));

    if (sys.points.size() == 1) {
        if (!monodromy) throw SemanticError("n=1 system needs a monodromy");
        if (monodromy->rows != r || monodromy->cols != r)
            throw SemanticError("monodromy shape mismatch");
        int v10 = sys.base.vertex_index(Ray(1, 0));
        sys.trans[v10] = *monodromy;
    } else if (monodromy) {
        throw SemanticError("monodromy field only allowed for n=1");
    }
    return sys;
}

std::vector<int> below_set(const StokesSystem& sys, const GRat& t, const Ray& u, bool strict) {
    std::vector<int> out;
    for (std::size_t i = 0; i < sys.points.size(); ++i) {
        int d = dominance(sys.points[i], t, u);
        if (d < 0 || (!strict && sys.points[i] == t)) out.push_back(static_cast<int>(i));
    }
    return out;
}

namespace {

// Germ space at a vertex: {x in span(prev blocks) : M x in span(next blocks)},
// as a kernel basis in the full frame.
QMatrix germ_space(const StokesSystem& sys, const QMatrix& M,
                   const std::vector<int>& prev_idx, const std::vector<int>& next_idx) {
    int r = sys.rank_total();
    auto off = sys.block_offset();
    std::vector<bool> inp(r, false), inn(r, false);
    for (int i : prev_idx)
        for (int k = off[i]; k < off[i + 1]; ++k) inp[k] = true;
    for (int i : next_idx)
        for (int k = off[i]; k < off[i + 1]; ++k) inn[k] = true;
    std::vector<int> outp, outn;
    for (int k = 0; k < r; ++k) {
        if (!inp[k]) outp.push_back(k);
        if (!inn[k]) outn.push_back(k);
    }
    QMatrix C(static_cast<int>(outp.size() + outn.size()), r);
    for (std::size_t i = 0; i < outp.size(); ++i) C.at(static_cast<int>(i), outp[i]) = 1;
    for (std::size_t i = 0; i < outn.size(); ++i)
        for (int j = 0; j < r; ++j)
            C.at(static_cast<int>(outp.size() + i), j) = M.at(outn[i], j);
    return rank_and_kernel(C).kernel;
}

}  // namespace

SubSheafData sub_sheaf_data(const StokesSystem& sys, const std::vector<Ray>& extra,
                            const IndexRule& rule) {
    std::vector<Ray> rays = sys.base.vertices;
    for (const auto& u : extra) rays.push_back(u);
    ArcComplex cx = arc_complex(rays);
    int m = cx.n_vertices();
    SubSheafData out;
    CellSheaf& f = out.sheaf;
    f.cx = cx;
    f.vdim.resize(m);
    f.adim.resize(m);
    f.rho_start.resize(m);
    f.rho_end.resize(m);

    std::vector<std::vector<int>> idx(m);
    out.arc_rows.resize(m);
    for (int a = 0; a < m; ++a) {
        idx[a] = rule(cx.reps[a]);
        out.arc_rows[a] = sys.block_rows(idx[a]);
        f.adim[a] = static_cast<int>(out.arc_rows[a].size());
    }
    out.germ.resize(m);
    for (int v = 0; v < m; ++v) {
        int bv = sys.base.vertex_index(cx.vertices[v]);
        QMatrix M = bv >= 0 ? sys.trans[bv] : QMatrix::identity(sys.rank_total());
        out.germ[v] = germ_space(sys, M, idx[cx.arc_before(v)], idx[cx.arc_after(v)]);
        f.vdim[v] = out.germ[v].cols;
        QMatrix img = M * out.germ[v];
        f.rho_end[cx.arc_before(v)] = out.germ[v].rows_slice(out.arc_rows[cx.arc_before(v)]);
        f.rho_start[cx.arc_after(v)] = img.rows_slice(out.arc_rows[cx.arc_after(v)]);
        // sanity: the germ really lies in the stalks it maps into
        std::vector<bool> inp(sys.rank_total(), false), inn(sys.rank_total(), false);
        for (int k : out.arc_rows[cx.arc_before(v)]) inp[k] = true;
        for (int k : out.arc_rows[cx.arc_after(v)]) inn[k] = true;
        for (int c = 0; c < out.germ[v].cols; ++c)
            for (int k = 0; k < sys.rank_total(); ++k) {
                if (!inp[k] && sign(out.germ[v].at(k, c)) != 0)
                    throw InternalError("germ escapes preceding stalk");
                if (!inn[k] && sign(img.at(k, c)) != 0)
                    throw InternalError("germ escapes following stalk");
            }
    }
    return out;
}

CellSheaf sub_sheaf_on(const StokesSystem& sys, const std::vector<Ray>& extra,
                       const IndexRule& rule) {
    return sub_sheaf_data(sys, extra, rule).sheaf;
}

SheafMap sub_sheaf_inclusion(const SubSheafData& sub, const SubSheafData& super) {
    if (sub.sheaf.cx.vertices != super.sheaf.cx.vertices)
        throw InternalError("inclusion requires a common complex");
    SheafMap f;
    f.src = &sub.sheaf;
    f.tgt = &super.sheaf;
    int m = sub.sheaf.cx.n_vertices();
    f.on_arc.resize(m);
    f.on_vertex.resize(m);
    for (int a = 0; a < m; ++a) {
        QMatrix comp(super.sheaf.adim[a], sub.sheaf.adim[a]);
        for (int j = 0; j < sub.sheaf.adim[a]; ++j) {
            int row = sub.arc_rows[a][j];
            int pos = -1;
            for (std::size_t k = 0; k < super.arc_rows[a].size(); ++k)
                if (super.arc_rows[a][k] == row) pos = static_cast<int>(k);
            if (pos < 0) throw InternalError("sub-sheaf stalk not contained in super-sheaf stalk");
            comp.at(pos, j) = 1;
        }
        f.on_arc[a] = comp;
    }
    for (int v = 0; v < m; ++v) {
        auto x = solve(super.germ[v], sub.germ[v]);
        if (!x) throw InternalError("sub-sheaf germ not contained in super-sheaf germ");
        f.on_vertex[v] = *x;
    }
    return f;
}

CellSheaf filtration_sheaf(const StokesSystem& sys, const GRat& t, bool strict,
                           const std::vector<Ray>& extra) {
    std::vector<Ray> ex = wall_rays(sys.points, t);
    for (const auto& u : extra) ex.push_back(u);
    return sub_sheaf_on(sys, ex,
                        [&](const Ray& u) { return below_set(sys, t, u, strict); });
}

FiltCohomology filtration_cohomology(const StokesSystem& sys, const GRat& t, bool strict) {
    FiltCohomology out;
    out.sheaf = filtration_sheaf(sys, t, strict);
    out.coh = sheaf_cohomology(out.sheaf);
    out.h0 = out.coh.h0;
    out.h1 = out.coh.h1;
    return out;
}

ValidationReport validate(const StokesSystem& sys) {
    auto fail = [](std::string m) { return ValidationReport{false, std::move(m)}; };
    int n = static_cast<int>(sys.points.size());
    auto off = sys.block_offset();
    for (int v = 0; v < sys.base.n_vertices(); ++v) {
        if (!is_invertible(sys.trans[v]))
            return fail("singular transition at " + ray_to_string(sys.base.vertices[v]));
    }
    for (int v = 0; v < sys.base.n_vertices(); ++v) {
        const Ray& vr = sys.base.vertices[v];
        const Ray& up = sys.base.reps[sys.base.arc_before(v)];
        const Ray& un = sys.base.reps[sys.base.arc_after(v)];
        const QMatrix& M = sys.trans[v];
        for (int ci = 0; ci < n; ++ci) {
            const GRat& c = sys.points[ci];
            auto at_vertex = [&](bool strict) {
                int d = 0;
                for (int j = 0; j < n; ++j) {
                    int s = dominance(sys.points[j], c, vr);
                    if (s < 0 || (!strict && j == ci)) d += sys.ranks[j];
                }
                return d;
            };
            QMatrix ble = germ_space(sys, M, below_set(sys, c, up, false),
                                     below_set(sys, c, un, false));
            QMatrix blt = germ_space(sys, M, below_set(sys, c, up, true),
                                     below_set(sys, c, un, true));
            if (ble.cols != at_vertex(false))
                return fail("germ dimension of L_{<=c} at vertex " + ray_to_string(vr) +
                            " for point " + grat_to_string(c) + ": got " +
                            std::to_string(ble.cols) + ", want " +
                            std::to_string(at_vertex(false)));
            if (blt.cols != at_vertex(true))
                return fail("germ dimension of L_{<c} at vertex " + ray_to_string(vr) +
                            " for point " + grat_to_string(c));
            // graded generization must be an isomorphism on both sides
            std::vector<int> blk;
            for (int k = off[ci]; k < off[ci + 1]; ++k) blk.push_back(k);
            if (rank_of(ble.rows_slice(blk)) != sys.ranks[ci])
                return fail("graded generization toward preceding arc not iso at " +
                            ray_to_string(vr) + " for point " + grat_to_string(c));
            if (rank_of((M * ble).rows_slice(blk)) != sys.ranks[ci])
                return fail("graded generization toward following arc not iso at " +
                            ray_to_string(vr) + " for point " + grat_to_string(c));
        }
    }
    return {};
}

QMatrix total_monodromy(const StokesSystem& sys) {
    int m = sys.base.n_vertices();
    QMatrix acc = QMatrix::identity(sys.rank_total());
    for (int k = 1; k <= m; ++k) acc = sys.trans[k % m] * acc;
    return acc;
}

QMatrix gr_monodromy(const StokesSystem& sys, int point_index) {
    int m = sys.base.n_vertices();
    int ri = sys.ranks[point_index];
    auto off = sys.block_offset();
    std::vector<int> blk;
    for (int k = off[point_index]; k < off[point_index + 1]; ++k) blk.push_back(k);
    QMatrix acc = QMatrix::identity(ri);
    for (int k = 1; k <= m; ++k) {
        int v = k % m;
        const Ray& vr = sys.base.vertices[v];
        const Ray& up = sys.base.reps[sys.base.arc_before(v)];
        const Ray& un = sys.base.reps[sys.base.arc_after(v)];
        QMatrix ble = germ_space(sys, sys.trans[v],
                                 below_set(sys, sys.points[point_index], up, false),
                                 below_set(sys, sys.points[point_index], un, false));
        QMatrix mm = ble.rows_slice(blk);
        QMatrix mp = (sys.trans[v] * ble).rows_slice(blk);
        auto x = solve(mm, QMatrix::identity(ri));
        if (!x) throw SemanticError("invalid system: graded piece not surjective");
        acc = (mp * *x) * acc;
    }
    return acc;
}

std::vector<std::vector<std::pair<int, int>>> stalk_dimension_table(const StokesSystem& sys) {
    int n = static_cast<int>(sys.points.size());
    std::vector<std::vector<std::pair<int, int>>> table(sys.base.n_vertices());
    for (int v = 0; v < sys.base.n_vertices(); ++v) {
        const Ray& up = sys.base.reps[sys.base.arc_before(v)];
        const Ray& un = sys.base.reps[sys.base.arc_after(v)];
        for (int ci = 0; ci < n; ++ci) {
            QMatrix blt = germ_space(sys, sys.trans[v], below_set(sys, sys.points[ci], up, true),
                                     below_set(sys, sys.points[ci], un, true));
            QMatrix ble = germ_space(sys, sys.trans[v], below_set(sys, sys.points[ci], up, false),
                                     below_set(sys, sys.points[ci], un, false));
            table[v].emplace_back(blt.cols, ble.cols);
        }
    }
    return table;
}

StokesSystem antipode_twist(const StokesSystem& sys) {
    StokesSystem out;
    out.points.reserve(sys.points.size());
    for (const auto& c : sys.points) out.points.push_back(-c);
    out.ranks = sys.ranks;
    out.base = sys.base;
    int m = sys.base.n_vertices();
    out.trans.resize(m);
    out.is_stokes = sys.is_stokes;
    for (int v = 0; v < m; ++v) {
        int av = sys.base.vertex_index(sys.base.vertices[v].antipode());
        if (av < 0) throw InternalError("base complex not antipodally closed");
        out.trans[v] = sys.trans[av];
    }
    return out;
}

unsigned long long Rng::next() {
    // splitmix64; fixed here for cross-platform reproducibility
    state += 0x9e3779b97f4a7c15ULL;
    unsigned long long z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

long Rng::below(long bound) { return static_cast<long>(next() % static_cast<unsigned long long>(bound)); }

Rat Rng::rat(long num_range, long den_max) {
    long num = below(2 * num_range + 1) - num_range;
    long den = 1 + below(den_max);
    Rat q(num, den);
    q.canonicalize();
    return q;
}

StokesSystem random_stokes_system(Rng& rng, int n_max, int r_max) {
    int n = 1 + static_cast<int>(rng.below(n_max));
    std::vector<GRat> pts;
    while (static_cast<int>(pts.size()) < n) {
        GRat c(rng.rat(4, 2), rng.rat(4, 2));
        bool dup = false;
        for (const auto& p : pts) dup = dup || p == c;
        if (!dup) pts.push_back(c);
    }
    std::vector<int> ranks;
    for (int i = 0; i < n; ++i) ranks.push_back(1 + static_cast<int>(rng.below(r_max)));
    int r = 0;
    for (int x : ranks) r += x;
    std::vector<int> off(n + 1);
    for (int i = 0; i < n; ++i) off[i + 1] = off[i] + ranks[i];

    auto rand_invertible = [&](int d) {
        while (true) {
            QMatrix m(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) m.at(i, j) = Rat(rng.below(7) - 3);
            if (is_invertible(m)) return m;
        }
    };

    ArcComplex base;
    {
        std::vector<Ray> rays = stokes_rays(pts);
        rays.emplace_back(1, 0);
        rays.emplace_back(-1, 0);
        base = arc_complex(rays);
    }
    std::vector<std::pair<Ray, QMatrix>> transitions;
    std::vector<Ray> srays = stokes_rays(pts);
    auto is_sray = [&](const Ray& u) {
        for (const auto& s : srays)
            if (s == u) return true;
        return false;
    };
    for (int v = 0; v < base.n_vertices(); ++v) {
        const Ray& vr = base.vertices[v];
        if (!is_sray(vr)) continue;
        QMatrix S(r, r);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) {
                    S.set_block(off[i], off[i], rand_invertible(ranks[i]));
                } else if (dominance(pts[i], pts[j], vr) < 0) {
                    for (int a = off[i]; a < off[i + 1]; ++a)
                        for (int b = off[j]; b < off[j + 1]; ++b)
                            S.at(a, b) = Rat(rng.below(5) - 2);
                }
            }
        transitions.emplace_back(vr, S);
    }
    QMatrix mono = rand_invertible(r);
    StokesSystem sys = make_stokes(pts, ranks, transitions, n == 1 ? &mono : nullptr);
    ValidationReport rep = validate(sys);
    if (!rep.pass) throw InternalError("random system failed validation: " + rep.message);
    return sys;
}

}  // namespace stokeslab
