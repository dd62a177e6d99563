#include "stokeslab/euler.hpp"

#include <algorithm>
#include <numeric>

namespace stokeslab {

void check_model(const ElementaryModel& m) {
    if (m.ell < 1) throw SemanticError("model needs at least one divisor branch");
    if (static_cast<int>(m.e.size()) != m.ell || static_cast<int>(m.alpha.size()) != m.ell)
        throw SemanticError("model field lengths disagree with ell");
    for (long x : m.e)
        if (x < 0) throw SemanticError("pole exponents must be nonnegative");
    if (m.rank < 1) throw SemanticError("rank must be positive");
    bool e_zero = std::all_of(m.e.begin(), m.e.end(), [](long x) { return x == 0; });
    if (m.phi_leading.is_zero() && !e_zero)
        throw SemanticError("phi absent forces e = 0");
}

long irr_elementary(const ElementaryModel& m) {
    check_model(m);
    if (m.phi_leading.is_zero()) return 0;  // chi of the full torus
    if (m.ell >= 2) return 0;               // a circle factor survives
    return -m.e[0] * m.rank;
}

namespace {

// W = phi0 * conj(u)^e as u runs over sample rays; the curve rotates
// clockwise e full turns. Certify: every consecutive clockwise gap < pi and
// total winding e; then sign changes of Re(W) count the wall crossings.
struct CircleScan {
    long sign_changes = 0;
    long positive_runs = 0;
    long winding = 0;
};

GRat ray_as_grat(const Ray& u) { return GRat(Rat(u.x), Rat(u.y)); }

GRat pow_conj(const Ray& u, long e) {
    GRat z = ray_as_grat(u).conj();
    GRat acc(Rat(1), Rat(0));
    for (long k = 0; k < e; ++k) acc = acc * z;
    return acc;
}

bool cw_gap_below_pi(const GRat& a, const GRat& b) {
    Rat cross = a.re * b.im - a.im * b.re;
    if (sign(cross) < 0) return true;
    if (sign(cross) == 0) return sign(a.re * b.re + a.im * b.im) > 0;
    return false;
}

// does the clockwise gap from a to b pass the direction (0,1)?
bool cw_gap_passes_up(const GRat& a, const GRat& b) {
    // (0,1) = mu a + nu b with mu, nu > 0, traversed the clockwise short way
    Rat d = a.re * b.im - a.im * b.re;  // negative for a strict cw gap
    if (sign(d) == 0) return false;
    Rat mu = Rat(0) * b.im - Rat(1) * b.re;   // det[(0,1), b]
    Rat nu = a.re * Rat(1) - a.im * Rat(0);   // det[a, (0,1)]
    return sign(mu / d) > 0 && sign(nu / d) > 0;
}

CircleScan scan_circle(const GRat& phi0, long e) {
    std::vector<Ray> samples = {Ray(1, 0),  Ray(1, 1),   Ray(0, 1),  Ray(-1, 1),
                                Ray(-1, 0), Ray(-1, -1), Ray(0, -1), Ray(1, -1)};
    auto value = [&](const Ray& u) { return phi0 * pow_conj(u, e); };
    for (int pass = 0; pass < 64; ++pass) {
        // drop samples sitting on a wall, keeping their gap mediants
        std::vector<Ray> kept;
        bool changed = false;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (sign(value(samples[i]).re) == 0) {
                const Ray& p = samples[(i + samples.size() - 1) % samples.size()];
                const Ray& v = samples[(i + 1) % samples.size()];
                kept.push_back(ray_make(p.x + samples[i].x, p.y + samples[i].y));
                kept.push_back(ray_make(samples[i].x + v.x, samples[i].y + v.y));
                changed = true;
            } else {
                kept.push_back(samples[i]);
            }
        }
        kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
        samples = std::move(kept);
        if (changed) continue;
        // certify every clockwise gap below pi
        std::vector<Ray> next;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const Ray& u = samples[i];
            const Ray& v = samples[(i + 1) % samples.size()];
            next.push_back(u);
            if (!cw_gap_below_pi(value(u), value(v))) {
                next.push_back(ray_make(u.x + v.x, u.y + v.y));
                changed = true;
            }
        }
        if (changed) {
            samples = std::move(next);
            continue;
        }
        // certify the total winding
        long winding = 0;
        for (std::size_t i = 0; i < samples.size(); ++i)
            if (cw_gap_passes_up(value(samples[i]), value(samples[(i + 1) % samples.size()])))
                ++winding;
        if (winding != e) {
            std::vector<Ray> dense;
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const Ray& u = samples[i];
                const Ray& v = samples[(i + 1) % samples.size()];
                dense.push_back(u);
                dense.push_back(ray_make(u.x + v.x, u.y + v.y));
            }
            samples = std::move(dense);
            continue;
        }
        CircleScan out;
        out.winding = winding;
        std::vector<int> sgn;
        for (const auto& u : samples) sgn.push_back(sign(value(u).re));
        std::size_t k = samples.size();
        for (std::size_t i = 0; i < k; ++i)
            if (sgn[i] != sgn[(i + 1) % k]) ++out.sign_changes;
        for (std::size_t i = 0; i < k; ++i)
            if (sgn[i] > 0 && sgn[(i + k - 1) % k] <= 0) ++out.positive_runs;
        return out;
    }
    throw InternalError("circle scan did not certify");
}

}  // namespace

long torus_chi_c(const std::vector<long>& e, const GRat& phi_leading, int ell) {
    if (ell != 1 && ell != 2) throw SemanticError("torus oracle supports ell in {1,2}");
    if (static_cast<int>(e.size()) != ell) throw SemanticError("exponent length mismatch");
    if (phi_leading.is_zero()) throw SemanticError("oracle needs phi(0) nonzero");
    bool e_zero = std::all_of(e.begin(), e.end(), [](long x) { return x == 0; });
    if (e_zero) throw SemanticError("oracle needs e nonzero");

    if (ell == 1) {
        CircleScan scan = scan_circle(phi_leading, e[0]);
        if (scan.sign_changes != 2 * e[0])
            throw InternalError("oracle crossing count disagrees with the wall structure");
        // each positive run is one open interval of the decay locus
        return -scan.positive_runs;
    }
    // ell == 2: the boundary locus is 2g parallel closed geodesics,
    // g = gcd(e1, e2); the in-bands are counted on a Bezout transversal and
    // each contributes chi_c(interval) * chi_c(circle) = 0.
    long g = std::gcd(std::abs(e[0]), std::abs(e[1]));
    CircleScan scan = scan_circle(phi_leading, g);
    if (scan.sign_changes != 2 * g)
        throw InternalError("oracle transversal count disagrees with the band structure");
    // each band is interval x circle: chi_c = (-1) * 0
    long bands = scan.positive_runs;
    return bands * 0;
}

long chi_stratified(const std::vector<StratumDatum>& strata) {
    long acc = 0;
    for (const auto& s : strata) acc += s.chi_local * s.chi_stratum;
    return acc;
}

TripleReport check_triple_equality(const ElementaryModel& m, const std::vector<GRat>& beta) {
    check_model(m);
    if (static_cast<int>(beta.size()) != m.ell)
        throw SemanticError("twist length disagrees with ell");
    ElementaryModel dual = m;
    dual.phi_leading = -m.phi_leading;
    for (auto& a : dual.alpha) a = -a;
    ElementaryModel twist = m;
    for (int i = 0; i < m.ell; ++i) twist.alpha[i] = twist.alpha[i] + beta[i];
    long v0 = irr_elementary(m), v1 = irr_elementary(dual), v2 = irr_elementary(twist);
    TripleReport rep;
    rep.value = v0;
    rep.equal = v0 == v1 && v1 == v2;
    rep.text = "irr = " + std::to_string(v0) + ", dual = " + std::to_string(v1) +
               ", twist = " + std::to_string(v2);
    return rep;
}

RamifiedResult ramified_irr(const ElementaryModel& m, const std::vector<long>& d) {
    check_model(m);
    if (static_cast<int>(d.size()) != m.ell)
        throw SemanticError("ramification degree length disagrees with ell");
    for (long x : d)
        if (x <= 0) throw SemanticError("ramification degrees must be positive");
    ElementaryModel pulled = m;
    long deg = 1;
    for (int i = 0; i < m.ell; ++i) {
        pulled.e[i] = m.e[i] * d[i];
        deg *= d[i];
    }
    RamifiedResult out;
    out.scaled_irr = irr_elementary(pulled);
    out.degree = deg;
    long base = irr_elementary(m);
    bool consistent = m.ell == 1 ? out.scaled_irr == deg * base : out.scaled_irr == 0 && base == 0;
    if (!consistent) throw InternalError("ramification scaling identity violated");
    return out;
}

}  // namespace stokeslab
