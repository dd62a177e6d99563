#include "stokeslab/exact.hpp"

#include <algorithm>

namespace stokeslab {

int sign(const Rat& q) { return sgn(q); }

static bool parse_int(const std::string& s, Int& out) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (std::size_t k = i; k < s.size(); ++k)
        if (s[k] < '0' || s[k] > '9') return false;
    out = Int(s, 10);
    return true;
}

Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    Int num, den;
    if (slash == std::string::npos) {
        if (!parse_int(s, num)) throw ParseError("malformed rational: " + s);
        den = 1;
    } else {
        if (!parse_int(s.substr(0, slash), num) ||
            !parse_int(s.substr(slash + 1), den))
            throw ParseError("malformed rational: " + s);
        if (den == 0) throw ParseError("malformed rational (zero denominator): " + s);
    }
    Rat q(num, den);
    q.canonicalize();
    return q;
}

std::string rat_to_string(const Rat& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

GRat grat_mul_inverse(const GRat& z) {
    Rat n = z.re * z.re + z.im * z.im;
    if (sign(n) == 0) throw SemanticError("division by zero Gaussian rational");
    return {z.re / n, -z.im / n};
}

std::string grat_to_string(const GRat& z) {
    return "(" + rat_to_string(z.re) + ", " + rat_to_string(z.im) + ")";
}

Rat linf(const GRat& z) {
    Rat a = abs(z.re), b = abs(z.im);
    return a > b ? a : b;
}

Ray ray_make(const Int& x, const Int& y) {
    if (x == 0 && y == 0) throw SemanticError("zero direction");
    Int g = gcd(x, y);
    return Ray(x / g, y / g);
}

Ray ray_normalize(const GRat& z) {
    if (z.is_zero()) throw SemanticError("zero direction");
    Int l = lcm(z.re.get_den(), z.im.get_den());
    Int a = z.re.get_num() * (l / z.re.get_den());
    Int b = z.im.get_num() * (l / z.im.get_den());
    return ray_make(a, b);
}

CycKey ray_cyclic_position(const Ray& u) {
    // Quadrants are half-open, starting at (1,0): [0,pi/2), [pi/2,pi), ...
    auto frac = [](const Int& a, const Int& b) {
        Rat q(a, b);
        q.canonicalize();
        return q;
    };
    if (u.x > 0 && u.y >= 0) return {0, frac(u.y, u.x)};
    if (u.x <= 0 && u.y > 0) return {1, frac(-u.x, u.y)};
    if (u.x < 0 && u.y <= 0) return {2, frac(u.y, u.x)};
    return {3, frac(-u.x, u.y)};
}

bool cyclic_less(const Ray& a, const Ray& b) {
    CycKey ka = ray_cyclic_position(a), kb = ray_cyclic_position(b);
    if (ka.quad != kb.quad) return ka.quad < kb.quad;
    return ka.slope < kb.slope;
}

bool rays_parallel(const Ray& a, const Ray& b) {
    return a.x * b.y - a.y * b.x == 0;
}

int dominance(const GRat& c, const GRat& cp, const Ray& u) {
    Rat v = (c.re - cp.re) * Rat(u.x) + (c.im - cp.im) * Rat(u.y);
    return sign(v);
}

std::string ray_to_string(const Ray& u) {
    return "(" + u.x.get_str() + "," + u.y.get_str() + ")";
}

std::vector<Ray> primitive_directions(int count) {
    std::vector<Ray> out;
    for (long m = 1; static_cast<int>(out.size()) < count; ++m) {
        std::vector<Ray> ring;
        for (long x = -m; x <= m; ++x)
            for (long y = -m; y <= m; ++y) {
                if (std::max(std::abs(x), std::abs(y)) != m) continue;
                Int gx(x), gy(y);
                if (gcd(gx, gy) != 1) continue;
                ring.emplace_back(gx, gy);
            }
        std::sort(ring.begin(), ring.end(), cyclic_less);
        for (auto& r : ring) {
            out.push_back(r);
            if (static_cast<int>(out.size()) == count) break;
        }
    }
    return out;
}

}  // namespace stokeslab
