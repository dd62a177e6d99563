#include "stokeslab/qpoly.hpp"

#include <functional>

namespace stokeslab {

QPoly QPoly::constant(const Rat& v) {
    QPoly p;
    if (sign(v) != 0) p.c = {v};
    return p;
}

QPoly QPoly::x_minus(const Rat& v) {
    QPoly p;
    p.c = {-v, Rat(1)};
    return p;
}

void QPoly::trim() {
    while (!c.empty() && sign(c.back()) == 0) c.pop_back();
}

QPoly QPoly::operator+(const QPoly& o) const {
    std::vector<Rat> r(std::max(c.size(), o.c.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < c.size()) r[i] += c[i];
        if (i < o.c.size()) r[i] += o.c[i];
    }
    return QPoly(std::move(r));
}

QPoly QPoly::operator-(const QPoly& o) const {
    std::vector<Rat> r(std::max(c.size(), o.c.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < c.size()) r[i] += c[i];
        if (i < o.c.size()) r[i] -= o.c[i];
    }
    return QPoly(std::move(r));
}

QPoly QPoly::operator*(const QPoly& o) const {
    if (c.empty() || o.c.empty()) return QPoly();
    std::vector<Rat> r(c.size() + o.c.size() - 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (sign(c[i]) == 0) continue;
        for (std::size_t j = 0; j < o.c.size(); ++j) r[i + j] += c[i] * o.c[j];
    }
    return QPoly(std::move(r));
}

QPoly poly_mod(const QPoly& a, const QPoly& b, QPoly* qout) {
    if (b.is_zero()) throw InternalError("polynomial division by zero");
    QPoly r = a;
    std::vector<Rat> q(a.deg() >= b.deg() ? a.deg() - b.deg() + 1 : 0);
    while (!r.is_zero() && r.deg() >= b.deg()) {
        Rat f = r.c.back() / b.c.back();
        int shift = r.deg() - b.deg();
        q[shift] = f;
        for (int i = 0; i <= b.deg(); ++i) r.c[i + shift] -= f * b.c[i];
        r.trim();
    }
    if (qout) *qout = QPoly(std::move(q));
    return r;
}

QPoly poly_gcd_monic(QPoly a, QPoly b) {
    while (!b.is_zero()) {
        QPoly r = poly_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero() && a.c.back() != 1) {
        Rat inv = 1 / a.c.back();
        for (auto& v : a.c) v *= inv;
    }
    return a;
}

QPoly poly_div_exact(const QPoly& a, const QPoly& b) {
    QPoly q;
    QPoly r = poly_mod(a, b, &q);
    if (!r.is_zero()) throw InternalError("inexact polynomial division");
    return q;
}

std::string poly_to_string(const QPoly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    for (int i = p.deg(); i >= 0; --i) {
        if (sign(p.c[i]) == 0) continue;
        if (!s.empty()) s += " + ";
        s += rat_to_string(p.c[i]);
        if (i >= 1) s += "*x^" + std::to_string(i);
    }
    return s;
}

QPoly char_poly(const QMatrix& M) {
    int n = M.rows;
    if (n != M.cols) throw InternalError("char_poly of non-square");
    // Faddeev-LeVerrier: c_k coefficients of det(xI - M).
    std::vector<Rat> coef(n + 1);
    coef[n] = 1;
    QMatrix Mk = QMatrix::identity(n);
    for (int k = 1; k <= n; ++k) {
        Mk = M * Mk;
        Rat tr = 0;
        for (int i = 0; i < n; ++i) tr += Mk.at(i, i);
        Rat ck = -tr / k;
        coef[n - k] = ck;
        for (int i = 0; i < n; ++i) Mk.at(i, i) += ck;
    }
    return QPoly(std::move(coef));
}

namespace {

QPoly poly_matrix_det(const std::vector<std::vector<QPoly>>& m,
                      std::vector<int> rows, std::vector<int> cols) {
    std::function<QPoly(std::vector<int>&, std::vector<int>&)> go =
        [&](std::vector<int>& rr, std::vector<int>& cc) -> QPoly {
        if (rr.size() == 1) return m[rr[0]][cc[0]];
        QPoly acc;
        std::vector<int> subr(rr.begin() + 1, rr.end());
        for (std::size_t j = 0; j < cc.size(); ++j) {
            const QPoly& pivot = m[rr[0]][cc[j]];
            if (pivot.is_zero()) continue;
            std::vector<int> subc;
            for (std::size_t k = 0; k < cc.size(); ++k)
                if (k != j) subc.push_back(cc[k]);
            QPoly term = pivot * go(subr, subc);
            if (j % 2 == 1) term = QPoly() - term;
            acc = acc + term;
        }
        return acc;
    };
    return go(rows, cols);
}

void subsets_of_size(int n, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i <= n - (k - static_cast<int>(cur.size())); ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

}  // namespace

std::vector<QPoly> invariant_factors(const QMatrix& M) {
    int n = M.rows;
    if (n != M.cols) throw InternalError("invariant_factors of non-square");
    if (n > 8) throw InternalError("invariant_factors limited to dim <= 8");
    std::vector<std::vector<QPoly>> xm(n, std::vector<QPoly>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            xm[i][j] = QPoly::constant(-M.at(i, j));
            if (i == j) xm[i][j] = xm[i][j] + QPoly({Rat(0), Rat(1)});
        }
    // Determinantal divisors d_k; d_0 = 1.
    std::vector<QPoly> d(n + 1);
    d[0] = QPoly::constant(1);
    for (int k = 1; k <= n; ++k) {
        std::vector<std::vector<int>> subs;
        subsets_of_size(n, k, subs);
        QPoly g;
        for (const auto& rs : subs)
            for (const auto& cs : subs) {
                QPoly mdet = poly_matrix_det(xm, rs, cs);
                if (mdet.is_zero()) continue;
                g = g.is_zero() ? mdet : poly_gcd_monic(g, mdet);
                if (g.deg() == 0) break;
            }
        if (g.is_zero()) throw InternalError("vanishing determinantal divisor of xI-M");
        if (g.c.back() != 1) {
            Rat inv = 1 / g.c.back();
            for (auto& v : g.c) v *= inv;
        }
        d[k] = g;
    }
    std::vector<QPoly> out;
    for (int k = 1; k <= n; ++k) {
        QPoly f = poly_div_exact(d[k], d[k - 1]);
        if (f.deg() >= 1) out.push_back(f);
    }
    return out;
}

}  // namespace stokeslab
