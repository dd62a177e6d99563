#ifndef STOKESLAB_QPOLY_HPP
#define STOKESLAB_QPOLY_HPP

#include <string>
#include <vector>

#include "stokeslab/qmatrix.hpp"

namespace stokeslab {

// Dense rational polynomial, coefficients low to high.
struct QPoly {
    std::vector<Rat> c;

    QPoly() = default;
    explicit QPoly(std::vector<Rat> cc) : c(std::move(cc)) { trim(); }
    static QPoly constant(const Rat& v);
    static QPoly x_minus(const Rat& v);  // x - v

    void trim();
    int deg() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c.empty(); }

    QPoly operator+(const QPoly& o) const;
    QPoly operator-(const QPoly& o) const;
    QPoly operator*(const QPoly& o) const;
    bool operator==(const QPoly& o) const { return c == o.c; }
};

// Exact euclidean division; remainder returned, quotient in *q if nonnull.
QPoly poly_mod(const QPoly& a, const QPoly& b, QPoly* q = nullptr);
QPoly poly_gcd_monic(QPoly a, QPoly b);
QPoly poly_div_exact(const QPoly& a, const QPoly& b);
std::string poly_to_string(const QPoly& p);

// Characteristic polynomial det(xI - M), monic, by Faddeev-LeVerrier.
QPoly char_poly(const QMatrix& M);

// Invariant factors of xI - M (nonconstant ones, ascending divisibility),
// via gcds of k x k minors. Intended for small matrices (dim <= 8).
std::vector<QPoly> invariant_factors(const QMatrix& M);

}  // namespace stokeslab

#endif
