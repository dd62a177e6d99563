#ifndef STOKESLAB_EXACT_HPP
#define STOKESLAB_EXACT_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace stokeslab {

using Rat = mpq_class;
using Int = mpz_class;

// Exit-code buckets used by the CLI: parse -> 1, semantic -> 2, internal -> 3.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SemanticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int sign(const Rat& q);

// Strict "p/q" parser (also accepts "p"); q must be nonzero after sign
// normalization. Output of rat_to_string always carries the denominator.
Rat rat_from_string(const std::string& s);
std::string rat_to_string(const Rat& q);

struct GRat {
    Rat re, im;

    GRat() = default;
    GRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    GRat(long r, long i) : re(r), im(i) {}

    bool is_zero() const { return sign(re) == 0 && sign(im) == 0; }

    GRat operator+(const GRat& o) const { return {re + o.re, im + o.im}; }
    GRat operator-(const GRat& o) const { return {re - o.re, im - o.im}; }
    GRat operator-() const { return {-re, -im}; }
    GRat operator*(const GRat& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GRat conj() const { return {re, -im}; }
    // Multiplication by i (rotation by +90 degrees).
    GRat times_i() const { return {-im, re}; }
    GRat scale(const Rat& q) const { return {re * q, im * q}; }

    bool operator==(const GRat& o) const { return re == o.re && im == o.im; }
    bool operator!=(const GRat& o) const { return !(*this == o); }
};

GRat grat_mul_inverse(const GRat& z);
std::string grat_to_string(const GRat& z);

// Max-norm |re|,|im| as a rational.
Rat linf(const GRat& z);

// Primitive integer direction; uniquely represents e^{i theta} with
// (cos,sin) positively proportional to (x,y).
struct Ray {
    Int x, y;

    Ray() : x(0), y(0) {}
    Ray(Int px, Int py) : x(std::move(px)), y(std::move(py)) {}
    Ray(long px, long py) : x(px), y(py) {}

    Ray antipode() const { return Ray(-x, -y); }
    Ray rotate90() const { return Ray(-y, x); }  // counterclockwise

    bool operator==(const Ray& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Ray& o) const { return !(*this == o); }
};

// Primitive pair positively proportional to (x, y); error on (0, 0).
Ray ray_make(const Int& x, const Int& y);
Ray ray_normalize(const GRat& z);

// Total-order key in [0, 2pi) relative to (1,0): (quadrant, exact slope).
struct CycKey {
    int quad;
    Rat slope;
};
CycKey ray_cyclic_position(const Ray& u);
bool cyclic_less(const Ray& a, const Ray& b);
bool rays_parallel(const Ray& a, const Ray& b);  // same or opposite direction

// Sign of Re[(c - c') * conj(u)].  -1 means c <_theta c'; 0 means u is a
// Stokes direction of the pair.
int dominance(const GRat& c, const GRat& cp, const Ray& u);

std::string ray_to_string(const Ray& u);

// Primitive directions enumerated by increasing max(|x|,|y|), then
// counterclockwise from (1,0); index 0 is (1,0).
std::vector<Ray> primitive_directions(int count);

}  // namespace stokeslab

#endif
