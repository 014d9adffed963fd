#ifndef FORMCLASS_QUADFORMS_HPP
#define FORMCLASS_QUADFORMS_HPP

#include <gmpxx.h>

#include <vector>

#include "formclass/errors.hpp"
#include "formclass/numerics.hpp"

// Binary quadratic forms ax^2 + bxy + cy^2, the right SL2(Z) action,
// Gauss reduction with transformation witness, automorph groups and the
// upper-half-plane root of Q(x, 1).
namespace formclass::quadforms {

struct Form {
    mpz_class a, b, c;

    Form() = default;
    Form(mpz_class a_, mpz_class b_, mpz_class c_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {}
    Form(long a_, long b_, long c_) : a(a_), b(b_), c(c_) {}

    bool operator==(const Form& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const Form& o) const;  // lexicographic on (a, b, c)

    bool is_primitive() const;
    bool is_positive_definite() const;
};

// Element of SL2(Z), entries [[a, b], [c, d]] with det = 1 (checked).
struct UniMat {
    mpz_class a, b, c, d;

    UniMat() : a(1), b(0), c(0), d(1) {}
    UniMat(mpz_class a_, mpz_class b_, mpz_class c_, mpz_class d_);
    UniMat(long a_, long b_, long c_, long d_);

    static UniMat identity() { return UniMat(); }
    UniMat inverse() const { return {d, -b, -c, a}; }
    friend UniMat operator*(const UniMat& x, const UniMat& y);
    bool operator==(const UniMat& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
};

// Negative definite forms are carried as a sign wrapper, never as raw
// negative-a triples.
struct SignedForm {
    Form form;
    int sign = +1;  // -1 denotes -Q

    // Coefficients as read: negated when the sign is -1.
    Form coefficients() const {
        return sign >= 0 ? form : Form(-form.a, -form.b, -form.c);
    }
};

mpz_class disc(const Form& q);

// Membership in the level set: disc = D, primitive, gcd(a, N) = 1, a > 0.
bool in_level_set(const Form& q, const mpz_class& D, const mpz_class& N);

// Right action Q^g(x, y) = Q(g (x, y)^T).
Form apply(const Form& q, const UniMat& g);

struct ReduceResult {
    Form form;        // the reduced representative
    UniMat transform;  // apply(input, transform) == form
};

// Gauss reduction to -a < b <= a <= c with b >= 0 when a = c or a = |b|.
ReduceResult reduce(const Form& q);

// All primitive reduced forms of discriminant D < 0, sorted lexicographically.
std::vector<Form> reduced_reps(const mpz_class& D);

// Stabilizer of a reduced positive definite form in SL2(Z).
std::vector<UniMat> automorphs(const Form& q);

// omega_Q = (-b + sqrt(D)) / 2a, the root of Q(x, 1) in the upper half-plane.
numerics::BigComplex root(const Form& q, const numerics::PrecCtx& ctx);

// Moebius action g(tau) = (a tau + b) / (c tau + d).
numerics::BigComplex moebius(const UniMat& g, const numerics::BigComplex& tau,
                             const numerics::PrecCtx& ctx);

}  // namespace formclass::quadforms

#endif
