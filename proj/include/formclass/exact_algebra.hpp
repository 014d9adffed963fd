#ifndef FORMCLASS_EXACT_ALGEBRA_HPP
#define FORMCLASS_EXACT_ALGEBRA_HPP

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "formclass/errors.hpp"

// Exact integer polynomial algebra: resultants and discriminants, integer
// factorization, primality and mod-p root detection.
namespace formclass::exact_algebra {

// Coefficients with the constant term first; leading coefficient nonzero
// (the zero polynomial is the empty vector).
struct IntPoly {
    std::vector<mpz_class> coeffs;

    IntPoly() = default;
    explicit IntPoly(std::vector<mpz_class> c) : coeffs(std::move(c)) { normalize(); }

    void normalize() {
        while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    }
    bool is_zero() const { return coeffs.empty(); }
    long degree() const { return static_cast<long>(coeffs.size()) - 1; }
    const mpz_class& leading() const { return coeffs.back(); }

    IntPoly derivative() const;
    mpz_class eval(const mpz_class& x) const;
};

// Res(f, g), exact, via CRT over word-size primes bounded by the Hadamard
// estimate of the Sylvester determinant.
mpz_class resultant(const IntPoly& f, const IntPoly& g);

// Same value through the integer subresultant PRS; kept as an independent
// route and fallback.
mpz_class resultant_subresultant(const IntPoly& f, const IntPoly& g);

// (-1)^(d(d-1)/2) Res(F, F') / lc(F) for deg F >= 2.
mpz_class poly_disc(const IntPoly& f);

struct Factorization {
    std::vector<std::pair<mpz_class, unsigned long>> factors;  // sorted by prime
    bool complete = true;  // false when the budget expired; the trailing
                           // entry then holds an unfactored cofactor
};

// Exact factorization of |n|: trial division to 10^6, perfect-power
// reduction, then Brent's rho with a fixed parameter schedule.
Factorization factor_int(const mpz_class& n, double budget_seconds = 60.0);

// Deterministic Miller-Rabin below 3.3e24; a fixed extended witness set above.
bool is_prime(const mpz_class& n);

// True iff F has a root in Z/pZ, via deg gcd(X^p - X, F mod p) > 0.
bool has_root_mod_p(const IntPoly& f, const mpz_class& p);

}  // namespace formclass::exact_algebra

#endif
