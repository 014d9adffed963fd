#ifndef FORMCLASS_ARITHMETIC_APPS_HPP
#define FORMCLASS_ARITHMETIC_APPS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "formclass/classgroups.hpp"
#include "formclass/exact_algebra.hpp"
#include "formclass/modfuncs.hpp"

// Split-prime detection, the Kronecker-type congruence verifier, and the
// x^2 + n y^2 prime-representation engine with its brute-force oracle.
namespace formclass::arithmetic_apps {

struct SplitPrimeData {
    mpz_class p;
    mpz_class s;  // least non-negative solution of s^2 = D (mod 4p)
    quadforms::Form split_form;  // (p, s, (s^2 - D)/4p)
};

// None when p is not decomposed with respect to the order of discriminant D.
std::optional<SplitPrimeData> find_split(const mpz_class& D, const mpz_class& p);

int kronecker_symbol(const mpz_class& a, const mpz_class& n);

struct CongruenceReport {
    mpz_class disc;
    long level = 0;
    std::vector<long> subgroup;
    mpz_class p, s;
    numerics::BigComplex value_at_omega;       // f(omega)
    numerics::BigComplex value_at_omega_over_p;  // f(omega/p), direct evaluation
    exact_algebra::IntPoly charpoly;           // of (A^p - B)(A - B^p), monic
    bool verdict = false;                      // p^k divides the k-th coefficient
    numerics::BigReal max_residual;
    long digits_used = 0;
};

// Checks hypotheses (i)-(iii), forms the conjugate families of f(omega) and
// f(omega/p) (the latter by group translation through the split class),
// expands the characteristic polynomial of (A^p - B)(A - B^p) exactly and
// tests p^k | c_k.
CongruenceReport verify_kronecker(const mpz_class& D, long N, const std::vector<long>& G,
                                  const mpz_class& p, const numerics::PrecCtx& ctx);

// Exhaustive scan for p = x^2 + n y^2 with y = 0 (mod N) and x mod N in G
// up to sign; the returned x is negative when only its negative lies in G.
std::optional<std::pair<mpz_class, mpz_class>> brute_force_rep(const mpz_class& p,
                                                               const mpz_class& n, long N,
                                                               const std::vector<long>& G);

// (-n/p) = 1 and F has a root mod p. disc_f may be supplied to avoid
// recomputation; p must not divide 2nN * disc(F) * lc(F).
bool criterion_rep(const mpz_class& p, const exact_algebra::IntPoly& f, const mpz_class& n,
                   long N, const mpz_class* disc_f = nullptr);

struct HarnessReport {
    mpz_class n;
    long level = 0;
    std::vector<long> subgroup;
    mpz_class bound;
    long agree = 0;
    std::vector<mpz_class> excluded;
    std::vector<mpz_class> disagreements;
    exact_algebra::IntPoly minpoly;
    mpz_class minpoly_disc;
};

// Synthesizes the minimal polynomial for disc -4n, then compares
// brute_force_rep against criterion_rep over all primes below the bound.
HarnessReport equivalence_harness(const mpz_class& n, long N, const std::vector<long>& G,
                                  const mpz_class& bound, const numerics::PrecCtx& ctx);

}  // namespace formclass::arithmetic_apps

#endif
