#ifndef FORMCLASS_MODFUNCS_HPP
#define FORMCLASS_MODFUNCS_HPP

#include <vector>

#include "formclass/classgroups.hpp"
#include "formclass/exact_algebra.hpp"
#include "formclass/numerics.hpp"
#include "formclass/orders.hpp"

// Siegel-function evaluation, class invariants attached to a level
// structure, their Galois conjugates, and minimal-polynomial synthesis
// over Q from high-precision conjugate values.
namespace formclass::modfuncs {

// Index vector (v1, v2), reduced mod 1, not both integral.
struct SiegelIndex {
    mpq_class v1, v2;
    SiegelIndex(const mpq_class& a, const mpq_class& b);
};

// The invariant is the product over u in orbit of g_{[0, u/N]}^exponent,
// with exponent = 12N/gcd(6, N); orbit is the +-folded set of G-residues.
struct InvariantSpec {
    long level = 0;
    unsigned long exponent = 0;
    std::vector<long> orbit;
};

InvariantSpec invariant_for(const classgroups::LevelStructure& level);

// g_v(tau): the q-product with the nome truncated once |q|^M falls below
// the working precision. Never vanishes on the upper half-plane.
numerics::BigComplex siegel(const SiegelIndex& v, const numerics::BigComplex& tau,
                            const numerics::PrecCtx& ctx);

numerics::BigComplex invariant_value(const InvariantSpec& spec, const numerics::BigComplex& tau,
                                     const numerics::PrecCtx& ctx);

// One value per class: for class rep (a, b, c) with a a' = 1 (mod N), the
// conjugate is prod_u g_{[0, u a'/N]}(-conj(omega_Q))^e. Index 0 carries the
// invariant's own value at the order's CM point.
std::vector<numerics::BigComplex> conjugate_values(const orders::Order& ord,
                                                   const classgroups::LevelStructure& level,
                                                   const InvariantSpec& spec,
                                                   const classgroups::ClassGroup& cg,
                                                   const numerics::PrecCtx& ctx);

struct AlgebraicValue {
    long degree = 0;
    std::vector<numerics::BigComplex> conjugates;  // closed under conjugation
    std::vector<mpz_class> minpoly;                // constant first, monic
    numerics::BigReal residual;                    // max coefficient rounding residual
    long digits_used = 0;
};

// Generator sqrt(d_K) * h(tau_O); the 2|C| conjugates pair into quadratics
// (X - sqrt(d_K) v)(X + sqrt(d_K) conj(v)) with real coefficients, whose
// product is rounded to an integer polynomial. Doubles the working digits
// on rounding failure, up to the cap.
AlgebraicValue minpoly_over_Q(const orders::Order& ord,
                              const classgroups::LevelStructure& level,
                              const InvariantSpec& spec, const classgroups::ClassGroup& cg,
                              const numerics::PrecCtx& ctx);

// |F(alpha)| / (max |coeff| * max(1, |alpha|)^deg), by Horner.
numerics::BigReal poly_eval_check(const exact_algebra::IntPoly& f,
                                  const numerics::BigComplex& alpha,
                                  const numerics::PrecCtx& ctx);

}  // namespace formclass::modfuncs

#endif
