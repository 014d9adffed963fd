#ifndef FORMCLASS_ORDERS_HPP
#define FORMCLASS_ORDERS_HPP

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "formclass/errors.hpp"
#include "formclass/quadforms.hpp"

// Imaginary quadratic orders, proper fractional ideals as normalized
// lattices, norms, principality with generator extraction, and the
// rational-congruence tests behind the P_G subgroup.
namespace formclass::orders {

// tau is the standard generator: a root of x^2 + b0 x + c0 with
// (b0, c0) = (1, (1-D)/4) for D = 1 mod 4 and (0, -D/4) for D = 0 mod 4,
// so that the order is Z tau + Z.
struct Order {
    mpz_class disc;        // D < 0
    mpz_class field_disc;  // fundamental discriminant d_K
    mpz_class conductor;   // D = conductor^2 * d_K
    mpz_class b0, c0;

    quadforms::Form principal_form() const { return {mpz_class(1), b0, c0}; }
    numerics::BigComplex tau(const numerics::PrecCtx& ctx) const;
};

Order order_from_disc(const mpz_class& D);

// scale * (Z a + Z (-b + sqrt(D)) / 2) with b^2 = D (mod 4a), -a < b <= a,
// and (a, b, (b^2-D)/4a) primitive so the multiplier ring is exactly the order.
struct IdealLat {
    mpq_class scale;  // positive
    mpz_class a;      // positive
    mpz_class b;

    bool operator==(const IdealLat& o) const {
        return scale == o.scale && a == o.a && b == o.b;
    }
    quadforms::Form associated_form(const Order& ord) const;
};

// x + y tau in coordinates over {1, tau}.
struct AlgInt {
    mpz_class x, y;
    bool operator==(const AlgInt& o) const { return x == o.x && y == o.y; }
};

// N(x + y tau) = x^2 - b0 x y + c0 y^2.
mpz_class element_norm(const AlgInt& v, const Order& ord);

// Normalizes (scale, a, b) into canonical shape; checks b^2 = D (mod 4a) and
// primitivity of the associated form.
IdealLat make_ideal(const mpq_class& scale, const mpz_class& a, const mpz_class& b,
                    const Order& ord);

// The lattice [omega_Q, 1] = (1/a)(Z a + Z(-b + sqrt(D))/2).
IdealLat ideal_from_form(const quadforms::Form& q, const Order& ord);

// Principal ideal generated by an element of the order (or of K when a
// rational denominator accompanies it).
IdealLat principal_ideal(const AlgInt& v, const Order& ord);

IdealLat ideal_one(const Order& ord);
IdealLat ideal_mul(const IdealLat& x, const IdealLat& y, const Order& ord);
IdealLat ideal_conj(const IdealLat& x, const Order& ord);
IdealLat ideal_inv(const IdealLat& x, const Order& ord);
mpq_class ideal_norm(const IdealLat& x);

bool is_prime_to(const IdealLat& x, const mpz_class& m);

struct PrincipalGen {
    AlgInt element;     // generator of the primitive integral part
    mpq_class cofactor;  // rational scale, so the ideal is (cofactor * element) O
};

// Some(generator) iff the ideal is principal; the generator is unique up to
// the unit group.
std::optional<PrincipalGen> principal_gen(const IdealLat& x, const Order& ord);

// Some(x mod N) iff v = x + y tau has y = 0 (mod N), since N*O = [N tau, N].
std::optional<mpz_class> congruence_class_mod_NO(const AlgInt& v, const mpz_class& N,
                                                 const Order& ord);

// Unit group of the order in {1, tau} coordinates.
std::vector<AlgInt> units(const Order& ord);

// Membership in P_G(O, N): the ideal must be principal with generator nu / r
// (nu integral, r rational) whose class in (O/NO)^x lies in the subgroup
// generated by the rational residues of G and the images of the units.
bool in_PG(const IdealLat& x, const mpz_class& N, const std::vector<long>& G,
           const Order& ord);

// Wire format {"scale": "p/q", "a": "...", "b": "..."}.
std::string ideal_to_json(const IdealLat& x);

}  // namespace formclass::orders

#endif
