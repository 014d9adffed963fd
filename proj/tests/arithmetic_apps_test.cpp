#include <doctest.h>

#include <random>

#include "formclass/arithmetic_apps.hpp"

using namespace formclass;
using arithmetic_apps::CongruenceReport;
using exact_algebra::IntPoly;
using numerics::PrecCtx;

namespace {

std::vector<long> primes_below(long bound) {
    std::vector<long> out;
    for (long p = 2; p < bound; ++p)
        if (exact_algebra::is_prime(mpz_class(p))) out.push_back(p);
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("arithmetic_apps");

TEST_CASE("split primes and their forms") {
    auto s7 = arithmetic_apps::find_split(mpz_class(-27), mpz_class(7));
    REQUIRE(s7.has_value());
    CHECK(s7->s == 1);
    CHECK(s7->split_form == quadforms::Form(7, 1, 1));

    auto s3 = arithmetic_apps::find_split(mpz_class(-20), mpz_class(3));
    REQUIRE(s3.has_value());
    CHECK(s3->s == 2);

    CHECK_FALSE(arithmetic_apps::find_split(mpz_class(-4), mpz_class(3)).has_value());
    CHECK_THROWS_AS(arithmetic_apps::find_split(mpz_class(-27), mpz_class(3)), PDividesD);
}

TEST_CASE("split solutions are sound, minimal and complete") {
    for (long D : {-27l, -20l, -180l, -200l}) {
        for (long p : primes_below(1000)) {
            if (D % p == 0) continue;
            std::optional<long> expect;
            for (long s = 0; s < 2 * p; ++s) {
                mpz_class r = (mpz_class(s) * s - D) % (4 * p);
                if (r < 0) r += 4 * p;
                if (r == 0) {
                    expect = s;
                    break;
                }
            }
            auto got = arithmetic_apps::find_split(mpz_class(D), mpz_class(p));
            CHECK(got.has_value() == expect.has_value());
            if (got && expect) {
                CHECK(got->s == *expect);
                CHECK((got->s * got->s - D) % (4 * p) == 0);
                CHECK(quadforms::disc(got->split_form) == D);
                // the primitive part of the split-form lattice has norm p
                orders::Order ord = orders::order_from_disc(mpz_class(D));
                auto lat = orders::make_ideal(mpq_class(1), got->split_form.a, got->split_form.b,
                                              ord);
                CHECK(orders::ideal_norm(lat) == p);
            }
        }
    }
}

TEST_CASE("kronecker symbol reference values") {
    CHECK(arithmetic_apps::kronecker_symbol(mpz_class(-1), mpz_class(5)) == 1);
    CHECK(arithmetic_apps::kronecker_symbol(mpz_class(-8), mpz_class(3)) == 1);
    CHECK(arithmetic_apps::kronecker_symbol(mpz_class(-20), mpz_class(7)) == 1);
}

TEST_CASE("splitting matches the kronecker symbol") {
    auto ps = primes_below(1000);
    for (long n = 1; n <= 50; ++n) {
        for (long p : ps) {
            if (p == 2 || (2 * n) % p == 0) continue;
            bool split = arithmetic_apps::find_split(mpz_class(-4 * n), mpz_class(p)).has_value();
            bool symbol = arithmetic_apps::kronecker_symbol(mpz_class(-n), mpz_class(p)) == 1;
            CHECK(split == symbol);
        }
    }
}

TEST_CASE("congruence verification at small split primes") {
    PrecCtx ctx(200, 20);
    for (long p : {7l, 13l}) {
        CongruenceReport rep =
            arithmetic_apps::verify_kronecker(mpz_class(-27), 2, {1}, mpz_class(p), ctx);
        CHECK(rep.verdict);
        CHECK(rep.charpoly.degree() == 6);
        CHECK(rep.max_residual.abs_less_pow10(-10));
    }
    CHECK_THROWS_AS(arithmetic_apps::verify_kronecker(mpz_class(-27), 2, {1}, mpz_class(3), ctx),
                    ConditionViolated);
    CHECK_THROWS_AS(arithmetic_apps::verify_kronecker(mpz_class(-27), 2, {1}, mpz_class(5), ctx),
                    ConditionViolated);
    try {
        arithmetic_apps::verify_kronecker(mpz_class(-27), 2, {1}, mpz_class(3), ctx);
    } catch (const ConditionViolated& e) {
        CHECK(e.which == 1);
    }
    try {
        arithmetic_apps::verify_kronecker(mpz_class(-27), 2, {1}, mpz_class(5), ctx);
    } catch (const ConditionViolated& e) {
        CHECK(e.which == 2);
    }
}

TEST_CASE("congruence at primes admissible only through -p") {
    // D = -20, N = 4, trivial subgroup: p = 3 (mod 4) has -p in G
    PrecCtx ctx(200, 20);
    for (long p : {3l, 7l}) {
        auto rep = arithmetic_apps::verify_kronecker(mpz_class(-20), 4, {1}, mpz_class(p), ctx);
        CHECK(rep.verdict);
    }
}

TEST_CASE("brute force representation witnesses") {
    auto w = arithmetic_apps::brute_force_rep(mpz_class(181), mpz_class(45), 2, {1});
    REQUIRE(w.has_value());
    CHECK(w->first == 1);
    CHECK(w->second == 2);

    auto w5 = arithmetic_apps::brute_force_rep(mpz_class(5), mpz_class(1), 1, {1});
    REQUIRE(w5.has_value());
    CHECK(w5->first == 1);
    CHECK(w5->second == 2);

    CHECK_FALSE(arithmetic_apps::brute_force_rep(mpz_class(7), mpz_class(1), 1, {1}).has_value());
}

TEST_CASE("criterion against a hand-supplied polynomial") {
    IntPoly f(std::vector<mpz_class>{1, 0, 1});  // X^2 + 1 for the classical n = 1 case
    CHECK(arithmetic_apps::criterion_rep(mpz_class(5), f, mpz_class(1), 1));
    CHECK_FALSE(arithmetic_apps::criterion_rep(mpz_class(7), f, mpz_class(1), 1));
    CHECK_THROWS_AS(arithmetic_apps::criterion_rep(mpz_class(2), f, mpz_class(1), 1),
                    ExcludedPrime);
}

TEST_CASE("criterion agrees with brute force through the synthesized polynomial") {
    PrecCtx ctx(200, 20);
    auto rep = arithmetic_apps::equivalence_harness(mpz_class(45), 2, {1}, mpz_class(500), ctx);
    CHECK(rep.disagreements.empty());
    CHECK(rep.agree > 0);
    CHECK(rep.minpoly.degree() == 16);
    // every excluded prime divides 2nN disc(F)
    mpz_class quantity = 2 * 45 * 2 * rep.minpoly_disc;
    for (const auto& p : rep.excluded)
        CHECK(mpz_divisible_p(quantity.get_mpz_t(), p.get_mpz_t()));
    // 181 divides the discriminant, so the criterion refuses it; the brute
    // force scan still finds the representation (1, 2)
    CHECK_THROWS_AS(arithmetic_apps::criterion_rep(mpz_class(181), rep.minpoly, mpz_class(45), 2,
                                                   &rep.minpoly_disc),
                    ExcludedPrime);
    CHECK(arithmetic_apps::brute_force_rep(mpz_class(181), mpz_class(45), 2, {1}).has_value());
}

TEST_SUITE_END();
