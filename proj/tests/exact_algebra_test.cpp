#include <doctest.h>

#include <random>

#include "formclass/exact_algebra.hpp"
#include "formclass/numerics.hpp"

using namespace formclass;
using exact_algebra::Factorization;
using exact_algebra::IntPoly;
using numerics::BigComplex;
using numerics::BigReal;

namespace {

IntPoly make_poly(std::initializer_list<long> constant_first) {
    std::vector<mpz_class> c;
    for (long v : constant_first) c.emplace_back(v);
    return IntPoly(std::move(c));
}

// Durand-Kerner root finder at high precision, used only as a test oracle.
std::vector<BigComplex> numeric_roots(const IntPoly& f, long digits, bool& converged) {
    numerics::PrecCtx ctx(digits, 20);
    const long bits = ctx.scale_bits();
    const long deg = f.degree();
    std::vector<BigComplex> coeff;
    for (const auto& c : f.coeffs)
        coeff.push_back(BigComplex::from_real(BigReal::from_int(c, bits)));
    auto eval = [&](const BigComplex& x) {
        BigComplex acc = BigComplex::zero(bits);
        for (long i = deg; i >= 0; --i) acc = acc * x + coeff[i];
        return acc;
    };
    // root bound 1 + max|c_i| / |lc|
    mpz_class maxc = 0;
    for (const auto& c : f.coeffs) maxc = std::max(maxc, mpz_class(abs(c)));
    BigReal bound = BigReal::from_int(1 + maxc / abs(f.leading()) + 1, bits);
    // seeds (0.4 + 0.9i)^k scaled
    std::vector<BigComplex> z;
    BigComplex seed(BigReal::from_ratio(4, 10, bits), BigReal::from_ratio(9, 10, bits));
    BigComplex cur = BigComplex::one(bits);
    for (long k = 0; k < deg; ++k) {
        cur = cur * seed;
        z.push_back({cur.re * bound, cur.im * bound});
    }
    converged = false;
    for (int iter = 0; iter < 500; ++iter) {
        bool moved = false;
        for (long i = 0; i < deg; ++i) {
            BigComplex den = coeff[deg];
            for (long j = 0; j < deg; ++j)
                if (j != i) den = den * (z[i] - z[j]);
            if (den.norm_sq().abs_less_pow10(-2 * digits)) return z;  // collision: give up
            BigComplex delta = numerics::cx_div(eval(z[i]), den, ctx);
            z[i] = z[i] - delta;
            if (!delta.norm_sq().abs_less_pow10(-(2 * digits - 30))) moved = true;
        }
        if (!moved) {
            converged = true;
            return z;
        }
    }
    return z;
}

}  // namespace

TEST_SUITE_BEGIN("exact_algebra");

TEST_CASE("discriminants of small polynomials") {
    CHECK(exact_algebra::poly_disc(make_poly({1, 0, 1})) == -4);
    CHECK(exact_algebra::poly_disc(make_poly({7, 1, 1})) == -27);
    CHECK(exact_algebra::poly_disc(make_poly({-4, 0, 3})) == 48);  // 3x^2 - 4
}

TEST_CASE("reference sextic discriminant") {
    IntPoly f(std::vector<mpz_class>{mpz_class("452984832"), 0, mpz_class("1359124367081472"), 0,
                                     mpz_class("-73725696"), 0, 1});
    mpz_class expect("-1");
    expect *= mpz_class(1) << 166;
    mpz_class t;
    mpz_ui_pow_ui(t.get_mpz_t(), 3, 21);
    expect *= t;
    mpz_ui_pow_ui(t.get_mpz_t(), 5, 12);
    expect *= t;
    for (unsigned long p : {11ul, 23ul, 47ul, 383ul}) {
        mpz_ui_pow_ui(t.get_mpz_t(), p, 4);
        expect *= t;
    }
    CHECK(exact_algebra::poly_disc(f) == expect);
}

TEST_CASE("modular and subresultant resultants agree") {
    std::mt19937_64 rng(5150);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<mpz_class> a, b;
        long da = 1 + static_cast<long>(rng() % 6), db = 1 + static_cast<long>(rng() % 6);
        for (long i = 0; i <= da; ++i) a.emplace_back(static_cast<long>(rng() % 2001) - 1000);
        for (long i = 0; i <= db; ++i) b.emplace_back(static_cast<long>(rng() % 2001) - 1000);
        IntPoly fa(a), fb(b);
        if (fa.degree() < 1 || fb.degree() < 1) continue;
        CHECK(exact_algebra::resultant(fa, fb) == exact_algebra::resultant_subresultant(fa, fb));
    }
}

TEST_CASE("discriminant equals the numeric root-product formula") {
    std::mt19937_64 rng(8086);
    int done = 0, skipped = 0;
    while (done < 200 && skipped < 60) {
        long deg = 2 + static_cast<long>(rng() % 5);
        std::vector<mpz_class> c;
        for (long i = 0; i <= deg; ++i) c.emplace_back(static_cast<long>(rng() % 2001) - 1000);
        IntPoly f(c);
        if (f.degree() < 2) continue;
        bool converged = false;
        auto roots = numeric_roots(f, 200, converged);
        if (!converged) {
            ++skipped;  // repeated or clustered roots; the oracle cannot settle
            continue;
        }
        const long bits = numerics::PrecCtx(200, 20).scale_bits();
        BigComplex prod = BigComplex::one(bits);
        for (size_t i = 0; i < roots.size(); ++i)
            for (size_t j = i + 1; j < roots.size(); ++j) {
                BigComplex d = roots[i] - roots[j];
                prod = prod * d * d;
            }
        // disc = lc^(2 deg - 2) * prod
        BigComplex lc = BigComplex::from_real(BigReal::from_int(f.leading(), bits));
        for (long k = 0; k < 2 * f.degree() - 2; ++k) prod = prod * lc;
        auto rounded = numerics::round_to_int(prod, mpq_class(1, 1000));
        CHECK(rounded.value == exact_algebra::poly_disc(f));
        ++done;
    }
    CHECK(done == 200);
}

TEST_CASE("factorization of reference integers") {
    auto f = exact_algebra::factor_int(mpz_class(28));
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0] == std::make_pair(mpz_class(2), 2ul));
    CHECK(f.factors[1] == std::make_pair(mpz_class(7), 1ul));
    CHECK(f.complete);

    auto g = exact_algebra::factor_int(mpz_class(383));
    REQUIRE(g.factors.size() == 1);
    CHECK(g.factors[0] == std::make_pair(mpz_class(383), 1ul));

    auto h = exact_algebra::factor_int(mpz_class("15630971591656081"));
    REQUIRE(h.factors.size() == 1);
    CHECK(h.factors[0].first == mpz_class("15630971591656081"));
}

TEST_CASE("factorizations reassemble and report primes") {
    std::mt19937_64 rng(1729);
    for (int trial = 0; trial < 40; ++trial) {
        mpz_class n = 1;
        int parts = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < parts; ++i) n *= static_cast<long>(rng() % 1000000) + 2;
        auto f = exact_algebra::factor_int(n);
        CHECK(f.complete);
        mpz_class back = 1;
        for (const auto& [p, e] : f.factors) {
            CHECK(exact_algebra::is_prime(p));
            for (unsigned long k = 0; k < e; ++k) back *= p;
        }
        CHECK(back == n);
    }
}

TEST_CASE("budget expiry yields a flagged partial factorization") {
    // product of two 40-digit primes; rho cannot split it within the budget
    mpz_class p1, p2, seed1("1" + std::string(39, '7')), seed2("3" + std::string(39, '1'));
    mpz_nextprime(p1.get_mpz_t(), seed1.get_mpz_t());
    mpz_nextprime(p2.get_mpz_t(), seed2.get_mpz_t());
    mpz_class n = p1 * p2;
    auto f = exact_algebra::factor_int(n, 0.05);
    CHECK_FALSE(f.complete);
    mpz_class back = 1;
    for (const auto& [p, e] : f.factors)
        for (unsigned long k = 0; k < e; ++k) back *= p;
    CHECK(back == n);  // the unfactored cofactor is still reported
}

TEST_CASE("root detection modulo p") {
    CHECK(exact_algebra::has_root_mod_p(make_poly({1, 0, 1}), mpz_class(5)));
    CHECK_FALSE(exact_algebra::has_root_mod_p(make_poly({1, 0, 1}), mpz_class(7)));
    CHECK(exact_algebra::has_root_mod_p(make_poly({7, 1, 1}), mpz_class(3)));
    CHECK_THROWS_AS(exact_algebra::has_root_mod_p(make_poly({1, 1, 5}), mpz_class(5)),
                    LeadingCoeffVanishes);
}

TEST_CASE("root detection agrees with exhaustive evaluation") {
    std::mt19937_64 rng(31415);
    std::vector<long> primes;
    for (long p = 2; p < 1000; ++p)
        if (exact_algebra::is_prime(mpz_class(p))) primes.push_back(p);
    for (int trial = 0; trial < 100; ++trial) {
        long deg = 1 + static_cast<long>(rng() % 6);
        std::vector<mpz_class> c;
        for (long i = 0; i <= deg; ++i) c.emplace_back(static_cast<long>(rng() % 201) - 100);
        IntPoly f(c);
        if (f.degree() < 1) continue;
        long p = primes[rng() % primes.size()];
        if (f.leading() % p == 0) continue;
        bool expect = false;
        for (long x = 0; x < p && !expect; ++x) {
            mpz_class acc = 0;
            for (long i = f.degree(); i >= 0; --i) acc = (acc * x + f.coeffs[i]) % p;
            if (acc % p == 0) expect = true;
        }
        CHECK(exact_algebra::has_root_mod_p(f, mpz_class(p)) == expect);
    }
}

TEST_CASE("primality of reference integers") {
    CHECK(exact_algebra::is_prime(mpz_class(181)));
    CHECK_FALSE(exact_algebra::is_prime(mpz_class(221)));
    CHECK(exact_algebra::is_prime(mpz_class("1459141468570561")));
}

TEST_SUITE_END();
