#include <doctest.h>

#include <random>

#include "formclass/modfuncs.hpp"

using namespace formclass;
using classgroups::ClassGroup;
using classgroups::LevelStructure;
using modfuncs::InvariantSpec;
using modfuncs::SiegelIndex;
using numerics::BigComplex;
using numerics::BigReal;
using numerics::PrecCtx;
using orders::Order;
using quadforms::UniMat;

namespace {

BigComplex cx_rat(long re_num, long re_den, long im_num, long im_den, long bits) {
    return {BigReal::from_ratio(re_num, re_den, bits), BigReal::from_ratio(im_num, im_den, bits)};
}

BigComplex random_tau(std::mt19937_64& rng, long bits) {
    long re = static_cast<long>(rng() % 2001) - 1000;  // [-0.5, 0.5]
    long im = 100 + static_cast<long>(rng() % 1900);   // [0.1, 2]
    return cx_rat(re, 2000, im, 1000, bits);
}

// gamma in the principal congruence subgroup of level n with entries <= ~50
UniMat random_gamma_n(std::mt19937_64& rng, long n) {
    while (true) {
        long a = 1 + n * (static_cast<long>(rng() % 5) - 2);
        long c = n * (static_cast<long>(rng() % 5) - 2);
        if (a == 0 || std::gcd(std::abs(a), std::abs(c)) != 1) continue;
        mpz_class g, x, y, az(a), cz(c);
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), az.get_mpz_t(), cz.get_mpz_t());
        // d = x + c s, b = -y + a s; pick s so that b = 0 (mod n)
        mpz_class s = 0;
        mpz_class nz(n);
        mpz_class yy;
        mpz_mod(yy.get_mpz_t(), y.get_mpz_t(), nz.get_mpz_t());
        s = yy;  // b = -y + a s = -y + s (mod n) = 0 when s = y (a = 1 mod n)
        UniMat m(az, -y + az * s, cz, x + cz * s);
        mpz_class chk_b, chk_d, dm1 = m.d - 1;
        mpz_mod(chk_b.get_mpz_t(), m.b.get_mpz_t(), nz.get_mpz_t());
        mpz_mod(chk_d.get_mpz_t(), dm1.get_mpz_t(), nz.get_mpz_t());
        if (chk_b != 0 || chk_d != 0) continue;
        if (abs(m.a) > 60 || abs(m.b) > 60 || abs(m.c) > 60 || abs(m.d) > 60) continue;
        return m;
    }
}

bool rel_close(const BigComplex& x, const BigComplex& y, long digits, long guard) {
    BigReal diff = (x - y).abs();
    BigReal mag = x.abs();
    if (mag.is_zero()) return diff.abs_less_pow10(guard - digits);
    return (diff / mag).abs_less_pow10(guard - digits);
}

}  // namespace

TEST_SUITE_BEGIN("modfuncs");

TEST_CASE("siegel values are finite and nonzero") {
    PrecCtx ctx(80, 20);
    long bits = ctx.scale_bits();
    BigComplex two_i = cx_rat(0, 1, 2, 1, bits);
    BigComplex v = modfuncs::siegel(SiegelIndex(mpq_class(0), mpq_class(1, 2)), two_i, ctx);
    CHECK_FALSE(v.norm_sq().abs_less_pow10(-60));
    CHECK(v.norm_sq().abs_less_pow10(60));
}

TEST_CASE("siegel index sign symmetry") {
    PrecCtx ctx(80, 20);
    long bits = ctx.scale_bits();
    BigComplex two_i = cx_rat(0, 1, 2, 1, bits);
    BigComplex a = numerics::cx_pow(
        modfuncs::siegel(SiegelIndex(mpq_class(0), mpq_class(1, 3)), two_i, ctx), 12);
    BigComplex b = numerics::cx_pow(
        modfuncs::siegel(SiegelIndex(mpq_class(0), mpq_class(2, 3)), two_i, ctx), 12);
    CHECK(rel_close(a, b, ctx.digits, ctx.guard));
}

TEST_CASE("sign symmetry at random points for all indices") {
    PrecCtx ctx(100, 20);
    long bits = ctx.scale_bits();
    std::mt19937_64 rng(404);
    for (long n : {2l, 3l, 5l}) {
        unsigned long e = 12ul * n / std::gcd(6l, n);
        for (int trial = 0; trial < 50; ++trial) {
            BigComplex tau = random_tau(rng, bits);
            for (long u = 1; u < n; ++u) {
                BigComplex a = numerics::cx_pow(
                    modfuncs::siegel(SiegelIndex(mpq_class(0), mpq_class(u, n)), tau, ctx), e);
                BigComplex b = numerics::cx_pow(
                    modfuncs::siegel(SiegelIndex(mpq_class(0), mpq_class(n - u, n)), tau, ctx), e);
                CHECK(rel_close(a, b, ctx.digits, ctx.guard));
            }
        }
    }
}

TEST_CASE("the invariant value at the CM point is a real algebraic number") {
    PrecCtx ctx(100, 20);
    Order ord = orders::order_from_disc(mpz_class(-27));
    auto tau = ord.tau(ctx);
    BigComplex g12 =
        numerics::cx_pow(modfuncs::siegel(SiegelIndex(mpq_class(0), mpq_class(1, 2)), tau, ctx), 12);
    // |Im| / |value| below the precision floor
    CHECK((g12.im.abs() / g12.abs()).abs_less_pow10(ctx.guard - ctx.digits));
}

TEST_CASE("invariant spec construction") {
    InvariantSpec s2 = modfuncs::invariant_for(LevelStructure::trivial(2));
    CHECK(s2.exponent == 12);
    CHECK(s2.orbit == std::vector<long>({1}));
    InvariantSpec s3 = modfuncs::invariant_for(LevelStructure::full(3));
    CHECK(s3.exponent == 12);
    CHECK(s3.orbit == std::vector<long>({1}));  // {1, 2} folds to {1}
    InvariantSpec s8 = modfuncs::invariant_for(LevelStructure(8, {1, 3}));
    CHECK(s8.exponent == 48);
    CHECK(s8.orbit == std::vector<long>({1, 3}));
    CHECK_THROWS(modfuncs::invariant_for(LevelStructure::trivial(1)));
}

TEST_CASE("invariant is a single siegel power for the trivial subgroup") {
    PrecCtx ctx(80, 20);
    long bits = ctx.scale_bits();
    InvariantSpec spec = modfuncs::invariant_for(LevelStructure::trivial(3));
    BigComplex tau = cx_rat(1, 4, 3, 2, bits);
    BigComplex direct = numerics::cx_pow(
        modfuncs::siegel(SiegelIndex(mpq_class(0), mpq_class(1, 3)), tau, ctx), spec.exponent);
    BigComplex viaspec = modfuncs::invariant_value(spec, tau, ctx);
    CHECK(rel_close(direct, viaspec, ctx.digits, ctx.guard));
}

TEST_CASE("invariance under translation and the principal congruence subgroup") {
    PrecCtx ctx(100, 20);
    long bits = ctx.scale_bits();
    std::mt19937_64 rng(505);
    for (long n : {2l, 3l}) {
        InvariantSpec spec = modfuncs::invariant_for(LevelStructure::trivial(n));
        for (int trial = 0; trial < 10; ++trial) {
            BigComplex tau = random_tau(rng, bits);
            BigComplex base = modfuncs::invariant_value(spec, tau, ctx);
            BigComplex shifted = modfuncs::invariant_value(
                spec, {tau.re + BigReal::from_long(1, bits), tau.im}, ctx);
            CHECK(rel_close(base, shifted, ctx.digits, ctx.guard));
        }
        for (int trial = 0; trial < 20; ++trial) {
            BigComplex tau = random_tau(rng, bits);
            UniMat g = random_gamma_n(rng, n);
            BigComplex moved = quadforms::moebius(g, tau, ctx);
            BigComplex a = modfuncs::invariant_value(spec, tau, ctx);
            BigComplex b = modfuncs::invariant_value(spec, moved, ctx);
            CHECK(rel_close(a, b, ctx.digits, ctx.guard));
        }
    }
}

TEST_CASE("conjugate values: identity class carries the invariant itself") {
    PrecCtx ctx(100, 20);
    Order ord = orders::order_from_disc(mpz_class(-27));
    LevelStructure level = LevelStructure::trivial(2);
    ClassGroup cg = classgroups::enumerate_classes(ord, level);
    InvariantSpec spec = modfuncs::invariant_for(level);
    auto vals = modfuncs::conjugate_values(ord, level, spec, cg, ctx);
    REQUIRE(vals.size() == 3);
    BigComplex direct = modfuncs::invariant_value(spec, ord.tau(ctx), ctx);
    CHECK(rel_close(vals[0], direct, ctx.digits, ctx.guard));
    // pairwise distinct
    for (size_t i = 0; i < vals.size(); ++i)
        for (size_t j = i + 1; j < vals.size(); ++j)
            CHECK_FALSE((vals[i] - vals[j]).norm_sq().abs_less_pow10(-ctx.digits));
    // closed under conjugation: the non-real pair are mutual conjugates
    CHECK(rel_close(vals[1].conj(), vals[2], ctx.digits, ctx.guard));
}

TEST_CASE("conjugate at the split class equals the value at omega over p") {
    PrecCtx ctx(100, 20);
    const long bits = ctx.scale_bits();
    Order ord = orders::order_from_disc(mpz_class(-27));
    LevelStructure level = LevelStructure::trivial(2);
    ClassGroup cg = classgroups::enumerate_classes(ord, level);
    InvariantSpec spec = modfuncs::invariant_for(level);
    auto vals = modfuncs::conjugate_values(ord, level, spec, cg, ctx);
    // p = 7 splits with s = 1; omega/p = (1 + sqrt(-27)) / 14
    quadforms::Form split(7, 1, 1);
    int k = classgroups::class_of(split, cg);
    BigComplex sq = numerics::sqrt_negative(mpz_class(-27), ctx);
    BigReal den = BigReal::from_long(14, bits);
    BigComplex omega_over_p(BigReal::from_long(1, bits) / den, sq.im / den);
    BigComplex direct = modfuncs::invariant_value(spec, omega_over_p, ctx);
    CHECK(rel_close(vals[k], direct, ctx.digits, ctx.guard));
}

TEST_CASE("minimal polynomial for the degree-6 reference configuration") {
    PrecCtx ctx(200, 20);
    Order ord = orders::order_from_disc(mpz_class(-27));
    LevelStructure level = LevelStructure::trivial(2);
    ClassGroup cg = classgroups::enumerate_classes(ord, level);
    InvariantSpec spec = modfuncs::invariant_for(level);
    auto av = modfuncs::minpoly_over_Q(ord, level, spec, cg, ctx);
    CHECK(av.degree == 6);
    CHECK(av.degree == 2 * cg.size());
    REQUIRE(av.minpoly.size() == 7);
    CHECK(av.minpoly[0] == mpz_class("452984832"));
    CHECK(av.minpoly[1] == 0);
    CHECK(av.minpoly[2] == mpz_class("1359124367081472"));
    CHECK(av.minpoly[3] == 0);
    CHECK(av.minpoly[4] == mpz_class("-73725696"));
    CHECK(av.minpoly[5] == 0);
    CHECK(av.minpoly[6] == 1);
    CHECK(av.residual.abs_less_pow10(-10));
    // conjugate list closed under complex conjugation
    REQUIRE(av.conjugates.size() == 6);
    for (const auto& a : av.conjugates) {
        bool paired = false;
        for (const auto& b : av.conjugates)
            if ((a.conj() - b).norm_sq().abs_less_pow10(-ctx.digits)) paired = true;
        CHECK(paired);
    }
    exact_algebra::IntPoly f(av.minpoly);
    for (const auto& a : av.conjugates)
        CHECK(modfuncs::poly_eval_check(f, a, ctx).abs_less_pow10(-150));
}

TEST_CASE("degree is twice the class number across the corpus") {
    PrecCtx ctx(200, 20);
    for (auto [D, N] : std::vector<std::pair<long, long>>{{-27, 2}, {-180, 2}}) {
        Order ord = orders::order_from_disc(mpz_class(D));
        LevelStructure level = LevelStructure::trivial(N);
        ClassGroup cg = classgroups::enumerate_classes(ord, level);
        auto av = modfuncs::minpoly_over_Q(ord, level, modfuncs::invariant_for(level), cg, ctx);
        CHECK(av.degree == 2 * cg.size());
    }
}

TEST_CASE("poly_eval_check relative residuals") {
    PrecCtx ctx(60, 20);
    long bits = ctx.scale_bits();
    exact_algebra::IntPoly f(std::vector<mpz_class>{1, 0, 1});  // X^2 + 1
    BigComplex i_unit(BigReal::from_long(0, bits), BigReal::from_long(1, bits));
    CHECK(modfuncs::poly_eval_check(f, i_unit, ctx).abs_less_pow10(-50));
    BigComplex one = BigComplex::one(bits);
    BigReal at_one = modfuncs::poly_eval_check(f, one, ctx);
    CHECK((at_one - BigReal::from_long(2, bits)).abs_less_pow10(-50));
}

TEST_SUITE_END();
