#include "formclass/modfuncs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace formclass::modfuncs {

using classgroups::ClassGroup;
using classgroups::LevelStructure;
using numerics::BigComplex;
using numerics::BigReal;
using numerics::PrecCtx;
using orders::Order;

namespace {

mpq_class frac_mod1(const mpq_class& q) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    mpq_class r = q - mpq_class(fl);
    r.canonicalize();
    return r;
}

}  // namespace

SiegelIndex::SiegelIndex(const mpq_class& a, const mpq_class& b)
    : v1(frac_mod1(a)), v2(frac_mod1(b)) {
    if (v1 == 0 && v2 == 0) throw Error("siegel index must not be integral");
}

InvariantSpec invariant_for(const LevelStructure& level) {
    const long n = level.modulus;
    if (n < 2) throw Error("invariants require level at least 2");
    InvariantSpec spec;
    spec.level = n;
    spec.exponent = 12ul * static_cast<unsigned long>(n) / std::gcd(6l, n);
    std::set<long> folded;
    for (long u : level.residues) folded.insert(std::min(u, n - u));
    spec.orbit.assign(folded.begin(), folded.end());
    return spec;
}

BigComplex siegel(const SiegelIndex& v, const BigComplex& tau, const PrecCtx& ctx) {
    const long bits = tau.bits();
    const BigComplex one = BigComplex::one(bits);

    BigComplex q = numerics::cx_exp2pii(tau, ctx);
    // z = v1 tau + v2; both q_z and its inverse come straight from z
    BigComplex z(tau.re.mul_mpq(v.v1) + BigReal::from_mpq(v.v2, bits), tau.im.mul_mpq(v.v1));
    BigComplex qz = numerics::cx_exp2pii(z, ctx);
    BigComplex qz_inv = numerics::cx_exp2pii(-z, ctx);

    // -q^{B2(v1)/2} e^{pi i v2 (v1 - 1)}
    mpq_class b2 = v.v1 * v.v1 - v.v1 + mpq_class(1, 6);
    BigComplex lead = numerics::cx_exp2pii_scaled(tau, b2 / 2, ctx);
    mpq_class half_phase = v.v2 * (v.v1 - 1) / 2;
    lead *= numerics::cx_exp2pii(BigComplex::from_real(BigReal::from_mpq(half_phase, bits)), ctx);
    lead = -lead;

    double im_tau = tau.im.to_double();
    if (im_tau <= 0) throw Error("siegel requires Im(tau) > 0");
    long terms = static_cast<long>(ctx.scale_digits() * 2.302585092994046 /
                                   (6.283185307179586 * im_tau)) + 5;

    BigComplex prod = one - qz;
    BigComplex qn = q;
    for (long n = 1; n <= terms; ++n) {
        prod *= (one - qn * qz);
        prod *= (one - qn * qz_inv);
        qn *= q;
    }
    return lead * prod;
}

BigComplex invariant_value(const InvariantSpec& spec, const BigComplex& tau, const PrecCtx& ctx) {
    BigComplex acc = BigComplex::one(tau.bits());
    for (long u : spec.orbit) {
        SiegelIndex idx(mpq_class(0), mpq_class(u, spec.level));
        acc *= numerics::cx_pow(siegel(idx, tau, ctx), spec.exponent);
    }
    return acc;
}

std::vector<BigComplex> conjugate_values(const Order& ord, const LevelStructure& level,
                                         const InvariantSpec& spec, const ClassGroup& cg,
                                         const PrecCtx& ctx) {
    if (ord.disc == -3 || ord.disc == -4) throw Error("discriminant must differ from -3, -4");
    const long n = level.modulus;
    if (n < 2) throw Error("conjugates require level at least 2");
    std::vector<BigComplex> out;
    out.reserve(cg.reps.size());
    for (const auto& rep : cg.reps) {
        if ((rep.b - ord.b0) % 2 != 0) throw ParityViolation();
        mpz_class ainv;
        mpz_class nz(n);
        if (mpz_invert(ainv.get_mpz_t(), rep.a.get_mpz_t(), nz.get_mpz_t()) == 0)
            throw Error("class representative not invertible mod N");
        // -conj(omega_Q): flip the sign of the real part of the root
        BigComplex w = quadforms::root(rep, ctx);
        BigComplex point(-w.re, w.im);
        BigComplex acc = BigComplex::one(point.bits());
        for (long u : spec.orbit) {
            mpq_class idx2(u * ainv, n);
            idx2.canonicalize();
            SiegelIndex idx(mpq_class(0), idx2);
            acc *= numerics::cx_pow(siegel(idx, point, ctx), spec.exponent);
        }
        out.push_back(acc);
    }
    return out;
}

AlgebraicValue minpoly_over_Q(const Order& ord, const LevelStructure& level,
                              const InvariantSpec& spec, const ClassGroup& cg,
                              const PrecCtx& ctx) {
    const mpq_class tol(1, mpz_class("10000000000"));  // 1e-10
    long digits = std::min(ctx.digits, numerics::kDigitsCap);
    while (true) {
        PrecCtx cur(digits, ctx.guard);
        const long bits = cur.scale_bits();
        auto vals = conjugate_values(ord, level, spec, cg, cur);
        const long h = static_cast<long>(vals.size());

        BigReal sq = BigReal::from_int(-ord.field_disc, bits).sqrt();  // sqrt(|d_K|)
        BigReal absdk = BigReal::from_int(-ord.field_disc, bits);

        // alpha_i = sqrt(d_K) v_i and conj(alpha_i); the full conjugate list
        std::vector<BigComplex> conj_list;
        for (const auto& v : vals) conj_list.emplace_back(-(sq * v.im), sq * v.re);
        for (long i = 0; i < h; ++i) conj_list.push_back(conj_list[i].conj());

        // primitivity: all 2h conjugates pairwise distinct at this precision
        bool collision = false;
        for (size_t i = 0; i < conj_list.size() && !collision; ++i)
            for (size_t j = i + 1; j < conj_list.size() && !collision; ++j) {
                BigComplex d = conj_list[i] - conj_list[j];
                if (d.norm_sq().abs_less_pow10(-digits)) collision = true;
            }
        if (collision) {
            if (digits >= numerics::kDigitsCap)
                throw NotPrimitive("conjugate values collide at maximal precision");
            digits = std::min(2 * digits, numerics::kDigitsCap);
            continue;
        }

        // product of (X^2 + 2 sqrt|dK| Im(v) X + |dK| |v|^2) over classes
        std::vector<BigReal> poly{BigReal::from_long(1, bits)};
        for (const auto& v : vals) {
            BigReal p = (sq * v.im).mul_small(2);
            BigReal q = absdk * v.norm_sq();
            std::vector<BigReal> next(poly.size() + 2, BigReal(mpz_class(0), bits));
            for (size_t k = 0; k < poly.size(); ++k) {
                next[k] += poly[k] * q;
                next[k + 1] += poly[k] * p;
                next[k + 2] += poly[k];
            }
            poly = std::move(next);
        }
        // poly is already constant-first: index k carries X^k

        AlgebraicValue av;
        av.degree = 2 * h;
        av.conjugates = std::move(conj_list);
        av.digits_used = digits;
        av.residual = BigReal(mpz_class(0), bits);
        bool ok = true;
        for (const auto& c : poly) {
            try {
                auto r = numerics::round_to_int(BigComplex::from_real(c), tol);
                av.minpoly.push_back(r.value);
                if (r.residual > av.residual) av.residual = r.residual;
            } catch (const ResidualTooLarge&) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            if (digits >= numerics::kDigitsCap)
                throw PrecisionExhausted("coefficient rounding failed at the digits cap");
            digits = std::min(2 * digits, numerics::kDigitsCap);
            continue;
        }

        // annihilation check on every conjugate
        exact_algebra::IntPoly f(av.minpoly);
        for (const auto& a : av.conjugates) {
            BigReal rel = poly_eval_check(f, a, cur);
            if (!rel.abs_less_pow10(ctx.guard + 40 - digits))
                throw Error("synthesized polynomial fails to annihilate a conjugate");
        }
        return av;
    }
}

BigReal poly_eval_check(const exact_algebra::IntPoly& f, const BigComplex& alpha,
                        const PrecCtx& ctx) {
    const long bits = alpha.bits();
    BigComplex acc = BigComplex::zero(bits);
    for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) {
        acc *= alpha;
        acc += BigComplex::from_real(BigReal::from_int(*it, bits));
    }
    mpz_class maxc = 0;
    for (const auto& c : f.coeffs) maxc = std::max(maxc, mpz_class(abs(c)));
    BigReal scale = BigReal::from_int(maxc, bits);
    BigReal am = alpha.abs();
    BigReal onegr = BigReal::from_long(1, bits);
    if (am > onegr) {
        BigReal pw = onegr;
        for (long i = 0; i < f.degree(); ++i) pw *= am;
        scale *= pw;
    }
    return acc.abs() / scale;
}

}  // namespace formclass::modfuncs
