#include "formclass/arithmetic_apps.hpp"

#include <algorithm>
#include <cmath>

namespace formclass::arithmetic_apps {

using classgroups::ClassGroup;
using classgroups::LevelStructure;
using exact_algebra::IntPoly;
using numerics::BigComplex;
using numerics::BigReal;
using numerics::PrecCtx;
using orders::Order;

namespace {

mpz_class mod_pos(const mpz_class& x, const mpz_class& m) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Tonelli-Shanks square root mod an odd prime; nullopt when a is a non-residue.
std::optional<mpz_class> sqrt_mod_p(const mpz_class& a0, const mpz_class& p) {
    mpz_class a = mod_pos(a0, p);
    if (a == 0) return mpz_class(0);
    if (mpz_legendre(a.get_mpz_t(), p.get_mpz_t()) != 1) return std::nullopt;
    if (mod_pos(p, 4) == 3) {
        mpz_class e = (p + 1) / 4, r;
        mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    }
    mpz_class q = p - 1;
    unsigned long s = 0;
    while (mpz_even_p(q.get_mpz_t())) {
        q >>= 1;
        ++s;
    }
    mpz_class z = 2;
    while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
    mpz_class m(s), c, t, r, e = (q + 1) / 2;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    while (t != 1) {
        mpz_class tt = t;
        unsigned long i = 0;
        while (tt != 1) {
            tt = tt * tt % p;
            ++i;
        }
        mpz_class b = c;
        for (mpz_class j = 0; j < m - i - 1; ++j) b = b * b % p;
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return r;
}

}  // namespace

std::optional<SplitPrimeData> find_split(const mpz_class& D, const mpz_class& p) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), D.get_mpz_t(), p.get_mpz_t());
    if (g != 1) throw PDividesD();
    std::optional<mpz_class> best;
    if (p == 2) {
        for (long c = 0; c < 4; ++c) {
            if (mod_pos(mpz_class(c * c) - D, 8) == 0) {
                best = c;
                break;
            }
        }
    } else {
        auto r = sqrt_mod_p(D, p);
        if (r) {
            for (const mpz_class& cand0 : {*r, mpz_class(p - *r)}) {
                for (int lift = 0; lift < 2; ++lift) {
                    mpz_class s = cand0 + lift * p;
                    if (mod_pos(s - D, 2) != 0) continue;  // s must share D's parity
                    if (mod_pos(s * s - D, 4 * p) != 0) continue;
                    if (!best || s < *best) best = s;
                }
            }
        }
    }
    if (!best) return std::nullopt;
    SplitPrimeData out;
    out.p = p;
    out.s = *best;
    out.split_form = quadforms::Form(p, *best, (*best * *best - D) / (4 * p));
    return out;
}

int kronecker_symbol(const mpz_class& a, const mpz_class& n) {
    if (n == 0) throw Error("kronecker symbol undefined for n = 0");
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

CongruenceReport verify_kronecker(const mpz_class& D, long N, const std::vector<long>& G,
                                  const mpz_class& p, const PrecCtx& ctx) {
    LevelStructure level(N, G);
    Order ord = orders::order_from_disc(D);

    mpz_class g;
    mpz_class dn = D * N;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), dn.get_mpz_t());
    if (g != 1) throw ConditionViolated(1);
    auto split = find_split(D, p);
    if (!split) throw ConditionViolated(2);
    long pmod = static_cast<long>(mod_pos(p, N).get_si());
    if (!level.contains_residue(pmod) && !level.contains_residue(N - pmod))
        throw ConditionViolated(3);

    ClassGroup cg = classgroups::enumerate_classes(ord, level);
    auto spec = modfuncs::invariant_for(level);
    const long h = cg.size();
    int kp = classgroups::class_of(split->split_form, cg);
    std::vector<int> translate(h);
    for (int i = 0; i < h; ++i) translate[i] = classgroups::compose(i, kp, cg);

    // magnitude pass at the requested precision to size the exact pass
    auto coarse = modfuncs::conjugate_values(ord, level, spec, cg, ctx);
    std::vector<double> lg(h);
    for (int i = 0; i < h; ++i) {
        double m = coarse[i].abs().to_double();
        lg[i] = m > 1 ? std::log10(m) : 0.0;
    }
    double pd = mpz_get_d(p.get_mpz_t());
    double total = 0;
    auto log_add = [](double x, double y) {
        double hi = std::max(x, y), lo = std::min(x, y);
        return hi + std::log10(1.0 + std::pow(10.0, lo - hi));
    };
    for (int i = 0; i < h; ++i) {
        double li = lg[i], lb = lg[translate[i]];
        double e1 = log_add(pd * li, lb);
        double e2 = log_add(li, pd * lb);
        total += std::max(e1 + e2, 0.0);
    }
    total = 2 * total + 2.0 * h * 0.602 + 10 + 40;
    long digits = std::max(ctx.digits, static_cast<long>(total) + ctx.guard);

    const mpq_class tol(1, mpz_class("10000000000"));
    digits = std::min(digits, numerics::kDigitsCap);
    while (true) {
        PrecCtx cur(digits, ctx.guard);
        const long bits = cur.scale_bits();
        auto vals = modfuncs::conjugate_values(ord, level, spec, cg, cur);
        if (!mpz_fits_ulong_p(p.get_mpz_t())) throw Error("prime too large for exponentiation");
        unsigned long pe = p.get_ui();

        std::vector<BigComplex> evals;
        evals.reserve(h);
        for (int i = 0; i < h; ++i) {
            const BigComplex& A = vals[i];
            const BigComplex& B = vals[translate[i]];
            evals.push_back((numerics::cx_pow(A, pe) - B) * (A - numerics::cx_pow(B, pe)));
        }

        // product of (X - e)(X - conj e) = X^2 - 2 Re(e) X + |e|^2
        std::vector<BigReal> poly{BigReal::from_long(1, bits)};
        for (const auto& e : evals) {
            BigReal pr = -(e.re.mul_small(2));
            BigReal qr = e.norm_sq();
            std::vector<BigReal> next(poly.size() + 2, BigReal(mpz_class(0), bits));
            for (size_t k = 0; k < poly.size(); ++k) {
                next[k] += poly[k] * qr;
                next[k + 1] += poly[k] * pr;
                next[k + 2] += poly[k];
            }
            poly = std::move(next);
        }
        // constant-first: index k carries X^k

        CongruenceReport rep;
        rep.disc = D;
        rep.level = N;
        rep.subgroup = level.residues;
        rep.p = p;
        rep.s = split->s;
        rep.digits_used = digits;
        rep.max_residual = BigReal(mpz_class(0), bits);
        std::vector<mpz_class> coeffs;
        bool ok = true;
        for (const auto& c : poly) {
            try {
                auto r = numerics::round_to_int(BigComplex::from_real(c), tol);
                coeffs.push_back(r.value);
                if (r.residual > rep.max_residual) rep.max_residual = r.residual;
            } catch (const ResidualTooLarge&) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            if (digits >= numerics::kDigitsCap)
                throw PrecisionExhausted("charpoly rounding failed at the digits cap");
            digits = std::min(2 * digits, numerics::kDigitsCap);
            continue;
        }
        rep.charpoly = IntPoly(coeffs);

        // e in p O_L  <=>  p^k divides the coefficient of X^(2h-k) for all k
        rep.verdict = true;
        mpz_class pk = 1;
        for (long k = 1; k <= 2 * h; ++k) {
            pk *= p;
            if (coeffs[2 * h - k] % pk != 0) {
                rep.verdict = false;
                break;
            }
        }

        rep.value_at_omega = vals[0];
        // omega/p = (s + sqrt(D)) / (2p)
        BigComplex sq = numerics::sqrt_negative(D, cur);
        BigReal den = BigReal::from_int(2 * p, bits);
        BigComplex omega_over_p(BigReal::from_int(split->s, bits) / den, sq.im / den);
        rep.value_at_omega_over_p = modfuncs::invariant_value(spec, omega_over_p, cur);
        return rep;
    }
}

std::optional<std::pair<mpz_class, mpz_class>> brute_force_rep(const mpz_class& p,
                                                               const mpz_class& n, long N,
                                                               const std::vector<long>& G) {
    LevelStructure level(N, G);
    mpz_class ymax;
    mpz_class lim = p / n;
    mpz_sqrt(ymax.get_mpz_t(), lim.get_mpz_t());
    mpz_class k = ymax / N;
    for (; k >= 0; --k) {
        mpz_class y = k * N;
        mpz_class t = p - n * y * y;
        if (t < 0) continue;
        if (mpz_perfect_square_p(t.get_mpz_t()) == 0) continue;
        mpz_class x;
        mpz_sqrt(x.get_mpz_t(), t.get_mpz_t());
        long xm = static_cast<long>(mod_pos(x, N).get_si());
        if (level.contains_residue(xm)) return std::make_pair(x, y);
        if (level.contains_residue((N - xm) % N)) return std::make_pair(mpz_class(-x), y);
    }
    return std::nullopt;
}

bool criterion_rep(const mpz_class& p, const IntPoly& f, const mpz_class& n, long N,
                   const mpz_class* disc_f) {
    mpz_class excl = 2 * n * N * f.leading();
    if (mpz_divisible_p(excl.get_mpz_t(), p.get_mpz_t())) throw ExcludedPrime();
    mpz_class d = disc_f ? *disc_f : exact_algebra::poly_disc(f);
    if (mpz_divisible_p(d.get_mpz_t(), p.get_mpz_t())) throw ExcludedPrime();
    if (kronecker_symbol(-n, p) != 1) return false;
    return exact_algebra::has_root_mod_p(f, p);
}

HarnessReport equivalence_harness(const mpz_class& n, long N, const std::vector<long>& G,
                                  const mpz_class& bound, const PrecCtx& ctx) {
    mpz_class D = -4 * n;
    if (D == -3 || D == -4) throw Error("discriminant -3 or -4 is out of scope");
    if (N < 2) throw Error("harness requires level at least 2");
    LevelStructure level(N, G);
    Order ord = orders::order_from_disc(D);
    ClassGroup cg = classgroups::enumerate_classes(ord, level);
    auto spec = modfuncs::invariant_for(level);
    auto av = modfuncs::minpoly_over_Q(ord, level, spec, cg, ctx);

    HarnessReport rep;
    rep.n = n;
    rep.level = N;
    rep.subgroup = level.residues;
    rep.bound = bound;
    rep.minpoly = IntPoly(av.minpoly);
    rep.minpoly_disc = exact_algebra::poly_disc(rep.minpoly);

    for (mpz_class p = 2; p < bound; ++p) {
        if (!exact_algebra::is_prime(p)) continue;
        mpz_class excl = 2 * n * N;
        if (mpz_divisible_p(excl.get_mpz_t(), p.get_mpz_t()) ||
            mpz_divisible_p(rep.minpoly_disc.get_mpz_t(), p.get_mpz_t())) {
            rep.excluded.push_back(p);
            continue;
        }
        bool via_form = brute_force_rep(p, n, N, G).has_value();
        bool via_poly = criterion_rep(p, rep.minpoly, n, N, &rep.minpoly_disc);
        if (via_form == via_poly)
            ++rep.agree;
        else
            rep.disagreements.push_back(p);
    }
    return rep;
}

}  // namespace formclass::arithmetic_apps
