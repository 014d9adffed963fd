#include "formclass/quadforms.hpp"

#include <algorithm>

namespace formclass::quadforms {

using numerics::BigComplex;
using numerics::BigReal;
using numerics::PrecCtx;

bool Form::operator<(const Form& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
}

bool Form::is_primitive() const {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g == 1;
}

bool Form::is_positive_definite() const { return a > 0 && disc(*this) < 0; }

UniMat::UniMat(mpz_class a_, mpz_class b_, mpz_class c_, mpz_class d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
    if (a * d - b * c != 1) throw Error("matrix determinant is not 1");
}

UniMat::UniMat(long a_, long b_, long c_, long d_) : UniMat(mpz_class(a_), mpz_class(b_), mpz_class(c_), mpz_class(d_)) {}

UniMat operator*(const UniMat& x, const UniMat& y) {
    UniMat r;
    r.a = x.a * y.a + x.b * y.c;
    r.b = x.a * y.b + x.b * y.d;
    r.c = x.c * y.a + x.d * y.c;
    r.d = x.c * y.b + x.d * y.d;
    return r;
}

mpz_class disc(const Form& q) { return q.b * q.b - 4 * q.a * q.c; }

bool in_level_set(const Form& q, const mpz_class& D, const mpz_class& N) {
    if (q.a <= 0) return false;
    if (disc(q) != D) return false;
    if (!q.is_primitive()) return false;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), q.a.get_mpz_t(), N.get_mpz_t());
    return g == 1;
}

Form apply(const Form& q, const UniMat& g) {
    Form r;
    r.a = q.a * g.a * g.a + q.b * g.a * g.c + q.c * g.c * g.c;
    r.b = 2 * q.a * g.a * g.b + q.b * (g.a * g.d + g.b * g.c) + 2 * q.c * g.c * g.d;
    r.c = q.a * g.b * g.b + q.b * g.b * g.d + q.c * g.d * g.d;
    return r;
}

ReduceResult reduce(const Form& q) {
    if (!q.is_positive_definite()) throw Error("reduce requires a positive definite form");
    Form f = q;
    UniMat g;
    const UniMat flip(0, -1, 1, 0);
    while (true) {
        // translate b into (-a, a]
        mpz_class m = f.a - f.b;
        mpz_fdiv_q(m.get_mpz_t(), m.get_mpz_t(), mpz_class(2 * f.a).get_mpz_t());
        if (m != 0) {
            UniMat t(1, m, 0, 1);
            f = apply(f, t);
            g = g * t;
        }
        if (f.a > f.c) {
            f = apply(f, flip);
            g = g * flip;
            continue;
        }
        break;
    }
    if (f.a == f.c && f.b < 0) {
        f = apply(f, flip);
        g = g * flip;
    }
    return {f, g};
}

std::vector<Form> reduced_reps(const mpz_class& D) {
    if (D >= 0) throw BadDiscriminant("discriminant must be negative");
    mpz_class r = D % 4;
    if (r < 0) r += 4;
    if (r != 0 && r != 1) throw BadDiscriminant("discriminant must be 0 or 1 mod 4");
    std::vector<Form> out;
    // |b| <= a <= sqrt(|D| / 3), b = D (mod 2)
    mpz_class bound;
    mpz_class d3 = (-D) / 3;
    mpz_sqrt(bound.get_mpz_t(), d3.get_mpz_t());
    for (mpz_class a = 1; a <= bound; ++a) {
        for (mpz_class b = -a + 1; b <= a; ++b) {
            if (((b - D) % 2) != 0) continue;
            mpz_class num = b * b - D;
            if (num % (4 * a) != 0) continue;
            mpz_class c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            Form f(a, b, c);
            if (!f.is_primitive()) continue;
            out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<UniMat> automorphs(const Form& q) {
    Form r = reduce(q).form;
    if (!(r == q)) throw Error("automorphs requires a reduced form");
    mpz_class D = disc(q);
    std::vector<UniMat> out;
    out.emplace_back(1, 0, 0, 1);
    out.emplace_back(-1, 0, 0, -1);
    if (D == -4) {
        out.emplace_back(0, -1, 1, 0);
        out.emplace_back(0, 1, -1, 0);
    } else if (D == -3) {
        out.emplace_back(0, -1, 1, 1);
        out.emplace_back(0, 1, -1, -1);
        out.emplace_back(-1, -1, 1, 0);
        out.emplace_back(1, 1, -1, 0);
    }
    for (const auto& g : out)
        if (!(apply(q, g) == q)) throw Error("automorph candidate does not stabilize");
    return out;
}

BigComplex root(const Form& q, const PrecCtx& ctx) {
    if (!q.is_positive_definite()) throw Error("root requires a positive definite form");
    const long bits = ctx.scale_bits();
    BigComplex sq = numerics::sqrt_negative(disc(q), ctx);
    BigReal two_a = BigReal::from_int(2 * q.a, bits);
    return {BigReal::from_int(-q.b, bits) / two_a, sq.im / two_a};
}

BigComplex moebius(const UniMat& g, const BigComplex& tau, const PrecCtx& ctx) {
    const long bits = tau.bits();
    auto cx_int = [&](const mpz_class& n) {
        return BigComplex::from_real(BigReal::from_int(n, bits));
    };
    BigComplex num = cx_int(g.a) * tau + cx_int(g.b);
    BigComplex den = cx_int(g.c) * tau + cx_int(g.d);
    return numerics::cx_div(num, den, ctx);
}

}  // namespace formclass::quadforms
