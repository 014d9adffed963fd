#include "formclass/orders.hpp"

#include <set>

#include "formclass/exact_algebra.hpp"

namespace formclass::orders {

using quadforms::Form;

namespace {

mpz_class mod_pos(const mpz_class& x, const mpz_class& m) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Two-generator Hermite form of a Z-span of (x + y tau) rows: returns
// (g, h, k) with lattice = Z g + Z (h + k tau), g, k > 0, 0 <= h < g.
struct Hnf {
    mpz_class g, h, k;
};

Hnf hnf_rows(const std::vector<std::pair<mpz_class, mpz_class>>& rows) {
    mpz_class g = 0, h = 0, k = 0;
    for (const auto& [x, y] : rows) {
        if (y == 0) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
            continue;
        }
        if (k == 0) {
            k = abs(y);
            h = (y > 0) ? x : mpz_class(-x);
            continue;
        }
        mpz_class d, s, t;
        mpz_gcdext(d.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), k.get_mpz_t(), y.get_mpz_t());
        mpz_class nh = s * h + t * x;
        mpz_class left1 = h - (k / d) * nh;
        mpz_class left2 = x - (y / d) * nh;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), left1.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), left2.get_mpz_t());
        h = nh;
        k = d;
    }
    if (k == 0 || g == 0) throw Error("module has rank < 2");
    g = abs(g);
    h = mod_pos(h, g);
    return {g, h, k};
}

IdealLat ideal_from_hnf(const Hnf& hnf, const mpq_class& scale, const Order& ord) {
    if (hnf.g % hnf.k != 0 || hnf.h % hnf.k != 0)
        throw Error("module is not an ideal of the order");
    mpz_class a = hnf.g / hnf.k;
    mpz_class m = hnf.h / hnf.k;
    mpz_class b = ord.b0 - 2 * m;
    mpq_class s = scale * mpq_class(hnf.k);
    return make_ideal(s, a, b, ord);
}

}  // namespace

numerics::BigComplex Order::tau(const numerics::PrecCtx& ctx) const {
    return quadforms::root(principal_form(), ctx);
}

Order order_from_disc(const mpz_class& D) {
    if (D >= 0) throw BadDiscriminant("discriminant must be negative");
    mpz_class r4 = mod_pos(D, 4);
    if (r4 != 0 && r4 != 1) throw BadDiscriminant("discriminant must be 0 or 1 mod 4");
    auto fac = exact_algebra::factor_int(-D);
    if (!fac.complete) throw BadDiscriminant("failed to factor discriminant");
    mpz_class f = 1;
    for (const auto& [p, e] : fac.factors) {
        for (unsigned long i = 0; i + 1 < e; i += 2) f *= p;
    }
    mpz_class d0 = D / (f * f);
    Order ord;
    ord.disc = D;
    if (mod_pos(d0, 4) == 1) {
        ord.field_disc = d0;
        ord.conductor = f;
    } else {
        ord.field_disc = 4 * d0;
        ord.conductor = f / 2;
        if (ord.conductor * ord.conductor * ord.field_disc != D)
            throw BadDiscriminant("discriminant does not decompose");
    }
    if (r4 == 1) {
        ord.b0 = 1;
        ord.c0 = (1 - D) / 4;
    } else {
        ord.b0 = 0;
        ord.c0 = -D / 4;
    }
    return ord;
}

Form IdealLat::associated_form(const Order& ord) const {
    mpz_class c = (b * b - ord.disc) / (4 * a);
    return {a, b, c};
}

mpz_class element_norm(const AlgInt& v, const Order& ord) {
    return v.x * v.x - ord.b0 * v.x * v.y + ord.c0 * v.y * v.y;
}

IdealLat make_ideal(const mpq_class& scale, const mpz_class& a, const mpz_class& b,
                    const Order& ord) {
    if (scale <= 0) throw Error("ideal scale must be positive");
    if (a <= 0) throw Error("ideal leading invariant must be positive");
    mpz_class bn = mod_pos(b, 2 * a);
    if (bn > a) bn -= 2 * a;
    mpz_class num = bn * bn - ord.disc;
    if (num % (4 * a) != 0) throw Error("b^2 != D (mod 4a)");
    IdealLat x;
    x.scale = scale;
    x.scale.canonicalize();
    x.a = a;
    x.b = bn;
    if (!x.associated_form(ord).is_primitive()) throw Error("lattice is not a proper ideal");
    return x;
}

IdealLat ideal_from_form(const Form& q, const Order& ord) {
    if (quadforms::disc(q) != ord.disc) throw DiscMismatch();
    if (!q.is_primitive()) throw Error("form must be primitive");
    mpq_class s(1, q.a);
    s.canonicalize();
    return make_ideal(s, q.a, q.b, ord);
}

IdealLat principal_ideal(const AlgInt& v, const Order& ord) {
    if (v.x == 0 && v.y == 0) throw Error("zero element generates no ideal");
    // rows: v = x + y tau, v tau = -c0 y + (x - b0 y) tau
    std::vector<std::pair<mpz_class, mpz_class>> rows;
    rows.emplace_back(v.x, v.y);
    rows.emplace_back(-ord.c0 * v.y, v.x - ord.b0 * v.y);
    return ideal_from_hnf(hnf_rows(rows), mpq_class(1), ord);
}

IdealLat ideal_one(const Order& ord) { return make_ideal(mpq_class(1), mpz_class(1), ord.b0, ord); }

IdealLat ideal_mul(const IdealLat& x, const IdealLat& y, const Order& ord) {
    // basis elements a_i and (m_i + tau) with m_i = (b0 - b_i)/2
    mpz_class m1 = (ord.b0 - x.b) / 2;
    mpz_class m2 = (ord.b0 - y.b) / 2;
    std::vector<std::pair<mpz_class, mpz_class>> rows;
    rows.emplace_back(x.a * y.a, 0);
    rows.emplace_back(x.a * m2, x.a);
    rows.emplace_back(y.a * m1, y.a);
    rows.emplace_back(m1 * m2 - ord.c0, m1 + m2 - ord.b0);
    return ideal_from_hnf(hnf_rows(rows), x.scale * y.scale, ord);
}

IdealLat ideal_conj(const IdealLat& x, const Order& ord) {
    return make_ideal(x.scale, x.a, -x.b, ord);
}

IdealLat ideal_inv(const IdealLat& x, const Order& ord) {
    mpq_class s = mpq_class(1) / (x.scale * mpq_class(x.a));
    return make_ideal(s, x.a, -x.b, ord);
}

mpq_class ideal_norm(const IdealLat& x) { return x.scale * x.scale * mpq_class(x.a); }

bool is_prime_to(const IdealLat& x, const mpz_class& m) {
    mpz_class g;
    mpz_class p = x.scale.get_num(), q = x.scale.get_den();
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), m.get_mpz_t());
    if (g != 1) return false;
    mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), m.get_mpz_t());
    if (g != 1) return false;
    mpz_gcd(g.get_mpz_t(), x.a.get_mpz_t(), m.get_mpz_t());
    return g == 1;
}

std::optional<PrincipalGen> principal_gen(const IdealLat& x, const Order& ord) {
    // The primitive part Z a + Z(m + tau) is generated by nu with N(nu) = a,
    // i.e. the associated form represents 1: (2au + bv)^2 + |D| v^2 = 4a.
    const mpz_class& a = x.a;
    const mpz_class& b = x.b;
    mpz_class m = (ord.b0 - b) / 2;
    mpz_class absD = -ord.disc;
    mpz_class vmax;
    mpz_class lim = 4 * a / absD;
    mpz_sqrt(vmax.get_mpz_t(), lim.get_mpz_t());
    for (mpz_class v = -vmax; v <= vmax; ++v) {
        mpz_class t2 = 4 * a - absD * v * v;
        if (t2 < 0) continue;
        mpz_class t;
        mpz_sqrt(t.get_mpz_t(), t2.get_mpz_t());
        if (t * t != t2) continue;
        for (int sign = 0; sign < (t == 0 ? 1 : 2); ++sign) {
            mpz_class ts = sign == 0 ? t : mpz_class(-t);
            mpz_class num = ts - b * v;
            if (num % (2 * a) != 0) continue;
            mpz_class u = num / (2 * a);
            // with Q(u, v) = 1 the element u a - v (m + tau) has norm a
            AlgInt nu{u * a - v * m, -v};
            if (element_norm(nu, ord) != a) throw Error("principal generator norm mismatch");
            return PrincipalGen{nu, x.scale};
        }
    }
    return std::nullopt;
}

std::optional<mpz_class> congruence_class_mod_NO(const AlgInt& v, const mpz_class& N,
                                                 const Order& ord) {
    if (N < 1) throw Error("modulus must be positive");
    if (mod_pos(v.y, N) != 0) return std::nullopt;
    return mod_pos(v.x, N);
}

std::vector<AlgInt> units(const Order& ord) {
    std::vector<AlgInt> out = {{1, 0}, {-1, 0}};
    if (ord.disc == -4) {
        out.push_back({0, 1});
        out.push_back({0, -1});
    } else if (ord.disc == -3) {
        out.push_back({0, 1});
        out.push_back({0, -1});
        out.push_back({1, 1});
        out.push_back({-1, -1});
    }
    return out;
}

bool in_PG(const IdealLat& x, const mpz_class& N, const std::vector<long>& G, const Order& ord) {
    // P_G(O, N) sits inside the prime-to-N ideal group, so anything outside
    // it is simply not a member.
    if (!is_prime_to(x, N)) return false;
    if (N == 1) {
        // (O/O)^x is trivial: membership reduces to principality.
        IdealLat prim = make_ideal(mpq_class(1), x.a, x.b, ord);
        return principal_gen(prim, ord).has_value();
    }
    IdealLat prim = make_ideal(mpq_class(1), x.a, x.b, ord);
    auto gen = principal_gen(prim, ord);
    if (!gen) return false;
    // x = (p/q) * prim = (p nu / q) O. Test [p nu][q]^-1 against the
    // subgroup of (O/NO)^x generated by rational G-residues and units.
    mpz_class p = x.scale.get_num(), q = x.scale.get_den();
    auto key = [&](const mpz_class& cx, const mpz_class& cy) {
        return std::make_pair(mod_pos(cx, N), mod_pos(cy, N));
    };
    auto mul = [&](const std::pair<mpz_class, mpz_class>& u,
                   const std::pair<mpz_class, mpz_class>& v) {
        mpz_class rx = u.first * v.first - ord.c0 * u.second * v.second;
        mpz_class ry = u.first * v.second + u.second * v.first - ord.b0 * u.second * v.second;
        return key(rx, ry);
    };
    std::set<std::pair<mpz_class, mpz_class>> subgroup;
    std::vector<std::pair<mpz_class, mpz_class>> frontier;
    auto insert = [&](const std::pair<mpz_class, mpz_class>& e) {
        if (subgroup.insert(e).second) frontier.push_back(e);
    };
    std::vector<std::pair<mpz_class, mpz_class>> gens;
    for (long t : G) gens.push_back(key(mpz_class(t), mpz_class(0)));
    for (const auto& u : units(ord)) gens.push_back(key(u.x, u.y));
    insert(key(mpz_class(1), mpz_class(0)));
    while (!frontier.empty()) {
        auto e = frontier.back();
        frontier.pop_back();
        for (const auto& g : gens) insert(mul(e, g));
    }
    // target = p * nu * q^-1
    mpz_class qinv;
    if (mpz_invert(qinv.get_mpz_t(), q.get_mpz_t(), N.get_mpz_t()) == 0)
        throw NotPrimeToN();  // unreachable: the primality screen passed
    auto target = key(p * qinv * gen->element.x, p * qinv * gen->element.y);
    return subgroup.count(target) > 0;
}

std::string ideal_to_json(const IdealLat& x) {
    return "{\"a\": \"" + x.a.get_str() + "\", \"b\": \"" + x.b.get_str() + "\", \"scale\": \"" +
           x.scale.get_num().get_str() + "/" + x.scale.get_den().get_str() + "\"}";
}

}  // namespace formclass::orders
