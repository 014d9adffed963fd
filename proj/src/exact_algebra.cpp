#include "formclass/exact_algebra.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <map>

namespace formclass::exact_algebra {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod_u64(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

u64 invmod_u64(u64 a, u64 p) { return powmod_u64(a % p, p - 2, p); }

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// Dense polynomial over Z/pZ, constant first, trimmed.
struct PolyP {
    std::vector<u64> c;
    long deg() const { return static_cast<long>(c.size()) - 1; }
    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
};

PolyP reduce_mod(const IntPoly& f, u64 p) {
    PolyP r;
    r.c.reserve(f.coeffs.size());
    for (const auto& z : f.coeffs) {
        mpz_class m = z % static_cast<unsigned long>(p);
        if (m < 0) m += static_cast<unsigned long>(p);
        r.c.push_back(m.get_ui());
    }
    r.trim();
    return r;
}

// Remainder of a by monic-scaled division (standard long division mod p).
PolyP poly_rem(PolyP a, const PolyP& b, u64 p) {
    const long db = b.deg();
    u64 lead_inv = invmod_u64(b.c.back(), p);
    while (a.deg() >= db && !a.c.empty()) {
        u64 q = mulmod(a.c.back(), lead_inv, p);
        long shift = a.deg() - db;
        for (long i = 0; i <= db; ++i) {
            u64 sub = mulmod(q, b.c[i], p);
            u64& tgt = a.c[i + shift];
            tgt = (tgt >= sub) ? tgt - sub : tgt + p - sub;
        }
        a.trim();
    }
    return a;
}

PolyP poly_mulmod(const PolyP& a, const PolyP& b, const PolyP& mod, u64 p) {
    PolyP r;
    if (a.c.empty() || b.c.empty()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) {
            r.c[i + j] = (r.c[i + j] + u128(a.c[i]) * b.c[j]) % p;
        }
    }
    r.trim();
    return poly_rem(std::move(r), mod, p);
}

PolyP poly_gcd(PolyP a, PolyP b, u64 p) {
    while (!b.c.empty()) {
        PolyP r = poly_rem(std::move(a), b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// Resultant of two nonzero polynomials over Z/pZ via the Euclidean scheme.
u64 resultant_mod(PolyP a, PolyP b, u64 p) {
    u64 res = 1;
    while (true) {
        if (b.c.empty()) return a.deg() == 0 ? res : 0;
        if (b.deg() == 0) {
            res = mulmod(res, powmod_u64(b.c.back(), a.deg(), p), p);
            return res;
        }
        PolyP r = poly_rem(a, b, p);
        long da = a.deg(), db = b.deg(), dr = r.deg();
        // Res(a,b) = (-1)^(da db) lc(b)^(da - dr) Res(b, r)
        if ((da & 1) && (db & 1)) res = p - res;
        res = mulmod(res, powmod_u64(b.c.back(), da - (dr < 0 ? 0 : dr), p), p);
        if (r.c.empty()) {
            // Res(b, 0) = 0 unless deg b == 0, handled next loop
            a = std::move(b);
            b = std::move(r);
            continue;
        }
        a = std::move(b);
        b = std::move(r);
    }
}

mpz_class hadamard_bound(const IntPoly& f, const IntPoly& g) {
    // |Res| <= ||f||_2^deg(g) * ||g||_2^deg(f); work with squared norms.
    mpz_class nf = 0, ng = 0;
    for (const auto& z : f.coeffs) nf += z * z;
    for (const auto& z : g.coeffs) ng += z * z;
    mpz_class b2;
    mpz_pow_ui(b2.get_mpz_t(), nf.get_mpz_t(), g.degree());
    mpz_class t;
    mpz_pow_ui(t.get_mpz_t(), ng.get_mpz_t(), f.degree());
    b2 *= t;
    mpz_class b;
    mpz_sqrt(b.get_mpz_t(), b2.get_mpz_t());
    return b + 1;
}

std::chrono::steady_clock::time_point now() { return std::chrono::steady_clock::now(); }

}  // namespace

IntPoly IntPoly::derivative() const {
    std::vector<mpz_class> d;
    for (size_t i = 1; i < coeffs.size(); ++i) d.push_back(coeffs[i] * static_cast<unsigned long>(i));
    return IntPoly(std::move(d));
}

mpz_class IntPoly::eval(const mpz_class& x) const {
    mpz_class acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

mpz_class resultant(const IntPoly& f, const IntPoly& g) {
    if (f.is_zero() || g.is_zero()) return 0;
    if (f.degree() == 0) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), f.coeffs[0].get_mpz_t(), g.degree());
        return r;
    }
    if (g.degree() == 0) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), g.coeffs[0].get_mpz_t(), f.degree());
        return r;
    }
    mpz_class bound = 2 * hadamard_bound(f, g) + 1;
    mpz_class modulus = 1, acc = 0;
    u64 p = (u64(1) << 62) - 57;  // scan downward from here for primes
    while (modulus <= bound) {
        while (!is_prime_u64(p) || f.leading() % static_cast<unsigned long>(p) == 0 ||
               g.leading() % static_cast<unsigned long>(p) == 0)
            --p;
        u64 rp = resultant_mod(reduce_mod(f, p), reduce_mod(g, p), p);
        // CRT: acc <- acc + modulus * ((rp - acc) / modulus mod p)
        mpz_class pz(static_cast<unsigned long>(p));
        mpz_class minv;
        mpz_invert(minv.get_mpz_t(), modulus.get_mpz_t(), pz.get_mpz_t());
        mpz_class delta = (mpz_class(static_cast<unsigned long>(rp)) - acc) * minv;
        mpz_mod(delta.get_mpz_t(), delta.get_mpz_t(), pz.get_mpz_t());
        acc += modulus * delta;
        modulus *= pz;
        --p;
    }
    // symmetric lift
    if (2 * acc > modulus) acc -= modulus;
    return acc;
}

mpz_class resultant_subresultant(const IntPoly& f, const IntPoly& g) {
    if (f.is_zero() || g.is_zero()) return 0;
    // classical subresultant PRS
    IntPoly a = f, b = g;
    bool swapped = false;
    if (a.degree() < b.degree()) {
        std::swap(a, b);
        swapped = (a.degree() % 2 == 1) && (b.degree() % 2 == 1);
    }
    if (b.degree() == 0) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), b.coeffs[0].get_mpz_t(), a.degree());
        return swapped ? mpz_class(-r) : r;
    }
    mpz_class gg = 1, h = 1;
    int sign = swapped ? -1 : 1;
    while (true) {
        long delta = a.degree() - b.degree();
        if ((a.degree() % 2 == 1) && (b.degree() % 2 == 1)) sign = -sign;
        // pseudo-remainder of a by b
        IntPoly r = a;
        mpz_class lb = b.leading();
        mpz_class mult;
        mpz_pow_ui(mult.get_mpz_t(), lb.get_mpz_t(), delta + 1);
        for (auto& cz : r.coeffs) cz *= mult;
        // long division
        while (!r.is_zero() && r.degree() >= b.degree()) {
            mpz_class q = r.leading() / lb;
            long shift = r.degree() - b.degree();
            for (long i = 0; i <= b.degree(); ++i) r.coeffs[i + shift] -= q * b.coeffs[i];
            r.normalize();
        }
        if (r.is_zero()) return 0;  // non-trivial common factor (deg b > 0 here)
        // divide remainder by g * h^delta
        mpz_class hd;
        mpz_pow_ui(hd.get_mpz_t(), h.get_mpz_t(), delta);
        mpz_class denom = gg * hd;
        for (auto& cz : r.coeffs) {
            mpz_class q, rr;
            mpz_tdiv_qr(q.get_mpz_t(), rr.get_mpz_t(), cz.get_mpz_t(), denom.get_mpz_t());
            if (rr != 0) throw Error("subresultant exact division failed");
            cz = q;
        }
        a = std::move(b);
        b = std::move(r);
        if (b.degree() == 0) {
            // h^(1-delta') lc(b)^delta' with delta' = deg a
            long da = a.degree();
            mpz_class num;
            mpz_pow_ui(num.get_mpz_t(), b.coeffs[0].get_mpz_t(), da);
            mpz_class hpow;
            if (da >= 1) {
                mpz_pow_ui(hpow.get_mpz_t(), h.get_mpz_t(), da - 1);
                mpz_class q, rr;
                mpz_tdiv_qr(q.get_mpz_t(), rr.get_mpz_t(), num.get_mpz_t(), hpow.get_mpz_t());
                if (rr != 0) throw Error("subresultant exact division failed");
                num = q;
            }
            return sign < 0 ? mpz_class(-num) : num;
        }
        gg = a.leading();
        mpz_class gd;
        mpz_pow_ui(gd.get_mpz_t(), gg.get_mpz_t(), delta);
        mpz_class hd1;
        if (delta >= 1) {
            mpz_pow_ui(hd1.get_mpz_t(), h.get_mpz_t(), delta - 1);
            mpz_class q, rr;
            mpz_tdiv_qr(q.get_mpz_t(), rr.get_mpz_t(), gd.get_mpz_t(), hd1.get_mpz_t());
            if (rr != 0) throw Error("subresultant exact division failed");
            h = q;
        }
    }
}

mpz_class poly_disc(const IntPoly& f) {
    if (f.degree() < 2) throw Error("poly_disc requires degree >= 2");
    mpz_class res = resultant(f, f.derivative());
    long d = f.degree();
    mpz_class q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), res.get_mpz_t(), f.leading().get_mpz_t());
    if (r != 0) throw Error("discriminant division is not exact");
    if (((d * (d - 1)) / 2) % 2 == 1) q = -q;
    return q;
}

bool is_prime(const mpz_class& n) {
    if (n <= 1) throw Error("primality test requires n > 1");
    static const unsigned long small_bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    for (unsigned long b : small_bases) {
        if (n == b) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), b)) return false;
    }
    mpz_class d = n - 1;
    unsigned long s = 0;
    while (mpz_even_p(d.get_mpz_t())) {
        d >>= 1;
        ++s;
    }
    auto witness = [&](unsigned long a) {
        mpz_class x, base(a);
        mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == n - 1) return false;
        for (unsigned long r = 1; r < s; ++r) {
            x = x * x % n;
            if (x == n - 1) return false;
        }
        return true;  // a witnesses compositeness
    };
    // The 13 bases above decide primality below 3.317e24; above that keep
    // looping through the first 64 prime bases.
    static const mpz_class kDetBound("3317044064679887385961981");
    std::vector<unsigned long> bases(small_bases, small_bases + 13);
    if (n >= kDetBound) {
        for (unsigned long b = 43; bases.size() < 64; ++b) {
            if (is_prime_u64(b)) bases.push_back(b);
        }
    }
    for (unsigned long a : bases) {
        if (witness(a)) return false;
    }
    return true;
}

namespace {

u64 brent_rho_u64(u64 n) {
    // Brent's cycle-finding variant with a fixed parameter schedule.
    for (u64 c = 1;; ++c) {
        u64 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
        const u64 m = 128;
        while (g == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = (mulmod(y, y, n) + c) % n;
            for (u64 k = 0; k < r && g == 1; k += m) {
                ys = y;
                u64 lim = std::min(m, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = (mulmod(y, y, n) + c) % n;
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (mulmod(ys, ys, n) + c) % n;
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            }
        }
        if (g != n) return g;
    }
}

mpz_class brent_rho_mpz(const mpz_class& n, const std::chrono::steady_clock::time_point& deadline) {
    for (unsigned long c = 1;; ++c) {
        mpz_class y = 2, q = 1, g = 1, x, ys;
        unsigned long r = 1;
        const unsigned long m = 128;
        while (g == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
            for (unsigned long k = 0; k < r && g == 1; k += m) {
                ys = y;
                unsigned long lim = std::min(m, r - k);
                for (unsigned long i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                if (now() > deadline) return 0;
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                mpz_class diff = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (g != n) return g;
        if (now() > deadline) return 0;
    }
}

// Splits n (not prime, > 1) into factors pushed onto the work stack; returns
// false when the deadline passed.
bool split_one(const mpz_class& n, std::vector<mpz_class>& stack,
               const std::chrono::steady_clock::time_point& deadline) {
    // perfect-power reduction first
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned long k = 2; k <= mpz_sizeinbase(n.get_mpz_t(), 2); ++k) {
            mpz_class root;
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
                for (unsigned long i = 0; i < k; ++i) stack.push_back(root);
                return true;
            }
        }
    }
    mpz_class d;
    if (mpz_fits_ulong_p(n.get_mpz_t())) {
        d = mpz_class(static_cast<unsigned long>(brent_rho_u64(n.get_ui())));
    } else {
        d = brent_rho_mpz(n, deadline);
        if (d == 0) return false;
    }
    stack.push_back(d);
    stack.push_back(n / d);
    return true;
}

}  // namespace

Factorization factor_int(const mpz_class& n, double budget_seconds) {
    if (n == 0) throw Error("factor_int requires nonzero input");
    auto deadline = now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(budget_seconds));
    mpz_class m = abs(n);
    std::map<mpz_class, unsigned long> found;
    auto add = [&](const mpz_class& p, unsigned long e) { found[p] += e; };

    // trial division by 2, 3 and a 6k+-1 wheel up to 10^6
    for (unsigned long p : {2ul, 3ul}) {
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            add(p, 1);
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        }
    }
    unsigned long since_check = 0;
    for (unsigned long p = 5; p <= 1000000; p += (p % 6 == 5) ? 2 : 4) {
        if (m == 1) break;
        if (++since_check == 4096) {
            since_check = 0;
            if (now() > deadline) break;
        }
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            add(p, 1);
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        }
    }

    bool complete = true;
    std::vector<mpz_class> stack;
    if (m > 1) stack.push_back(m);
    while (!stack.empty()) {
        mpz_class cur = stack.back();
        stack.pop_back();
        if (cur == 1) continue;
        if (is_prime(cur)) {
            add(cur, 1);
            continue;
        }
        if (now() > deadline || !split_one(cur, stack, deadline)) {
            add(cur, 1);  // unfactored cofactor, flagged below
            complete = false;
        }
    }

    Factorization out;
    out.complete = complete;
    for (auto& [p, e] : found) out.factors.emplace_back(p, e);
    return out;
}

bool has_root_mod_p(const IntPoly& f, const mpz_class& p) {
    if (f.is_zero()) throw Error("zero polynomial");
    if (!mpz_fits_ulong_p(p.get_mpz_t())) throw Error("modulus too large");
    u64 pp = p.get_ui();
    if (f.leading() % static_cast<unsigned long>(pp) == 0) throw LeadingCoeffVanishes();
    PolyP fp = reduce_mod(f, pp);
    if (fp.deg() < 1) return false;
    // x^p mod f by square-and-multiply
    PolyP x{{0, 1}};
    PolyP acc{{1}};
    PolyP base = poly_rem(x, fp, pp);
    u64 e = pp;
    while (e) {
        if (e & 1) acc = poly_mulmod(acc, base, fp, pp);
        base = poly_mulmod(base, base, fp, pp);
        e >>= 1;
    }
    // x^p - x
    PolyP diff = acc;
    if (diff.c.size() < 2) diff.c.resize(2, 0);
    diff.c[1] = (diff.c[1] >= 1) ? diff.c[1] - 1 : pp - 1;
    diff.trim();
    PolyP g = poly_gcd(fp, diff, pp);
    return g.deg() >= 1;
}

}  // namespace formclass::exact_algebra
