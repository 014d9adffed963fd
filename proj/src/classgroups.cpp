#include "formclass/classgroups.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace formclass::classgroups {

using orders::IdealLat;
using orders::Order;
using quadforms::Form;
using quadforms::UniMat;

namespace {

long mod_pos_l(long x, long n) {
    long r = x % n;
    return r < 0 ? r + n : r;
}

long mod_pos_z(const mpz_class& x, long n) {
    mpz_class r;
    mpz_class nn(n);
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), nn.get_mpz_t());
    return r.get_si();
}

// 2x2 matrix over Z/N, entries in [0, N).
struct MatN {
    long a, b, c, d;
};

long pack(const MatN& m, long n) { return ((m.a * n + m.b) * n + m.c) * n + m.d; }

MatN mul(const MatN& x, const MatN& y, long n) {
    return {(x.a * y.a + x.b * y.c) % n, (x.a * y.b + x.b * y.d) % n,
            (x.c * y.a + x.d * y.c) % n, (x.c * y.b + x.d * y.d) % n};
}

MatN reduce_mat(const UniMat& g, long n) {
    return {mod_pos_z(g.a, n), mod_pos_z(g.b, n), mod_pos_z(g.c, n), mod_pos_z(g.d, n)};
}

long inv_mod(long a, long n) {
    mpz_class r;
    mpz_class az(a), nz(n);
    if (mpz_invert(r.get_mpz_t(), az.get_mpz_t(), nz.get_mpz_t()) == 0)
        throw Error("residue not invertible");
    return r.get_si();
}

std::vector<MatN> sl2_mod_n(long n) {
    std::vector<MatN> out;
    for (long a = 0; a < n; ++a)
        for (long b = 0; b < n; ++b)
            for (long c = 0; c < n; ++c)
                for (long d = 0; d < n; ++d)
                    if (mod_pos_l(a * d - b * c, n) == 1 % n) out.push_back({a, b, c, d});
    return out;
}

}  // namespace

LevelStructure::LevelStructure(long n, std::vector<long> g) : modulus(n) {
    if (n < 1) throw Error("level must be positive");
    std::set<long> rs;
    for (long t : g) rs.insert(mod_pos_l(t, n));
    if (n == 1) {
        residues = {0};
        return;
    }
    for (long t : rs)
        if (std::gcd(t, n) != 1) throw Error("subgroup residue not a unit mod N");
    if (!rs.count(1)) throw Error("subgroup must contain 1");
    for (long x : rs)
        for (long y : rs)
            if (!rs.count((x * y) % n)) throw Error("residues not closed under multiplication");
    for (long x : rs)
        if (!rs.count(inv_mod(x, n))) throw Error("residues not closed under inverse");
    residues.assign(rs.begin(), rs.end());
}

LevelStructure LevelStructure::trivial(long n) { return LevelStructure(n, {1}); }

LevelStructure LevelStructure::full(long n) {
    std::vector<long> g;
    for (long t = 1; t <= n; ++t)
        if (std::gcd(t % n, n) == 1 || n == 1) g.push_back(t % n);
    return LevelStructure(n, g);
}

bool LevelStructure::contains_residue(long t) const {
    return std::binary_search(residues.begin(), residues.end(), mod_pos_l(t, modulus));
}

bool LevelStructure::is_subset_of(const LevelStructure& other) const {
    if (modulus != other.modulus) return false;
    return std::includes(other.residues.begin(), other.residues.end(), residues.begin(),
                         residues.end());
}

bool gamma_g_contains(const UniMat& g, const LevelStructure& level) {
    long n = level.modulus;
    if (n == 1) return true;
    if (mod_pos_z(g.c, n) != 0) return false;
    return level.contains_residue(mod_pos_z(g.a, n));
}

UniMat lift_sl2_zn(long a, long b, long c, long d, long n) {
    a = mod_pos_l(a, n);
    b = mod_pos_l(b, n);
    c = mod_pos_l(c, n);
    d = mod_pos_l(d, n);
    if (mod_pos_l(a * d - b * c, n) != 1 % n) throw Error("matrix is not in SL2(Z/N)");
    if (n == 1) return UniMat::identity();
    // find (c', d') = (c, d) mod n with gcd(c', d') = 1
    long cp = (c == 0) ? n : c;
    long dp = d;
    while (std::gcd(cp, dp) != 1) dp += n;
    // complete to SL2(Z): x dp - y cp = 1
    mpz_class g, x, y;
    mpz_class cz(cp), dz(dp);
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), dz.get_mpz_t(), cz.get_mpz_t());
    y = -y;
    // top row correction: target = [[1, m],[0,1]] * [[x, y],[cp, dp]]
    long m = mod_pos_z(mpz_class(b) * x - mpz_class(a) * y, n);
    return UniMat(x + m * cz, y + m * dz, cz, dz);
}

ClassGroup enumerate_classes(const Order& ord, const LevelStructure& level) {
    const long n = level.modulus;
    if (n > 40) throw Error("level too large for dense enumeration");
    ClassGroup cg;
    cg.order = ord;
    cg.level = level;

    const Form q0 = ord.principal_form();
    if (n == 1) {
        // plain SL2(Z) classes
        auto reps = quadforms::reduced_reps(ord.disc);
        auto r0 = quadforms::reduce(q0).form;
        cg.reps.push_back(q0);
        for (const auto& f : reps)
            if (!(f == r0)) cg.reps.push_back(f);
        return cg;
    }

    auto sl2 = sl2_mod_n(n);
    std::vector<int> pos(n * n * n * n, -1);
    for (size_t i = 0; i < sl2.size(); ++i) pos[pack(sl2[i], n)] = static_cast<int>(i);

    std::vector<MatN> gamma_g;
    for (const auto& m : sl2)
        if (m.c == 0 && level.contains_residue(m.a)) gamma_g.push_back(m);

    auto sl2_reps = quadforms::reduced_reps(ord.disc);

    struct OrbitRep {
        Form form;
        bool is_principal;
    };
    std::vector<OrbitRep> found;

    auto r0pair = quadforms::reduce(q0);
    const Form& r0 = r0pair.form;
    // q0 = r0 ^ (w0^-1): its orbit in r0's coset space is the one through w0^-1
    UniMat w0inv = r0pair.transform.inverse();
    MatN w0inv_n = reduce_mat(w0inv, n);

    for (const auto& red : sl2_reps) {
        auto auts = quadforms::automorphs(red);
        std::vector<MatN> aut_n;
        for (const auto& g : auts) aut_n.push_back(reduce_mat(g, n));
        // Q mod n for admissibility: a(Q^g) = Q(g.a, g.c) mod n
        long qa = mod_pos_z(red.a, n), qb = mod_pos_z(red.b, n), qc = mod_pos_z(red.c, n);
        auto first_coeff = [&](const MatN& m) {
            return mod_pos_l(qa * m.a * m.a + qb * m.a * m.c + qc * m.c * m.c, n);
        };
        const bool principal_class = red == r0;

        std::vector<char> seen(sl2.size(), 0);
        for (size_t seed = 0; seed < sl2.size(); ++seed) {
            if (seen[seed]) continue;
            // BFS the double coset aut(Q) * g * Gamma_G
            std::vector<int> orbit;
            std::vector<int> frontier{static_cast<int>(seed)};
            seen[seed] = 1;
            while (!frontier.empty()) {
                int cur = frontier.back();
                frontier.pop_back();
                orbit.push_back(cur);
                const MatN& mc = sl2[cur];
                for (const auto& a : aut_n) {
                    int nx = pos[pack(mul(a, mc, n), n)];
                    if (!seen[nx]) {
                        seen[nx] = 1;
                        frontier.push_back(nx);
                    }
                }
                for (const auto& g : gamma_g) {
                    int nx = pos[pack(mul(mc, g, n), n)];
                    if (!seen[nx]) {
                        seen[nx] = 1;
                        frontier.push_back(nx);
                    }
                }
            }
            // admissible members give forms with gcd(a, N) = 1
            bool has_q0 = false;
            std::optional<Form> best;
            for (int idx : orbit) {
                const MatN& m = sl2[idx];
                if (std::gcd(first_coeff(m), n) != 1) continue;
                if (principal_class && m.a == w0inv_n.a && m.b == w0inv_n.b &&
                    m.c == w0inv_n.c && m.d == w0inv_n.d)
                    has_q0 = true;
                UniMat lift = lift_sl2_zn(m.a, m.b, m.c, m.d, n);
                Form cand = quadforms::apply(red, lift);
                if (!best) {
                    best = cand;
                    continue;
                }
                auto keyless = [](const Form& f, const Form& g) {
                    if (f.a != g.a) return f.a < g.a;
                    mpz_class fb = abs(f.b), gb = abs(g.b);
                    if (fb != gb) return fb < gb;
                    return f.b < g.b;
                };
                if (keyless(cand, *best)) best = cand;
            }
            if (best) found.push_back({has_q0 ? q0 : *best, has_q0});
        }
    }

    std::stable_partition(found.begin(), found.end(),
                          [](const OrbitRep& o) { return o.is_principal; });
    if (found.empty() || !found.front().is_principal)
        throw Error("principal class missing from enumeration");
    for (const auto& o : found) cg.reps.push_back(o.form);
    return cg;
}

int class_of(const Form& q, const ClassGroup& cg) {
    const long n = cg.level.modulus;
    if (!quadforms::in_level_set(q, cg.order.disc, mpz_class(n))) throw NotInLevelSet();
    auto rq = quadforms::reduce(q);
    auto auts = quadforms::automorphs(rq.form);
    for (int i = 0; i < cg.size(); ++i) {
        auto ri = quadforms::reduce(cg.reps[i]);
        if (!(ri.form == rq.form)) continue;
        UniMat wi_inv = ri.transform.inverse();
        for (const auto& alpha : auts) {
            UniMat gamma = rq.transform * alpha * wi_inv;
            if (gamma_g_contains(gamma, cg.level)) return i;
        }
    }
    throw Error("form does not match any enumerated class");
}

int compose(int i, int j, const ClassGroup& cg) {
    if (cg.table) return (*cg.table)[i][j];
    if (i < 0 || j < 0 || i >= cg.size() || j >= cg.size()) throw Error("class index out of range");
    const Order& ord = cg.order;
    mpz_class nz(cg.level.modulus);
    IdealLat prod = orders::ideal_mul(orders::ideal_from_form(cg.reps[i], ord),
                                      orders::ideal_from_form(cg.reps[j], ord), ord);
    int hit = -1;
    for (int k = 0; k < cg.size(); ++k) {
        IdealLat quot = orders::ideal_mul(
            prod, orders::ideal_inv(orders::ideal_from_form(cg.reps[k], ord), ord), ord);
        if (orders::in_PG(quot, nz, cg.level.residues, ord)) {
            if (hit >= 0)
                throw AmbiguousClass("classes " + std::to_string(hit) + " and " +
                                     std::to_string(k) + " both accept");
            hit = k;
        }
    }
    if (hit < 0) throw AmbiguousClass("no class accepts the product");
    return hit;
}

void build_table(ClassGroup& cg) {
    if (cg.table) return;
    ClassGroup scratch = cg;  // compose without a table
    scratch.table.reset();
    std::vector<std::vector<int>> t(cg.size(), std::vector<int>(cg.size(), 0));
    for (int i = 0; i < cg.size(); ++i)
        for (int j = 0; j < cg.size(); ++j) t[i][j] = compose(i, j, scratch);
    cg.table = std::move(t);
}

int inverse(int i, const ClassGroup& cg) {
    for (int k = 0; k < cg.size(); ++k)
        if (compose(i, k, cg) == 0) return k;
    throw Error("no inverse found");
}

SignedClassGroup signed_classes(const ClassGroup& cg) {
    SignedClassGroup s;
    s.base = &cg;
    for (int i = 0; i < cg.size(); ++i) s.elements.emplace_back(i, +1);
    for (int i = 0; i < cg.size(); ++i) s.elements.emplace_back(i, -1);
    return s;
}

std::vector<int> natural_surjection(const ClassGroup& cg1, const ClassGroup& cg2) {
    if (cg1.order.disc != cg2.order.disc || cg1.level.modulus != cg2.level.modulus)
        throw IncompatibleLevels();
    if (!cg1.level.is_subset_of(cg2.level)) throw IncompatibleLevels();
    std::vector<int> map;
    map.reserve(cg1.size());
    for (const auto& f : cg1.reps) map.push_back(class_of(f, cg2));
    return map;
}

}  // namespace formclass::classgroups
