#include "formclass/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace formclass::numerics {

namespace {

// Round x / 2^s to nearest, ties away from zero.
mpz_class shift_round(const mpz_class& x, long s) {
    if (s <= 0) return x << (-s);
    mpz_class a = abs(x);
    a += mpz_class(1) << (s - 1);
    a >>= s;
    return sgn(x) < 0 ? mpz_class(-a) : a;
}

// Round num / den to nearest, ties away from zero (den > 0).
mpz_class div_round(const mpz_class& num, const mpz_class& den) {
    mpz_class a = 2 * abs(num) + den;
    a /= 2 * den;
    return sgn(num) < 0 ? mpz_class(-a) : a;
}

std::mutex g_cache_mutex;

const mpz_class& pow10_cached(long k) {
    static std::map<long, mpz_class> cache;
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = cache.find(k);
    if (it == cache.end()) {
        mpz_class v;
        mpz_ui_pow_ui(v.get_mpz_t(), 10, static_cast<unsigned long>(k));
        it = cache.emplace(k, std::move(v)).first;
    }
    return it->second;
}

// atan(1/x) scaled by 2^bits, truncated series; error ~ (#terms) ulp.
mpz_class atan_inv_scaled(unsigned long x, long bits) {
    mpz_class term = (mpz_class(1) << bits) / x;
    mpz_class sum = term;
    unsigned long x2 = x * x;
    unsigned long k = 0;
    while (term != 0) {
        term /= x2;
        ++k;
        mpz_class t = term / (2 * k + 1);
        if (k % 2 == 1)
            sum -= t;
        else
            sum += t;
    }
    return sum;
}

}  // namespace

long PrecCtx::scale_bits() const {
    // 2^bits >= 10^(digits+guard), plus slack for accumulated rounding.
    return static_cast<long>(std::ceil(scale_digits() * 3.3219280948873626)) + 16;
}

void BigReal::check_same(const BigReal& a, const BigReal& b) {
    if (a.bits_ != b.bits_) throw Error("mixed-precision operands");
}

BigReal BigReal::from_int(const mpz_class& n, long bits) { return BigReal(n << bits, bits); }

BigReal BigReal::from_long(long n, long bits) { return from_int(mpz_class(n), bits); }

BigReal BigReal::from_ratio(const mpz_class& num, const mpz_class& den, long bits) {
    if (den == 0) throw DivideByZero();
    mpz_class n = num << bits;
    if (sgn(den) < 0) return BigReal(div_round(-n, mpz_class(-den)), bits);
    return BigReal(div_round(n, den), bits);
}

BigReal BigReal::from_mpq(const mpq_class& q, long bits) {
    return from_ratio(q.get_num(), q.get_den(), bits);
}

BigReal BigReal::from_decimal(const std::string& s, long bits) {
    bool neg = false;
    size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        neg = s[i] == '-';
        ++i;
    }
    std::string intpart, fracpart;
    for (; i < s.size() && s[i] != '.'; ++i) {
        if (s[i] < '0' || s[i] > '9') throw Error("bad decimal literal: " + s);
        intpart += s[i];
    }
    if (i < s.size() && s[i] == '.') {
        for (++i; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw Error("bad decimal literal: " + s);
            fracpart += s[i];
        }
    }
    if (intpart.empty() && fracpart.empty()) throw Error("bad decimal literal: " + s);
    mpz_class digits, fracval;
    if (mpz_set_str(digits.get_mpz_t(), intpart.empty() ? "0" : intpart.c_str(), 10) != 0)
        throw Error("bad decimal literal: " + s);
    const mpz_class& den = pow10_cached(static_cast<long>(fracpart.size()));
    digits *= den;
    if (!fracpart.empty()) {
        if (mpz_set_str(fracval.get_mpz_t(), fracpart.c_str(), 10) != 0)
            throw Error("bad decimal literal: " + s);
        digits += fracval;
    }
    BigReal r = from_ratio(digits, den, bits);
    return neg ? -r : r;
}

BigReal operator+(const BigReal& a, const BigReal& b) {
    BigReal::check_same(a, b);
    return BigReal(a.m_ + b.m_, a.bits_);
}

BigReal operator-(const BigReal& a, const BigReal& b) {
    BigReal::check_same(a, b);
    return BigReal(a.m_ - b.m_, a.bits_);
}

BigReal operator*(const BigReal& a, const BigReal& b) {
    BigReal::check_same(a, b);
    return BigReal(shift_round(a.m_ * b.m_, a.bits_), a.bits_);
}

BigReal operator/(const BigReal& a, const BigReal& b) {
    BigReal::check_same(a, b);
    if (b.m_ == 0) throw DivideByZero();
    mpz_class num = a.m_ << a.bits_;
    if (sgn(b.m_) < 0) return BigReal(div_round(-num, mpz_class(-b.m_)), a.bits_);
    return BigReal(div_round(num, b.m_), a.bits_);
}

BigReal BigReal::div_small(unsigned long k) const {
    mpz_class den(k);
    return BigReal(div_round(m_, den), bits_);
}

BigReal BigReal::mul_mpq(const mpq_class& q) const {
    mpz_class num = m_ * q.get_num();
    if (sgn(num) < 0) return BigReal(-div_round(mpz_class(-num), q.get_den()), bits_);
    return BigReal(div_round(num, q.get_den()), bits_);
}

BigReal BigReal::half() const { return BigReal(shift_round(m_, 1), bits_); }

BigReal BigReal::sqrt() const {
    if (sgn(m_) < 0) throw Error("sqrt of negative real");
    mpz_class shifted = m_ << bits_;
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), shifted.get_mpz_t());
    return BigReal(root, bits_);
}

int BigReal::compare(const BigReal& b) const {
    check_same(*this, b);
    return cmp(m_, b.m_);
}

bool BigReal::abs_less_pow10(long e) const {
    // |m| 2^-bits < 10^e  <=>  |m| * 10^-e < 2^bits (e < 0), or |m| < 10^e 2^bits.
    mpz_class lhs = ::abs(m_);
    if (e >= 0) return lhs < (pow10_cached(e) << bits_);
    lhs *= pow10_cached(-e);
    return lhs < (mpz_class(1) << bits_);
}

std::pair<mpz_class, BigReal> BigReal::nearest_int() const {
    mpz_class n = shift_round(m_, bits_);
    BigReal diff = *this - from_int(n, bits_);
    return {n, diff.abs()};
}

double BigReal::to_double() const {
    signed long exp2 = 0;
    double d = mpz_get_d_2exp(&exp2, m_.get_mpz_t());
    return std::ldexp(d, static_cast<int>(exp2 - bits_));
}

std::string BigReal::to_decimal(long frac_digits) const {
    mpz_class scaled = shift_round(::abs(m_) * pow10_cached(frac_digits), bits_);
    mpz_class ip = scaled / pow10_cached(frac_digits);
    mpz_class fp = scaled % pow10_cached(frac_digits);
    std::string frac = fp.get_str();
    frac.insert(frac.begin(), frac_digits - frac.size(), '0');
    std::string out = sgn(m_) < 0 && (ip != 0 || fp != 0) ? "-" : "";
    out += ip.get_str();
    if (frac_digits > 0) out += "." + frac;
    return out;
}

std::string BigReal::to_sci(int sig) const {
    if (m_ == 0) return "0";
    // decimal exponent of |value| = |m| 2^-bits
    signed long e2 = 0;
    double d = mpz_get_d_2exp(&e2, m_.get_mpz_t());
    double log10v = std::log10(std::fabs(d)) + (e2 - bits_) * 0.30102999566398120;
    long e10 = static_cast<long>(std::floor(log10v));
    // digits = round(|value| * 10^(sig-1-e10))
    long shift = sig - 1 - e10;
    mpz_class t = ::abs(m_);
    if (shift >= 0)
        t *= pow10_cached(shift);
    else
        t = t / pow10_cached(-shift);
    t = shift_round(t, bits_);
    std::string ds = t.get_str();
    if (static_cast<int>(ds.size()) > sig) {  // rounding pushed into the next decade
        ds.pop_back();
        ++e10;
    }
    while (static_cast<int>(ds.size()) < sig) ds += "0";
    std::string out = sgn(m_) < 0 ? "-" : "";
    out += ds.substr(0, 1);
    if (sig > 1) out += "." + ds.substr(1);
    out += "e" + std::string(e10 < 0 ? "-" : "+") + std::to_string(std::labs(e10));
    return out;
}

BigComplex BigComplex::from_real(const BigReal& r) {
    return {r, BigReal(mpz_class(0), r.bits())};
}

BigComplex BigComplex::zero(long bits) { return {BigReal(mpz_class(0), bits), BigReal(mpz_class(0), bits)}; }

BigComplex BigComplex::one(long bits) { return {BigReal::from_long(1, bits), BigReal(mpz_class(0), bits)}; }

BigComplex operator+(const BigComplex& a, const BigComplex& b) { return {a.re + b.re, a.im + b.im}; }

BigComplex operator-(const BigComplex& a, const BigComplex& b) { return {a.re - b.re, a.im - b.im}; }

BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

BigComplex cx_div(const BigComplex& x, const BigComplex& y, const PrecCtx& ctx) {
    BigReal n2 = y.norm_sq();
    if (n2.abs_less_pow10(-ctx.digits)) throw DivideByZero();  // |y| <= 10^(-digits/2)
    BigComplex t = x * y.conj();
    return {t.re / n2, t.im / n2};
}

BigComplex cx_pow(const BigComplex& x, unsigned long e) {
    BigComplex acc = BigComplex::one(x.bits());
    BigComplex base = x;
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

BigReal pi(long bits) {
    static std::map<long, mpz_class> cache;
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = cache.find(bits);
        if (it != cache.end()) return BigReal(it->second, bits);
    }
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239), at extra working bits.
    long wb = bits + 32;
    mpz_class v = 16 * atan_inv_scaled(5, wb) - 4 * atan_inv_scaled(239, wb);
    v = shift_round(v, 32);
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    return BigReal(cache.emplace(bits, v).first->second, bits);
}

BigComplex cx_exp(const BigComplex& w) {
    const long bits = w.bits();
    // Scale w down until |w| < 1/16, series-sum, then square back up.
    mpz_class mag = abs(w.re.mantissa()) + abs(w.im.mantissa());
    long excess = static_cast<long>(mpz_sizeinbase(mag.get_mpz_t(), 2)) - bits;
    long k = excess + 4 > 0 ? excess + 4 : 0;
    BigComplex ws(BigReal(shift_round(w.re.mantissa(), k), bits),
                  BigReal(shift_round(w.im.mantissa(), k), bits));
    BigComplex sum = BigComplex::one(bits);
    BigComplex term = BigComplex::one(bits);
    for (unsigned long n = 1; !term.is_zero(); ++n) {
        term *= ws;
        term = {term.re.div_small(n), term.im.div_small(n)};
        sum += term;
        if (n > 100000) throw Error("exp series failed to terminate");
    }
    for (long i = 0; i < k; ++i) sum *= sum;
    return sum;
}

BigComplex cx_exp2pii(const BigComplex& tau, const PrecCtx& ctx) {
    BigReal two_pi = pi(tau.bits()).mul_small(2);
    return cx_exp({-(two_pi * tau.im), two_pi * tau.re});
}

BigComplex cx_exp2pii_scaled(const BigComplex& tau, const mpq_class& x, const PrecCtx& ctx) {
    return cx_exp2pii({tau.re.mul_mpq(x), tau.im.mul_mpq(x)}, ctx);
}

BigComplex sqrt_negative(const mpz_class& D, const PrecCtx& ctx) {
    if (D >= 0) throw NonNegativeInput();
    long bits = ctx.scale_bits();
    return {BigReal(mpz_class(0), bits), BigReal::from_int(mpz_class(-D), bits).sqrt()};
}

RoundedInt round_to_int(const BigComplex& x, const mpq_class& tol) {
    if (tol <= 0 || tol >= mpq_class(1, 2)) throw Error("tolerance must lie in (0, 1/2)");
    const long bits = x.bits();
    auto [n, dist] = x.re.nearest_int();
    BigReal im_abs = x.im.abs();
    BigReal residual = dist.compare(im_abs) >= 0 ? dist : im_abs;
    BigReal t = BigReal::from_mpq(tol, bits);
    if (!(residual < t)) throw ResidualTooLarge(residual.to_sci());
    return {n, residual};
}

}  // namespace formclass::numerics
