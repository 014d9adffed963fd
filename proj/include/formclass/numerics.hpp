#ifndef FORMCLASS_NUMERICS_HPP
#define FORMCLASS_NUMERICS_HPP

#include <gmpxx.h>

#include <string>
#include <utility>

#include "formclass/errors.hpp"

// Deterministic fixed-point real/complex arithmetic. A value is an integer
// mantissa scaled by 2^-bits, with bits derived from the requested decimal
// precision. Every operation rounds to nearest (ties away from zero), so
// results are bit-identical across platforms for identical inputs.
namespace formclass::numerics {

struct PrecCtx {
    long digits = 200;  // decimal working precision, >= 50
    long guard = 20;    // extra guard digits

    PrecCtx() = default;
    PrecCtx(long d, long g) : digits(d), guard(g) {
        if (digits < 50) throw Error("digits must be at least 50");
        if (guard < 0) throw Error("guard must be non-negative");
    }
    long scale_digits() const { return digits + guard; }
    long scale_bits() const;
};

// Default precision-doubling cap for adaptive retries.
inline constexpr long kDigitsCap = 3200;

class BigReal {
  public:
    BigReal() : bits_(0) {}
    BigReal(mpz_class mant, long bits) : m_(std::move(mant)), bits_(bits) {}

    static BigReal from_int(const mpz_class& n, long bits);
    static BigReal from_long(long n, long bits);
    static BigReal from_ratio(const mpz_class& num, const mpz_class& den, long bits);
    static BigReal from_mpq(const mpq_class& q, long bits);
    // Parses a plain decimal string ("-12.0034"); scientific notation is not accepted.
    static BigReal from_decimal(const std::string& s, long bits);

    const mpz_class& mantissa() const { return m_; }
    long bits() const { return bits_; }
    int sign() const { return sgn(m_); }
    bool is_zero() const { return m_ == 0; }

    BigReal operator-() const { return BigReal(-m_, bits_); }
    BigReal abs() const { return BigReal(::abs(m_), bits_); }

    friend BigReal operator+(const BigReal& a, const BigReal& b);
    friend BigReal operator-(const BigReal& a, const BigReal& b);
    friend BigReal operator*(const BigReal& a, const BigReal& b);
    friend BigReal operator/(const BigReal& a, const BigReal& b);

    BigReal& operator+=(const BigReal& b) { return *this = *this + b; }
    BigReal& operator-=(const BigReal& b) { return *this = *this - b; }
    BigReal& operator*=(const BigReal& b) { return *this = *this * b; }

    BigReal mul_small(long k) const { return BigReal(m_ * k, bits_); }
    BigReal div_small(unsigned long k) const;
    BigReal mul_mpq(const mpq_class& q) const;
    BigReal half() const;
    BigReal sqrt() const;  // floor-rounded in the last place; input must be >= 0

    int compare(const BigReal& b) const;
    bool operator<(const BigReal& b) const { return compare(b) < 0; }
    bool operator>(const BigReal& b) const { return compare(b) > 0; }
    bool operator==(const BigReal& b) const { return compare(b) == 0; }

    // |*this| < 10^e, exact test against the scaled power of ten.
    bool abs_less_pow10(long e) const;

    // Nearest integer and the distance to it.
    std::pair<mpz_class, BigReal> nearest_int() const;

    double to_double() const;
    // Fixed-point decimal rendering with frac_digits digits after the point.
    std::string to_decimal(long frac_digits) const;
    // Scientific rendering "d.ddde[+-]xx" with sig significant digits.
    std::string to_sci(int sig = 3) const;

  private:
    mpz_class m_;
    long bits_;
    static void check_same(const BigReal& a, const BigReal& b);
};

struct BigComplex {
    BigReal re, im;

    BigComplex() = default;
    BigComplex(BigReal r, BigReal i) : re(std::move(r)), im(std::move(i)) {}
    static BigComplex from_real(const BigReal& r);
    static BigComplex zero(long bits);
    static BigComplex one(long bits);

    long bits() const { return re.bits(); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    BigComplex conj() const { return {re, -im}; }
    BigComplex operator-() const { return {-re, -im}; }

    friend BigComplex operator+(const BigComplex& a, const BigComplex& b);
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b);
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b);

    BigComplex& operator+=(const BigComplex& b) { return *this = *this + b; }
    BigComplex& operator-=(const BigComplex& b) { return *this = *this - b; }
    BigComplex& operator*=(const BigComplex& b) { return *this = *this * b; }

    BigReal norm_sq() const { return re * re + im * im; }
    BigReal abs() const { return norm_sq().sqrt(); }
};

// Division guard: requires |y| > 10^(-digits/2) at the context precision.
BigComplex cx_div(const BigComplex& x, const BigComplex& y, const PrecCtx& ctx);
BigComplex cx_pow(const BigComplex& x, unsigned long e);

// pi at the given mantissa size (cached, thread-safe).
BigReal pi(long bits);

// e^w for complex w by argument reduction and Taylor summation.
BigComplex cx_exp(const BigComplex& w);

// e^{2 pi i tau}. Fractional nome powers q^x are always obtained as
// cx_exp2pii(tau * x), never as roots of q, to keep branches unambiguous.
BigComplex cx_exp2pii(const BigComplex& tau, const PrecCtx& ctx);
BigComplex cx_exp2pii_scaled(const BigComplex& tau, const mpq_class& x, const PrecCtx& ctx);

// sqrt(D) = i sqrt(|D|) for D < 0.
BigComplex sqrt_negative(const mpz_class& D, const PrecCtx& ctx);

struct RoundedInt {
    mpz_class value;
    BigReal residual;
};

// Nearest integer to x when both |x - n| and |Im x| are below tol (< 1/2);
// otherwise throws ResidualTooLarge carrying the residual.
RoundedInt round_to_int(const BigComplex& x, const mpq_class& tol);

}  // namespace formclass::numerics

#endif
