#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include "localroots/errors.hpp"

namespace localroots {

namespace mp = boost::multiprecision;

// Expression templates are disabled so that deduced scalar types in generic
// code are always concrete numbers, never lazy expression nodes.
using Integer  = mp::number<mp::cpp_int_backend<>, mp::et_off>;
using Rational = mp::number<mp::rational_adaptor<mp::cpp_int_backend<>>, mp::et_off>;

inline Integer rat_num(const Rational& r) { return mp::numerator(r); }
inline Integer rat_den(const Rational& r) { return mp::denominator(r); }

inline Integer powmod(const Integer& base, const Integer& exp, const Integer& mod) {
    if (mod <= 0) throw std::domain_error("powmod: modulus must be positive");
    if (exp < 0) throw std::domain_error("powmod: negative exponent");
    Integer b = base % mod;
    if (b < 0) b += mod;
    return mp::powm(b, exp, mod);
}

/// Division rounding toward -infinity / +infinity (sign-correct for the
/// exponent arithmetic on Laurent tails).
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    return -floor_div(-a, b);
}
inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

/// b^e for a plain machine exponent.
inline Integer ipow(const Integer& b, std::uint64_t e) {
    Integer r = 1, acc = b;
    while (e) {
        if (e & 1) r *= acc;
        acc *= acc;
        e >>= 1;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Primality and factorization
// ---------------------------------------------------------------------------

/// Deterministic Miller-Rabin for 64-bit inputs (fixed witness set), falling
/// back to many rounds of the probabilistic test for larger operands.
inline bool is_prime(const Integer& n) {
    if (n < 2) return false;
    for (int q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    if (n < Integer("18446744073709551616")) { // 2^64
        Integer d = n - 1;
        int s = 0;
        while (d % 2 == 0) { d /= 2; ++s; }
        for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
            Integer x = powmod(a, d, n);
            if (x == 1 || x == n - 1) continue;
            bool witness = true;
            for (int i = 1; i < s; ++i) {
                x = x * x % n;
                if (x == n - 1) { witness = false; break; }
            }
            if (witness) return false;
        }
        return true;
    }
    return mp::miller_rabin_test(n, 40);
}

inline bool is_prime_i64(std::int64_t n) { return is_prime(Integer(n)); }

namespace detail {

inline Integer brent_rho(const Integer& n, std::uint64_t seed) {
    // Brent's cycle-finding variant of Pollard rho; n must be odd composite.
    std::mt19937_64 rng(seed);
    while (true) {
        Integer y = Integer(rng() % 1000003) % n, c = Integer(rng() % 1000003) % n + 1;
        Integer m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
        while (g == 1) {
            x = y;
            for (Integer i = 0; i < r; ++i) y = (y * y + c) % n;
            Integer k = 0;
            while (k < r && g == 1) {
                ys = y;
                Integer lim = std::min(m, Integer(r - k));
                for (Integer i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    Integer d = x - y;
                    if (d < 0) d = -d;
                    q = q * d % n;
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                Integer d = x - ys;
                if (d < 0) d = -d;
                g = gcd(d, n);
            }
        }
        if (g != n) return g;
        // retry with a different polynomial
    }
}

inline void factor_rec(Integer n, std::map<Integer, int>& out, std::uint64_t seed) {
    if (n == 1) return;
    if (is_prime(n)) { ++out[n]; return; }
    Integer d = brent_rho(n, seed);
    factor_rec(d, out, seed + 1);
    factor_rec(n / d, out, seed + 2);
}

} // namespace detail

/// Full prime factorization, exponents included.  Trial division for small
/// primes, then Brent-Pollard rho with Miller-Rabin certificates.
inline std::map<Integer, int> factorize(Integer n) {
    if (n <= 0) throw std::domain_error("factorize: argument must be positive");
    std::map<Integer, int> out;
    for (std::int64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
        while (n % q == 0) { ++out[Integer(q)]; n /= q; }
    }
    for (std::int64_t q = 53; q < 100000 && Integer(q) * q <= n; q += 2) {
        while (n % q == 0) { ++out[Integer(q)]; n /= q; }
    }
    detail::factor_rec(n, out, 0x9e3779b97f4a7c15ULL);
    return out;
}

/// All divisors of the integer described by `fac`, in increasing order.
inline std::vector<Integer> divisors_sorted(const std::map<Integer, int>& fac) {
    std::vector<Integer> divs{1};
    for (const auto& [p, e] : fac) {
        std::size_t base = divs.size();
        Integer pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

inline std::vector<Integer> divisors_sorted(const Integer& n) {
    return divisors_sorted(factorize(n));
}

// ---------------------------------------------------------------------------
// Valuations and roots
// ---------------------------------------------------------------------------

/// v_p(n) for n != 0.
inline std::int64_t int_valuation(Integer n, const Integer& p) {
    if (n == 0) throw std::domain_error("int_valuation: valuation of zero");
    if (n < 0) n = -n;
    std::int64_t v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

/// v_p(r) for r != 0, extended to rationals.
inline std::int64_t rational_valuation(const Rational& r, const Integer& p) {
    if (r == 0) throw std::domain_error("rational_valuation: valuation of zero");
    Integer num = rat_num(r), den = rat_den(r);
    std::int64_t v = 0;
    if (num % p == 0) v = int_valuation(num, p);
    if (den % p == 0) v -= int_valuation(den, p);
    return v;
}

/// Exact integer k-th root: returns r with r^k == n if one exists.
inline std::optional<Integer> integer_kth_root(const Integer& n, std::uint64_t k) {
    if (k == 0) throw std::domain_error("integer_kth_root: k must be positive");
    if (n < 0) {
        if (k % 2 == 0) return std::nullopt;
        auto r = integer_kth_root(-n, k);
        if (r) return -*r;
        return std::nullopt;
    }
    if (n == 0 || n == 1 || k == 1) return n;
    // Newton iteration on integers, then verify exactly.
    Integer x = Integer(1) << (static_cast<unsigned>(msb(n)) / k + 1);
    while (true) {
        Integer xk1 = ipow(x, k - 1);
        Integer nx = ((k - 1) * x * xk1 + n) / (k * xk1);
        if (nx >= x) break;
        x = nx;
    }
    while (ipow(x, k) > n) --x;
    if (ipow(x, k) == n) return x;
    return std::nullopt;
}

/// Exact rational k-th root, sign-aware.
inline std::optional<Rational> rational_kth_root(const Rational& r, std::uint64_t k) {
    auto num = integer_kth_root(rat_num(r), k);
    if (!num) return std::nullopt;
    auto den = integer_kth_root(rat_den(r), k);
    if (!den) return std::nullopt;
    return Rational(*num) / Rational(*den);
}

inline Integer mod_inverse(const Integer& a, const Integer& m) {
    // extended Euclid; requires gcd(a, m) == 1
    Integer r0 = m, r1 = a % m, s0 = 0, s1 = 1;
    if (r1 < 0) r1 += m;
    while (r1 != 0) {
        Integer q = r0 / r1;
        Integer r2 = r0 - q * r1; r0 = r1; r1 = r2;
        Integer s2 = s0 - q * s1; s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw std::domain_error("mod_inverse: arguments are not coprime");
    s0 %= m;
    if (s0 < 0) s0 += m;
    return s0;
}

// ---------------------------------------------------------------------------
// Small multiplicative number theory
// ---------------------------------------------------------------------------

inline std::int64_t euler_phi(std::int64_t n) {
    if (n <= 0) throw std::domain_error("euler_phi: argument must be positive");
    std::int64_t result = n;
    for (std::int64_t q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            while (n % q == 0) n /= q;
            result -= result / q;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

/// Order of a in (Z/m)^*; requires gcd(a, m) == 1.
inline Integer multiplicative_order(const Integer& a, const Integer& m) {
    if (gcd(a % m, m) != 1) throw std::domain_error("multiplicative_order: not a unit");
    // The order divides phi(m) = lambda candidates; search divisors of phi(m).
    Integer phi = 1;
    for (const auto& [p, e] : factorize(m)) phi *= ipow(p, e - 1) * (p - 1);
    for (const Integer& d : divisors_sorted(phi))
        if (powmod(a, d, m) == 1) return d;
    throw std::logic_error("multiplicative_order: no divisor of phi(m) worked");
}

inline Integer binomial(const Integer& n, std::uint64_t k) {
    Integer r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r *= n - Integer(i - 1);
        r /= Integer(i);
    }
    return r;
}

inline std::vector<std::int64_t> first_primes(std::size_t count) {
    std::vector<std::int64_t> out;
    for (std::int64_t n = 2; out.size() < count; ++n)
        if (is_prime_i64(n)) out.push_back(n);
    return out;
}

// ---------------------------------------------------------------------------
// Rational numbers as an exact scalar type
//
// These free functions are the customization points the generic polynomial /
// matrix code relies on.  Over the rationals every comparison is decidable,
// so the three-valued predicates never return `unknown`.
// ---------------------------------------------------------------------------

inline Tri tri_eq(const Rational& a, const Rational& b) { return tri_of(a == b); }
inline Tri tri_is_zero(const Rational& a) { return tri_of(a == 0); }

inline Rational zero_like(const Rational&) { return Rational(0); }
inline Rational one_like(const Rational&) { return Rational(1); }
inline Rational from_int_like(const Rational&, const Integer& n) { return Rational(n); }

inline Rational mul_int(const Rational& a, const Integer& n) { return a * Rational(n); }

inline Rational div_int(const Rational& a, const Integer& n) {
    if (n == 0) throw std::domain_error("div_int: division by zero");
    return a / Rational(n);
}

inline Rational scale_rational(const Rational& a, const Rational& t) { return a * t; }

inline Rational invert_scalar(const Rational& a) {
    if (a == 0) throw std::domain_error("invert_scalar: zero is not invertible");
    return 1 / a;
}

inline int scalar_characteristic(const Rational&) { return 0; }
inline bool scalar_is_exact(const Rational&) { return true; }

inline std::string to_display(const Rational& r) {
    std::string s = rat_num(r).str();
    if (rat_den(r) != 1) s += "/" + rat_den(r).str();
    return s;
}

/// Parse "a" or "a/b" into an exact rational.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(s));
        Integer num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (den == 0) throw parse_error("rational with zero denominator: " + s);
        return Rational(num) / Rational(den);
    } catch (const std::runtime_error&) {
        throw parse_error("malformed rational literal: " + s);
    }
}

} // namespace localroots
