#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "localroots/errors.hpp"
#include "localroots/numbers.hpp"

namespace localroots {

/// Dense univariate polynomial over any of the library's scalar types,
/// coefficients stored low degree first.  The representation keeps whatever
/// trailing coefficients it was given; callers that need the formal degree
/// of an inexact polynomial must account for unknown-zero leading terms
/// themselves (the charpoly producers always emit an exactly-monic shape).
template <class T>
struct Polynomial {
    std::vector<T> c;

    std::size_t size() const { return c.size(); }
    /// Formal degree of the stored shape (one less than the length).
    std::int64_t degree() const { return static_cast<std::int64_t>(c.size()) - 1; }

    const T& operator[](std::size_t i) const { return c[i]; }
    T& operator[](std::size_t i) { return c[i]; }
};

template <class T>
Polynomial<T> poly_constant(const T& value) { return Polynomial<T>{{value}}; }

template <class T>
Polynomial<T> poly_x_minus(const T& a) {
    return Polynomial<T>{{-a, one_like(a)}};
}

/// Drop leading coefficients that are exactly zero (never guesses about
/// windowed zeros).
template <class T>
void strip_exact_zeros(Polynomial<T>& f) {
    while (f.c.size() > 1) {
        const T& top = f.c.back();
        if (scalar_is_exact(top) && tri_is_zero(top) == Tri::yes) f.c.pop_back();
        else break;
    }
}

template <class T>
Polynomial<T> poly_add(const Polynomial<T>& a, const Polynomial<T>& b) {
    const T& proto = a.c.empty() ? b.c.front() : a.c.front();
    Polynomial<T> r;
    std::size_t n = std::max(a.size(), b.size());
    r.c.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < a.size() && i < b.size()) r.c.push_back(a[i] + b[i]);
        else if (i < a.size()) r.c.push_back(a[i]);
        else r.c.push_back(b[i]);
    }
    if (r.c.empty()) r.c.push_back(zero_like(proto));
    return r;
}

template <class T>
Polynomial<T> poly_neg(const Polynomial<T>& a) {
    Polynomial<T> r = a;
    for (auto& x : r.c) x = -x;
    return r;
}

template <class T>
Polynomial<T> poly_sub(const Polynomial<T>& a, const Polynomial<T>& b) {
    return poly_add(a, poly_neg(b));
}

template <class T>
Polynomial<T> poly_mul(const Polynomial<T>& a, const Polynomial<T>& b) {
    const T zero = zero_like(a.c.front());
    Polynomial<T> r;
    r.c.assign(a.size() + b.size() - 1, zero);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r.c[i + j] = r.c[i + j] + a[i] * b[j];
    return r;
}

template <class T>
Polynomial<T> poly_scale(const Polynomial<T>& a, const T& s) {
    Polynomial<T> r = a;
    for (auto& x : r.c) x = x * s;
    return r;
}

template <class T>
T poly_eval(const Polynomial<T>& f, const T& x) {
    T acc = zero_like(x);
    for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
    return acc;
}

template <class T>
Polynomial<T> poly_derivative(const Polynomial<T>& f) {
    if (f.size() <= 1) return poly_constant(zero_like(f.c.front()));
    Polynomial<T> r;
    r.c.reserve(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i)
        r.c.push_back(mul_int(f[i], Integer(i)));
    return r;
}

/// Quotient and remainder by a divisor whose leading coefficient is exactly
/// one; uses only ring operations, so exactness is preserved.
template <class T>
std::pair<Polynomial<T>, Polynomial<T>> poly_divmod_monic(const Polynomial<T>& f,
                                                          const Polynomial<T>& g) {
    const T zero = zero_like(g.c.front());
    std::int64_t dg = g.degree();
    if (dg < 0) throw std::domain_error("poly_divmod_monic: empty divisor");
    Polynomial<T> r = f, q;
    std::int64_t dq = f.degree() - dg;
    if (dq < 0) return {poly_constant(zero), r};
    q.c.assign(static_cast<std::size_t>(dq) + 1, zero);
    for (std::int64_t i = f.degree(); i >= dg; --i) {
        T lead = r[static_cast<std::size_t>(i)];
        if (tri_is_zero(lead) == Tri::yes) continue;
        q[static_cast<std::size_t>(i - dg)] = lead;
        for (std::int64_t j = 0; j <= dg; ++j)
            r[static_cast<std::size_t>(i - dg + j)] =
                r[static_cast<std::size_t>(i - dg + j)] - lead * g[static_cast<std::size_t>(j)];
    }
    r.c.resize(static_cast<std::size_t>(std::max<std::int64_t>(dg, 1)), zero);
    return {q, r};
}

template <class T>
Polynomial<T> poly_mod_monic(const Polynomial<T>& f, const Polynomial<T>& g) {
    return poly_divmod_monic(f, g).second;
}

template <class T>
Polynomial<T> poly_mulmod(const Polynomial<T>& a, const Polynomial<T>& b,
                          const Polynomial<T>& g) {
    return poly_mod_monic(poly_mul(a, b), g);
}

/// x^e modulo the monic polynomial g, by binary powering.
template <class T>
Polynomial<T> poly_x_powmod(Integer e, const Polynomial<T>& g) {
    const T zero = zero_like(g.c.front());
    const T one = one_like(g.c.front());
    if (e < 0) throw std::domain_error("poly_x_powmod: negative exponent");
    Polynomial<T> base{{zero, one}};               // x
    base = poly_mod_monic(base, g);
    Polynomial<T> acc = poly_mod_monic(poly_constant(one), g);
    while (e > 0) {
        if (e % 2 == 1) acc = poly_mulmod(acc, base, g);
        base = poly_mulmod(base, base, g);
        e /= 2;
    }
    return acc;
}

/// b^e modulo the monic polynomial g, by binary powering.
template <class T>
Polynomial<T> poly_powmod(const Polynomial<T>& b, Integer e, const Polynomial<T>& g) {
    if (e < 0) throw std::domain_error("poly_powmod: negative exponent");
    const T one = one_like(g.c.front());
    Polynomial<T> base = poly_mod_monic(b, g);
    Polynomial<T> acc = poly_mod_monic(poly_constant(one), g);
    while (e > 0) {
        if (e % 2 == 1) acc = poly_mulmod(acc, base, g);
        base = poly_mulmod(base, base, g);
        e /= 2;
    }
    return acc;
}

/// b^e with no reduction; meant for small exponents.
template <class T>
Polynomial<T> poly_pow(const Polynomial<T>& b, std::int64_t e) {
    if (e < 0) throw std::domain_error("poly_pow: negative exponent");
    Polynomial<T> acc = poly_constant(one_like(b.c.front()));
    for (std::int64_t i = 0; i < e; ++i) acc = poly_mul(acc, b);
    return acc;
}

/// f(x + a), computed by Horner over the polynomial ring; degree-preserving.
template <class T>
Polynomial<T> poly_taylor_shift(const Polynomial<T>& f, const T& a) {
    const T one = one_like(a);
    Polynomial<T> xa{{a, one}};                    // x + a
    Polynomial<T> acc = poly_constant(f.c.back());
    for (std::size_t i = f.size() - 1; i-- > 0;)
        acc = poly_add(poly_mul(acc, xa), poly_constant(f[i]));
    return acc;
}

/// Inverse of f as a power series modulo x^e; requires f(0) invertible.
template <class T>
Polynomial<T> poly_series_inverse(const Polynomial<T>& f, std::size_t e) {
    const T zero = zero_like(f.c.front());
    T lead_inv = invert_scalar(f[0]);
    Polynomial<T> r;
    r.c.assign(e, zero);
    r[0] = lead_inv;
    for (std::size_t n = 1; n < e; ++n) {
        T s = zero;
        for (std::size_t j = 1; j <= n && j < f.size(); ++j)
            s = s + f[j] * r[n - j];
        r[n] = -(lead_inv * s);
    }
    return r;
}

template <class T>
Tri poly_tri_eq(const Polynomial<T>& a, const Polynomial<T>& b) {
    const T zero = zero_like(a.c.front());
    Tri out = Tri::yes;
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const T& x = i < a.size() ? a[i] : zero;
        const T& y = i < b.size() ? b[i] : zero;
        Tri t = tri_eq(x, y);
        if (t == Tri::no) return Tri::no;
        if (t == Tri::unknown) out = Tri::unknown;
    }
    return out;
}

template <class T>
std::string poly_display(const Polynomial<T>& f) {
    std::string s;
    for (std::size_t i = f.size(); i-- > 0;) {
        if (!s.empty()) s += " + ";
        s += "(" + to_display(f[i]) + ")*x^" + std::to_string(i);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials over Q (exact)
// ---------------------------------------------------------------------------

/// The m-th cyclotomic polynomial, computed by exact division of x^m - 1 by
/// the lower cyclotomic factors; results are memoized.
inline const Polynomial<Rational>& cyclotomic(std::int64_t m) {
    static std::map<std::int64_t, Polynomial<Rational>> cache;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    if (m < 1) throw std::domain_error("cyclotomic: index must be positive");
    Polynomial<Rational> xm1;
    xm1.c.assign(static_cast<std::size_t>(m) + 1, Rational(0));
    xm1[0] = Rational(-1);
    xm1[static_cast<std::size_t>(m)] = Rational(1);
    Polynomial<Rational> acc = xm1;
    for (std::int64_t d = 1; d < m; ++d) {
        if (m % d != 0) continue;
        auto [q, r] = poly_divmod_monic(acc, cyclotomic(d));
        bool exact = true;
        for (const auto& x : r.c) exact = exact && x == 0;
        if (!exact) throw std::logic_error("cyclotomic: non-exact division");
        acc = q;
    }
    strip_exact_zeros(acc);
    return cache.emplace(m, std::move(acc)).first->second;
}

} // namespace localroots
