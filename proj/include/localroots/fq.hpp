#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "localroots/errors.hpp"
#include "localroots/numbers.hpp"

namespace localroots {

/// Residue field F_q with q = p^s, realized as F_p[x] / (modulus).
/// Elements are coefficient vectors of length s (low degree first) with
/// entries reduced into [0, p).  The modulus is monic of degree s and is
/// checked for irreducibility on construction by exhaustive search for
/// low-degree factors, which is exact and cheap for the field sizes this
/// library targets.
class Fq {
public:
    using Elem = std::vector<std::int64_t>;

    Fq(std::int64_t p, std::int64_t s, std::vector<std::int64_t> modulus)
        : p_(p), s_(s), modulus_(std::move(modulus)) {
        if (!is_prime_i64(p_)) throw std::domain_error("Fq: characteristic must be prime");
        if (s_ < 1) throw std::domain_error("Fq: extension degree must be >= 1");
        if (static_cast<std::int64_t>(modulus_.size()) != s_ + 1)
            throw std::domain_error("Fq: modulus must have degree s");
        for (auto& c : modulus_) { c %= p_; if (c < 0) c += p_; }
        if (modulus_.back() != 1)
            throw std::domain_error("Fq: modulus must be monic");
        Integer q = ipow(Integer(p_), static_cast<std::uint64_t>(s_));
        // Cap keeps coefficient products inside int64 and the exhaustive
        // searches (irreducibility, discrete roots) tractable.
        if (q > Integer((std::int64_t(1) << 31) - 1))
            throw std::domain_error("Fq: field too large for exhaustive routines");
        q_ = static_cast<std::int64_t>(q);
        if (!irreducible()) throw std::domain_error("Fq: modulus is reducible");
    }

    /// Prime field F_p with the conventional modulus x.
    static Fq prime_field(std::int64_t p) { return Fq(p, 1, {0, 1}); }

    std::int64_t p() const { return p_; }
    std::int64_t s() const { return s_; }
    std::int64_t q() const { return q_; }
    const std::vector<std::int64_t>& modulus() const { return modulus_; }

    bool operator==(const Fq& o) const {
        return p_ == o.p_ && s_ == o.s_ && modulus_ == o.modulus_;
    }
    bool operator!=(const Fq& o) const { return !(*this == o); }

    Elem zero() const { return Elem(s_, 0); }
    Elem one() const { Elem e(s_, 0); e[0] = 1 % p_; return e; }

    Elem from_int(std::int64_t n) const {
        Elem e(s_, 0);
        n %= p_;
        if (n < 0) n += p_;
        e[0] = n;
        return e;
    }

    /// Element from coefficients of any length (reduced mod the modulus).
    Elem from_coeffs(const std::vector<std::int64_t>& c) const {
        std::vector<std::int64_t> r = c;
        for (auto& x : r) { x %= p_; if (x < 0) x += p_; }
        reduce(r);
        r.resize(s_, 0);
        return r;
    }

    bool is_zero(const Elem& a) const {
        for (auto c : a) if (c != 0) return false;
        return true;
    }

    bool eq(const Elem& a, const Elem& b) const { return a == b; }

    Elem add(const Elem& a, const Elem& b) const {
        Elem r(s_);
        for (std::int64_t i = 0; i < s_; ++i) r[i] = (a[i] + b[i]) % p_;
        return r;
    }

    Elem sub(const Elem& a, const Elem& b) const {
        Elem r(s_);
        for (std::int64_t i = 0; i < s_; ++i) r[i] = ((a[i] - b[i]) % p_ + p_) % p_;
        return r;
    }

    Elem neg(const Elem& a) const { return sub(zero(), a); }

    Elem mul(const Elem& a, const Elem& b) const {
        std::vector<std::int64_t> prod(2 * s_ - 1, 0);
        for (std::int64_t i = 0; i < s_; ++i) {
            if (a[i] == 0) continue;
            for (std::int64_t j = 0; j < s_; ++j)
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % p_;
        }
        reduce(prod);
        prod.resize(s_, 0);
        return prod;
    }

    Elem pow(Elem base, Integer e) const {
        if (is_zero(base)) {
            if (e == 0) throw std::domain_error("Fq::pow: 0^0");
            if (e < 0) throw std::domain_error("Fq::pow: zero is not invertible");
            return zero();
        }
        Integer m = q_ - 1;
        e %= m;
        if (e < 0) e += m;
        Elem r = one();
        while (e > 0) {
            if (e % 2 == 1) r = mul(r, base);
            base = mul(base, base);
            e /= 2;
        }
        return r;
    }

    Elem inv(const Elem& a) const {
        if (is_zero(a)) throw std::domain_error("Fq::inv: zero is not invertible");
        return pow(a, Integer(q_) - 2);
    }

    /// Frobenius x -> x^p, an automorphism of F_q.
    Elem frobenius(const Elem& a) const { return pow(a, Integer(p_)); }

    /// The inverse of Frobenius, i.e. the unique p-th root: x -> x^(p^(s-1)).
    Elem frobenius_inverse(const Elem& a) const {
        return pow(a, ipow(Integer(p_), static_cast<std::uint64_t>(s_ - 1)));
    }

    /// Does y^m = a have a solution?  In the cyclic group F_q^* this is
    /// a^((q-1)/gcd(m, q-1)) == 1; zero has every root.
    bool is_mth_power(const Elem& a, const Integer& m) const {
        if (m <= 0) throw std::domain_error("Fq::is_mth_power: m must be positive");
        if (is_zero(a)) return true;
        Integer g = gcd(m % (q_ - 1) == 0 ? Integer(q_ - 1) : m, Integer(q_ - 1));
        return eq(pow(a, Integer(q_ - 1) / g), one());
    }

    /// Some solution of y^m = a, if one exists (exhaustive search; fields
    /// here are small by construction).
    std::optional<Elem> mth_root(const Elem& a, const Integer& m) const {
        if (m <= 0) throw std::domain_error("Fq::mth_root: m must be positive");
        if (is_zero(a)) return zero();
        if (!is_mth_power(a, m)) return std::nullopt;
        std::optional<Elem> found;
        each_element([&](const Elem& y) {
            if (!found && !is_zero(y) && eq(pow(y, m), a)) found = y;
        });
        return found;
    }

    /// Visit all q elements (odometer order).
    void each_element(const std::function<void(const Elem&)>& fn) const {
        Elem e = zero();
        while (true) {
            fn(e);
            std::int64_t i = 0;
            while (i < s_ && ++e[i] == p_) { e[i] = 0; ++i; }
            if (i == s_) break;
        }
    }

    std::string to_display(const Elem& a) const {
        if (s_ == 1) return std::to_string(a[0]);
        std::string out = "[";
        for (std::int64_t i = 0; i < s_; ++i) {
            if (i) out += ",";
            out += std::to_string(a[i]);
        }
        return out + "]";
    }

private:
    std::int64_t p_, s_, q_;
    std::vector<std::int64_t> modulus_;

    // Reduce a coefficient vector modulo the monic modulus, in place.
    void reduce(std::vector<std::int64_t>& v) const {
        for (std::int64_t d = static_cast<std::int64_t>(v.size()) - 1; d >= s_; --d) {
            std::int64_t c = v[d];
            if (c == 0) continue;
            v[d] = 0;
            for (std::int64_t i = 0; i < s_; ++i) {
                std::int64_t idx = d - s_ + i;
                v[idx] = ((v[idx] - c * modulus_[i]) % p_ + p_) % p_;
            }
        }
        while (v.size() > static_cast<std::size_t>(s_) && v.back() == 0) v.pop_back();
    }

    // A monic polynomial of degree s over F_p is irreducible iff it has no
    // monic factor of degree 1..s/2; test them all.
    bool irreducible() const {
        if (s_ == 1) return true;
        for (std::int64_t d = 1; d <= s_ / 2; ++d) {
            std::vector<std::int64_t> f(d + 1, 0);
            f[d] = 1;
            // iterate over all monic degree-d polynomials
            while (true) {
                if (divides(f)) return false;
                std::int64_t i = 0;
                while (i < d && ++f[i] == p_) { f[i] = 0; ++i; }
                if (i == d) break;
            }
        }
        return true;
    }

    bool divides(const std::vector<std::int64_t>& f) const {
        // polynomial long division of the modulus by monic f over F_p
        std::vector<std::int64_t> r = modulus_;
        std::int64_t df = static_cast<std::int64_t>(f.size()) - 1;
        for (std::int64_t d = static_cast<std::int64_t>(r.size()) - 1; d >= df; --d) {
            std::int64_t c = r[d];
            if (c == 0) continue;
            for (std::int64_t i = 0; i <= df; ++i) {
                std::int64_t idx = d - df + i;
                r[idx] = ((r[idx] - c * f[i]) % p_ + p_) % p_;
            }
        }
        for (auto c : r) if (c != 0) return false;
        return true;
    }
};

// ---------------------------------------------------------------------------
// Small polynomial toolkit over F_q (dense, low degree first), enough for
// residue-spectrum analysis: multiplication, division, gcd, radicals and
// modular powers of y.
// ---------------------------------------------------------------------------

using FqPoly = std::vector<Fq::Elem>;

inline FqPoly fqpoly_trim(const Fq& F, FqPoly f) {
    while (!f.empty() && F.is_zero(f.back())) f.pop_back();
    return f;
}

inline bool fqpoly_is_zero(const FqPoly& f) { return f.empty(); }

inline std::int64_t fqpoly_degree(const FqPoly& f) {
    return static_cast<std::int64_t>(f.size()) - 1;
}

inline FqPoly fqpoly_mul(const Fq& F, const FqPoly& a, const FqPoly& b) {
    if (a.empty() || b.empty()) return {};
    FqPoly r(a.size() + b.size() - 1, F.zero());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    return fqpoly_trim(F, r);
}

/// Remainder of a modulo b (b nonzero).
inline FqPoly fqpoly_mod(const Fq& F, FqPoly a, const FqPoly& b) {
    if (b.empty()) throw std::domain_error("fqpoly_mod: division by zero");
    auto lead_inv = F.inv(b.back());
    std::int64_t db = fqpoly_degree(b);
    a = fqpoly_trim(F, a);
    while (fqpoly_degree(a) >= db) {
        auto c = F.mul(a.back(), lead_inv);
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] = F.sub(a[shift + i], F.mul(c, b[i]));
        a = fqpoly_trim(F, a);
    }
    return a;
}

inline FqPoly fqpoly_divexact(const Fq& F, FqPoly a, const FqPoly& b) {
    if (b.empty()) throw std::domain_error("fqpoly_divexact: division by zero");
    auto lead_inv = F.inv(b.back());
    std::int64_t db = fqpoly_degree(b);
    a = fqpoly_trim(F, a);
    if (a.empty()) return {};
    if (fqpoly_degree(a) < db) throw std::domain_error("fqpoly_divexact: not divisible");
    FqPoly q(a.size() - b.size() + 1, F.zero());
    while (fqpoly_degree(a) >= db) {
        auto c = F.mul(a.back(), lead_inv);
        std::size_t shift = a.size() - b.size();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] = F.sub(a[shift + i], F.mul(c, b[i]));
        a = fqpoly_trim(F, a);
    }
    if (!a.empty()) throw std::domain_error("fqpoly_divexact: not divisible");
    return fqpoly_trim(F, q);
}

inline FqPoly fqpoly_gcd(const Fq& F, FqPoly a, FqPoly b) {
    a = fqpoly_trim(F, a);
    b = fqpoly_trim(F, b);
    while (!b.empty()) {
        FqPoly r = fqpoly_mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        auto li = F.inv(a.back());
        for (auto& c : a) c = F.mul(c, li);
    }
    return a;
}

inline FqPoly fqpoly_derivative(const Fq& F, const FqPoly& f) {
    FqPoly r;
    for (std::size_t i = 1; i < f.size(); ++i) {
        auto c = f[i];
        Fq::Elem ci = F.mul(c, F.from_int(static_cast<std::int64_t>(i)));
        r.push_back(ci);
    }
    return fqpoly_trim(F, r);
}

/// y^e mod f by binary powering.
inline FqPoly fqpoly_y_powmod(const Fq& F, Integer e, const FqPoly& f) {
    FqPoly base = fqpoly_mod(F, FqPoly{F.zero(), F.one()}, f);
    FqPoly acc = fqpoly_mod(F, FqPoly{F.one()}, f);
    while (e > 0) {
        if (e % 2 == 1) acc = fqpoly_mod(F, fqpoly_mul(F, acc, base), f);
        base = fqpoly_mod(F, fqpoly_mul(F, base, base), f);
        e /= 2;
    }
    return acc;
}

/// Squarefree part (radical) of f; in characteristic p the p-power part is
/// unwound through the f = g(y^p) degeneracy.
inline FqPoly fqpoly_radical(const Fq& F, const FqPoly& f0) {
    FqPoly f = fqpoly_trim(F, f0);
    if (fqpoly_degree(f) <= 0) return f;
    FqPoly d = fqpoly_derivative(F, f);
    if (fqpoly_is_zero(d)) {
        // f = g(y^p): contract the exponents, take the radical of g
        std::int64_t p = F.p();
        FqPoly g;
        for (std::size_t i = 0; i < f.size(); i += static_cast<std::size_t>(p))
            g.push_back(F.frobenius_inverse(f[i]));
        return fqpoly_radical(F, g);
    }
    FqPoly g = fqpoly_gcd(F, f, d);
    if (fqpoly_degree(g) == 0) return f;
    FqPoly sq = fqpoly_divexact(F, f, g);
    // include any factors of g not already in f/g
    FqPoly rg = fqpoly_radical(F, g);
    FqPoly merged = fqpoly_mul(F, sq, fqpoly_divexact(F, rg, fqpoly_gcd(F, sq, rg)));
    return merged;
}

} // namespace localroots
