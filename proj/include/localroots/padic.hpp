#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "localroots/errors.hpp"
#include "localroots/numbers.hpp"

namespace localroots {

/// Ambient parameters for p-adic computation: the prime and the default
/// relative-precision window N (number of significant base-p digits).
struct PadicProfile {
    std::int64_t p;
    int precision;

    PadicProfile(std::int64_t p_, int precision_) : p(p_), precision(precision_) {
        if (!is_prime_i64(p)) throw std::domain_error("PadicProfile: p must be prime");
        if (precision < 1) throw std::domain_error("PadicProfile: precision must be >= 1");
        if (precision > 100000) throw std::domain_error("PadicProfile: precision too large");
    }

    bool operator==(const PadicProfile& o) const {
        return p == o.p && precision == o.precision;
    }
    bool operator!=(const PadicProfile& o) const { return !(*this == o); }
};

/// An element of Q_p under a capped-relative precision model with an exact
/// fast path.
///
/// A value is in exactly one of three states:
///   * exact     — a rational number carried exactly; digits are derived on
///                 demand, so exact inputs (and anything computed from them
///                 by ring operations of moderate height) never lose digits;
///   * window    — p^v * (u + O(p^d)): valuation v known exactly, unit part
///                 u known to d base-p digits, 1 <= d <= N;
///   * pseudo-zero — O(p^A): indistinguishable from zero below absolute
///                 precision A; the valuation is only bounded, not known.
///
/// Ring operations never guess: they propagate the best window justified by
/// the operands, collapse to pseudo-zero on full cancellation, and exact
/// rationals whose height outgrows a fixed cap are demoted to windows of
/// width N.  Predicates are three-valued; decision procedures either answer
/// from digits that are actually known or raise insufficient_precision.
class PadicScalar {
public:
    enum class State { exact, window, pseudo_zero };

    // -- constructors -------------------------------------------------------

    static PadicScalar from_rational(const Rational& r, const PadicProfile& prof) {
        PadicScalar x(prof);
        x.state_ = State::exact;
        x.exact_ = r;
        return x;
    }

    static PadicScalar from_integer(const Integer& n, const PadicProfile& prof) {
        return from_rational(Rational(n), prof);
    }

    static PadicScalar zero(const PadicProfile& prof) { return from_rational(Rational(0), prof); }
    static PadicScalar one(const PadicProfile& prof) { return from_rational(Rational(1), prof); }
    static PadicScalar uniformizer(const PadicProfile& prof) {
        return from_rational(Rational(prof.p), prof);
    }

    /// A value given only by finitely many digits: p^v * (unit + O(p^digits)).
    static PadicScalar from_digits(const PadicProfile& prof, std::int64_t v,
                                   Integer unit, int digits) {
        if (digits < 1) throw std::domain_error("from_digits: need at least one digit");
        if (digits > prof.precision) digits = prof.precision;
        Integer m = ipow(Integer(prof.p), static_cast<std::uint64_t>(digits));
        unit %= m;
        if (unit < 0) unit += m;
        if (unit == 0 || unit % prof.p == 0)
            throw std::domain_error("from_digits: unit part must be a p-adic unit");
        PadicScalar x(prof);
        x.state_ = State::window;
        x.v_ = v;
        x.unit_ = unit;
        x.digits_ = digits;
        return x;
    }

    /// A value known only to vanish modulo p^abs_prec.
    static PadicScalar pseudo_zero(const PadicProfile& prof, std::int64_t abs_prec) {
        PadicScalar x(prof);
        x.state_ = State::pseudo_zero;
        x.abs_ = abs_prec;
        return x;
    }

    // -- observers ----------------------------------------------------------

    const PadicProfile& profile() const { return prof_; }
    State state() const { return state_; }
    bool is_exact() const { return state_ == State::exact; }
    bool is_exact_zero() const { return state_ == State::exact && exact_ == 0; }

    const Rational& exact_value() const {
        if (state_ != State::exact) throw std::logic_error("exact_value: not exact");
        return exact_;
    }

    /// v(x) as an exact integer.  Throws std::domain_error for exact zero
    /// (valuation +infinity) and insufficient_precision for pseudo-zero.
    std::int64_t valuation() const {
        switch (state_) {
        case State::exact:
            if (exact_ == 0) throw std::domain_error("valuation: +infinity (exact zero)");
            return rational_valuation(exact_, Integer(prof_.p));
        case State::window:
            return v_;
        default:
            throw insufficient_precision(
                "valuation: value is indistinguishable from zero below p^" +
                    std::to_string(abs_), -1, abs_);
        }
    }

    /// Largest b such that v(x) >= b is certain.  Exact zero returns a huge
    /// sentinel (the value is zero to all orders).
    std::int64_t valuation_lower_bound() const {
        switch (state_) {
        case State::exact:
            if (exact_ == 0) return INF_VALUATION;
            return rational_valuation(exact_, Integer(prof_.p));
        case State::window: return v_;
        default: return abs_;
        }
    }

    static constexpr std::int64_t INF_VALUATION = std::int64_t(1) << 60;

    /// Number of known significant digits (relative precision).
    int known_digits() const {
        switch (state_) {
        case State::exact: return prof_.precision;
        case State::window: return digits_;
        default: return 0;
        }
    }

    /// Unit part modulo p^d for d <= known_digits().
    Integer unit_digits(int d) const {
        if (d < 1 || d > known_digits())
            throw insufficient_precision("unit_digits: window too narrow", d, known_digits());
        Integer m = ipow(Integer(prof_.p), static_cast<std::uint64_t>(d));
        if (state_ == State::window) return unit_ % m;
        auto [v, u] = exact_digits(d);
        (void)v;
        return u;
    }

    // -- predicates ---------------------------------------------------------

    friend Tri tri_is_zero(const PadicScalar& x) {
        switch (x.state_) {
        case PadicScalar::State::exact: return tri_of(x.exact_ == 0);
        case PadicScalar::State::window: return Tri::no;
        default: return Tri::unknown;
        }
    }

    friend Tri tri_eq(const PadicScalar& a, const PadicScalar& b) {
        return tri_is_zero(a - b);
    }

    /// Is v(x) >= bound?  `unknown` only for pseudo-zeros that are not deep
    /// enough to certify the bound.
    friend Tri valuation_at_least(const PadicScalar& x, std::int64_t bound) {
        switch (x.state_) {
        case PadicScalar::State::exact:
            if (x.exact_ == 0) return Tri::yes;
            return tri_of(rational_valuation(x.exact_, Integer(x.prof_.p)) >= bound);
        case PadicScalar::State::window:
            return tri_of(x.v_ >= bound);
        default:
            return x.abs_ >= bound ? Tri::yes : Tri::unknown;
        }
    }

    // -- ring operations ----------------------------------------------------

    PadicScalar operator-() const {
        PadicScalar r = *this;
        switch (state_) {
        case State::exact: r.exact_ = -exact_; break;
        case State::window: {
            Integer m = pk(digits_);
            r.unit_ = (m - unit_) % m;
            break;
        }
        case State::pseudo_zero: break;
        }
        return r;
    }

    friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
        a.check_same_profile(b);
        if (a.is_exact_zero()) return b;
        if (b.is_exact_zero()) return a;
        if (a.state_ == State::exact && b.state_ == State::exact) {
            PadicScalar r = from_rational(a.exact_ + b.exact_, a.prof_);
            return r.demote_if_tall();
        }
        // Absolute precision available from each side; exact sides are
        // unbounded and simply do not constrain the minimum.
        std::int64_t A = std::min(a.abs_precision(), b.abs_precision());
        std::int64_t va = a.valuation_lower_bound(), vb = b.valuation_lower_bound();
        std::int64_t vmin = std::min(va, vb);
        if (vmin >= A) return pseudo_zero(a.prof_, A);
        std::int64_t width = A - vmin;
        Integer m = ipow(Integer(a.prof_.p), static_cast<std::uint64_t>(width));
        Integer s = (a.shifted_digits(vmin, width) + b.shifted_digits(vmin, width)) % m;
        if (s == 0) return pseudo_zero(a.prof_, A);
        std::int64_t w = int_valuation(s, Integer(a.prof_.p));
        return from_digits(a.prof_, vmin + w, s / ipow(Integer(a.prof_.p), w),
                           static_cast<int>(width - w));
    }

    friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) {
        return a + (-b);
    }

    friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
        a.check_same_profile(b);
        if (a.is_exact_zero() || b.is_exact_zero()) return zero(a.prof_);
        if (a.state_ == State::exact && b.state_ == State::exact) {
            PadicScalar r = from_rational(a.exact_ * b.exact_, a.prof_);
            return r.demote_if_tall();
        }
        if (a.state_ == State::pseudo_zero || b.state_ == State::pseudo_zero) {
            // O(p^A) * (p^v * unit) = O(p^(A+v)); two pseudo-zeros compound.
            std::int64_t A = 0;
            A += (a.state_ == State::pseudo_zero) ? a.abs_ : a.valuation();
            A += (b.state_ == State::pseudo_zero) ? b.abs_ : b.valuation();
            return pseudo_zero(a.prof_, A);
        }
        int d = std::min(a.known_digits(), b.known_digits());
        Integer m = a.pk(d);
        Integer u = a.unit_digits(d) * b.unit_digits(d) % m;
        return from_digits(a.prof_, a.valuation() + b.valuation(), u, d);
    }

    PadicScalar invert() const {
        switch (state_) {
        case State::exact:
            if (exact_ == 0) throw std::domain_error("invert: division by exact zero");
            return from_rational(1 / exact_, prof_).demote_if_tall();
        case State::window: {
            Integer m = pk(digits_);
            return from_digits(prof_, -v_, mod_inverse(unit_, m), digits_);
        }
        default:
            throw insufficient_precision(
                "invert: operand is indistinguishable from zero below p^" +
                std::to_string(abs_));
        }
    }

    friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) {
        a.check_same_profile(b);
        if (a.state_ == State::pseudo_zero &&
            (b.state_ == State::window ||
             (b.state_ == State::exact && b.exact_ != 0)))
            return pseudo_zero(a.prof_, a.abs_ - b.valuation());
        return a * b.invert();
    }

    friend PadicScalar pow(PadicScalar base, Integer e) {
        if (e < 0) { base = base.invert(); e = -e; }
        PadicScalar r = one(base.prof_);
        while (e > 0) {
            if (e % 2 == 1) r = r * base;
            base = base * base;
            e /= 2;
        }
        return r;
    }

    // -- conversions & display ----------------------------------------------

    /// Render digits p^v * (u + O(p^d)) regardless of state; exact values are
    /// expanded at full profile precision.
    std::tuple<std::int64_t, Integer, int> to_window() const {
        switch (state_) {
        case State::exact: {
            if (exact_ == 0)
                throw std::domain_error("to_window: exact zero has no unit part");
            auto [v, u] = exact_digits(prof_.precision);
            return {v, u, prof_.precision};
        }
        case State::window: return {v_, unit_, digits_};
        default:
            throw insufficient_precision("to_window: value known only as O(p^" +
                                         std::to_string(abs_) + ")");
        }
    }

    std::string to_display() const {
        switch (state_) {
        case State::exact: {
            std::string s = localroots::to_display(exact_);
            return s + " (exact)";
        }
        case State::window:
            return "p^" + std::to_string(v_) + "*(" + unit_.str() + " + O(p^" +
                   std::to_string(digits_) + "))";
        default:
            return "O(p^" + std::to_string(abs_) + ")";
        }
    }

private:
    explicit PadicScalar(const PadicProfile& prof) : prof_(prof) {}

    PadicProfile prof_;
    State state_ = State::pseudo_zero;
    Rational exact_ = 0;       // valid iff state == exact
    std::int64_t v_ = 0;       // valid iff state == window
    Integer unit_ = 0;         // valid iff state == window
    int digits_ = 0;           // valid iff state == window
    std::int64_t abs_ = 0;     // valid iff state == pseudo_zero

    Integer pk(std::int64_t k) const {
        return ipow(Integer(prof_.p), static_cast<std::uint64_t>(k));
    }

    void check_same_profile(const PadicScalar& o) const {
        if (prof_ != o.prof_)
            throw std::domain_error("p-adic operands have different profiles");
    }

    /// Absolute precision: the first power of p at which the value is not
    /// pinned down.  Exact values are unconstrained.
    std::int64_t abs_precision() const {
        switch (state_) {
        case State::exact: return INF_VALUATION;
        case State::window: return v_ + digits_;
        default: return abs_;
        }
    }

    /// Digits of an exact rational: r = p^v * u with u a unit mod p^d.
    std::pair<std::int64_t, Integer> exact_digits(int d) const {
        Integer p(prof_.p);
        std::int64_t v = rational_valuation(exact_, p);
        Integer num = rat_num(exact_), den = rat_den(exact_);
        // strip p from numerator/denominator so both become units
        std::int64_t vn = (num % p == 0) ? int_valuation(num, p) : 0;
        std::int64_t vd = (den % p == 0) ? int_valuation(den, p) : 0;
        num /= ipow(p, static_cast<std::uint64_t>(vn));
        den /= ipow(p, static_cast<std::uint64_t>(vd));
        Integer m = ipow(p, static_cast<std::uint64_t>(d));
        Integer u = num % m;
        if (u < 0) u += m;
        u = u * mod_inverse(den % m < 0 ? den % m + m : den % m, m) % m;
        return {v, u};
    }

    /// This value's digit vector relative to base valuation v0, modulo p^width.
    Integer shifted_digits(std::int64_t v0, std::int64_t width) const {
        std::int64_t v;
        Integer u;
        // A pseudo-zero O(p^A) has zero digits strictly below A, and callers
        // only ever request digits below the joint absolute precision <= A.
        if (state_ == State::pseudo_zero) return 0;
        if (state_ == State::exact) {
            if (exact_ == 0) return 0;
            auto [ve, ue] = exact_digits(static_cast<int>(width));
            v = ve; u = ue;
        } else {
            v = v_; u = unit_;
        }
        std::int64_t shift = v - v0;
        if (shift >= width) return 0;
        Integer m = pk(width);
        return u * pk(shift) % m;
    }

    /// Demote an exact rational whose representation has outgrown the height
    /// cap to an ordinary window of width N.  Keeps exactness cheap where it
    /// is useful and bounds the cost of long exact computations.
    PadicScalar demote_if_tall() {
        if (state_ != State::exact || exact_ == 0) return *this;
        std::size_t bits = msb(abs(rat_num(exact_)) + 1) + msb(rat_den(exact_) + 1);
        std::size_t cap = 64 + 4 * static_cast<std::size_t>(prof_.precision) *
                                   (msb(Integer(prof_.p)) + 1);
        if (bits <= cap) return *this;
        auto [v, u] = exact_digits(prof_.precision);
        return from_digits(prof_, v, u, prof_.precision);
    }
};

// -- generic-scalar customization points ------------------------------------

inline PadicScalar zero_like(const PadicScalar& x) { return PadicScalar::zero(x.profile()); }
inline PadicScalar one_like(const PadicScalar& x) { return PadicScalar::one(x.profile()); }
inline PadicScalar from_int_like(const PadicScalar& x, const Integer& n) {
    return PadicScalar::from_integer(n, x.profile());
}
inline PadicScalar mul_int(const PadicScalar& a, const Integer& n) {
    return a * PadicScalar::from_integer(n, a.profile());
}
inline PadicScalar div_int(const PadicScalar& a, const Integer& n) {
    if (n == 0) throw std::domain_error("div_int: division by zero");
    return a / PadicScalar::from_integer(n, a.profile());
}
inline PadicScalar scale_rational(const PadicScalar& a, const Rational& t) {
    return a * PadicScalar::from_rational(t, a.profile());
}
inline PadicScalar invert_scalar(const PadicScalar& a) { return a.invert(); }
inline int scalar_characteristic(const PadicScalar&) { return 0; }
inline bool scalar_is_exact(const PadicScalar& x) { return x.is_exact(); }
inline std::string to_display(const PadicScalar& x) { return x.to_display(); }

// ---------------------------------------------------------------------------
// Unit-group structure: Teichmuller section, log/exp on principal units
// ---------------------------------------------------------------------------

/// The Teichmuller representative of a unit x: the unique (p-1)-st root of
/// unity (p odd; the sign for p = 2) congruent to x mod p, computed as the
/// limit of x^(p^m).  Requires v(x) = 0; for p = 2 at least two digits of x
/// must be known to read the sign.
inline PadicScalar teichmuller(const PadicScalar& x) {
    const auto& prof = x.profile();
    if (x.state() == PadicScalar::State::pseudo_zero)
        throw insufficient_precision("teichmuller: operand may be zero");
    if (x.valuation() != 0)
        throw std::domain_error("teichmuller: operand must be a unit");
    Integer p(prof.p);
    if (prof.p == 2) {
        if (x.known_digits() < 2)
            throw insufficient_precision("teichmuller: need 2 digits for the sign", 2,
                                         x.known_digits());
        return x.unit_digits(2) == 1 ? PadicScalar::one(prof)
                                     : -PadicScalar::one(prof);
    }
    Integer res = x.unit_digits(1);
    if (res == 1) return PadicScalar::one(prof);
    if (res == p - 1) return -PadicScalar::one(prof);
    int d = x.known_digits();
    Integer m = ipow(p, static_cast<std::uint64_t>(d));
    Integer w = x.unit_digits(d);
    for (int i = 0; i < d + 2; ++i) {
        Integer nw = powmod(w, p, m);
        if (nw == w) break;
        w = nw;
    }
    return PadicScalar::from_digits(prof, 0, w, d);
}

/// log on principal units: defined for v(x-1) >= 1 (p odd) or >= 2 (p = 2),
/// where the series log(1+z) = z - z^2/2 + ... converges.  Computed with
/// guard digits so the stated window of the result is fully justified.
inline PadicScalar principal_log(const PadicScalar& x) {
    const auto& prof = x.profile();
    PadicScalar z = x - PadicScalar::one(prof);
    if (z.is_exact_zero()) return PadicScalar::zero(prof);
    std::int64_t least = (prof.p == 2) ? 2 : 1;
    if (z.state() == PadicScalar::State::pseudo_zero) {
        if (z.valuation_lower_bound() < least)
            throw insufficient_precision("principal_log: cannot verify operand is principal");
        // log(1 + O(p^A)) = O(p^A)
        return PadicScalar::pseudo_zero(prof, z.valuation_lower_bound());
    }
    std::int64_t c = z.valuation();
    if (c < least)
        throw std::domain_error("principal_log: operand is not a principal unit");
    Integer p(prof.p);
    auto [vz, uz, dz] = z.to_window();
    std::int64_t A = vz + dz; // absolute precision of z and of the result
    // Term i has valuation i*c - v_p(i) >= i*c - log2(i); cut off once that
    // bound clears A, and add guard digits covering every divisor p^v_p(i).
    std::int64_t imax = 1;
    while ((imax + 1) * c - static_cast<std::int64_t>(msb(Integer(imax + 1)) + 1) < A)
        ++imax;
    std::int64_t guard = static_cast<std::int64_t>(msb(Integer(imax))) + 1;
    Integer M = ipow(p, static_cast<std::uint64_t>(A + guard));
    Integer zint = uz % M * ipow(p, static_cast<std::uint64_t>(vz)) % M;
    Integer acc = 0, zpow = zint;
    for (std::int64_t i = 1; i <= imax; ++i) {
        std::int64_t vi = (i % prof.p == 0) ? int_valuation(Integer(i), p) : 0;
        Integer iu = Integer(i) / ipow(p, static_cast<std::uint64_t>(vi));
        // term = (-1)^(i+1) z^i / i ; divide the stored power by p^vi exactly
        Integer term = zpow / ipow(p, static_cast<std::uint64_t>(vi)) % M *
                       mod_inverse(iu % M, M) % M;
        acc = (i % 2 == 1) ? (acc + term) % M : (acc - term % M + M) % M;
        zpow = zpow * zint % M;
    }
    Integer mA = ipow(p, static_cast<std::uint64_t>(A));
    acc %= mA;
    // v(log x) = v(x-1) = c in the convergence range
    Integer u = acc / ipow(p, static_cast<std::uint64_t>(c));
    if (u == 0 || u % p == 0)
        throw std::logic_error("principal_log: leading digit vanished unexpectedly");
    return PadicScalar::from_digits(prof, c, u, static_cast<int>(A - c));
}

/// exp on the domain of convergence: v(z) >= 1 (p odd) or >= 2 (p = 2).
inline PadicScalar principal_exp(const PadicScalar& z) {
    const auto& prof = z.profile();
    if (z.is_exact_zero()) return PadicScalar::one(prof);
    std::int64_t least = (prof.p == 2) ? 2 : 1;
    if (z.state() == PadicScalar::State::pseudo_zero) {
        std::int64_t A = z.valuation_lower_bound();
        if (A < least)
            throw insufficient_precision("principal_exp: cannot verify convergence");
        // exp(O(p^A)) = 1 + O(p^A)
        return PadicScalar::from_digits(prof, 0, 1,
                                        static_cast<int>(std::min<std::int64_t>(
                                            A, prof.precision)));
    }
    std::int64_t c = z.valuation();
    if (c < least)
        throw std::domain_error("principal_exp: operand outside the domain of exp");
    Integer p(prof.p);
    auto [vz, uz, dz] = z.to_window();
    std::int64_t A = vz + dz;
    // Term i has valuation i*c - v_p(i!) >= i*c - (i-1)/(p-1), which grows
    // linearly on the domain of convergence; cut off once the bound clears A.
    std::int64_t pm1 = prof.p - 1, imax = 1;
    while ((imax + 1) * c * pm1 - imax < A * pm1) ++imax;
    // guard digits must absorb v_p(imax!) (Legendre's formula)
    std::int64_t vf = 0;
    for (Integer pj = p; pj <= imax; pj *= p) vf += imax / static_cast<std::int64_t>(pj);
    std::int64_t guard = vf + 1;
    Integer M = ipow(p, static_cast<std::uint64_t>(A + guard));
    Integer zint = uz % M * ipow(p, static_cast<std::uint64_t>(vz)) % M;
    Integer acc = 1 % M, zpow = 1, fact_unit = 1;
    std::int64_t fact_val = 0;
    for (std::int64_t i = 1; i <= imax; ++i) {
        zpow = zpow * zint % M;
        std::int64_t vi = (i % prof.p == 0) ? int_valuation(Integer(i), p) : 0;
        fact_val += vi;
        fact_unit = fact_unit * (Integer(i) / ipow(p, static_cast<std::uint64_t>(vi))) % M;
        Integer term = zpow / ipow(p, static_cast<std::uint64_t>(fact_val)) % M *
                       mod_inverse(fact_unit, M) % M;
        acc = (acc + term) % M;
    }
    Integer mA = ipow(p, static_cast<std::uint64_t>(A));
    acc %= mA;
    if (acc % p == 0) throw std::logic_error("principal_exp: result is not a unit");
    return PadicScalar::from_digits(prof, 0, acc,
                                    static_cast<int>(std::min<std::int64_t>(A, prof.precision)));
}

// ---------------------------------------------------------------------------
// k-th roots of scalars
// ---------------------------------------------------------------------------

/// Decide whether x has a k-th root in Q_p^*.  Writing k = p^a * m with
/// p coprime to m, the decision is:
///   * k must divide v(x);
///   * (p odd)  the residue of the unit part must be an m-th power mod p,
///     and for a >= 1 the unit must agree with its Teichmuller lift mod
///     p^(a+1) (equivalently its principal part lies in (1+pZ_p)^(p^a));
///   * (p = 2)  odd k always succeeds on units; for a >= 1 the unit must be
///     1 mod 2^(a+2), reflecting Z_2^* = {+-1} x (1 + 4Z_2).
/// Each congruence is tested at its exact stabilization level; if the known
/// window is narrower, insufficient_precision is raised rather than guessed.
inline RootDecision kth_root_decision(const PadicScalar& x, const Integer& k) {
    if (k <= 0) throw std::invalid_argument("kth_root: k must be positive");
    const auto& prof = x.profile();
    if (x.is_exact_zero()) throw std::domain_error("kth_root: operand must be nonzero");
    if (x.state() == PadicScalar::State::pseudo_zero)
        throw insufficient_precision("kth_root: operand may be zero to known precision");
    Integer p(prof.p);
    std::int64_t a = (k % p == 0) ? int_valuation(k, p) : 0;
    Integer m = k / ipow(p, static_cast<std::uint64_t>(a));

    if (x.valuation() % k != 0) return {false, 0};

    if (prof.p == 2) {
        if (a == 0) return {true, 0};
        int need = static_cast<int>(a) + 2;
        if (x.known_digits() < need)
            throw insufficient_precision("kth_root: need more digits for the 2-adic test",
                                         need, x.known_digits());
        return {x.unit_digits(need) == 1, need};
    }

    Integer g = gcd(m % (p - 1), p - 1); // gcd(0, n) == n, so m = 0 mod p-1 is fine
    bool tame_ok = powmod(x.unit_digits(1), (p - 1) / g, p) == 1;
    if (!tame_ok) return {false, 1};
    if (a == 0) return {true, 1};

    int need = static_cast<int>(a) + 1;
    if (x.known_digits() < need)
        throw insufficient_precision("kth_root: need more digits for the wild test",
                                     need, x.known_digits());
    // unit == teichmuller(unit) mod p^(a+1) iff u^(p^(a+1)...) stabilizes;
    // iterate Frobenius to the fixed point at this finite level.
    Integer M = ipow(p, static_cast<std::uint64_t>(need));
    Integer u = x.unit_digits(need), w = u;
    for (int i = 0; i < need + 2; ++i) {
        Integer nw = powmod(w, p, M);
        if (nw == w) break;
        w = nw;
    }
    return {u == w, need};
}

inline bool kth_root_exists(const PadicScalar& x, const Integer& k) {
    return kth_root_decision(x, k).exists;
}

/// Construct a k-th root when one exists: exact rational roots are returned
/// exactly; otherwise Hensel lifting handles the prime-to-p part and
/// exp(log/p^a) the wild part.  Returns nothing when no root exists.
inline std::optional<PadicScalar> kth_root(const PadicScalar& x, const Integer& k) {
    if (!kth_root_decision(x, k).exists) return std::nullopt;
    const auto& prof = x.profile();
    Integer p(prof.p);

    if (x.is_exact() && k < (Integer(1) << 32)) {
        auto r = rational_kth_root(x.exact_value(), static_cast<std::uint64_t>(k));
        if (r) return PadicScalar::from_rational(*r, prof);
    }

    std::int64_t a = (k % p == 0) ? int_valuation(k, p) : 0;
    Integer m = k / ipow(p, static_cast<std::uint64_t>(a));
    auto [v, u, d] = x.to_window();

    // tame part: solve t^m = u by Hensel from a residue solution
    Integer t = 1;
    if (m > 1) {
        if (p > (Integer(1) << 22))
            throw error("kth_root: residue search requires a small prime");
        Integer b = 0;
        for (Integer c = 1; c < p; ++c)
            if (powmod(c, m, p) == u % p) { b = c; break; }
        if (b == 0) throw std::logic_error("kth_root: decision said yes but no residue root");
        t = b;
        std::int64_t reach = 1;
        while (reach < d) {
            reach = std::min<std::int64_t>(2 * reach, d);
            Integer M = ipow(p, static_cast<std::uint64_t>(reach));
            Integer fu = (powmod(t, m, M) - u % M + M) % M;
            Integer df = m % M * powmod(t, m - 1, M) % M;
            t = (t - fu * mod_inverse(df, M)) % M;
            if (t < 0) t += M;
        }
    } else {
        t = u;
    }
    PadicScalar ts = PadicScalar::from_digits(prof, 0, t, static_cast<int>(d));

    PadicScalar yunit = ts;
    if (a > 0) {
        Integer pa = ipow(p, static_cast<std::uint64_t>(a));
        if (prof.p == 2) {
            yunit = principal_exp(div_int(principal_log(ts), pa));
        } else {
            PadicScalar w = teichmuller(ts);
            Integer ea = mod_inverse(pa % (p - 1), p - 1);
            PadicScalar zt = pow(w, ea);
            PadicScalar s = ts / w;
            yunit = zt * principal_exp(div_int(principal_log(s), pa));
        }
    }
    Integer vq = Integer(v) / k; // exact: k | v was checked by the decision
    Integer pshift = ipow(p, static_cast<std::uint64_t>(vq < 0 ? -vq : vq));
    Rational shift = vq < 0 ? Rational(1) / Rational(pshift) : Rational(pshift);
    PadicScalar root = PadicScalar::from_rational(shift, prof) * yunit;
    if (tri_eq(pow(root, k), x) == Tri::no)
        throw std::logic_error("kth_root: constructed witness failed verification");
    return root;
}

} // namespace localroots
