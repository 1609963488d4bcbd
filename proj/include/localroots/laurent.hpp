#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "localroots/errors.hpp"
#include "localroots/fq.hpp"
#include "localroots/numbers.hpp"

namespace localroots {

/// Ambient parameters for F_q((t)): the residue field and the default
/// precision window (number of significant t-adic coefficients).
struct LaurentProfile {
    Fq field;
    int precision;

    LaurentProfile(Fq field_, int precision_)
        : field(std::move(field_)), precision(precision_) {
        if (precision < 1) throw std::domain_error("LaurentProfile: precision must be >= 1");
        if (precision > 100000) throw std::domain_error("LaurentProfile: precision too large");
    }

    bool operator==(const LaurentProfile& o) const {
        return field == o.field && precision == o.precision;
    }
    bool operator!=(const LaurentProfile& o) const { return !(*this == o); }
};

/// An element of F_q((t)) under the same three-state precision model as the
/// p-adic scalars: exact (a genuine Laurent polynomial, closed under ring
/// operations up to a support cap), window (valuation known, finitely many
/// coefficients known), or pseudo-zero O(t^A).
class LaurentScalar {
public:
    enum class State { exact, window, pseudo_zero };
    using Coeff = Fq::Elem;

    // -- constructors -------------------------------------------------------

    static LaurentScalar zero(const LaurentProfile& prof) {
        LaurentScalar x(prof);
        x.state_ = State::exact;
        return x;
    }

    static LaurentScalar one(const LaurentProfile& prof) {
        return from_constant(prof.field.one(), prof);
    }

    static LaurentScalar uniformizer(const LaurentProfile& prof) {
        LaurentScalar x(prof);
        x.state_ = State::exact;
        x.v_ = 1;
        x.coeffs_ = {prof.field.one()};
        return x;
    }

    static LaurentScalar from_constant(const Coeff& c, const LaurentProfile& prof) {
        LaurentScalar x(prof);
        x.state_ = State::exact;
        if (!prof.field.is_zero(c)) { x.v_ = 0; x.coeffs_ = {c}; }
        return x;
    }

    static LaurentScalar from_int(std::int64_t n, const LaurentProfile& prof) {
        return from_constant(prof.field.from_int(n), prof);
    }

    /// Exact finite Laurent series sum coeffs[i] * t^(v + i).
    static LaurentScalar from_polynomial(const LaurentProfile& prof, std::int64_t v,
                                         std::vector<Coeff> coeffs) {
        LaurentScalar x(prof);
        x.state_ = State::exact;
        x.v_ = v;
        x.coeffs_ = std::move(coeffs);
        x.normalize_exact();
        return x;
    }

    /// Value known only on a window: sum coeffs[i] * t^(v+i) + O(t^(v+width)),
    /// with coeffs[0] nonzero so v is the true valuation.
    static LaurentScalar from_window(const LaurentProfile& prof, std::int64_t v,
                                     std::vector<Coeff> coeffs) {
        LaurentScalar x(prof);
        if (coeffs.empty()) throw std::domain_error("from_window: need at least one coefficient");
        if (prof.field.is_zero(coeffs.front()))
            throw std::domain_error("from_window: leading coefficient must be nonzero");
        if (static_cast<int>(coeffs.size()) > prof.precision)
            coeffs.resize(prof.precision);
        x.state_ = State::window;
        x.v_ = v;
        x.coeffs_ = std::move(coeffs);
        return x;
    }

    static LaurentScalar pseudo_zero(const LaurentProfile& prof, std::int64_t abs_prec) {
        LaurentScalar x(prof);
        x.state_ = State::pseudo_zero;
        x.abs_ = abs_prec;
        return x;
    }

    // -- observers ----------------------------------------------------------

    const LaurentProfile& profile() const { return prof_; }
    const Fq& field() const { return prof_.field; }
    State state() const { return state_; }
    bool is_exact() const { return state_ == State::exact; }
    bool is_exact_zero() const { return state_ == State::exact && coeffs_.empty(); }

    std::int64_t valuation() const {
        switch (state_) {
        case State::exact:
            if (coeffs_.empty()) throw std::domain_error("valuation: +infinity (exact zero)");
            return v_;
        case State::window: return v_;
        default:
            throw insufficient_precision(
                "valuation: value is indistinguishable from zero below t^" +
                std::to_string(abs_), -1, abs_);
        }
    }

    static constexpr std::int64_t INF_VALUATION = std::int64_t(1) << 60;

    std::int64_t valuation_lower_bound() const {
        switch (state_) {
        case State::exact: return coeffs_.empty() ? INF_VALUATION : v_;
        case State::window: return v_;
        default: return abs_;
        }
    }

    /// Number of coefficients known beyond the valuation.
    int known_digits() const {
        switch (state_) {
        case State::exact: return prof_.precision;
        case State::window: return static_cast<int>(coeffs_.size());
        default: return 0;
        }
    }

    /// Coefficient of t^e, for e strictly below the absolute precision.
    Coeff coeff_at(std::int64_t e) const {
        if (e >= abs_precision())
            throw insufficient_precision("coeff_at: exponent beyond the known window");
        if (state_ == State::pseudo_zero) return prof_.field.zero();
        std::int64_t i = e - v_;
        if (i < 0 || i >= static_cast<std::int64_t>(coeffs_.size())) return prof_.field.zero();
        return coeffs_[static_cast<std::size_t>(i)];
    }

    /// (valuation, coefficients, width): exact values are padded to the
    /// profile window, so the result always reflects certain knowledge.
    std::tuple<std::int64_t, std::vector<Coeff>, int> to_window() const {
        switch (state_) {
        case State::exact: {
            if (coeffs_.empty())
                throw std::domain_error("to_window: exact zero has no leading coefficient");
            std::vector<Coeff> c = coeffs_;
            if (static_cast<int>(c.size()) < prof_.precision)
                c.resize(prof_.precision, prof_.field.zero());
            else if (static_cast<int>(c.size()) > prof_.precision)
                c.resize(prof_.precision);
            return {v_, c, prof_.precision};
        }
        case State::window:
            return {v_, coeffs_, static_cast<int>(coeffs_.size())};
        default:
            throw insufficient_precision("to_window: value known only as O(t^" +
                                         std::to_string(abs_) + ")");
        }
    }

    /// Exact coefficient list (valuation, coeffs); exact values only.
    std::pair<std::int64_t, const std::vector<Coeff>&> exact_coeffs() const {
        if (state_ != State::exact) throw std::logic_error("exact_coeffs: not exact");
        return {v_, coeffs_};
    }

    // -- predicates ---------------------------------------------------------

    friend Tri tri_is_zero(const LaurentScalar& x) {
        switch (x.state_) {
        case State::exact: return tri_of(x.coeffs_.empty());
        case State::window: return Tri::no;
        default: return Tri::unknown;
        }
    }

    friend Tri tri_eq(const LaurentScalar& a, const LaurentScalar& b) {
        return tri_is_zero(a - b);
    }

    friend Tri valuation_at_least(const LaurentScalar& x, std::int64_t bound) {
        switch (x.state_) {
        case State::exact:
            return x.coeffs_.empty() ? Tri::yes : tri_of(x.v_ >= bound);
        case State::window: return tri_of(x.v_ >= bound);
        default: return x.abs_ >= bound ? Tri::yes : Tri::unknown;
        }
    }

    // -- ring operations ----------------------------------------------------

    LaurentScalar operator-() const {
        LaurentScalar r = *this;
        for (auto& c : r.coeffs_) c = prof_.field.neg(c);
        return r;
    }

    friend LaurentScalar operator+(const LaurentScalar& a, const LaurentScalar& b) {
        a.check_same_profile(b);
        const Fq& F = a.prof_.field;
        if (a.is_exact_zero()) return b;
        if (b.is_exact_zero()) return a;
        if (a.state_ == State::exact && b.state_ == State::exact) {
            std::int64_t v0 = std::min(a.v_, b.v_);
            std::int64_t top = std::max(a.v_ + static_cast<std::int64_t>(a.coeffs_.size()),
                                        b.v_ + static_cast<std::int64_t>(b.coeffs_.size()));
            std::vector<Coeff> c(static_cast<std::size_t>(top - v0), F.zero());
            for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
                c[static_cast<std::size_t>(a.v_ - v0) + i] = a.coeffs_[i];
            for (std::size_t i = 0; i < b.coeffs_.size(); ++i) {
                auto& slot = c[static_cast<std::size_t>(b.v_ - v0) + i];
                slot = F.add(slot, b.coeffs_[i]);
            }
            return from_polynomial(a.prof_, v0, std::move(c)).capped();
        }
        std::int64_t A = std::min(a.abs_precision(), b.abs_precision());
        std::int64_t vmin = std::min(a.valuation_lower_bound(), b.valuation_lower_bound());
        if (vmin >= A) return pseudo_zero(a.prof_, A);
        std::vector<Coeff> c(static_cast<std::size_t>(A - vmin), F.zero());
        for (std::int64_t e = vmin; e < A; ++e)
            c[static_cast<std::size_t>(e - vmin)] = F.add(a.coeff_at(e), b.coeff_at(e));
        return window_or_pseudo(a.prof_, vmin, std::move(c), A);
    }

    friend LaurentScalar operator-(const LaurentScalar& a, const LaurentScalar& b) {
        return a + (-b);
    }

    friend LaurentScalar operator*(const LaurentScalar& a, const LaurentScalar& b) {
        a.check_same_profile(b);
        const Fq& F = a.prof_.field;
        if (a.is_exact_zero() || b.is_exact_zero()) return zero(a.prof_);
        if (a.state_ == State::pseudo_zero || b.state_ == State::pseudo_zero) {
            std::int64_t A = 0;
            A += (a.state_ == State::pseudo_zero) ? a.abs_ : a.valuation();
            A += (b.state_ == State::pseudo_zero) ? b.abs_ : b.valuation();
            return pseudo_zero(a.prof_, A);
        }
        bool exact = a.state_ == State::exact && b.state_ == State::exact;
        std::int64_t width = exact
            ? static_cast<std::int64_t>(a.coeffs_.size() + b.coeffs_.size()) - 1
            : std::min<std::int64_t>(a.known_digits(), b.known_digits());
        std::vector<Coeff> c(static_cast<std::size_t>(width), F.zero());
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (F.is_zero(a.coeffs_[i])) continue;
            for (std::size_t j = 0; j < b.coeffs_.size() &&
                                    i + j < static_cast<std::size_t>(width); ++j)
                c[i + j] = F.add(c[i + j], F.mul(a.coeffs_[i], b.coeffs_[j]));
        }
        std::int64_t v = a.v_ + b.v_;
        if (exact) return from_polynomial(a.prof_, v, std::move(c)).capped();
        // leading coefficients are nonzero, so v is the true valuation
        return from_window(a.prof_, v, std::move(c));
    }

    /// Multiplicative inverse.  Exact monomials invert exactly; everything
    /// else uses truncated power-series inversion on a justified window.
    LaurentScalar invert() const {
        const Fq& F = prof_.field;
        switch (state_) {
        case State::exact: {
            if (coeffs_.empty()) throw std::domain_error("invert: division by exact zero");
            if (coeffs_.size() == 1) {
                LaurentScalar r(prof_);
                r.state_ = State::exact;
                r.v_ = -v_;
                r.coeffs_ = {F.inv(coeffs_[0])};
                return r;
            }
            break;
        }
        case State::window: break;
        default:
            throw insufficient_precision(
                "invert: operand is indistinguishable from zero below t^" +
                std::to_string(abs_));
        }
        auto [v, u, d] = to_window();
        // power-series inversion of the unit part u(t), coefficient by coefficient
        std::vector<Coeff> inv(static_cast<std::size_t>(d), F.zero());
        Coeff lead_inv = F.inv(u[0]);
        inv[0] = lead_inv;
        for (int n = 1; n < d; ++n) {
            Coeff s = F.zero();
            for (int j = 1; j <= n; ++j)
                if (j < static_cast<int>(u.size()))
                    s = F.add(s, F.mul(u[static_cast<std::size_t>(j)],
                                       inv[static_cast<std::size_t>(n - j)]));
            inv[static_cast<std::size_t>(n)] = F.neg(F.mul(lead_inv, s));
        }
        return from_window(prof_, -v, std::move(inv));
    }

    friend LaurentScalar operator/(const LaurentScalar& a, const LaurentScalar& b) {
        a.check_same_profile(b);
        if (a.state_ == State::pseudo_zero &&
            (b.state_ == State::window || (b.state_ == State::exact && !b.coeffs_.empty())))
            return pseudo_zero(a.prof_, a.abs_ - b.valuation());
        return a * b.invert();
    }

    friend LaurentScalar pow(LaurentScalar base, Integer e) {
        if (e < 0) { base = base.invert(); e = -e; }
        LaurentScalar r = one(base.prof_);
        while (e > 0) {
            if (e % 2 == 1) r = r * base;
            base = base * base;
            e /= 2;
        }
        return r;
    }

    std::string to_display() const {
        const Fq& F = prof_.field;
        switch (state_) {
        case State::exact: {
            if (coeffs_.empty()) return "0 (exact)";
            std::string s;
            for (std::size_t i = 0; i < coeffs_.size(); ++i) {
                if (F.is_zero(coeffs_[i])) continue;
                if (!s.empty()) s += " + ";
                s += F.to_display(coeffs_[i]) + "*t^" + std::to_string(v_ + static_cast<std::int64_t>(i));
            }
            return s + " (exact)";
        }
        case State::window: {
            std::string s;
            for (std::size_t i = 0; i < coeffs_.size(); ++i) {
                if (F.is_zero(coeffs_[i])) continue;
                if (!s.empty()) s += " + ";
                s += F.to_display(coeffs_[i]) + "*t^" + std::to_string(v_ + static_cast<std::int64_t>(i));
            }
            if (s.empty()) s = "0";
            return s + " + O(t^" + std::to_string(v_ + static_cast<std::int64_t>(coeffs_.size())) + ")";
        }
        default: return "O(t^" + std::to_string(abs_) + ")";
        }
    }

private:
    explicit LaurentScalar(const LaurentProfile& prof) : prof_(prof) {}

    LaurentProfile prof_;
    State state_ = State::pseudo_zero;
    std::int64_t v_ = 0;              // valuation (exact/window with coeffs)
    std::vector<Coeff> coeffs_;       // exact: full support; window: known digits
    std::int64_t abs_ = 0;            // pseudo-zero: known to vanish below t^abs_

    void check_same_profile(const LaurentScalar& o) const {
        if (prof_ != o.prof_)
            throw std::domain_error("Laurent operands have different profiles");
    }

    std::int64_t abs_precision() const {
        switch (state_) {
        case State::exact: return INF_VALUATION;
        case State::window: return v_ + static_cast<std::int64_t>(coeffs_.size());
        default: return abs_;
        }
    }

    // strip zero leading/trailing coefficients of an exact value
    void normalize_exact() {
        const Fq& F = prof_.field;
        std::size_t lead = 0;
        while (lead < coeffs_.size() && F.is_zero(coeffs_[lead])) ++lead;
        if (lead == coeffs_.size()) { coeffs_.clear(); v_ = 0; return; }
        if (lead) {
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
            v_ += static_cast<std::int64_t>(lead);
        }
        while (!coeffs_.empty() && F.is_zero(coeffs_.back())) coeffs_.pop_back();
    }

    /// Exact values whose support outgrows the cap are demoted to windows of
    /// the profile width, mirroring the p-adic height cap.
    LaurentScalar capped() const {
        if (state_ != State::exact) return *this;
        std::int64_t cap = std::max<std::int64_t>(4 * prof_.precision, 64);
        if (static_cast<std::int64_t>(coeffs_.size()) <= cap) return *this;
        std::vector<Coeff> c(coeffs_.begin(),
                             coeffs_.begin() + std::min<std::ptrdiff_t>(
                                 prof_.precision, static_cast<std::ptrdiff_t>(coeffs_.size())));
        return from_window(prof_, v_, std::move(c));
    }

    static LaurentScalar window_or_pseudo(const LaurentProfile& prof, std::int64_t v0,
                                          std::vector<Coeff> c, std::int64_t A) {
        const Fq& F = prof.field;
        std::size_t lead = 0;
        while (lead < c.size() && F.is_zero(c[lead])) ++lead;
        if (lead == c.size()) return pseudo_zero(prof, A);
        if (lead) c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(lead));
        return from_window(prof, v0 + static_cast<std::int64_t>(lead), std::move(c));
    }
};

// -- generic-scalar customization points ------------------------------------

inline LaurentScalar zero_like(const LaurentScalar& x) { return LaurentScalar::zero(x.profile()); }
inline LaurentScalar one_like(const LaurentScalar& x) { return LaurentScalar::one(x.profile()); }
inline LaurentScalar from_int_like(const LaurentScalar& x, const Integer& n) {
    return LaurentScalar::from_int(static_cast<std::int64_t>(n % x.field().p()), x.profile());
}
inline LaurentScalar mul_int(const LaurentScalar& a, const Integer& n) {
    return a * from_int_like(a, n);
}
inline LaurentScalar div_int(const LaurentScalar& a, const Integer& n) {
    if (n % a.field().p() == 0)
        throw std::domain_error("div_int: integer is divisible by the characteristic");
    return a / from_int_like(a, n);
}
inline LaurentScalar scale_rational(const LaurentScalar& a, const Rational& t) {
    if (rat_den(t) % a.field().p() == 0)
        throw std::domain_error("scale_rational: denominator divisible by the characteristic");
    return mul_int(a, rat_num(t)) / from_int_like(a, rat_den(t));
}
inline LaurentScalar invert_scalar(const LaurentScalar& a) { return a.invert(); }
inline int scalar_characteristic(const LaurentScalar& x) {
    return static_cast<int>(x.field().p());
}
inline bool scalar_is_exact(const LaurentScalar& x) { return x.is_exact(); }
inline std::string to_display(const LaurentScalar& x) { return x.to_display(); }

// ---------------------------------------------------------------------------
// Frobenius roots and k-th roots in characteristic p
// ---------------------------------------------------------------------------

/// The p-th root, which in F_q((t)) exists iff the support of x lies in pZ
/// (the residue field is perfect, so coefficients always have p-th roots).
/// Returns nothing when a coefficient outside pZ certifies non-existence.
inline std::optional<LaurentScalar> frobenius_root(const LaurentScalar& x) {
    const auto& prof = x.profile();
    const Fq& F = prof.field;
    std::int64_t p = F.p();
    if (x.is_exact_zero()) return LaurentScalar::zero(prof);
    if (x.state() == LaurentScalar::State::pseudo_zero)
        throw insufficient_precision("frobenius_root: operand may vanish; support unknown");

    if (x.is_exact()) {
        auto [v, coeffs] = x.exact_coeffs();
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            if (!F.is_zero(coeffs[i]) && (v + static_cast<std::int64_t>(i)) % p != 0)
                return std::nullopt;
        std::vector<LaurentScalar::Coeff> root(coeffs.size() / p + 1, F.zero());
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            std::int64_t e = v + static_cast<std::int64_t>(i);
            if (!F.is_zero(coeffs[i]))
                root[static_cast<std::size_t>(e / p - v / p)] = F.frobenius_inverse(coeffs[i]);
        }
        return LaurentScalar::from_polynomial(prof, v / p, std::move(root));
    }

    auto [v, coeffs, d] = x.to_window();
    if (v % p != 0) return std::nullopt;
    std::int64_t A = v + d;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (!F.is_zero(coeffs[i]) && (v + static_cast<std::int64_t>(i)) % p != 0)
            return std::nullopt;
    // y known up to ceil(A/p): y = sum frob^-1(coeff at pe) t^e
    std::int64_t Aroot = ceil_div(A, p);
    std::int64_t vroot = v / p;
    std::vector<LaurentScalar::Coeff> root(static_cast<std::size_t>(Aroot - vroot), F.zero());
    for (std::int64_t e = vroot; e < Aroot; ++e)
        root[static_cast<std::size_t>(e - vroot)] = F.frobenius_inverse(x.coeff_at(e * p));
    return LaurentScalar::from_window(prof, vroot, std::move(root));
}

/// Decide y^k = x in F_q((t))^*.  Writing k = p^a * m with p coprime to m:
///   * k must divide v(x);
///   * the support must survive a successive p-th-root extractions (support
///     contained in p^a Z after shifting by v);
///   * the leading coefficient must be an m-th power in the cyclic group
///     F_q^* (tested by exponentiation to (q-1)/gcd(m, q-1)).
/// For a >= 1 the support condition involves all coefficients, so inexact
/// operands whose window shows no violation raise insufficient_precision
/// instead of guessing about the unseen tail.
inline RootDecision kth_root_decision_charp(const LaurentScalar& x, const Integer& k) {
    if (k <= 0) throw std::invalid_argument("kth_root: k must be positive");
    const auto& prof = x.profile();
    const Fq& F = prof.field;
    Integer p(F.p());
    if (x.is_exact_zero()) throw std::domain_error("kth_root: operand must be nonzero");
    if (x.state() == LaurentScalar::State::pseudo_zero)
        throw insufficient_precision("kth_root: operand may be zero to known precision");

    std::int64_t a = (k % p == 0) ? int_valuation(k, p) : 0;
    Integer m = k / ipow(p, static_cast<std::uint64_t>(a));
    int used = 1;

    if (x.valuation() % k != 0) return {false, 0};
    if (!F.is_mth_power(x.coeff_at(x.valuation()), m)) return {false, 1};

    LaurentScalar y = x;
    for (std::int64_t j = 0; j < a; ++j) {
        auto r = frobenius_root(y);
        if (!r) return {false, y.known_digits()};
        used = std::max(used, x.known_digits());
        y = *r;
    }
    if (a > 0 && !x.is_exact())
        throw insufficient_precision(
            "kth_root: support condition beyond the known window (characteristic-p "
            "p-th powers are not finitely determined)", -1, x.known_digits());
    return {true, used};
}

inline bool kth_root_exists_charp(const LaurentScalar& x, const Integer& k) {
    return kth_root_decision_charp(x, k).exists;
}

/// Construct a k-th root when one exists: a successive Frobenius roots
/// followed by a Hensel/Newton iteration for the tame part.
inline std::optional<LaurentScalar> kth_root_charp(const LaurentScalar& x, const Integer& k) {
    if (!kth_root_decision_charp(x, k).exists) return std::nullopt;
    const auto& prof = x.profile();
    const Fq& F = prof.field;
    Integer p(F.p());
    std::int64_t a = (k % p == 0) ? int_valuation(k, p) : 0;
    Integer m = k / ipow(p, static_cast<std::uint64_t>(a));

    LaurentScalar y = x;
    for (std::int64_t j = 0; j < a; ++j) y = *frobenius_root(y);
    if (m == 1) return y;

    // exact monomial: root is a monomial with the discrete coefficient root
    if (y.is_exact()) {
        auto [v, coeffs] = y.exact_coeffs();
        if (coeffs.size() == 1) {
            auto c = F.mth_root(coeffs[0], m);
            if (!c) throw std::logic_error("kth_root: decision said yes, coefficient root missing");
            LaurentScalar r = LaurentScalar::from_polynomial(prof, v / static_cast<std::int64_t>(m), {*c});
            return r;
        }
    }

    // Newton iteration z <- z - (z^m - y) / (m z^(m-1)) from the leading
    // coefficient's root; quadratic convergence over the residue field.
    std::int64_t v = y.valuation();
    auto c0 = F.mth_root(y.coeff_at(v), m);
    if (!c0) throw std::logic_error("kth_root: decision said yes, coefficient root missing");
    LaurentScalar z = LaurentScalar::from_polynomial(prof, v / static_cast<std::int64_t>(m), {*c0});
    LaurentScalar mc = from_int_like(z, m);
    for (int it = 0; it < 64; ++it) {
        LaurentScalar diff = pow(z, m) - y;
        if (tri_is_zero(diff) != Tri::no) break;
        z = z - diff / (mc * pow(z, m - 1));
    }
    if (tri_eq(pow(z, static_cast<Integer>(k)), x) == Tri::no)
        throw std::logic_error("kth_root: constructed witness failed verification");
    return z;
}

} // namespace localroots
