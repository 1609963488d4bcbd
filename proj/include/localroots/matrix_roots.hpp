#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "localroots/errors.hpp"
#include "localroots/fq.hpp"
#include "localroots/laurent.hpp"
#include "localroots/matrix.hpp"
#include "localroots/newton_polygon.hpp"
#include "localroots/numbers.hpp"
#include "localroots/padic.hpp"
#include "localroots/polynomial.hpp"
#include "localroots/power_bounds.hpp"
#include "localroots/unipotent.hpp"

namespace localroots {

// ===========================================================================
// Scalar root adapters: one calling convention over Q, Q_p and F_q((t)).
// ===========================================================================

/// k-th roots of a rational number for arbitrary positive k. Exponents larger
/// than the bit height of the operand are short-circuited: a k-th power other
/// than 0 or +-1 carries at least k bits in its numerator or denominator.
inline std::optional<Rational> rational_root_any(const Rational& c, const Integer& k) {
    if (k <= 0) throw std::invalid_argument("rational_root_any: k must be positive");
    if (c == 0) return Rational(0);
    if (c == 1) return Rational(1);
    if (c == -1) return k % 2 == 1 ? std::optional<Rational>(Rational(-1)) : std::nullopt;
    Integer height = Integer(msb(abs(rat_num(c))) + msb(rat_den(c)) + 2);
    if (k > height) return std::nullopt;
    return rational_kth_root(c, static_cast<std::uint64_t>(k));
}

inline RootDecision scalar_root_decision(const Rational& c, const Integer& k) {
    return {rational_root_any(c, k).has_value(), 0};
}
inline std::optional<Rational> scalar_root(const Rational& c, const Integer& k) {
    return rational_root_any(c, k);
}
inline RootDecision scalar_root_decision(const PadicScalar& c, const Integer& k) {
    return kth_root_decision(c, k);
}
inline std::optional<PadicScalar> scalar_root(const PadicScalar& c, const Integer& k) {
    return kth_root(c, k);
}
inline RootDecision scalar_root_decision(const LaurentScalar& c, const Integer& k) {
    return kth_root_decision_charp(c, k);
}
inline std::optional<LaurentScalar> scalar_root(const LaurentScalar& c, const Integer& k) {
    return kth_root_charp(c, k);
}

// ===========================================================================
// Linear splitting of a characteristic polynomial over the base field.
// ===========================================================================

template <class T>
struct SplitOutcome {
    enum class Kind { split, not_split, unknown };
    Kind kind = Kind::unknown;
    /// Distinct roots with multiplicities; meaningful only when kind == split.
    std::vector<std::pair<T, std::int64_t>> roots;
    std::string note;
};

namespace detail {

/// One rational root of a monic polynomial over Q, found through the integer
/// root bound after clearing denominators, or nullopt if none exists.
inline std::optional<Rational> monic_rational_root(const Polynomial<Rational>& g) {
    std::int64_t n = g.degree();
    if (n <= 0) return std::nullopt;
    if (n == 1) return -g[0];
    Integer L = 1;
    for (const auto& c : g.c) L = L / gcd(L, rat_den(c)) * rat_den(c);
    // h(y) = L^n g(y/L) is monic with integer coefficients
    std::vector<Integer> h(static_cast<std::size_t>(n) + 1);
    for (std::int64_t i = 0; i <= n; ++i) {
        Rational hi = g[static_cast<std::size_t>(i)] *
                      Rational(ipow(L, static_cast<std::uint64_t>(n - i)));
        h[static_cast<std::size_t>(i)] = rat_num(hi);
    }
    if (h[0] == 0) return Rational(0);
    auto eval = [&](const Integer& y) {
        Integer acc = 0;
        for (std::size_t i = h.size(); i-- > 0;) acc = acc * y + h[i];
        return acc;
    };
    for (const Integer& d : divisors_sorted(abs(h[0]))) {
        if (eval(d) == 0) return Rational(d) / Rational(L);
        if (eval(-d) == 0) return Rational(-d) / Rational(L);
    }
    return std::nullopt;
}

/// Quotient of g by (x - r); the caller guarantees g(r) = 0.
template <class T>
Polynomial<T> deflate(const Polynomial<T>& g, const T& r) {
    std::int64_t n = g.degree();
    Polynomial<T> q;
    q.c.assign(static_cast<std::size_t>(n), zero_like(r));
    T carry = g[static_cast<std::size_t>(n)];
    for (std::int64_t i = n - 1; i >= 0; --i) {
        q[static_cast<std::size_t>(i)] = carry;
        carry = g[static_cast<std::size_t>(i)] + r * carry;
    }
    return q;
}

inline Fq::Elem fqpoly_eval(const Fq& F, const FqPoly& f, const Fq::Elem& y) {
    Fq::Elem acc = F.zero();
    for (std::size_t i = f.size(); i-- > 0;) acc = F.add(F.mul(acc, y), f[i]);
    return acc;
}

inline FqPoly fqpoly_deflate(const Fq& F, const FqPoly& f, const Fq::Elem& y) {
    FqPoly q(f.size() - 1, F.zero());
    Fq::Elem carry = f.back();
    for (std::size_t i = f.size() - 1; i-- > 0;) {
        q[i] = carry;
        carry = F.add(f[i], F.mul(y, carry));
    }
    return q;
}

// Local aborts used by the split recursion.
struct SplitNotLinear { std::string note; };
struct SplitUndecided { std::string note; };

struct PadicSplitAdapter {
    PadicProfile prof;
    Fq F;
    explicit PadicSplitAdapter(const PadicProfile& pr) : prof(pr), F(Fq::prime_field(pr.p)) {}

    int precision() const { return prof.precision; }

    /// Residue of x / p^target, valid under the certificate v(x) >= target.
    Fq::Elem residue_at(const PadicScalar& x, std::int64_t target) const {
        if (tri_is_zero(x) == Tri::yes) return F.zero();
        if (x.state() == PadicScalar::State::pseudo_zero) {
            if (x.valuation_lower_bound() > target) return F.zero();
            throw insufficient_precision("linear_split: residue digit hidden below O(p^" +
                                         std::to_string(x.valuation_lower_bound()) + ")");
        }
        std::int64_t v = x.valuation();
        if (v > target) return F.zero();
        if (v < target) throw std::logic_error("linear_split: support line above a known coefficient");
        return F.from_int(static_cast<std::int64_t>(x.unit_digits(1)));
    }

    PadicScalar lift(const Fq::Elem& e, std::int64_t sigma) const {
        Integer digit = e.empty() ? Integer(0) : Integer(e[0]);
        Rational shift = sigma >= 0
            ? Rational(ipow(Integer(prof.p), static_cast<std::uint64_t>(sigma)))
            : Rational(1) / Rational(ipow(Integer(prof.p), static_cast<std::uint64_t>(-sigma)));
        return PadicScalar::from_rational(Rational(digit) * shift, prof);
    }
};

struct LaurentSplitAdapter {
    LaurentProfile prof;
    Fq F;
    explicit LaurentSplitAdapter(const LaurentProfile& pr) : prof(pr), F(pr.field) {}

    int precision() const { return prof.precision; }

    Fq::Elem residue_at(const LaurentScalar& x, std::int64_t target) const {
        return x.coeff_at(target);
    }

    LaurentScalar lift(const Fq::Elem& e, std::int64_t sigma) const {
        return LaurentScalar::from_polynomial(prof, sigma, {e});
    }
};

/// Smallest-height fraction congruent to u modulo m (extended Euclid with the
/// classical sqrt(m/2) cutoff); nullopt when no fraction that small exists.
inline std::optional<Rational> reconstruct_rational(Integer u, const Integer& m) {
    u %= m;
    if (u < 0) u += m;
    Integer bound = boost::multiprecision::sqrt(m / 2);
    if (bound == 0) bound = 1;
    Integer r0 = m, r1 = u, t0 = 0, t1 = 1;
    while (r1 > bound) {
        Integer q = r0 / r1;
        Integer r2 = r0 - q * r1;
        r0 = r1; r1 = r2;
        Integer t2 = t0 - q * t1;
        t0 = t1; t1 = t2;
    }
    if (t1 == 0 || abs(t1) > bound) return std::nullopt;
    if (t1 < 0) { t1 = -t1; r1 = -r1; }
    return Rational(r1, t1);
}

/// Candidate exact value matching every digit x is known to; nullopt when no
/// plausibly small one exists.  Callers must verify before trusting it.
inline std::optional<PadicScalar> exact_value_guess(const PadicScalar& x) {
    auto [v, u, d] = x.to_window();
    const auto& prof = x.profile();
    Integer m = ipow(Integer(prof.p), static_cast<std::uint64_t>(d));
    auto r = reconstruct_rational(u, m);
    if (!r) return std::nullopt;
    Rational shift = v >= 0
        ? Rational(ipow(Integer(prof.p), static_cast<std::uint64_t>(v)))
        : Rational(1) / Rational(ipow(Integer(prof.p), static_cast<std::uint64_t>(-v)));
    return PadicScalar::from_rational(*r * shift, prof);
}

inline std::optional<LaurentScalar> exact_value_guess(const LaurentScalar& x) {
    auto [v, c, w] = x.to_window();
    const Fq& F = x.profile().field;
    while (!c.empty() && F.is_zero(c.back())) c.pop_back();
    if (c.empty()) return std::nullopt;
    return LaurentScalar::from_polynomial(x.profile(), v, c);
}

inline PadicScalar narrow_to_window(const PadicScalar& x, std::int64_t width) {
    auto [v, u, d] = x.to_window();
    int w = static_cast<int>(std::min<std::int64_t>(d, width));
    Integer m = ipow(Integer(x.profile().p), static_cast<std::uint64_t>(w));
    return PadicScalar::from_digits(x.profile(), v, u % m, w);
}

inline LaurentScalar narrow_to_window(const LaurentScalar& x, std::int64_t width) {
    auto [v, c, w0] = x.to_window();
    c.resize(static_cast<std::size_t>(std::min<std::int64_t>(w0, width)));
    return LaurentScalar::from_window(x.profile(), v, c);
}

/// Accepts a Newton iterate whose residual is only indistinguishable from
/// zero.  An exact-state iterate is not thereby an exact root (its residual
/// may have demoted under the height cap), so either recognize a nearby exact
/// value that g annihilates outright, or hand back the iterate narrowed to
/// the digits the residual certificate actually covers.
template <class T>
std::optional<T> accept_approximate_root(const Polynomial<T>& g, const Polynomial<T>& dg,
                                         const T& x, const T& fx) {
    if (x.state() == T::State::pseudo_zero) return std::nullopt;
    if (auto cand = exact_value_guess(x))
        if (tri_is_zero(poly_eval(g, *cand)) == Tri::yes) return cand;
    T dfx = poly_eval(dg, x);
    if (tri_is_zero(dfx) != Tri::no) return std::nullopt;
    std::int64_t certified = fx.valuation_lower_bound() - dfx.valuation() - x.valuation();
    if (certified <= 0) return std::nullopt;
    return narrow_to_window(x, certified);
}

/// Newton refinement of a simple root from a residue-certified start; returns
/// nullopt when convergence cannot be certified at working precision.
template <class T>
std::optional<T> newton_refine(const Polynomial<T>& g, const Polynomial<T>& dg, T x,
                               int max_iter) {
    std::int64_t last = -(std::int64_t(1) << 62);
    for (int it = 0; it < max_iter; ++it) {
        T fx = poly_eval(g, x);
        Tri z = tri_is_zero(fx);
        if (z == Tri::yes) return x;
        if (z == Tri::unknown) return accept_approximate_root(g, dg, x, fx);
        std::int64_t vf = fx.valuation();
        if (vf <= last) return std::nullopt;   // stalled: the start was not in a basin
        last = vf;
        T dfx = poly_eval(dg, x);
        if (tri_is_zero(dfx) != Tri::no) return std::nullopt;
        T step(x);
        try {
            step = fx / dfx;
        } catch (const insufficient_precision&) {
            return std::nullopt;
        }
        x = x - step;
    }
    T fx = poly_eval(g, x);
    Tri z = tri_is_zero(fx);
    if (z == Tri::yes) return x;
    if (z == Tri::unknown) return accept_approximate_root(g, dg, x, fx);
    return std::nullopt;
}

/// Collects the roots of monic g lying strictly above `slope_floor` (all of
/// them when the floor is absent), by segment-wise residue analysis and digit
/// descent at repeated residues.  Roots are appended as (value, multiplicity).
template <class T, class A>
void split_rec(const A& ad, Polynomial<T> g, const std::optional<Rational>& slope_floor,
               int depth, std::vector<std::pair<T, std::int64_t>>& out) {
    if (depth <= 0)
        throw SplitUndecided{"digit descent exhausted: conjugate branches unresolved at working precision"};

    // exactly-zero roots sit at slope +infinity, always above any floor
    std::int64_t mu = 0;
    while (g.degree() > 0 && tri_is_zero(g[0]) == Tri::yes) {
        g.c.erase(g.c.begin());
        ++mu;
    }
    if (mu > 0) out.emplace_back(zero_like(g.c.front()), mu);
    if (g.degree() == 0) return;
    if (g.degree() == 1) {
        T r = -g[0];
        Tri z = tri_is_zero(r);
        if (z == Tri::unknown)
            throw SplitUndecided{"residual linear factor has a root indistinguishable from zero"};
        if (z == Tri::yes || !slope_floor || Rational(r.valuation()) > *slope_floor)
            out.emplace_back(r, 1);
        return;
    }

    // ascending slopes traverse the hull from the monic lead (height 0) back
    // toward the constant term, so anchor the support lines on the right
    NewtonPolygon np = newton_polygon(g);
    std::int64_t right_x = g.degree();
    std::int64_t right_y = 0;
    for (const auto& seg : np.segments) {
        const std::int64_t m = seg.multiplicity;
        const std::int64_t lx = right_x;
        const std::int64_t ly = right_y;
        const std::int64_t left = lx - m;
        {
            Rational rise = seg.slope * Rational(m);
            if (rat_den(rise) != 1)
                throw std::logic_error("linear_split: non-integral hull rise");
            right_x = left;
            right_y = ly + static_cast<std::int64_t>(rat_num(rise));
        }
        if (slope_floor && !(seg.slope > *slope_floor)) continue;
        if (rat_den(seg.slope) != 1)
            throw SplitNotLinear{"eigenvalue valuation " + to_display(seg.slope) +
                                 " is fractional: a ramified factor cannot split"};
        const std::int64_t sigma = static_cast<std::int64_t>(rat_num(seg.slope));

        // residue polynomial of this block, read off along the support line
        Integer qsize = ipow(Integer(ad.F.p()), static_cast<std::uint64_t>(ad.F.s()));
        if (qsize >= (Integer(1) << 22))
            throw SplitUndecided{"residue field too large for exhaustive root search"};
        FqPoly block;
        for (std::int64_t i = left; i <= lx; ++i)
            block.push_back(ad.residue_at(g[static_cast<std::size_t>(i)],
                                          ly + (lx - i) * sigma));

        // the block must split into F_q-rational roots, or no linear split exists
        FqPoly rem = block;
        std::vector<std::pair<Fq::Elem, int>> rroots;
        ad.F.each_element([&](const Fq::Elem& y0) {
            if (ad.F.is_zero(y0)) return;
            int m = 0;
            while (fqpoly_degree(rem) > 0 &&
                   ad.F.is_zero(fqpoly_eval(ad.F, rem, y0))) {
                rem = fqpoly_deflate(ad.F, rem, y0);
                ++m;
            }
            if (m > 0) rroots.emplace_back(y0, m);
        });
        if (fqpoly_degree(rem) > 0)
            throw SplitNotLinear{"residue spectrum has an irreducible factor of degree >= 2 "
                                 "(unramified extension required)"};

        for (const auto& [y0, m] : rroots) {
            T c = ad.lift(y0, sigma);
            if (m == 1) {
                auto dg = poly_derivative(g);
                auto r = newton_refine(g, dg, c, 2 * ad.precision() + 16);
                if (!r)
                    throw SplitUndecided{"simple-residue refinement failed to certify a root"};
                out.emplace_back(*r, 1);
                continue;
            }
            // repeated residue: recenter and descend one digit
            Polynomial<T> h = poly_taylor_shift(g, c);
            std::vector<std::pair<T, std::int64_t>> sub;
            split_rec(ad, h, Rational(sigma), depth - 1, sub);
            std::int64_t got = 0;
            for (const auto& [r, mm] : sub) got += mm;
            if (got != m)
                throw SplitUndecided{"descent branch count mismatch at working precision"};
            for (auto& [r, mm] : sub) out.emplace_back(r + c, mm);
        }
    }
}

template <class T, class A>
SplitOutcome<T> linear_split_impl(const A& ad, const Polynomial<T>& f) {
    SplitOutcome<T> out;
    using Kind = typename SplitOutcome<T>::Kind;
    Polynomial<T> g = f;
    while (g.size() > 1 && tri_is_zero(g.c.back()) == Tri::yes) g.c.pop_back();
    if (g.degree() <= 0) {
        out.kind = Kind::split;
        return out;
    }
    if (tri_eq(g[static_cast<std::size_t>(g.degree())], one_like(g[0])) != Tri::yes) {
        const T& lead = g[static_cast<std::size_t>(g.degree())];
        if (tri_is_zero(lead) != Tri::no) {
            out.kind = Kind::unknown;
            out.note = "leading coefficient not certainly nonzero";
            return out;
        }
        try {
            g = poly_scale(g, invert_scalar(lead));
        } catch (const insufficient_precision& e) {
            out.kind = Kind::unknown;
            out.note = e.what();
            return out;
        }
    }
    std::vector<std::pair<T, std::int64_t>> found;
    try {
        split_rec(ad, g, std::nullopt, 4 * std::max(ad.precision(), 16) + 8, found);
    } catch (const SplitNotLinear& a) {
        out.kind = Kind::not_split;
        out.note = a.note;
        return out;
    } catch (const SplitUndecided& a) {
        out.kind = Kind::unknown;
        out.note = a.note;
        return out;
    } catch (const insufficient_precision& e) {
        out.kind = Kind::unknown;
        out.note = e.what();
        return out;
    }
    for (auto& [r, m] : found) {
        bool placed = false;
        for (auto& [r2, m2] : out.roots) {
            Tri eq = tri_eq(r, r2);
            if (eq == Tri::yes) {
                m2 += m;
                placed = true;
                break;
            }
            if (eq == Tri::unknown) {
                out.kind = Kind::unknown;
                out.note = "two root branches indistinguishable at working precision";
                return out;
            }
        }
        if (!placed) out.roots.emplace_back(r, m);
    }
    out.kind = Kind::split;
    return out;
}

}  // namespace detail

inline SplitOutcome<Rational> linear_split(const Polynomial<Rational>& f) {
    SplitOutcome<Rational> out;
    using Kind = SplitOutcome<Rational>::Kind;
    Polynomial<Rational> g = f;
    while (g.size() > 1 && g.c.back() == 0) g.c.pop_back();
    if (g.degree() <= 0) {
        out.kind = Kind::split;
        return out;
    }
    if (g[static_cast<std::size_t>(g.degree())] != 1)
        g = poly_scale(g, Rational(1) / g[static_cast<std::size_t>(g.degree())]);
    std::map<Rational, std::int64_t> mult;
    while (g.degree() > 0) {
        auto r = detail::monic_rational_root(g);
        if (!r) {
            out.kind = Kind::not_split;
            out.note = "irreducible factor of degree " + std::to_string(g.degree());
            return out;
        }
        ++mult[*r];
        g = detail::deflate(g, *r);
    }
    out.kind = Kind::split;
    for (const auto& [root, e] : mult) out.roots.emplace_back(root, e);
    return out;
}

inline SplitOutcome<PadicScalar> linear_split(const Polynomial<PadicScalar>& f) {
    if (f.size() == 0) throw std::domain_error("linear_split: empty polynomial");
    detail::PadicSplitAdapter ad(f.c.front().profile());
    return detail::linear_split_impl(ad, f);
}

inline SplitOutcome<LaurentScalar> linear_split(const Polynomial<LaurentScalar>& f) {
    if (f.size() == 0) throw std::domain_error("linear_split: empty polynomial");
    detail::LaurentSplitAdapter ad(f.c.front().profile());
    return detail::linear_split_impl(ad, f);
}

// ===========================================================================
// Powers that become unipotent, and finite orders.
// ===========================================================================

namespace detail {

/// Tri-test of "f divides (x^d - 1)^n", i.e. every eigenvalue is a d-th root
/// of unity: equivalent to M^d being unipotent for f = charpoly(M).
template <class T>
Tri power_unipotency(const Polynomial<T>& f, const Integer& d, std::int64_t n) {
    const T one = one_like(f.c.front());
    auto h = poly_x_powmod(d, f);
    h[0] = h[0] - one;
    auto acc = poly_powmod(h, Integer(n), f);
    Tri all = Tri::yes;
    for (const auto& c : acc.c) all = tri_and(all, tri_is_zero(c));
    return all;
}

template <class T>
Tri unipotent_from_charpoly(const Polynomial<T>& f) {
    const T one = one_like(f.c.front());
    auto target = poly_pow(poly_x_minus(one), f.degree());
    Tri all = Tri::yes;
    for (std::size_t i = 0; i < f.size(); ++i)
        all = tri_and(all, tri_eq(f[i], target[i]));
    return all;
}

}  // namespace detail

/// Least r >= 1 with M^r unipotent, or nullopt when no power is. Over Q the
/// root-of-unity spectrum is recognized by stripping cyclotomic factors.
inline std::optional<Integer> unipotent_power_exponent(const Matrix<Rational>& M) {
    auto f = char_poly(M);
    const std::int64_t n = static_cast<std::int64_t>(M.size());
    for (const auto& c : f.c)
        if (rat_den(c) != 1) return std::nullopt;      // eigenvalues not algebraic integers
    if (abs(rat_num(f[0])) != 1) return std::nullopt;  // eigenvalues not units
    Polynomial<Rational> g = f;
    Integer r = 1;
    const std::int64_t budget = 2 * n * n + 2;
    for (std::int64_t m = 1; m <= budget && g.degree() > 0; ++m) {
        if (euler_phi(m) > g.degree()) continue;
        const Polynomial<Rational>& phi = cyclotomic(m);
        bool took = false;
        while (g.degree() >= phi.degree()) {
            auto [q, rem] = poly_divmod_monic(g, phi);
            bool zero = true;
            for (const auto& c : rem.c)
                if (c != 0) { zero = false; break; }
            if (!zero) break;
            g = q;
            took = true;
        }
        if (took) r = lcm(r, Integer(m));
    }
    if (g.degree() > 0) return std::nullopt;
    for (const Integer& d : divisors_sorted(r))
        if (detail::power_unipotency(f, d, n) == Tri::yes) return d;
    return r;
}

/// Shared divisor scan used by the local-field overloads.
template <class T>
std::optional<Integer> unipotent_power_exponent_with_bound(const Matrix<T>& M,
                                                           const Integer& bound) {
    auto f = char_poly(M);
    if (!newton_polygon(f).all_slopes_zero()) return std::nullopt;  // non-unit eigenvalue
    const std::int64_t n = static_cast<std::int64_t>(M.size());
    for (const Integer& d : divisors_sorted(bound)) {
        Tri u = detail::power_unipotency(f, d, n);
        if (u == Tri::yes) return d;
        if (u == Tri::unknown)
            throw insufficient_precision("unipotent_power_exponent: test at exponent " +
                                         d.str() + " undecided");
    }
    return std::nullopt;
}

inline std::optional<Integer> unipotent_power_exponent(const Matrix<PadicScalar>& M) {
    const auto& prof = M.proto().profile();
    auto B = unipotent_power_bound_padic(static_cast<std::int64_t>(M.size()), prof.p);
    return unipotent_power_exponent_with_bound(M, B.value);
}

inline std::optional<Integer> unipotent_power_exponent(const Matrix<LaurentScalar>& M) {
    const Fq& F = M.proto().field();
    std::int64_t q = 1;
    for (std::int64_t i = 0; i < F.s(); ++i) q *= F.p();
    auto B = unipotent_power_bound_laurent(static_cast<std::int64_t>(M.size()), q, F.p());
    return unipotent_power_exponent_with_bound(M, B.value);
}

inline PowerBound ambient_power_bound(const Matrix<PadicScalar>& M) {
    return unipotent_power_bound_padic(static_cast<std::int64_t>(M.size()),
                                       M.proto().profile().p);
}

inline PowerBound ambient_power_bound(const Matrix<LaurentScalar>& M) {
    const Fq& F = M.proto().field();
    std::int64_t q = 1;
    for (std::int64_t i = 0; i < F.s(); ++i) q *= F.p();
    return unipotent_power_bound_laurent(static_cast<std::int64_t>(M.size()), q, F.p());
}

/// Exact multiplicative order, or nullopt for infinite order.
inline std::optional<Integer> matrix_order(const Matrix<Rational>& M) {
    auto e = unipotent_power_exponent(M);
    if (!e) return std::nullopt;
    if (tri_is_identity(power_map(M, *e)) == Tri::yes) return e;
    return std::nullopt;  // nontrivial unipotent part: infinite order in characteristic 0
}

template <class T>
std::optional<Integer> matrix_order_with_bound(const Matrix<T>& M, const Integer& bound) {
    if (!newton_polygon(char_poly(M)).all_slopes_zero()) return std::nullopt;
    for (const Integer& d : divisors_sorted(bound)) {
        Tri t = tri_is_identity(power_map(M, d));
        if (t == Tri::yes) return d;
        if (t == Tri::unknown)
            throw insufficient_precision("matrix_order: identity test at exponent " + d.str() +
                                         " undecided");
    }
    return std::nullopt;
}

inline std::optional<Integer> matrix_order(const Matrix<PadicScalar>& M) {
    auto B = torsion_exponent_bound_padic(static_cast<std::int64_t>(M.size()),
                                          M.proto().profile().p);
    return matrix_order_with_bound(M, B.value);
}

inline std::optional<Integer> matrix_order(const Matrix<LaurentScalar>& M) {
    const Fq& F = M.proto().field();
    std::int64_t q = 1;
    for (std::int64_t i = 0; i < F.s(); ++i) q *= F.p();
    auto B = torsion_exponent_bound_laurent(static_cast<std::int64_t>(M.size()), q, F.p());
    return matrix_order_with_bound(M, B.value);
}

// ===========================================================================
// Congruence level of the eigenvalues of a power.
// ===========================================================================

namespace detail {

template <class T>
Tri val_at_least(const T& x, std::int64_t bound) {
    Tri z = tri_is_zero(x);
    if (z == Tri::yes) return Tri::yes;
    if (x.valuation_lower_bound() >= bound) return Tri::yes;
    if (z == Tri::unknown) return Tri::unknown;
    return x.valuation() >= bound ? Tri::yes : Tri::no;
}

template <class T>
bool congruence_level_check(const Matrix<T>& M, const Integer& r, std::int64_t level,
                            std::int64_t guard) {
    auto P = power_map(M, r);
    auto f = char_poly(P);
    const T one = one_like(M.proto());
    auto target = poly_pow(poly_x_minus(one), f.degree());
    for (std::size_t i = 0; i < f.size(); ++i) {
        Tri t = val_at_least(f[i] - target[i], level + guard);
        if (t == Tri::no) return false;
        if (t == Tri::unknown)
            throw insufficient_precision("eigenvalue congruence at level " +
                                         std::to_string(level) + " undecided");
    }
    return true;
}

}  // namespace detail

/// Certifies charpoly(M^r) == (x-1)^n modulo pi^(level + guard), the congruence
/// depth at which principal-unit eigenvalues admit iterated p-th roots (guard 2
/// for p = 2, otherwise 1).  Requires a distal matrix.
inline bool eigenvalue_congruence_check(const Matrix<PadicScalar>& M, const Integer& r,
                                        std::int64_t level) {
    if (level < 1) throw std::invalid_argument("eigenvalue_congruence_check: level must be >= 1");
    if (!is_distal(M))
        throw std::domain_error("eigenvalue_congruence_check: matrix must be distal");
    std::int64_t guard = M.proto().profile().p == 2 ? 2 : 1;
    return detail::congruence_level_check(M, r, level, guard);
}

inline bool eigenvalue_congruence_check(const Matrix<LaurentScalar>& M, const Integer& r,
                                        std::int64_t level) {
    if (level < 1) throw std::invalid_argument("eigenvalue_congruence_check: level must be >= 1");
    if (!is_distal(M))
        throw std::domain_error("eigenvalue_congruence_check: matrix must be distal");
    return detail::congruence_level_check(M, r, level, 1);
}

// ===========================================================================
// k-th roots of matrices.
// ===========================================================================

template <class T>
struct RootWitness {
    Tri status = Tri::unknown;
    std::optional<Matrix<T>> root;  // populated on yes when construction succeeds
    std::string reason;
    int digits_used = 0;
};

namespace detail {

/// Inverse of u modulo (x - c)^e via the shifted power series; u(c) must be
/// invertible.
template <class T>
Polynomial<T> inverse_mod_linear_power(const Polynomial<T>& u, const T& c, std::int64_t e) {
    auto shifted = poly_taylor_shift(u, c);
    if (static_cast<std::int64_t>(shifted.size()) < e)
        shifted.c.resize(static_cast<std::size_t>(e), zero_like(c));
    auto inv = poly_series_inverse(shifted, static_cast<std::size_t>(e));
    return poly_taylor_shift(inv, -c);
}

/// Solution of y(x)^k = x in F[x]/((x-c)^e), lifted from the scalar root s of
/// c by Newton steps along the nilpotent filtration.
template <class T>
std::optional<Polynomial<T>> factor_kth_root(const T& c, std::int64_t e, const Integer& k,
                                             const T& s) {
    auto mod = poly_pow(poly_x_minus(c), e);
    Polynomial<T> X{{zero_like(c), one_like(c)}};
    X = poly_mod_monic(X, mod);
    Polynomial<T> y = poly_mod_monic(poly_constant(s), mod);
    const T kscal = from_int_like(c, k);
    int iters = 2;
    for (std::int64_t w = 1; w < e; w *= 2) ++iters;
    for (int i = 0; i < iters; ++i) {
        auto yk1 = poly_powmod(y, k - 1, mod);
        auto yk = poly_mulmod(yk1, y, mod);
        auto r = poly_sub(yk, X);
        auto deriv = poly_scale(yk1, kscal);
        Polynomial<T> dinv;
        try {
            dinv = inverse_mod_linear_power(deriv, c, e);
        } catch (const insufficient_precision&) {
            return std::nullopt;
        } catch (const std::domain_error&) {
            return std::nullopt;
        }
        y = poly_mod_monic(poly_sub(y, poly_mulmod(r, dinv, mod)), mod);
    }
    auto chk = poly_sub(poly_powmod(y, k, mod), X);
    for (const auto& cc : chk.c)
        if (tri_is_zero(cc) == Tri::no) return std::nullopt;
    return y;
}

/// Chinese-remainder recombination of per-factor roots into one polynomial
/// modulo the product of the (x - c_i)^{e_i}.
template <class T>
Polynomial<T> crt_root(const std::vector<std::tuple<T, std::int64_t, Polynomial<T>>>& parts) {
    const T& c0 = std::get<0>(parts.front());
    Polynomial<T> f = poly_constant(one_like(c0));
    for (const auto& [c, e, y] : parts) f = poly_mul(f, poly_pow(poly_x_minus(c), e));
    Polynomial<T> acc = poly_constant(zero_like(c0));
    for (const auto& [c, e, y] : parts) {
        auto factor = poly_pow(poly_x_minus(c), e);
        auto q = poly_divmod_monic(f, factor).first;
        auto qinv = inverse_mod_linear_power(q, c, e);
        auto term = poly_mul(q, poly_mod_monic(poly_mul(y, qinv), factor));
        acc = poly_add(acc, term);
    }
    return poly_mod_monic(acc, f);
}

/// Exact order p^a of a certified-unipotent matrix in characteristic p, or
/// nullopt when windowed arithmetic cannot confirm the identity test.
template <class T>
std::optional<Integer> unipotent_order_charp(const Matrix<T>& M, std::int64_t p) {
    Integer ord = 1;
    Matrix<T> P = M;
    for (int step = 0; step < 64; ++step) {
        Tri t = tri_is_identity(P);
        if (t == Tri::yes) return ord;
        if (t == Tri::unknown) return std::nullopt;
        P = power_map(P, Integer(p));
        ord *= p;
    }
    return std::nullopt;
}

}  // namespace detail

/// Decides whether an invertible matrix has a k-th root over its base field,
/// producing a witness on yes.  Complete on matrices whose characteristic
/// polynomial splits into linear factors with a non-derogatory spectrum;
/// derogatory or non-split spectra yield an honest unknown (except scalar
/// matrices, where companion-block witnesses are still tried).
template <class T>
RootWitness<T> has_kth_root(const Matrix<T>& M, const Integer& k) {
    if (k <= 0) throw std::invalid_argument("has_kth_root: k must be positive");
    RootWitness<T> out;
    const std::int64_t n = static_cast<std::int64_t>(M.size());
    if (k == 1) {
        out.status = Tri::yes;
        out.root = M;
        out.reason = "k = 1: the matrix is its own root";
        return out;
    }
    auto f = char_poly(M);
    Tri sing = tri_is_zero(f[0]);
    if (sing == Tri::yes) throw std::domain_error("has_kth_root: matrix is singular");
    if (sing == Tri::unknown)
        throw insufficient_precision("has_kth_root: determinant indistinguishable from zero");
    const std::int64_t ch = scalar_characteristic(M.proto());
    const Tri uni = detail::unipotent_from_charpoly(f);

    if (uni == Tri::yes) {
        if (ch == 0) {
            out.status = Tri::yes;
            out.root = unipotent_kth_root(M, k);
            out.reason = "unipotent: witness exp(log(M)/k)";
            return out;
        }
        const Integer p(ch);
        Tri id = tri_is_identity(M);
        if (id == Tri::yes) {
            out.status = Tri::yes;
            out.root = Matrix<T>::identity(static_cast<std::size_t>(n), M.proto());
            out.reason = "identity matrix: the identity is a k-th root";
            return out;
        }
        if (k % p != 0) {
            auto ord = detail::unipotent_order_charp(M, ch);
            if (ord) {
                Integer e = mod_inverse(k % *ord, *ord);
                Matrix<T> W = power_map(M, e);
                Tri ok = tri_eq_matrix(power_map(W, k), M);
                if (ok == Tri::no) throw std::logic_error("has_kth_root: power witness failed");
                out.status = Tri::yes;
                out.root = W;
                out.reason = "unipotent of finite order " + ord->str() +
                             ": witness M^(k^-1 mod order)";
                return out;
            }
        } else if (id == Tri::no) {
            auto ord = detail::unipotent_order_charp(M, ch);
            if (ord) {
                std::int64_t amax = 0;
                Integer acc = 1;
                while (acc < n) { acc *= p; ++amax; }
                std::int64_t a = int_valuation(*ord, p);
                std::int64_t cpart = 0;
                Integer kk = k;
                while (kk % p == 0) { kk /= p; ++cpart; }
                if (a + cpart > amax) {
                    out.status = Tri::no;
                    out.reason = "unipotent of order p^" + std::to_string(a) +
                                 ": a k-th root would be unipotent of order p^" +
                                 std::to_string(a + cpart) + " > p^" + std::to_string(amax) +
                                 ", impossible in dimension " + std::to_string(n);
                    return out;
                }
            }
        }
        // p | k with small order, or identity test unresolved: fall through
    }

    auto sp = linear_split(f);
    using SK = typename SplitOutcome<T>::Kind;
    if (sp.kind == SK::unknown) {
        out.status = Tri::unknown;
        out.reason = "eigenvalue splitting undecided: " + sp.note;
        return out;
    }
    if (sp.kind == SK::not_split) {
        out.status = Tri::unknown;
        out.reason =
            "characteristic polynomial does not split over the base field (" + sp.note + ")";
        return out;
    }

    // scalar matrices: the centralizer is everything, so scalar-level failure
    // does not transfer; companion blocks still give witnesses when k | n
    if (sp.roots.size() == 1) {
        const T& c = sp.roots[0].first;
        Tri scal = n == 1 ? Tri::yes
                          : tri_eq_matrix(M, scale(Matrix<T>::identity(
                                                       static_cast<std::size_t>(n), M.proto()),
                                                   c));
        if (scal == Tri::unknown) {
            out.status = Tri::unknown;
            out.reason = "matrix indistinguishable from a scalar at working precision";
            return out;
        }
        if (scal == Tri::yes) {
            RootDecision d{false, 0};
            try {
                d = scalar_root_decision(c, k);
            } catch (const insufficient_precision& e) {
                out.status = Tri::unknown;
                out.reason = e.what();
                return out;
            }
            out.digits_used = d.digits_used;
            if (d.exists) {
                auto s = scalar_root(c, k);
                out.status = Tri::yes;
                if (s) {
                    out.root = scale(Matrix<T>::identity(static_cast<std::size_t>(n), M.proto()), *s);
                    out.reason = "scalar matrix: entrywise scalar root";
                } else {
                    out.reason = "scalar root certified; witness construction exceeded precision";
                }
                return out;
            }
            if (n == 1) {
                out.status = Tri::no;
                out.reason = "1x1 matrix: the scalar has no k-th root";
                return out;
            }
            if (k <= n && Integer(n) % k == 0) {
                const std::int64_t kk = static_cast<std::int64_t>(k);
                Matrix<T> W(static_cast<std::size_t>(n), zero_like(M.proto()));
                const T one = one_like(M.proto());
                for (std::int64_t b = 0; b + kk <= n; b += kk) {
                    for (std::int64_t i = 0; i + 1 < kk; ++i)
                        W.at(static_cast<std::size_t>(b + i + 1),
                             static_cast<std::size_t>(b + i)) = one;
                    W.at(static_cast<std::size_t>(b), static_cast<std::size_t>(b + kk - 1)) = c;
                }
                Tri ok = tri_eq_matrix(power_map(W, k), M);
                if (ok == Tri::no)
                    throw std::logic_error("has_kth_root: companion witness failed");
                out.status = Tri::yes;
                out.root = W;
                out.reason = "scalar matrix with k | n: companion-block witness";
                return out;
            }
            out.status = Tri::unknown;
            out.reason =
                "scalar matrix without a scalar root: roots may exist with non-commuting "
                "eigenstructure";
            return out;
        }
    }

    // non-derogatory test: one Jordan block per eigenvalue.  Algebraic
    // multiplicity one forces a single 1x1 block, so only repeated roots
    // need the rank certificate.
    for (const auto& [c, e] : sp.roots) {
        if (e == 1) continue;
        Matrix<T> shifted =
            M + scale(Matrix<T>::identity(static_cast<std::size_t>(n), M.proto()), -c);
        std::size_t rk = 0;
        try {
            rk = rank(shifted);
        } catch (const insufficient_precision& ex) {
            out.status = Tri::unknown;
            out.reason = ex.what();
            return out;
        }
        if (rk == static_cast<std::size_t>(n))
            throw std::logic_error("has_kth_root: split produced a non-eigenvalue");
        if (rk + 1 < static_cast<std::size_t>(n)) {
            out.status = Tri::unknown;
            out.reason =
                "derogatory spectrum (an eigenvalue with several Jordan blocks): the "
                "centralizer exceeds the polynomial algebra";
            return out;
        }
    }

    // characteristic p: p-th powers truncate principal nilpotents, so a wild
    // exponent is incompatible with any nontrivial Jordan block
    if (ch > 0 && k % Integer(ch) == 0) {
        for (const auto& [c, e] : sp.roots) {
            if (e >= 2) {
                out.status = Tri::no;
                out.reason = "eigenvalue " + to_display(c) + " has a Jordan block of size " +
                             std::to_string(e) + " and p | k: p-th powers land in the square "
                             "of the nilpotent ideal";
                return out;
            }
        }
    }

    // per-eigenvalue scalar decisions, sound in both directions here
    int digits = 0;
    for (const auto& [c, e] : sp.roots) {
        RootDecision d{false, 0};
        try {
            d = scalar_root_decision(c, k);
        } catch (const insufficient_precision& ex) {
            out.status = Tri::unknown;
            out.reason = ex.what();
            out.digits_used = digits;
            return out;
        }
        digits = std::max(digits, d.digits_used);
        if (!d.exists) {
            out.status = Tri::no;
            out.digits_used = digits;
            out.reason = "eigenvalue " + to_display(c) + " has no k-th root in the base field";
            return out;
        }
    }
    out.digits_used = digits;

    // existence settled; assemble the witness inside F[M]
    out.status = Tri::yes;
    try {
        std::vector<std::tuple<T, std::int64_t, Polynomial<T>>> parts;
        for (const auto& [c, e] : sp.roots) {
            auto s = scalar_root(c, k);
            if (!s) {
                out.reason = "root exists; scalar witness construction exceeded precision";
                return out;
            }
            std::optional<Polynomial<T>> y;
            if (e == 1) {
                y = poly_constant(*s);
            } else {
                y = detail::factor_kth_root(c, e, k, *s);
                if (!y) {
                    out.reason = "root exists; Jordan-block lift exceeded precision";
                    return out;
                }
            }
            parts.emplace_back(c, e, *y);
        }
        auto ypoly = detail::crt_root(parts);
        Matrix<T> W = poly_eval_matrix(ypoly, M);
        Tri ok = tri_eq_matrix(power_map(W, k), M);
        if (ok == Tri::no) throw std::logic_error("has_kth_root: witness verification failed");
        out.root = W;
        out.reason = ok == Tri::yes ? "witness in F[M] verified"
                                    : "witness in F[M]; verification saturated the precision";
    } catch (const insufficient_precision& e) {
        out.reason = std::string("root exists; witness assembly exceeded precision: ") + e.what();
    }
    return out;
}

// ===========================================================================
// Roots of every order: density of the power-image intersection.
// ===========================================================================

struct BlockedOrder {
    Integer k;
    bool verified;  // true when has_kth_root certified the refusal
    std::string reason;
};

template <class T>
struct AllOrdersReport {
    Tri all_orders = Tri::unknown;
    std::string reason;
    std::optional<BlockedOrder> blocked;   // present when all_orders == no
    std::optional<Matrix<T>> direction;    // log witness when dense in characteristic 0
};

namespace detail {

inline Fq residue_field_of(const PadicScalar& x) { return Fq::prime_field(x.profile().p); }
inline const Fq& residue_field_of(const LaurentScalar& x) { return x.field(); }

inline Fq::Elem residue_coeff(const PadicScalar& x, const Fq& F) {
    if (tri_is_zero(x) == Tri::yes) return F.zero();
    if (x.state() == PadicScalar::State::pseudo_zero) {
        if (x.valuation_lower_bound() >= 1) return F.zero();
        throw insufficient_precision("residue_coeff: unit digit hidden below the window");
    }
    if (x.valuation() >= 1) return F.zero();
    if (x.valuation() < 0) throw std::logic_error("residue_coeff: negative valuation");
    return F.from_int(static_cast<std::int64_t>(x.unit_digits(1)));
}

inline Fq::Elem residue_coeff(const LaurentScalar& x, const Fq&) { return x.coeff_at(0); }

}  // namespace detail

template <class T>
AllOrdersReport<T> roots_all_orders(const Matrix<T>& M) {
    AllOrdersReport<T> rep;
    const std::int64_t n = static_cast<std::int64_t>(M.size());
    auto f = char_poly(M);
    Tri sing = tri_is_zero(f[0]);
    if (sing == Tri::yes) throw std::domain_error("roots_all_orders: matrix is singular");
    if (sing == Tri::unknown)
        throw insufficient_precision("roots_all_orders: determinant indistinguishable from zero");
    const std::int64_t ch = scalar_characteristic(M.proto());
    const Tri uni = detail::unipotent_from_charpoly(f);
    const Tri id = tri_is_identity(M);

    if (ch == 0) {
        if (uni == Tri::yes) {
            rep.all_orders = Tri::yes;
            rep.direction = unipotent_log(M);
            rep.reason = "unipotent: exp(t log M) carries a root of every order";
            return rep;
        }
    } else if (id == Tri::yes) {
        rep.all_orders = Tri::yes;
        rep.reason = "identity: a fixed point of every power map";
        return rep;
    }

    // certified refusals at small prime powers first
    static const std::int64_t probe[] = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32};
    for (std::int64_t kp : probe) {
        RootWitness<T> w;
        try {
            w = has_kth_root(M, Integer(kp));
        } catch (const insufficient_precision&) {
            continue;
        }
        if (w.status == Tri::no) {
            rep.all_orders = Tri::no;
            rep.blocked = BlockedOrder{Integer(kp), true, w.reason};
            rep.reason = "no root of order " + std::to_string(kp);
            return rep;
        }
    }

    NewtonPolygon np;
    try {
        np = newton_polygon(f);
    } catch (const insufficient_precision& e) {
        rep.reason = e.what();
        return rep;
    }
    if (!np.all_slopes_zero()) {
        Rational sl = 0;
        for (const auto& seg : np.segments)
            if (seg.slope != 0) { sl = seg.slope; break; }
        Integer num = abs(rat_num(sl));
        std::int64_t ell = n + 1;
        while (!is_prime_i64(ell) || num % ell == 0) ++ell;
        rep.all_orders = Tri::no;
        rep.blocked = BlockedOrder{
            Integer(ell), false,
            "an eigenvalue has valuation " + to_display(sl) + "; an ell-th root needs an "
            "eigenvalue of valuation with denominator > " + std::to_string(n) +
            ", beyond any degree-" + std::to_string(n) + " spectrum"};
        rep.reason = "non-unit eigenvalue blocks order " + std::to_string(ell);
        return rep;
    }

    // distal: inspect the residue spectrum
    Fq F = detail::residue_field_of(M.proto());
    FqPoly fbar;
    try {
        for (const auto& c : f.c) fbar.push_back(detail::residue_coeff(c, F));
    } catch (const insufficient_precision& e) {
        rep.reason = e.what();
        return rep;
    }
    fbar = fqpoly_trim(F, fbar);
    FqPoly red = fbar;
    const FqPoly y_minus_1{F.neg(F.one()), F.one()};
    while (fqpoly_degree(red) > 0 &&
           F.is_zero(detail::fqpoly_eval(F, red, F.one())))
        red = fqpoly_divexact(F, red, y_minus_1);

    if (fqpoly_degree(red) > 0) {
        // tame obstruction: a residue eigenvalue of order D > 1
        Integer lambda = ambient_power_bound(M).tame_part;
        FqPoly rad = fqpoly_radical(F, red);
        Integer D = lambda;
        for (const Integer& d : divisors_sorted(lambda)) {
            auto pw = fqpoly_y_powmod(F, d, rad);
            if (fqpoly_degree(pw) == 0 && !pw.empty() && F.eq(pw[0], F.one())) {
                D = d;
                break;
            }
        }
        Integer q = 2;
        for (const auto& [pr, e] : factorize(D)) { q = pr; break; }
        std::int64_t j = int_valuation(lambda, q) - int_valuation(D, q) + 1;
        Integer blocked_k = ipow(q, static_cast<std::uint64_t>(j));
        rep.all_orders = Tri::no;
        rep.blocked = BlockedOrder{
            blocked_k, false,
            "residue eigenvalue of multiplicative order " + D.str() + ": iterated " + q.str() +
            "-th roots push the residue order past the ambient bound " + lambda.str()};
        rep.reason = "residue spectrum blocks order " + blocked_k.str();
        return rep;
    }

    // residue-unipotent cases
    if (ch == 0) {
        if (uni != Tri::no) {
            rep.reason = "unipotence undecided at working precision";
            return rep;
        }
        const std::int64_t p = F.p();
        auto h = char_poly(M + scale(Matrix<T>::identity(static_cast<std::size_t>(n),
                                                         M.proto()),
                                     -one_like(M.proto())));
        std::size_t mu = 0;
        while (mu < h.size() && tri_is_zero(h[mu]) == Tri::yes) ++mu;
        if (mu == h.size()) {
            rep.reason = "principal-unit deviation degenerate at working precision";
            return rep;
        }
        Polynomial<T> ht;
        ht.c.assign(h.c.begin() + static_cast<std::ptrdiff_t>(mu), h.c.end());
        NewtonPolygon np2;
        try {
            np2 = newton_polygon(ht);
        } catch (const insufficient_precision& e) {
            rep.reason = e.what();
            return rep;
        }
        Rational w = np2.min_slope();
        if (!(w > 0)) {
            rep.reason = "principal-unit deviation has a non-positive slope; inconsistent window";
            return rep;
        }
        Rational nw = Rational(n) * w;
        Integer j = rat_num(nw) / rat_den(nw) + 1;
        Integer blocked_k = ipow(Integer(p), static_cast<std::uint64_t>(j));
        rep.all_orders = Tri::no;
        rep.blocked = BlockedOrder{
            blocked_k, false,
            "an eigenvalue is a principal unit at distance v = " + to_display(w) +
            " from 1; each p-th root forces distance at least (j+1)/n, so depth " + j.str() +
            " is unreachable"};
        rep.reason = "wild principal-unit obstruction blocks order " + blocked_k.str();
        return rep;
    }

    // characteristic p, residue-unipotent, M != I
    if (id == Tri::unknown) {
        rep.reason = "identity test undecided at working precision";
        return rep;
    }
    const Integer p(ch);
    if (uni == Tri::yes) {
        auto ord = detail::unipotent_order_charp(M, ch);
        if (!ord) {
            rep.reason = "unipotent order undecided at working precision";
            return rep;
        }
        std::int64_t amax = 0;
        Integer acc = 1;
        while (acc < n) { acc *= p; ++amax; }
        std::int64_t a = int_valuation(*ord, p);
        std::int64_t j = amax - a + 1;
        Integer blocked_k = ipow(p, static_cast<std::uint64_t>(j));
        rep.all_orders = Tri::no;
        rep.blocked = BlockedOrder{
            blocked_k, false,
            "unipotent of order p^" + std::to_string(a) + " != I: roots of p-power order "
            "would exceed the dimension-" + std::to_string(n) + " unipotent exponent p^" +
            std::to_string(amax)};
        rep.reason = "finite unipotent order blocks order " + blocked_k.str();
        return rep;
    }
    if (uni == Tri::unknown) {
        rep.reason = "unipotence undecided at working precision";
        return rep;
    }
    auto h = char_poly(M + scale(Matrix<T>::identity(static_cast<std::size_t>(n), M.proto()),
                                 -one_like(M.proto())));
    std::size_t mu = 0;
    while (mu < h.size() && tri_is_zero(h[mu]) == Tri::yes) ++mu;
    if (mu == h.size()) {
        rep.reason = "principal-unit deviation degenerate at working precision";
        return rep;
    }
    Polynomial<T> ht;
    ht.c.assign(h.c.begin() + static_cast<std::ptrdiff_t>(mu), h.c.end());
    NewtonPolygon np2;
    try {
        np2 = newton_polygon(ht);
    } catch (const insufficient_precision& e) {
        rep.reason = e.what();
        return rep;
    }
    Rational w = np2.min_slope();
    if (!(w > 0)) {
        rep.reason = "principal-unit deviation has a non-positive slope; inconsistent window";
        return rep;
    }
    Rational nw = Rational(n) * w;
    std::int64_t j = 1;
    while (Rational(ipow(p, static_cast<std::uint64_t>(j))) <= nw) ++j;
    Integer blocked_k = ipow(p, static_cast<std::uint64_t>(j));
    rep.all_orders = Tri::no;
    rep.blocked = BlockedOrder{
        blocked_k, false,
        "an eigenvalue sits at distance v = " + to_display(w) + " from 1; in characteristic "
        "p a p^j-th root would need distance v/p^j >= 1/" + std::to_string(n)};
    rep.reason = "wild principal-unit obstruction blocks order " + blocked_k.str();
    return rep;
}

// ===========================================================================
// Root towers.
// ===========================================================================

template <class T>
struct TowerStep {
    Integer k;
    Matrix<T> root;
};

template <class T>
struct TowerWitness {
    Matrix<T> base;
    std::vector<TowerStep<T>> steps;  // steps[i].root^k == previous level
};

template <class T>
Tri verify_tower(const TowerWitness<T>& tw) {
    const Matrix<T>* prev = &tw.base;
    Tri all = Tri::yes;
    for (const auto& st : tw.steps) {
        if (st.k <= 0) throw std::invalid_argument("verify_tower: nonpositive exponent");
        Tri t = tri_eq_matrix(power_map(st.root, st.k), *prev);
        if (t == Tri::no) return Tri::no;
        all = tri_and(all, t);
        prev = &st.root;
    }
    return all;
}

template <class T>
struct TowerOutcome {
    Tri status = Tri::unknown;
    std::optional<TowerWitness<T>> tower;  // present when status == yes
    std::size_t stages_built = 0;
    std::string reason;
};

template <class T>
TowerOutcome<T> build_root_tower(const Matrix<T>& M, const std::vector<Integer>& ks) {
    TowerOutcome<T> out;
    TowerWitness<T> tw{M, {}};
    Matrix<T> cur = M;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        RootWitness<T> w;
        try {
            w = has_kth_root(cur, ks[i]);
        } catch (const insufficient_precision& e) {
            out.status = Tri::unknown;
            out.stages_built = tw.steps.size();
            out.reason = "stage " + std::to_string(i + 1) + ": " + e.what();
            return out;
        }
        if (w.status == Tri::no) {
            out.status = Tri::no;
            out.stages_built = tw.steps.size();
            out.reason = "stage " + std::to_string(i + 1) + ": " + w.reason;
            return out;
        }
        if (w.status == Tri::unknown || !w.root) {
            out.status = Tri::unknown;
            out.stages_built = tw.steps.size();
            out.reason = "stage " + std::to_string(i + 1) + ": " +
                         (w.status == Tri::unknown ? w.reason : "witness unavailable: " + w.reason);
            return out;
        }
        tw.steps.push_back({ks[i], *w.root});
        cur = *w.root;
    }
    out.status = Tri::yes;
    out.stages_built = tw.steps.size();
    out.tower = std::move(tw);
    return out;
}

// ===========================================================================
// Cyclic groups: roots inside, and coprimality of orders.
// ===========================================================================

/// In a cyclic group of order d, solve y^(q^k) = g^m for y = g^s: returns the
/// least nonnegative exponent s, or nullopt when no solution exists.
inline std::optional<Integer> cyclic_root(const Integer& d, const Integer& q, std::int64_t k,
                                          const Integer& m = Integer(1)) {
    if (d <= 0) throw std::invalid_argument("cyclic_root: group order must be positive");
    if (q <= 0 || k < 0) throw std::invalid_argument("cyclic_root: invalid exponent data");
    Integer a = powmod(q % d, Integer(k), d);
    Integer G = a == 0 ? d : gcd(a, d);
    Integer mm = ((m % d) + d) % d;
    if (mm % G != 0) return std::nullopt;
    Integer d2 = d / G;
    if (d2 == 1) return Integer(0);
    Integer s = (mm / G) % d2 * mod_inverse(a / G, d2) % d2;
    return s;
}

struct CoprimalityReport {
    Integer d;                               // order of the given element
    Integer q;                               // prime whose powers are extracted
    bool coprime;                            // gcd(q, d) == 1
    bool order_realizable;                   // d divides the ambient torsion exponent
    Integer ambient_exponent;                // torsion exponent bound of the ambient group
    std::optional<Integer> violation_depth;  // least k with no q^k-th root of finite order
    std::string reason;
};

/// The dichotomy for iterated q-th roots of an element of finite order d:
/// coprime orders renew indefinitely inside the cyclic group, while q | d
/// forces the root order's q-valuation to climb by one per stage until it
/// breaks the ambient torsion bound.
inline CoprimalityReport finite_order_coprimality(const Integer& d, const Integer& q,
                                                  const PowerBound& ambient) {
    if (d <= 0) throw std::invalid_argument("finite_order_coprimality: order must be positive");
    if (!is_prime(q)) throw std::invalid_argument("finite_order_coprimality: q must be prime");
    CoprimalityReport r{d, q, gcd(q, d) == 1, ambient.value % d == 0, ambient.value,
                        std::nullopt, ""};
    if (!r.order_realizable) {
        r.violation_depth = Integer(0);
        r.reason = "order " + d.str() + " does not divide the ambient torsion exponent " +
                   ambient.value.str() + ": no such element exists";
        return r;
    }
    if (r.coprime) {
        r.reason = "gcd(q, d) = 1: x -> x^(q^k) permutes the cyclic group of order " + d.str() +
                   ", so an order-preserving root exists at every depth";
    } else {
        std::int64_t vd = int_valuation(d, q);
        std::int64_t vb = int_valuation(ambient.value, q);
        r.violation_depth = Integer(vb - vd + 1);
        r.reason = "q | d: a q^k-th root of finite order has order with q-valuation " +
                   std::to_string(vd) + " + k, capped by " + std::to_string(vb) +
                   " in this group";
    }
    return r;
}

inline CoprimalityReport finite_order_coprimality_padic(const Integer& d, const Integer& q,
                                                        std::int64_t n, std::int64_t p) {
    return finite_order_coprimality(d, q, torsion_exponent_bound_padic(n, p));
}

inline CoprimalityReport finite_order_coprimality_laurent(const Integer& d, const Integer& q,
                                                          std::int64_t n, std::int64_t qsize,
                                                          std::int64_t p) {
    return finite_order_coprimality(d, q, torsion_exponent_bound_laurent(n, qsize, p));
}

}  // namespace localroots
