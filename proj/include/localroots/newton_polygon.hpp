#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "localroots/errors.hpp"
#include "localroots/matrix.hpp"
#include "localroots/numbers.hpp"
#include "localroots/padic.hpp"
#include "localroots/laurent.hpp"
#include "localroots/polynomial.hpp"

namespace localroots {

/// One slope of a Newton polygon.  The slope is reported as the common
/// valuation of the eigenvalues it accounts for (the negated gradient of the
/// lower hull), and the multiplicity is the number of such eigenvalues.
struct NewtonSegment {
    Rational slope;
    std::int64_t multiplicity;

    bool operator==(const NewtonSegment& o) const {
        return slope == o.slope && multiplicity == o.multiplicity;
    }
};

/// Newton polygon of a monic polynomial, segments in increasing slope order.
struct NewtonPolygon {
    std::vector<NewtonSegment> segments;
    std::int64_t degree = 0;

    /// All slopes zero: every root is a unit.
    bool all_slopes_zero() const {
        for (const auto& s : segments)
            if (s.slope != 0) return false;
        return true;
    }

    Rational max_slope() const {
        if (segments.empty()) throw std::logic_error("NewtonPolygon: empty");
        return segments.back().slope;
    }
    Rational min_slope() const {
        if (segments.empty()) throw std::logic_error("NewtonPolygon: empty");
        return segments.front().slope;
    }
};

namespace detail {

/// Hull computation from coefficient valuations.  `vals[i]` is v(a_i); a
/// disengaged optional means a_i = 0 exactly.  `lower_bounds[i]` is used for
/// coefficients known only to vanish up to some level: the polygon is
/// returned only if such coefficients certainly cannot cut the hull,
/// otherwise insufficient_precision is raised.
inline NewtonPolygon polygon_from_valuations(
    const std::vector<std::optional<std::int64_t>>& vals,
    const std::vector<std::optional<std::int64_t>>& lower_bounds) {
    std::int64_t n = static_cast<std::int64_t>(vals.size()) - 1;
    if (n < 1) throw std::domain_error("newton_polygon: polynomial must be non-constant");
    if (!vals[0].has_value() && !lower_bounds[0].has_value())
        throw std::domain_error("newton_polygon: zero constant term (0 is a root)");
    if (!vals[static_cast<std::size_t>(n)].has_value())
        throw std::logic_error("newton_polygon: non-monic input");
    if (!vals[0].has_value())
        throw insufficient_precision(
            "newton_polygon: constant term indistinguishable from zero");

    // lower convex hull of the known points (i, v_i), left to right
    std::vector<std::pair<std::int64_t, std::int64_t>> pts;
    for (std::int64_t i = 0; i <= n; ++i)
        if (vals[static_cast<std::size_t>(i)])
            pts.push_back({i, *vals[static_cast<std::size_t>(i)]});
    std::vector<std::pair<std::int64_t, std::int64_t>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            // pop while the middle point is above or on the new chord
            auto [x1, y1] = hull[hull.size() - 2];
            auto [x2, y2] = hull[hull.size() - 1];
            auto [x3, y3] = pt;
            // cross product of (p2-p1, p3-p1); >= 0 keeps the hull convex
            __int128 cr = static_cast<__int128>(x2 - x1) * (y3 - y1) -
                          static_cast<__int128>(y2 - y1) * (x3 - x1);
            if (cr <= 0) hull.pop_back();
            else break;
        }
        hull.push_back(pt);
    }

    // a pseudo-zero coefficient with lower bound A at position i must lie on
    // or above the hull, else the polygon is not determined
    auto hull_height = [&](std::int64_t x) -> Rational {
        for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
            auto [x1, y1] = hull[s];
            auto [x2, y2] = hull[s + 1];
            if (x1 <= x && x <= x2)
                return Rational(y1) + Rational(y2 - y1) * Rational(x - x1) / Rational(x2 - x1);
        }
        throw std::logic_error("newton_polygon: hull interpolation out of range");
    };
    for (std::int64_t i = 0; i <= n; ++i) {
        if (vals[static_cast<std::size_t>(i)]) continue;
        if (!lower_bounds[static_cast<std::size_t>(i)]) continue; // exact zero: no point
        if (Rational(*lower_bounds[static_cast<std::size_t>(i)]) < hull_height(i))
            throw insufficient_precision(
                "newton_polygon: coefficient " + std::to_string(i) +
                " known only as a deep zero could cut the hull");
    }

    NewtonPolygon np;
    np.degree = n;
    for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
        auto [x1, y1] = hull[s];
        auto [x2, y2] = hull[s + 1];
        NewtonSegment seg{Rational(y1 - y2) / Rational(x2 - x1), x2 - x1};
        np.segments.push_back(seg);
    }
    // hull gradients increase left to right, so slopes as defined decrease;
    // report them ascending
    std::reverse(np.segments.begin(), np.segments.end());
    return np;
}

} // namespace detail

inline NewtonPolygon newton_polygon(const Polynomial<Rational>& f, std::int64_t p) {
    std::vector<std::optional<std::int64_t>> vals, lbs;
    for (const auto& c : f.c) {
        if (c == 0) vals.push_back(std::nullopt);
        else vals.push_back(rational_valuation(c, Integer(p)));
        lbs.push_back(std::nullopt);
    }
    return detail::polygon_from_valuations(vals, lbs);
}

inline NewtonPolygon newton_polygon(const Polynomial<PadicScalar>& f) {
    std::vector<std::optional<std::int64_t>> vals, lbs;
    for (const auto& c : f.c) {
        switch (c.state()) {
        case PadicScalar::State::exact:
            if (c.is_exact_zero()) { vals.push_back(std::nullopt); lbs.push_back(std::nullopt); }
            else { vals.push_back(c.valuation()); lbs.push_back(std::nullopt); }
            break;
        case PadicScalar::State::window:
            vals.push_back(c.valuation());
            lbs.push_back(std::nullopt);
            break;
        default:
            vals.push_back(std::nullopt);
            lbs.push_back(c.valuation_lower_bound());
        }
    }
    return detail::polygon_from_valuations(vals, lbs);
}

inline NewtonPolygon newton_polygon(const Polynomial<LaurentScalar>& f) {
    std::vector<std::optional<std::int64_t>> vals, lbs;
    for (const auto& c : f.c) {
        switch (c.state()) {
        case LaurentScalar::State::exact:
            if (c.is_exact_zero()) { vals.push_back(std::nullopt); lbs.push_back(std::nullopt); }
            else { vals.push_back(c.valuation()); lbs.push_back(std::nullopt); }
            break;
        case LaurentScalar::State::window:
            vals.push_back(c.valuation());
            lbs.push_back(std::nullopt);
            break;
        default:
            vals.push_back(std::nullopt);
            lbs.push_back(c.valuation_lower_bound());
        }
    }
    return detail::polygon_from_valuations(vals, lbs);
}

// ---------------------------------------------------------------------------
// Spectral predicates
// ---------------------------------------------------------------------------

/// A matrix is distal when every eigenvalue is a unit: all Newton polygon
/// slopes of its characteristic polynomial vanish.  (The polygon constructor
/// already rejects singular matrices.)
template <class T>
bool is_distal(const Matrix<T>& M) {
    return newton_polygon(char_poly(M)).all_slopes_zero();
}

inline bool is_distal_rational(const Matrix<Rational>& M, std::int64_t p) {
    return newton_polygon(char_poly(M), p).all_slopes_zero();
}

/// Three-valued unipotence test: characteristic polynomial equals (x-1)^n.
template <class T>
Tri is_unipotent_tri(const Matrix<T>& M) {
    std::size_t n = M.size();
    Polynomial<T> f = char_poly(M);
    Polynomial<T> target = poly_constant(one_like(M.proto()));
    Polynomial<T> xm1{{-one_like(M.proto()), one_like(M.proto())}};
    for (std::size_t i = 0; i < n; ++i) target = poly_mul(target, xm1);
    return poly_tri_eq(f, target);
}

/// Decided unipotence; raises insufficient_precision on windowed ties.
template <class T>
bool is_unipotent(const Matrix<T>& M) {
    return require_decided(is_unipotent_tri(M), "characteristic polynomial = (x-1)^n");
}

} // namespace localroots
