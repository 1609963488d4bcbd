#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "localroots/errors.hpp"
#include "localroots/numbers.hpp"

namespace localroots {

// The compact family S^1 x| Z/nZ, odd components acting by inversion,
// divided by a finite central subgroup Gamma:
//   (alpha, a)(beta, b) = (alpha + (-1)^a beta, a + b).
// Angles are exact rationals mod 1, so equality stays decidable.

struct GammaGenerator {
    Rational angle;          // in {0, 1/2}: the angles fixed by inversion
    std::int64_t component;  // even, so the generator is central
};

struct GroupSpec {
    std::int64_t n = 2;      // even order of the component cyclic group
    GammaGenerator gamma{Rational(0), 0};
};

/// Coset representative, canonicalized to the lexicographically least
/// (component, angle) pair over the Gamma-orbit.
struct GroupElement {
    Rational angle;          // in [0, 1)
    std::int64_t component;  // in [0, n)

    bool operator==(const GroupElement& o) const {
        return component == o.component && angle == o.angle;
    }
    bool operator<(const GroupElement& o) const {
        if (component != o.component) return component < o.component;
        return angle < o.angle;
    }
};

inline Rational angle_mod_1(const Rational& r) {
    Integer f = floor_div(rat_num(r), rat_den(r));
    return r - Rational(f);
}

inline void validate(const GroupSpec& spec) {
    if (spec.n <= 0 || spec.n % 2 != 0)
        throw parse_error("group spec: n must be a positive even integer");
    Rational a = angle_mod_1(spec.gamma.angle);
    if (a != 0 && a != Rational(1, 2))
        throw parse_error("group spec: gamma angle must be 0 or 1/2 (fixed by inversion)");
    std::int64_t c = ((spec.gamma.component % spec.n) + spec.n) % spec.n;
    if (c % 2 != 0)
        throw parse_error("group spec: gamma component must be even (central)");
}

/// All elements of the central subgroup Gamma, as raw (angle, component) pairs.
inline std::vector<GroupElement> gamma_subgroup(const GroupSpec& spec) {
    validate(spec);
    Rational ga = angle_mod_1(spec.gamma.angle);
    std::int64_t gc = ((spec.gamma.component % spec.n) + spec.n) % spec.n;
    std::vector<GroupElement> out;
    Rational a(0);
    std::int64_t c = 0;
    do {
        out.push_back({a, c});
        a = angle_mod_1(a + ga);
        c = (c + gc) % spec.n;
        if (static_cast<std::int64_t>(out.size()) > 2 * spec.n + 2)
            throw std::logic_error("gamma_subgroup: generator failed to close");
    } while (!(a == 0 && c == 0));
    return out;
}

inline GroupElement canonical(const GroupElement& raw, const GroupSpec& spec) {
    // Gamma is central, so left and right cosets agree; gamma components are
    // even, so the coset is plain (angle, component)-translation
    GroupElement norm{angle_mod_1(raw.angle),
                      ((raw.component % spec.n) + spec.n) % spec.n};
    GroupElement best = norm;
    for (const auto& g : gamma_subgroup(spec)) {
        GroupElement cand{angle_mod_1(norm.angle + g.angle),
                          (norm.component + g.component) % spec.n};
        if (cand < best) best = cand;
    }
    return best;
}

inline GroupElement identity_element(const GroupSpec& spec) {
    return canonical({Rational(0), 0}, spec);
}

inline GroupElement multiply(const GroupElement& x, const GroupElement& y,
                             const GroupSpec& spec) {
    Rational beta = x.component % 2 == 0 ? y.angle : -y.angle;
    return canonical({angle_mod_1(x.angle + beta), (x.component + y.component) % spec.n},
                     spec);
}

inline GroupElement element_inverse(const GroupElement& x, const GroupSpec& spec) {
    // (alpha, a)^-1 = (-(-1)^a alpha, -a)
    Rational a = x.component % 2 == 0 ? -x.angle : x.angle;
    return canonical({angle_mod_1(a), (spec.n - x.component) % spec.n}, spec);
}

inline GroupElement element_power(const GroupElement& x, Integer e, const GroupSpec& spec) {
    GroupElement base = e < 0 ? element_inverse(x, spec) : canonical(x, spec);
    if (e < 0) e = -e;
    GroupElement acc = identity_element(spec);
    while (e > 0) {
        if (e % 2 == 1) acc = multiply(acc, base, spec);
        base = multiply(base, base, spec);
        e /= 2;
    }
    return acc;
}

/// Exact order of a coset; every element of this family is torsion modulo the
/// circle, and rational angles make the full element torsion.
inline Integer element_order(const GroupElement& x, const GroupSpec& spec) {
    GroupElement g = canonical(x, spec);
    GroupElement id = identity_element(spec);
    GroupElement acc = g;
    Integer ord = 1;
    Integer cap = Integer(4) * spec.n * Integer(rat_den(g.angle) + 1) + 8;
    while (!(acc == id)) {
        acc = multiply(acc, g, spec);
        ++ord;
        if (ord > cap) throw std::logic_error("element_order: unexpectedly unbounded");
    }
    return ord;
}

/// Order of the component group of G/Gamma: the subgroup generated by the
/// gamma component swallows part of Z/nZ.
inline std::int64_t component_group_order(const GroupSpec& spec) {
    validate(spec);
    std::int64_t c = ((spec.gamma.component % spec.n) + spec.n) % spec.n;
    Integer g = gcd(Integer(spec.n), Integer(c));
    return static_cast<std::int64_t>(g);
}

struct CartanClass {
    enum class Kind { torus, cyclic };
    Kind kind = Kind::torus;
    Integer order = 0;           // cyclic case only
    GroupElement representative{Rational(0), 0};
};

/// Conjugacy classes of Cartan subgroups: the identity-component circle, plus
/// the cyclic groups generated by inversion components.  Conjugating (z, c)
/// with c odd by (w, 0) sends z to z + 2w, so every such generator is
/// conjugate to (0, c); distinct c may still generate the same subgroup, so
/// classes are deduplicated by their element sets.
inline std::vector<CartanClass> cartan_classes(const GroupSpec& spec) {
    validate(spec);
    std::vector<CartanClass> out;
    out.push_back({CartanClass::Kind::torus, Integer(0), identity_element(spec)});
    std::set<std::vector<std::pair<std::int64_t, Rational>>> seen;
    for (std::int64_t c = 1; c < spec.n; c += 2) {
        GroupElement rep = canonical({Rational(0), c}, spec);
        GroupElement id = identity_element(spec);
        std::vector<std::pair<std::int64_t, Rational>> key;
        GroupElement acc = id;
        Integer ord = 0;
        do {
            key.emplace_back(acc.component, acc.angle);
            acc = multiply(acc, rep, spec);
            ++ord;
        } while (!(acc == id));
        std::sort(key.begin(), key.end());
        if (seen.insert(key).second)
            out.push_back({CartanClass::Kind::cyclic, ord, rep});
    }
    return out;
}

inline bool pk_surjective_on_class(const CartanClass& cls, const Integer& k) {
    if (k < 1) throw std::invalid_argument("pk_surjective_on_class: k must be >= 1");
    if (cls.kind == CartanClass::Kind::torus) return true;  // the circle is divisible
    return gcd(k, cls.order) == 1;
}

/// Density of the k-th power map on G/Gamma: surjectivity on every Cartan
/// class is equivalent to it.
inline bool is_power_dense(const GroupSpec& spec, const Integer& k) {
    if (k < 1) throw std::invalid_argument("is_power_dense: k must be >= 1");
    for (const auto& cls : cartan_classes(spec))
        if (!pk_surjective_on_class(cls, k)) return false;
    return true;
}

/// Independent criterion: density is coprimality of k with the component
/// group order.
inline bool density_gcd_oracle(const GroupSpec& spec, const Integer& k) {
    if (k < 1) throw std::invalid_argument("density_gcd_oracle: k must be >= 1");
    return gcd(k, Integer(component_group_order(spec))) == 1;
}

}  // namespace localroots
