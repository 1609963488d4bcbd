#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "localroots/errors.hpp"
#include "localroots/numbers.hpp"

namespace localroots {

/// A uniform exponent bound together with the data it was assembled from.
/// `value` = wild_part * tame_part; the tame part collects the orders of the
/// unramified unit groups F_(p^f)^* for residue degrees f up to n, the wild
/// part the largest torsion/ramification power of p compatible with
/// dimension n.
struct PowerBound {
    Integer value;
    Integer wild_part;
    Integer tame_part;
    std::map<Integer, int> factorization;
    std::vector<std::pair<std::int64_t, Integer>> unramified_orders; // (f, p^f - 1)
};

namespace detail {

inline PowerBound assemble_bound(const Integer& wild, std::int64_t base,
                                 std::int64_t n) {
    PowerBound b;
    b.wild_part = wild;
    b.tame_part = 1;
    for (std::int64_t f = 1; f <= n; ++f) {
        Integer qf = ipow(Integer(base), static_cast<std::uint64_t>(f)) - 1;
        b.unramified_orders.push_back({f, qf});
        b.tame_part = lcm(b.tame_part, qf);
    }
    b.value = b.wild_part * b.tame_part;
    b.factorization = factorize(b.value);
    return b;
}

} // namespace detail

/// Characteristic-zero bound R(n, p): if any power of an n x n matrix over
/// Q_p is unipotent then the R-th power is.  R = p^s * lcm{p^f - 1 : f <= n}
/// with s maximal such that phi(p^s) <= n; equivalently the lcm of all m
/// whose primitive m-th roots of unity have degree <= n over Q_p.
inline PowerBound unipotent_power_bound_padic(std::int64_t n, std::int64_t p) {
    if (n < 1) throw std::domain_error("unipotent_power_bound: dimension must be positive");
    if (!is_prime_i64(p)) throw std::domain_error("unipotent_power_bound: p must be prime");
    std::int64_t s = 0;
    // phi(p^(s+1)) = p^s (p-1) <= n ?
    while (true) {
        Integer phi = ipow(Integer(p), static_cast<std::uint64_t>(s)) * (p - 1);
        if (phi > n) break;
        ++s;
    }
    return detail::assemble_bound(ipow(Integer(p), static_cast<std::uint64_t>(s)), p, n);
}

/// Characteristic-p bound R(n, q) over F_q((t)): p^ceil(log_p n) covers the
/// unipotent (p-power) part, lcm{q^f - 1 : f <= n} the semisimple part.
inline PowerBound unipotent_power_bound_laurent(std::int64_t n, std::int64_t q,
                                                std::int64_t p) {
    if (n < 1) throw std::domain_error("unipotent_power_bound: dimension must be positive");
    if (!is_prime_i64(p)) throw std::domain_error("unipotent_power_bound: p must be prime");
    std::int64_t a = 0;
    Integer pa = 1;
    while (pa < n) { pa *= p; ++a; }
    return detail::assemble_bound(ipow(Integer(p), static_cast<std::uint64_t>(a)), q, n);
}

/// Torsion exponent bound: the order of every finite-order element of
/// GL_n(Q_p) divides this.  Coincides with the unipotent power bound (each
/// torsion order is the lcm of root-of-unity orders of degree <= n, and
/// those are exactly the divisors assembled there).
inline PowerBound torsion_exponent_bound_padic(std::int64_t n, std::int64_t p) {
    return unipotent_power_bound_padic(n, p);
}

inline PowerBound torsion_exponent_bound_laurent(std::int64_t n, std::int64_t q,
                                                 std::int64_t p) {
    return unipotent_power_bound_laurent(n, q, p);
}

/// Torsion exponent bound for GL_n(Q): lcm of all m with phi(m) <= n
/// (phi(m) >= sqrt(m/2) gives the finite search range).
inline Integer torsion_exponent_bound_rational(std::int64_t n) {
    if (n < 1) throw std::domain_error("torsion_exponent_bound: dimension must be positive");
    Integer r = 1;
    for (std::int64_t m = 1; m <= 2 * n * n + 2; ++m)
        if (euler_phi(m) <= n) r = lcm(r, Integer(m));
    return r;
}

/// Degree of the m-th cyclotomic extension of Q_p: phi(p^s) * ord_(m') (p)
/// for m = p^s * m'.  Used to cross-check the bound assembly.
inline std::int64_t cyclotomic_degree_padic(std::int64_t m, std::int64_t p) {
    if (m < 1) throw std::domain_error("cyclotomic_degree_padic: m must be positive");
    std::int64_t s = 0, mprime = m;
    while (mprime % p == 0) { mprime /= p; ++s; }
    std::int64_t phi_ps = 1;
    if (s > 0) {
        phi_ps = p - 1;
        for (std::int64_t i = 1; i < s; ++i) phi_ps *= p;
    }
    std::int64_t ord = 1;
    if (mprime > 1)
        ord = static_cast<std::int64_t>(multiplicative_order(Integer(p), Integer(mprime)));
    return phi_ps * ord;
}

} // namespace localroots
