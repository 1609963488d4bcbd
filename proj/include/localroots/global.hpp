#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "localroots/errors.hpp"
#include "localroots/matrix.hpp"
#include "localroots/matrix_roots.hpp"
#include "localroots/numbers.hpp"
#include "localroots/padic.hpp"
#include "localroots/power_bounds.hpp"
#include "localroots/unipotent.hpp"

namespace localroots {

/// A rational matrix viewed inside Q_p, entrywise.
inline Matrix<PadicScalar> embed_matrix(const Matrix<Rational>& M, const PadicProfile& prof) {
    Matrix<PadicScalar> out(M.size(), PadicScalar::zero(prof));
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t j = 0; j < M.size(); ++j)
            out.at(i, j) = PadicScalar::from_rational(M.at(i, j), prof);
    return out;
}

struct PrimeEntry {
    std::int64_t prime = 0;
    bool distal = false;
    std::optional<Integer> exponent;  // least r with M^r unipotent in Q_p
};

struct GlobalReport {
    std::string id;
    std::vector<PrimeEntry> primes;
    bool unipotent = false;
    std::optional<Integer> common_exponent;
    Tri all_orders = Tri::unknown;
    std::string all_orders_reason;
    std::optional<Integer> order;  // finite multiplicative order, when it exists
    Integer torsion_bound = 1;
};

/// Runs the unipotent-power analysis in every requested completion.  The
/// characteristic polynomial is rational, so any exponents found must agree;
/// a mismatch would falsify the embedding argument and aborts loudly.
inline GlobalReport global_unipotent_power(const Matrix<Rational>& M,
                                           const std::vector<std::int64_t>& primes,
                                           int precision = 64,
                                           const std::string& id = "") {
    if (primes.empty())
        throw std::invalid_argument("global_unipotent_power: prime list must be nonempty");
    auto f = char_poly(M);
    if (f[0] == 0) throw std::domain_error("global_unipotent_power: matrix is singular");
    GlobalReport rep;
    rep.id = id;
    const std::int64_t n = static_cast<std::int64_t>(M.size());
    rep.unipotent = detail::unipotent_from_charpoly(f) == Tri::yes;
    rep.torsion_bound = torsion_exponent_bound_rational(n);
    rep.order = matrix_order(M);
    for (std::int64_t p : primes) {
        if (!is_prime_i64(p))
            throw std::invalid_argument("global_unipotent_power: " + std::to_string(p) +
                                        " is not prime");
        PadicProfile prof{p, precision};
        Matrix<PadicScalar> Mp = embed_matrix(M, prof);
        PrimeEntry e;
        e.prime = p;
        e.distal = is_distal_rational(M, p);
        e.exponent = unipotent_power_exponent(Mp);
        if (e.exponent) {
            if (rep.common_exponent && *rep.common_exponent != *e.exponent)
                throw std::logic_error(
                    "global_unipotent_power: exponent disagrees across completions");
            rep.common_exponent = e.exponent;
        }
        rep.primes.push_back(std::move(e));
    }
    // an exponent present at one prime must be present at all of them
    for (const auto& e : rep.primes)
        if (rep.common_exponent && !e.exponent)
            throw std::logic_error(
                "global_unipotent_power: exponent existence disagrees across completions");
    return rep;
}

struct GlobalAllOrders {
    bool all_orders = false;
    std::string reason;
    std::optional<BlockedOrder> blocked;            // local refusal certificate
    std::int64_t certificate_prime = 0;             // completion providing it
    std::optional<Matrix<Rational>> direction;      // log witness on yes
};

/// Roots of every order over Q are decided by unipotence: the log/exp witness
/// is rational.  Non-unipotent matrices are refused, with a blocking order
/// certified in some completion when one of the probed primes yields it.
inline GlobalAllOrders global_roots_all_orders(const Matrix<Rational>& M,
                                               int precision = 64) {
    auto f = char_poly(M);
    if (f[0] == 0) throw std::domain_error("global_roots_all_orders: matrix is singular");
    GlobalAllOrders out;
    if (detail::unipotent_from_charpoly(f) == Tri::yes) {
        out.all_orders = true;
        out.direction = unipotent_log(M);
        out.reason = "unipotent: exp(t log M) interpolates rational roots of every order";
        return out;
    }
    out.all_orders = false;
    out.reason = "not unipotent: some completion refuses a root order";
    for (std::int64_t p : {2, 3, 5, 7, 11, 13}) {
        PadicProfile prof{p, precision};
        AllOrdersReport<PadicScalar> rep = roots_all_orders(embed_matrix(M, prof));
        if (rep.all_orders == Tri::no && rep.blocked) {
            out.blocked = rep.blocked;
            out.certificate_prime = p;
            out.reason = "blocked in Q_" + std::to_string(p) + ": " + rep.blocked->reason;
            break;
        }
    }
    return out;
}

template <class T>
struct OrderCoprimality {
    Integer order = 1;                  // verified finite order of the matrix
    Integer q = 2;
    bool consistent = false;            // gcd(order, q) == 1
    Integer ambient_exponent = 1;       // torsion exponent of the ambient group
    std::optional<Integer> violation_depth;
    std::vector<std::pair<Integer, Matrix<T>>> witnesses;  // (q^k, W) with W^(q^k) = M
    std::string reason;
};

namespace detail {

template <class T>
OrderCoprimality<T> order_coprimality_impl(const Matrix<T>& M, const Integer& d,
                                           const Integer& q, std::int64_t depth,
                                           const Integer& ambient) {
    OrderCoprimality<T> out;
    out.order = d;
    out.q = q;
    out.ambient_exponent = ambient;
    out.consistent = gcd(d, q) == 1;
    if (!out.consistent) {
        std::int64_t vd = int_valuation(d, q);
        std::int64_t vb = int_valuation(ambient, q);
        out.violation_depth = Integer(vb - vd + 1);
        out.reason = "q divides the order: a q^k-th root of finite order has order with "
                     "q-valuation " + std::to_string(vd) + " + k, capped by " +
                     std::to_string(vb) + " in this group";
        return out;
    }
    out.reason = "order " + d.str() + " is coprime to " + q.str() +
                 ": roots of every q-power depth exist inside the cyclic group";
    for (std::int64_t k = 1; k <= depth; ++k) {
        auto s = cyclic_root(d, q, k);
        if (!s) throw std::logic_error("order_coprimality: coprime case must be solvable");
        Matrix<T> W = power_map(M, *s);
        Integer qk = ipow(q, static_cast<std::uint64_t>(k));
        if (tri_eq_matrix(power_map(W, qk), M) != Tri::yes)
            throw std::logic_error("order_coprimality: witness failed verification");
        out.witnesses.emplace_back(qk, std::move(W));
    }
    return out;
}

}  // namespace detail

/// Iterated q-th roots of a finite-order rational matrix: coprime orders renew
/// forever (witnesses included up to the requested depth); otherwise the depth
/// at which finite-order roots die is reported.
inline OrderCoprimality<Rational> finite_order_coprimality(const Matrix<Rational>& M,
                                                           const Integer& q,
                                                           std::int64_t depth) {
    if (!is_prime(q))
        throw std::invalid_argument("finite_order_coprimality: q must be prime");
    if (depth < 0) throw std::invalid_argument("finite_order_coprimality: negative depth");
    auto d = matrix_order(M);
    if (!d) throw std::domain_error("finite_order_coprimality: matrix has infinite order");
    return detail::order_coprimality_impl(
        M, *d, q, depth, torsion_exponent_bound_rational(static_cast<std::int64_t>(M.size())));
}

inline OrderCoprimality<LaurentScalar> finite_order_coprimality(const Matrix<LaurentScalar>& M,
                                                                const Integer& q,
                                                                std::int64_t depth) {
    if (!is_prime(q))
        throw std::invalid_argument("finite_order_coprimality: q must be prime");
    if (depth < 0) throw std::invalid_argument("finite_order_coprimality: negative depth");
    auto d = matrix_order(M);
    if (!d) throw std::domain_error("finite_order_coprimality: matrix has infinite order");
    const Fq& F = M.proto().field();
    std::int64_t qsize = 1;
    for (std::int64_t i = 0; i < F.s(); ++i) qsize *= F.p();
    auto B = torsion_exponent_bound_laurent(static_cast<std::int64_t>(M.size()), qsize, F.p());
    return detail::order_coprimality_impl(M, *d, q, depth, B.value);
}

}  // namespace localroots
