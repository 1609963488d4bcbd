#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "localroots/global.hpp"
#include "localroots/matrix_roots.hpp"
#include "localroots/unipotent.hpp"

using namespace localroots;

namespace {

Matrix<Rational> ratmat(std::vector<std::vector<Rational>> rows) {
    Matrix<Rational> M(rows.size(), Rational(0));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) M.at(i, j) = rows[i][j];
    return M;
}

Matrix<Rational> companion_phi5() {
    // companion of x^4 + x^3 + x^2 + x + 1; multiplicative order 5
    Matrix<Rational> C(4, Rational(0));
    for (std::size_t i = 1; i < 4; ++i) C.at(i, i - 1) = Rational(1);
    for (std::size_t i = 0; i < 4; ++i) C.at(i, 3) = Rational(-1);
    return C;
}

}  // namespace

TEST_CASE("per-prime embedding preserves arithmetic") {
    auto M = ratmat({{Rational(7) / 3, Rational(1)}, {Rational(0), Rational(2)}});
    PadicProfile prof{5, 32};
    auto E = embed_matrix(M, prof);
    REQUIRE(tri_eq(E.at(0, 0), PadicScalar::from_rational(Rational(7) / 3, prof)) == Tri::yes);
    REQUIRE(tri_eq_matrix(E * E, embed_matrix(M * M, prof)) == Tri::yes);
}

TEST_CASE("unipotent power exponents agree across completions") {
    SECTION("identity") {
        auto I = Matrix<Rational>::identity(2, Rational(1));
        auto rep = global_unipotent_power(I, {2, 3, 5}, 48, "ident");
        REQUIRE(rep.id == "ident");
        REQUIRE(rep.unipotent);
        REQUIRE(rep.common_exponent);
        REQUIRE(*rep.common_exponent == 1);
        REQUIRE(rep.primes.size() == 3);
        for (const auto& e : rep.primes) {
            REQUIRE(e.distal);
            REQUIRE(e.exponent);
            REQUIRE(*e.exponent == 1);
        }
        REQUIRE(rep.order);
        REQUIRE(*rep.order == 1);
        REQUIRE(rep.torsion_bound == 12);
    }
    SECTION("quarter turn has exponent 4 everywhere") {
        auto R = ratmat({{Rational(0), Rational(-1)}, {Rational(1), Rational(0)}});
        auto rep = global_unipotent_power(R, {3, 5, 7}, 48);
        REQUIRE_FALSE(rep.unipotent);
        REQUIRE(rep.common_exponent);
        REQUIRE(*rep.common_exponent == 4);
        for (const auto& e : rep.primes) {
            REQUIRE(e.distal);
            REQUIRE(e.exponent);
            REQUIRE(*e.exponent == 4);
        }
        REQUIRE(rep.order);
        REQUIRE(*rep.order == 4);
    }
    SECTION("diag(2,1): no unipotent power, distality depends on the prime") {
        auto D = ratmat({{Rational(2), Rational(0)}, {Rational(0), Rational(1)}});
        auto rep = global_unipotent_power(D, {2, 3, 5}, 48);
        REQUIRE_FALSE(rep.unipotent);
        REQUIRE_FALSE(rep.common_exponent);
        REQUIRE_FALSE(rep.primes[0].distal);  // v_2(2) = 1
        REQUIRE(rep.primes[1].distal);
        REQUIRE(rep.primes[2].distal);
        for (const auto& e : rep.primes) REQUIRE_FALSE(e.exponent);
        REQUIRE_FALSE(rep.order);
    }
    SECTION("any exponent divides the per-prime power bound") {
        auto R = ratmat({{Rational(0), Rational(-1)}, {Rational(1), Rational(0)}});
        auto rep = global_unipotent_power(R, {2, 3, 5, 7, 11}, 48);
        for (const auto& e : rep.primes) {
            REQUIRE(e.exponent);
            auto bound = unipotent_power_bound_padic(2, e.prime).value;
            REQUIRE(bound % *e.exponent == 0);
        }
    }
    SECTION("input validation") {
        auto I = Matrix<Rational>::identity(2, Rational(1));
        REQUIRE_THROWS_AS(global_unipotent_power(I, {}), std::invalid_argument);
        REQUIRE_THROWS_AS(global_unipotent_power(I, {4}), std::invalid_argument);
        auto S = ratmat({{Rational(0), Rational(0)}, {Rational(0), Rational(1)}});
        REQUIRE_THROWS_AS(global_unipotent_power(S, {2}), std::domain_error);
    }
}

TEST_CASE("roots of all orders over the rationals") {
    SECTION("unipotent shear: yes, with a rational log witness") {
        auto U = ratmat({{Rational(1), Rational(1)}, {Rational(0), Rational(1)}});
        auto g = global_roots_all_orders(U);
        REQUIRE(g.all_orders);
        REQUIRE(g.direction);
        REQUIRE(g.direction->at(0, 1) == 1);
        REQUIRE(g.direction->at(0, 0) == 0);
        for (std::int64_t k = 1; k <= 10; ++k) {
            auto W = unipotent_kth_root(U, Integer(k));
            REQUIRE(tri_eq_matrix(power_map(W, Integer(k)), U) == Tri::yes);
        }
    }
    SECTION("diag(4,1): refused with a local blocking certificate") {
        auto D = ratmat({{Rational(4), Rational(0)}, {Rational(0), Rational(1)}});
        auto g = global_roots_all_orders(D);
        REQUIRE_FALSE(g.all_orders);
        REQUIRE(g.blocked);
        REQUIRE(g.certificate_prime != 0);
        // the local certificate must hold over Q too
        REQUIRE(has_kth_root(D, g.blocked->k).status != Tri::yes);
        if (g.blocked->verified) {
            auto E = embed_matrix(D, PadicProfile{g.certificate_prime, 64});
            REQUIRE(has_kth_root(E, g.blocked->k).status == Tri::no);
        }
    }
    SECTION("-I: finite order but not unipotent, still refused") {
        auto nI = ratmat({{Rational(-1), Rational(0)}, {Rational(0), Rational(-1)}});
        auto g = global_roots_all_orders(nI);
        REQUIRE_FALSE(g.all_orders);
        REQUIRE(g.blocked);
        REQUIRE(has_kth_root(nI, g.blocked->k).status != Tri::yes);
    }
    SECTION("verdict equals unipotence on a mixed family") {
        std::vector<std::pair<Matrix<Rational>, bool>> cases = {
            {Matrix<Rational>::identity(3, Rational(1)), true},
            {ratmat({{Rational(1), Rational(5)}, {Rational(0), Rational(1)}}), true},
            {ratmat({{Rational(2), Rational(0)}, {Rational(0), Rational(1)}}), false},
            {ratmat({{Rational(0), Rational(-1)}, {Rational(1), Rational(0)}}), false},
            {companion_phi5(), false},
        };
        for (const auto& [M, want] : cases)
            REQUIRE(global_roots_all_orders(M).all_orders == want);
    }
}

TEST_CASE("finite order versus prime power towers over Q") {
    SECTION("order 5 against q = 2: coprime, witnesses at every depth") {
        auto C = companion_phi5();
        auto rep = finite_order_coprimality(C, Integer(2), 4);
        REQUIRE(rep.order == 5);
        REQUIRE(rep.consistent);
        REQUIRE(rep.witnesses.size() == 4);
        for (const auto& [qk, W] : rep.witnesses) {
            REQUIRE(tri_eq_matrix(power_map(W, qk), C) == Tri::yes);
            auto d = matrix_order(W);
            REQUIRE(d);
            REQUIRE(*d == 5);  // witnesses stay in the cyclic group generated by C
        }
        REQUIRE_FALSE(rep.violation_depth);
    }
    SECTION("order 4 against q = 3: coprime") {
        auto R = ratmat({{Rational(0), Rational(-1)}, {Rational(1), Rational(0)}});
        auto rep = finite_order_coprimality(R, Integer(3), 3);
        REQUIRE(rep.consistent);
        REQUIRE(rep.witnesses.size() == 3);
        for (const auto& [qk, W] : rep.witnesses)
            REQUIRE(tri_eq_matrix(power_map(W, qk), R) == Tri::yes);
    }
    SECTION("order 2 against q = 2: violated at the predicted depth") {
        auto nI = ratmat({{Rational(-1), Rational(0)}, {Rational(0), Rational(-1)}});
        auto rep = finite_order_coprimality(nI, Integer(2), 4);
        REQUIRE(rep.order == 2);
        REQUIRE_FALSE(rep.consistent);
        REQUIRE(rep.ambient_exponent == 12);
        REQUIRE(rep.violation_depth);
        REQUIRE(*rep.violation_depth == 2);  // v_2(12) - v_2(2) + 1
        REQUIRE(rep.witnesses.empty());
    }
    SECTION("order 4 against q = 2: violated immediately") {
        auto R = ratmat({{Rational(0), Rational(-1)}, {Rational(1), Rational(0)}});
        auto rep = finite_order_coprimality(R, Integer(2), 4);
        REQUIRE_FALSE(rep.consistent);
        REQUIRE(rep.violation_depth);
        REQUIRE(*rep.violation_depth == 1);  // v_2(12) - v_2(4) + 1
    }
    SECTION("preconditions") {
        auto D = ratmat({{Rational(2), Rational(0)}, {Rational(0), Rational(1)}});
        REQUIRE_THROWS_AS(finite_order_coprimality(D, Integer(3), 2), std::domain_error);
        auto I = Matrix<Rational>::identity(2, Rational(1));
        REQUIRE_THROWS_AS(finite_order_coprimality(I, Integer(6), 2), std::invalid_argument);
    }
}

TEST_CASE("finite order versus prime power towers in characteristic p") {
    Fq F3 = Fq::prime_field(3);
    LaurentProfile prof{F3, 24};
    auto I = Matrix<LaurentScalar>::identity(2, LaurentScalar::one(prof));
    SECTION("identity is coprime to everything") {
        auto rep = finite_order_coprimality(I, Integer(5), 3);
        REQUIRE(rep.order == 1);
        REQUIRE(rep.consistent);
        REQUIRE(rep.witnesses.size() == 3);
        for (const auto& [qk, W] : rep.witnesses)
            REQUIRE(tri_eq_matrix(power_map(W, qk), I) == Tri::yes);
    }
    SECTION("-I against q = 2: violated") {
        auto nI = scale(I, LaurentScalar::from_int(-1, prof));
        auto rep = finite_order_coprimality(nI, Integer(2), 3);
        REQUIRE(rep.order == 2);
        REQUIRE_FALSE(rep.consistent);
        REQUIRE(rep.violation_depth);
    }
    SECTION("-I against the characteristic: coprime, witnesses are powers of -I") {
        auto nI = scale(I, LaurentScalar::from_int(-1, prof));
        auto rep = finite_order_coprimality(nI, Integer(3), 2);
        REQUIRE(rep.consistent);
        REQUIRE(rep.witnesses.size() == 2);
        for (const auto& [qk, W] : rep.witnesses)
            REQUIRE(tri_eq_matrix(power_map(W, qk), nI) == Tri::yes);
    }
}
