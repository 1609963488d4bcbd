#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

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

Matrix<PadicScalar> embed(const Matrix<Rational>& M, const PadicProfile& prof) {
    Matrix<PadicScalar> out(M.size(), PadicScalar::zero(prof));
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t j = 0; j < M.size(); ++j)
            out.at(i, j) = PadicScalar::from_rational(M.at(i, j), prof);
    return out;
}

// companion matrix of a monic rational polynomial
Matrix<Rational> companion(const Polynomial<Rational>& f) {
    std::size_t n = static_cast<std::size_t>(f.degree());
    Matrix<Rational> C(n, Rational(0));
    for (std::size_t i = 1; i < n; ++i) C.at(i, i - 1) = Rational(1);
    for (std::size_t i = 0; i < n; ++i) C.at(i, n - 1) = -f[static_cast<std::int64_t>(i)];
    return C;
}

}  // namespace

TEST_CASE("scalar roots over Q") {
    REQUIRE(scalar_root(Rational(4), Integer(2)) == Rational(2));
    REQUIRE(scalar_root(Rational(-8), Integer(3)) == Rational(-2));
    REQUIRE(scalar_root(Rational(9) / 4, Integer(2)) == Rational(3) / 2);
    REQUIRE_FALSE(scalar_root(Rational(2), Integer(2)).has_value());
    REQUIRE_FALSE(scalar_root(Rational(-4), Integer(2)).has_value());
    REQUIRE(scalar_root_decision(Rational(1), Integer(12)).exists);
}

TEST_CASE("scalar roots over Q_p follow the unit group structure") {
    auto sq = [](std::int64_t p, std::int64_t c) {
        PadicProfile prof{p, 24};
        return scalar_root_decision(PadicScalar::from_rational(Rational(c), prof), Integer(2))
            .exists;
    };
    // squares mod 5 are {1,4}; mod 7 they are {1,2,4}
    REQUIRE(sq(5, 4));
    REQUIRE_FALSE(sq(5, 2));
    REQUIRE(sq(7, 2));
    REQUIRE_FALSE(sq(7, 3));
    // 2-adic units are squares iff congruent to 1 mod 8
    REQUIRE(sq(2, 17));
    REQUIRE_FALSE(sq(2, 7));
    REQUIRE_FALSE(sq(2, -1));
    REQUIRE_FALSE(sq(2, 2));  // odd valuation
    SECTION("witnesses square back to the operand") {
        PadicProfile prof{2, 32};
        auto r = scalar_root(PadicScalar::from_rational(Rational(17), prof), Integer(2));
        REQUIRE(r.has_value());
        auto resid = *r * *r - PadicScalar::from_rational(Rational(17), prof);
        REQUIRE(tri_is_zero(resid) != Tri::no);
    }
    SECTION("valuation must be divisible by k") {
        PadicProfile prof{5, 16};
        REQUIRE(scalar_root_decision(PadicScalar::from_rational(Rational(25), prof),
                                     Integer(2)).exists);
        REQUIRE_FALSE(scalar_root_decision(PadicScalar::from_rational(Rational(5), prof),
                                           Integer(2)).exists);
    }
}

TEST_CASE("jordan blocks with nonzero eigenvalue take roots in characteristic zero") {
    auto J = ratmat({{Rational(4), Rational(1)}, {Rational(0), Rational(4)}});
    auto w = has_kth_root(J, Integer(2));
    REQUIRE(w.status == Tri::yes);
    REQUIRE(w.root);
    REQUIRE(w.root->at(0, 0) == 2);
    REQUIRE(w.root->at(0, 1) == Rational(1) / 4);
    REQUIRE(tri_eq_matrix(power_map(*w.root, Integer(2)), J) == Tri::yes);
}

TEST_CASE("unipotent matrices have roots of every order via log and exp") {
    auto U = ratmat({{Rational(1), Rational(1)}, {Rational(0), Rational(1)}});
    auto w = has_kth_root(U, Integer(2));
    REQUIRE(w.status == Tri::yes);
    REQUIRE(w.root->at(0, 1) == Rational(1) / 2);
    for (std::int64_t k = 1; k <= 10; ++k) {
        auto R = unipotent_kth_root(U, Integer(k));
        REQUIRE(tri_eq_matrix(power_map(R, Integer(k)), U) == Tri::yes);
    }
    // 3x3 with two off-diagonal strata
    auto V = ratmat({{Rational(1), Rational(2), Rational(5)},
                     {Rational(0), Rational(1), Rational(-3)},
                     {Rational(0), Rational(0), Rational(1)}});
    for (std::int64_t k : {2, 3, 7}) {
        auto R = unipotent_kth_root(V, Integer(k));
        REQUIRE(tri_eq_matrix(power_map(R, Integer(k)), V) == Tri::yes);
    }
}

TEST_CASE("scalar matrices: companion blocks when k divides n, refusal in dimension one") {
    auto S = ratmat({{Rational(2), Rational(0)}, {Rational(0), Rational(2)}});
    auto w2 = has_kth_root(S, Integer(2));
    REQUIRE(w2.status == Tri::yes);
    REQUIRE(w2.root);
    REQUIRE(tri_eq_matrix(power_map(*w2.root, Integer(2)), S) == Tri::yes);
    auto w3 = has_kth_root(S, Integer(3));
    REQUIRE(w3.status == Tri::unknown);  // out of scope, honestly reported
    Matrix<Rational> one(1, Rational(2));
    auto w1 = has_kth_root(one, Integer(2));
    REQUIRE(w1.status == Tri::no);
}

TEST_CASE("split non-derogatory matrices reduce to eigenvalue decisions") {
    PadicProfile prof{3, 24};
    auto D = embed(ratmat({{Rational(1), Rational(0)}, {Rational(0), Rational(4)}}), prof);
    auto no3 = has_kth_root(D, Integer(3));  // 4 has no cube root in Q_3
    REQUIRE(no3.status == Tri::no);
    auto yes2 = has_kth_root(D, Integer(2));  // 1 and 4 are both squares
    REQUIRE(yes2.status == Tri::yes);
    REQUIRE(yes2.root);
    REQUIRE(tri_eq_matrix(power_map(*yes2.root, Integer(2)), D) == Tri::yes);
}

TEST_CASE("characteristic p rigidity of the standard shear") {
    LaurentProfile prof{Fq::prime_field(3), 16};
    auto t = LaurentScalar::uniformizer(prof);
    Matrix<LaurentScalar> M(2, LaurentScalar::zero(prof));
    M.at(0, 0) = LaurentScalar::one(prof);
    M.at(1, 1) = LaurentScalar::one(prof);
    M.at(0, 1) = t;
    SECTION("no p-th root, no root of any order divisible by p") {
        for (std::int64_t k : {3, 6, 9}) {
            auto w = has_kth_root(M, Integer(k));
            REQUIRE(w.status == Tri::no);
        }
    }
    SECTION("tame orders remain available") {
        auto w = has_kth_root(M, Integer(2));
        REQUIRE(w.status == Tri::yes);
        REQUIRE(w.root);
        REQUIRE(tri_eq_matrix(power_map(*w.root, Integer(2)), M) == Tri::yes);
        // the witness is M^2, since M has order 3 and 2*2 = 1 mod 3
        REQUIRE(tri_eq_matrix(*w.root, power_map(M, Integer(2))) == Tri::yes);
    }
    SECTION("identity keeps p-th roots") {
        auto I = Matrix<LaurentScalar>::identity(2, LaurentScalar::one(prof));
        auto w = has_kth_root(I, Integer(3));
        REQUIRE(w.status == Tri::yes);
        REQUIRE(tri_is_identity(*w.root) == Tri::yes);
    }
}

TEST_CASE("uniform power bounds") {
    REQUIRE(unipotent_power_bound_padic(2, 5).value == 24);
    REQUIRE(unipotent_power_bound_padic(1, 5).value == 4);
    REQUIRE(unipotent_power_bound_padic(2, 2).value == 12);
    REQUIRE(unipotent_power_bound_laurent(2, 2, 2).value == 6);
    REQUIRE(torsion_exponent_bound_rational(2) == 12);
    REQUIRE(torsion_exponent_bound_rational(1) == 2);
    REQUIRE(torsion_exponent_bound_padic(1, 7).value == 6);
    // every m whose p-adic cyclotomic degree is <= n divides R(n, p)
    for (std::int64_t p : {2, 3, 5, 7}) {
        for (std::int64_t n = 1; n <= 4; ++n) {
            Integer R = unipotent_power_bound_padic(n, p).value;
            for (std::int64_t m = 1; m <= 2 * n * n + 40; ++m)
                if (cyclotomic_degree_padic(m, p) <= n) REQUIRE(R % m == 0);
        }
    }
}

TEST_CASE("least unipotent power and multiplicative order") {
    auto R = ratmat({{Rational(0), Rational(-1)}, {Rational(1), Rational(0)}});
    REQUIRE(unipotent_power_exponent(R) == Integer(4));
    REQUIRE(matrix_order(R) == Integer(4));
    auto I = Matrix<Rational>::identity(3, Rational(1));
    REQUIRE(unipotent_power_exponent(I) == Integer(1));
    REQUIRE(matrix_order(I) == Integer(1));
    auto D = ratmat({{Rational(2), Rational(0)}, {Rational(0), Rational(1)}});
    REQUIRE_FALSE(unipotent_power_exponent(D).has_value());
    REQUIRE_FALSE(matrix_order(D).has_value());
    auto C5 = companion(cyclotomic(5));
    REQUIRE(matrix_order(C5) == Integer(5));
    REQUIRE(unipotent_power_exponent(C5) == Integer(5));
    // scaled rotation: M^2 = -I, so the exponent and the order are both 4
    auto M = ratmat({{Rational(0), Rational(-2)}, {Rational(1) / 2, Rational(0)}});
    REQUIRE(unipotent_power_exponent(M) == Integer(4));
    REQUIRE(matrix_order(M) == Integer(4));
    SECTION("exactly embedded matrices decide locally") {
        PadicProfile prof{5, 32};
        auto C4 = companion(cyclotomic(4));
        REQUIRE(unipotent_power_exponent(embed(C4, prof)) == Integer(4));
        REQUIRE(matrix_order(embed(C4, prof)) == Integer(4));
    }
    SECTION("windowed root-of-unity data refuses exact certification") {
        PadicProfile prof{5, 12};
        auto w = teichmuller(PadicScalar::from_rational(Rational(2), prof));
        Matrix<PadicScalar> T(1, w);
        REQUIRE_THROWS_AS(unipotent_power_exponent(T), insufficient_precision);
    }
}

TEST_CASE("eigenvalue congruences at the right level") {
    PadicProfile prof{5, 24};
    auto D = embed(ratmat({{Rational(6), Rational(0)}, {Rational(0), Rational(1)}}), prof);
    REQUIRE_FALSE(eigenvalue_congruence_check(D, Integer(1), 1));
    REQUIRE(eigenvalue_congruence_check(D, Integer(5), 1));   // 6^5 = 1 mod 25? no: charpoly test
    REQUIRE_FALSE(eigenvalue_congruence_check(D, Integer(5), 2));
    REQUIRE(eigenvalue_congruence_check(D, Integer(25), 2));
    REQUIRE_THROWS_AS(eigenvalue_congruence_check(D, Integer(5), 0), std::invalid_argument);
}

TEST_CASE("roots of all orders: verdicts with certificates") {
    SECTION("unipotent over Q_5: yes with a log direction") {
        PadicProfile prof{5, 24};
        auto U = embed(ratmat({{Rational(1), Rational(1)}, {Rational(0), Rational(1)}}), prof);
        auto rep = roots_all_orders(U);
        REQUIRE(rep.all_orders == Tri::yes);
        REQUIRE(rep.direction);
    }
    SECTION("non-distal: small verified refusal") {
        PadicProfile prof{5, 24};
        auto D = embed(ratmat({{Rational(5), Rational(0)}, {Rational(0), Rational(1)}}), prof);
        auto rep = roots_all_orders(D);
        REQUIRE(rep.all_orders == Tri::no);
        REQUIRE(rep.blocked);
        REQUIRE(rep.blocked->verified);
        auto probe = has_kth_root(D, rep.blocked->k);
        REQUIRE(probe.status == Tri::no);
    }
    SECTION("tame unit with nontrivial residue order") {
        PadicProfile prof{5, 24};
        Matrix<PadicScalar> M(1, PadicScalar::from_rational(Rational(2), prof));
        auto rep = roots_all_orders(M);
        REQUIRE(rep.all_orders == Tri::no);
        REQUIRE(rep.blocked);
        REQUIRE(rep.blocked->verified);
    }
    SECTION("wild principal unit in characteristic zero") {
        PadicProfile prof{37, 16};
        Matrix<PadicScalar> M(1, PadicScalar::from_rational(Rational(38), prof));
        auto rep = roots_all_orders(M);
        REQUIRE(rep.all_orders == Tri::no);
        REQUIRE(rep.blocked);
        REQUIRE(rep.blocked->k == Integer(37) * 37);
    }
    SECTION("wild principal unit in characteristic p") {
        LaurentProfile prof{Fq::prime_field(37), 12};
        Matrix<LaurentScalar> M(1, LaurentScalar::one(prof) + LaurentScalar::uniformizer(prof));
        auto rep = roots_all_orders(M);
        REQUIRE(rep.all_orders == Tri::no);
        REQUIRE(rep.blocked);
        REQUIRE(rep.blocked->k == 37);
    }
    SECTION("characteristic p unipotent shear: refusal is verified") {
        LaurentProfile prof{Fq::prime_field(3), 16};
        Matrix<LaurentScalar> M(2, LaurentScalar::zero(prof));
        M.at(0, 0) = LaurentScalar::one(prof);
        M.at(1, 1) = LaurentScalar::one(prof);
        M.at(0, 1) = LaurentScalar::uniformizer(prof);
        auto rep = roots_all_orders(M);
        REQUIRE(rep.all_orders == Tri::no);
        REQUIRE(rep.blocked);
        REQUIRE(rep.blocked->verified);
        REQUIRE(rep.blocked->k == 3);
    }
    SECTION("identity always passes") {
        LaurentProfile prof{Fq::prime_field(3), 8};
        auto I = Matrix<LaurentScalar>::identity(2, LaurentScalar::one(prof));
        REQUIRE(roots_all_orders(I).all_orders == Tri::yes);
    }
}

TEST_CASE("root towers") {
    SECTION("unipotent towers verify exactly") {
        auto U = ratmat({{Rational(1), Rational(4)}, {Rational(0), Rational(1)}});
        auto oc = build_root_tower(U, {Integer(2), Integer(2)});
        REQUIRE(oc.status == Tri::yes);
        REQUIRE(oc.tower);
        REQUIRE(verify_tower(*oc.tower) == Tri::yes);
        REQUIRE(oc.tower->steps.back().root.at(0, 1) == 1);
        auto mixed = build_root_tower(U, {Integer(2), Integer(3), Integer(5)});
        REQUIRE(mixed.status == Tri::yes);
        REQUIRE(verify_tower(*mixed.tower) == Tri::yes);
    }
    SECTION("definite failure names the stage") {
        Matrix<Rational> two(1, Rational(2));
        auto oc = build_root_tower(two, {Integer(2)});
        REQUIRE(oc.status == Tri::no);
        REQUIRE(oc.stages_built == 0);
    }
    SECTION("tame towers in characteristic p") {
        LaurentProfile prof{Fq::prime_field(3), 16};
        Matrix<LaurentScalar> M(2, LaurentScalar::zero(prof));
        M.at(0, 0) = LaurentScalar::one(prof);
        M.at(1, 1) = LaurentScalar::one(prof);
        M.at(0, 1) = LaurentScalar::uniformizer(prof);
        auto oc = build_root_tower(M, {Integer(2), Integer(2)});
        REQUIRE(oc.status == Tri::yes);
        REQUIRE(verify_tower(*oc.tower) == Tri::yes);
    }
    SECTION("out-of-scope request stays unknown") {
        auto S = ratmat({{Rational(2), Rational(0)}, {Rational(0), Rational(2)}});
        auto oc = build_root_tower(S, {Integer(3)});
        REQUIRE(oc.status == Tri::unknown);
    }
}

TEST_CASE("discrete-log roots inside a cyclic group") {
    REQUIRE(cyclic_root(Integer(5), Integer(2), 1) == Integer(3));  // (g^3)^2 = g
    REQUIRE_FALSE(cyclic_root(Integer(8), Integer(2), 1).has_value());
    REQUIRE(cyclic_root(Integer(8), Integer(2), 1, Integer(4)) == Integer(2));
    REQUIRE(cyclic_root(Integer(1), Integer(2), 3) == Integer(0));
    // witness property across a grid of coprime cases
    for (std::int64_t d = 2; d <= 30; ++d)
        for (std::int64_t q : {2, 3, 5, 7}) {
            if (gcd(Integer(d), Integer(q)) != 1) continue;
            for (std::int64_t k = 1; k <= 3; ++k) {
                auto s = cyclic_root(Integer(d), Integer(q), k);
                REQUIRE(s.has_value());
                Integer qk = ipow(Integer(q), static_cast<std::uint64_t>(k));
                REQUIRE((*s * qk) % d == Integer(1) % d);
            }
        }
}

TEST_CASE("coprimality dichotomy for finite orders") {
    auto c32 = finite_order_coprimality_padic(Integer(3), Integer(2), 1, 7);
    REQUIRE(c32.coprime);
    REQUIRE(c32.order_realizable);  // 3 | 6
    REQUIRE_FALSE(c32.violation_depth.has_value());
    auto c22 = finite_order_coprimality_padic(Integer(2), Integer(2), 1, 7);
    REQUIRE_FALSE(c22.coprime);
    REQUIRE(c22.violation_depth == Integer(1));  // v_2(6) = 1
    auto c42 = finite_order_coprimality_padic(Integer(4), Integer(2), 1, 7);
    REQUIRE_FALSE(c42.order_realizable);  // 4 does not divide 6
    REQUIRE(c42.violation_depth == Integer(0));
    auto c425 = finite_order_coprimality_padic(Integer(4), Integer(2), 2, 5);
    REQUIRE(c425.order_realizable);  // 4 | 24
    REQUIRE(c425.violation_depth == Integer(2));  // v_2(24) - v_2(4) + 1
    auto lc = finite_order_coprimality_laurent(Integer(3), Integer(2), 2, 2, 2);
    REQUIRE(lc.coprime);
    REQUIRE(lc.order_realizable);  // 3 | 6
    REQUIRE_THROWS_AS(finite_order_coprimality(Integer(6), Integer(6),
                                               torsion_exponent_bound_padic(1, 7)),
                      std::invalid_argument);
}

TEST_CASE("verdicts are conjugation invariant") {
    auto C = ratmat({{Rational(2), Rational(1)}, {Rational(1), Rational(1)}});  // det 1
    auto Cinv = ratmat({{Rational(1), Rational(-1)}, {Rational(-1), Rational(2)}});
    auto conj = [&](const Matrix<Rational>& M) { return C * M * Cinv; };
    auto R = ratmat({{Rational(0), Rational(-1)}, {Rational(1), Rational(0)}});
    auto U = ratmat({{Rational(1), Rational(1)}, {Rational(0), Rational(1)}});
    REQUIRE(unipotent_power_exponent(conj(R)) == unipotent_power_exponent(R));
    REQUIRE(matrix_order(conj(R)) == matrix_order(R));
    REQUIRE(char_poly(conj(U)).c == char_poly(U).c);
    for (std::int64_t p : {2, 3, 5})
        REQUIRE(is_distal_rational(conj(R), p) == is_distal_rational(R, p));
    auto w = has_kth_root(conj(U), Integer(3));
    REQUIRE(w.status == Tri::yes);
    REQUIRE(tri_eq_matrix(power_map(*w.root, Integer(3)), conj(U)) == Tri::yes);
}

TEST_CASE("powers scale newton polygon slopes") {
    auto M = ratmat({{Rational(2), Rational(1)}, {Rational(0), Rational(8)}});
    for (std::int64_t j : {2, 3}) {
        auto base = newton_polygon(char_poly(M), 2);
        auto pw = newton_polygon(char_poly(power_map(M, Integer(j))), 2);
        REQUIRE(base.segments.size() == pw.segments.size());
        for (std::size_t i = 0; i < base.segments.size(); ++i) {
            REQUIRE(pw.segments[i].slope == base.segments[i].slope * j);
            REQUIRE(pw.segments[i].multiplicity == base.segments[i].multiplicity);
        }
    }
}
