#pragma once

#include <cstdint>

#include "localroots/errors.hpp"
#include "localroots/matrix.hpp"
#include "localroots/newton_polygon.hpp"
#include "localroots/numbers.hpp"

namespace localroots {

/// log of a unipotent matrix: the nilpotent series log(I + N) truncated at
/// N^n = 0.  Characteristic zero only (the series divides by integers up to
/// n - 1).
template <class T>
Matrix<T> unipotent_log(const Matrix<T>& U) {
    if (scalar_characteristic(U.proto()) != 0)
        throw std::domain_error("unipotent_log: defined only in characteristic zero");
    if (!is_unipotent(U))
        throw std::domain_error("unipotent_log: matrix is not unipotent");
    std::size_t n = U.size();
    Matrix<T> N = U - Matrix<T>::identity(n, U.proto());
    Matrix<T> acc(n, zero_like(U.proto()));
    Matrix<T> P = N;
    for (std::size_t i = 1; i < n; ++i) {
        Matrix<T> term = scale(P, div_int(one_like(U.proto()), Integer(i)));
        acc = (i % 2 == 1) ? acc + term : acc - term;
        P = P * N;
    }
    if (n == 1) return acc; // log of [1] is [0]
    return acc;
}

/// exp of a nilpotent matrix (char 0), truncated at X^n = 0.
template <class T>
Matrix<T> nilpotent_exp(const Matrix<T>& X) {
    if (scalar_characteristic(X.proto()) != 0)
        throw std::domain_error("nilpotent_exp: defined only in characteristic zero");
    std::size_t n = X.size();
    Matrix<T> acc = Matrix<T>::identity(n, X.proto());
    Matrix<T> P = Matrix<T>::identity(n, X.proto());
    Integer fact = 1;
    for (std::size_t i = 1; i < n; ++i) {
        P = P * X;
        fact *= Integer(i);
        acc = acc + scale(P, div_int(one_like(X.proto()), fact));
    }
    return acc;
}

/// The unique unipotent k-th root exp(log(U)/k) of a unipotent matrix.
template <class T>
Matrix<T> unipotent_kth_root(const Matrix<T>& U, const Integer& k) {
    if (k <= 0) throw std::invalid_argument("unipotent_kth_root: k must be positive");
    Matrix<T> L = unipotent_log(U);
    for (std::size_t i = 0; i < L.size(); ++i)
        for (std::size_t j = 0; j < L.size(); ++j)
            L.at(i, j) = div_int(L.at(i, j), k);
    Matrix<T> root = nilpotent_exp(L);
    if (tri_eq_matrix(power_map(root, k), U) == Tri::no)
        throw std::logic_error("unipotent_kth_root: witness failed verification");
    return root;
}

/// Sample the one-parameter group through a unipotent U at rational time t:
/// Phi(t) = exp(t log U), so Phi(1) = U and Phi(1/k) is the k-th root.
template <class T>
Matrix<T> one_parameter_sample(const Matrix<T>& U, const Rational& t) {
    Matrix<T> L = unipotent_log(U);
    for (std::size_t i = 0; i < L.size(); ++i)
        for (std::size_t j = 0; j < L.size(); ++j)
            L.at(i, j) = scale_rational(L.at(i, j), t);
    return nilpotent_exp(L);
}

} // namespace localroots
