#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "localroots/errors.hpp"
#include "localroots/numbers.hpp"
#include "localroots/polynomial.hpp"

namespace localroots {

/// Square matrix over any of the library's scalar types.  All algorithms are
/// division-free (Berkowitz characteristic polynomial, Cayley-Hamilton
/// inversion, cross-multiplication elimination) so exact entries stay exact
/// and windowed entries never acquire spurious precision.
template <class T>
class Matrix {
public:
    Matrix(std::size_t n, const T& fill) : n_(n), e_(n * n, fill) {
        if (n == 0) throw std::domain_error("Matrix: dimension must be positive");
    }

    static Matrix identity(std::size_t n, const T& proto) {
        Matrix m(n, zero_like(proto));
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = one_like(proto);
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
        if (rows.empty()) throw std::domain_error("Matrix: dimension must be positive");
        Matrix m(rows.size(), rows.front().front());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size())
                throw std::domain_error("Matrix: rows must form a square");
            for (std::size_t j = 0; j < rows.size(); ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t size() const { return n_; }
    T& at(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
    const T& at(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }

    const T& proto() const { return e_.front(); }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        a.check_same_size(b);
        Matrix r = a;
        for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = r.e_[i] + b.e_[i];
        return r;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        a.check_same_size(b);
        Matrix r = a;
        for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = r.e_[i] - b.e_[i];
        return r;
    }

    Matrix operator-() const {
        Matrix r = *this;
        for (auto& x : r.e_) x = -x;
        return r;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        a.check_same_size(b);
        std::size_t n = a.n_;
        Matrix r(n, zero_like(a.proto()));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const T& aik = a.at(i, k);
                if (tri_is_zero(aik) == Tri::yes) continue;
                for (std::size_t j = 0; j < n; ++j)
                    r.at(i, j) = r.at(i, j) + aik * b.at(k, j);
            }
        return r;
    }

    T trace() const {
        T s = zero_like(proto());
        for (std::size_t i = 0; i < n_; ++i) s = s + at(i, i);
        return s;
    }

private:
    std::size_t n_;
    std::vector<T> e_;

    void check_same_size(const Matrix& o) const {
        if (n_ != o.n_) throw std::domain_error("matrix dimensions differ");
    }
};

template <class T>
Matrix<T> scale(const Matrix<T>& a, const T& s) {
    Matrix<T> r = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) r.at(i, j) = r.at(i, j) * s;
    return r;
}

template <class T>
Tri tri_eq_matrix(const Matrix<T>& a, const Matrix<T>& b) {
    Tri out = Tri::yes;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) {
            Tri t = tri_eq(a.at(i, j), b.at(i, j));
            if (t == Tri::no) return Tri::no;
            if (t == Tri::unknown) out = Tri::unknown;
        }
    return out;
}

template <class T>
Tri tri_is_identity(const Matrix<T>& m) {
    return tri_eq_matrix(m, Matrix<T>::identity(m.size(), m.proto()));
}

/// Characteristic polynomial det(xI - M) by the Berkowitz algorithm:
/// division-free, O(n^4) ring operations, monic with an exact leading one.
template <class T>
Polynomial<T> char_poly(const Matrix<T>& M) {
    std::size_t n = M.size();
    const T one = one_like(M.proto());
    const T zero = zero_like(M.proto());
    // C holds the characteristic polynomial of the leading r x r minor,
    // highest degree first.
    std::vector<T> C = {one, -M.at(0, 0)};
    for (std::size_t r = 2; r <= n; ++r) {
        // Toeplitz column: 1, -a_rr, -(R S), -(R M_{r-1} S), ...
        std::vector<T> t;
        t.reserve(r + 1);
        t.push_back(one);
        t.push_back(-M.at(r - 1, r - 1));
        std::vector<T> w;
        w.reserve(r - 1);
        for (std::size_t i = 0; i < r - 1; ++i) w.push_back(M.at(i, r - 1));
        for (std::size_t i = 2; i <= r; ++i) {
            T dot = zero;
            for (std::size_t j = 0; j < r - 1; ++j)
                dot = dot + M.at(r - 1, j) * w[j];
            t.push_back(-dot);
            if (i == r) break;
            std::vector<T> nw;
            nw.reserve(r - 1);
            for (std::size_t a = 0; a < r - 1; ++a) {
                T s = zero;
                for (std::size_t b = 0; b < r - 1; ++b)
                    s = s + M.at(a, b) * w[b];
                nw.push_back(s);
            }
            w = std::move(nw);
        }
        std::vector<T> nc;
        nc.reserve(r + 1);
        for (std::size_t i = 0; i <= r; ++i) {
            T s = zero;
            for (std::size_t j = 0; j < r && j <= i; ++j)
                if (i - j < t.size()) s = s + t[i - j] * C[j];
            nc.push_back(s);
        }
        C = std::move(nc);
    }
    Polynomial<T> f;
    f.c.assign(C.rbegin(), C.rend());
    return f;
}

template <class T>
T determinant(const Matrix<T>& M) {
    Polynomial<T> f = char_poly(M);
    T c0 = f[0];
    return (M.size() % 2 == 0) ? c0 : -c0;
}

/// Inverse via Cayley-Hamilton: M^-1 = -(M^(n-1) + c_(n-1) M^(n-2) + ... +
/// c_1 I) / c_0.  Raises std::domain_error for a certainly-singular matrix
/// and insufficient_precision when invertibility cannot be decided.
template <class T>
Matrix<T> inverse(const Matrix<T>& M) {
    std::size_t n = M.size();
    Polynomial<T> f = char_poly(M);
    Tri z = tri_is_zero(f[0]);
    if (z == Tri::yes) throw std::domain_error("inverse: matrix is singular");
    if (z == Tri::unknown)
        throw insufficient_precision("inverse: determinant indistinguishable from zero");
    Matrix<T> B = Matrix<T>::identity(n, M.proto());
    for (std::size_t i = n - 1; i >= 1; --i) {
        Matrix<T> cI = scale(Matrix<T>::identity(n, M.proto()), f[i]);
        B = B * M + cI;
    }
    T s = -invert_scalar(f[0]);
    return scale(B, s);
}

/// M^k for any integer k (negative powers via the Cayley-Hamilton inverse).
template <class T>
Matrix<T> power_map(Matrix<T> M, Integer k) {
    if (k < 0) { M = inverse(M); k = -k; }
    Matrix<T> r = Matrix<T>::identity(M.size(), M.proto());
    while (k > 0) {
        if (k % 2 == 1) r = r * M;
        M = M * M;
        k /= 2;
    }
    return r;
}

/// Rank by fraction-free (cross-multiplication) elimination with certain
/// pivots only: a pivot must be definitely nonzero, and a column can only be
/// skipped when every remaining entry is exactly zero.  Anything in between
/// is honestly undecidable and raises insufficient_precision.
template <class T>
std::size_t rank(Matrix<T> A) {
    std::size_t n = A.size(), rk = 0;
    for (std::size_t col = 0; col < n && rk < n; ++col) {
        std::size_t pivot = n;
        bool all_exact_zero = true;
        for (std::size_t r = rk; r < n; ++r) {
            Tri z = tri_is_zero(A.at(r, col));
            if (z == Tri::no) { pivot = r; all_exact_zero = false; break; }
            if (z == Tri::unknown) all_exact_zero = false;
        }
        if (pivot == n) {
            if (all_exact_zero) continue;
            throw insufficient_precision("rank: pivot choice undecidable in column " +
                                         std::to_string(col));
        }
        if (pivot != rk)
            for (std::size_t j = 0; j < n; ++j) std::swap(A.at(pivot, j), A.at(rk, j));
        for (std::size_t r = rk + 1; r < n; ++r) {
            T factor = A.at(r, col);
            for (std::size_t j = 0; j < n; ++j)
                A.at(r, j) = A.at(rk, col) * A.at(r, j) - factor * A.at(rk, j);
        }
        ++rk;
    }
    return rk;
}

/// f(M) for a polynomial f, by Horner.
template <class T>
Matrix<T> poly_eval_matrix(const Polynomial<T>& f, const Matrix<T>& M) {
    std::size_t n = M.size();
    Matrix<T> acc(n, zero_like(M.proto()));
    for (std::size_t i = f.size(); i-- > 0;) {
        acc = acc * M;
        for (std::size_t d = 0; d < n; ++d) acc.at(d, d) = acc.at(d, d) + f[i];
    }
    return acc;
}

template <class T>
std::string matrix_display(const Matrix<T>& M) {
    std::string s = "[";
    for (std::size_t i = 0; i < M.size(); ++i) {
        s += (i ? "; " : "");
        for (std::size_t j = 0; j < M.size(); ++j)
            s += (j ? ", " : "") + to_display(M.at(i, j));
    }
    return s + "]";
}

} // namespace localroots
