#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "lattheta/errors.hpp"
#include "lattheta/numeric.hpp"

namespace lattheta {

// Dense row-major matrix over an exact scalar type.
template <class T>
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<T> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c)) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    T& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
    bool operator!=(const Matrix& o) const { return !(*this == o); }
};

using IntMatrix = Matrix<BigInt>;
using RatMatrix = Matrix<BigRat>;

template <class T>
Matrix<T> transpose(const Matrix<T>& m) {
    Matrix<T> t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

template <class T>
Matrix<T> operator*(const Matrix<T>& x, const Matrix<T>& y) {
    if (x.cols != y.rows) throw PreconditionViolation("matrix product shape mismatch");
    Matrix<T> r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const T& xik = x(i, k);
            if (xik == 0) continue;
            for (int j = 0; j < y.cols; ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

template <class T>
Matrix<T> operator+(const Matrix<T>& x, const Matrix<T>& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw PreconditionViolation("matrix sum shape mismatch");
    Matrix<T> r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
    return r;
}

template <class T>
Matrix<T> operator-(const Matrix<T>& x, const Matrix<T>& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw PreconditionViolation("matrix difference shape mismatch");
    Matrix<T> r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
    return r;
}

template <class T>
Matrix<T> operator*(const T& s, const Matrix<T>& m) {
    Matrix<T> r = m;
    for (auto& v : r.a) v *= s;
    return r;
}

template <class T>
bool is_symmetric(const Matrix<T>& m) {
    if (m.rows != m.cols) return false;
    for (int i = 0; i < m.rows; ++i)
        for (int j = i + 1; j < m.cols; ++j)
            if (m(i, j) != m(j, i)) return false;
    return true;
}

template <class T>
Matrix<T> block_diag(const Matrix<T>& x, const Matrix<T>& y) {
    Matrix<T> r(x.rows + y.rows, x.cols + y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r(i, j) = x(i, j);
    for (int i = 0; i < y.rows; ++i)
        for (int j = 0; j < y.cols; ++j) r(x.rows + i, x.cols + j) = y(i, j);
    return r;
}

inline RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = BigRat(m.a[i]);
    return r;
}

// True when every entry is an integer.
inline bool is_integral(const RatMatrix& m) {
    for (const auto& v : m.a)
        if (!is_integer(v)) return false;
    return true;
}

inline IntMatrix to_integral(const RatMatrix& m) {
    IntMatrix r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) {
        if (!is_integer(m.a[i])) throw PreconditionViolation("matrix entry is not an integer");
        r.a[i] = numerator(m.a[i]);
    }
    return r;
}

// Exact determinant by fraction-free (Bareiss) elimination with row pivoting.
inline BigInt determinant(const IntMatrix& m) {
    if (m.rows != m.cols) throw PreconditionViolation("determinant of a non-square matrix");
    const int n = m.rows;
    if (n == 0) return 1;
    IntMatrix w = m;
    int sign = 1;
    BigInt prev = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (w(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (w(i, k) != 0) { piv = i; break; }
            if (piv < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(w(k, j), w(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                BigInt num = w(k, k) * w(i, j) - w(i, k) * w(k, j);
                mpz_divexact(w(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            w(i, k) = 0;
        }
        prev = w(k, k);
    }
    return sign * w(n - 1, n - 1);
}

// Leading principal minors det(m[0..k][0..k]) for k = 0..n-1, by pivot-free Bareiss.
// Stops early (returning a short vector) when a zero pivot makes later minors
// unreachable; positive definite input always yields n positive minors.
inline std::vector<BigInt> leading_principal_minors(const IntMatrix& m) {
    if (m.rows != m.cols) throw PreconditionViolation("minors of a non-square matrix");
    const int n = m.rows;
    std::vector<BigInt> minors;
    IntMatrix w = m;
    BigInt prev = 1;
    for (int k = 0; k < n; ++k) {
        minors.push_back(w(k, k));
        if (w(k, k) == 0) break;
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                BigInt num = w(k, k) * w(i, j) - w(i, k) * w(k, j);
                mpz_divexact(w(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = w(k, k);
    }
    return minors;
}

inline bool is_positive_definite(const IntMatrix& m) {
    if (!is_symmetric(m)) return false;
    auto minors = leading_principal_minors(m);
    if (static_cast<int>(minors.size()) != m.rows) return false;
    for (const auto& d : minors)
        if (d <= 0) return false;
    return true;
}

// Gauss-Jordan inverse over the rationals; deterministic first-nonzero pivoting.
inline RatMatrix rational_inverse(const RatMatrix& m) {
    if (m.rows != m.cols) throw PreconditionViolation("inverse of a non-square matrix");
    const int n = m.rows;
    RatMatrix w = m;
    RatMatrix inv = RatMatrix::identity(n);
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        for (int i = k; i < n; ++i)
            if (w(i, k) != 0) { piv = i; break; }
        if (piv < 0) throw PreconditionViolation("matrix is singular");
        if (piv != k)
            for (int j = 0; j < n; ++j) {
                std::swap(w(k, j), w(piv, j));
                std::swap(inv(k, j), inv(piv, j));
            }
        BigRat d = w(k, k);
        for (int j = 0; j < n; ++j) {
            w(k, j) /= d;
            inv(k, j) /= d;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k || w(i, k) == 0) continue;
            BigRat f = w(i, k);
            for (int j = 0; j < n; ++j) {
                w(i, j) -= f * w(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

inline RatMatrix rational_inverse(const IntMatrix& m) { return rational_inverse(to_rational(m)); }

inline BigRat determinant(const RatMatrix& m) {
    if (m.rows != m.cols) throw PreconditionViolation("determinant of a non-square matrix");
    const int n = m.rows;
    if (n == 0) return BigRat(1);
    RatMatrix w = m;
    BigRat det(1);
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        for (int i = k; i < n; ++i)
            if (w(i, k) != 0) { piv = i; break; }
        if (piv < 0) return BigRat(0);
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(w(k, j), w(piv, j));
            det = -det;
        }
        det *= w(k, k);
        BigRat d = w(k, k);
        for (int i = k + 1; i < n; ++i) {
            if (w(i, k) == 0) continue;
            BigRat f = w(i, k) / d;
            for (int j = k; j < n; ++j) w(i, j) -= f * w(k, j);
        }
    }
    return det;
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Matrix<T>& m) {
    os << "[";
    for (int i = 0; i < m.rows; ++i) {
        os << (i ? " [" : "[");
        for (int j = 0; j < m.cols; ++j) os << (j ? ", " : "") << m(i, j);
        os << "]";
        if (i + 1 < m.rows) os << "\n";
    }
    return os << "]";
}

} // namespace lattheta
