#pragma once

#include <algorithm>
#include <ostream>
#include <vector>

#include "lattheta/errors.hpp"
#include "lattheta/numeric.hpp"

namespace lattheta {

// Truncated power series in q: coefficients of q^0 .. q^prec are stored.
// Binary operations truncate to the minimum precision of the operands.
template <class T>
struct QSeries {
    int prec = -1;
    std::vector<T> c;

    QSeries() = default;
    explicit QSeries(int precision) : prec(precision), c(static_cast<std::size_t>(precision) + 1) {
        if (precision < 0) throw PreconditionViolation("negative series precision");
    }

    static QSeries one(int precision) {
        QSeries s(precision);
        s.c[0] = T(1);
        return s;
    }

    static QSeries monomial(int k, int precision) {
        QSeries s(precision);
        if (k < 0) throw PreconditionViolation("negative exponent");
        if (k <= precision) s.c[k] = T(1);
        return s;
    }

    const T& coeff(int k) const {
        if (k < 0 || k > prec) throw PreconditionViolation("series coefficient index out of range");
        return c[k];
    }

    QSeries truncate(int n) const {
        if (n > prec) throw PreconditionViolation("cannot extend series precision by truncation");
        QSeries s(n);
        std::copy(c.begin(), c.begin() + n + 1, s.c.begin());
        return s;
    }

    bool operator==(const QSeries& o) const { return prec == o.prec && c == o.c; }
    bool operator!=(const QSeries& o) const { return !(*this == o); }
};

template <class T>
QSeries<T> operator+(const QSeries<T>& x, const QSeries<T>& y) {
    int n = std::min(x.prec, y.prec);
    QSeries<T> r(n);
    for (int k = 0; k <= n; ++k) r.c[k] = x.c[k] + y.c[k];
    return r;
}

template <class T>
QSeries<T> operator-(const QSeries<T>& x, const QSeries<T>& y) {
    int n = std::min(x.prec, y.prec);
    QSeries<T> r(n);
    for (int k = 0; k <= n; ++k) r.c[k] = x.c[k] - y.c[k];
    return r;
}

template <class T>
QSeries<T> operator*(const QSeries<T>& x, const QSeries<T>& y) {
    int n = std::min(x.prec, y.prec);
    QSeries<T> r(n);
    for (int i = 0; i <= n; ++i) {
        if (x.c[i] == 0) continue;
        for (int j = 0; i + j <= n; ++j) {
            if (y.c[j] == 0) continue;
            r.c[i + j] += x.c[i] * y.c[j];
        }
    }
    return r;
}

template <class T>
QSeries<T> operator*(const T& s, const QSeries<T>& x) {
    QSeries<T> r = x;
    for (auto& v : r.c) v *= s;
    return r;
}

template <class T>
QSeries<T> operator-(const QSeries<T>& x) {
    QSeries<T> r = x;
    for (auto& v : r.c) v = -v;
    return r;
}

template <class T>
QSeries<T> pow(const QSeries<T>& x, unsigned e) {
    QSeries<T> r = QSeries<T>::one(x.prec);
    QSeries<T> b = x;
    while (e > 0) {
        if (e & 1u) r = r * b;
        if (e > 1) b = b * b;
        e >>= 1;
    }
    return r;
}

// Coefficientwise agreement of q^0 .. q^n.
template <class T>
bool agree_to(const QSeries<T>& x, const QSeries<T>& y, int n) {
    if (n > x.prec || n > y.prec) throw PreconditionViolation("agreement check beyond stored precision");
    for (int k = 0; k <= n; ++k)
        if (x.c[k] != y.c[k]) return false;
    return true;
}

inline QSeries<BigRat> to_rational(const QSeries<BigInt>& x) {
    QSeries<BigRat> r(x.prec);
    for (int k = 0; k <= x.prec; ++k) r.c[k] = BigRat(x.c[k]);
    return r;
}

inline bool is_integral(const QSeries<BigRat>& x) {
    for (const auto& v : x.c)
        if (!is_integer(v)) return false;
    return true;
}

inline QSeries<BigInt> to_integral(const QSeries<BigRat>& x) {
    QSeries<BigInt> r(x.prec);
    for (int k = 0; k <= x.prec; ++k) {
        if (!is_integer(x.c[k])) throw PreconditionViolation("series coefficient is not an integer");
        r.c[k] = numerator(x.c[k]);
    }
    return r;
}

template <class T>
std::ostream& operator<<(std::ostream& os, const QSeries<T>& s) {
    os << "[";
    for (int k = 0; k <= s.prec; ++k) os << (k ? ", " : "") << s.c[k];
    return os << "] + O(q^" << (s.prec + 1) << ")";
}

} // namespace lattheta
