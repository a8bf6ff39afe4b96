#pragma once

#include "crn/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace crn {

struct ConservationBasis {
    std::vector<RationalVector> vectors;
    std::size_t dimension() const { return vectors.size(); }
};

namespace detail {

using IntRows = std::vector<std::vector<Integer>>;

// Multiplies each row by the lcm of its denominators. Returns the integer rows
// and the per-row scale factors.
inline IntRows integerize_rows(const RationalMatrix& m, std::vector<Integer>* scales = nullptr) {
    IntRows out(m.rows(), std::vector<Integer>(m.cols()));
    if (scales) scales->assign(m.rows(), Integer(1));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Integer l = 1;
        for (std::size_t j = 0; j < m.cols(); ++j) l = boost::multiprecision::lcm(l, denominator_of(m(i, j)));
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = numerator_of(m(i, j)) * (l / denominator_of(m(i, j)));
        if (scales) (*scales)[i] = l;
    }
    return out;
}

struct Echelon {
    IntRows rows;
    std::vector<std::size_t> pivots;
    int swap_sign = 1;
};

// Fraction-free (Bareiss) forward elimination. Rows below the rank are zero.
inline Echelon bareiss_echelon(IntRows a, std::size_t cols) {
    Echelon e;
    const std::size_t nrows = a.size();
    Integer prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < nrows; ++c) {
        std::size_t p = r;
        while (p < nrows && a[p][c] == 0) ++p;
        if (p == nrows) continue;
        if (p != r) {
            std::swap(a[p], a[r]);
            e.swap_sign = -e.swap_sign;
        }
        for (std::size_t i = r + 1; i < nrows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
            a[i][c] = 0;
        }
        prev = a[r][c];
        e.pivots.push_back(c);
        ++r;
    }
    e.rows = std::move(a);
    return e;
}

inline RationalVector make_primitive(const RationalVector& v) {
    Integer l = 1;
    for (const auto& q : v) l = boost::multiprecision::lcm(l, denominator_of(q));
    std::vector<Integer> z(v.size());
    Integer g = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        z[i] = numerator_of(v[i]) * (l / denominator_of(v[i]));
        g = boost::multiprecision::gcd(g, z[i]);
    }
    if (g == 0) return v;
    int s = 1;
    for (const auto& x : z)
        if (x != 0) {
            s = x.sign();
            break;
        }
    RationalVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(z[i] / g * s);
    return out;
}

}  // namespace detail

inline Rational det_exact(const RationalMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("det_exact: matrix is not square");
    const std::size_t n = m.rows();
    if (n == 0) return Rational(1);
    std::vector<Integer> scales;
    auto e = detail::bareiss_echelon(detail::integerize_rows(m, &scales), n);
    if (e.pivots.size() < n) return Rational(0);
    Integer denom = 1;
    for (const auto& s : scales) denom *= s;
    return Rational(e.rows[n - 1][n - 1] * e.swap_sign, denom);
}

// Exact determinant of a small integer matrix (row-major, k*k entries).
inline long long det_int(const std::vector<long long>& a, std::size_t k) {
    if (k == 0) return 1;
    std::vector<__int128> m(a.begin(), a.end());
    __int128 prev = 1;
    int sign = 1;
    constexpr __int128 limit = static_cast<__int128>(1) << 60;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t p = c;
        while (p < k && m[p * k + c] == 0) ++p;
        if (p == k) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < k; ++j) std::swap(m[p * k + j], m[c * k + j]);
            sign = -sign;
        }
        for (std::size_t i = c + 1; i < k; ++i) {
            for (std::size_t j = c + 1; j < k; ++j) {
                __int128 v = (m[c * k + c] * m[i * k + j] - m[i * k + c] * m[c * k + j]) / prev;
                if (v > limit || v < -limit) {
                    RationalMatrix r(k, k);
                    for (std::size_t t = 0; t < k * k; ++t) r(t / k, t % k) = a[t];
                    const Integer d = numerator_of(det_exact(r));
                    if (d > std::numeric_limits<long long>::max() || d < std::numeric_limits<long long>::min())
                        throw std::overflow_error("det_int: determinant does not fit in 64 bits");
                    return d.convert_to<long long>();
                }
                m[i * k + j] = v;
            }
            m[i * k + c] = 0;
        }
        prev = m[c * k + c];
    }
    return static_cast<long long>(m[k * k - 1] * sign);
}

inline std::size_t rank(const RationalMatrix& m) {
    return detail::bareiss_echelon(detail::integerize_rows(m), m.cols()).pivots.size();
}

// Basis of {v : Mv = 0}; one vector per free column in ascending order,
// normalized to a primitive integer vector with first nonzero entry positive.
inline std::vector<RationalVector> right_kernel_basis(const RationalMatrix& m) {
    const std::size_t n = m.cols();
    auto e = detail::bareiss_echelon(detail::integerize_rows(m), n);
    std::vector<bool> is_pivot(n, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<RationalVector> basis;
    const std::size_t r = e.pivots.size();
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        RationalVector v(n, Rational(0));
        v[f] = 1;
        for (std::size_t ii = r; ii-- > 0;) {
            const std::size_t pc = e.pivots[ii];
            Rational acc = 0;
            for (std::size_t j = pc + 1; j < n; ++j)
                if (e.rows[ii][j] != 0 && v[j].sign() != 0) acc += Rational(e.rows[ii][j]) * v[j];
            v[pc] = -acc / Rational(e.rows[ii][pc]);
        }
        basis.push_back(detail::make_primitive(v));
    }
    return basis;
}

inline ConservationBasis left_kernel_basis(const RationalMatrix& m) {
    return ConservationBasis{right_kernel_basis(m.transpose())};
}

// Strictly positive v with Mv = 0, found by a phase-one simplex with Bland's
// rule on {Mv = 0, v >= 1}. Returns nullopt when that system is infeasible.
inline std::optional<RationalVector> positive_kernel_vector(const RationalMatrix& m) {
    const std::size_t rows = m.rows();
    const std::size_t n = m.cols();
    if (n == 0) return RationalVector{};
    // v = 1 + u, u >= 0, M u = -M 1.
    RationalVector ones(n, Rational(1));
    RationalVector b = m * ones;
    for (auto& x : b) x = -x;

    // Tableau columns: u (n), artificials (rows), rhs.
    const std::size_t width = n + rows + 1;
    std::vector<RationalVector> t(rows, RationalVector(width, Rational(0)));
    std::vector<std::size_t> basis(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const int s = b[i].sign() < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j) t[i][j] = m(i, j) * s;
        t[i][n + i] = 1;
        t[i][width - 1] = b[i] * s;
        basis[i] = n + i;
    }
    // Reduced costs for minimizing the sum of artificials.
    RationalVector cost(width, Rational(0));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < width; ++j)
            if (j < n || j == width - 1) cost[j] -= t[i][j];

    for (;;) {
        std::size_t enter = width;
        for (std::size_t j = 0; j + 1 < width; ++j)
            if (cost[j].sign() < 0) {
                enter = j;
                break;
            }
        if (enter == width) break;
        std::size_t leave = rows;
        Rational best;
        for (std::size_t i = 0; i < rows; ++i) {
            if (t[i][enter].sign() <= 0) continue;
            Rational ratio = t[i][width - 1] / t[i][enter];
            if (leave == rows || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == rows) break;  // unbounded direction; cannot occur for phase one
        const Rational piv = t[leave][enter];
        for (auto& x : t[leave]) x /= piv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == leave || t[i][enter].sign() == 0) continue;
            const Rational f = t[i][enter];
            for (std::size_t j = 0; j < width; ++j)
                if (t[leave][j].sign() != 0) t[i][j] -= f * t[leave][j];
        }
        if (cost[enter].sign() != 0) {
            const Rational f = cost[enter];
            for (std::size_t j = 0; j < width; ++j)
                if (t[leave][j].sign() != 0) cost[j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }
    if (cost[width - 1].sign() != 0) return std::nullopt;
    RationalVector v(n, Rational(1));
    for (std::size_t i = 0; i < rows; ++i)
        if (basis[i] < n) v[basis[i]] += t[i][width - 1];
    return v;
}

// Coefficients c_0..c_n of det(lambda I - A) = sum c_i lambda^i (Faddeev-LeVerrier).
inline RationalVector characteristic_polynomial(const RationalMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("characteristic_polynomial: matrix is not square");
    const std::size_t n = a.rows();
    RationalVector c(n + 1, Rational(0));
    c[n] = 1;
    RationalMatrix m(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        RationalMatrix next = a * m;
        for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
        m = std::move(next);
        RationalMatrix am = a * m;
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
        c[n - k] = -tr / Rational(static_cast<long long>(k));
    }
    return c;
}

// Number of sign changes in a coefficient sequence, zeros skipped.
inline std::size_t sign_changes(const RationalVector& coeffs) {
    std::size_t changes = 0;
    int last = 0;
    for (const auto& q : coeffs) {
        const int s = q.sign();
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

inline RationalMatrix matrix_from_rows(const std::vector<RationalVector>& rows, std::size_t cols) {
    RationalMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    return m;
}

// True when span(a) == span(b) for two lists of vectors of length dim.
inline bool same_span(const std::vector<RationalVector>& a, const std::vector<RationalVector>& b, std::size_t dim) {
    auto ra = rank(matrix_from_rows(a, dim));
    auto rb = rank(matrix_from_rows(b, dim));
    std::vector<RationalVector> both = a;
    both.insert(both.end(), b.begin(), b.end());
    return ra == rb && rank(matrix_from_rows(both, dim)) == ra;
}

}  // namespace crn
