#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace crn {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using RationalVector = std::vector<Rational>;

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline int sign_of(const Rational& q) { return q.sign(); }
inline int sign_of(const Integer& z) { return z.sign(); }

inline std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

// Dense row-major matrix of exact rationals. Entries are kept in canonical
// reduced form by the underlying number type.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    RationalMatrix(std::initializer_list<std::initializer_list<long long>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
            for (long long v : row) data_.emplace_back(v);
        }
    }

    static RationalMatrix identity(std::size_t n) {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RationalMatrix transpose() const {
        RationalMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    RationalVector row(std::size_t i) const {
        return RationalVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                              data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }

    RationalVector col(std::size_t j) const {
        RationalVector c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    RationalMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
        RationalMatrix s(rows.size(), cols.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(rows[i], cols[j]);
        return s;
    }

    RationalVector operator*(const RationalVector& v) const {
        if (v.size() != cols_) throw std::invalid_argument("dimension mismatch in matrix-vector product");
        RationalVector out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            Rational acc = 0;
            for (std::size_t j = 0; j < cols_; ++j)
                if (!is_zero((*this)(i, j)) && !is_zero(v[j])) acc += (*this)(i, j) * v[j];
            out[i] = acc;
        }
        return out;
    }

    RationalMatrix operator*(const RationalMatrix& b) const {
        if (cols_ != b.rows_) throw std::invalid_argument("dimension mismatch in matrix product");
        RationalMatrix out(rows_, b.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rational& a = (*this)(i, k);
                if (is_zero(a)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a * b(k, j);
            }
        return out;
    }

    RationalMatrix operator-(const RationalMatrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw std::invalid_argument("dimension mismatch in subtraction");
        RationalMatrix out(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - b.data_[i];
        return out;
    }

    bool operator==(const RationalMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    bool is_integral() const {
        for (const auto& q : data_)
            if (denominator_of(q) != 1) return false;
        return true;
    }

    std::vector<std::vector<long long>> to_int_rows() const {
        std::vector<std::vector<long long>> out(rows_, std::vector<long long>(cols_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                const Rational& q = (*this)(i, j);
                if (denominator_of(q) != 1) throw std::domain_error("matrix entry is not an integer");
                out[i][j] = numerator_of(q).convert_to<long long>();
            }
        return out;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i) os << ',';
            os << '[';
            for (std::size_t j = 0; j < cols_; ++j) {
                if (j) os << ',';
                os << (*this)(i, j);
            }
            os << ']';
        }
        os << ']';
        return os.str();
    }

    static bool is_zero(const Rational& q) { return q.sign() == 0; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

inline bool is_zero_vector(const RationalVector& v) {
    for (const auto& q : v)
        if (q.sign() != 0) return false;
    return true;
}

}  // namespace crn
