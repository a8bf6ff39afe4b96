#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crn {

using SymbolId = std::uint32_t;
using Monomial = std::vector<SymbolId>;  // sorted, repeats allowed after symbol identification

namespace detail {

inline long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("polynomial coefficient overflow");
    return r;
}

inline long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("polynomial coefficient overflow");
    return r;
}

inline Monomial merge_monomials(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace detail

// Sparse polynomial with integer coefficients over numbered symbols.
class Polynomial {
public:
    using Terms = std::map<Monomial, long long>;

    Polynomial() = default;
    explicit Polynomial(long long constant) {
        if (constant != 0) terms_[Monomial{}] = constant;
    }
    static Polynomial symbol(SymbolId s, long long coeff = 1) {
        Polynomial p;
        if (coeff != 0) p.terms_[Monomial{s}] = coeff;
        return p;
    }
    static Polynomial monomial(Monomial m, long long coeff) {
        std::sort(m.begin(), m.end());
        Polynomial p;
        if (coeff != 0) p.terms_[std::move(m)] = coeff;
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(Monomial m, long long coeff) {
        if (coeff == 0) return;
        auto [it, inserted] = terms_.try_emplace(std::move(m), coeff);
        if (!inserted) {
            it->second = detail::checked_add(it->second, coeff);
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    Polynomial operator-() const {
        Polynomial p;
        for (const auto& [m, c] : terms_) p.terms_[m] = -c;
        return p;
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial p;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) p.add_term(detail::merge_monomials(ma, mb), detail::checked_mul(ca, cb));
        return p;
    }
    friend Polynomial operator*(long long s, const Polynomial& a) {
        Polynomial p;
        if (s == 0) return p;
        for (const auto& [m, c] : a.terms_) p.terms_[m] = detail::checked_mul(s, c);
        return p;
    }
    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    bool is_multilinear() const {
        for (const auto& [m, c] : terms_)
            if (std::adjacent_find(m.begin(), m.end()) != m.end()) return false;
        return true;
    }

    // +1 if all coefficients positive, -1 if all negative, 0 if mixed or zero.
    int uniform_sign() const {
        bool pos = false, neg = false;
        for (const auto& [m, c] : terms_) (c > 0 ? pos : neg) = true;
        if (pos && !neg) return 1;
        if (neg && !pos) return -1;
        return 0;
    }
    bool has_mixed_signs() const {
        bool pos = false, neg = false;
        for (const auto& [m, c] : terms_) (c > 0 ? pos : neg) = true;
        return pos && neg;
    }

    // Renames every symbol through `map`; like monomials are combined.
    Polynomial rename(const std::vector<SymbolId>& map) const {
        Polynomial p;
        for (const auto& [m, c] : terms_) {
            Monomial r;
            r.reserve(m.size());
            for (auto s : m) r.push_back(map.at(s));
            std::sort(r.begin(), r.end());
            p.add_term(std::move(r), c);
        }
        return p;
    }

    // Collects the coefficient of s^d for each power d of one symbol.
    std::map<int, Polynomial> split_by_power(SymbolId s) const {
        std::map<int, Polynomial> out;
        for (const auto& [m, c] : terms_) {
            Monomial rest;
            int d = 0;
            for (auto x : m) {
                if (x == s)
                    ++d;
                else
                    rest.push_back(x);
            }
            out[d].add_term(std::move(rest), c);
        }
        return out;
    }

    template <class T>
    T evaluate(const std::vector<T>& values) const {
        T acc = 0;
        for (const auto& [m, c] : terms_) acc += term_value(m, c, values);
        return acc;
    }
    template <class T>
    T magnitude(const std::vector<T>& values) const {
        T acc = 0;
        for (const auto& [m, c] : terms_) {
            T v = term_value(m, c, values);
            acc += v < 0 ? -v : v;
        }
        return acc;
    }
    template <class T>
    static T term_value(const Monomial& m, long long c, const std::vector<T>& values) {
        T v = static_cast<T>(c);
        for (auto s : m) v *= values.at(s);
        return v;
    }

    // Content (gcd of coefficients), signed so that the first term's coefficient divided by it is positive.
    long long content() const {
        long long g = 0;
        for (const auto& [m, c] : terms_) g = std::gcd(g, c < 0 ? -c : c);
        if (!terms_.empty() && terms_.begin()->second < 0) g = -g;
        return g;
    }

    std::string to_string(const std::function<std::string(SymbolId)>& name) const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            long long a = c < 0 ? -c : c;
            if (first)
                out += c < 0 ? "-" : "";
            else
                out += c < 0 ? " - " : " + ";
            first = false;
            std::string body;
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (i) body += "*";
                body += name(m[i]);
            }
            if (m.empty())
                out += std::to_string(a);
            else if (a == 1)
                out += body;
            else
                out += std::to_string(a) + "*" + body;
        }
        return out;
    }

private:
    Terms terms_;
};

}  // namespace crn
