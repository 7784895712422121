#pragma once

// Exact univariate polynomials over the rationals. Used offline to generate
// filter banks and smoothness forms; nothing here runs per cell.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cwmr {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::vector<double> to_double(std::span<const Rational> q)
{
    std::vector<double> out;
    out.reserve(q.size());
    for (const auto& v : q) {
        out.push_back(to_double(v));
    }
    return out;
}

/// "p/q" or "p" for integers.
inline std::string to_fraction_string(const Rational& q)
{
    const auto num = boost::multiprecision::numerator(q);
    const auto den = boost::multiprecision::denominator(q);
    if (den == 1) {
        return num.str();
    }
    return num.str() + "/" + den.str();
}

class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coefficients) : c_(std::move(coefficients)) { trim(); }

    static Polynomial constant(const Rational& v) { return Polynomial({v}); }
    /// x - root
    static Polynomial linear_factor(const Rational& root) { return Polynomial({-root, Rational(1)}); }

    std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coefficients() const { return c_; }

    Rational operator()(const Rational& x) const
    {
        Rational acc = 0;
        for (std::size_t k = c_.size(); k-- > 0;) {
            acc = acc * x + c_[k];
        }
        return acc;
    }

    Polynomial derivative(std::size_t times = 1) const
    {
        Polynomial p = *this;
        for (std::size_t t = 0; t < times; ++t) {
            if (p.c_.size() <= 1) {
                return {};
            }
            std::vector<Rational> d(p.c_.size() - 1);
            for (std::size_t k = 1; k < p.c_.size(); ++k) {
                d[k - 1] = p.c_[k] * static_cast<long>(k);
            }
            p = Polynomial(std::move(d));
        }
        return p;
    }

    /// Exact integral over [a, b].
    Rational integrate(const Rational& a, const Rational& b) const
    {
        Rational pa = 0;
        Rational pb = 0;
        for (std::size_t k = c_.size(); k-- > 0;) {
            const Rational coef = c_[k] / static_cast<long>(k + 1);
            pa = (pa + coef) * a;
            pb = (pb + coef) * b;
        }
        return pb - pa;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b)
    {
        std::vector<Rational> s(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t k = 0; k < a.c_.size(); ++k) {
            s[k] += a.c_[k];
        }
        for (std::size_t k = 0; k < b.c_.size(); ++k) {
            s[k] += b.c_[k];
        }
        return Polynomial(std::move(s));
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.is_zero() || b.is_zero()) {
            return {};
        }
        std::vector<Rational> p(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                p[i + j] += a.c_[i] * b.c_[j];
            }
        }
        return Polynomial(std::move(p));
    }

    friend Polynomial operator*(const Rational& s, const Polynomial& a)
    {
        std::vector<Rational> p = a.c_;
        for (auto& v : p) {
            v *= s;
        }
        return Polynomial(std::move(p));
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == 0) {
            c_.pop_back();
        }
    }

    std::vector<Rational> c_;
};

/// Lagrange basis polynomial for nodes[index] over `nodes`.
inline Polynomial lagrange_basis(std::span<const Rational> nodes, std::size_t index)
{
    Polynomial p = Polynomial::constant(1);
    for (std::size_t m = 0; m < nodes.size(); ++m) {
        if (m == index) {
            continue;
        }
        p = (Rational(1) / (nodes[index] - nodes[m])) * (p * Polynomial::linear_factor(nodes[m]));
    }
    return p;
}

} // namespace cwmr
