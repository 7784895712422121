#pragma once

// Smoothness indicators for the r x r sub-stencils of a (2r-1)^2 window.
//
// For sub-stencil k = (k1, k2) with bi-degree (r-1) reconstruction q_k,
//
//   I_k = sum_{(m,n) != (0,0), 0 <= m,n <= r-1}
//           h^{2(m+n)-2} * int_{center cell} (d^{m+n} q_k / dx^m dy^n)^2,
//
// which is an h-free quadratic form d^T Q_k d in the r^2 sub-window averages.
// Q_k factors as sum_{(m,n)} A_m(k1) (x) A_n(k2) with the 1D Gram matrices
// A_m(k)[a][a'] = int_{r-1}^{r} phi_a^(m) phi_a'^(m) dx, phi from
// reconstruction_basis(k, r).

#include "cwmr/errors.hpp"
#include "cwmr/filters.hpp"
#include "cwmr/polynomial.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cwmr {

struct WenoParams {
    double epsilon = 0.0; // regularizer, >= 0
    double t = 2.0;       // exponent, > 0

    void validate() const
    {
        if (!(epsilon >= 0.0)) {
            throw ParameterError("WenoParams: epsilon must be >= 0");
        }
        if (!(t > 0.0)) {
            throw ParameterError("WenoParams: t must be > 0");
        }
    }
};

class SmoothnessFormSet {
public:
    int r() const { return r_; }
    std::size_t count() const { return exact_.size(); }
    /// Number of sub-window cells a form acts on (r^2).
    std::size_t form_size() const { return static_cast<std::size_t>(r_ * r_); }
    std::size_t window_width() const { return static_cast<std::size_t>(2 * r_ - 1); }

    /// (k1, k2) offset of form k = k1 * r + k2 inside the window.
    std::pair<int, int> offset(std::size_t k) const
    {
        return {static_cast<int>(k) / r_, static_cast<int>(k) % r_};
    }

    /// Row-major (r^2 x r^2) matrix of form k; sub-window cell (a, b) is
    /// flattened to a * r + b with a along x.
    std::span<const double> form(std::size_t k) const { return forms_.at(k); }
    std::span<const Rational> exact_form(std::size_t k) const { return exact_.at(k); }

    friend SmoothnessFormSet build_forms(int r);

private:
    int r_ = 0;
    std::vector<std::vector<Rational>> exact_;
    std::vector<std::vector<double>> forms_;
};

namespace detail {

/// Gram matrices A_m(k) for m = 0..r-1 over the center cell.
inline std::vector<std::vector<Rational>> derivative_grams(int r, int k)
{
    const auto basis = reconstruction_basis(k, r);
    const Rational lo(r - 1);
    const Rational hi(r);
    std::vector<std::vector<Rational>> grams;
    for (int m = 0; m < r; ++m) {
        std::vector<Polynomial> d;
        for (const auto& phi : basis) {
            d.push_back(phi.derivative(static_cast<std::size_t>(m)));
        }
        std::vector<Rational> a(static_cast<std::size_t>(r * r));
        for (int i = 0; i < r; ++i) {
            for (int j = i; j < r; ++j) {
                const Rational v =
                    (d[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(j)]).integrate(lo, hi);
                a[static_cast<std::size_t>(i * r + j)] = v;
                a[static_cast<std::size_t>(j * r + i)] = v;
            }
        }
        grams.push_back(std::move(a));
    }
    return grams;
}

} // namespace detail

inline SmoothnessFormSet build_forms(int r)
{
    if (r < 2 || r > 8) {
        throw UnsupportedError("build_forms: r = " + std::to_string(r)
                               + " is outside the supported range 2..8");
    }
    std::vector<std::vector<std::vector<Rational>>> grams;
    for (int k = 0; k < r; ++k) {
        grams.push_back(detail::derivative_grams(r, k));
    }

    SmoothnessFormSet set;
    set.r_ = r;
    const int n = r * r;
    for (int k1 = 0; k1 < r; ++k1) {
        for (int k2 = 0; k2 < r; ++k2) {
            std::vector<Rational> q(static_cast<std::size_t>(n * n), Rational(0));
            for (int m = 0; m < r; ++m) {
                for (int nn = 0; nn < r; ++nn) {
                    if (m == 0 && nn == 0) {
                        continue;
                    }
                    const auto& ax = grams[static_cast<std::size_t>(k1)][static_cast<std::size_t>(m)];
                    const auto& ay = grams[static_cast<std::size_t>(k2)][static_cast<std::size_t>(nn)];
                    for (int a = 0; a < r; ++a) {
                        for (int b = 0; b < r; ++b) {
                            for (int a2 = 0; a2 < r; ++a2) {
                                const Rational& x = ax[static_cast<std::size_t>(a * r + a2)];
                                if (x == 0) {
                                    continue;
                                }
                                for (int b2 = 0; b2 < r; ++b2) {
                                    q[static_cast<std::size_t>((a * r + b) * n + (a2 * r + b2))] +=
                                        x * ay[static_cast<std::size_t>(b * r + b2)];
                                }
                            }
                        }
                    }
                }
            }
            set.forms_.push_back(to_double(q));
            set.exact_.push_back(std::move(q));
        }
    }
    return set;
}

/// Indicator values I_k for all r^2 sub-stencils of a (2r-1)^2 window
/// (row-major, first index along x). `out` must hold r^2 values.
inline void evaluate_indicators(std::span<const double> window, const SmoothnessFormSet& forms,
                                std::span<double> out)
{
    const int r = forms.r();
    const std::size_t w = forms.window_width();
    if (window.size() != w * w) {
        throw DimensionError("evaluate_indicators: window has " + std::to_string(window.size())
                             + " values, expected " + std::to_string(w * w));
    }
    if (out.size() != forms.count()) {
        throw DimensionError("evaluate_indicators: output span has wrong size");
    }
    const std::size_t n = forms.form_size();
    // Forms annihilate constants, so shifting by the center value is exact
    // in exact arithmetic and keeps constant windows at exactly zero.
    const double shift = window[static_cast<std::size_t>(r - 1) * w + static_cast<std::size_t>(r - 1)];
    double d[64];
    for (std::size_t k = 0; k < forms.count(); ++k) {
        const auto [k1, k2] = forms.offset(k);
        for (int a = 0; a < r; ++a) {
            for (int b = 0; b < r; ++b) {
                d[a * r + b] = window[static_cast<std::size_t>(k1 + a) * w + static_cast<std::size_t>(k2 + b)] - shift;
            }
        }
        const auto q = forms.form(k);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                row += q[i * n + j] * d[j];
            }
            acc += d[i] * row;
        }
        out[k] = acc > 0.0 ? acc : 0.0;
    }
}

inline std::vector<double> evaluate_indicators(std::span<const double> window,
                                               const SmoothnessFormSet& forms)
{
    std::vector<double> out(forms.count());
    evaluate_indicators(window, forms, out);
    return out;
}

} // namespace cwmr
