#pragma once

// Analytic test fields, their exact cell averages, and the decimate-then-
// predict experiment used to compare predictors.
//
// Every field is a smooth part plus C times the indicator of a half-plane.
// The smooth parts are separable (sums of products of one-variable terms),
// so cell averages use one-variable antiderivatives written in
// cancellation-free form; the jump part is C times the clipped cell area.

#include "cwmr/errors.hpp"
#include "cwmr/grid.hpp"
#include "cwmr/mra.hpp"
#include "cwmr/predictor.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cwmr {

enum class FieldKind { g, g_tilde, h, franke_h, franke_v, smooth_trig };

inline std::string to_string(FieldKind k)
{
    switch (k) {
    case FieldKind::g:
        return "g";
    case FieldKind::g_tilde:
        return "g_tilde";
    case FieldKind::h:
        return "h";
    case FieldKind::franke_h:
        return "franke_h";
    case FieldKind::franke_v:
        return "franke_v";
    case FieldKind::smooth_trig:
        return "smooth_trig";
    }
    return "unknown";
}

inline FieldKind parse_field_kind(std::string_view name)
{
    for (FieldKind k : {FieldKind::g, FieldKind::g_tilde, FieldKind::h, FieldKind::franke_h,
                        FieldKind::franke_v, FieldKind::smooth_trig}) {
        if (name == to_string(k)) {
            return k;
        }
    }
    if (name == "gtilde") {
        return FieldKind::g_tilde;
    }
    throw ParameterError("unknown field '" + std::string(name) + "'");
}

/// The part of the plane where a x + b y + c >= 0 carries the jump.
struct HalfPlane {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    bool axis_aligned() const { return a == 0.0 || b == 0.0; }
};

struct TestField {
    FieldKind kind = FieldKind::g;
    double jump = 0.0; // C; 0 means no discontinuity

    static TestField make(FieldKind kind, std::optional<double> jump = std::nullopt)
    {
        switch (kind) {
        case FieldKind::g:
        case FieldKind::smooth_trig:
            return {kind, jump.value_or(0.0)};
        case FieldKind::g_tilde:
            return {kind, jump.value_or(16.0)};
        case FieldKind::h:
        case FieldKind::franke_h:
        case FieldKind::franke_v:
            return {kind, jump.value_or(1.0)};
        }
        return {kind, 0.0};
    }

    Domain domain() const
    {
        if (kind == FieldKind::smooth_trig) {
            return {0.0, 1.0, 0.0, 1.0};
        }
        return {-1.0, 1.0, -1.0, 1.0};
    }

    std::optional<HalfPlane> jump_line() const
    {
        if (jump == 0.0) {
            return std::nullopt;
        }
        switch (kind) {
        case FieldKind::g:
        case FieldKind::g_tilde:
        case FieldKind::franke_h:
            return HalfPlane{0.0, 1.0, 0.0};
        case FieldKind::franke_v:
            return HalfPlane{1.0, 0.0, 0.0};
        case FieldKind::h:
            return HalfPlane{1.0, 1.0, 0.0};
        case FieldKind::smooth_trig:
            return std::nullopt;
        }
        return std::nullopt;
    }

    /// Point value (for plots and spot checks; sampling never uses it).
    double operator()(double x, double y) const;
    /// Integral of the smooth part over [x0, x1] x [y0, y1].
    double smooth_integral(double x0, double x1, double y0, double y1) const;
};

namespace detail {

/// int_a^b x^p dx
inline double monomial_integral(int p, double a, double b)
{
    // (b^{p+1} - a^{p+1}) / (p+1) = (b - a) * sum_k a^k b^{p-k} / (p+1)
    double s = 0.0;
    double ak = 1.0;
    for (int k = 0; k <= p; ++k) {
        s += ak * std::pow(b, p - k);
        ak *= a;
    }
    return (b - a) * s / (p + 1);
}

/// int_a^b e^{z x} dx for complex z, without cancellation for short intervals.
inline std::complex<double> cexp_integral(std::complex<double> z, double a, double b)
{
    const std::complex<double> w = z * (b - a);
    // e^w - 1 = expm1(Re w) cos(Im w) - 2 sin^2(Im w / 2) + i e^{Re w} sin(Im w)
    const double s = std::sin(0.5 * w.imag());
    const std::complex<double> em1(std::expm1(w.real()) * std::cos(w.imag()) - 2.0 * s * s,
                                   std::exp(w.real()) * std::sin(w.imag()));
    return std::exp(z * a) * em1 / z;
}

/// int_a^b exp(-(k x - c)^2 / s) dx
inline double gauss_integral(double k, double c, double s, double a, double b)
{
    const double rs = std::sqrt(s);
    const double u = (k * a - c) / rs;
    const double v = (k * b - c) / rs;
    double diff;
    if (u > 0.0) {
        diff = std::erfc(u) - std::erfc(v);
    } else if (v < 0.0) {
        diff = std::erfc(-v) - std::erfc(-u);
    } else {
        diff = std::erf(v) - std::erf(u);
    }
    return rs / k * 0.5 * std::sqrt(std::numbers::pi) * diff;
}

/// int_a^b exp(-(k x + c) / s) dx
inline double exp_linear_integral(double k, double c, double s, double a, double b)
{
    // e^{-(k a + c)/s} (1 - e^{-k (b - a)/s}) * s / k
    return -std::exp(-(k * a + c) / s) * std::expm1(-k * (b - a) / s) * s / k;
}

struct Monomial {
    double c;
    int px;
    int py;
};

inline constexpr std::array<Monomial, 9> kPolynomialG{{
    {1.0, 3, 0},
    {-1.0, 0, 3},
    {2.1, 2, 2},
    {1.0, 2, 0},
    {-0.1, 0, 2},
    {-1.0, 0, 1},
    {1.0, 1, 0},
    {-0.01, 1, 1},
    {1.0, 0, 0},
}};

/// Area of the rectangle [x0,x1] x [y0,y1] inside a x + b y + c >= 0.
inline double clipped_area(const HalfPlane& hp, double x0, double x1, double y0, double y1)
{
    // Sutherland-Hodgman against a single edge, then the shoelace formula.
    const std::array<std::array<double, 2>, 4> rect{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
    std::array<std::array<double, 2>, 8> poly{};
    std::size_t n = 0;
    auto side = [&](const std::array<double, 2>& p) { return hp.a * p[0] + hp.b * p[1] + hp.c; };
    for (std::size_t k = 0; k < 4; ++k) {
        const auto& p = rect[k];
        const auto& q = rect[(k + 1) % 4];
        const double sp = side(p);
        const double sq = side(q);
        if (sp >= 0.0) {
            poly[n++] = p;
        }
        if ((sp >= 0.0) != (sq >= 0.0)) {
            const double t = sp / (sp - sq);
            poly[n++] = {p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
        }
    }
    double area = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& p = poly[k];
        const auto& q = poly[(k + 1) % n];
        area += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * std::abs(area);
}

} // namespace detail

inline double TestField::operator()(double x, double y) const
{
    double v = 0.0;
    switch (kind) {
    case FieldKind::g:
    case FieldKind::g_tilde:
        for (const auto& m : detail::kPolynomialG) {
            v += m.c * std::pow(x, m.px) * std::pow(y, m.py);
        }
        break;
    case FieldKind::h:
        v = std::exp(x + y) * std::cos(x - y);
        break;
    case FieldKind::franke_h:
    case FieldKind::franke_v:
        v = 0.75 * std::exp(-(9 * x - 2) * (9 * x - 2) / 4 - (9 * y - 2) * (9 * y - 2) / 4)
            + 0.75 * std::exp(-(9 * x + 1) * (9 * x + 1) / 49 - (9 * y + 1) / 10)
            + 0.5 * std::exp(-(9 * x - 7) * (9 * x - 7) / 4 - (9 * y - 3) * (9 * y - 3) / 4)
            - 0.2 * std::exp(-(9 * x - 4) * (9 * x - 4) - (9 * y - 7) * (9 * y - 7));
        break;
    case FieldKind::smooth_trig:
        v = std::sin(std::numbers::pi * x) * std::cos(std::numbers::pi * y);
        break;
    }
    if (const auto line = jump_line(); line && line->a * x + line->b * y + line->c >= 0.0) {
        // h jumps on x + y > 0 only; the line itself has measure zero.
        if (!(kind == FieldKind::h && x + y == 0.0)) {
            v += jump;
        }
    }
    return v;
}

inline double TestField::smooth_integral(double x0, double x1, double y0, double y1) const
{
    using detail::gauss_integral;
    switch (kind) {
    case FieldKind::g:
    case FieldKind::g_tilde: {
        double s = 0.0;
        for (const auto& m : detail::kPolynomialG) {
            s += m.c * detail::monomial_integral(m.px, x0, x1) * detail::monomial_integral(m.py, y0, y1);
        }
        return s;
    }
    case FieldKind::h: {
        // e^{x+y} cos(x-y) = Re(e^{(1+i)x} e^{(1-i)y})
        const std::complex<double> ix = detail::cexp_integral({1.0, 1.0}, x0, x1);
        const std::complex<double> iy = detail::cexp_integral({1.0, -1.0}, y0, y1);
        return (ix * iy).real();
    }
    case FieldKind::franke_h:
    case FieldKind::franke_v:
        return 0.75 * gauss_integral(9, 2, 4, x0, x1) * gauss_integral(9, 2, 4, y0, y1)
               + 0.75 * gauss_integral(9, -1, 49, x0, x1) * detail::exp_linear_integral(9, 1, 10, y0, y1)
               + 0.5 * gauss_integral(9, 7, 4, x0, x1) * gauss_integral(9, 3, 4, y0, y1)
               - 0.2 * gauss_integral(9, 4, 1, x0, x1) * gauss_integral(9, 7, 1, y0, y1);
    case FieldKind::smooth_trig: {
        constexpr double pi = std::numbers::pi;
        // int sin(pi x) = 2 sin(pi m) sin(pi w / 2) / pi, int cos(pi y) likewise
        const double sx = 2.0 * std::sin(pi * 0.5 * (x0 + x1)) * std::sin(pi * 0.5 * (x1 - x0)) / pi;
        const double cy = 2.0 * std::cos(pi * 0.5 * (y0 + y1)) * std::sin(pi * 0.5 * (y1 - y0)) / pi;
        return sx * cy;
    }
    }
    return 0.0;
}

/// Cell averages on an N x N grid over `domain` from a callable returning
/// the integral over [x0, x1] x [y0, y1].
template <class Integral>
CellGrid sample_cell_averages(std::size_t n, const Domain& domain, Integral&& integral)
{
    if (n < 2) {
        throw DimensionError("sample_cell_averages: N must be >= 2");
    }
    const double w = domain.width();
    const double m = static_cast<double>(n);
    CellGrid g(n, domain);
    for (std::size_t i = 0; i < n; ++i) {
        const double x0 = domain.x_lo + w * static_cast<double>(i) / m;
        const double x1 = domain.x_lo + w * static_cast<double>(i + 1) / m;
        for (std::size_t j = 0; j < n; ++j) {
            const double y0 = domain.y_lo + w * static_cast<double>(j) / m;
            const double y1 = domain.y_lo + w * static_cast<double>(j + 1) / m;
            g(i, j) = integral(x0, x1, y0, y1) / ((x1 - x0) * (y1 - y0));
        }
    }
    return g;
}

/// Exact cell averages of `field` on an N x N grid over its domain. Throws
/// if an axis-aligned jump passes through the interior of a cell.
inline CellGrid sample_cell_averages(const TestField& field, std::size_t n)
{
    const auto line = field.jump_line();
    return sample_cell_averages(n, field.domain(), [&](double x0, double x1, double y0, double y1) {
        double v = field.smooth_integral(x0, x1, y0, y1);
        if (line) {
            const double area = detail::clipped_area(*line, x0, x1, y0, y1);
            const double cell = (x1 - x0) * (y1 - y0);
            if (line->axis_aligned() && area > 1e-12 * cell && area < (1.0 - 1e-12) * cell) {
                throw UnsupportedError("sample_cell_averages: the jump line crosses a cell; use an even N");
            }
            v += field.jump * area;
        }
        return v;
    });
}

enum class ErrorRegion {
    /// Fine cells whose coarse parent has a full stencil inside the grid.
    interior,
    full,
};

/// Range [lo, hi) of fine indices counted by `region` on an n-cell axis.
inline std::pair<std::size_t, std::size_t> region_bounds(ErrorRegion region, std::size_t n, int r)
{
    if (region == ErrorRegion::full) {
        return {0, n};
    }
    const auto margin = static_cast<std::size_t>(2 * (r - 1));
    if (2 * margin >= n) {
        throw DimensionError("interior region is empty for N = " + std::to_string(n));
    }
    return {margin, n - margin};
}

/// (h^2 sum |a - b|^2)^{1/2} over the region, h the spacing of `a`.
inline double l2_cell_error(const CellGrid& a, const CellGrid& b, ErrorRegion region, int r)
{
    if (a.size() != b.size()) {
        throw DimensionError("l2_cell_error: size mismatch");
    }
    const auto [lo, hi] = region_bounds(region, a.size(), r);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        for (std::size_t j = lo; j < hi; ++j) {
            const double d = a(i, j) - b(i, j);
            s += d * d;
        }
    }
    const double h = a.spacing();
    return std::sqrt(h * h * s);
}

inline double max_cell_error(const CellGrid& a, const CellGrid& b, ErrorRegion region, int r)
{
    if (a.size() != b.size()) {
        throw DimensionError("max_cell_error: size mismatch");
    }
    const auto [lo, hi] = region_bounds(region, a.size(), r);
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        for (std::size_t j = lo; j < hi; ++j) {
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
        }
    }
    return m;
}

struct ExperimentResult {
    TestField field;
    std::size_t n = 0;
    PredictorKind predictor = PredictorKind::linear;
    double e2 = 0.0;
    double runtime_ms = 0.0;
};

/// One level down and back up without details; E2 against the exact fine
/// averages.
inline ExperimentResult run_function_experiment(const TestField& field, std::size_t n,
                                                const PredictorConfig& config,
                                                ErrorRegion region = ErrorRegion::interior)
{
    if (n % 2 != 0) {
        throw DimensionError("run_function_experiment: N must be even");
    }
    const auto start = std::chrono::steady_clock::now();
    const CellGrid fine = sample_cell_averages(field, n);
    const CellGrid pred = Predictor(config).predict(decimate(fine));
    const double e2 = l2_cell_error(pred, fine, region, config.r);
    const auto stop = std::chrono::steady_clock::now();
    return {field, n, config.kind, e2,
            std::chrono::duration<double, std::milli>(stop - start).count()};
}

struct ConvergenceRow {
    std::size_t n = 0;
    double e2 = 0.0;
    std::optional<double> order; // log2(E2(N/2) / E2(N)), absent on the first row
};

inline std::vector<ConvergenceRow> convergence_study(const TestField& field, const PredictorConfig& config,
                                                     const std::vector<std::size_t>& ns,
                                                     ErrorRegion region = ErrorRegion::interior)
{
    std::vector<ConvergenceRow> rows;
    for (std::size_t k = 0; k < ns.size(); ++k) {
        if (k > 0 && ns[k] != 2 * ns[k - 1]) {
            throw ParameterError("convergence_study: sizes must double");
        }
        ConvergenceRow row{ns[k], run_function_experiment(field, ns[k], config, region).e2, std::nullopt};
        if (k > 0 && row.e2 > 0.0 && rows.back().e2 > 0.0) {
            row.order = std::log2(rows.back().e2 / row.e2);
        }
        rows.push_back(row);
    }
    return rows;
}

/// Least-squares slope of log2(E2) against log2(1/N).
inline double fitted_order(const std::vector<ConvergenceRow>& rows)
{
    if (rows.size() < 2) {
        throw ParameterError("fitted_order: need at least two rows");
    }
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& row : rows) {
        const double x = -std::log2(static_cast<double>(row.n));
        const double y = std::log2(row.e2);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const auto k = static_cast<double>(rows.size());
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

} // namespace cwmr
