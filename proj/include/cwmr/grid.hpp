#pragma once

// Cell-average grids on a uniform dyadic mesh.
//
// Index map: the math uses 1-based cells (i, j) = 1..n with cell (i, j)
// covering [x_lo + (i-1)h, x_lo + ih] x [y_lo + (j-1)h, y_lo + jh].
// Storage is 0-based: cell (i, j) lives at operator()(i-1, j-1), row-major
// with the row index i running along x and the column index j along y.
// Children of coarse cell (i, j) are the fine cells (2i-1+px, 2j-1+py) for
// parities px, py in {0, 1}, i.e. storage (2i'+px, 2j'+py) with i' = i-1.

#include "cwmr/errors.hpp"

#include <bit>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cwmr {

struct Domain {
    double x_lo = 0.0;
    double x_hi = 1.0;
    double y_lo = 0.0;
    double y_hi = 1.0;

    double width() const { return x_hi - x_lo; }
    double height() const { return y_hi - y_lo; }

    friend bool operator==(const Domain&, const Domain&) = default;
};

class CellGrid {
public:
    CellGrid() = default;

    /// n x n zero-initialized cells over `domain`. A negative level is
    /// replaced by log2(n) when n is a power of two, else 0.
    explicit CellGrid(std::size_t n, Domain domain = {}, int level = -1, double fill = 0.0)
        : n_(n), level_(level), domain_(domain), values_(n * n, fill)
    {
        if (n == 0) {
            throw DimensionError("CellGrid: size must be positive");
        }
        if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
            throw DimensionError("CellGrid: empty domain");
        }
        const double hx = domain.width() / static_cast<double>(n);
        const double hy = domain.height() / static_cast<double>(n);
        if (std::abs(hx - hy) > 1e-12 * hx) {
            throw DimensionError("CellGrid: cells must be square");
        }
        if (level_ < 0) {
            level_ = std::has_single_bit(n) ? static_cast<int>(std::bit_width(n)) - 1 : 0;
        }
    }

    static CellGrid from_values(std::size_t n, std::vector<double> values, Domain domain = {},
                                int level = -1)
    {
        if (values.size() != n * n) {
            throw DimensionError("CellGrid: expected " + std::to_string(n * n) + " values, got "
                                 + std::to_string(values.size()));
        }
        CellGrid g(n, domain, level);
        g.values_ = std::move(values);
        return g;
    }

    std::size_t size() const { return n_; }
    int level() const { return level_; }
    const Domain& domain() const { return domain_; }
    double spacing() const { return domain_.width() / static_cast<double>(n_); }

    double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    bool all_finite() const
    {
        for (double v : values_) {
            if (!std::isfinite(v)) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const CellGrid&, const CellGrid&) = default;

private:
    std::size_t n_ = 0;
    int level_ = 0;
    Domain domain_{};
    std::vector<double> values_;
};

/// Node values of the primitive F(x, y) = int_{x_lo}^x int_{y_lo}^y f on the
/// (n+1) x (n+1) grid nodes. Each node holds an unevaluated sum hi + lo
/// (double-double) so that differencing back to cell averages stays accurate
/// to a few ulps of the cell values even at 512^2.
class PrimitiveGrid {
public:
    PrimitiveGrid() = default;
    PrimitiveGrid(std::size_t n, Domain domain, int level)
        : n_(n), level_(level), domain_(domain), hi_((n + 1) * (n + 1), 0.0),
          lo_((n + 1) * (n + 1), 0.0)
    {
    }

    std::size_t cells() const { return n_; }
    std::size_t nodes() const { return n_ + 1; }
    int level() const { return level_; }
    const Domain& domain() const { return domain_; }
    double spacing() const { return domain_.width() / static_cast<double>(n_); }

    double operator()(std::size_t i, std::size_t j) const
    {
        return hi_[i * (n_ + 1) + j] + lo_[i * (n_ + 1) + j];
    }
    double hi(std::size_t i, std::size_t j) const { return hi_[i * (n_ + 1) + j]; }
    double lo(std::size_t i, std::size_t j) const { return lo_[i * (n_ + 1) + j]; }

    void set(std::size_t i, std::size_t j, double hi, double lo = 0.0)
    {
        hi_[i * (n_ + 1) + j] = hi;
        lo_[i * (n_ + 1) + j] = lo;
    }

private:
    std::size_t n_ = 0;
    int level_ = 0;
    Domain domain_{};
    std::vector<double> hi_;
    std::vector<double> lo_;
};

enum class BoundaryPolicy {
    /// Half-sample symmetric: the ghost k cells outside an edge copies the
    /// interior cell k cells inside it (1-based: ghost_{1-k} = cell_k).
    reflect,
};

namespace detail {

struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;
};

inline DoubleDouble two_sum(double a, double b)
{
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DoubleDouble two_prod(double a, double b)
{
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DoubleDouble add(DoubleDouble a, DoubleDouble b)
{
    DoubleDouble s = two_sum(a.hi, b.hi);
    DoubleDouble t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return two_sum(s.hi, s.lo);
}

inline DoubleDouble negate(DoubleDouble a) { return {-a.hi, -a.lo}; }

} // namespace detail

/// 0-based index of the interior cell that a (possibly ghost) index k maps to
/// under half-sample reflection on n cells. Valid for -n <= k < 2n.
inline std::ptrdiff_t reflect_index(std::ptrdiff_t k, std::ptrdiff_t n)
{
    if (k < 0) {
        return -k - 1;
    }
    if (k >= n) {
        return 2 * n - 1 - k;
    }
    return k;
}

/// Quarter-sum decimation: coarse(i, j) = mean of its four children.
inline CellGrid decimate(const CellGrid& fine)
{
    const std::size_t n = fine.size();
    if (n % 2 != 0) {
        throw DimensionError("decimate: grid size " + std::to_string(n) + " is odd");
    }
    const std::size_t m = n / 2;
    CellGrid coarse(m, fine.domain(), fine.level() - 1);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double s = (fine(2 * i, 2 * j) + fine(2 * i + 1, 2 * j))
                             + (fine(2 * i, 2 * j + 1) + fine(2 * i + 1, 2 * j + 1));
            coarse(i, j) = 0.25 * s;
        }
    }
    return coarse;
}

/// F(i, j) = h^2 * sum_{s <= i, t <= j} fbar(s, t) (1-based), F = 0 on the
/// first row and column. Accumulated row-major in double-double.
inline PrimitiveGrid cells_to_primitive(const CellGrid& g)
{
    using detail::DoubleDouble;
    const std::size_t n = g.size();
    const double h = g.spacing();
    const DoubleDouble h2 = detail::two_prod(h, h);
    PrimitiveGrid F(n, g.domain(), g.level());

    std::vector<DoubleDouble> column(n + 1); // running F(i-1, .)
    for (std::size_t i = 1; i <= n; ++i) {
        DoubleDouble row{}; // sum over t <= j of fbar(i, t)
        for (std::size_t j = 1; j <= n; ++j) {
            row = detail::add(row, DoubleDouble{g(i - 1, j - 1), 0.0});
            // row * h^2 in double-double
            DoubleDouble p = detail::two_prod(row.hi, h2.hi);
            p.lo += row.hi * h2.lo + row.lo * h2.hi;
            p = detail::two_sum(p.hi, p.lo);
            column[j] = detail::add(column[j], p);
            F.set(i, j, column[j].hi, column[j].lo);
        }
    }
    return F;
}

/// fbar(i, j) = (F(i,j) - F(i-1,j) - F(i,j-1) + F(i-1,j-1)) / h^2.
inline CellGrid primitive_to_cells(const PrimitiveGrid& F)
{
    using detail::DoubleDouble;
    const std::size_t n = F.cells();
    const double h = F.spacing();
    CellGrid g(n, F.domain(), F.level());
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            DoubleDouble s{F.hi(i, j), F.lo(i, j)};
            s = detail::add(s, detail::negate({F.hi(i - 1, j), F.lo(i - 1, j)}));
            s = detail::add(s, detail::negate({F.hi(i, j - 1), F.lo(i, j - 1)}));
            s = detail::add(s, {F.hi(i - 1, j - 1), F.lo(i - 1, j - 1)});
            g(i - 1, j - 1) = (s.hi + s.lo) / (h * h);
        }
    }
    return g;
}

/// Pads the grid by `halo` ghost cells on every side.
inline CellGrid extend(const CellGrid& g, std::size_t halo,
                       BoundaryPolicy policy = BoundaryPolicy::reflect)
{
    const std::size_t n = g.size();
    if (halo > n) {
        throw UnsupportedError("extend: halo " + std::to_string(halo) + " exceeds grid size "
                               + std::to_string(n));
    }
    (void)policy; // reflect is the only policy
    const double pad = static_cast<double>(halo) * g.spacing();
    const Domain& d = g.domain();
    CellGrid out(n + 2 * halo, Domain{d.x_lo - pad, d.x_hi + pad, d.y_lo - pad, d.y_hi + pad},
                 g.level());
    const auto sn = static_cast<std::ptrdiff_t>(n);
    const auto sh = static_cast<std::ptrdiff_t>(halo);
    for (std::ptrdiff_t i = -sh; i < sn + sh; ++i) {
        const auto si = static_cast<std::size_t>(reflect_index(i, sn));
        for (std::ptrdiff_t j = -sh; j < sn + sh; ++j) {
            const auto sj = static_cast<std::size_t>(reflect_index(j, sn));
            out(static_cast<std::size_t>(i + sh), static_cast<std::size_t>(j + sh)) = g(si, sj);
        }
    }
    return out;
}

} // namespace cwmr
