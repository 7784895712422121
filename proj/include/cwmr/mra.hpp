#pragma once

// Harten multiresolution on cell averages: forward/inverse transform,
// thresholding, sparsity and error metrics.
//
// Per level the fine grid is decimated, predicted back from the coarse grid
// and the prediction errors of three children are kept:
//   d1 = (odd, odd), d2 = (even x, odd y), d3 = (odd x, even y)
// (storage parities (0,0), (1,0), (0,1)). The (even, even) error is the
// negative sum of the other three and is not stored.

#include "cwmr/errors.hpp"
#include "cwmr/grid.hpp"
#include "cwmr/predictor.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cwmr {

struct DetailLevel {
    CellGrid d1;
    CellGrid d2;
    CellGrid d3;

    std::size_t size() const { return d1.size(); }

    CellGrid& plane(int k) { return k == 0 ? d1 : (k == 1 ? d2 : d3); }
    const CellGrid& plane(int k) const { return k == 0 ? d1 : (k == 1 ? d2 : d3); }
};

struct Representation {
    PredictorConfig config;
    double eps_finest = 0.0; // threshold applied so far (0: none)
    CellGrid coarse;
    /// Ordered coarse to fine.
    std::vector<DetailLevel> levels;

    int depth() const { return static_cast<int>(levels.size()); }
    std::size_t fine_size() const { return coarse.size() << levels.size(); }
};

struct ThresholdSchedule {
    double eps_finest = 0.0;

    /// Threshold for detail level `index` (0 = coarsest) out of `count`.
    double at(int index, int count) const
    {
        return std::ldexp(eps_finest, -(count - 1 - index));
    }
};

namespace detail {

inline void require_transformable(std::size_t n, int levels, int r)
{
    if (levels < 0) {
        throw ParameterError("forward: number of levels must be >= 0");
    }
    if (levels >= static_cast<int>(sizeof(std::size_t) * 8 - 1)
        || n % (std::size_t{1} << levels) != 0) {
        throw DimensionError("forward: size " + std::to_string(n) + " is not divisible by 2^"
                             + std::to_string(levels));
    }
    const std::size_t coarsest = n >> levels;
    const auto need = static_cast<std::size_t>(2 * r - 1);
    if (levels > 0 && coarsest < need) {
        throw DimensionError("forward: coarsest grid " + std::to_string(coarsest)
                             + " is smaller than the " + std::to_string(need)
                             + "-cell stencil; use fewer levels or a larger image");
    }
}

} // namespace detail

inline Representation forward(const CellGrid& fine, int levels, const PredictorConfig& config)
{
    config.validate();
    detail::require_transformable(fine.size(), levels, config.r);
    const Predictor predictor(config);

    Representation rep;
    rep.config = config;
    std::vector<DetailLevel> fine_to_coarse;
    CellGrid current = fine;
    for (int l = 0; l < levels; ++l) {
        CellGrid coarse = decimate(current);
        const CellGrid pred = predictor.predict(coarse);
        const std::size_t m = coarse.size();
        DetailLevel d{CellGrid(m, coarse.domain(), coarse.level()),
                      CellGrid(m, coarse.domain(), coarse.level()),
                      CellGrid(m, coarse.domain(), coarse.level())};
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                d.d1(i, j) = current(2 * i, 2 * j) - pred(2 * i, 2 * j);
                d.d2(i, j) = current(2 * i + 1, 2 * j) - pred(2 * i + 1, 2 * j);
                d.d3(i, j) = current(2 * i, 2 * j + 1) - pred(2 * i, 2 * j + 1);
            }
        }
        fine_to_coarse.push_back(std::move(d));
        current = std::move(coarse);
    }
    rep.coarse = std::move(current);
    rep.levels.assign(std::make_move_iterator(fine_to_coarse.rbegin()),
                      std::make_move_iterator(fine_to_coarse.rend()));
    return rep;
}

/// One refinement step: predict from `coarse` and add the details.
inline CellGrid refine(const Predictor& predictor, const CellGrid& coarse, const DetailLevel& d)
{
    const std::size_t m = coarse.size();
    if (d.d1.size() != m || d.d2.size() != m || d.d3.size() != m) {
        throw DimensionError("inverse: detail planes do not match the coarse grid");
    }
    CellGrid fine = predictor.predict(coarse);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double a = fine(2 * i, 2 * j) + d.d1(i, j);
            const double b = fine(2 * i + 1, 2 * j) + d.d2(i, j);
            const double c = fine(2 * i, 2 * j + 1) + d.d3(i, j);
            fine(2 * i, 2 * j) = a;
            fine(2 * i + 1, 2 * j) = b;
            fine(2 * i, 2 * j + 1) = c;
            fine(2 * i + 1, 2 * j + 1) = 4.0 * coarse(i, j) - ((a + b) + c);
        }
    }
    return fine;
}

inline CellGrid inverse(const Representation& rep)
{
    rep.config.validate();
    const Predictor predictor(rep.config);
    CellGrid current = rep.coarse;
    for (const auto& d : rep.levels) {
        current = refine(predictor, current, d);
    }
    return current;
}

/// Zeroes every detail with |d| <= eps_level (inclusive); eps halves per
/// level toward the coarse end.
inline Representation threshold(Representation rep, const ThresholdSchedule& schedule)
{
    if (!(schedule.eps_finest >= 0.0)) {
        throw ParameterError("threshold: eps must be >= 0");
    }
    const int count = rep.depth();
    for (int l = 0; l < count; ++l) {
        const double eps = schedule.at(l, count);
        for (int k = 0; k < 3; ++k) {
            for (double& v : rep.levels[static_cast<std::size_t>(l)].plane(k).values()) {
                if (std::abs(v) <= eps) {
                    v = 0.0;
                }
            }
        }
    }
    rep.eps_finest = schedule.eps_finest;
    return rep;
}

inline std::size_t nnz(const Representation& rep)
{
    std::size_t count = 0;
    for (const auto& level : rep.levels) {
        for (int k = 0; k < 3; ++k) {
            for (double v : level.plane(k).values()) {
                count += v != 0.0 ? 1 : 0;
            }
        }
    }
    return count;
}

struct Metrics {
    double e1 = 0.0;
    double e2 = 0.0;
};

/// E1 = (1/N^2) sum |b - a|, E2 = (1/N) sqrt(sum (b - a)^2).
inline Metrics metrics(const CellGrid& a, const CellGrid& b)
{
    if (a.size() != b.size()) {
        throw DimensionError("metrics: grids are " + std::to_string(a.size()) + " and "
                             + std::to_string(b.size()) + " cells wide");
    }
    const auto av = a.values();
    const auto bv = b.values();
    double s1 = 0.0;
    double s2 = 0.0;
    for (std::size_t k = 0; k < av.size(); ++k) {
        const double d = bv[k] - av[k];
        s1 += std::abs(d);
        s2 += d * d;
    }
    const auto n = static_cast<double>(a.size());
    return {s1 / (n * n), std::sqrt(s2) / n};
}

inline Metrics average(std::span<const Metrics> per_channel)
{
    if (per_channel.empty()) {
        throw ParameterError("average: no channels");
    }
    Metrics m;
    for (const auto& c : per_channel) {
        m.e1 += c.e1;
        m.e2 += c.e2;
    }
    const auto k = static_cast<double>(per_channel.size());
    return {m.e1 / k, m.e2 / k};
}

} // namespace cwmr
