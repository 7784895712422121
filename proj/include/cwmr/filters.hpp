#pragma once

// Univariate cell-average prediction filters built from the primitive.
//
// Everything is expressed in window units: the (2r-1)-cell window around the
// refined coarse cell has cells c = 0..2r-2 covering [c, c+1] and nodes
// 0..2r-1. The refined cell is c = r-1; its odd (left) child is
// [r-1, r-1/2] and its even (right) child [r-1/2, r].
//
// A sub-stencil of `width` cells starting at `first` interpolates the
// primitive at its width+1 nodes; the child prediction is the exact mean of
// the derivative of that interpolant over the child, which is linear in the
// cell averages. Ladder stage s (r <= s <= 2r-2) merges the width-s filters
// k and k+1 into the width-(s+1) filter k by Aitken-Neville at the odd-child
// midpoint x* = r - 1/2.

#include "cwmr/errors.hpp"
#include "cwmr/polynomial.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace cwmr {

enum class Child { odd, even };

using RationalFilter = std::vector<Rational>;

inline Rational odd_child_point(int r) { return Rational(2 * r - 1, 2); }

namespace detail {

inline void require_r(int r, int min_r, const char* who)
{
    if (r < min_r) {
        throw ParameterError(std::string(who) + ": r must be >= " + std::to_string(min_r) + ", got "
                             + std::to_string(r));
    }
}

inline void require_substencil(int r, int first, int width, const char* who)
{
    const int cells = 2 * r - 1;
    if (width < 1 || first < 0 || first + width > cells || first > r - 1
        || first + width - 1 < r - 1) {
        throw ParameterError(std::string(who) + ": sub-stencil [" + std::to_string(first) + ", "
                             + std::to_string(first + width) + ") must contain the center cell of a "
                             + std::to_string(cells) + "-cell window");
    }
}

} // namespace detail

/// Reconstruction basis of a sub-stencil: phi[a] is the polynomial of degree
/// width-1 whose weight multiplies cell first+a, so that the reconstruction is
/// sum_a fbar[first+a] * phi[a](x), with unit cell spacing.
inline std::vector<Polynomial> reconstruction_basis(int first, int width)
{
    std::vector<Rational> nodes;
    for (int n = 0; n <= width; ++n) {
        nodes.emplace_back(first + n);
    }
    std::vector<Polynomial> lagrange_derivs;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        lagrange_derivs.push_back(lagrange_basis(nodes, n).derivative());
    }
    // F at node n is the sum of the cells left of it, so cell a feeds nodes n > a.
    std::vector<Polynomial> basis(static_cast<std::size_t>(width));
    for (int a = 0; a < width; ++a) {
        Polynomial phi;
        for (int n = a + 1; n <= width; ++n) {
            phi = phi + lagrange_derivs[static_cast<std::size_t>(n)];
        }
        basis[static_cast<std::size_t>(a)] = phi;
    }
    return basis;
}

/// Prediction filter of the odd or even child from the sub-stencil
/// [first, first+width), embedded in the full (2r-1)-cell window.
inline RationalFilter cell_filter(int r, int first, int width, Child child = Child::odd)
{
    detail::require_r(r, 1, "cell_filter");
    detail::require_substencil(r, first, width, "cell_filter");
    const Rational left = child == Child::odd ? Rational(r - 1) : odd_child_point(r);
    const Rational right = child == Child::odd ? odd_child_point(r) : Rational(r);

    RationalFilter f(static_cast<std::size_t>(2 * r - 1), Rational(0));
    const auto basis = reconstruction_basis(first, width);
    for (int a = 0; a < width; ++a) {
        f[static_cast<std::size_t>(first + a)] =
            2 * basis[static_cast<std::size_t>(a)].integrate(left, right);
    }
    return f;
}

/// The r base filters v^r_k, k = 0..r-1, each spanning cells k..k+r-1.
inline std::vector<RationalFilter> base_cell_filters(int r)
{
    detail::require_r(r, 1, "base_cell_filters");
    std::vector<RationalFilter> out;
    for (int k = 0; k < r; ++k) {
        out.push_back(cell_filter(r, k, r));
    }
    return out;
}

/// Full-window filter for the requested child (the linear predictor).
inline RationalFilter top_cell_filter(int r, Child child = Child::odd)
{
    return cell_filter(r, 0, 2 * r - 1, child);
}

inline RationalFilter reversed(RationalFilter f)
{
    std::reverse(f.begin(), f.end());
    return f;
}

struct StagePair {
    Rational self; // weight of filter k
    Rational next; // weight of filter k+1
};

/// Aitken-Neville weights of stage s, node k, evaluated at window point x.
inline StagePair aitken_weights_at(int r, int stage, int k, const Rational& x)
{
    detail::require_r(r, 2, "aitken_stage_weights");
    if (stage < r || stage > 2 * r - 2 || k < 0 || k > 2 * r - 2 - stage) {
        throw ParameterError("aitken_stage_weights: stage " + std::to_string(stage) + ", index "
                             + std::to_string(k) + " out of range for r = " + std::to_string(r));
    }
    const Rational x_left(k);
    const Rational x_right(k + stage + 1);
    const Rational self = (x - x_right) / (x_left - x_right);
    return {self, 1 - self};
}

inline StagePair aitken_stage_weights(int r, int stage, int k)
{
    return aitken_weights_at(r, stage, k, odd_child_point(r));
}

struct FilterLadder {
    int r = 0;
    std::vector<RationalFilter> base_filters;
    /// stage_weights[s - r][k] for s = r..2r-2, k = 0..2r-2-s.
    std::vector<std::vector<StagePair>> stage_weights;
    /// Convex weights of the base filters once the ladder is expanded.
    std::vector<Rational> flattened_weights;

    int top_stage() const { return 2 * r - 1; }

    const StagePair& weights(int stage, int k) const
    {
        return stage_weights.at(static_cast<std::size_t>(stage - r)).at(static_cast<std::size_t>(k));
    }

    /// Filter k of width `stage` composed bottom-up through the ladder.
    RationalFilter filter(int stage, int k) const
    {
        if (stage < r || stage > top_stage() || k < 0 || k > 2 * r - 1 - stage) {
            throw ParameterError("FilterLadder::filter: no filter " + std::to_string(k)
                                 + " at stage " + std::to_string(stage));
        }
        if (stage == r) {
            return base_filters.at(static_cast<std::size_t>(k));
        }
        const StagePair& w = weights(stage - 1, k);
        const RationalFilter a = filter(stage - 1, k);
        const RationalFilter b = filter(stage - 1, k + 1);
        RationalFilter out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            out[i] = w.self * a[i] + w.next * b[i];
        }
        return out;
    }

    RationalFilter top_filter() const { return filter(top_stage(), 0); }
};

/// Expands the ladder into one weight per base filter.
inline std::vector<Rational> flatten_ladder(const FilterLadder& ladder)
{
    const int r = ladder.r;
    std::vector<Rational> w{Rational(1)}; // the single top node
    for (int s = 2 * r - 2; s >= r; --s) {
        std::vector<Rational> below(w.size() + 1, Rational(0));
        for (std::size_t k = 0; k < w.size(); ++k) {
            const StagePair& p = ladder.weights(s, static_cast<int>(k));
            below[k] += w[k] * p.self;
            below[k + 1] += w[k] * p.next;
        }
        w = std::move(below);
    }
    return w;
}

inline FilterLadder build_ladder(int r)
{
    detail::require_r(r, 2, "build_ladder");
    FilterLadder ladder;
    ladder.r = r;
    ladder.base_filters = base_cell_filters(r);
    for (int s = r; s <= 2 * r - 2; ++s) {
        std::vector<StagePair> row;
        for (int k = 0; k <= 2 * r - 2 - s; ++k) {
            row.push_back(aitken_stage_weights(r, s, k));
        }
        ladder.stage_weights.push_back(std::move(row));
    }
    ladder.flattened_weights = flatten_ladder(ladder);
    return ladder;
}

/// Centered point-value optimal weights binom(2r, 2k+1) / 2^(2r-1); a
/// reference constant only.
inline std::vector<Rational> point_value_optimal_weights(int r)
{
    detail::require_r(r, 1, "point_value_optimal_weights");
    std::vector<Rational> out;
    for (int k = 0; k < r; ++k) {
        Rational binom = 1;
        const int n = 2 * r;
        const int m = 2 * k + 1;
        for (int i = 1; i <= m; ++i) {
            binom = binom * (n - m + i) / i;
        }
        Rational pow2 = 1;
        for (int i = 0; i < 2 * r - 1; ++i) {
            pow2 *= 2;
        }
        out.push_back(binom / pow2);
    }
    return out;
}

} // namespace cwmr
