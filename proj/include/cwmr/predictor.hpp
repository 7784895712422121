#pragma once

// Fine-child prediction from a coarse cell-average grid.
//
// Three operators share the same (2r-1)^2 window around each coarse cell:
//   linear            tensor product of the top filter, v (x) v
//   weno_classical    one convex combination of the r^2 base tensor
//                     predictions with weights gamma_a * gamma_b made
//                     nonlinear by the indicators
//   weno_progressive  the Aitken-Neville ladder run bottom-up in 2D, the
//                     linear stage weights of every node replaced by
//                     nonlinear ones (node k at stage s routes the indicator
//                     of sub-stencil k + e * (s - r + 1) to child k + e)
//
// Only the odd/odd child is coded; the other parities flip the window along
// the affected axes. The (even, even) child is always completed as
// 4 * coarse - (sum of the other three) so that decimating the prediction
// returns the coarse data.

#include "cwmr/errors.hpp"
#include "cwmr/filters.hpp"
#include "cwmr/grid.hpp"
#include "cwmr/smoothness.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cwmr {

enum class PredictorKind : std::uint8_t {
    linear = 0,
    weno_progressive = 1,
    weno_classical = 2,
};

inline std::string to_string(PredictorKind k)
{
    switch (k) {
    case PredictorKind::linear:
        return "linear";
    case PredictorKind::weno_progressive:
        return "weno";
    case PredictorKind::weno_classical:
        return "weno-classical";
    }
    return "unknown";
}

inline PredictorKind parse_predictor_kind(std::string_view name)
{
    if (name == "linear") {
        return PredictorKind::linear;
    }
    if (name == "weno" || name == "weno-progressive" || name == "progressive") {
        return PredictorKind::weno_progressive;
    }
    if (name == "weno-classical" || name == "classical") {
        return PredictorKind::weno_classical;
    }
    throw ParameterError("unknown predictor '" + std::string(name) + "'");
}

inline constexpr int kMaxR = 8;

struct PredictorConfig {
    PredictorKind kind = PredictorKind::linear;
    int r = 3;
    /// Unset: epsilon = h^2 with h = 1 / (coarse cells per side).
    std::optional<double> epsilon;
    /// Unset: t = (r + 1) / 2.
    std::optional<double> t;
    BoundaryPolicy boundary = BoundaryPolicy::reflect;

    bool is_weno() const { return kind != PredictorKind::linear; }

    void validate() const
    {
        if (r < 1 || r > kMaxR) {
            throw ParameterError("predictor: r must be in 1.." + std::to_string(kMaxR));
        }
        if (is_weno() && r < 2) {
            throw ParameterError("predictor: WENO predictors need r >= 2");
        }
        if (epsilon && !(*epsilon >= 0.0)) {
            throw ParameterError("predictor: epsilon must be >= 0");
        }
        if (t && !(*t > 0.0)) {
            throw ParameterError("predictor: t must be > 0");
        }
    }

    WenoParams params_for(std::size_t coarse_n) const
    {
        const double h = 1.0 / static_cast<double>(coarse_n);
        return WenoParams{epsilon.value_or(h * h), t.value_or(0.5 * (r + 1))};
    }
};

/// One normalized group of nonlinear weights emitted while predicting.
struct WeightGroup {
    int child = 0;  // px * 2 + py
    int stage = 0;  // ladder stage s, or 0 for the classical single stage
    int kx = 0;
    int ky = 0;
    std::vector<double> linear;
    std::vector<double> weights;
};

using WeightTrace = std::vector<WeightGroup>;

/// omega_k = alpha_k / sum(alpha), alpha_k = C_k / (epsilon + I_k)^t.
///
/// Computed as C_k * ((epsilon + I_min) / (epsilon + I_k))^t, which is the
/// same ratio without overflow. With epsilon = 0 the zero-indicator entries
/// take all the weight (the epsilon -> 0 limit); if every indicator is zero
/// the linear weights are returned.
inline void nonlinear_weights(std::span<const double> linear, std::span<const double> indicators,
                              const WenoParams& params, std::span<double> out)
{
    const std::size_t n = linear.size();
    if (indicators.size() != n || out.size() != n) {
        throw DimensionError("nonlinear_weights: size mismatch");
    }
    double floor = indicators[0];
    for (std::size_t k = 1; k < n; ++k) {
        floor = std::min(floor, indicators[k]);
    }
    floor += params.epsilon;

    double sum = 0.0;
    if (floor == 0.0) {
        for (std::size_t k = 0; k < n; ++k) {
            out[k] = indicators[k] == 0.0 ? linear[k] : 0.0;
            sum += out[k];
        }
    } else {
        const bool square = params.t == 2.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double ratio = floor / (params.epsilon + indicators[k]);
            out[k] = linear[k] * (square ? ratio * ratio : std::pow(ratio, params.t));
            sum += out[k];
        }
    }
    if (!(sum > 0.0)) {
        throw ParameterError("nonlinear_weights: linear weights must not all vanish");
    }
    for (std::size_t k = 0; k < n; ++k) {
        out[k] /= sum;
    }
}

inline std::vector<double> nonlinear_weights(std::span<const double> linear,
                                             std::span<const double> indicators,
                                             const WenoParams& params)
{
    std::vector<double> out(linear.size());
    nonlinear_weights(linear, indicators, params, out);
    return out;
}

class Predictor {
public:
    explicit Predictor(PredictorConfig config) : config_(config)
    {
        config_.validate();
        const int r = config_.r;
        width_ = static_cast<std::size_t>(2 * r - 1);
        top_ = to_double(top_cell_filter(r));
        if (config_.is_weno()) {
            const FilterLadder ladder = build_ladder(r);
            for (const auto& f : ladder.base_filters) {
                base_.push_back(to_double(f));
            }
            for (const auto& row : ladder.stage_weights) {
                std::vector<std::array<double, 2>> d;
                for (const auto& p : row) {
                    d.push_back({to_double(p.self), to_double(p.next)});
                }
                stages_.push_back(std::move(d));
            }
            const auto flat = to_double(ladder.flattened_weights);
            for (std::size_t a = 0; a < flat.size(); ++a) {
                for (std::size_t b = 0; b < flat.size(); ++b) {
                    tensor_gamma_.push_back(flat[a] * flat[b]);
                }
            }
            forms_ = build_forms(r);
        }
    }

    const PredictorConfig& config() const { return config_; }
    std::size_t halo() const { return static_cast<std::size_t>(config_.r - 1); }
    std::size_t window_width() const { return width_; }

    /// Children of one coarse cell from its (2r-1)^2 window (row-major, first
    /// index along x). Result index is px * 2 + py.
    std::array<double, 4> predict_cell(std::span<const double> window, const WenoParams& params,
                                       WeightTrace* trace = nullptr) const
    {
        if (window.size() != width_ * width_) {
            throw DimensionError("predict_cell: window must hold " + std::to_string(width_ * width_)
                                 + " values");
        }
        const int r = config_.r;
        std::array<double, kMaxR * kMaxR> indicators{};
        if (config_.is_weno()) {
            evaluate_indicators(window, forms_,
                                std::span<double>(indicators.data(), static_cast<std::size_t>(r * r)));
        }

        std::array<double, 4> children{};
        std::array<double, (2 * kMaxR - 1) * (2 * kMaxR - 1)> flipped{};
        std::array<double, kMaxR * kMaxR> oriented{};
        for (int child = 0; child < 3; ++child) {
            const bool fx = (child >> 1) != 0;
            const bool fy = (child & 1) != 0;
            for (std::size_t p = 0; p < width_; ++p) {
                const std::size_t sp = fx ? width_ - 1 - p : p;
                for (std::size_t q = 0; q < width_; ++q) {
                    const std::size_t sq = fy ? width_ - 1 - q : q;
                    flipped[p * width_ + q] = window[sp * width_ + sq];
                }
            }
            if (config_.is_weno()) {
                for (int a = 0; a < r; ++a) {
                    for (int b = 0; b < r; ++b) {
                        const int sa = fx ? r - 1 - a : a;
                        const int sb = fy ? r - 1 - b : b;
                        oriented[static_cast<std::size_t>(a * r + b)] =
                            indicators[static_cast<std::size_t>(sa * r + sb)];
                    }
                }
            }
            children[static_cast<std::size_t>(child)] =
                odd_child(flipped.data(), oriented.data(), params, child, trace);
        }
        const double center = window[static_cast<std::size_t>(r - 1) * width_ + static_cast<std::size_t>(r - 1)];
        children[3] = 4.0 * center - ((children[0] + children[1]) + children[2]);
        return children;
    }

    /// Prediction on a grid already padded by `halo` ghost cells.
    CellGrid predict_extended(const CellGrid& extended, std::size_t halo, const WenoParams& params) const
    {
        if (halo < this->halo()) {
            throw DimensionError("predict: halo " + std::to_string(halo) + " is smaller than the "
                                 + std::to_string(this->halo()) + " cells the stencil needs");
        }
        if (extended.size() <= 2 * halo) {
            throw DimensionError("predict: extended grid has no interior cells");
        }
        const std::size_t n = extended.size() - 2 * halo;
        const double h = extended.spacing();
        const Domain& ed = extended.domain();
        const double pad = static_cast<double>(halo) * h;
        CellGrid fine(2 * n, Domain{ed.x_lo + pad, ed.x_hi - pad, ed.y_lo + pad, ed.y_hi - pad},
                      extended.level() + 1);

        const std::size_t off = halo - this->halo();
        std::vector<double> window(width_ * width_);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t p = 0; p < width_; ++p) {
                    for (std::size_t q = 0; q < width_; ++q) {
                        window[p * width_ + q] = extended(off + i + p, off + j + q);
                    }
                }
                const auto c = predict_cell(window, params);
                fine(2 * i, 2 * j) = c[0];
                fine(2 * i, 2 * j + 1) = c[1];
                fine(2 * i + 1, 2 * j) = c[2];
                fine(2 * i + 1, 2 * j + 1) = c[3];
            }
        }
        return fine;
    }

    CellGrid predict(const CellGrid& coarse, const WenoParams& params) const
    {
        return predict_extended(extend(coarse, halo(), config_.boundary), halo(), params);
    }

    /// Uses the configured epsilon / t, or their defaults for this grid size.
    CellGrid predict(const CellGrid& coarse) const
    {
        return predict(coarse, config_.params_for(coarse.size()));
    }

private:
    double odd_child(const double* w, const double* ind, const WenoParams& params, int child,
                     WeightTrace* trace) const
    {
        const int r = config_.r;
        const std::size_t width = width_;
        if (config_.kind == PredictorKind::linear) {
            double acc = 0.0;
            for (std::size_t p = 0; p < width; ++p) {
                double row = 0.0;
                for (std::size_t q = 0; q < width; ++q) {
                    row += top_[q] * w[p * width + q];
                }
                acc += top_[p] * row;
            }
            return acc;
        }

        // Base tensor predictions P[a][b] = v_a^T W v_b.
        std::array<double, kMaxR * (2 * kMaxR - 1)> partial{};
        std::array<double, kMaxR * kMaxR> level{};
        for (int a = 0; a < r; ++a) {
            const auto& va = base_[static_cast<std::size_t>(a)];
            for (std::size_t q = 0; q < width; ++q) {
                double s = 0.0;
                for (std::size_t p = 0; p < width; ++p) {
                    s += va[p] * w[p * width + q];
                }
                partial[static_cast<std::size_t>(a) * width + q] = s;
            }
        }
        for (int a = 0; a < r; ++a) {
            for (int b = 0; b < r; ++b) {
                const auto& vb = base_[static_cast<std::size_t>(b)];
                double s = 0.0;
                for (std::size_t q = 0; q < width; ++q) {
                    s += partial[static_cast<std::size_t>(a) * width + q] * vb[q];
                }
                level[static_cast<std::size_t>(a * r + b)] = s;
            }
        }

        if (config_.kind == PredictorKind::weno_classical) {
            std::array<double, kMaxR * kMaxR> omega{};
            const auto n = static_cast<std::size_t>(r * r);
            nonlinear_weights(std::span<const double>(tensor_gamma_.data(), n),
                              std::span<const double>(ind, n), params,
                              std::span<double>(omega.data(), n));
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                acc += omega[k] * level[k];
            }
            if (trace) {
                trace->push_back({child, 0, 0, 0, tensor_gamma_,
                                  std::vector<double>(omega.begin(), omega.begin() + static_cast<std::ptrdiff_t>(n))});
            }
            return acc;
        }

        // Progressive ladder: stage s turns an m x m level into (m-1) x (m-1).
        int m = r;
        for (int s = r; s <= 2 * r - 2; ++s) {
            const auto& stage = stages_[static_cast<std::size_t>(s - r)];
            const int shift = s - (r - 1);
            std::array<double, kMaxR * kMaxR> next{};
            for (int kx = 0; kx < m - 1; ++kx) {
                for (int ky = 0; ky < m - 1; ++ky) {
                    // Children in the order k, k+(1,0), k+(0,1), k+(1,1).
                    static constexpr int ex[4] = {0, 1, 0, 1};
                    static constexpr int ey[4] = {0, 0, 1, 1};
                    std::array<double, 4> linear{};
                    std::array<double, 4> ind4{};
                    for (int e = 0; e < 4; ++e) {
                        linear[static_cast<std::size_t>(e)] =
                            stage[static_cast<std::size_t>(kx)][static_cast<std::size_t>(ex[e])]
                            * stage[static_cast<std::size_t>(ky)][static_cast<std::size_t>(ey[e])];
                        ind4[static_cast<std::size_t>(e)] =
                            ind[(kx + ex[e] * shift) * r + (ky + ey[e] * shift)];
                    }
                    std::array<double, 4> omega{};
                    nonlinear_weights(linear, ind4, params, omega);
                    double acc = 0.0;
                    for (int e = 0; e < 4; ++e) {
                        acc += omega[static_cast<std::size_t>(e)]
                               * level[static_cast<std::size_t>((kx + ex[e]) * r + (ky + ey[e]))];
                    }
                    next[static_cast<std::size_t>(kx * r + ky)] = acc;
                    if (trace) {
                        trace->push_back({child, s, kx, ky, std::vector<double>(linear.begin(), linear.end()),
                                          std::vector<double>(omega.begin(), omega.end())});
                    }
                }
            }
            level = next;
            --m;
        }
        return level[0];
    }

    PredictorConfig config_;
    std::size_t width_ = 0;
    std::vector<double> top_;
    std::vector<std::vector<double>> base_;
    std::vector<std::vector<std::array<double, 2>>> stages_;
    std::vector<double> tensor_gamma_;
    SmoothnessFormSet forms_;
};

namespace detail {

inline PredictorConfig config_of(PredictorKind kind, int r)
{
    PredictorConfig c;
    c.kind = kind;
    c.r = r;
    return c;
}

} // namespace detail

inline CellGrid predict_linear(const CellGrid& coarse, int r = 3)
{
    return Predictor(detail::config_of(PredictorKind::linear, r)).predict(coarse);
}

inline CellGrid predict_progressive(const CellGrid& coarse, int r = 3,
                                    std::optional<WenoParams> params = std::nullopt)
{
    Predictor p(detail::config_of(PredictorKind::weno_progressive, r));
    return params ? p.predict(coarse, *params) : p.predict(coarse);
}

inline CellGrid predict_classical(const CellGrid& coarse, int r = 3,
                                  std::optional<WenoParams> params = std::nullopt)
{
    Predictor p(detail::config_of(PredictorKind::weno_classical, r));
    return params ? p.predict(coarse, *params) : p.predict(coarse);
}

} // namespace cwmr
