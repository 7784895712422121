#include "cwmr/predictor.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace cwmr;

namespace {

constexpr PredictorKind kAllKinds[] = {PredictorKind::linear, PredictorKind::weno_progressive,
                                       PredictorKind::weno_classical};

double max_diff(const CellGrid& a, const CellGrid& b, std::size_t lo = 0, std::size_t hi = 0)
{
    if (hi == 0) {
        hi = a.size();
    }
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        for (std::size_t j = lo; j < hi; ++j) {
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
        }
    }
    return m;
}

CellGrid scaled(CellGrid g, double lambda, double shift = 0.0)
{
    for (double& v : g.values()) {
        v = lambda * v + shift;
    }
    return g;
}

/// Independent direct form of the nonlinear weights.
std::vector<double> direct_weights(const std::vector<double>& c, const std::vector<double>& ind, double eps, double t)
{
    std::vector<double> a(c.size());
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        a[k] = c[k] / std::pow(eps + ind[k], t);
        s += a[k];
    }
    for (double& v : a) {
        v /= s;
    }
    return a;
}

/// Cell averages of sin(pi x) cos(pi y) on [0,1]^2, written without
/// differences of nearby cosines.
CellGrid trig_averages(std::size_t n)
{
    const double pi = std::numbers::pi;
    const double h = 1.0 / static_cast<double>(n);
    const double damp = std::sin(0.5 * pi * h) / (0.5 * pi * h);
    CellGrid g(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double xc = (static_cast<double>(i) + 0.5) * h;
            const double yc = (static_cast<double>(j) + 0.5) * h;
            g(i, j) = damp * damp * std::sin(pi * xc) * std::cos(pi * yc);
        }
    }
    return g;
}

} // namespace

TEST(Predictor, KindNames)
{
    for (PredictorKind k : kAllKinds) {
        EXPECT_EQ(parse_predictor_kind(to_string(k)), k);
    }
    EXPECT_THROW(parse_predictor_kind("eno"), ParameterError);
    EXPECT_THROW(Predictor({PredictorKind::weno_progressive, 1}), ParameterError);
    EXPECT_NO_THROW(Predictor({PredictorKind::linear, 1}));
}

TEST(Predictor, DeltaWindowCenterEntry)
{
    const Predictor p({PredictorKind::linear});
    std::vector<double> w(25, 0.0);
    w[12] = 1.0;
    const auto c = p.predict_cell(w, WenoParams{});
    EXPECT_EQ(c[0], 1.0);
    // every other entry of the odd/odd matrix, one at a time
    const std::vector<double> v{-3, 22, 128, -22, 3};
    for (std::size_t a = 0; a < 5; ++a) {
        for (std::size_t b = 0; b < 5; ++b) {
            std::vector<double> e(25, 0.0);
            e[a * 5 + b] = 16384.0;
            EXPECT_EQ(p.predict_cell(e, WenoParams{})[0], v[a] * v[b]) << a << "," << b;
            // the (even, even) child mirrors both axes
            EXPECT_NEAR(p.predict_cell(e, WenoParams{})[1], v[a] * v[4 - b], 1e-9);
            EXPECT_NEAR(p.predict_cell(e, WenoParams{})[2], v[4 - a] * v[b], 1e-9);
        }
    }
}

TEST(Predictor, ConstantStaysConstant)
{
    for (PredictorKind k : kAllKinds) {
        const CellGrid fine = Predictor({k}).predict(CellGrid(16, {}, -1, -4.5));
        ASSERT_EQ(fine.size(), 32u);
        for (double v : fine.values()) {
            EXPECT_NEAR(v, -4.5, 1e-13) << to_string(k);
        }
    }
}

TEST(Predictor, LinearExactForCubicTimesQuadratic)
{
    oracle::TensorPoly f;
    f.c = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 1}}; // x^3 y^2
    const std::size_t n = 16;
    const CellGrid fine = predict_linear(f.grid(n));
    const CellGrid exact = f.grid(2 * n);
    EXPECT_LE(max_diff(fine, exact, 4, 2 * n - 4), 1e-12);
}

TEST(Predictor, LinearExactForDegreeFourPerVariable)
{
    const auto f = oracle::TensorPoly::random(4, 4, 21);
    const CellGrid fine = predict_linear(f.grid(32));
    const CellGrid exact = f.grid(64);
    EXPECT_LE(max_diff(fine, exact, 4, 60), 1e-10);
    // degree 5 is not reproduced
    oracle::TensorPoly g;
    g.c = {{0}, {0}, {0}, {0}, {0}, {1}};
    EXPECT_GT(max_diff(predict_linear(g.grid(32)), g.grid(64), 4, 60), 1e-9);
}

TEST(Predictor, WenoEqualsLinearOnTensorQuadratics)
{
    const auto f = oracle::TensorPoly::random(2, 2, 5);
    const CellGrid coarse = f.grid(16);
    const CellGrid lin = predict_linear(coarse);
    for (PredictorKind k : {PredictorKind::weno_progressive, PredictorKind::weno_classical}) {
        const CellGrid w = Predictor({k}).predict(coarse);
        EXPECT_LE(max_diff(w, lin, 4, 28), 1e-11) << to_string(k);
        EXPECT_LE(max_diff(w, f.grid(32), 4, 28), 1e-11) << to_string(k);
    }
}

TEST(Predictor, HugeEpsilonGivesLinear)
{
    const CellGrid coarse = oracle::random_grid(12, 3, 0, 255);
    const CellGrid lin = predict_linear(coarse);
    for (PredictorKind k : {PredictorKind::weno_progressive, PredictorKind::weno_classical}) {
        const CellGrid w = Predictor({k}).predict(coarse, WenoParams{1e300, 2.0});
        EXPECT_LE(max_diff(w, lin), 1e-12 * 255) << to_string(k);
    }
}

TEST(Predictor, NonlinearWeightsExamples)
{
    const std::vector<double> c{0.1, 0.2, 0.3, 0.4};
    for (double t : {1.0, 2.0, 2.5}) {
        const auto w = nonlinear_weights(c, std::vector<double>(4, 0.37), WenoParams{1e-6, t});
        for (std::size_t k = 0; k < 4; ++k) {
            EXPECT_NEAR(w[k], c[k], 1e-15);
        }
    }
    const auto big = nonlinear_weights(c, std::vector<double>{0.0, 3.0, 70.0, 1.0}, WenoParams{1e12, 2.0});
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(big[k], c[k], 1e-9);
    }

    const std::vector<double> q(4, 0.25);
    const auto w = nonlinear_weights(q, std::vector<double>{0, 0, 0, 1}, WenoParams{1e-6, 2.0});
    const double tiny = std::pow(1e-6 / (1.0 + 1e-6), 2);
    EXPECT_NEAR(w[3], tiny / (3.0 + tiny), 1e-24);
    EXPECT_LT(w[3], 1e-12);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(w[k], 1.0 / 3.0, 1e-12);
    }
}

TEST(Predictor, NonlinearWeightsMatchDirectFormula)
{
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> c(4), ind(4);
        double s = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            c[k] = u(rng);
            s += c[k];
            ind[k] = std::pow(10.0, -6.0 * u(rng)) * u(rng);
        }
        for (double& v : c) {
            v /= s;
        }
        const double eps = std::pow(10.0, -8.0 * u(rng));
        const double t = 0.5 + 3.0 * u(rng);
        const auto w = nonlinear_weights(c, ind, WenoParams{eps, t});
        const auto d = direct_weights(c, ind, eps, t);
        double sum = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            EXPECT_NEAR(w[k], d[k], 1e-12);
            EXPECT_GE(w[k], 0.0);
            sum += w[k];
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(Predictor, NonlinearWeightsZeroEpsilon)
{
    const std::vector<double> c{0.1, 0.2, 0.3, 0.4};
    const auto all_zero = nonlinear_weights(c, std::vector<double>{0, 0, 0, 0}, WenoParams{0.0, 2.0});
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_EQ(all_zero[k], c[k]);
    }
    const auto some = nonlinear_weights(c, std::vector<double>{0, 5, 0, 1}, WenoParams{0.0, 2.0});
    EXPECT_NEAR(some[0], 0.25, 1e-15);
    EXPECT_EQ(some[1], 0.0);
    EXPECT_NEAR(some[2], 0.75, 1e-15);
    EXPECT_EQ(some[3], 0.0);
    EXPECT_THROW(nonlinear_weights(std::vector<double>{0, 0}, std::vector<double>{1, 1}, WenoParams{0.1, 2}),
                 ParameterError);
    EXPECT_THROW(nonlinear_weights(c, std::vector<double>{1, 1}, WenoParams{}), DimensionError);
}

TEST(Predictor, QuarterSumConsistency)
{
    const CellGrid coarse = oracle::random_grid(16, 17, -100, 300);
    for (PredictorKind k : kAllKinds) {
        const CellGrid fine = Predictor({k}).predict(coarse);
        const CellGrid back = decimate(fine);
        EXPECT_LE(max_diff(back, coarse), 1e-12 * 300) << to_string(k);
    }
}

TEST(Predictor, ScaleEquivarianceWithZeroEpsilon)
{
    const CellGrid g = oracle::random_grid(16, 23);
    for (PredictorKind k : kAllKinds) {
        const Predictor p({k});
        const CellGrid base = p.predict(g, WenoParams{0.0, 2.0});
        for (double lambda : {-3.0, 1e4}) {
            const CellGrid s = p.predict(scaled(g, lambda), WenoParams{0.0, 2.0});
            EXPECT_LE(max_diff(s, scaled(base, lambda)), 1e-10) << to_string(k) << " lambda=" << lambda;
        }
    }
}

TEST(Predictor, ShiftEquivariance)
{
    const CellGrid g = oracle::random_grid(16, 29);
    for (PredictorKind k : kAllKinds) {
        const Predictor p({k});
        const WenoParams params{1e-4, 2.0};
        const CellGrid base = p.predict(g, params);
        for (double c : {-7.0, 250.0}) {
            EXPECT_LE(max_diff(p.predict(scaled(g, 1.0, c), params), scaled(base, 1.0, c)), 1e-10) << to_string(k);
        }
    }
}

TEST(Predictor, MirrorSymmetry)
{
    const CellGrid g = oracle::random_grid(12, 31);
    CellGrid flipped(12);
    for (std::size_t i = 0; i < 12; ++i) {
        for (std::size_t j = 0; j < 12; ++j) {
            flipped(i, j) = g(11 - i, j);
        }
    }
    for (PredictorKind k : kAllKinds) {
        const Predictor p({k});
        const CellGrid a = p.predict(g);
        const CellGrid b = p.predict(flipped);
        double m = 0.0;
        for (std::size_t i = 0; i < 24; ++i) {
            for (std::size_t j = 0; j < 24; ++j) {
                m = std::max(m, std::abs(a(i, j) - b(23 - i, j)));
            }
        }
        EXPECT_LE(m, 1e-12) << to_string(k);
    }
}

TEST(Predictor, StepKeepsOneSidedValues)
{
    // 0 for x < 1/2 and 16 beyond, along either axis, on a 32 x 32 coarse grid
    for (int axis = 0; axis < 2; ++axis) {
        CellGrid coarse(32);
        for (std::size_t i = 0; i < 32; ++i) {
            for (std::size_t j = 0; j < 32; ++j) {
                coarse(i, j) = (axis == 0 ? i : j) >= 16 ? 16.0 : 0.0;
            }
        }
        for (PredictorKind k : {PredictorKind::weno_progressive, PredictorKind::weno_classical}) {
            const CellGrid fine = Predictor({k}).predict(coarse);
            for (std::size_t i = 0; i < 64; ++i) {
                for (std::size_t j = 0; j < 64; ++j) {
                    const double v = fine(i, j);
                    const double side = (axis == 0 ? i : j) >= 32 ? 16.0 : 0.0;
                    EXPECT_NEAR(v, side, 1e-6) << to_string(k) << " axis=" << axis << " " << i << "," << j;
                }
            }
        }
        // linear overshoots next to the jump
        const CellGrid lin = predict_linear(coarse);
        const double next = axis == 0 ? lin(30, 5) : lin(5, 30);
        EXPECT_GT(std::abs(next), 0.1);
    }
}

TEST(Predictor, HaloCheck)
{
    const Predictor p({PredictorKind::weno_progressive});
    const CellGrid ext = extend(CellGrid(8), 1);
    EXPECT_THROW(p.predict_extended(ext, 1, WenoParams{}), DimensionError);
    EXPECT_NO_THROW(p.predict_extended(extend(CellGrid(8), 3), 3, WenoParams{}));
    EXPECT_THROW(p.predict_cell(std::vector<double>(9), WenoParams{}), DimensionError);
}

TEST(Predictor, WeightGroupsAreConvex)
{
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(0, 255);
    for (PredictorKind k : {PredictorKind::weno_progressive, PredictorKind::weno_classical}) {
        const Predictor p({k});
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> w(25);
            for (double& v : w) {
                v = u(rng);
            }
            WeightTrace trace;
            p.predict_cell(w, WenoParams{1.0 / 1024, 2.0}, &trace);
            // progressive: per child 4 groups at stage 3 and one at stage 4
            EXPECT_EQ(trace.size(), k == PredictorKind::weno_progressive ? 15u : 3u);
            for (const WeightGroup& g : trace) {
                double s = 0.0;
                double sl = 0.0;
                for (std::size_t e = 0; e < g.weights.size(); ++e) {
                    EXPECT_GE(g.weights[e], 0.0);
                    s += g.weights[e];
                    sl += g.linear[e];
                }
                EXPECT_NEAR(s, 1.0, 1e-12);
                EXPECT_NEAR(sl, 1.0, 1e-12);
            }
        }
    }
}

TEST(Predictor, ProgressiveIndicatorRouting)
{
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> u(0, 10);
    std::vector<double> w(25);
    for (double& v : w) {
        v = u(rng);
    }
    const auto ind = evaluate_indicators(w, build_forms(3));
    const auto at = [&](int a, int b) { return ind[static_cast<std::size_t>(a * 3 + b)]; };
    const WenoParams params{1e-3, 2.0};
    WeightTrace trace;
    Predictor({PredictorKind::weno_progressive}).predict_cell(w, params, &trace);

    const double c4 = 0.5;
    const double c3[2][2] = {{3.0 / 8, 5.0 / 8}, {5.0 / 8, 3.0 / 8}};
    for (const WeightGroup& g : trace) {
        if (g.child != 0) {
            continue;
        }
        std::vector<double> lin, expect_ind;
        if (g.stage == 4) {
            lin = {c4 * c4, c4 * c4, c4 * c4, c4 * c4};
            expect_ind = {at(0, 0), at(2, 0), at(0, 2), at(2, 2)};
        } else {
            ASSERT_EQ(g.stage, 3);
            for (int e = 0; e < 4; ++e) {
                const int ex = e & 1;
                const int ey = e >> 1;
                lin.push_back(c3[g.kx][ex] * c3[g.ky][ey]);
                expect_ind.push_back(at(g.kx + ex, g.ky + ey));
            }
        }
        const auto d = direct_weights(lin, expect_ind, params.epsilon, params.t);
        for (std::size_t e = 0; e < 4; ++e) {
            EXPECT_NEAR(g.linear[e], lin[e], 1e-15);
            EXPECT_NEAR(g.weights[e], d[e], 1e-12) << "stage " << g.stage << " node " << g.kx << g.ky;
        }
    }
}

TEST(Predictor, ConvergenceOrderOnTrig)
{
    const int r = 3;
    for (PredictorKind k : {PredictorKind::linear, PredictorKind::weno_progressive}) {
        std::vector<double> logs_h, logs_e;
        for (std::size_t n : {64u, 128u, 256u, 512u}) {
            const CellGrid exact = trig_averages(n);
            const CellGrid fine = Predictor({k, r}).predict(decimate(exact));
            const std::size_t m = 2 * (r - 1);
            logs_h.push_back(std::log(1.0 / static_cast<double>(n)));
            logs_e.push_back(std::log(max_diff(fine, exact, m, n - m)));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            sx += logs_h[i];
            sy += logs_e[i];
            sxx += logs_h[i] * logs_h[i];
            sxy += logs_h[i] * logs_e[i];
        }
        const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
        EXPECT_GE(slope, 2 * r - 1 - 0.3) << to_string(k);
    }
}

TEST(Predictor, BitwiseDeterministic)
{
    const CellGrid g = oracle::random_grid(32, 47, 0, 255);
    for (PredictorKind k : kAllKinds) {
        const Predictor p({k});
        EXPECT_EQ(oracle::to_vector(p.predict(g).values()), oracle::to_vector(p.predict(g).values()));
    }
}
