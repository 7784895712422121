// Compress one synthetic image with both predictors and print sparsity and
// error, then refine an analytic field once and print its prediction error.

#include "cwmr/cwmr.hpp"

#include <cstdio>

int main()
{
    using namespace cwmr;

    const auto channels = to_grids(make_geometric_image(256));
    for (PredictorKind kind : {PredictorKind::linear, PredictorKind::weno_progressive}) {
        PredictorConfig config;
        config.kind = kind;
        std::size_t total = 0;
        std::vector<Metrics> errors;
        for (const CellGrid& g : channels) {
            const Representation rep = threshold(forward(g, 4, config), ThresholdSchedule{30.0});
            total += nnz(rep);
            errors.push_back(metrics(g, inverse(rep)));
        }
        const Metrics m = average(errors);
        std::printf("%-14s NNZ %6zu  E1 %.4f  E2 %.4f\n", std::string(to_string(kind)).c_str(), total, m.e1,
                    m.e2);
    }

    const TestField field = TestField::make(FieldKind::g_tilde);
    for (PredictorKind kind : {PredictorKind::linear, PredictorKind::weno_progressive}) {
        const auto res = run_function_experiment(field, 256, PredictorConfig{kind});
        std::printf("g_tilde N=256 %-14s E2 %.4e\n", std::string(to_string(kind)).c_str(), res.e2);
    }
}
