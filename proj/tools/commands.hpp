#pragma once

// Command implementations behind the cwmr tool. Each writes its CSV report
// to `out` and throws cwmr errors on invalid input; main() maps those to
// exit code 2.

#include "cwmr/cwmr.hpp"

#include <cstdio>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace cwmr::cli {

struct CompressOptions {
    int levels = 4;
    double eps = 0.0;
    PredictorKind predictor = PredictorKind::weno_progressive;
    int r = 3;
    std::optional<double> epsilon_weno;
    std::optional<double> t;
};

inline std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::vector<Representation> compress_grids(const std::vector<CellGrid>& grids, const CompressOptions& o)
{
    PredictorConfig config{o.predictor, o.r, o.epsilon_weno, o.t};
    config.validate();
    if (!(o.eps >= 0.0)) {
        throw ParameterError("--eps must be >= 0");
    }
    std::vector<Representation> reps;
    for (const auto& g : grids) {
        reps.push_back(threshold(forward(g, o.levels, config), {o.eps}));
    }
    return reps;
}

inline void require_compressible(const ImageBuffer& img, const CompressOptions& o)
{
    if (img.width != img.height) {
        throw DimensionError("image is " + std::to_string(img.width) + "x" + std::to_string(img.height)
                             + "; only square images are supported (pad to a square first)");
    }
    const std::size_t block = std::size_t{1} << o.levels;
    if (img.width % block != 0) {
        const std::size_t padded = (img.width + block - 1) / block * block;
        throw DimensionError("image size " + std::to_string(img.width) + " is not divisible by 2^"
                             + std::to_string(o.levels) + "; pad to " + std::to_string(padded)
                             + " or use fewer levels");
    }
    const auto need = static_cast<std::size_t>(2 * o.r - 1);
    if (img.width / block < need) {
        throw DimensionError("coarsest level would be " + std::to_string(img.width / block)
                             + " pixels, the stencil needs " + std::to_string(need)
                             + "; use fewer levels");
    }
}

inline void cmd_compress(const std::string& in, const std::string& out_path, const CompressOptions& o,
                         std::ostream& out)
{
    const ImageBuffer img = read_image(in);
    require_compressible(img, o);
    const auto reps = compress_grids(to_grids(img), o);
    const auto bytes = serialize(reps);
    write_file(out_path, bytes);
    std::size_t total = 0;
    for (const auto& rep : reps) {
        total += nnz(rep);
    }
    out << "channels,n,levels,predictor,r,eps,nnz,bytes\n"
        << img.channels << ',' << img.width << ',' << o.levels << ',' << to_string(o.predictor) << ','
        << o.r << ',' << fmt(o.eps) << ',' << total << ',' << bytes.size() << '\n';
}

inline std::vector<CellGrid> reconstruct(const std::vector<Representation>& reps)
{
    std::vector<CellGrid> grids;
    for (const auto& rep : reps) {
        grids.push_back(inverse(rep));
    }
    return grids;
}

inline void cmd_decompress(const std::string& in, const std::string& out_path, std::ostream& out)
{
    const auto reps = deserialize(read_file(in));
    if (reps.size() != 1 && reps.size() != 3) {
        throw FormatError("CWMR: images need 1 or 3 channels, file has " + std::to_string(reps.size()));
    }
    const ImageBuffer img = from_grids(reconstruct(reps));
    write_image(img, out_path);
    out << "channels,n\n" << img.channels << ',' << img.width << '\n';
}

struct AnalyzeOptions {
    std::optional<std::string> cwmr;
    bool post_round = false;
};

/// `recon` may be an image or a CWMR file; a CWMR file is compared with its
/// real-valued reconstruction unless post_round is set.
inline void cmd_analyze(const std::string& orig, const std::string& recon, const AnalyzeOptions& o,
                        std::ostream& out)
{
    const auto original = to_grids(read_image(orig));
    std::vector<CellGrid> rebuilt;
    std::optional<std::vector<Representation>> reps;
    const auto bytes = read_file(recon);
    if (has_cwmr_magic(bytes)) {
        reps = deserialize(bytes);
        rebuilt = reconstruct(*reps);
        if (o.post_round) {
            rebuilt = to_grids(from_grids(rebuilt));
        }
    } else {
        rebuilt = to_grids(decode_image(bytes));
    }
    if (o.cwmr) {
        reps = deserialize(read_file(*o.cwmr));
    }
    if (rebuilt.size() != original.size()) {
        throw DimensionError("analyze: channel counts differ (" + std::to_string(original.size()) + " vs "
                             + std::to_string(rebuilt.size()) + ")");
    }
    if (reps && reps->size() != original.size()) {
        throw DimensionError("analyze: CWMR file has a different channel count");
    }

    std::vector<Metrics> per;
    std::size_t total = 0;
    out << "channel,E1,E2" << (reps ? ",NNZ" : "") << '\n';
    for (std::size_t c = 0; c < original.size(); ++c) {
        if (rebuilt[c].size() != original[c].size()) {
            throw DimensionError("analyze: image sizes differ");
        }
        per.push_back(metrics(original[c], rebuilt[c]));
        out << c << ',' << fmt(per.back().e1) << ',' << fmt(per.back().e2);
        if (reps) {
            const std::size_t k = nnz((*reps)[c]);
            total += k;
            out << ',' << k;
        }
        out << '\n';
    }
    if (per.size() > 1) {
        const Metrics m = average(per);
        out << "mean," << fmt(m.e1) << ',' << fmt(m.e2);
        if (reps) {
            out << ',' << total;
        }
        out << '\n';
    }
}

struct BenchOptions {
    FieldKind field = FieldKind::g_tilde;
    std::size_t n = 512;
    PredictorKind predictor = PredictorKind::weno_progressive;
    int r = 3;
    std::optional<double> jump;
    std::optional<double> epsilon_weno;
    std::optional<double> t;
    ErrorRegion region = ErrorRegion::interior;
    bool timing = true;
};

inline void cmd_bench_functions(const BenchOptions& o, std::ostream& out)
{
    const TestField field = TestField::make(o.field, o.jump);
    const auto res = run_function_experiment(field, o.n, {o.predictor, o.r, o.epsilon_weno, o.t}, o.region);
    std::ostringstream e2;
    e2 << std::scientific << std::setprecision(5) << res.e2;
    out << "field,N,predictor,E2,runtime_ms\n"
        << to_string(o.field) << ',' << o.n << ',' << to_string(o.predictor) << ',' << e2.str() << ','
        << (o.timing ? fmt(res.runtime_ms) : "0") << '\n';
}

struct ConvergenceOptions {
    FieldKind field = FieldKind::smooth_trig;
    PredictorKind predictor = PredictorKind::weno_progressive;
    int r = 3;
    std::vector<std::size_t> ns{64, 128, 256, 512};
    std::optional<double> epsilon_weno;
    std::optional<double> t;
    ErrorRegion region = ErrorRegion::interior;
};

inline void cmd_convergence(const ConvergenceOptions& o, std::ostream& out)
{
    const auto rows = convergence_study(TestField::make(o.field),
                                        {o.predictor, o.r, o.epsilon_weno, o.t}, o.ns, o.region);
    out << "N,E2,order\n";
    for (const auto& row : rows) {
        std::ostringstream e2;
        e2 << std::scientific << std::setprecision(5) << row.e2;
        out << row.n << ',' << e2.str() << ',' << (row.order ? fmt(*row.order) : "") << '\n';
    }
}

/// One row per filter entry: table, stage, k, cell, exact, decimal.
inline void cmd_dump_filters(int r, std::ostream& out)
{
    if (r < 1 || r > kMaxR) {
        throw ParameterError("--r must be in 1.." + std::to_string(kMaxR));
    }
    out << "table,stage,k,cell,exact,decimal\n";
    auto row = [&](const char* table, int stage, int k, int cell, const Rational& v) {
        out << table << ',' << stage << ',' << k << ',' << cell << ',' << to_fraction_string(v) << ','
            << fmt(to_double(v)) << '\n';
    };
    auto filter_rows = [&](const char* table, int stage, int k, const RationalFilter& f) {
        for (std::size_t c = 0; c < f.size(); ++c) {
            row(table, stage, k, static_cast<int>(c), f[c]);
        }
    };
    if (r == 1) {
        filter_rows("odd", 1, 0, top_cell_filter(1));
        filter_rows("even", 1, 0, top_cell_filter(1, Child::even));
        return;
    }
    const FilterLadder ladder = build_ladder(r);
    for (int s = r; s <= ladder.top_stage(); ++s) {
        for (int k = 0; k <= 2 * r - 1 - s; ++k) {
            filter_rows("odd", s, k, ladder.filter(s, k));
        }
    }
    filter_rows("even", ladder.top_stage(), 0, top_cell_filter(r, Child::even));
    for (int s = r; s < ladder.top_stage(); ++s) {
        for (int k = 0; k <= 2 * r - 2 - s; ++k) {
            const StagePair& p = ladder.weights(s, k);
            row("stage_weight", s, k, 0, p.self);
            row("stage_weight", s, k, 1, p.next);
        }
    }
    for (std::size_t k = 0; k < ladder.flattened_weights.size(); ++k) {
        row("flattened", r, static_cast<int>(k), 0, ladder.flattened_weights[k]);
    }
}

inline void cmd_make_synthetic(const std::string& out_path, std::size_t n, std::ostream& out)
{
    write_image(make_geometric_image(n), out_path);
    out << "n\n" << n << '\n';
}

inline std::vector<std::size_t> parse_sizes(const std::string& list)
{
    std::vector<std::size_t> ns;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != item.size() || v < 2) {
            throw ParameterError("bad size '" + item + "' in --ns");
        }
        ns.push_back(v);
    }
    if (ns.empty()) {
        throw ParameterError("--ns is empty");
    }
    return ns;
}

} // namespace cwmr::cli
