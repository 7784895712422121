#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

const std::map<std::string, cwmr::PredictorKind> kPredictors{
    {"linear", cwmr::PredictorKind::linear},
    {"weno", cwmr::PredictorKind::weno_progressive},
    {"weno-classical", cwmr::PredictorKind::weno_classical},
};

const std::map<std::string, cwmr::FieldKind> kFields{
    {"g", cwmr::FieldKind::g},
    {"g_tilde", cwmr::FieldKind::g_tilde},
    {"h", cwmr::FieldKind::h},
    {"franke_h", cwmr::FieldKind::franke_h},
    {"franke_v", cwmr::FieldKind::franke_v},
    {"smooth_trig", cwmr::FieldKind::smooth_trig},
};

const std::map<std::string, cwmr::ErrorRegion> kRegions{
    {"interior", cwmr::ErrorRegion::interior},
    {"full", cwmr::ErrorRegion::full},
};

void add_weno_options(CLI::App* cmd, std::optional<double>& epsilon, std::optional<double>& t)
{
    cmd->add_option("--epsilon-weno", epsilon, "WENO regularizer (default h^2 per level)");
    cmd->add_option("--t", t, "WENO exponent (default (r+1)/2)");
}

} // namespace

int main(int argc, char** argv)
{
    using namespace cwmr::cli;
    CLI::App app{"Cell-average multiresolution codec and predictor test bench"};
    app.require_subcommand(1);

    std::string in;
    std::string out;
    CompressOptions compress;
    auto* c = app.add_subcommand("compress", "Compress a PGM/PPM image to a CWMR file");
    c->add_option("in", in, "input image")->required();
    c->add_option("out", out, "output CWMR file")->required();
    c->add_option("--levels,-L", compress.levels, "number of levels")->capture_default_str();
    c->add_option("--eps", compress.eps, "threshold at the finest level")->capture_default_str();
    c->add_option("--predictor", compress.predictor, "linear | weno | weno-classical")
        ->transform(CLI::CheckedTransformer(kPredictors).description(""));
    c->add_option("--r", compress.r, "stencil parameter")->capture_default_str();
    add_weno_options(c, compress.epsilon_weno, compress.t);

    auto* d = app.add_subcommand("decompress", "Reconstruct an image from a CWMR file");
    d->add_option("in", in, "input CWMR file")->required();
    d->add_option("out", out, "output image")->required();

    std::string recon;
    AnalyzeOptions analyze;
    auto* a = app.add_subcommand("analyze", "E1/E2 (and NNZ) between an original and a reconstruction");
    a->add_option("orig", in, "original image")->required();
    a->add_option("recon", recon, "reconstructed image or CWMR file")->required();
    a->add_option("--cwmr", analyze.cwmr, "CWMR file to read NNZ from");
    a->add_flag("--post-round", analyze.post_round, "round a CWMR reconstruction to 8 bits first");

    BenchOptions bench;
    bool no_timing = false;
    auto* b = app.add_subcommand("bench-functions", "Decimate-then-predict E2 on an analytic field");
    b->add_option("--field", bench.field, "g | g_tilde | h | franke_h | franke_v | smooth_trig")
        ->transform(CLI::CheckedTransformer(kFields).description(""));
    b->add_option("--n", bench.n, "fine grid size")->capture_default_str();
    b->add_option("--predictor", bench.predictor, "linear | weno | weno-classical")->transform(CLI::CheckedTransformer(kPredictors).description(""));
    b->add_option("--r", bench.r, "stencil parameter")->capture_default_str();
    b->add_option("--jump", bench.jump, "jump height C");
    b->add_option("--region", bench.region, "interior | full")->transform(CLI::CheckedTransformer(kRegions).description(""));
    b->add_flag("--no-timing", no_timing, "print runtime_ms as 0");
    add_weno_options(b, bench.epsilon_weno, bench.t);

    ConvergenceOptions conv;
    std::string ns = "64,128,256,512";
    auto* v = app.add_subcommand("convergence", "Prediction error against grid size");
    v->add_option("--field", conv.field, "g | g_tilde | h | franke_h | franke_v | smooth_trig")->transform(CLI::CheckedTransformer(kFields).description(""));
    v->add_option("--predictor", conv.predictor, "linear | weno | weno-classical")->transform(CLI::CheckedTransformer(kPredictors).description(""));
    v->add_option("--r", conv.r, "stencil parameter")->capture_default_str();
    v->add_option("--ns", ns, "comma-separated doubling sizes")->capture_default_str();
    v->add_option("--region", conv.region, "interior | full")->transform(CLI::CheckedTransformer(kRegions).description(""));
    add_weno_options(v, conv.epsilon_weno, conv.t);

    int dump_r = 3;
    auto* f = app.add_subcommand("dump-filters", "Filter ladder as CSV");
    f->add_option("--r", dump_r, "stencil parameter")->capture_default_str();

    std::size_t synth_n = 256;
    auto* s = app.add_subcommand("make-synthetic", "Write the geometric test image (PPM)");
    s->add_option("out", out, "output image")->required();
    s->add_option("--n", synth_n, "image side")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*c) {
            cmd_compress(in, out, compress, std::cout);
        } else if (*d) {
            cmd_decompress(in, out, std::cout);
        } else if (*a) {
            cmd_analyze(in, recon, analyze, std::cout);
        } else if (*b) {
            bench.timing = !no_timing;
            cmd_bench_functions(bench, std::cout);
        } else if (*v) {
            conv.ns = parse_sizes(ns);
            cmd_convergence(conv, std::cout);
        } else if (*f) {
            cmd_dump_filters(dump_r, std::cout);
        } else if (*s) {
            cmd_make_synthetic(out, synth_n, std::cout);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const cwmr::FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
