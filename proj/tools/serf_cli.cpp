#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "serf/activations.hpp"
#include "serf/datasets.hpp"
#include "serf/harness.hpp"
#include "serf/landscape.hpp"
#include "serf/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitProperty = 1;
constexpr int kExitIo = 2;

std::string valid_kind_list() {
    std::string s;
    for (serf::ActivationTag t : serf::all_activation_tags()) {
        if (!s.empty()) s += ", ";
        s += serf::tag_name(t);
    }
    return s;
}

serf::Activation parse_kind(const std::string& name) {
    auto tag = serf::parse_activation_tag(name);
    if (!tag) {
        throw std::invalid_argument("unknown activation kind '" + name +
                                    "'; valid kinds: " + valid_kind_list());
    }
    return serf::make_activation(*tag);
}

// Central difference with one Richardson step, same stencil the test suite
// uses. h is scaled to x and kept exactly representable.
double fd_grad(const serf::Activation& a, double x) {
    double h = 6e-6 * std::max(1.0, std::fabs(x));
    volatile double xp = x + h, xm = x - h;
    double hh = (xp - xm) * 0.5;
    auto d = [&](double step) {
        volatile double p = x + step, m = x - step;
        return (serf::value(a, p) - serf::value(a, m)) / (p - m);
    };
    double d1 = d(hh), d2 = d(0.5 * hh);
    return (4.0 * d2 - d1) / 3.0;
}

struct CurvesOpts {
    std::vector<std::string> kinds = {"serf", "swish", "mish"};
    double xmin = -5.0;
    double xmax = 5.0;
    std::size_t n = 401;
    std::string out;
};

int run_curves(const CurvesOpts& o) {
    if (o.n < 2) throw std::invalid_argument("need at least 2 grid points, got " + std::to_string(o.n));
    if (!std::isfinite(o.xmin) || !std::isfinite(o.xmax) || !(o.xmin < o.xmax)) {
        throw std::invalid_argument("grid bounds must be finite with xmin < xmax");
    }
    std::vector<serf::Activation> acts;
    acts.reserve(o.kinds.size());
    for (const std::string& name : o.kinds) acts.push_back(parse_kind(name));

    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) throw std::runtime_error("cannot open " + o.out + " for writing");
    }
    std::ostream& os = o.out.empty() ? std::cout : file;
    os << "x,kind,f,df,d2f\n";
    char buf[192];
    for (const serf::Activation& a : acts) {
        const char* name = serf::tag_name(a.tag);
        for (std::size_t i = 0; i < o.n; ++i) {
            double x = i + 1 == o.n
                           ? o.xmax
                           : o.xmin + (o.xmax - o.xmin) * static_cast<double>(i) /
                                          static_cast<double>(o.n - 1);
            std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.17g,%.17g\n", x, name,
                          serf::value(a, x), serf::grad(a, x), serf::second_grad(a, x));
            os << buf;
        }
    }
    os.flush();
    if (!o.out.empty() && !file) throw std::runtime_error("short write to " + o.out);
    return kExitOk;
}

struct GradcheckOpts {
    std::vector<std::string> kinds;  // empty means all
    std::size_t samples = 10000;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    bool include_kinks = false;
};

int run_gradcheck(const GradcheckOpts& o) {
    if (o.samples == 0) throw std::invalid_argument("need at least 1 sample");
    if (!(o.tol >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
    std::vector<serf::Activation> acts;
    if (o.kinds.empty()) {
        for (serf::ActivationTag t : serf::all_activation_tags())
            acts.push_back(serf::make_activation(t));
    } else {
        for (const std::string& name : o.kinds) acts.push_back(parse_kind(name));
    }

    const double lo = std::log(1e-6), hi = std::log(30.0);
    std::size_t failed = 0;
    for (const serf::Activation& a : acts) {
        bool kinked = a.tag == serf::ActivationTag::relu ||
                      a.tag == serf::ActivationTag::leaky_relu ||
                      a.tag == serf::ActivationTag::selu;
        serf::Rng rng(o.seed);
        double worst_err = -1.0, worst_x = 0.0;
        for (std::size_t i = 0; i < o.samples; ++i) {
            double mag = std::exp(rng.uniform(lo, hi));
            double x = (rng.next_u64() & 1) ? mag : -mag;
            if (kinked && !o.include_kinks && std::fabs(x) <= 1e-3) continue;
            double g = serf::grad(a, x);
            double err = std::fabs(g - fd_grad(a, x)) / std::max(1.0, std::fabs(g));
            if (err > worst_err) {
                worst_err = err;
                worst_x = x;
            }
        }
        if (worst_err < 0.0) worst_err = 0.0;
        bool ok = worst_err <= o.tol;
        if (!ok) ++failed;
        std::printf("%-11s worst x = %-24.17g rel err = %-12.3e %s\n", serf::tag_name(a.tag),
                    worst_x, worst_err, ok ? "pass" : "FAIL");
    }
    if (failed == 0) {
        std::printf("gradcheck: all %zu kinds pass (tol %.3g)\n", acts.size(), o.tol);
        return kExitOk;
    }
    std::printf("gradcheck: %zu of %zu kinds failed (tol %.3g)\n", failed, acts.size(), o.tol);
    return kExitProperty;
}

struct LandscapeOpts {
    std::string activation = "serf";
    std::uint64_t seed = 0;
    std::size_t layers = 6;
    std::size_t width = 16;
    std::size_t res = 256;
    std::string out = "landscape";
};

int run_landscape(const LandscapeOpts& o) {
    serf::Activation act = parse_kind(o.activation);
    if (o.res < 2) throw std::invalid_argument("resolution must be at least 2");
    if (o.layers == 0 || o.width == 0) throw std::invalid_argument("layers and width must be >= 1");
    serf::NetworkSpec spec = serf::landscape_network_spec(act.tag, o.seed, o.layers, o.width);
    serf::GridSpec grid;
    grid.res_x = grid.res_y = o.res;
    serf::ScalarField field = serf::landscape_render(spec, grid);
    double stat = serf::mean_abs_laplacian(field);
    std::string pgm = o.out + ".pgm", csv = o.out + ".csv";
    serf::write_pgm16(field, pgm);
    serf::write_field_csv(field, csv);
    std::printf("landscape: activation=%s seed=%llu layers=%zu width=%zu res=%zu "
                "mean_abs_laplacian=%.17g\n",
                serf::tag_name(act.tag), static_cast<unsigned long long>(o.seed), o.layers,
                o.width, o.res, stat);
    if (o.res < 3) {
        std::printf("note: grid has no interior points; the statistic is 0 by convention\n");
    }
    std::printf("wrote %s\nwrote %s\n", pgm.c_str(), csv.c_str());
    return kExitOk;
}

int run_ablate(const std::string& config_path, const std::string& out_dir) {
    serf::AblationConfig cfg = serf::load_ablation_config(config_path);
    std::vector<serf::MetricsRecord> records = serf::run_ablation(cfg, out_dir);
    std::printf("ablation complete: %zu records -> %s/%s\n", records.size(), out_dir.c_str(),
                cfg.records_path.c_str());
    std::fputs(serf::summary_text(serf::summarize(records)).c_str(), stdout);
    return kExitOk;
}

int run_summarize(const std::string& records_path) {
    std::vector<serf::MetricsRecord> records = serf::read_records_csv(records_path);
    std::fputs(serf::summary_text(serf::summarize(records)).c_str(), stdout);
    return kExitOk;
}

int run_decompose(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("x must be finite");
    serf::SerfDecomposition d = serf::serf_decompose(x);
    double residual = std::fabs(d.total - (d.precond * d.swish_val + d.gate));
    std::printf("x        = %.17g\n", x);
    std::printf("precond  = %.17g\n", d.precond);
    std::printf("swish    = %.17g\n", d.swish_val);
    std::printf("gate     = %.17g\n", d.gate);
    std::printf("total    = %.17g\n", d.total);
    std::printf("residual = %.17g\n", residual);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serf activation numerics: curves, gradient checks, landscapes, ablations"};
    app.require_subcommand(1);

    CurvesOpts co;
    CLI::App* curves = app.add_subcommand("curves", "sample f, df, d2f on a grid as CSV");
    curves->add_option("--kinds", co.kinds, "comma separated activation kinds")
        ->delimiter(',')
        ->capture_default_str();
    curves->add_option("--xmin", co.xmin, "left edge of the grid")->capture_default_str();
    curves->add_option("--xmax", co.xmax, "right edge of the grid")->capture_default_str();
    curves->add_option("--n", co.n, "number of grid points (>= 2)")->capture_default_str();
    curves->add_option("--out", co.out, "output CSV path (default: stdout)");

    GradcheckOpts go;
    CLI::App* gradcheck =
        app.add_subcommand("gradcheck", "compare analytic gradients against finite differences");
    gradcheck->add_option("--kinds", go.kinds, "kinds to check (default: all)")->delimiter(',');
    gradcheck->add_option("--samples", go.samples, "log-uniform sample count per kind")
        ->capture_default_str();
    gradcheck->add_option("--tol", go.tol, "relative tolerance")->capture_default_str();
    gradcheck->add_option("--seed", go.seed, "sampling seed")->capture_default_str();
    gradcheck->add_flag("--include-kinks", go.include_kinks,
                        "also check relu/leaky_relu/selu within 1e-3 of the kink");

    LandscapeOpts lo;
    CLI::App* landscape =
        app.add_subcommand("landscape", "render the output landscape of a random network");
    landscape->add_option("--activation", lo.activation, "hidden activation kind")
        ->capture_default_str();
    landscape->add_option("--seed", lo.seed, "weight seed")->capture_default_str();
    landscape->add_option("--layers", lo.layers, "hidden layer count")->capture_default_str();
    landscape->add_option("--width", lo.width, "hidden layer width")->capture_default_str();
    landscape->add_option("--res", lo.res, "grid resolution per side (>= 2)")
        ->capture_default_str();
    landscape->add_option("--out", lo.out, "output basename for .pgm and .csv")
        ->capture_default_str();

    std::string config_path, out_dir = ".";
    CLI::App* ablate = app.add_subcommand("ablate", "run an ablation sweep from a config file");
    ablate->add_option("--config", config_path, "config file path")->required();
    ablate->add_option("--out-dir", out_dir, "directory for records.csv")->capture_default_str();

    std::string records_path;
    CLI::App* summarize = app.add_subcommand("summarize", "aggregate a records.csv into a table");
    summarize->add_option("--records", records_path, "records CSV path")->required();

    double dx = 0.0;
    CLI::App* decompose =
        app.add_subcommand("decompose", "print the serf gradient decomposition at a point");
    decompose->add_option("--x", dx, "evaluation point")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitIo;
    }

    try {
        if (curves->parsed()) return run_curves(co);
        if (gradcheck->parsed()) return run_gradcheck(go);
        if (landscape->parsed()) return run_landscape(lo);
        if (ablate->parsed()) return run_ablate(config_path, out_dir);
        if (summarize->parsed()) return run_summarize(records_path);
        if (decompose->parsed()) return run_decompose(dx);
    } catch (const serf::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitProperty;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitProperty;
    }
    return kExitOk;
}
