#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>

#include "wittenlab/commands.hpp"
#include "wittenlab/constants.hpp"
#include "wittenlab/errors.hpp"

using namespace wittenlab;

namespace {

// --config wins over --example; --t replaces the schedule.
ExperimentConfig load_config(const std::string& path, const std::string& example, const std::vector<double>& t) {
    ExperimentConfig cfg;
    if (!path.empty()) {
        if (!example.empty()) throw InputError("give either --config or --example, not both");
        cfg = read_config(path);
    } else if (!example.empty()) {
        cfg.example = example;
    } else {
        throw InputError("need --config or --example");
    }
    if (!t.empty()) cfg.t_schedule = t;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Witten deformation experiments for generalized Morse functions"};
    app.require_subcommand(1);
    app.fallthrough();
    CommonOptions opt;
    auto* out_opt = app.add_option("--out", opt.out, "report directory (default: the config's output, else out)");
    app.add_flag("--assert", opt.assert_mode, "exit 2 when a check fails");
    app.add_option("--threads", opt.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

    std::optional<Summary> result;
    std::ostream& log = std::cout;

    // constants
    std::string cpath;
    int cn = 4095;
    double cL = 8.0;
    auto* c_const = app.add_subcommand("constants", "recompute the P(1) spectral constants");
    c_const->add_option("--path", cpath, "output file (default: the constants location in use)");
    c_const->add_option("--n", cn, "coarsest grid size")->capture_default_str();
    c_const->add_option("--L", cL, "half-width of the domain")->capture_default_str();
    c_const->callback([&] { result = cmd_constants(opt, log, cpath.empty() ? constants_path() : cpath, cn, cL); });

    // osc1d
    double oa = 1.0, ot = 1.0;
    int ok = 5, osign = -1;
    bool oharm = false;
    auto* c_osc = app.add_subcommand("osc1d", "spectrum of a one-dimensional model operator");
    c_osc->add_option("--a", oa, "cubic coefficient")->capture_default_str();
    c_osc->add_option("--t", ot, "deformation parameter")->capture_default_str();
    c_osc->add_option("--k", ok, "number of levels")->capture_default_str();
    c_osc->add_option("--sign", osign, "form sign (+1 or -1)")->capture_default_str();
    c_osc->add_flag("--harmonic", oharm, "harmonic oscillator instead of the quartic one");
    c_osc->callback([&] { result = cmd_osc1d(opt, log, oa, ot, ok, oharm, osign); });

    // scaling
    std::vector<double> st{8, 27, 1000};
    int sk = 5;
    auto* c_scal = app.add_subcommand("scaling", "t^{2/3} scaling of the quartic levels");
    c_scal->add_option("--t", st, "comma-separated t values")->delimiter(',')->capture_default_str();
    c_scal->add_option("--k", sk, "number of levels")->capture_default_str();
    c_scal->callback([&] { result = cmd_scaling(opt, log, st, sk); });

    // local
    std::string lmodel = "bd";
    int lindex = 0, ldim = 2, lm = 6;
    double la = 1.0, lt = 16.0;
    auto* c_loc = app.add_subcommand("local", "spectra of the local model at a critical point");
    c_loc->add_option("--model", lmodel, "bd or nd")->capture_default_str();
    c_loc->add_option("--index", lindex, "index k")->capture_default_str();
    c_loc->add_option("--dim", ldim, "dimension n")->capture_default_str();
    c_loc->add_option("--a", la, "cubic coefficient (bd)")->capture_default_str();
    c_loc->add_option("--t", lt, "deformation parameter")->capture_default_str();
    c_loc->add_option("--m", lm, "eigenvalues per degree")->capture_default_str();
    c_loc->callback([&] { result = cmd_local(opt, log, lmodel, lindex, ldim, la, lt, lm); });

    // circle / compare share the config flags
    std::string cfg_path, cfg_example;
    std::vector<double> cfg_t;
    auto config = [&] {
        auto cfg = load_config(cfg_path, cfg_example, cfg_t);
        if (out_opt->count() == 0) opt.out = cfg.output;
        return cfg;
    };
    auto add_cfg = [&](CLI::App* sub) {
        sub->add_option("--config", cfg_path, "experiment config file");
        sub->add_option("--example", cfg_example, "named example (A or B)");
        sub->add_option("--t", cfg_t, "comma-separated t schedule (overrides the config)")->delimiter(',');
    };
    auto* c_circ = app.add_subcommand("circle", "Witten Laplacian on the circle");
    c_circ->require_subcommand(1);
    for (const char* what : {"clusters", "fit", "elements"}) {
        auto* s = c_circ->add_subcommand(what);
        add_cfg(s);
        s->callback([&, w = std::string(what)] {
            auto cfg = config();
            result = cmd_circle(opt, log, cfg, w);
        });
    }
    auto* c_cmp = app.add_subcommand("compare", "spectral complex vs Morse complex");
    add_cfg(c_cmp);
    c_cmp->callback([&] {
        auto cfg = config();
        result = cmd_compare(opt, log, cfg);
    });

    // complex
    ComplexSource src;
    std::uint64_t seed = 0;
    int count = 100;
    auto* c_cx = app.add_subcommand("complex", "integer cochain complexes");
    c_cx->require_subcommand(1);
    for (const char* what : {"validate", "eliminate", "incidence", "fuzz"}) {
        auto* s = c_cx->add_subcommand(what);
        const std::string w = what;
        if (w == "fuzz") {
            auto* so = s->add_option("--seed", seed, "RNG seed");
            s->add_option("--count", count, "number of random complexes")->capture_default_str();
            s->callback([&, so] { result = cmd_complex(opt, log, "fuzz", src, so->count() > 0, seed, count); });
        } else {
            s->add_option("--file", src.file, "complex file");
            s->add_option("--example", src.example, "circle complex of a named example");
            s->callback([&, w] { result = cmd_complex(opt, log, w, src); });
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (!result) return 1;
    try {
        return finish(*result, opt, log);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
