#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wittenlab/config.hpp"
#include "wittenlab/report.hpp"

namespace wittenlab {

struct CommonOptions {
    std::string out = "out";
    bool assert_mode = false;  // failing checks turn into exit code 2
    int threads = 0;
};

// Each command writes its reports into opt.out, prints a short log to `log` and
// returns the checks it ran. finish() writes summary.json and picks the exit code.
Summary cmd_constants(const CommonOptions& opt, std::ostream& log, const std::string& path, int n, double L);
Summary cmd_osc1d(const CommonOptions& opt, std::ostream& log, double a, double t, int k, bool harmonic, int sign);
Summary cmd_scaling(const CommonOptions& opt, std::ostream& log, const std::vector<double>& t_list, int k);
Summary cmd_local(const CommonOptions& opt, std::ostream& log, const std::string& model, int index, int dim, double a,
                  double t, int m);
// what: clusters | fit | elements
Summary cmd_circle(const CommonOptions& opt, std::ostream& log, const ExperimentConfig& cfg, const std::string& what);
// what: validate | eliminate | incidence | fuzz; source: a .cplx file or a named example
struct ComplexSource {
    std::string file;
    std::string example;
};
Summary cmd_complex(const CommonOptions& opt, std::ostream& log, const std::string& what, const ComplexSource& src,
                    bool have_seed = false, std::uint64_t seed = 0, int count = 100);
Summary cmd_compare(const CommonOptions& opt, std::ostream& log, const ExperimentConfig& cfg);

int finish(const Summary& s, const CommonOptions& opt, std::ostream& log);

}  // namespace wittenlab
