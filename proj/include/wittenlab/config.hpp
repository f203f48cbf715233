#pragma once
#include <map>
#include <string>
#include <vector>

#include "wittenlab/circle_function.hpp"
#include "wittenlab/circle_lab.hpp"

namespace wittenlab {

struct Tolerances {
    double scaling = 0.01;  // |exponent - 2/3|
    double ratio = 0.05;    // relative, for limits and ratios
    double integer = 0.2;   // absolute, for integer identification
};

// Flat key = value file; lists as [x, y, ...]; '#' starts a comment.
//   example = A                    (or simple_zeros / double_zeros / self_index)
//   t_schedule = [50, 100, 200, 400, 800]
//   n_min = 8192   n_factor = 1   scheme = conjugated   threads = 0
//   tol_scaling = 0.01   tol_ratio = 0.05   tol_integer = 0.2
//   output = out
struct ExperimentConfig {
    std::string example;
    std::vector<double> simple_zeros, double_zeros;
    bool self_index = true;
    std::vector<double> t_schedule{50, 100, 200, 400, 800};
    int n_min = 8192;
    double n_factor = 1.0;
    Scheme scheme = Scheme::Conjugated;
    int threads = 0;
    Tolerances tol;
    std::string output = "out";

    // throws InputError on an empty or unsorted schedule, non-positive tolerances, ...
    void validate() const;
    ExampleSpec function_spec() const;
    CircleFunction function() const;
    LabOptions lab_options() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig read_config(const std::string& path);
// parse "[1, 2.5, 3]" (brackets optional)
std::vector<double> parse_list(const std::string& s);

}  // namespace wittenlab
