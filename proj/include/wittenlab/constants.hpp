#pragma once
#include <string>
#include <vector>

namespace wittenlab {

struct OracleMeta {
    int n = 4095;       // coarsest grid of the (n, 2n+1, 4n+3) ladder
    double L = 8.0;
    std::string extrapolation = "richardson-h2";
    double richardson_rel_gap = 0.0;  // (n,2n) vs (2n,4n) extrapolants, max relative
};

// Cached spectral constants of P(1) = -d^2/dx^2 + 9x^4 - 6x.
struct Constants {
    std::vector<double> e;  // e_1..e_8
    double xi1_0 = 0.0;     // L2-normalized ground state at x = 0
    double gap_ratio = 0.0; // (e_2 - e_1)/e_1
    OracleMeta oracle;
};

// Documented oracle run: Sturm bisection + inverse iteration on the grids
// n, 2n+1, 4n+3 of [-L, L], Richardson extrapolation on the two finest.
Constants run_oracle(int n = 4095, double L = 8.0);

std::string to_json(const Constants& c);
Constants constants_from_json(const std::string& text);

// WITTENLAB_CONSTANTS, else the repository copy.
std::string constants_path();
void write_constants(const Constants& c, const std::string& path);
Constants read_constants(const std::string& path);

// Loaded once from constants_path(); throws MissingConstants.
const Constants& constants();
// Same, but nullptr instead of throwing.
const Constants* try_constants();

}  // namespace wittenlab
