#include "wittenlab/constants.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include "json.hpp"
#include "wittenlab/errors.hpp"
#include "wittenlab/oscillator1d.hpp"

namespace wittenlab {

namespace {
constexpr int kLevels = 8;
}

Constants run_oracle(int n, double L) {
    if (n < 16 || n % 2 == 0) throw InputError("oracle grid must be odd and >= 16");
    const Model1D p1 = Model1D::anharmonic(1.0, 1.0, -1);
    const GridSpectrum g1 = grid_spectrum(p1, L, n, kLevels);
    const GridSpectrum g2 = grid_spectrum(p1, L, 2 * n + 1, kLevels);
    const GridSpectrum g3 = grid_spectrum(p1, L, 4 * n + 3, kLevels);
    Constants c;
    c.oracle.n = n;
    c.oracle.L = L;
    double gap = 0;
    for (int m = 0; m < kLevels; ++m) {
        const double ra = (4.0 * g2.values[m] - g1.values[m]) / 3.0;
        const double rb = (4.0 * g3.values[m] - g2.values[m]) / 3.0;
        c.e.push_back(rb);
        gap = std::max(gap, std::abs(ra - rb) / std::abs(rb));
    }
    c.oracle.richardson_rel_gap = gap;
    c.gap_ratio = (c.e[1] - c.e[0]) / c.e[0];
    auto zero_value = [](const std::vector<double>& v) {
        const double x = v[(v.size() - 1) / 2];
        return x < 0 ? -x : x;
    };
    c.xi1_0 = (4.0 * zero_value(g3.vectors[0]) - zero_value(g2.vectors[0])) / 3.0;
    return c;
}

std::string to_json(const Constants& c) {
    nlohmann::ordered_json j;
    j["e"] = c.e;
    j["xi1_0"] = c.xi1_0;
    j["gap_ratio"] = c.gap_ratio;
    j["oracle"] = {{"n", c.oracle.n},
                   {"L", c.oracle.L},
                   {"extrapolation", c.oracle.extrapolation},
                   {"grids", {c.oracle.n, 2 * c.oracle.n + 1, 4 * c.oracle.n + 3}},
                   {"richardson_rel_gap", c.oracle.richardson_rel_gap}};
    return j.dump(2) + "\n";
}

Constants constants_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& ex) {
        throw MissingConstants(std::string("constants file is not valid JSON: ") + ex.what());
    }
    Constants c;
    try {
        c.e = j.at("e").get<std::vector<double>>();
        c.xi1_0 = j.at("xi1_0").get<double>();
        c.gap_ratio = j.value("gap_ratio", c.e.size() >= 2 ? (c.e[1] - c.e[0]) / c.e[0] : 0.0);
        const auto& o = j.at("oracle");
        c.oracle.n = o.at("n").get<int>();
        c.oracle.L = o.at("L").get<double>();
        c.oracle.extrapolation = o.at("extrapolation").get<std::string>();
        c.oracle.richardson_rel_gap = o.value("richardson_rel_gap", 0.0);
    } catch (const nlohmann::json::exception& ex) {
        throw MissingConstants(std::string("constants file lacks a field: ") + ex.what());
    }
    if (c.e.size() < 2) throw MissingConstants("constants file needs at least e_1 and e_2");
    return c;
}

std::string constants_path() {
    if (const char* env = std::getenv("WITTENLAB_CONSTANTS"); env && *env) return env;
    return WITTENLAB_DEFAULT_CONSTANTS;
}

void write_constants(const Constants& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << to_json(c);
}

Constants read_constants(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingConstants("cannot open " + path + " (run `wittenlab constants`)");
    std::stringstream ss;
    ss << in.rdbuf();
    return constants_from_json(ss.str());
}

namespace {
struct Cache {
    std::once_flag once;
    Constants value;
    std::string error;
    bool ok = false;
};
Cache& cache() {
    static Cache c;
    return c;
}
void load() {
    Cache& c = cache();
    std::call_once(c.once, [&c] {
        try {
            c.value = read_constants(constants_path());
            c.ok = true;
        } catch (const Error& ex) {
            c.error = ex.what();
        }
    });
}
}  // namespace

const Constants& constants() {
    load();
    if (!cache().ok) throw MissingConstants(cache().error);
    return cache().value;
}

const Constants* try_constants() {
    load();
    return cache().ok ? &cache().value : nullptr;
}

}  // namespace wittenlab
