#include "wittenlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "wittenlab/errors.hpp"

namespace wittenlab {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw InputError(key + ": not a number: '" + v + "'");
    }
    if (trim(v.substr(used)) != "") throw InputError(key + ": not a number: '" + v + "'");
    return x;
}

int to_int(const std::string& key, const std::string& v) {
    double x = to_double(key, v);
    if (x != static_cast<int>(x)) throw InputError(key + ": expected an integer, got '" + v + "'");
    return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InputError(key + ": expected true or false, got '" + v + "'");
}

}  // namespace

std::vector<double> parse_list(const std::string& s0) {
    std::string s = trim(s0);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') throw InputError("unterminated list '" + s0 + "'");
        s = s.substr(1, s.size() - 2);
    }
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            if (out.empty() && trim(s).empty()) break;
            throw InputError("empty list item in '" + s0 + "'");
        }
        out.push_back(to_double("list", item));
    }
    return out;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_zeros = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        try {
            if (key == "example") c.example = val;
            else if (key == "simple_zeros") c.simple_zeros = parse_list(val), have_zeros = true;
            else if (key == "double_zeros") c.double_zeros = parse_list(val), have_zeros = true;
            else if (key == "self_index") c.self_index = to_bool(key, val);
            else if (key == "t_schedule") c.t_schedule = parse_list(val);
            else if (key == "n_min") c.n_min = to_int(key, val);
            else if (key == "n_factor") c.n_factor = to_double(key, val);
            else if (key == "scheme") c.scheme = parse_scheme(val);
            else if (key == "threads") c.threads = to_int(key, val);
            else if (key == "tol_scaling") c.tol.scaling = to_double(key, val);
            else if (key == "tol_ratio") c.tol.ratio = to_double(key, val);
            else if (key == "tol_integer") c.tol.integer = to_double(key, val);
            else if (key == "output") c.output = val;
            else throw InputError("unknown key '" + key + "'");
        } catch (const InputError& e) {
            throw InputError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (have_zeros && !c.example.empty()) throw InputError("give either example or zero lists, not both");
    c.validate();
    return c;
}

ExperimentConfig read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void ExperimentConfig::validate() const {
    if (t_schedule.empty()) throw InputError("t_schedule is empty");
    for (std::size_t i = 0; i < t_schedule.size(); ++i) {
        if (!(t_schedule[i] > 0)) throw InputError("t_schedule entries must be positive");
        if (i > 0 && !(t_schedule[i] > t_schedule[i - 1])) throw InputError("t_schedule must be ascending");
    }
    if (!(tol.scaling > 0) || !(tol.ratio > 0) || !(tol.integer > 0)) throw InputError("tolerances must be positive");
    if (n_min < 64) throw InputError("n_min must be at least 64");
    if (!(n_factor > 0)) throw InputError("n_factor must be positive");
    if (example.empty() && simple_zeros.empty() && double_zeros.empty())
        throw InputError("no function: set example or simple_zeros/double_zeros");
}

ExampleSpec ExperimentConfig::function_spec() const {
    if (!example.empty()) return named_example(example);
    ExampleSpec s;
    s.name = "custom";
    s.simple_zeros = simple_zeros;
    s.double_zeros = double_zeros;
    s.self_index = self_index;
    return s;
}

CircleFunction ExperimentConfig::function() const { return make_function(function_spec()); }

LabOptions ExperimentConfig::lab_options() const {
    LabOptions o;
    o.n_min = n_min;
    o.n_factor = n_factor;
    o.scheme = scheme;
    o.threads = threads;
    return o;
}

}  // namespace wittenlab
