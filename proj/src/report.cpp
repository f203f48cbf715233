#include "wittenlab/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "wittenlab/errors.hpp"

namespace wittenlab {

void Summary::add(std::string name, bool pass, double value, std::string bound, std::string detail) {
    checks_.push_back({std::move(name), pass, value, std::move(bound), std::move(detail)});
}

void Summary::note(const std::string& key, const std::string& value) { notes_.emplace_back(key, value); }

void Summary::file(const std::string& path) { files_.push_back(path); }

bool Summary::all_pass() const {
    for (auto& c : checks_)
        if (!c.pass) return false;
    return true;
}

std::string Summary::json() const {
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["all_pass"] = all_pass();
    auto arr = nlohmann::ordered_json::array();
    for (auto& c : checks_) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["pass"] = c.pass;
        if (std::isfinite(c.value)) e["value"] = c.value;
        else e["value"] = nullptr;
        if (!c.bound.empty()) e["bound"] = c.bound;
        if (!c.detail.empty()) e["detail"] = c.detail;
        arr.push_back(e);
    }
    j["checks"] = arr;
    nlohmann::ordered_json notes = nlohmann::ordered_json::object();
    for (auto& [k, v] : notes_) notes[k] = v;
    j["notes"] = notes;
    j["files"] = files_;
    return j.dump(2) + "\n";
}

std::string write_report(const std::string& dir, const std::string& name, const std::string& content) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory '" + dir + "': " + ec.message());
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << content;
    return path;
}

}  // namespace wittenlab
