#pragma once
#include <string>
#include <vector>

namespace wittenlab {

struct Check {
    std::string name;
    bool pass = false;
    double value = 0.0;
    std::string bound;   // human-readable, e.g. "<= 1e-6"
    std::string detail;
};

// Pass/fail record of one command run, written as summary.json.
class Summary {
public:
    explicit Summary(std::string command) : command_(std::move(command)) {}

    void add(std::string name, bool pass, double value = 0.0, std::string bound = "", std::string detail = "");
    void note(const std::string& key, const std::string& value);
    void file(const std::string& path);  // report files written by the command

    bool all_pass() const;
    const std::vector<Check>& checks() const { return checks_; }
    const std::string& command() const { return command_; }
    std::string json() const;

private:
    std::string command_;
    std::vector<Check> checks_;
    std::vector<std::pair<std::string, std::string>> notes_;
    std::vector<std::string> files_;
};

// creates the directory if needed; returns the full path
std::string write_report(const std::string& dir, const std::string& name, const std::string& content);

}  // namespace wittenlab
