#include "wittenlab/complex_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "wittenlab/errors.hpp"

namespace wittenlab {

namespace {

std::string where(int line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

CochainComplex parse_complex(const std::string& text) {
    CochainComplex c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    struct PendingEntry {
        std::string row, col;
        long long v;
        int line;
    };
    std::vector<PendingEntry> entries;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "cell") {
            Cell cell;
            if (!(ls >> cell.id)) throw InputError(where(lineno) + "cell without id");
            bool have_degree = false, have_f = false;
            std::string kv;
            while (ls >> kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos) throw InputError(where(lineno) + "expected key=value, got '" + kv + "'");
                std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
                try {
                    if (key == "degree") {
                        std::size_t used = 0;
                        cell.degree = std::stoi(val, &used);
                        if (used != val.size() || cell.degree < 0) throw std::invalid_argument(val);
                        have_degree = true;
                    } else if (key == "kind") {
                        cell.kind = parse_cell_kind(val);
                    } else if (key == "f") {
                        std::size_t used = 0;
                        cell.f_value = std::stod(val, &used);
                        if (used != val.size()) throw std::invalid_argument(val);
                        have_f = true;
                    } else if (key == "partner") {
                        cell.partner = val;
                    } else {
                        throw InputError(where(lineno) + "unknown key '" + key + "'");
                    }
                } catch (const std::invalid_argument&) {
                    throw InputError(where(lineno) + "bad value for " + key + ": '" + val + "'");
                } catch (const std::out_of_range&) {
                    throw InputError(where(lineno) + "value out of range for " + key);
                }
            }
            if (!have_degree || !have_f) throw InputError(where(lineno) + "cell needs degree= and f=");
            if (cell.kind != CellKind::NonDeg && cell.partner.empty())
                throw InputError(where(lineno) + "birth-death cell '" + cell.id + "' needs partner=");
            try {
                c.add_cell(cell);
            } catch (const InputError& e) {
                throw InputError(where(lineno) + e.what());
            }
        } else if (word == "delta") {
            PendingEntry e;
            e.line = lineno;
            std::string extra;
            if (!(ls >> e.row >> e.col >> e.v) || (ls >> extra))
                throw InputError(where(lineno) + "expected: delta <row> <col> <int>");
            entries.push_back(e);
        } else {
            throw InputError(where(lineno) + "unknown record '" + word + "'");
        }
    }
    c.reshape();
    for (auto& e : entries) {
        const int kr = c.locate(e.row).first, kc = c.locate(e.col).first;
        if (kr != kc + 1)
            throw InputError(where(e.line) + "delta " + e.row + " " + e.col + " does not raise degree by one");
        c.set_entry(e.row, e.col, e.v);
    }
    for (auto& layer : c.cells)
        for (auto& cell : layer)
            if (!cell.partner.empty()) {
                const Cell& p = c.cell(cell.partner);
                if (p.partner != cell.id) throw InputError("partners of '" + cell.id + "' do not match");
            }
    return c;
}

std::string format_complex(const CochainComplex& c) {
    std::ostringstream out;
    out << std::setprecision(17);
    for (auto& layer : c.cells)
        for (auto& cell : layer) {
            out << "cell " << cell.id << " degree=" << cell.degree << " kind=" << to_string(cell.kind)
                << " f=" << cell.f_value;
            if (!cell.partner.empty()) out << " partner=" << cell.partner;
            out << '\n';
        }
    for (std::size_t k = 0; k < c.delta.size(); ++k)
        for (std::size_t r = 0; r < c.delta[k].size(); ++r)
            for (std::size_t q = 0; q < c.delta[k][r].size(); ++q)
                if (c.delta[k][r][q] != 0)
                    out << "delta " << c.cells[k + 1][r].id << ' ' << c.cells[k][q].id << ' ' << c.delta[k][r][q]
                        << '\n';
    return out.str();
}

CochainComplex read_complex(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_complex(ss.str());
}

void write_complex(const std::string& path, const CochainComplex& c) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << format_complex(c);
}

}  // namespace wittenlab
