#pragma once
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wittenlab/circle_function.hpp"

namespace wittenlab {

enum class CellKind { NonDeg, Bd0, Bd1 };
std::string to_string(CellKind k);
CellKind parse_cell_kind(const std::string& s);

struct Cell {
    std::string id;
    int degree = 0;
    CellKind kind = CellKind::NonDeg;
    double f_value = 0.0;
    std::string partner;  // Bd0 <-> Bd1
};

using IntMatrix = std::vector<std::vector<long long>>;

// delta[k] maps C^k -> C^{k+1}: rows are cells[k+1], columns cells[k];
// delta(e_col) = sum_row delta[k][row][col] e_row.
struct CochainComplex {
    std::vector<std::vector<Cell>> cells;
    std::vector<IntMatrix> delta;  // size = cells.size() - 1 (at least 0)

    int degrees() const { return static_cast<int>(cells.size()); }
    std::size_t dim(int k) const { return k >= 0 && k < degrees() ? cells[k].size() : 0; }
    // (degree, index) of a cell id; throws InputError
    std::pair<int, int> locate(const std::string& id) const;
    const Cell& cell(const std::string& id) const;
    long long entry(const std::string& row, const std::string& col) const;
    void set_entry(const std::string& row, const std::string& col, long long v);
    // ensures delta has the right shapes (zero-filled)
    void reshape();
    void add_cell(const Cell& c);
    std::vector<std::string> bd_pairs() const;  // ids of Bd0 cells
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
};
ValidationReport validate(const CochainComplex& c);

// rank over Q by fraction-free (Bareiss) elimination
int rank(const IntMatrix& m);
std::vector<int> betti(const CochainComplex& c);

struct EliminationStep {
    std::string pair;  // Bd0 id
    int degree = 0;
    double f_value = 0.0;
    int changed_entries = 0;
};

// cancel the pair (y0, y1); y0 = Bd0 id.
// enforce_order: y must be the lowest-f remaining pair in its degree.
CochainComplex eliminate_pair(const CochainComplex& c, const std::string& y0, bool enforce_order = true);
CochainComplex eliminate_all(const CochainComplex& c, std::vector<EliminationStep>* trace = nullptr);

// ---- trajectories --------------------------------------------------------

struct FlowVertex {
    std::string id;     // NonDeg cell id, or the Bd0 id for a birth-death point
    int degree = 0;     // index (birth-death: degree of its 0-cell)
    bool bd = false;
    double f_value = 0.0;
};

struct FlowEdge {
    std::string from, to;
    int sign = 1;
};

struct FlowGraph {
    std::vector<FlowVertex> vertices;
    std::vector<FlowEdge> edges;  // parallel edges allowed
    const FlowVertex& vertex(const std::string& id) const;
    // throws NotMorseSmale unless every edge goes strictly down in f
    void check_acyclic() const;
};

// Edges read off delta: entry v between cells contributes |v| trajectories of sign sgn(v).
FlowGraph flow_graph_from_complex(const CochainComplex& c);

// I(from, to) = sum over generalized trajectories of (-1)^{#bd points on the path} prod eps,
// the starting vertex counted when it is a birth-death point.
long long generalized_incidence_pathsum(const FlowGraph& g, const std::string& from, const std::string& to);

using ITable = std::map<std::pair<std::string, std::string>, long long>;
// all I(x^{k+1}, x^k) and I(y^k, x^k) by recursion over birth-death points in increasing f
ITable incidence_recursive(const FlowGraph& g);

// ---- hat basis -------------------------------------------------------------

struct HatVector {
    std::string label;  // "x" for NonDeg cells, "y:0" / "y:1" for birth-death
    int degree = 0;
    std::map<std::string, long long> coeffs;  // over the original cells
};

struct HatBasis {
    std::vector<HatVector> vectors;
    // delta(hat e_x) expanded in the hat basis of the next degree
    std::map<std::pair<std::string, std::string>, long long> nd_block;  // (x', x) coefficient
    long long y0_defect = 0;  // max |coefficient| on hat e_y^0
    long long y1_part = 0;    // max |coefficient| on hat e_y^1 (allowed)
    bool matches_elimination = false;
    const HatVector& get(const std::string& label) const;
};
HatBasis hat_basis(const CochainComplex& c, const ITable& I);

// ---- circle ----------------------------------------------------------------

struct CircleComplex {
    CochainComplex complex;
    FlowGraph graph;
    // 1-cells as oriented arcs [left, right] (angles, right may exceed 2 pi)
    std::map<std::string, std::pair<double, double>> arcs;
    std::map<std::string, double> points;  // 0-cells
    std::map<std::string, int> orientation;  // +1 or -1 (flipped Bd1 arcs)
};
CircleComplex circle_complex_from_function(const CircleFunction& f);

// ---- fuzzing ---------------------------------------------------------------

struct FuzzOptions {
    int degrees = 3;     // C^0..C^{degrees-1}
    int max_base = 3;    // nondegenerate cells with zero differential, per degree
    int nondeg_pairs = 2;
    int bd_pairs = 4;
    int max_entry = 3;   // rejection bound on |entries|
};
// Valid f-ordered complex built by inverse elimination; also returns the
// betti numbers it was built with.
CochainComplex fuzz_complex(std::mt19937_64& rng, const FuzzOptions& opt, std::vector<int>* betti_out = nullptr);

}  // namespace wittenlab
