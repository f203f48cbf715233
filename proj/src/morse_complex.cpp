#include "wittenlab/morse_complex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <numbers>
#include <set>
#include <sstream>

#include "wittenlab/errors.hpp"

namespace wittenlab {

namespace {

long long cmul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow("integer overflow in a product");
    return r;
}

long long cadd(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw Overflow("integer overflow in a sum");
    return r;
}

long long csub(long long a, long long b) {
    long long r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow("integer overflow in a difference");
    return r;
}

// exact rational with checked arithmetic
struct Q {
    long long n = 0, d = 1;
    Q() = default;
    Q(long long v) : n(v) {}
    Q(long long a, long long b) : n(a), d(b) { norm(); }
    void norm() {
        if (d == 0) throw DegenerateInput("division by zero");
        if (d < 0) { n = -n; d = -d; }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
    }
    Q operator+(const Q& o) const { return Q(cadd(cmul(n, o.d), cmul(o.n, d)), cmul(d, o.d)); }
    Q operator-(const Q& o) const { return Q(csub(cmul(n, o.d), cmul(o.n, d)), cmul(d, o.d)); }
    Q operator*(const Q& o) const { return Q(cmul(n, o.n), cmul(d, o.d)); }
    Q operator/(const Q& o) const { return Q(cmul(n, o.d), cmul(d, o.n)); }
    bool zero() const { return n == 0; }
};

// solve T x = b exactly (T square)
std::vector<Q> solve_exact(std::vector<std::vector<Q>> T, std::vector<Q> b) {
    const std::size_t n = T.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && T[p][c].zero()) ++p;
        if (p == n) throw DegenerateInput("hat basis is not a basis (singular change of basis)");
        std::swap(T[p], T[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || T[r][c].zero()) continue;
            Q m = T[r][c] / T[c][c];
            for (std::size_t j = c; j < n; ++j) T[r][j] = T[r][j] - m * T[c][j];
            b[r] = b[r] - m * b[c];
        }
    }
    for (std::size_t c = 0; c < n; ++c) b[c] = b[c] / T[c][c];
    return b;
}

}  // namespace

std::string to_string(CellKind k) {
    switch (k) {
        case CellKind::NonDeg: return "NonDeg";
        case CellKind::Bd0: return "Bd0";
        case CellKind::Bd1: return "Bd1";
    }
    return "?";
}

CellKind parse_cell_kind(const std::string& s) {
    if (s == "NonDeg") return CellKind::NonDeg;
    if (s == "Bd0") return CellKind::Bd0;
    if (s == "Bd1") return CellKind::Bd1;
    throw InputError("unknown cell kind '" + s + "'");
}

// ---- CochainComplex ---------------------------------------------------------

std::pair<int, int> CochainComplex::locate(const std::string& id) const {
    for (int k = 0; k < degrees(); ++k)
        for (std::size_t i = 0; i < cells[k].size(); ++i)
            if (cells[k][i].id == id) return {k, static_cast<int>(i)};
    throw InputError("unknown cell '" + id + "'");
}

const Cell& CochainComplex::cell(const std::string& id) const {
    auto [k, i] = locate(id);
    return cells[k][i];
}

long long CochainComplex::entry(const std::string& row, const std::string& col) const {
    auto [kr, ir] = locate(row);
    auto [kc, ic] = locate(col);
    if (kr != kc + 1) return 0;
    return delta[kc][ir][ic];
}

void CochainComplex::set_entry(const std::string& row, const std::string& col, long long v) {
    auto [kr, ir] = locate(row);
    auto [kc, ic] = locate(col);
    if (kr != kc + 1) throw DegreeMismatch("delta entry (" + row + ", " + col + ") joins degrees " +
                                           std::to_string(kc) + " and " + std::to_string(kr));
    delta[kc][ir][ic] = v;
}

void CochainComplex::reshape() {
    const int D = degrees();
    delta.resize(std::max(0, D - 1));
    for (int k = 0; k + 1 < D; ++k) {
        auto& M = delta[k];
        M.resize(cells[k + 1].size());
        for (auto& row : M) row.resize(cells[k].size(), 0);
    }
}

void CochainComplex::add_cell(const Cell& c) {
    if (c.degree < 0) throw InputError("negative degree for cell " + c.id);
    for (auto& layer : cells)
        for (auto& o : layer)
            if (o.id == c.id) throw InputError("duplicate cell id '" + c.id + "'");
    if (static_cast<int>(cells.size()) <= c.degree) cells.resize(c.degree + 1);
    cells[c.degree].push_back(c);
    reshape();
}

std::vector<std::string> CochainComplex::bd_pairs() const {
    std::vector<std::string> r;
    for (auto& layer : cells)
        for (auto& c : layer)
            if (c.kind == CellKind::Bd0) r.push_back(c.id);
    return r;
}

// ---- validation, rank, betti ----------------------------------------------

namespace {

void check_square_zero(const CochainComplex& c, std::vector<std::string>& out) {
    for (int k = 0; k + 2 < c.degrees(); ++k) {
        const auto& A = c.delta[k];
        const auto& B = c.delta[k + 1];
        for (std::size_t i = 0; i < B.size(); ++i)
            for (std::size_t j = 0; j < c.cells[k].size(); ++j) {
                long long s = 0;
                for (std::size_t m = 0; m < A.size(); ++m) s = cadd(s, cmul(B[i][m], A[m][j]));
                if (s != 0) {
                    std::ostringstream o;
                    o << "delta^2 != 0 at (" << c.cells[k + 2][i].id << ", " << c.cells[k][j].id << "): " << s;
                    out.push_back(o.str());
                }
            }
    }
}

}  // namespace

ValidationReport validate(const CochainComplex& c) {
    ValidationReport R;
    auto& V = R.violations;
    std::set<std::string> ids;
    for (int k = 0; k < c.degrees(); ++k)
        for (auto& cell : c.cells[k]) {
            if (!ids.insert(cell.id).second) V.push_back("duplicate id " + cell.id);
            if (cell.degree != k) V.push_back("cell " + cell.id + " stored in degree " + std::to_string(k));
        }
    if (c.delta.size() != static_cast<std::size_t>(std::max(0, c.degrees() - 1))) V.push_back("wrong number of differentials");
    for (std::size_t k = 0; k < c.delta.size(); ++k) {
        if (c.delta[k].size() != c.dim(k + 1)) V.push_back("delta^" + std::to_string(k) + " has wrong row count");
        for (auto& row : c.delta[k])
            if (row.size() != c.dim(k)) V.push_back("delta^" + std::to_string(k) + " has wrong column count");
    }
    if (!V.empty()) {
        R.ok = false;
        return R;
    }
    check_square_zero(c, V);
    for (auto& layer : c.cells)
        for (auto& cell : layer) {
            if (cell.kind == CellKind::NonDeg) continue;
            if (cell.partner.empty() || !ids.count(cell.partner)) {
                V.push_back("birth-death cell " + cell.id + " has no partner");
                continue;
            }
            const Cell& p = c.cell(cell.partner);
            bool lower = cell.kind == CellKind::Bd0;
            if (p.partner != cell.id || p.kind != (lower ? CellKind::Bd1 : CellKind::Bd0) ||
                p.degree != cell.degree + (lower ? 1 : -1)) {
                V.push_back("birth-death pair " + cell.id + "/" + p.id + " is inconsistent");
                continue;
            }
            if (lower) {
                long long e = c.entry(p.id, cell.id);
                if (e != 1)
                    V.push_back("birth-death pair entry (" + p.id + ", " + cell.id + ") is " + std::to_string(e) + ", not 1");
            }
        }
    R.ok = V.empty();
    return R;
}

int rank(const IntMatrix& m0) {
    IntMatrix m = m0;
    const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            const long long a = m[r][c], b = m[i][c];
            long long g = 0;
            for (std::size_t j = c; j < cols; ++j) {
                m[i][j] = csub(cmul(a, m[i][j]), cmul(b, m[r][j]));
                g = std::gcd(g, m[i][j] < 0 ? -m[i][j] : m[i][j]);
            }
            if (g > 1)
                for (std::size_t j = c; j < cols; ++j) m[i][j] /= g;
        }
        ++r;
    }
    return static_cast<int>(r);
}

std::vector<int> betti(const CochainComplex& c) {
    std::vector<int> rk(c.delta.size());
    for (std::size_t k = 0; k < c.delta.size(); ++k) rk[k] = rank(c.delta[k]);
    std::vector<int> b(c.degrees());
    for (int k = 0; k < c.degrees(); ++k) {
        int v = static_cast<int>(c.dim(k));
        if (k < static_cast<int>(rk.size())) v -= rk[k];
        if (k >= 1) v -= rk[k - 1];
        b[k] = v;
    }
    return b;
}

// ---- elimination -------------------------------------------------------------

CochainComplex eliminate_pair(const CochainComplex& c, const std::string& y0, bool enforce_order) {
    const Cell& a = c.cell(y0);
    if (a.kind != CellKind::Bd0) throw InputError(y0 + " is not a Bd0 cell");
    const Cell& b = c.cell(a.partner);
    const int k = a.degree;
    const long long unit = c.entry(b.id, a.id);
    if (unit != 1) throw PairEntryNotUnit("entry (" + b.id + ", " + a.id + ") is " + std::to_string(unit));
    if (enforce_order)
        for (auto& o : c.cells[k])
            if (o.kind == CellKind::Bd0 && o.id != a.id && o.f_value < a.f_value)
                throw InputError("pair " + o.id + " has lower f and must be eliminated before " + a.id);
    const int ia = c.locate(a.id).second, ib = c.locate(b.id).second;
    CochainComplex out;
    out.cells = c.cells;
    out.delta = c.delta;  // degrees away from k, k+-1 carry over untouched
    out.cells[k].erase(out.cells[k].begin() + ia);
    out.cells[k + 1].erase(out.cells[k + 1].begin() + ib);
    out.reshape();
    // delta^k: i'(x1, x0) = i(x1, x0) - i(x1, y) i(y, x0)
    const auto& D = c.delta[k];
    for (std::size_t r = 0, rr = 0; r < D.size(); ++r) {
        if (static_cast<int>(r) == ib) continue;
        for (std::size_t q = 0, qq = 0; q < D[r].size(); ++q) {
            if (static_cast<int>(q) == ia) continue;
            out.delta[k][rr][qq] = csub(D[r][q], cmul(D[r][ia], D[ib][q]));
            ++qq;
        }
        ++rr;
    }
    // delta^{k-1}: drop row y0;  delta^{k+1}: drop column y1
    if (k >= 1) {
        const auto& P = c.delta[k - 1];
        for (std::size_t r = 0, rr = 0; r < P.size(); ++r) {
            if (static_cast<int>(r) == ia) continue;
            out.delta[k - 1][rr++] = P[r];
        }
    }
    if (k + 1 < static_cast<int>(c.delta.size())) {
        const auto& N = c.delta[k + 1];
        for (std::size_t r = 0; r < N.size(); ++r)
            for (std::size_t q = 0, qq = 0; q < N[r].size(); ++q) {
                if (static_cast<int>(q) == ib) continue;
                out.delta[k + 1][r][qq++] = N[r][q];
            }
    }
    std::vector<std::string> bad;
    check_square_zero(out, bad);
    if (!bad.empty()) throw NotAComplex("after eliminating " + a.id + ": " + bad.front());
    return out;
}

CochainComplex eliminate_all(const CochainComplex& c, std::vector<EliminationStep>* trace) {
    auto rep = validate(c);
    if (!rep.ok) throw NotAComplex("input: " + rep.violations.front());
    CochainComplex cur = c;
    for (;;) {
        const Cell* best = nullptr;
        for (auto& layer : cur.cells)
            for (auto& cell : layer)
                if (cell.kind == CellKind::Bd0 &&
                    (!best || cell.f_value < best->f_value || (cell.f_value == best->f_value && cell.id < best->id)))
                    best = &cell;
        if (!best) break;
        EliminationStep s{best->id, best->degree, best->f_value, 0};
        CochainComplex next = eliminate_pair(cur, best->id);
        // count entries of delta^k that changed
        const int k = s.degree;
        for (std::size_t r = 0; r < next.delta[k].size(); ++r)
            for (std::size_t q = 0; q < next.delta[k][r].size(); ++q)
                if (next.delta[k][r][q] != cur.entry(next.cells[k + 1][r].id, next.cells[k][q].id)) ++s.changed_entries;
        if (trace) trace->push_back(s);
        cur = std::move(next);
    }
    return cur;
}

// ---- flow graphs -----------------------------------------------------------

const FlowVertex& FlowGraph::vertex(const std::string& id) const {
    for (auto& v : vertices)
        if (v.id == id) return v;
    throw InputError("unknown flow vertex '" + id + "'");
}

void FlowGraph::check_acyclic() const {
    for (auto& e : edges) {
        const auto& a = vertex(e.from);
        const auto& b = vertex(e.to);
        if (!(a.f_value > b.f_value))
            throw NotMorseSmale("trajectory " + e.from + " -> " + e.to + " does not decrease f");
        if (e.sign != 1 && e.sign != -1) throw InputError("trajectory sign must be +-1");
    }
}

FlowGraph flow_graph_from_complex(const CochainComplex& c) {
    FlowGraph g;
    for (auto& layer : c.cells)
        for (auto& cell : layer) {
            if (cell.kind == CellKind::NonDeg) g.vertices.push_back({cell.id, cell.degree, false, cell.f_value});
            if (cell.kind == CellKind::Bd0) g.vertices.push_back({cell.id, cell.degree, true, cell.f_value});
        }
    auto push = [&](const std::string& from, const std::string& to, long long v) {
        for (long long i = 0; i < (v < 0 ? -v : v); ++i) g.edges.push_back({from, to, v > 0 ? 1 : -1});
    };
    for (std::size_t k = 0; k < c.delta.size(); ++k)
        for (std::size_t r = 0; r < c.delta[k].size(); ++r)
            for (std::size_t q = 0; q < c.delta[k][r].size(); ++q) {
                long long v = c.delta[k][r][q];
                if (v == 0) continue;
                const Cell& R = c.cells[k + 1][r];
                const Cell& C = c.cells[k][q];
                if (R.kind == CellKind::Bd1 && R.partner == C.id) continue;  // the pair itself
                const bool col_ok = C.kind == CellKind::NonDeg || C.kind == CellKind::Bd0;
                if (!col_ok) continue;
                if (R.kind == CellKind::NonDeg) push(R.id, C.id, v);
                else if (R.kind == CellKind::Bd1) push(R.partner, C.id, v);
            }
    return g;
}

long long generalized_incidence_pathsum(const FlowGraph& g, const std::string& from, const std::string& to) {
    const FlowVertex& a = g.vertex(from);
    const FlowVertex& b = g.vertex(to);
    if (b.bd) throw DegreeMismatch("target of a generalized trajectory must be nondegenerate");
    const int k = b.degree;
    if (a.bd ? a.degree != k : a.degree != k + 1)
        throw DegreeMismatch("no generalized trajectories from " + from + " (degree " + std::to_string(a.degree) +
                             ") to " + to + " (degree " + std::to_string(k) + ")");
    // plain enumeration of every path; interior vertices are birth-death points of index k
    std::function<long long(const std::string&)> walk = [&](const std::string& v) -> long long {
        long long s = 0;
        for (auto& e : g.edges) {
            if (e.from != v) continue;
            if (e.to == to) {
                s = cadd(s, e.sign);
                continue;
            }
            const FlowVertex& w = g.vertex(e.to);
            if (w.bd && w.degree == k) s = cadd(s, cmul(-e.sign, walk(w.id)));
        }
        return s;
    };
    long long r = walk(from);
    return a.bd ? -r : r;
}

ITable incidence_recursive(const FlowGraph& g) {
    g.check_acyclic();
    ITable I;
    int top = 0;
    for (auto& v : g.vertices) top = std::max(top, v.degree);
    for (int k = 0; k <= top; ++k) {
        std::vector<const FlowVertex*> ys, xs, uppers;
        for (auto& v : g.vertices) {
            if (v.bd && v.degree == k) ys.push_back(&v);
            if (!v.bd && v.degree == k) xs.push_back(&v);
            if (!v.bd && v.degree == k + 1) uppers.push_back(&v);
        }
        std::sort(ys.begin(), ys.end(), [](auto* a, auto* b) { return a->f_value < b->f_value; });
        for (auto* x : xs) {
            // I(y, x) = -( i(y, x) + sum_{y -> y'} eps I(y', x) ), lower y' first
            std::map<std::string, long long> Iy;
            for (auto* y : ys) {
                long long s = 0;
                for (auto& e : g.edges) {
                    if (e.from != y->id) continue;
                    if (e.to == x->id) s = cadd(s, e.sign);
                    else if (Iy.count(e.to)) s = cadd(s, cmul(e.sign, Iy[e.to]));
                }
                Iy[y->id] = -s;
                I[{y->id, x->id}] = -s;
            }
            // I(x1, x) = i(x1, x) + sum_l i(x1, y_l) I(y_l, x)
            for (auto* u : uppers) {
                long long s = 0;
                for (auto& e : g.edges) {
                    if (e.from != u->id) continue;
                    if (e.to == x->id) s = cadd(s, e.sign);
                    else if (Iy.count(e.to)) s = cadd(s, cmul(e.sign, Iy[e.to]));
                }
                I[{u->id, x->id}] = s;
            }
        }
    }
    return I;
}

// ---- hat basis ---------------------------------------------------------------

const HatVector& HatBasis::get(const std::string& label) const {
    for (auto& v : vectors)
        if (v.label == label) return v;
    throw InputError("no hat vector '" + label + "'");
}

HatBasis hat_basis(const CochainComplex& c, const ITable& I) {
    HatBasis H;
    auto lookup = [&](const std::string& a, const std::string& b) -> long long {
        auto it = I.find({a, b});
        return it == I.end() ? 0 : it->second;
    };
    for (int k = 0; k < c.degrees(); ++k)
        for (auto& cell : c.cells[k]) {
            if (cell.kind == CellKind::NonDeg) {
                HatVector v{cell.id, k, {{cell.id, 1}}};
                for (auto& y : c.cells[k])
                    if (y.kind == CellKind::Bd0) {
                        long long w = lookup(y.id, cell.id);
                        if (w != 0) v.coeffs[y.id] = w;
                    }
                H.vectors.push_back(std::move(v));
            } else if (cell.kind == CellKind::Bd0) {
                H.vectors.push_back({cell.id + ":0", k, {{cell.id, 1}}});
                HatVector d{cell.id + ":1", k + 1, {}};
                auto [kk, ii] = c.locate(cell.id);
                if (kk < static_cast<int>(c.delta.size()))
                    for (std::size_t r = 0; r < c.delta[kk].size(); ++r)
                        if (c.delta[kk][r][ii] != 0) d.coeffs[c.cells[kk + 1][r].id] = c.delta[kk][r][ii];
                H.vectors.push_back(std::move(d));
            }
        }
    // delta(hat e_x) in the hat basis of degree k+1
    for (int k = 0; k + 1 < c.degrees(); ++k) {
        std::vector<const HatVector*> basis;
        for (auto& v : H.vectors)
            if (v.degree == k + 1) basis.push_back(&v);
        const std::size_t n = c.dim(k + 1);
        if (basis.size() != n) throw DegenerateInput("hat basis has the wrong size in degree " + std::to_string(k + 1));
        std::vector<std::vector<Q>> T(n, std::vector<Q>(n));
        for (std::size_t j = 0; j < n; ++j)
            for (auto& [id, w] : basis[j]->coeffs) T[c.locate(id).second][j] = Q(w);
        for (auto& v : H.vectors) {
            if (v.degree != k || c.cell(v.coeffs.begin()->first).kind == CellKind::Bd1) continue;
            if (v.label.find(':') != std::string::npos) continue;  // only hat e_x
            std::vector<Q> rhs(n);
            for (auto& [id, w] : v.coeffs) {
                int q = c.locate(id).second;
                for (std::size_t r = 0; r < n; ++r) rhs[r] = rhs[r] + Q(cmul(c.delta[k][r][q], w));
            }
            auto sol = solve_exact(T, rhs);
            for (std::size_t j = 0; j < n; ++j) {
                if (sol[j].d != 1) throw DegenerateInput("non-integral coefficient in the hat basis expansion");
                const long long val = sol[j].n;
                const std::string& lab = basis[j]->label;
                if (lab.size() > 2 && lab.compare(lab.size() - 2, 2, ":0") == 0)
                    H.y0_defect = std::max(H.y0_defect, val < 0 ? -val : val);
                else if (lab.size() > 2 && lab.compare(lab.size() - 2, 2, ":1") == 0)
                    H.y1_part = std::max(H.y1_part, val < 0 ? -val : val);
                else
                    H.nd_block[{lab, v.label}] = val;
            }
        }
    }
    CochainComplex nd = eliminate_all(c);
    bool same = true;
    for (int k = 0; k + 1 < nd.degrees(); ++k)
        for (auto& r : nd.cells[k + 1])
            for (auto& q : nd.cells[k]) {
                auto it = H.nd_block.find({r.id, q.id});
                long long v = it == H.nd_block.end() ? 0 : it->second;
                if (v != nd.entry(r.id, q.id)) same = false;
            }
    H.matches_elimination = same && H.y0_defect == 0;
    return H;
}

// ---- circle complexes --------------------------------------------------------

CircleComplex circle_complex_from_function(const CircleFunction& f) {
    const auto& cp = f.critical_points();
    const int n = static_cast<int>(cp.size());
    if (n < 2) throw NotMorseSmale("need at least two critical points on the circle");
    CircleComplex out;
    auto cell_id = [&](const CriticalPoint& c, int part) {
        return c.is_bd() ? c.label + (part == 0 ? ".0" : ".1") : c.label;
    };
    CochainComplex& C = out.complex;
    for (auto& c : cp) {
        if (c.kind == CriticalPoint::Kind::Min) {
            C.add_cell({c.label, 0, CellKind::NonDeg, c.f_value, ""});
            out.points[c.label] = c.theta;
        } else if (c.is_bd()) {
            C.add_cell({c.label + ".0", 0, CellKind::Bd0, c.f_value, c.label + ".1"});
            out.points[c.label + ".0"] = c.theta;
        }
    }
    if (C.degrees() < 1) throw NotMorseSmale("no 0-cells");
    for (auto& c : cp) {
        if (c.kind == CriticalPoint::Kind::Max) C.add_cell({c.label, 1, CellKind::NonDeg, c.f_value, ""});
        else if (c.is_bd()) C.add_cell({c.label + ".1", 1, CellKind::Bd1, c.f_value, c.label + ".0"});
    }
    // each gap between neighbours belongs to the descending cell of its upper end
    std::map<std::string, std::pair<std::string, std::string>> ends;
    const double two_pi = 2.0 * std::numbers::pi;
    for (int i = 0; i < n; ++i) {
        const auto& L = cp[i];
        const auto& R = cp[(i + 1) % n];
        const bool left_up = L.f_value > R.f_value;
        const auto& up = left_up ? L : R;
        const auto& lo = left_up ? R : L;
        if (up.kind == CriticalPoint::Kind::Min || lo.kind == CriticalPoint::Kind::Max)
            throw NotMorseSmale("critical points " + L.label + ", " + R.label + " are not joined by a descending arc");
        if (up.is_bd()) {
            // the one-sided arc of a birth-death point lies on its lower side
            if ((up.a > 0) == left_up)
                throw NotMorseSmale("gap on the upper side of " + up.label + " descends into it");
        }
        const std::string owner = cell_id(up, 1);
        const std::string end_id = cell_id(lo, 0);
        auto& en = ends[owner];
        if (left_up) en.second = end_id;  // arc runs right of the upper point
        else en.first = end_id;
    }
    // an arc of a maximum covers both neighbouring gaps
    for (auto& c : cp) {
        const std::string id = cell_id(c, 1);
        if (!ends.count(id)) {
            if (c.kind == CriticalPoint::Kind::Max || c.is_bd())
                throw NotMorseSmale("descending cell of " + c.label + " is empty");
            continue;
        }
        auto& en = ends[id];
        if (c.is_bd()) {
            // one end is the point itself
            if (en.first.empty()) en.first = c.label + ".0";
            if (en.second.empty()) en.second = c.label + ".0";
        }
        if (en.first.empty() || en.second.empty())
            throw NotMorseSmale("descending cell of " + c.label + " has a missing end");
        // recompute the span from the end angles so arcs are [left, right] with right > left
        double left = out.points.at(en.first), right = out.points.at(en.second);
        if (right <= left) right += two_pi;
        out.arcs[id] = {left, right};
    }
    for (auto& [id, en] : ends) {
        // boundary of [left, right] is right - left
        C.set_entry(id, en.second, C.entry(id, en.second) + 1);
        C.set_entry(id, en.first, C.entry(id, en.first) - 1);
        out.orientation[id] = 1;
        const Cell& cell = C.cell(id);
        if (cell.kind == CellKind::Bd1 && C.entry(id, cell.partner) == -1) {
            out.orientation[id] = -1;
            for (auto& q : C.cells[0]) C.set_entry(id, q.id, -C.entry(id, q.id));
        }
    }
    // trajectories: one per arc end, the birth-death pair end excluded
    FlowGraph& g = out.graph;
    for (auto& q : C.cells[0]) g.vertices.push_back({q.id, 0, q.kind == CellKind::Bd0, q.f_value});
    for (auto& q : C.cells[1])
        if (q.kind == CellKind::NonDeg) g.vertices.push_back({q.id, 1, false, q.f_value});
    for (auto& [id, en] : ends) {
        const Cell& cell = C.cell(id);
        const std::string src = cell.kind == CellKind::Bd1 ? cell.partner : id;
        const int o = out.orientation[id];
        if (en.second != src) g.edges.push_back({src, en.second, o});
        if (en.first != src) g.edges.push_back({src, en.first, -o});
    }
    g.check_acyclic();
    auto rep = validate(C);
    if (!rep.ok) throw NotAComplex("circle complex: " + rep.violations.front());
    return out;
}

// ---- fuzzing -----------------------------------------------------------------

namespace {

// insert an acyclic pair (p0 in degree k, p1 in degree k+1) at height fy so that
// eliminating it gives back the input complex
void insert_pair(CochainComplex& c, int k, double fy, CellKind kind0, const std::string& id0,
                 const std::string& id1, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> tri(-1, 1);
    std::vector<long long> alpha(c.dim(k + 1), 0), beta(c.dim(k), 0);
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if (c.cells[k + 1][i].f_value > fy) alpha[i] = tri(rng);
    for (std::size_t i = 0; i < beta.size(); ++i)
        if (c.cells[k][i].f_value < fy) beta[i] = tri(rng);
    // rows of delta^{k-1} for p0 and columns of delta^{k+1} for p1
    std::vector<long long> row0, col1;
    if (k >= 1) {
        row0.assign(c.dim(k - 1), 0);
        for (std::size_t z = 0; z < row0.size(); ++z)
            for (std::size_t x = 0; x < beta.size(); ++x)
                row0[z] = csub(row0[z], cmul(beta[x], c.delta[k - 1][x][z]));
    }
    if (k + 2 < c.degrees()) {
        col1.assign(c.dim(k + 2), 0);
        for (std::size_t w = 0; w < col1.size(); ++w)
            for (std::size_t x = 0; x < alpha.size(); ++x)
                col1[w] = csub(col1[w], cmul(c.delta[k + 1][w][x], alpha[x]));
    }
    for (std::size_t r = 0; r < alpha.size(); ++r)
        for (std::size_t q = 0; q < beta.size(); ++q)
            c.delta[k][r][q] = cadd(c.delta[k][r][q], cmul(alpha[r], beta[q]));
    const bool bd = kind0 == CellKind::Bd0;
    const double eps = bd ? 0.0 : 1e-3;
    c.add_cell({id0, k, kind0, fy - eps, bd ? id1 : ""});
    c.add_cell({id1, k + 1, bd ? CellKind::Bd1 : CellKind::NonDeg, fy + eps, bd ? id0 : ""});
    for (std::size_t r = 0; r < alpha.size(); ++r) c.set_entry(c.cells[k + 1][r].id, id0, alpha[r]);
    for (std::size_t q = 0; q < beta.size(); ++q) c.set_entry(id1, c.cells[k][q].id, beta[q]);
    c.set_entry(id1, id0, 1);
    for (std::size_t z = 0; z < row0.size(); ++z) c.set_entry(id0, c.cells[k - 1][z].id, row0[z]);
    for (std::size_t w = 0; w < col1.size(); ++w) c.set_entry(c.cells[k + 2][w].id, id1, col1[w]);
}

}  // namespace

CochainComplex fuzz_complex(std::mt19937_64& rng, const FuzzOptions& opt, std::vector<int>* betti_out) {
    if (opt.degrees < 2) throw InputError("fuzzing needs at least two degrees");
    for (int attempt = 0; attempt < 10000; ++attempt) {
        CochainComplex c;
        c.cells.resize(opt.degrees);
        std::vector<int> b(opt.degrees);
        std::uniform_int_distribution<int> base(0, opt.max_base);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        std::uniform_int_distribution<int> deg(0, opt.degrees - 2);
        int id = 0;
        for (int k = 0; k < opt.degrees; ++k) {
            b[k] = base(rng);
            for (int i = 0; i < b[k]; ++i) c.add_cell({"x" + std::to_string(id++), k, CellKind::NonDeg, k + U(rng), ""});
        }
        c.reshape();
        for (int p = 0; p < opt.nondeg_pairs; ++p) {
            int k = deg(rng);
            insert_pair(c, k, k + 0.5 + U(rng), CellKind::NonDeg, "x" + std::to_string(id), "x" + std::to_string(id + 1), rng);
            id += 2;
        }
        // birth-death pairs from the top down, so elimination (bottom up) undoes them
        std::vector<std::pair<double, int>> heights;  // (f, degree)
        for (int p = 0; p < opt.bd_pairs; ++p) {
            int k = deg(rng);
            heights.push_back({k + 0.25 + 0.5 * U(rng), k});
        }
        std::sort(heights.rbegin(), heights.rend());
        for (int p = 0; p < opt.bd_pairs; ++p) {
            const std::string y = "y" + std::to_string(p);
            insert_pair(c, heights[p].second, heights[p].first, CellKind::Bd0, y + ".0", y + ".1", rng);
        }
        long long mx = 0;
        for (auto& M : c.delta)
            for (auto& row : M)
                for (long long v : row) mx = std::max(mx, v < 0 ? -v : v);
        if (mx > opt.max_entry) continue;
        if (!validate(c).ok) continue;
        if (betti_out) *betti_out = b;
        return c;
    }
    throw InputError("fuzz generator could not meet the entry bound");
}

}  // namespace wittenlab
