#pragma once
// Oracles shared by the morse_complex tests and the acceptance run.

#include <Eigen/Dense>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "wittenlab/morse_complex.hpp"

namespace oracle {

using namespace wittenlab;

// floating rank oracle, independent of the exact elimination
inline int rank_oracle(const IntMatrix& m) {
    if (m.empty() || m[0].empty()) return 0;
    Eigen::MatrixXd A(m.size(), m[0].size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[0].size(); ++j) A(i, j) = static_cast<double>(m[i][j]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(1e-9);
    return static_cast<int>(lu.rank());
}

inline std::vector<int> betti_oracle(const CochainComplex& c) {
    std::vector<int> b;
    for (int k = 0; k < c.degrees(); ++k) {
        int out = k < static_cast<int>(c.delta.size()) ? rank_oracle(c.delta[k]) : 0;
        int in = k >= 1 ? rank_oracle(c.delta[k - 1]) : 0;
        b.push_back(static_cast<int>(c.dim(k)) - out - in);
    }
    return b;
}

// explicit enumeration of every generalized trajectory as a vertex list
inline long long pathsum_oracle(const FlowGraph& g, const std::string& from, const std::string& to) {
    const int k = g.vertex(to).degree;
    long long total = 0;
    std::function<void(const std::string&, long long, int)> go = [&](const std::string& v, long long sign, int nbd) {
        for (auto& e : g.edges) {
            if (e.from != v) continue;
            if (e.to == to) {
                total += sign * e.sign * ((nbd % 2) ? -1 : 1);
                continue;
            }
            const auto& w = g.vertex(e.to);
            if (w.bd && w.degree == k) go(w.id, sign * e.sign, nbd + 1);
        }
    };
    go(from, 1, g.vertex(from).bd ? 1 : 0);
    return total;
}

inline FlowGraph random_dag(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nv(2, 8), coin(0, 2), sgn(0, 1), mult(0, 2);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    FlowGraph g;
    const int n = nv(rng);
    for (int i = 0; i < n; ++i) {
        FlowVertex v;
        v.id = "v" + std::to_string(i);
        int kind = coin(rng);  // 0: nondeg index 0, 1: nondeg index 1, 2: bd of index 0
        v.degree = kind == 1 ? 1 : 0;
        v.bd = kind == 2;
        v.f_value = kind == 1 ? 1.0 + U(rng) : kind == 2 ? 0.5 + U(rng) : U(rng);
        g.vertices.push_back(v);
    }
    for (auto& a : g.vertices)
        for (auto& b : g.vertices) {
            if (!(a.f_value > b.f_value)) continue;
            const bool ok = (!a.bd && a.degree == 1 && (b.bd || b.degree == 0)) || (a.bd && (b.bd || b.degree == 0));
            if (!ok || (!b.bd && b.degree == 1)) continue;
            for (int m = mult(rng); m > 0; --m) g.edges.push_back({a.id, b.id, sgn(rng) ? 1 : -1});
        }
    return g;
}

}  // namespace oracle
