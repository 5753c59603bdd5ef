#pragma once

#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pbbench {

// Undirected simple graph; each edge stored once with u < v.
struct Graph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;
};

enum class IsingKind { ring, torus, triangular };

// Exact integer square root, or -1 when n is not a perfect square.
inline int exact_sqrt(int n) {
    int lo = 0, hi = 46341;
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (mid * mid < n) lo = mid + 1; else hi = mid;
    }
    return lo * lo == n ? lo : -1;
}

// Spin lattices with periodic boundary conditions: a cycle of length n, the
// N x N torus (degree 4), and the N x N triangular grid (degree 6).
inline Graph build_ising_graph(IsingKind kind, int n) {
    Graph g;
    g.vertex_count = n;
    if (kind == IsingKind::ring) {
        if (n < 3) throw std::invalid_argument("ring lattice needs n >= 3");
        for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
        g.edges.emplace_back(0, n - 1);
        return g;
    }
    const int side = exact_sqrt(n);
    if (side < 2) throw std::invalid_argument("2D lattice needs n = N*N with N >= 2");
    std::set<std::pair<int, int>> edges;
    const auto vertex = [side](int i, int j) { return ((i + side) % side) * side + (j + side) % side; };
    const auto add = [&edges](int u, int v) {
        if (u == v) return;
        edges.emplace(std::min(u, v), std::max(u, v));
    };
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) {
            const int v = vertex(i, j);
            add(v, vertex(i + 1, j));
            add(v, vertex(i, j + 1));
            if (kind == IsingKind::triangular) add(v, vertex(i + 1, j + 1));
        }
    g.edges.assign(edges.begin(), edges.end());
    return g;
}

// The fixed scalable independent-set graph: two paths over [1..n/2] and
// [n/2+1..n] plus the cross edges j = i + n/2 +- 1.
inline Graph build_mivs_graph(int n) {
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("independent-set graph needs even n >= 4");
    Graph g;
    g.vertex_count = n;
    const int half = n / 2;
    for (int i = 0; i + 1 < n; ++i)
        if (i != half - 1) g.edges.emplace_back(i, i + 1);
    for (int i = 0; i + half + 1 < n; ++i) g.edges.emplace_back(i, i + half + 1);
    for (int i = 1; i < half; ++i) g.edges.emplace_back(i, i + half - 1);
    return g;
}

}  // namespace pbbench
