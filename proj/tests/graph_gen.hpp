#pragma once

#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "corrkit/graph.hpp"
#include "corrkit/group.hpp"

namespace corrkit::testing {

/// A complete skew-product input: an equivariant graph (E, act) and an
/// independently labeled graph (F, lab) over the same group.
struct GraphProductInstance {
    DirectedGraph e;
    GraphAction act;
    DirectedGraph f;
    EdgeLabeling lab;
};

/// Random instance over a cyclic group of order m <= 3: E carries one free
/// vertex orbit plus at most one fixed vertex (<= 4 vertices) and an edge set
/// closed under the diagonal action (<= 2 orbits, so <= 6 edges); F is a
/// small random graph with uniformly random labels.
inline GraphProductInstance random_graph_product_instance(std::mt19937& rng, const FiniteGroup& cyclic) {
    GraphProductInstance out;
    const int m = cyclic.order();
    std::uniform_int_distribution<int> coin(0, 1);

    const int fixed = coin(rng);
    const int nv = fixed + m;
    std::vector<std::string> vnames;
    vnames.reserve(static_cast<size_t>(nv));
    for (int v = 0; v < nv; ++v) vnames.push_back("u" + std::to_string(v));

    // Fixed vertices stay put; the free orbit rotates.
    std::vector<std::vector<int>> vperm(static_cast<size_t>(m), std::vector<int>(static_cast<size_t>(nv)));
    for (int s = 0; s < m; ++s)
        for (int v = 0; v < nv; ++v)
            vperm[static_cast<size_t>(s)][static_cast<size_t>(v)] = v < fixed ? v : fixed + (v - fixed + s) % m;

    // Close one or two random seed pairs under the action.  Orbits of pairs
    // are disjoint or equal, so the set stays within the edge budget.
    std::uniform_int_distribution<int> pick(0, nv - 1);
    std::set<std::pair<int, int>> pairs;
    const int seeds = 1 + coin(rng);
    for (int t = 0; t < seeds; ++t) {
        const int u = pick(rng);
        const int v = pick(rng);
        for (int s = 0; s < m; ++s)
            pairs.insert({vperm[static_cast<size_t>(s)][static_cast<size_t>(u)],
                          vperm[static_cast<size_t>(s)][static_cast<size_t>(v)]});
    }
    std::vector<GraphEdge> eedges;
    for (const auto& [u, v] : pairs)
        eedges.push_back({"e" + std::to_string(eedges.size()), u, v});
    out.e = DirectedGraph(vnames, eedges);

    auto pair_index = [&](int u, int v) {
        int k = 0;
        for (const auto& p : pairs) {
            if (p.first == u && p.second == v) return k;
            ++k;
        }
        return -1;
    };
    std::vector<std::vector<int>> eperm(static_cast<size_t>(m), std::vector<int>(pairs.size()));
    for (int s = 0; s < m; ++s) {
        int k = 0;
        for (const auto& [u, v] : pairs) {
            eperm[static_cast<size_t>(s)][static_cast<size_t>(k)] =
                pair_index(vperm[static_cast<size_t>(s)][static_cast<size_t>(u)],
                           vperm[static_cast<size_t>(s)][static_cast<size_t>(v)]);
            ++k;
        }
    }
    out.act = {cyclic, std::move(vperm), std::move(eperm)};

    std::uniform_int_distribution<int> fnv(1, 3);
    std::uniform_int_distribution<int> fne(1, 4);
    std::uniform_int_distribution<int> flab(0, m - 1);
    const int nw = fnv(rng);
    std::vector<std::string> wnames;
    for (int w = 0; w < nw; ++w) wnames.push_back("w" + std::to_string(w));
    std::uniform_int_distribution<int> fpick(0, nw - 1);
    const int nfe = fne(rng);
    std::vector<GraphEdge> fedges;
    out.lab.group = cyclic;
    for (int q = 0; q < nfe; ++q) {
        fedges.push_back({"f" + std::to_string(q), fpick(rng), fpick(rng)});
        out.lab.labels.push_back(flab(rng));
    }
    out.f = DirectedGraph(wnames, fedges);
    return out;
}

}  // namespace corrkit::testing
