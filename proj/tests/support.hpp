#ifndef TANGLES_TESTS_SUPPORT_HPP_INCLUDED
#define TANGLES_TESTS_SUPPORT_HPP_INCLUDED

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "tangles/generate.hpp"
#include "tangles/graph.hpp"
#include "tangles/separation.hpp"
#include "tangles/tangle.hpp"

namespace tangles::testing
{

/// G(n, p) on labels 0..n-1.
inline Graph random_graph(std::mt19937& rng, int n, double p)
{
    std::bernoulli_distribution coin(p);
    Graph g = Graph::empty(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng))
                g.add_edge(i, j);
    return g;
}

/// Random connected graph: random spanning tree plus G(n, p) edges.
inline Graph random_connected_graph(std::mt19937& rng, int n, double p)
{
    Graph g = random_graph(rng, n, p);
    for (int v = 1; v < n; ++v)
    {
        std::uniform_int_distribution<int> pick(0, v - 1);
        int u = pick(rng);
        if (!g.has_edge(u, v))
            g.add_edge(u, v);
    }
    return g;
}

struct SepLess
{
    bool operator()(const Separation& a, const Separation& b) const { return canonical_less(a, b); }
};

/// Oracle: all unoriented separations of order < k by scanning all 3^n
/// assignments of vertices to (A\B, B\A, A∩B).
inline std::vector<Separation> naive_separations(const Graph& g, int k)
{
    std::vector<int> vs = g.vertices().to_vector();
    const int n = static_cast<int>(vs.size());
    std::set<Separation, SepLess> out;
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i)
        total *= 3;
    for (std::uint64_t code = 0; code < total; ++code)
    {
        VertexSet a;
        VertexSet b;
        std::uint64_t c = code;
        for (int i = 0; i < n; ++i, c /= 3)
        {
            int d = static_cast<int>(c % 3);
            if (d != 1)
                a.insert(vs[static_cast<std::size_t>(i)]);
            if (d != 0)
                b.insert(vs[static_cast<std::size_t>(i)]);
        }
        Separation s{a, b};
        if (s.order() < k && s.is_separation_of(g))
            out.insert(s.canonical());
    }
    return {out.begin(), out.end()};
}

/// Oracle: all orientations of S_k(g) that avoid forbidden triples, by
/// scanning all 2^|S_k| orientations with the full triple check.
inline std::vector<Tangle> naive_tangles(const Graph& g, int k)
{
    SystemPtr sys = make_system(g, k);
    std::vector<Tangle> out;
    const std::size_t m = sys->size();
    if (m > 22)
        throw TangleError("naive tangle scan too large");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask)
    {
        std::vector<std::uint8_t> bits(m);
        for (std::size_t i = 0; i < m; ++i)
            bits[i] = ((mask >> i) & 1U) ? 1 : 0;
        Tangle t(sys, bits);
        std::vector<Separation> ms = t.members();
        bool ok = true;
        for (std::size_t a = 0; a < m && ok; ++a)
            for (std::size_t b = a; b < m && ok; ++b)
                for (std::size_t c = b; c < m && ok; ++c)
                    if (is_forbidden_triple(g, ms[a], ms[b], ms[c]))
                        ok = false;
        if (ok)
            out.push_back(t);
    }
    return out;
}

/// All graphs with 1..max_n vertices up to isomorphism.
inline std::vector<Graph> graphs_up_to(int max_n, bool connected_only)
{
    std::vector<Graph> out;
    for (int n = 1; n <= max_n; ++n)
        for (auto& g : all_graphs(n, connected_only))
            out.push_back(g);
    return out;
}

} // namespace tangles::testing

#endif // TANGLES_TESTS_SUPPORT_HPP_INCLUDED
