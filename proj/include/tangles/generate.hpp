#ifndef TANGLES_GENERATE_HPP_INCLUDED
#define TANGLES_GENERATE_HPP_INCLUDED

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "tangles/graph.hpp"

namespace tangles
{

namespace detail
{

/// Upper-triangle adjacency bits of g under the position -> vertex map p.
inline std::uint64_t code_under(const Graph& g, const std::vector<int>& p)
{
    std::uint64_t code = 0;
    int n = static_cast<int>(p.size());
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i)
            code = (code << 1) | (g.has_edge(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]) ? 1U : 0U);
    return code;
}

/// Stable colour refinement starting from degrees.
inline std::vector<int> refine_colours(const Graph& g, const std::vector<int>& verts)
{
    std::size_t n = verts.size();
    std::vector<int> colour(n);
    std::map<int, std::size_t> pos;
    for (std::size_t i = 0; i < n; ++i)
        pos[verts[i]] = i;
    for (std::size_t i = 0; i < n; ++i)
        colour[i] = g.degree(verts[i]);
    while (true)
    {
        std::vector<std::pair<int, std::vector<int>>> sig(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            sig[i].first = colour[i];
            g.neighbours(verts[i]).for_each([&](int u) { sig[i].second.push_back(colour[pos[u]]); });
            std::sort(sig[i].second.begin(), sig[i].second.end());
        }
        std::vector<std::pair<int, std::vector<int>>> distinct = sig;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        std::vector<int> next(n);
        for (std::size_t i = 0; i < n; ++i)
            next[i] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), sig[i]) - distinct.begin());
        std::size_t before = std::set<int>(colour.begin(), colour.end()).size();
        colour = next;
        if (distinct.size() == before)
            return colour;
    }
}

} // namespace detail

/// Canonical form of a graph on at most 11 vertices: a relabelling onto
/// 0..n-1 that is identical for isomorphic inputs.
inline Graph canonical_form(const Graph& g)
{
    std::vector<int> verts = g.vertices().to_vector();
    const int n = static_cast<int>(verts.size());
    if (n > 11)
        throw TangleError("canonical form supports at most 11 vertices");
    std::vector<int> colour = detail::refine_colours(g, verts);
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return colour[static_cast<std::size_t>(a)] < colour[static_cast<std::size_t>(b)];
    });
    // blocks of equal colour; permute within each block
    std::vector<std::pair<int, int>> blocks;
    for (int i = 0; i < n;)
    {
        int j = i;
        while (j < n && colour[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] ==
                            colour[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])])
            ++j;
        blocks.emplace_back(i, j);
        i = j;
    }
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        p[static_cast<std::size_t>(i)] = verts[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    for (auto [a, b] : blocks)
        std::sort(p.begin() + a, p.begin() + b);
    std::uint64_t best = ~std::uint64_t{0};
    std::vector<int> best_p = p;
    // odometer over per-block permutations
    while (true)
    {
        std::uint64_t c = detail::code_under(g, p);
        if (c < best)
        {
            best = c;
            best_p = p;
        }
        std::size_t bi = 0;
        for (; bi < blocks.size(); ++bi)
        {
            auto [a, b] = blocks[bi];
            if (std::next_permutation(p.begin() + a, p.begin() + b))
                break;
        }
        if (bi == blocks.size())
            break;
    }
    Graph out = Graph::empty(n);
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i)
            if (g.has_edge(best_p[static_cast<std::size_t>(i)], best_p[static_cast<std::size_t>(j)]))
                out.add_edge(i, j);
    return out;
}

/// All graphs on exactly n vertices up to isomorphism, labels 0..n-1.
inline std::vector<Graph> all_graphs(int n, bool connected_only = false)
{
    if (n < 0 || n > 10)
        throw TangleError("graph generation supports 0..10 vertices");
    std::vector<Graph> level{Graph::empty(0)};
    for (int m = 1; m <= n; ++m)
    {
        std::map<std::string, Graph> seen;
        for (const Graph& h : level)
        {
            for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << (m - 1)); ++mask)
            {
                Graph g = h;
                g.add_vertex(m - 1);
                for (int u = 0; u < m - 1; ++u)
                    if ((mask >> u) & 1U)
                        g.add_edge(u, m - 1);
                Graph c = canonical_form(g);
                seen.emplace(to_graph6(c), c);
            }
        }
        level.clear();
        for (auto& [key, g] : seen)
            level.push_back(g);
    }
    if (!connected_only)
        return level;
    std::vector<Graph> out;
    for (auto& g : level)
        if (g.is_connected())
            out.push_back(g);
    return out;
}

/// Complete graph on labels 0..n-1.
inline Graph complete_graph(int n)
{
    Graph g = Graph::empty(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            g.add_edge(i, j);
    return g;
}

inline Graph path_graph(int n)
{
    Graph g = Graph::empty(n);
    for (int i = 0; i + 1 < n; ++i)
        g.add_edge(i, i + 1);
    return g;
}

inline Graph cycle_graph(int n)
{
    Graph g = path_graph(n);
    if (n >= 3)
        g.add_edge(n - 1, 0);
    return g;
}

/// K4 on 0..3 with the edge {0,1} replaced by a path with `extra` inner
/// vertices labelled 4, 5, ...
inline Graph subdivided_k4(int extra)
{
    Graph g = complete_graph(4);
    if (extra == 0)
        return g;
    g.remove_edge(0, 1);
    int prev = 0;
    for (int i = 0; i < extra; ++i)
    {
        g.add_edge(prev, 4 + i);
        prev = 4 + i;
    }
    g.add_edge(prev, 1);
    return g;
}

/// 2 x n grid: top row 0..n-1, bottom row n..2n-1.
inline Graph ladder_graph(int n)
{
    Graph g = Graph::empty(2 * n);
    for (int i = 0; i < n; ++i)
    {
        g.add_edge(i, n + i);
        if (i + 1 < n)
        {
            g.add_edge(i, i + 1);
            g.add_edge(n + i, n + i + 1);
        }
    }
    return g;
}

} // namespace tangles

#endif // TANGLES_GENERATE_HPP_INCLUDED
