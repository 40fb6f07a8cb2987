#ifndef TANGLES_LINKAGE_HPP_INCLUDED
#define TANGLES_LINKAGE_HPP_INCLUDED

#include <algorithm>
#include <cstddef>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boykov_kolmogorov_max_flow.hpp>

#include "tangles/graph.hpp"

namespace tangles
{

/// Vertex-disjoint paths, each a vertex sequence.
struct Linkage
{
    std::vector<std::vector<int>> paths;

    [[nodiscard]] std::size_t size() const { return paths.size(); }

    [[nodiscard]] VertexSet vertices() const
    {
        VertexSet out;
        for (const auto& p : paths)
            for (int v : p)
                out.insert(v);
        return out;
    }
};

namespace detail
{

using FlowTraits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
using FlowGraph = boost::adjacency_list<
    boost::vecS, boost::vecS, boost::directedS,
    boost::property<boost::vertex_color_t, boost::default_color_type,
                    boost::property<boost::vertex_distance_t, long,
                                    boost::property<boost::vertex_predecessor_t, FlowTraits::edge_descriptor>>>,
    boost::property<boost::edge_capacity_t, long,
                    boost::property<boost::edge_residual_capacity_t, long,
                                    boost::property<boost::edge_reverse_t, FlowTraits::edge_descriptor>>>>;

class FlowNetwork
{
public:
    explicit FlowNetwork(std::size_t n) : g_(n) {}

    void arc(std::size_t u, std::size_t v, long cap)
    {
        auto cap_map = boost::get(boost::edge_capacity, g_);
        auto rev_map = boost::get(boost::edge_reverse, g_);
        auto e = boost::add_edge(u, v, g_).first;
        auto r = boost::add_edge(v, u, g_).first;
        cap_map[e] = cap;
        cap_map[r] = 0;
        rev_map[e] = r;
        rev_map[r] = e;
    }

    long solve(std::size_t s, std::size_t t) { return boost::boykov_kolmogorov_max_flow(g_, s, t); }

    /// Successor of u along an arc carrying flow not yet consumed.
    long take_flow(std::size_t u)
    {
        auto cap_map = boost::get(boost::edge_capacity, g_);
        auto res_map = boost::get(boost::edge_residual_capacity, g_);
        for (auto [it, end] = boost::out_edges(u, g_); it != end; ++it)
        {
            if (cap_map[*it] > 0 && cap_map[*it] - res_map[*it] > 0)
            {
                res_map[*it] += 1;
                return static_cast<long>(boost::target(*it, g_));
            }
        }
        return -1;
    }

private:
    FlowGraph g_;
};

} // namespace detail

/// A maximum set of disjoint from-to paths in g[within]; each path meets
/// `from` only in its first vertex and `to` only in its last.
inline Linkage max_linkage(const Graph& g, const VertexSet& from, const VertexSet& to, const VertexSet& within)
{
    const VertexSet inside = within & g.vertices();
    const VertexSet a = from & inside;
    const VertexSet b = to & inside;
    std::vector<int> label = inside.to_vector();
    std::vector<long> index(kMaxVertices, -1);
    for (std::size_t i = 0; i < label.size(); ++i)
        index[static_cast<std::size_t>(label[i])] = static_cast<long>(i);
    const std::size_t n = label.size();
    const std::size_t source = 2 * n;
    const std::size_t sink = 2 * n + 1;
    detail::FlowNetwork net(2 * n + 2);
    for (std::size_t i = 0; i < n; ++i)
    {
        int v = label[i];
        net.arc(2 * i, 2 * i + 1, 1);
        if (a.contains(v))
            net.arc(source, 2 * i, 1);
        if (b.contains(v))
            net.arc(2 * i + 1, sink, 1);
        (g.neighbours(v) & inside).for_each([&](int w) {
            net.arc(2 * i + 1, 2 * static_cast<std::size_t>(index[static_cast<std::size_t>(w)]), 1);
        });
    }
    long flow = net.solve(source, sink);
    Linkage out;
    for (long f = 0; f < flow; ++f)
    {
        std::vector<int> path;
        long node = net.take_flow(source);
        while (node >= 0 && static_cast<std::size_t>(node) != sink)
        {
            auto i = static_cast<std::size_t>(node) / 2;
            path.push_back(label[i]);
            net.take_flow(static_cast<std::size_t>(node));
            node = net.take_flow(2 * i + 1);
        }
        if (node < 0)
            throw TangleError("max_linkage: broken flow path");
        // cut to the last vertex in `from` and the first vertex in `to` after it
        std::size_t start = 0;
        for (std::size_t i = 0; i < path.size(); ++i)
            if (a.contains(path[i]))
                start = i;
        std::size_t stop = start;
        while (!b.contains(path[stop]))
            ++stop;
        out.paths.emplace_back(path.begin() + static_cast<long>(start), path.begin() + static_cast<long>(stop) + 1);
    }
    std::sort(out.paths.begin(), out.paths.end());
    return out;
}

inline Linkage max_linkage(const Graph& g, const VertexSet& from, const VertexSet& to)
{
    return max_linkage(g, from, to, g.vertices());
}

/// Whether `l` is a from-to linkage of g[within].
inline bool is_linkage(const Graph& g, const Linkage& l, const VertexSet& from, const VertexSet& to,
                       const VertexSet& within)
{
    VertexSet used;
    for (const auto& p : l.paths)
    {
        if (p.empty())
            return false;
        for (std::size_t i = 0; i < p.size(); ++i)
        {
            int v = p[i];
            if (v < 0 || v >= kMaxVertices || !within.contains(v) || !g.has_vertex(v) || used.contains(v))
                return false;
            used.insert(v);
            if (i + 1 < p.size() && !g.has_edge(v, p[i + 1]))
                return false;
            if (from.contains(v) != (i == 0))
                return false;
            if (to.contains(v) != (i + 1 == p.size()))
                return false;
        }
    }
    return true;
}

} // namespace tangles

#endif // TANGLES_LINKAGE_HPP_INCLUDED
