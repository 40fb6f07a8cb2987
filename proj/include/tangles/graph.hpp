#ifndef TANGLES_GRAPH_HPP_INCLUDED
#define TANGLES_GRAPH_HPP_INCLUDED

#include <algorithm>
#include <array>
#include <compare>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tangles/vertex_set.hpp"

namespace tangles
{

/// Unordered edge, stored with u < v.
struct Edge
{
    int u = 0;
    int v = 0;

    Edge() = default;
    Edge(int a, int b) : u(std::min(a, b)), v(std::max(a, b)) {}

    [[nodiscard]] bool has(int x) const { return x == u || x == v; }
    [[nodiscard]] int other(int x) const { return x == u ? v : u; }

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Edge& e)
{
    return os << '{' << e.u << ',' << e.v << '}';
}

/// Simple undirected graph on stable integer labels in [0, kMaxVertices).
class Graph
{
public:
    Graph() = default;

    /// Graph on the labels 0..n-1 with no edges.
    static Graph empty(int n)
    {
        Graph g;
        for (int v = 0; v < n; ++v)
            g.add_vertex(v);
        return g;
    }

    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges)
    {
        Graph g = empty(n);
        for (auto [a, b] : edges)
            g.add_edge(a, b);
        return g;
    }

    void add_vertex(int v)
    {
        VertexSet::check_label(v);
        vertices_.insert(v);
    }

    void add_edge(int a, int b)
    {
        if (a == b)
            throw TangleError("loop at vertex " + std::to_string(a));
        add_vertex(a);
        add_vertex(b);
        adj_[a].insert(b);
        adj_[b].insert(a);
    }

    void remove_edge(int a, int b)
    {
        if (!has_edge(a, b))
            throw TangleError("no such edge");
        adj_[a].erase(b);
        adj_[b].erase(a);
    }

    void remove_vertex(int v)
    {
        if (!has_vertex(v))
            throw TangleError("no such vertex " + std::to_string(v));
        adj_[v].for_each([&](int u) { adj_[u].erase(v); });
        adj_[v] = VertexSet{};
        vertices_.erase(v);
    }

    [[nodiscard]] const VertexSet& vertices() const { return vertices_; }
    [[nodiscard]] int num_vertices() const { return vertices_.size(); }
    [[nodiscard]] bool has_vertex(int v) const { return vertices_.contains(v); }

    [[nodiscard]] bool has_edge(int a, int b) const
    {
        return has_vertex(a) && adj_[a].contains(b);
    }
    [[nodiscard]] bool has_edge(const Edge& e) const { return has_edge(e.u, e.v); }

    [[nodiscard]] const VertexSet& neighbours(int v) const
    {
        VertexSet::check_label(v);
        return adj_[v];
    }

    [[nodiscard]] int degree(int v) const { return neighbours(v).size(); }

    [[nodiscard]] int num_edges() const
    {
        int twice = 0;
        vertices_.for_each([&](int v) { twice += adj_[v].size(); });
        return twice / 2;
    }

    /// Edges in lexicographic order.
    [[nodiscard]] std::vector<Edge> edges() const
    {
        std::vector<Edge> out;
        vertices_.for_each([&](int u) {
            adj_[u].for_each([&](int v) {
                if (u < v)
                    out.emplace_back(u, v);
            });
        });
        return out;
    }

    /// Neighbourhood of a vertex set, excluding the set itself.
    [[nodiscard]] VertexSet neighbourhood(const VertexSet& x) const
    {
        VertexSet n;
        x.for_each([&](int v) { n |= adj_[v]; });
        return n - x;
    }

    /// Vertices of x with a neighbour outside x.
    [[nodiscard]] bool has_edge_between(const VertexSet& x, const VertexSet& y) const
    {
        bool found = false;
        x.for_each([&](int v) {
            if (!found && adj_[v].intersects(y))
                found = true;
        });
        return found;
    }

    /// Induced subgraph on x ∩ V.
    [[nodiscard]] Graph induced(const VertexSet& x) const
    {
        Graph h;
        h.vertices_ = x & vertices_;
        h.vertices_.for_each([&](int v) { h.adj_[v] = adj_[v] & h.vertices_; });
        return h;
    }

    /// Whether every vertex and every edge of h is present here.
    [[nodiscard]] bool contains_subgraph(const Graph& h) const
    {
        if (!h.vertices_.subset_of(vertices_))
            return false;
        bool ok = true;
        h.vertices_.for_each([&](int v) {
            if (ok && !h.adj_[v].subset_of(adj_[v]))
                ok = false;
        });
        return ok;
    }

    /// Vertex set of the component containing v, within the vertex subset `within`.
    [[nodiscard]] VertexSet reach(int v, const VertexSet& within) const
    {
        VertexSet seen{v};
        VertexSet frontier{v};
        while (!frontier.empty())
        {
            VertexSet next;
            frontier.for_each([&](int u) { next |= adj_[u]; });
            next &= within;
            next -= seen;
            seen |= next;
            frontier = next;
        }
        return seen;
    }

    /// Vertex sets of the components of G[within], ordered by smallest label.
    [[nodiscard]] std::vector<VertexSet> component_sets(const VertexSet& within) const
    {
        std::vector<VertexSet> out;
        VertexSet rest = within & vertices_;
        while (!rest.empty())
        {
            VertexSet c = reach(rest.min(), rest);
            out.push_back(c);
            rest -= c;
        }
        return out;
    }

    [[nodiscard]] std::vector<VertexSet> component_sets() const { return component_sets(vertices_); }

    [[nodiscard]] bool is_connected() const
    {
        return !vertices_.empty() && reach(vertices_.min(), vertices_) == vertices_;
    }

    [[nodiscard]] bool connected_within(const VertexSet& x) const
    {
        VertexSet y = x & vertices_;
        return !y.empty() && reach(y.min(), y) == y;
    }

    /// Vertex sets of the blocks, each containing at least one edge, in
    /// lexicographic order of their sorted label lists.
    [[nodiscard]] std::vector<VertexSet> blocks() const
    {
        std::vector<VertexSet> out;
        std::array<int, kMaxVertices> disc{};
        std::array<int, kMaxVertices> low{};
        disc.fill(-1);
        std::vector<Edge> stack;
        int time = 0;

        struct Frame
        {
            int v;
            int parent;
            VertexSet todo;
        };

        vertices_.for_each([&](int root) {
            if (disc[root] >= 0)
                return;
            std::vector<Frame> frames;
            disc[root] = low[root] = time++;
            frames.push_back({root, -1, adj_[root]});
            while (!frames.empty())
            {
                Frame& f = frames.back();
                int w = f.todo.min();
                if (w >= 0)
                {
                    f.todo.erase(w);
                    if (w == f.parent)
                        continue;
                    if (disc[w] < 0)
                    {
                        stack.emplace_back(f.v, w);
                        disc[w] = low[w] = time++;
                        int pv = f.v;
                        frames.push_back({w, pv, adj_[w]});
                    }
                    else if (disc[w] < disc[f.v])
                    {
                        stack.emplace_back(f.v, w);
                        low[f.v] = std::min(low[f.v], disc[w]);
                    }
                    continue;
                }
                int v = f.v;
                int p = f.parent;
                frames.pop_back();
                if (p < 0)
                    continue;
                low[p] = std::min(low[p], low[v]);
                if (low[v] >= disc[p])
                {
                    VertexSet b;
                    Edge top(p, v);
                    while (!stack.empty())
                    {
                        Edge e = stack.back();
                        stack.pop_back();
                        b.insert(e.u);
                        b.insert(e.v);
                        if (e == top)
                            break;
                    }
                    out.push_back(b);
                }
            }
        });
        std::sort(out.begin(), out.end(), VertexSet::lex_less);
        return out;
    }

    friend bool operator==(const Graph& a, const Graph& b)
    {
        if (a.vertices_ != b.vertices_)
            return false;
        bool same = true;
        a.vertices_.for_each([&](int v) {
            if (same && a.adj_[v] != b.adj_[v])
                same = false;
        });
        return same;
    }

private:
    VertexSet vertices_;
    std::array<VertexSet, kMaxVertices> adj_{};
};

/// g minus the edge e; labels unchanged.
inline Graph delete_edge(const Graph& g, const Edge& e)
{
    if (!g.has_edge(e))
        throw TangleError("no such edge");
    Graph h = g;
    h.remove_edge(e.u, e.v);
    return h;
}

/// Suppress a degree-2 vertex v with neighbours u, w: g - v + uw. When u and w
/// are already adjacent the result is g - v.
inline Graph suppress_vertex(const Graph& g, int v)
{
    if (!g.has_vertex(v) || g.degree(v) != 2)
        throw TangleError("not suppressible");
    const VertexSet& nb = g.neighbours(v);
    int u = nb.min();
    int w = nb.max();
    Graph h = g;
    h.remove_vertex(v);
    if (!h.has_edge(u, w))
        h.add_edge(u, w);
    return h;
}

/// Components as induced subgraphs, ordered by smallest label.
inline std::vector<Graph> components(const Graph& g)
{
    std::vector<Graph> out;
    for (const auto& c : g.component_sets())
        out.push_back(g.induced(c));
    return out;
}

/// How a topological minor sits in the graph it was reduced from.
struct MinorProvenance
{
    Graph original;
    Graph current;
    VertexSet branch_vertices;
    /// Each current edge maps to its path in the original graph, listed from
    /// the smaller endpoint label to the larger.
    std::map<Edge, std::vector<int>> edge_paths;

    static MinorProvenance identity(const Graph& g)
    {
        MinorProvenance p;
        p.original = g;
        p.current = g;
        p.branch_vertices = g.vertices();
        for (const auto& e : g.edges())
            p.edge_paths[e] = {e.u, e.v};
        return p;
    }

    /// Record deletion of a current edge.
    void delete_edge(const Edge& e)
    {
        current = tangles::delete_edge(current, e);
        edge_paths.erase(e);
    }

    /// Record suppression of a current degree-2 vertex.
    void suppress_vertex(int v)
    {
        const VertexSet nb = current.neighbours(v);
        Graph next = tangles::suppress_vertex(current, v);
        int u = nb.min();
        int w = nb.max();
        Edge eu(u, v);
        Edge ew(v, w);
        Edge uw(u, w);
        std::vector<int> pu = oriented_path(eu, u);
        std::vector<int> pw = oriented_path(ew, v);
        edge_paths.erase(eu);
        edge_paths.erase(ew);
        if (!current.has_edge(uw))
        {
            pu.insert(pu.end(), pw.begin() + 1, pw.end());
            edge_paths[uw] = pu;
        }
        branch_vertices.erase(v);
        current = next;
    }

    /// Record restriction to the component of the current graph on x.
    void take_component(const VertexSet& x)
    {
        Graph next = current.induced(x);
        for (auto it = edge_paths.begin(); it != edge_paths.end();)
        {
            if (!next.has_edge(it->first))
                it = edge_paths.erase(it);
            else
                ++it;
        }
        branch_vertices &= x;
        current = next;
    }

    /// Path of current edge e, starting at its endpoint `from`.
    [[nodiscard]] std::vector<int> oriented_path(const Edge& e, int from) const
    {
        auto it = edge_paths.find(e);
        if (it == edge_paths.end())
            throw TangleError("edge without provenance path");
        std::vector<int> p = it->second;
        if (p.front() != from)
            std::reverse(p.begin(), p.end());
        return p;
    }
};

/// Provenance of applying `outer` to the original graph and then `inner`.
inline MinorProvenance compose_provenance(const MinorProvenance& outer, const MinorProvenance& inner)
{
    if (!(inner.original == outer.current))
        throw TangleError("provenance mismatch: inner original differs from outer current graph");
    MinorProvenance out;
    out.original = outer.original;
    out.current = inner.current;
    out.branch_vertices = inner.branch_vertices;
    for (const auto& [e, path] : inner.edge_paths)
    {
        std::vector<int> full{path.front()};
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
        {
            std::vector<int> seg = outer.oriented_path(Edge(path[i], path[i + 1]), path[i]);
            full.insert(full.end(), seg.begin() + 1, seg.end());
        }
        out.edge_paths[e] = full;
    }
    return out;
}

/// Edge-list text: one "u v" pair per line; '#' starts a comment. A line
/// holding a single integer declares an isolated vertex.
inline Graph read_edge_list(std::istream& in)
{
    Graph g;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::vector<long long> nums;
        long long x = 0;
        while (ls >> x)
            nums.push_back(x);
        if (!ls.eof())
            throw TangleError("edge list line " + std::to_string(lineno) + ": not an integer");
        if (nums.empty())
            continue;
        for (long long n : nums)
            if (n < 0 || n >= kMaxVertices)
                throw TangleError("edge list line " + std::to_string(lineno) + ": label out of range");
        if (nums.size() == 1)
            g.add_vertex(static_cast<int>(nums[0]));
        else if (nums.size() == 2)
            g.add_edge(static_cast<int>(nums[0]), static_cast<int>(nums[1]));
        else
            throw TangleError("edge list line " + std::to_string(lineno) + ": expected 'u v'");
    }
    return g;
}

inline Graph parse_edge_list(const std::string& text)
{
    std::istringstream in(text);
    return read_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const Graph& g)
{
    VertexSet covered;
    for (const auto& e : g.edges())
    {
        out << e.u << ' ' << e.v << '\n';
        covered.insert(e.u);
        covered.insert(e.v);
    }
    (g.vertices() - covered).for_each([&](int v) { out << v << '\n'; });
}

/// Decode one graph6 line into a graph on labels 0..n-1.
inline Graph parse_graph6(const std::string& raw)
{
    std::string s = raw;
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r'))
        s.pop_back();
    if (s.rfind(">>graph6<<", 0) == 0)
        s.erase(0, 10);
    if (s.empty())
        throw TangleError("graph6: empty line");
    for (char c : s)
        if (c < 63 || c > 126)
            throw TangleError("graph6: byte out of range");
    std::size_t pos = 0;
    long long n = 0;
    if (s[0] != 126)
    {
        n = s[0] - 63;
        pos = 1;
    }
    else if (s.size() >= 4 && s[1] != 126)
    {
        n = ((s[1] - 63LL) << 12) | ((s[2] - 63LL) << 6) | (s[3] - 63LL);
        pos = 4;
    }
    else
    {
        throw TangleError("graph6: graph too large");
    }
    if (n > kMaxVertices)
        throw TangleError("graph6: graph too large");
    std::size_t bits = static_cast<std::size_t>(n * (n - 1) / 2);
    std::size_t need = (bits + 5) / 6;
    if (s.size() - pos != need)
        throw TangleError("graph6: wrong length");
    Graph g = Graph::empty(static_cast<int>(n));
    std::size_t k = 0;
    for (int j = 1; j < n; ++j)
    {
        for (int i = 0; i < j; ++i, ++k)
        {
            int byte = s[pos + k / 6] - 63;
            if ((byte >> (5 - k % 6)) & 1)
                g.add_edge(i, j);
        }
    }
    return g;
}

/// Encode a graph whose labels are exactly 0..n-1.
inline std::string to_graph6(const Graph& g)
{
    int n = g.num_vertices();
    if (n > 0 && g.vertices().max() != n - 1)
        throw TangleError("graph6: labels must be 0..n-1");
    std::string s;
    if (n <= 62)
        s.push_back(static_cast<char>(63 + n));
    else
    {
        s.push_back(126);
        s.push_back(static_cast<char>(63 + ((n >> 12) & 63)));
        s.push_back(static_cast<char>(63 + ((n >> 6) & 63)));
        s.push_back(static_cast<char>(63 + (n & 63)));
    }
    int acc = 0;
    int nbits = 0;
    for (int j = 1; j < n; ++j)
    {
        for (int i = 0; i < j; ++i)
        {
            acc = (acc << 1) | (g.has_edge(i, j) ? 1 : 0);
            if (++nbits == 6)
            {
                s.push_back(static_cast<char>(63 + acc));
                acc = 0;
                nbits = 0;
            }
        }
    }
    if (nbits > 0)
        s.push_back(static_cast<char>(63 + (acc << (6 - nbits))));
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const Graph& g)
{
    os << "V=" << g.vertices() << " E=[";
    bool first = true;
    for (const auto& e : g.edges())
    {
        if (!first)
            os << ", ";
        os << e;
        first = false;
    }
    return os << ']';
}

} // namespace tangles

#endif // TANGLES_GRAPH_HPP_INCLUDED
