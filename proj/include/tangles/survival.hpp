#ifndef TANGLES_SURVIVAL_HPP_INCLUDED
#define TANGLES_SURVIVAL_HPP_INCLUDED

#include <optional>
#include <utility>
#include <vector>

#include "tangles/tangle.hpp"

namespace tangles
{

/// A tangle of a reduced graph together with the reduction that produced it.
struct Survivor
{
    Graph graph;
    Tangle tangle;
    Edge edge;
};

namespace detail
{

inline void verify_extension(const Graph& g2, const Tangle& t, const Tangle& t2, const char* what)
{
#ifdef TANGLES_VERIFY
    if (!is_tangle(g2, t2))
        throw TangleError(std::string(what) + ": construction is not a tangle");
    if (!extends(t, t2))
        throw TangleError(std::string(what) + ": construction does not extend the tangle");
#else
    (void)g2;
    (void)t;
    (void)t2;
    (void)what;
#endif
}

inline void verify_tangle(const Graph& g2, const Tangle& t2, const char* what)
{
#ifdef TANGLES_VERIFY
    if (!is_tangle(g2, t2))
        throw TangleError(std::string(what) + ": construction is not a tangle");
#else
    (void)g2;
    (void)t2;
    (void)what;
#endif
}

} // namespace detail

/// The tangle of order 1 or 2 whose core is x: orient each separation so
/// that x lies in the big side.
inline Tangle tangle_at(const Graph& g, int k, const VertexSet& x)
{
    return orientation_by(make_system(g, k), [&](const Separation& s) { return x.subset_of(s.big); });
}

/// Deleting any edge keeps a 1-tangle alive: take the component of g - e
/// inside the core with the smallest label.
inline Survivor survive_delete_k1(const Graph& g, const Tangle& t, const Edge& e)
{
    if (t.k() != 1)
        throw TangleError("survive_delete_k1 needs a tangle of order 1");
    Graph h = delete_edge(g, e);
    VertexSet core = tangle_core(t, g);
    VertexSet pick;
    for (const auto& c : h.component_sets())
    {
        if (c.subset_of(core))
        {
            pick = c;
            break;
        }
    }
    Tangle out = tangle_at(h, 1, pick);
    detail::verify_extension(h, t, out, "survive_delete_k1");
    return {h, out, e};
}

/// A 2-tangle survives deleting some edge: keep the least edge f of the
/// core block, delete the least other edge e, orient towards the block of
/// g - e containing f.
inline Survivor survive_delete_k2(const Graph& g, const Tangle& t)
{
    if (t.k() != 2)
        throw TangleError("survive_delete_k2 needs a tangle of order 2");
    auto es = g.edges();
    if (es.size() < 2)
        throw TangleError("survive_delete_k2 needs at least 2 edges");
    Graph core = g.induced(tangle_core(t, g));
    auto ce = core.edges();
    if (ce.empty())
        throw TangleError("survive_delete_k2: core block has no edge");
    Edge f = ce.front();
    Edge e = es.front() == f ? es[1] : es.front();
    Graph h = delete_edge(g, e);
    Tangle out = orientation_by(make_system(h, 2), [&](const Separation& s) {
        return s.big.contains(f.u) && s.big.contains(f.v);
    });
    detail::verify_extension(h, t, out, "survive_delete_k2");
    return {h, out, e};
}

/// The unique component carrying t and the tangle t induces on it.
inline std::pair<Graph, Tangle> induce_component(const Graph& g, const Tangle& t)
{
    VertexSet x = g.vertices();
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        Separation s = t.oriented(i);
        if (s.order() == 0)
            x &= s.big;
    }
    if (!g.connected_within(x))
        throw TangleError("induce_component: order-0 core is not a component");
    Graph comp = g.induced(x);
    const VertexSet rest = g.vertices() - x;
    Tangle out = orientation_by(make_system(comp, t.k()), [&](const Separation& s) {
        Separation wide{s.small | rest, s.big};
        if (!t.orients(wide))
            throw TangleError("induce_component: widened separation not oriented");
        return t.contains(wide);
    });
    detail::verify_tangle(comp, out, "induce_component");
    return {comp, out};
}

/// Delete the edge at a degree-1 vertex v; t induces a tangle of g - e.
inline Survivor delete_pendant(const Graph& g, const Tangle& t, int v)
{
    if (t.k() < 3)
        throw TangleError("delete_pendant needs order at least 3");
    if (!g.has_vertex(v) || g.degree(v) != 1)
        throw TangleError("delete_pendant needs a degree-1 vertex");
    Edge e(v, g.neighbours(v).min());
    Graph h = delete_edge(g, e);
    auto included = [&](const Separation& s) {
        Separation left{s.small - VertexSet{v}, s.big | VertexSet{v}};
        Separation right{s.small | VertexSet{v}, s.big - VertexSet{v}};
        return t.contains(s) || t.contains(left) || t.contains(right);
    };
    Tangle out = orientation_by(make_system(h, t.k()), [&](const Separation& s) {
        bool fwd = included(s);
        if (fwd == included(s.inverse()))
            throw TangleError("delete_pendant: induced set is not an orientation");
        return fwd;
    });
    detail::verify_extension(h, t, out, "delete_pendant");
    return {h, out, e};
}

/// Suppress a degree-2 vertex v; t induces the tangle
/// {(A,B) : (A+v, B) in t or (A, B+v) in t}.
inline std::pair<Graph, Tangle> suppress_deg2(const Graph& g, const Tangle& t, int v)
{
    if (t.k() < 3)
        throw TangleError("suppress_deg2 needs order at least 3");
    Graph h = suppress_vertex(g, v);
    auto included = [&](const Separation& s) {
        return t.contains({s.small | VertexSet{v}, s.big}) || t.contains({s.small, s.big | VertexSet{v}});
    };
    Tangle out = orientation_by(make_system(h, t.k()), [&](const Separation& s) {
        bool fwd = included(s);
        if (fwd == included(s.inverse()))
            throw TangleError("suppress_deg2: induced set is not an orientation");
        return fwd;
    });
    detail::verify_tangle(h, out, "suppress_deg2");
    return {h, out};
}

/// For a separation {A,B} of g - e whose strict sides e joins, with order
/// below k - 1: (A+e, B) in t iff (A, B+e) in t.
inline bool edge_endpoint_equivalence(const Graph& g, const Tangle& t, const Edge& e, const Separation& s)
{
    if (t.k() < 3)
        throw TangleError("edge_endpoint_equivalence needs order at least 3");
    if (!g.has_edge(e))
        throw TangleError("no such edge");
    if (!s.is_separation_of(delete_edge(g, e)))
        throw TangleError("not a separation of g - e");
    bool joins = (s.strict_small().contains(e.u) && s.strict_big().contains(e.v)) ||
                 (s.strict_small().contains(e.v) && s.strict_big().contains(e.u));
    if (!joins)
        throw TangleError("edge does not join the strict sides");
    if (s.order() >= t.k() - 1)
        throw TangleError("separation order must be below k - 1");
    VertexSet ends{e.u, e.v};
    return t.contains({s.small | ends, s.big}) == t.contains({s.small, s.big | ends});
}

/// The orientation of {C,D} (a separation of g - e) forced by t, if any:
/// (C,D) is forced when it lies below some member of t.
inline std::optional<Separation> forced_orientation(const std::vector<Separation>& t_maximal, const Separation& s)
{
    for (const auto& m : t_maximal)
    {
        if (s.leq(m))
            return s;
        if (s.inverse().leq(m))
            return s.inverse();
    }
    return std::nullopt;
}

inline std::vector<Separation> maximal_members(const Tangle& t)
{
    std::vector<Separation> ms = t.members();
    std::vector<Separation> out;
    for (std::size_t i : maximal_elements(ms))
        out.push_back(ms[i]);
    return out;
}

/// Orientation of {C,D} from a higher-order tangle t_sup via (C+e, D).
inline bool oriented_by_endpoints(const Tangle& t_sup, const Edge& e, const Separation& s)
{
    VertexSet ends{e.u, e.v};
    Separation grown{s.small | ends, s.big};
    if (t_sup.contains(grown))
        return true;
    Separation other{s.big | ends, s.small};
    if (t_sup.contains(other))
        return false;
    throw TangleError("endpoint-extended separation not oriented by the higher-order tangle");
}

/// t inside a (k+1)-tangle t_sup extends to g - e for any edge e: keep t on
/// old separations, orient new ones by (A+e, B) in t_sup.
inline Survivor extend_with_supertangle(const Graph& g, const Tangle& t, const Tangle& t_sup, const Edge& e)
{
    if (t_sup.k() != t.k() + 1)
        throw TangleError("extend_with_supertangle needs a tangle of order k + 1");
    if (!extends(t, t_sup))
        throw TangleError("extend_with_supertangle: tangle is not contained in the higher-order tangle");
    Graph h = delete_edge(g, e);
    Tangle out = orientation_by(make_system(h, t.k()), [&](const Separation& s) {
        if (t.orients(s))
            return t.contains(s);
        return oriented_by_endpoints(t_sup, e, s);
    });
    detail::verify_extension(h, t, out, "extend_with_supertangle");
    return {h, out, e};
}

struct DivergentExtension
{
    Survivor result;
    /// The chosen distinguishing separation (B, A) in the higher tangle.
    Separation distinguishing;
};

/// t not inside a (k+1)-tangle t_div: delete an edge on the t-small side
/// of a maximal distinguishing separation, orient forced separations by t
/// and the rest by t_div.
inline DivergentExtension extend_with_divergent_supertangle(const Graph& g, const Tangle& t, const Tangle& t_div)
{
    if (t_div.k() != t.k() + 1)
        throw TangleError("extend_with_divergent_supertangle needs a tangle of order k + 1");
    std::vector<Separation> dist;
    for (std::size_t i = 0; i < t_div.size(); ++i)
    {
        Separation s = t_div.oriented(i);
        if (s.order() < t.k() && !t.contains(s))
            dist.push_back(s);
    }
    if (dist.empty())
        throw TangleError("no distinguishing separation: tangle is contained in the higher-order tangle");
    std::vector<Separation> tops;
    for (std::size_t i : maximal_elements(dist))
        tops.push_back(dist[i]);
    Separation ba = *std::min_element(tops.begin(), tops.end(), canonical_less);
    // ba = (B, A): the edge goes inside G[A \ B]
    VertexSet a_strict = ba.big - ba.small;
    Graph inside = g.induced(a_strict);
    auto es = inside.edges();
    if (es.empty())
        throw TangleError("extend_with_divergent_supertangle: no edge on the small side");
    Edge e = es.front();
    Graph h = delete_edge(g, e);
    std::vector<Separation> tmax = maximal_members(t);
    Tangle out = orientation_by(make_system(h, t.k()), [&](const Separation& s) {
        if (auto f = forced_orientation(tmax, s))
            return *f == s;
        return oriented_by_endpoints(t_div, e, s);
    });
    detail::verify_extension(h, t, out, "extend_with_divergent_supertangle");
    return {{h, out, e}, ba};
}

/// Some k-tangle of g - e extending t, first in canonical enumeration order.
inline std::optional<Tangle> brute_force_extension(const Graph& g, const Tangle& t, const Edge& e)
{
    Graph h = delete_edge(g, e);
    EnumerateOptions opts;
    opts.limit = 1;
    opts.fixed = t.members();
    auto found = enumerate_tangles(h, t.k(), opts);
    if (found.empty())
        return std::nullopt;
    return found.front();
}

/// Edge deletion under a (k+1)-tangle, choosing the nested or divergent
/// construction as appropriate.
inline Survivor survive_with_higher_tangle(const Graph& g, const Tangle& t, const Tangle& t_star)
{
    if (extends(t, t_star))
    {
        auto es = g.edges();
        if (es.empty())
            throw TangleError("survive_with_higher_tangle: graph has no edge");
        return extend_with_supertangle(g, t, t_star, es.front());
    }
    return extend_with_divergent_supertangle(g, t, t_star).result;
}

} // namespace tangles

#endif // TANGLES_SURVIVAL_HPP_INCLUDED
