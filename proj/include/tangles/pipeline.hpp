#ifndef TANGLES_PIPELINE_HPP_INCLUDED
#define TANGLES_PIPELINE_HPP_INCLUDED

#include <cstddef>
#include <optional>
#include <vector>

#include "tangles/graph.hpp"
#include "tangles/inducing.hpp"
#include "tangles/rainbow_cloud.hpp"
#include "tangles/survival.hpp"
#include "tangles/tangle.hpp"
#include "tangles/trace.hpp"

namespace tangles
{

struct ReduceConfig
{
    /// Try the rainbow-cloud edge choice once the degree cases are done.
    bool use_rc = false;
    /// Decomposition of the graph reached when the rainbow-cloud step first
    /// applies; it is carried along while it stays valid.
    std::optional<RCDecomposition> rc;
    ExtensionOptions rc_options;
    /// Re-check every step with step_survives.
    bool verify = true;
    /// Stop after this many steps; 0 means no limit.
    std::size_t max_steps = 0;
};

namespace detail
{

inline std::optional<ReductionStep> component_step(const Graph& g, const Tangle& t)
{
    if (g.is_connected())
        return std::nullopt;
    auto [comp, out] = induce_component(g, t);
    ReductionStep s;
    s.kind = StepKind::take_component;
    s.component = comp.vertices();
    s.rule = Rule::component;
    s.graph = std::move(comp);
    s.tangle = std::move(out);
    return s;
}

inline ReductionStep deletion_step(Survivor sv, Rule rule)
{
    ReductionStep s;
    s.kind = StepKind::delete_edge;
    s.edge = sv.edge;
    s.rule = rule;
    s.graph = std::move(sv.graph);
    s.tangle = std::move(sv.tangle);
    return s;
}

inline std::optional<int> least_vertex_of_degree(const Graph& g, int d)
{
    std::optional<int> out;
    g.vertices().for_each([&](int v) {
        if (!out && g.degree(v) == d)
            out = v;
    });
    return out;
}

inline std::optional<ReductionStep> rc_step(const Graph& g, const Tangle& t, ReduceConfig& config)
{
    if (!config.use_rc || !config.rc || !validate_rc(g, *config.rc).all())
        return std::nullopt;
    try
    {
        EdgeChoice choice = choose_edge(g, *config.rc, t);
        RCExtension ext = extend_after_deletion(g, t, choice, config.rc_options);
        config.rc = choice.rc;
        return deletion_step(std::move(ext.result), Rule::rainbow_cloud);
    }
    catch (const TangleError&)
    {
        return std::nullopt;
    }
}

inline std::optional<ReductionStep> next_step(const Graph& g, const Tangle& t, ReduceConfig& config)
{
    if (auto s = component_step(g, t))
        return s;
    const int k = t.k();
    const auto es = g.edges();
    if (k == 1)
    {
        if (es.empty())
            return std::nullopt;
        return deletion_step(survive_delete_k1(g, t, es.front()), Rule::order_one);
    }
    if (k == 2)
    {
        if (es.size() < 2)
            return std::nullopt;
        return deletion_step(survive_delete_k2(g, t), Rule::order_two);
    }
    if (auto v = least_vertex_of_degree(g, 1))
        return deletion_step(delete_pendant(g, t, *v), Rule::pendant);
    if (auto v = least_vertex_of_degree(g, 2))
    {
        auto [h, out] = suppress_deg2(g, t, *v);
        ReductionStep s;
        s.kind = StepKind::suppress_vertex;
        s.vertex = *v;
        s.rule = Rule::degree_two;
        s.graph = std::move(h);
        s.tangle = std::move(out);
        return s;
    }
    if (es.empty())
        return std::nullopt;
    if (auto s = rc_step(g, t, config))
        return s;
    EnumerateOptions one;
    one.limit = 1;
    auto higher = enumerate_tangles(g, k + 1, one);
    if (!higher.empty())
    {
        const Rule rule = extends(t, higher.front()) ? Rule::nested_supertangle : Rule::divergent_supertangle;
        return deletion_step(survive_with_higher_tangle(g, t, higher.front()), rule);
    }
    for (const auto& e : es)
    {
        if (auto ext = brute_force_extension(g, t, e))
            return deletion_step({delete_edge(g, e), *ext, e}, Rule::edge_search);
    }
    return std::nullopt;
}

} // namespace detail

/// Reduce g step by step while t survives: components, then the order-1 and
/// order-2 deletions, pendant deletions, suppressions, the rainbow-cloud
/// deletion when enabled, deletions under a higher-order tangle, and finally
/// a search over all edges. Candidates are
/// tried in label order.
inline ReductionTrace reduce(const Graph& g, const Tangle& t, ReduceConfig config = {})
{
    if (!is_tangle(g, t))
        throw TangleError("reduce: input is not a tangle of the graph");
    ReductionTrace trace;
    trace.initial = g;
    trace.initial_tangle = t;
    while (config.max_steps == 0 || trace.steps.size() < config.max_steps)
    {
        const Graph& cur = trace.terminal_graph();
        const Tangle& ct = trace.terminal_tangle();
        auto step = detail::next_step(cur, ct, config);
        if (!step)
            break;
        if (config.verify && !step_survives(cur, ct, *step))
            throw TangleError(std::string("reduce: step by rule ") + rule_name(step->rule) +
                              " does not preserve the tangle");
        trace.steps.push_back(std::move(*step));
    }
    return trace;
}

/// Extend an inducing weight function of the terminal tangle to the initial
/// graph by zero.
inline WeightFunction transfer_theorem1(const ReductionTrace& trace, const WeightFunction& w_terminal)
{
    return transfer_by_zero(trace, w_terminal);
}

/// Lift the terminal tangle back through every step to the initial graph.
inline Tangle lift_through(const ReductionTrace& trace)
{
    Tangle t = trace.terminal_tangle();
    for (std::size_t i = trace.steps.size(); i-- > 0;)
    {
        const auto& step = trace.steps[i];
        const Graph& before = trace.graph_after(i);
        if (step.kind == StepKind::suppress_vertex)
            t = lift_suppression(t, before, step.vertex);
        else
            t = lift_subgraph(t, step.graph, before);
    }
    return t;
}

/// The terminal graph as a topological minor of the initial graph.
inline MinorProvenance trace_provenance(const ReductionTrace& trace)
{
    MinorProvenance p = MinorProvenance::identity(trace.initial);
    for (const auto& step : trace.steps)
    {
        switch (step.kind)
        {
        case StepKind::delete_edge:
            p.delete_edge(step.edge);
            break;
        case StepKind::suppress_vertex:
            p.suppress_vertex(step.vertex);
            break;
        case StepKind::take_component:
            p.take_component(step.component);
            break;
        }
    }
    return p;
}

/// Some triple of members has H inside G[A1] ∪ G[A2] ∪ G[A3].
inline bool covered_by_triple(const Graph& h, const Separation& a, const Separation& b, const Separation& c)
{
    const VertexSet u = a.small | b.small | c.small;
    if (!h.vertices().subset_of(u))
        return false;
    for (const auto& e : h.edges())
    {
        const VertexSet ends{e.u, e.v};
        if (!ends.subset_of(a.small) && !ends.subset_of(b.small) && !ends.subset_of(c.small))
            return false;
    }
    return true;
}

/// H witnesses t: no three members have H inside the union of their small
/// sides. Maximal members suffice.
inline bool witnesses(const Graph& g, const Tangle& t, const Graph& h)
{
    if (!g.contains_subgraph(h))
        throw TangleError("witnesses: not a subgraph");
    const std::vector<Separation> ms = maximal_members(t);
    for (std::size_t i = 0; i < ms.size(); ++i)
        for (std::size_t j = i; j < ms.size(); ++j)
            for (std::size_t l = j; l < ms.size(); ++l)
                if (covered_by_triple(h, ms[i], ms[j], ms[l]))
                    return false;
    return true;
}

/// Branch vertices of the terminal minor plus, for each terminal edge, the
/// first edge of its path in the initial graph.
inline Graph witness_subgraph(const ReductionTrace& trace)
{
    if (!trace.terminal_connected())
        throw TangleError("witness_subgraph: terminal graph is not connected");
    const MinorProvenance p = trace_provenance(trace);
    Graph h;
    p.branch_vertices.for_each([&](int v) { h.add_vertex(v); });
    for (const auto& [e, path] : p.edge_paths)
        h.add_edge(path[0], path[1]);
    return h;
}

} // namespace tangles

#endif // TANGLES_PIPELINE_HPP_INCLUDED
