#ifndef TANGLES_TRACE_HPP_INCLUDED
#define TANGLES_TRACE_HPP_INCLUDED

#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tangles/graph.hpp"
#include "tangles/tangle.hpp"

namespace tangles
{

enum class StepKind
{
    delete_edge,
    suppress_vertex,
    take_component
};

/// Which construction produced a step.
enum class Rule
{
    component,
    order_one,
    order_two,
    pendant,
    degree_two,
    nested_supertangle,
    divergent_supertangle,
    rainbow_cloud,
    edge_search
};

inline const char* rule_name(Rule r)
{
    switch (r)
    {
    case Rule::component:
        return "component";
    case Rule::order_one:
        return "order-one";
    case Rule::order_two:
        return "order-two";
    case Rule::pendant:
        return "pendant";
    case Rule::degree_two:
        return "degree-two";
    case Rule::nested_supertangle:
        return "nested-supertangle";
    case Rule::divergent_supertangle:
        return "divergent-supertangle";
    case Rule::rainbow_cloud:
        return "rainbow-cloud";
    case Rule::edge_search:
        return "edge-search";
    }
    return "unknown";
}

inline Rule parse_rule(const std::string& s)
{
    for (Rule r : {Rule::component, Rule::order_one, Rule::order_two, Rule::pendant, Rule::degree_two,
                   Rule::nested_supertangle, Rule::divergent_supertangle, Rule::rainbow_cloud, Rule::edge_search})
        if (s == rule_name(r))
            return r;
    throw TangleError("unknown rule '" + s + "'");
}

struct ReductionStep
{
    StepKind kind = StepKind::delete_edge;
    Edge edge;
    int vertex = -1;
    VertexSet component;
    Rule rule = Rule::edge_search;
    Graph graph;
    Tangle tangle;
};

struct ReductionTrace
{
    Graph initial;
    Tangle initial_tangle;
    std::vector<ReductionStep> steps;

    [[nodiscard]] int k() const { return initial_tangle.k(); }

    /// Graph after i steps; 0 is the initial graph.
    [[nodiscard]] const Graph& graph_after(std::size_t i) const
    {
        if (i > steps.size())
            throw TangleError("trace step out of range");
        return i == 0 ? initial : steps[i - 1].graph;
    }

    [[nodiscard]] const Tangle& tangle_after(std::size_t i) const
    {
        if (i > steps.size())
            throw TangleError("trace step out of range");
        return i == 0 ? initial_tangle : steps[i - 1].tangle;
    }

    [[nodiscard]] const Graph& terminal_graph() const { return graph_after(steps.size()); }
    [[nodiscard]] const Tangle& terminal_tangle() const { return tangle_after(steps.size()); }
    [[nodiscard]] bool terminal_connected() const { return terminal_graph().is_connected(); }
    [[nodiscard]] std::size_t terminal_edges() const { return terminal_graph().edges().size(); }
};

/// The graph a step's action produces from `g`.
inline Graph apply_step(const Graph& g, const ReductionStep& step)
{
    switch (step.kind)
    {
    case StepKind::delete_edge:
        return delete_edge(g, step.edge);
    case StepKind::suppress_vertex:
        return suppress_vertex(g, step.vertex);
    case StepKind::take_component:
        if (!step.component.subset_of(g.vertices()) || !g.connected_within(step.component) ||
            g.neighbourhood(step.component).intersects(g.vertices() - step.component))
            throw TangleError("take_component: not a component");
        return g.induced(step.component);
    }
    throw TangleError("unknown step kind");
}

/// Whether `next` in g' is how `prev` in g survives the step: an extension
/// for deletions, and the tangle whose lift is `prev` otherwise.
inline bool step_survives(const Graph& g, const Tangle& prev, const ReductionStep& step)
{
    if (!(apply_step(g, step) == step.graph) || step.tangle.k() != prev.k())
        return false;
    if (!is_tangle(step.graph, step.tangle))
        return false;
    switch (step.kind)
    {
    case StepKind::delete_edge:
        return extends(prev, step.tangle);
    case StepKind::suppress_vertex:
        return lift_suppression(step.tangle, g, step.vertex, prev.system_ptr()) == prev;
    case StepKind::take_component:
        return lift_subgraph(step.tangle, step.graph, g, prev.system_ptr()) == prev;
    }
    return false;
}

/// Check every step of the trace; returns the index of the first bad step.
inline std::optional<std::size_t> first_invalid_step(const ReductionTrace& trace)
{
    if (!is_tangle(trace.initial, trace.initial_tangle))
        return 0;
    for (std::size_t i = 0; i < trace.steps.size(); ++i)
        if (!step_survives(trace.graph_after(i), trace.tangle_after(i), trace.steps[i]))
            return i + 1;
    return std::nullopt;
}

namespace detail
{

inline void write_block(std::ostream& out, const Graph& g, const Tangle& t)
{
    out << "GRAPH\n";
    g.vertices().for_each([&](int v) {
        if (g.degree(v) == 0)
            out << v << '\n';
    });
    for (const auto& e : g.edges())
        out << e.u << ' ' << e.v << '\n';
    out << "TANGLE\n" << format_tangle(t);
}

} // namespace detail

/// Text form with sections TRACE / GRAPH / TANGLE / STEP n / RULE / ACTION /
/// TERMINAL; every step carries its full graph and tangle.
inline void write_trace(std::ostream& out, const ReductionTrace& trace)
{
    out << "TRACE\n";
    detail::write_block(out, trace.initial, trace.initial_tangle);
    for (std::size_t i = 0; i < trace.steps.size(); ++i)
    {
        const auto& s = trace.steps[i];
        out << "STEP " << i + 1 << '\n';
        out << "RULE " << rule_name(s.rule) << '\n';
        out << "ACTION ";
        switch (s.kind)
        {
        case StepKind::delete_edge:
            out << "delete-edge " << s.edge.u << ' ' << s.edge.v;
            break;
        case StepKind::suppress_vertex:
            out << "suppress-vertex " << s.vertex;
            break;
        case StepKind::take_component:
            out << "take-component";
            s.component.for_each([&](int v) { out << ' ' << v; });
            break;
        }
        out << '\n';
        detail::write_block(out, s.graph, s.tangle);
    }
    out << "TERMINAL connected " << (trace.terminal_connected() ? 1 : 0) << " edges " << trace.terminal_edges()
        << '\n';
}

inline std::string format_trace(const ReductionTrace& trace)
{
    std::ostringstream os;
    write_trace(os, trace);
    return os.str();
}

/// Parse the text form; graphs and tangles are rebuilt from their sections.
inline ReductionTrace parse_trace(const std::string& text)
{
    struct Block
    {
        std::string header;
        std::vector<std::string> lines;
    };
    std::vector<Block> blocks;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto keyword = [](const std::string& l) {
        std::istringstream ls(l);
        std::string w;
        ls >> w;
        return w;
    };
    while (std::getline(in, line))
    {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        const std::string w = keyword(line);
        if (w == "TRACE" || w == "GRAPH" || w == "TANGLE" || w == "STEP" || w == "RULE" || w == "ACTION" ||
            w == "TERMINAL")
            blocks.push_back({line, {}});
        else if (blocks.empty())
            throw TangleError("trace line " + std::to_string(lineno) + ": data before the TRACE header");
        else
            blocks.back().lines.push_back(line);
    }
    if (blocks.empty() || keyword(blocks.front().header) != "TRACE")
        throw TangleError("trace must start with TRACE");

    ReductionTrace trace;
    std::size_t pos = 1;
    auto take_graph_and_tangle = [&](Graph& g, Tangle& t) {
        if (pos >= blocks.size() || keyword(blocks[pos].header) != "GRAPH")
            throw TangleError("trace: expected GRAPH section");
        std::string body;
        for (const auto& l : blocks[pos].lines)
            body += l + '\n';
        g = parse_edge_list(body);
        ++pos;
        if (pos >= blocks.size() || keyword(blocks[pos].header) != "TANGLE")
            throw TangleError("trace: expected TANGLE section");
        std::string tb;
        for (const auto& l : blocks[pos].lines)
            tb += l + '\n';
        t = parse_tangle(tb, g);
        ++pos;
    };
    take_graph_and_tangle(trace.initial, trace.initial_tangle);
    std::optional<std::pair<int, std::size_t>> terminal;
    while (pos < blocks.size())
    {
        std::istringstream hs(blocks[pos].header);
        std::string w;
        hs >> w;
        if (w == "TERMINAL")
        {
            std::string c;
            std::string e;
            int conn = 0;
            std::size_t edges = 0;
            if (!(hs >> c >> conn >> e >> edges) || c != "connected" || e != "edges")
                throw TangleError("trace: malformed TERMINAL line");
            terminal = std::pair{conn, edges};
            ++pos;
            if (pos != blocks.size())
                throw TangleError("trace: data after TERMINAL");
            break;
        }
        if (w != "STEP")
            throw TangleError("trace: expected STEP, found '" + w + "'");
        std::size_t number = 0;
        if (!(hs >> number) || number != trace.steps.size() + 1)
            throw TangleError("trace: steps must be numbered 1, 2, ...");
        ++pos;
        ReductionStep step;
        if (pos >= blocks.size() || keyword(blocks[pos].header) != "RULE")
            throw TangleError("trace: expected RULE");
        {
            std::istringstream rs(blocks[pos].header);
            std::string kw;
            std::string name;
            rs >> kw >> name;
            step.rule = parse_rule(name);
        }
        ++pos;
        if (pos >= blocks.size() || keyword(blocks[pos].header) != "ACTION")
            throw TangleError("trace: expected ACTION");
        {
            std::istringstream as(blocks[pos].header);
            std::string kw;
            std::string what;
            as >> kw >> what;
            if (what == "delete-edge")
            {
                int u = 0;
                int v = 0;
                if (!(as >> u >> v))
                    throw TangleError("trace: delete-edge needs two vertices");
                step.kind = StepKind::delete_edge;
                step.edge = Edge(u, v);
            }
            else if (what == "suppress-vertex")
            {
                if (!(as >> step.vertex))
                    throw TangleError("trace: suppress-vertex needs a vertex");
                step.kind = StepKind::suppress_vertex;
            }
            else if (what == "take-component")
            {
                step.kind = StepKind::take_component;
                int v = 0;
                while (as >> v)
                    step.component.insert(v);
                if (!as.eof())
                    throw TangleError("trace: take-component needs vertex labels");
            }
            else
            {
                throw TangleError("trace: unknown action '" + what + "'");
            }
        }
        ++pos;
        take_graph_and_tangle(step.graph, step.tangle);
        trace.steps.push_back(std::move(step));
    }
    if (!terminal)
        throw TangleError("trace: missing TERMINAL line");
    if ((terminal->first != 0) != trace.terminal_connected() || terminal->second != trace.terminal_edges())
        throw TangleError("trace: TERMINAL line disagrees with the last graph");
    return trace;
}

} // namespace tangles

#endif // TANGLES_TRACE_HPP_INCLUDED
