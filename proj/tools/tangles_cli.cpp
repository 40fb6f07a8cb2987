#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tangles/generate.hpp"
#include "tangles/inducing.hpp"
#include "tangles/pipeline.hpp"
#include "tangles/rainbow_cloud.hpp"
#include "tangles/tangle.hpp"

namespace
{

using namespace tangles;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

/// Bad input files; reported with exit code 2.
struct InputError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Graph load_graph(const std::string& path)
{
    try
    {
        return parse_edge_list(slurp(path));
    }
    catch (const TangleError& e)
    {
        throw InputError(path + ": " + e.what());
    }
}

/// The tangle from a file, or the index-th k-tangle of g.
Tangle pick_tangle(const Graph& g, int k, const std::string& tangle_file, std::size_t index)
{
    if (!tangle_file.empty())
    {
        Tangle t;
        try
        {
            t = parse_tangle(slurp(tangle_file), g);
        }
        catch (const TangleError& e)
        {
            throw InputError(tangle_file + ": " + e.what());
        }
        if (k != 0 && t.k() != k)
            throw InputError("tangle order differs from --k");
        return t;
    }
    if (k < 1)
        throw InputError("give --k or --tangle");
    auto ts = enumerate_tangles(g, k);
    if (index >= ts.size())
        throw TangleError("graph has " + std::to_string(ts.size()) + " tangles of order " + std::to_string(k) +
                          ", index " + std::to_string(index) + " requested");
    return ts[index];
}

void write_weights(std::ostream& out, const WeightFunction& w)
{
    for (const auto& [v, x] : w.weights)
        out << v << ' ' << x << '\n';
}

WeightFunction read_weights(const std::string& path)
{
    WeightFunction w;
    std::istringstream in(slurp(path));
    std::string line;
    while (std::getline(in, line))
    {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        long long v = 0;
        long long x = 0;
        if (!(ls >> v))
            continue;
        if (!(ls >> x) || v < 0 || v >= kMaxVertices || x < 0)
            throw InputError(path + ": weight lines are 'vertex weight'");
        w.weights[static_cast<int>(v)] = x;
    }
    return w;
}

void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-")
    {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write " + path);
    out << text;
}

int run_tangles(const std::string& graph_file, int k, bool json)
{
    Graph g = load_graph(graph_file);
    auto ts = enumerate_tangles(g, k);
    if (json)
    {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& t : ts)
            arr.push_back(tangle_to_json(t));
        std::cout << nlohmann::json{{"k", k}, {"count", ts.size()}, {"tangles", arr}}.dump(2) << '\n';
        return kOk;
    }
    std::cout << "tangles " << ts.size() << '\n';
    for (std::size_t i = 0; i < ts.size(); ++i)
        std::cout << "\n# tangle " << i << '\n' << format_tangle(ts[i]);
    return kOk;
}

int run_verify(const std::string& graph_file, const std::string& tangle_file)
{
    Graph g = load_graph(graph_file);
    Tangle t = pick_tangle(g, 0, tangle_file, 0);
    const bool ok = is_tangle(g, t);
    const AxiomReport ax = check_axioms(t, g);
    std::cout << "tangle " << (ok ? "yes" : "no") << '\n'
              << "consistent " << (ax.consistent ? "yes" : "no") << '\n'
              << "regular " << (ax.regular ? "yes" : "no") << '\n'
              << "profile " << (ax.profile ? "yes" : "no") << '\n';
    return ok ? kOk : kViolation;
}

int run_reduce(const std::string& graph_file, int k, const std::string& tangle_file, std::size_t index,
               const std::string& rc_file, bool relaxed, const std::string& out)
{
    Graph g = load_graph(graph_file);
    Tangle t = pick_tangle(g, k, tangle_file, index);
    ReduceConfig cfg;
    if (!rc_file.empty())
    {
        try
        {
            cfg.rc = parse_rc(slurp(rc_file)).rc;
        }
        catch (const TangleError& e)
        {
            throw InputError(rc_file + ": " + e.what());
        }
        cfg.use_rc = true;
        cfg.rc_options.relaxed = relaxed;
    }
    ReductionTrace trace = reduce(g, t, cfg);
    emit(out, format_trace(trace));
    if (!out.empty() && out != "-")
        std::cout << "steps " << trace.steps.size() << '\n'
                  << "terminal connected " << (trace.terminal_connected() ? 1 : 0) << " edges "
                  << trace.terminal_edges() << '\n';
    return kOk;
}

int run_induce(const std::string& graph_file, int k, const std::string& tangle_file, std::size_t index,
               int max_size, long long budget)
{
    Graph g = load_graph(graph_file);
    Tangle t = pick_tangle(g, k, tangle_file, index);
    if (max_size < 0)
        max_size = g.vertices().size();
    if (budget < 0)
        budget = 4LL * g.vertices().size();
    auto x = find_inducing_set(g, t, max_size);
    auto w = find_inducing_weights(g, t, budget);
    std::cout << "set";
    if (x)
        x->for_each([](int v) { std::cout << ' ' << v; });
    else
        std::cout << " none";
    std::cout << '\n';
    if (w)
    {
        std::cout << "weights total " << w->total() << '\n';
        write_weights(std::cout, *w);
    }
    else
    {
        std::cout << "weights none\n";
    }
    return x && w ? kOk : kViolation;
}

ReductionTrace load_trace(const std::string& path)
{
    try
    {
        return parse_trace(slurp(path));
    }
    catch (const TangleError& e)
    {
        throw InputError(path + ": " + e.what());
    }
}

int run_transfer(const std::string& trace_file, const std::string& weights_file, long long budget)
{
    ReductionTrace trace = load_trace(trace_file);
    if (auto bad = first_invalid_step(trace))
    {
        std::cout << "invalid step " << *bad << '\n';
        return kViolation;
    }
    WeightFunction w;
    if (!weights_file.empty())
    {
        w = read_weights(weights_file);
    }
    else
    {
        if (budget < 0)
            budget = 4LL * trace.terminal_graph().vertices().size();
        auto found = find_inducing_weights(trace.terminal_graph(), trace.terminal_tangle(), budget);
        if (!found)
        {
            std::cout << "no inducing weights within budget " << budget << '\n';
            return kViolation;
        }
        w = *found;
    }
    WeightFunction lifted;
    try
    {
        lifted = transfer_theorem1(trace, w);
    }
    catch (const TangleError& e)
    {
        std::cout << "transfer failed: " << e.what() << '\n';
        return kViolation;
    }
    const bool ok = induces_weight(trace.initial, trace.initial_tangle, lifted);
    std::cout << "induces " << (ok ? "yes" : "no") << '\n' << "total " << lifted.total() << '\n';
    write_weights(std::cout, lifted);
    return ok ? kOk : kViolation;
}

int run_witness(const std::string& trace_file)
{
    ReductionTrace trace = load_trace(trace_file);
    if (auto bad = first_invalid_step(trace))
    {
        std::cout << "invalid step " << *bad << '\n';
        return kViolation;
    }
    if (!trace.terminal_connected())
    {
        std::cout << "terminal graph is not connected\n";
        return kViolation;
    }
    Graph h = witness_subgraph(trace);
    const bool ok = witnesses(trace.initial, trace.initial_tangle, h);
    std::cout << "witness " << (ok ? "yes" : "no") << '\n'
              << "vertices " << h.vertices().size() << " edges " << h.edges().size() << '\n';
    write_edge_list(std::cout, h);
    return ok ? kOk : kViolation;
}

struct P11Args
{
    int k = 3;
    int max_n = 6;
    int max_set = -1;
    std::string stream;
    std::string dir;
    unsigned workers = 1;
    std::string checkpoint;
    std::string summary;
    std::string table;
};

int run_p11(const P11Args& a)
{
    std::vector<std::string> lines;
    std::size_t too_big = 0;
    auto keep = [&](const std::string& g6) {
        try
        {
            if (parse_graph6(g6).vertices().size() > a.max_n)
            {
                ++too_big;
                return;
            }
        }
        catch (const TangleError&)
        {
            // reported by the batch as malformed
        }
        lines.push_back(g6);
    };
    if (!a.stream.empty())
    {
        std::istringstream in(slurp(a.stream));
        std::string line;
        while (std::getline(in, line))
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                keep(line);
    }
    else if (!a.dir.empty())
    {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(a.dir))
            if (entry.is_regular_file())
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files)
        {
            try
            {
                keep(to_graph6(parse_edge_list(slurp(f.string()))));
            }
            catch (const TangleError&)
            {
                lines.push_back("?" + f.filename().string());
            }
        }
    }
    else
    {
        for (int n = 1; n <= a.max_n; ++n)
            for (const auto& g : all_graphs(n, true))
                lines.push_back(to_graph6(g));
    }
    P11Options opts;
    opts.workers = a.workers;
    opts.checkpoint = a.checkpoint;
    const int max_set = a.max_set < 0 ? a.max_n : a.max_set;
    P11Report rep = verify_p11_batch(lines, a.k, max_set, opts);
    std::ostringstream table;
    write_report_table(table, rep);
    emit(a.table, table.str());
    nlohmann::json summary = report_summary(rep);
    summary["skipped_over_max_n"] = too_big;
    if (!a.summary.empty())
        emit(a.summary, summary.dump(2) + "\n");
    std::cerr << "graphs " << rep.graphs() << " tangles " << rep.tangles() << " failures " << rep.failures()
              << " malformed " << rep.malformed.size() << '\n';
    return rep.failures() == 0 ? kOk : kViolation;
}

struct RcArgs
{
    std::string graph;
    std::string rc;
    int k = 1;
    bool relaxed = false;
    std::string tangle;
    int length = 18;
    int ell = 1;
    int sun = 1;
    int cloud = 3;
    std::string out_graph;
    std::string out_rc;
};

RCDecomposition load_rc(const std::string& path)
{
    try
    {
        return parse_rc(slurp(path)).rc;
    }
    catch (const TangleError& e)
    {
        throw InputError(path + ": " + e.what());
    }
}

int run_rc_validate(const RcArgs& a)
{
    Graph g = load_graph(a.graph);
    RCReport r = validate_rc(g, load_rc(a.rc));
    std::cout << "cover " << r.cover << "\nsun " << r.sun << "\nrc1 " << r.rc1 << "\nrc2 " << r.rc2 << "\nrc3 "
              << r.rc3 << "\nrc4 " << r.rc4 << "\nlinear " << r.linear.rainbow() << "\nvalid " << r.all() << '\n';
    return r.all() ? kOk : kViolation;
}

int run_rc_synth(const RcArgs& a)
{
    SynthRCOptions o;
    o.length = a.length;
    o.ell = a.ell;
    o.sun = a.sun;
    o.cloud = a.cloud;
    SynthRC s;
    try
    {
        s = synth_rc(o);
    }
    catch (const TangleError& e)
    {
        throw InputError(e.what());
    }
    std::ostringstream g;
    write_edge_list(g, s.graph);
    std::ostringstream r;
    write_rc(r, s.rc);
    emit(a.out_graph, g.str());
    emit(a.out_rc, r.str());
    return kOk;
}

int run_rc_extend(const RcArgs& a)
{
    Graph g = load_graph(a.graph);
    RCDecomposition rc = load_rc(a.rc);
    Tangle t = pick_tangle(g, a.k, a.tangle, 0);
    ExtensionOptions opts;
    opts.relaxed = a.relaxed;
    try
    {
        EdgeChoice c = choose_edge(g, rc, t);
        RCExtension ext = extend_after_deletion(g, t, c, opts);
        const bool ok = is_tangle(ext.result.graph, ext.result.tangle) && extends(t, ext.result.tangle);
        std::cout << "edge " << c.edge.u << ' ' << c.edge.v << '\n'
                  << "forced " << ext.forced << " by-cloud " << ext.by_cloud << '\n'
                  << "extends " << (ok ? "yes" : "no") << '\n'
                  << format_tangle(ext.result.tangle);
        return ok ? kOk : kViolation;
    }
    catch (const TangleError& e)
    {
        std::cout << "extension failed: " << e.what() << '\n';
        return kViolation;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Graph tangles: enumeration, survival, reduction and inducing weights"};
    app.require_subcommand(1);

    std::string graph_file;
    std::string tangle_file;
    std::string trace_file;
    std::string weights_file;
    std::string out_file;
    std::string rc_file;
    int k = 0;
    std::size_t index = 0;
    bool json = false;
    bool relaxed = false;
    int max_size = -1;
    long long budget = -1;

    auto* tangles_cmd = app.add_subcommand("tangles", "list the k-tangles of a graph");
    tangles_cmd->add_option("graph", graph_file, "edge-list file")->required();
    tangles_cmd->add_option("--k", k, "tangle order")->required()->check(CLI::Range(1, 64));
    tangles_cmd->add_flag("--json", json, "JSON output");

    auto* verify_cmd = app.add_subcommand("verify", "check that a tangle file describes a tangle");
    verify_cmd->add_option("graph", graph_file, "edge-list file")->required();
    verify_cmd->add_option("--tangle", tangle_file, "tangle file (text or JSON)")->required();

    auto* reduce_cmd = app.add_subcommand("reduce", "reduce a graph while a tangle survives");
    reduce_cmd->add_option("graph", graph_file, "edge-list file")->required();
    reduce_cmd->add_option("--k", k, "tangle order")->check(CLI::Range(1, 64));
    reduce_cmd->add_option("--tangle", tangle_file, "tangle file");
    reduce_cmd->add_option("--index", index, "which k-tangle when no file is given");
    reduce_cmd->add_option("--rc", rc_file, "RC-decomposition file enabling the rainbow-cloud step");
    reduce_cmd->add_flag("--relaxed", relaxed, "skip the length and degree checks of the rainbow-cloud step");
    reduce_cmd->add_option("--out", out_file, "trace output file");

    auto* induce_cmd = app.add_subcommand("induce", "minimum inducing set and weight function");
    induce_cmd->add_option("graph", graph_file, "edge-list file")->required();
    induce_cmd->add_option("--k", k, "tangle order")->check(CLI::Range(1, 64));
    induce_cmd->add_option("--tangle", tangle_file, "tangle file");
    induce_cmd->add_option("--index", index, "which k-tangle when no file is given");
    induce_cmd->add_option("--max-size", max_size, "largest set to try");
    induce_cmd->add_option("--budget", budget, "largest total weight to try");

    auto* transfer_cmd = app.add_subcommand("transfer", "extend terminal weights by zero along a trace");
    transfer_cmd->add_option("trace", trace_file, "trace file")->required();
    transfer_cmd->add_option("--weights", weights_file, "terminal weights, 'vertex weight' per line");
    transfer_cmd->add_option("--budget", budget, "total weight budget when searching");

    auto* witness_cmd = app.add_subcommand("witness", "witnessing subgraph from a trace");
    witness_cmd->add_option("trace", trace_file, "trace file")->required();

    P11Args p11;
    auto* p11_cmd = app.add_subcommand("p11", "check that every k-tangle of small graphs is induced by a set");
    p11_cmd->add_option("--k", p11.k, "tangle order")->check(CLI::Range(1, 64));
    p11_cmd->add_option("--max-n", p11.max_n, "largest vertex count")->check(CLI::Range(1, 10));
    p11_cmd->add_option("--max-set", p11.max_set, "largest inducing set (default: max-n)");
    p11_cmd->add_option("--stream", p11.stream, "graph6 file");
    p11_cmd->add_option("--dir", p11.dir, "directory of edge-list files");
    p11_cmd->add_option("--workers", p11.workers, "worker threads")->check(CLI::Range(1U, 256U));
    p11_cmd->add_option("--checkpoint", p11.checkpoint, "resumable progress file");
    p11_cmd->add_option("--summary", p11.summary, "JSON summary file");
    p11_cmd->add_option("--table", p11.table, "table output file (default stdout)");

    RcArgs rc;
    auto* rc_cmd = app.add_subcommand("rc", "rainbow-cloud decompositions");
    rc_cmd->require_subcommand(1);
    auto* rc_validate = rc_cmd->add_subcommand("validate", "check an RC-decomposition");
    rc_validate->add_option("graph", rc.graph, "edge-list file")->required();
    rc_validate->add_option("--rc", rc.rc, "RC-decomposition file")->required();
    auto* rc_synth = rc_cmd->add_subcommand("synth", "write a synthetic graph and its decomposition");
    rc_synth->add_option("--length", rc.length, "number of bags minus one");
    rc_synth->add_option("--ell", rc.ell, "adhesion");
    rc_synth->add_option("--sun", rc.sun, "sun size");
    rc_synth->add_option("--cloud", rc.cloud, "cloud clique size");
    rc_synth->add_option("--out-graph", rc.out_graph, "edge-list output");
    rc_synth->add_option("--out-rc", rc.out_rc, "decomposition output");
    auto* rc_extend = rc_cmd->add_subcommand("extend", "delete a rainbow edge and extend the tangle");
    rc_extend->add_option("graph", rc.graph, "edge-list file")->required();
    rc_extend->add_option("--rc", rc.rc, "RC-decomposition file")->required();
    rc_extend->add_option("--k", rc.k, "tangle order")->check(CLI::Range(1, 64));
    rc_extend->add_option("--tangle", rc.tangle, "tangle file");
    rc_extend->add_flag("--relaxed", rc.relaxed, "skip the length and degree checks");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        (void)app.exit(e);
        return kUsage;
    }

    try
    {
        if (*tangles_cmd)
            return run_tangles(graph_file, k, json);
        if (*verify_cmd)
            return run_verify(graph_file, tangle_file);
        if (*reduce_cmd)
            return run_reduce(graph_file, k, tangle_file, index, rc_file, relaxed, out_file);
        if (*induce_cmd)
            return run_induce(graph_file, k, tangle_file, index, max_size, budget);
        if (*transfer_cmd)
            return run_transfer(trace_file, weights_file, budget);
        if (*witness_cmd)
            return run_witness(trace_file);
        if (*p11_cmd)
            return run_p11(p11);
        if (*rc_validate)
            return run_rc_validate(rc);
        if (*rc_synth)
            return run_rc_synth(rc);
        if (*rc_extend)
            return run_rc_extend(rc);
    }
    catch (const InputError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    catch (const TangleError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kViolation;
    }
    return kUsage;
}
