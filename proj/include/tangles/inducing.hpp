#ifndef TANGLES_INDUCING_HPP_INCLUDED
#define TANGLES_INDUCING_HPP_INCLUDED

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "tangles/graph.hpp"
#include "tangles/tangle.hpp"
#include "tangles/trace.hpp"

namespace tangles
{

/// A map V(G) -> N; every vertex of the domain has an entry.
struct WeightFunction
{
    std::map<int, std::int64_t> weights;

    static WeightFunction zero(const VertexSet& domain)
    {
        WeightFunction w;
        domain.for_each([&](int v) { w.weights[v] = 0; });
        return w;
    }

    static WeightFunction indicator(const VertexSet& domain, const VertexSet& x)
    {
        if (!x.subset_of(domain))
            throw TangleError("indicator: set is not inside the domain");
        WeightFunction w = zero(domain);
        x.for_each([&](int v) { w.weights[v] = 1; });
        return w;
    }

    [[nodiscard]] std::int64_t weight(int v) const
    {
        auto it = weights.find(v);
        return it == weights.end() ? 0 : it->second;
    }

    [[nodiscard]] std::int64_t of(const VertexSet& s) const
    {
        std::int64_t sum = 0;
        s.for_each([&](int v) { sum += weight(v); });
        return sum;
    }

    [[nodiscard]] std::int64_t total() const
    {
        std::int64_t sum = 0;
        for (const auto& [v, x] : weights)
            sum += x;
        return sum;
    }

    [[nodiscard]] VertexSet domain() const
    {
        VertexSet out;
        for (const auto& [v, x] : weights)
            out.insert(v);
        return out;
    }

    [[nodiscard]] VertexSet support() const
    {
        VertexSet out;
        for (const auto& [v, x] : weights)
            if (x != 0)
                out.insert(v);
        return out;
    }

    bool operator==(const WeightFunction&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, const WeightFunction& w)
{
    os << '{';
    bool first = true;
    for (const auto& [v, x] : w.weights)
    {
        os << (first ? "" : ", ") << v << ':' << x;
        first = false;
    }
    return os << '}';
}

/// w(A) < w(B) for every (A,B) in t.
inline bool induces_weight(const Graph& g, const Tangle& t, const WeightFunction& w)
{
    (void)g;
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        Separation s = t.oriented(i);
        if (w.of(s.small) >= w.of(s.big))
            return false;
    }
    return true;
}

/// |X ∩ A| < |X ∩ B| for every (A,B) in t.
inline bool induces_set(const Graph& g, const Tangle& t, const VertexSet& x)
{
    if (!x.subset_of(g.vertices()))
        throw TangleError("induces_set: set is not inside the graph");
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        Separation s = t.oriented(i);
        if ((x & s.small).size() >= (x & s.big).size())
            return false;
    }
    return true;
}

namespace detail
{

/// w(B \ A) - w(A \ B) >= 1 per member, deduplicated, over vertex
/// positions 0..n-1 in label order.
struct InducingSystem
{
    std::vector<int> labels;
    std::vector<std::vector<int>> rows;

    InducingSystem(const Graph& g, const Tangle& t)
    {
        labels = g.vertices().to_vector();
        std::vector<int> pos(kMaxVertices, -1);
        for (std::size_t i = 0; i < labels.size(); ++i)
            pos[static_cast<std::size_t>(labels[i])] = static_cast<int>(i);
        std::set<std::vector<int>> seen;
        for (std::size_t i = 0; i < t.size(); ++i)
        {
            Separation s = t.oriented(i);
            std::vector<int> row(labels.size(), 0);
            s.strict_big().for_each([&](int v) { row[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])] = 1; });
            s.strict_small().for_each(
                [&](int v) { row[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])] = -1; });
            if (seen.insert(row).second)
                rows.push_back(std::move(row));
        }
    }

    [[nodiscard]] std::size_t n() const { return labels.size(); }

    /// plus_after[c][i]: some position >= i has coefficient +1 in row c.
    [[nodiscard]] std::vector<std::vector<std::uint8_t>> plus_after() const
    {
        std::vector<std::vector<std::uint8_t>> out(rows.size(), std::vector<std::uint8_t>(n() + 1, 0));
        for (std::size_t c = 0; c < rows.size(); ++c)
            for (std::size_t i = n(); i-- > 0;)
                out[c][i] = static_cast<std::uint8_t>(out[c][i + 1] || rows[c][i] == 1);
        return out;
    }
};

using Rational = boost::multiprecision::cpp_rational;

/// Optimum of min sum(w) s.t. rows·w >= 1, w >= 0 over the rationals,
/// computed on the dual max sum(y) s.t. rows^T y <= 1, y >= 0 by the
/// simplex method with Bland's rule. nullopt when the primal is infeasible.
inline std::optional<Rational> relaxation_bound(const InducingSystem& sys)
{
    const std::size_t n = sys.n();
    const std::size_t m = sys.rows.size();
    if (m == 0)
        return Rational(0);
    const std::size_t cols = m + n;
    // tableau rows: one per vertex constraint; last column holds the rhs
    std::vector<std::vector<Rational>> tab(n, std::vector<Rational>(cols + 1));
    for (std::size_t v = 0; v < n; ++v)
    {
        for (std::size_t c = 0; c < m; ++c)
            tab[v][c] = sys.rows[c][v];
        tab[v][m + v] = 1;
        tab[v][cols] = 1;
    }
    std::vector<Rational> obj(cols + 1);
    for (std::size_t c = 0; c < m; ++c)
        obj[c] = 1;
    std::vector<std::size_t> basis(n);
    for (std::size_t v = 0; v < n; ++v)
        basis[v] = m + v;
    while (true)
    {
        std::size_t enter = cols;
        for (std::size_t c = 0; c < cols; ++c)
            if (obj[c] > 0)
            {
                enter = c;
                break;
            }
        if (enter == cols)
            break;
        std::size_t leave = n;
        Rational best;
        for (std::size_t r = 0; r < n; ++r)
        {
            if (tab[r][enter] <= 0)
                continue;
            Rational ratio = tab[r][cols] / tab[r][enter];
            if (leave == n || ratio < best || (ratio == best && basis[r] < basis[leave]))
            {
                leave = r;
                best = ratio;
            }
        }
        if (leave == n)
            return std::nullopt;
        const Rational piv = tab[leave][enter];
        for (auto& x : tab[leave])
            x /= piv;
        for (std::size_t r = 0; r < n; ++r)
        {
            if (r == leave || tab[r][enter] == 0)
                continue;
            const Rational f = tab[r][enter];
            for (std::size_t c = 0; c <= cols; ++c)
                tab[r][c] -= f * tab[leave][c];
        }
        const Rational f = obj[enter];
        for (std::size_t c = 0; c <= cols; ++c)
            obj[c] -= f * tab[leave][c];
        basis[leave] = enter;
    }
    return -obj[cols];
}

/// Smallest integer >= q.
inline std::int64_t ceil_of(const Rational& q)
{
    using boost::multiprecision::cpp_int;
    cpp_int num = boost::multiprecision::numerator(q);
    cpp_int den = boost::multiprecision::denominator(q);
    cpp_int c = num / den;
    if (c * den < num)
        c += 1;
    return static_cast<std::int64_t>(c);
}

} // namespace detail

/// Smallest inducing set of size <= max_size, lexicographically least among
/// those; subsets are built in label order and cut off as soon as some
/// member can no longer be outvoted.
inline std::optional<VertexSet> find_inducing_set(const Graph& g, const Tangle& t, int max_size)
{
    detail::InducingSystem sys(g, t);
    const std::size_t n = sys.n();
    const std::size_t m = sys.rows.size();
    const int limit = std::min<int>(max_size, static_cast<int>(n));
    std::vector<std::size_t> chosen;
    std::vector<int> cur(m, 0);
    // plus_count[c][i]: positions >= i with coefficient +1 in row c
    std::vector<std::vector<int>> plus_count(m, std::vector<int>(n + 1, 0));
    for (std::size_t c = 0; c < m; ++c)
        for (std::size_t i = n; i-- > 0;)
            plus_count[c][i] = plus_count[c][i + 1] + (sys.rows[c][i] == 1 ? 1 : 0);

    std::function<bool(std::size_t, int)> dfs = [&](std::size_t from, int slots) -> bool {
        for (std::size_t c = 0; c < m; ++c)
            if (cur[c] + std::min(slots, plus_count[c][from]) < 1)
                return false;
        if (slots == 0)
            return true;
        for (std::size_t i = from; i + static_cast<std::size_t>(slots) <= n; ++i)
        {
            chosen.push_back(i);
            for (std::size_t c = 0; c < m; ++c)
                cur[c] += sys.rows[c][i];
            if (dfs(i + 1, slots - 1))
                return true;
            for (std::size_t c = 0; c < m; ++c)
                cur[c] -= sys.rows[c][i];
            chosen.pop_back();
        }
        return false;
    };
    for (int size = 0; size <= limit; ++size)
    {
        chosen.clear();
        std::fill(cur.begin(), cur.end(), 0);
        if (dfs(0, size))
        {
            VertexSet out;
            for (std::size_t i : chosen)
                out.insert(sys.labels[i]);
            return out;
        }
    }
    return std::nullopt;
}

/// A weight function of minimum total weight <= budget inducing t: the
/// rational relaxation gives the first total to try, then each total is
/// searched exactly. Among minimum ones the weight vector in label order is
/// lexicographically least.
inline std::optional<WeightFunction> find_inducing_weights(const Graph& g, const Tangle& t, std::int64_t budget)
{
    detail::InducingSystem sys(g, t);
    const std::size_t n = sys.n();
    const std::size_t m = sys.rows.size();
    auto bound = detail::relaxation_bound(sys);
    if (!bound)
        return std::nullopt;
    const auto plus_after = sys.plus_after();
    std::vector<std::int64_t> w(n, 0);
    std::vector<std::int64_t> cur(m, 0);

    std::function<bool(std::size_t, std::int64_t)> dfs = [&](std::size_t i, std::int64_t rest) -> bool {
        for (std::size_t c = 0; c < m; ++c)
            if (cur[c] + (plus_after[c][i] ? rest : 0) < 1)
                return false;
        if (i == n)
            return rest == 0;
        const std::int64_t lo = i + 1 == n ? rest : 0;
        for (std::int64_t x = lo; x <= rest; ++x)
        {
            w[i] = x;
            for (std::size_t c = 0; c < m; ++c)
                cur[c] += sys.rows[c][i] * x;
            bool ok = dfs(i + 1, rest - x);
            for (std::size_t c = 0; c < m; ++c)
                cur[c] -= sys.rows[c][i] * x;
            if (ok)
                return true;
        }
        w[i] = 0;
        return false;
    };
    for (std::int64_t total = std::max<std::int64_t>(0, detail::ceil_of(*bound)); total <= budget; ++total)
    {
        std::fill(cur.begin(), cur.end(), 0);
        if (dfs(0, total))
        {
            WeightFunction out;
            for (std::size_t i = 0; i < n; ++i)
                out.weights[sys.labels[i]] = w[i];
            return out;
        }
    }
    return std::nullopt;
}

/// Carry a weight function on the terminal graph back to the initial graph,
/// extending by zero at every step and checking that each intermediate
/// function induces that step's tangle.
inline WeightFunction transfer_by_zero(const ReductionTrace& trace, const WeightFunction& w_final)
{
    const std::size_t m = trace.steps.size();
    if (w_final.domain() != trace.terminal_graph().vertices())
        throw TangleError("transfer_by_zero: weight function is not on the terminal graph");
    if (!induces_weight(trace.terminal_graph(), trace.terminal_tangle(), w_final))
        throw TangleError("transfer_by_zero: weight function does not induce the terminal tangle");
    WeightFunction w = w_final;
    for (std::size_t i = m; i-- > 0;)
    {
        const Graph& before = trace.graph_after(i);
        for (int v : (before.vertices() - w.domain()).to_vector())
            w.weights[v] = 0;
        if (!induces_weight(before, trace.tangle_after(i), w))
            throw TangleError("transfer_by_zero: extension fails to induce the tangle before step " +
                              std::to_string(i + 1));
    }
    return w;
}

// ---------------------------------------------------------------------------
// Batch verification over a graph stream

struct P11Row
{
    std::size_t id = 0;
    std::string graph6;
    std::size_t tangles = 0;
    /// Largest minimum inducing-set size over the graph's tangles; -1 if none.
    int max_min_set = -1;
    /// Largest minimum total inducing weight; -1 if none.
    std::int64_t max_min_weight = -1;
    std::size_t failures = 0;
};

struct P11Counterexample
{
    std::size_t id = 0;
    std::string graph6;
    std::string tangle;
};

struct P11Report
{
    int k = 0;
    int max_set_size = 0;
    std::vector<P11Row> rows;
    std::vector<std::pair<std::size_t, std::string>> malformed;
    std::vector<P11Counterexample> counterexamples;

    [[nodiscard]] std::size_t graphs() const { return rows.size(); }

    [[nodiscard]] std::size_t tangles() const
    {
        std::size_t n = 0;
        for (const auto& r : rows)
            n += r.tangles;
        return n;
    }

    [[nodiscard]] std::size_t failures() const
    {
        std::size_t n = 0;
        for (const auto& r : rows)
            n += r.failures;
        return n;
    }

    [[nodiscard]] int max_min_set() const
    {
        int x = -1;
        for (const auto& r : rows)
            x = std::max(x, r.max_min_set);
        return x;
    }

    [[nodiscard]] std::int64_t max_min_weight() const
    {
        std::int64_t x = -1;
        for (const auto& r : rows)
            x = std::max(x, r.max_min_weight);
        return x;
    }

    /// Associative merge; rows stay sorted by id.
    void merge(const P11Report& other)
    {
        rows.insert(rows.end(), other.rows.begin(), other.rows.end());
        malformed.insert(malformed.end(), other.malformed.begin(), other.malformed.end());
        counterexamples.insert(counterexamples.end(), other.counterexamples.begin(), other.counterexamples.end());
        std::sort(rows.begin(), rows.end(), [](const P11Row& a, const P11Row& b) { return a.id < b.id; });
        std::sort(malformed.begin(), malformed.end());
        std::sort(counterexamples.begin(), counterexamples.end(),
                  [](const P11Counterexample& a, const P11Counterexample& b) { return a.id < b.id; });
    }
};

inline nlohmann::json row_to_json(const P11Row& r)
{
    return {{"id", r.id},           {"graph6", r.graph6},
            {"tangles", r.tangles}, {"max_min_set", r.max_min_set},
            {"max_min_weight", r.max_min_weight}, {"failures", r.failures}};
}

inline P11Row row_from_json(const nlohmann::json& j)
{
    P11Row r;
    r.id = j.at("id").get<std::size_t>();
    r.graph6 = j.at("graph6").get<std::string>();
    r.tangles = j.at("tangles").get<std::size_t>();
    r.max_min_set = j.at("max_min_set").get<int>();
    r.max_min_weight = j.at("max_min_weight").get<std::int64_t>();
    r.failures = j.at("failures").get<std::size_t>();
    return r;
}

inline nlohmann::json report_summary(const P11Report& rep)
{
    nlohmann::json cx = nlohmann::json::array();
    for (const auto& c : rep.counterexamples)
        cx.push_back({{"id", c.id}, {"graph6", c.graph6}, {"tangle", c.tangle}});
    nlohmann::json bad = nlohmann::json::array();
    for (const auto& [line, msg] : rep.malformed)
        bad.push_back({{"line", line}, {"error", msg}});
    return {{"k", rep.k},
            {"max_set_size", rep.max_set_size},
            {"graphs", rep.graphs()},
            {"tangles", rep.tangles()},
            {"failures", rep.failures()},
            {"max_min_set", rep.max_min_set()},
            {"max_min_weight", rep.max_min_weight()},
            {"malformed", bad},
            {"counterexamples", cx}};
}

/// Table: one line per graph, then totals.
inline void write_report_table(std::ostream& out, const P11Report& rep)
{
    out << "id\tgraph6\ttangles\tmax_min_set\tmax_min_weight\tfailures\n";
    for (const auto& r : rep.rows)
        out << r.id << '\t' << r.graph6 << '\t' << r.tangles << '\t' << r.max_min_set << '\t' << r.max_min_weight
            << '\t' << r.failures << '\n';
    out << "total\t-\t" << rep.tangles() << '\t' << rep.max_min_set() << '\t' << rep.max_min_weight() << '\t'
        << rep.failures() << '\n';
}

struct P11Options
{
    /// Append-only JSON-lines file of finished rows; rows already present
    /// are not recomputed.
    std::string checkpoint;
    unsigned workers = 1;
};

/// Row and counterexamples for one connected graph.
inline std::pair<P11Row, std::vector<P11Counterexample>> verify_p11_graph(std::size_t id, const Graph& g, int k,
                                                                           int max_set_size)
{
    P11Row row;
    row.id = id;
    row.graph6 = to_graph6(g);
    std::vector<P11Counterexample> cx;
    auto tangles = enumerate_tangles(g, k);
    row.tangles = tangles.size();
    for (const auto& t : tangles)
    {
        auto x = find_inducing_set(g, t, max_set_size);
        if (!x)
        {
            ++row.failures;
            cx.push_back({id, row.graph6, format_tangle(t)});
        }
        else
        {
            row.max_min_set = std::max(row.max_min_set, x->size());
        }
        const std::int64_t budget = x ? x->size() : static_cast<std::int64_t>(g.vertices().size()) * 8;
        auto w = find_inducing_weights(g, t, budget);
        if (w)
            row.max_min_weight = std::max(row.max_min_weight, w->total());
    }
    return {row, cx};
}

/// Check every k-tangle of every graph in a graph6 stream for an inducing
/// set of size <= max_set_size. Malformed or disconnected entries are
/// reported and skipped; ids are 0-based line numbers among non-blank lines.
inline P11Report verify_p11_batch(const std::vector<std::string>& stream, int k, int max_set_size,
                                  const P11Options& opts = {})
{
    P11Report rep;
    rep.k = k;
    rep.max_set_size = max_set_size;
    std::vector<std::pair<std::size_t, Graph>> todo;
    std::size_t id = 0;
    for (const auto& raw : stream)
    {
        std::string line = raw;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty())
            continue;
        const std::size_t this_id = id++;
        try
        {
            Graph g = parse_graph6(line);
            if (!g.is_connected())
            {
                rep.malformed.emplace_back(this_id, "graph is not connected");
                continue;
            }
            todo.emplace_back(this_id, g);
        }
        catch (const TangleError& e)
        {
            rep.malformed.emplace_back(this_id, e.what());
        }
    }

    std::set<std::size_t> done;
    if (!opts.checkpoint.empty() && std::filesystem::exists(opts.checkpoint))
    {
        std::ifstream in(opts.checkpoint);
        std::string line;
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            try
            {
                auto j = nlohmann::json::parse(line);
                P11Row r = row_from_json(j.at("row"));
                for (const auto& c : j.at("counterexamples"))
                    rep.counterexamples.push_back(
                        {r.id, c.at("graph6").get<std::string>(), c.at("tangle").get<std::string>()});
                done.insert(r.id);
                rep.rows.push_back(r);
            }
            catch (const nlohmann::json::exception&)
            {
                // a torn last line from an interrupted run is recomputed
            }
        }
    }

    std::mutex lock;
    std::ofstream ck;
    if (!opts.checkpoint.empty())
        ck.open(opts.checkpoint, std::ios::app);
    std::vector<P11Report> parts(std::max(1U, opts.workers));
    auto work = [&](std::size_t shard) {
        for (std::size_t i = shard; i < todo.size(); i += parts.size())
        {
            const auto& [gid, g] = todo[i];
            if (done.count(gid) != 0)
                continue;
            auto [row, cx] = verify_p11_graph(gid, g, k, max_set_size);
            parts[shard].rows.push_back(row);
            parts[shard].counterexamples.insert(parts[shard].counterexamples.end(), cx.begin(), cx.end());
            if (ck.is_open())
            {
                nlohmann::json cj = nlohmann::json::array();
                for (const auto& c : cx)
                    cj.push_back({{"graph6", c.graph6}, {"tangle", c.tangle}});
                std::lock_guard<std::mutex> guard(lock);
                ck << nlohmann::json{{"row", row_to_json(row)}, {"counterexamples", cj}}.dump() << '\n';
                ck.flush();
            }
        }
    };
    if (parts.size() == 1)
    {
        work(0);
    }
    else
    {
        std::vector<std::thread> pool;
        for (std::size_t s = 0; s < parts.size(); ++s)
            pool.emplace_back(work, s);
        for (auto& th : pool)
            th.join();
    }
    for (const auto& p : parts)
        rep.merge(p);
    return rep;
}

} // namespace tangles

#endif // TANGLES_INDUCING_HPP_INCLUDED
