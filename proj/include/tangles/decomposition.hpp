#ifndef TANGLES_DECOMPOSITION_HPP_INCLUDED
#define TANGLES_DECOMPOSITION_HPP_INCLUDED

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tangles/linkage.hpp"
#include "tangles/separation.hpp"

namespace tangles
{

/// Bags W_0..W_M; adhesion sets U_i = W_{i-1} ∩ W_i for i in [1, M].
struct LinearDecomposition
{
    std::vector<VertexSet> bags;

    [[nodiscard]] int length() const { return static_cast<int>(bags.size()) - 1; }

    [[nodiscard]] VertexSet adhesion_set(int i) const
    {
        if (i < 1 || i > length())
            throw TangleError("adhesion index out of range");
        return bags[static_cast<std::size_t>(i - 1)] & bags[static_cast<std::size_t>(i)];
    }

    [[nodiscard]] int adhesion() const { return length() >= 1 ? adhesion_set(1).size() : 0; }

    [[nodiscard]] VertexSet vertices() const
    {
        VertexSet out;
        for (const auto& b : bags)
            out |= b;
        return out;
    }

    /// Union of the bags W_i..W_j.
    [[nodiscard]] VertexSet span(int i, int j) const
    {
        VertexSet out;
        for (int t = std::max(i, 0); t <= std::min(j, length()); ++t)
            out |= bags[static_cast<std::size_t>(t)];
        return out;
    }

    bool operator==(const LinearDecomposition&) const = default;
};

struct LinearReport
{
    bool l1 = false;
    bool l2 = false;
    bool l3 = false;
    bool l4 = false;
    bool r1 = false;
    bool r2 = false;
    bool r3 = false;
    bool fl1 = false;
    bool fl2 = false;

    [[nodiscard]] bool linear() const { return l1 && l2 && l3 && l4; }
    [[nodiscard]] bool rainbow() const { return linear() && r1 && r2 && r3; }
};

// ---------------------------------------------------------------------------
// Windows of constant level

struct Window
{
    std::vector<std::size_t> indices;
    int level = 0;
};

namespace detail
{

inline std::optional<Window> window_search(const std::vector<int>& a, std::size_t lo, std::size_t hi, int base,
                                           int n, int m)
{
    if (base >= m || hi <= lo)
        return std::nullopt;
    std::vector<std::size_t> hits;
    for (std::size_t i = lo; i < hi; ++i)
        if (a[i] == base)
            hits.push_back(i);
    if (hits.size() >= static_cast<std::size_t>(n))
    {
        hits.resize(static_cast<std::size_t>(n));
        return Window{hits, base};
    }
    std::size_t start = lo;
    hits.push_back(hi);
    for (std::size_t cut : hits)
    {
        if (auto w = window_search(a, start, cut, base + 1, n, m))
            return w;
        start = cut + 1;
    }
    return std::nullopt;
}

} // namespace detail

/// n indices carrying the same value l with every entry between them at
/// least l. Always succeeds when |a| >= n^m.
inline std::optional<Window> monotone_window_subsequence(const std::vector<int>& a, int n, int m)
{
    if (n < 1 || m < 1)
        throw TangleError("monotone_window_subsequence needs n, m >= 1");
    for (int x : a)
        if (x < 0 || x >= m)
            throw TangleError("sequence entry out of range");
    return detail::window_search(a, 0, a.size(), 0, n, m);
}

// ---------------------------------------------------------------------------
// Chains

inline bool strictly_below(const Separation& x, const Separation& y)
{
    return x.leq(y) && !(x == y);
}

inline bool is_strict_chain(const std::vector<Separation>& chain)
{
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        if (!strictly_below(chain[i], chain[i + 1]))
            return false;
    return true;
}

/// Number of chain members of each order 0..m-1.
inline std::vector<std::size_t> order_counts(const std::vector<Separation>& chain, int m)
{
    std::vector<std::size_t> out(static_cast<std::size_t>(m), 0);
    for (const auto& s : chain)
        if (s.order() < m)
            ++out[static_cast<std::size_t>(s.order())];
    return out;
}

struct RefinedChain
{
    std::vector<Separation> chain;
    int order = 0;
    /// Order counts of the working chain before each splice and at the end.
    std::vector<std::vector<std::size_t>> measures;
    std::vector<std::size_t> lengths;
};

/// A separation of order below `level` strictly between two consecutive
/// window members, least by (order, canonical form).
inline std::optional<std::pair<Separation, std::size_t>> find_between(const SeparationSystem& lower,
                                                                      const std::vector<Separation>& window)
{
    for (const auto& s : lower.members())
    {
        for (const Separation& x : {s, s.inverse()})
        {
            for (std::size_t j = 0; j + 1 < window.size(); ++j)
                if (strictly_below(window[j], x) && strictly_below(x, window[j + 1]))
                    return std::make_pair(x, j);
            if (s.small == s.big)
                break;
        }
    }
    return std::nullopt;
}

/// A strictly increasing chain of n separations of one order l with no
/// separation of order below l strictly between consecutive members.
inline RefinedChain refine_chain(const Graph& g, std::vector<Separation> chain, int n)
{
    if (n < 1)
        throw TangleError("refine_chain needs n >= 1");
    if (chain.size() < static_cast<std::size_t>(n))
        throw TangleError("chain too short");
    if (!is_strict_chain(chain))
        throw TangleError("refine_chain: input is not strictly increasing");
    int m = 1;
    for (const auto& s : chain)
    {
        if (!s.is_separation_of(g))
            throw TangleError("refine_chain: not a separation of the graph");
        m = std::max(m, s.order() + 1);
    }
    RefinedChain out;
    std::map<int, SeparationSystem> lower;
    for (;;)
    {
        out.measures.push_back(order_counts(chain, m));
        out.lengths.push_back(chain.size());
        std::vector<int> orders;
        for (const auto& s : chain)
            orders.push_back(s.order());
        auto w = monotone_window_subsequence(orders, n, m);
        if (!w)
            throw TangleError("chain too short");
        std::vector<Separation> window;
        for (std::size_t i : w->indices)
            window.push_back(chain[i]);
        std::optional<std::pair<Separation, std::size_t>> hit;
        if (w->level > 0)
        {
            auto it = lower.find(w->level);
            if (it == lower.end())
                it = lower.emplace(w->level, enumerate_separations(g, w->level)).first;
            hit = find_between(it->second, window);
        }
        if (!hit)
        {
            out.chain = window;
            out.order = w->level;
            return out;
        }
        const Separation& x = hit->first;
        std::size_t from = w->indices[hit->second];
        std::size_t to = w->indices[hit->second + 1];
        std::vector<Separation> spliced(chain.begin(), chain.begin() + static_cast<long>(from));
        auto push = [&](const Separation& s) {
            if (spliced.empty() || !(spliced.back() == s))
                spliced.push_back(s);
        };
        for (std::size_t i = from; i <= to; ++i)
            push(infimum(chain[i], x));
        push(x);
        for (std::size_t i = from; i <= to; ++i)
            push(supremum(chain[i], x));
        for (std::size_t i = to + 1; i < chain.size(); ++i)
            push(chain[i]);
        if (!is_strict_chain(spliced))
            throw TangleError("refine_chain: splice is not strictly increasing");
        for (const auto& s : spliced)
            if (s.order() >= m)
                throw TangleError("refine_chain: splice left the separation system");
        if (spliced.size() < chain.size())
            throw TangleError("refine_chain: splice shortened the chain");
        if (!(order_counts(spliced, m) > out.measures.back()))
            throw TangleError("refine_chain: measure did not increase");
        chain = std::move(spliced);
    }
}

/// W_0 = A_1, W_i = B_i ∩ A_{i+1}, W_M = B_M, then drop an end bag contained
/// in its neighbour.
inline LinearDecomposition chain_to_linear_decomposition(const Graph& g, const std::vector<Separation>& chain)
{
    if (chain.empty())
        throw TangleError("empty chain");
    if (!is_strict_chain(chain))
        throw TangleError("chain_to_linear_decomposition: input is not strictly increasing");
    for (const auto& s : chain)
    {
        if (!s.is_separation_of(g))
            throw TangleError("chain_to_linear_decomposition: not a separation of the graph");
        if (s.order() != chain.front().order())
            throw TangleError("chain_to_linear_decomposition: orders differ");
    }
    LinearDecomposition d;
    d.bags.push_back(chain.front().small);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        d.bags.push_back(chain[i].big & chain[i + 1].small);
    d.bags.push_back(chain.back().big);
    if (d.bags.size() >= 2 && d.bags[0].subset_of(d.bags[1]))
        d.bags.erase(d.bags.begin());
    if (d.bags.size() >= 2 && d.bags.back().subset_of(d.bags[d.bags.size() - 2]))
        d.bags.pop_back();
    if (d.length() < 3)
        throw TangleError("degenerate decomposition: length below 3 after trimming");
    return d;
}

/// A longest strictly increasing chain of oriented separations of order < k.
inline std::vector<Separation> longest_strict_chain(const Graph& g, int k)
{
    auto sys = enumerate_separations(g, k);
    std::vector<Separation> all;
    for (const auto& s : sys.members())
    {
        all.push_back(s);
        if (!(s.small == s.big))
            all.push_back(s.inverse());
    }
    auto key = [](const Separation& s) { return s.small.size() - s.big.size(); };
    std::sort(all.begin(), all.end(), [&](const Separation& x, const Separation& y) {
        if (key(x) != key(y))
            return key(x) < key(y);
        return canonical_less(x, y);
    });
    const std::size_t n = all.size();
    std::vector<std::size_t> best(n, 1);
    std::vector<long> prev(n, -1);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < j; ++i)
            if (best[i] + 1 > best[j] && strictly_below(all[i], all[j]))
            {
                best[j] = best[i] + 1;
                prev[j] = static_cast<long>(i);
            }
    std::vector<Separation> chain;
    if (n == 0)
        return chain;
    std::size_t end = static_cast<std::size_t>(std::max_element(best.begin(), best.end()) - best.begin());
    for (long at = static_cast<long>(end); at >= 0; at = prev[static_cast<std::size_t>(at)])
        chain.push_back(all[static_cast<std::size_t>(at)]);
    std::reverse(chain.begin(), chain.end());
    return chain;
}

// ---------------------------------------------------------------------------
// Validation

/// The U_1-U_M linkage threading all bags, of size at most the adhesion.
inline Linkage foundational_linkage(const Graph& g, const LinearDecomposition& d)
{
    const int m = d.length();
    if (m < 1)
        return {};
    VertexSet inner = m >= 2 ? d.span(1, m - 1) : d.adhesion_set(1);
    return max_linkage(g, d.adhesion_set(1), d.adhesion_set(m), inner);
}

namespace detail
{

/// Some path in g[bag] from `from` to `to` whose inner vertices avoid `blocked`.
inline bool joined_avoiding(const Graph& g, const VertexSet& bag, const VertexSet& from, const VertexSet& to,
                            const VertexSet& blocked)
{
    const VertexSet free = bag - blocked;
    VertexSet seen;
    std::vector<int> stack;
    bool hit = false;
    from.for_each([&](int v) {
        if ((g.neighbours(v) & to & bag).size() > 0)
            hit = true;
        (g.neighbours(v) & free).for_each([&](int w) {
            if (!seen.contains(w))
            {
                seen.insert(w);
                stack.push_back(w);
            }
        });
    });
    while (!hit && !stack.empty())
    {
        int v = stack.back();
        stack.pop_back();
        if ((g.neighbours(v) & to & bag).size() > 0)
            hit = true;
        (g.neighbours(v) & free).for_each([&](int w) {
            if (!seen.contains(w))
            {
                seen.insert(w);
                stack.push_back(w);
            }
        });
    }
    return hit;
}

} // namespace detail

/// Checks L1-L4, R1-R3 and, against `linkage` (or the computed foundational
/// linkage), FL1-FL2. `g` is the graph the bags decompose.
inline LinearReport validate_linear(const Graph& g, const LinearDecomposition& d, const Linkage* linkage = nullptr)
{
    LinearReport r;
    const int m = d.length();
    if (m < 0)
        return r;
    const std::size_t nb = d.bags.size();

    bool l1 = d.vertices() == g.vertices();
    for (const auto& e : g.edges())
    {
        bool inside = false;
        for (const auto& b : d.bags)
            if (b.contains(e.u) && b.contains(e.v))
                inside = true;
        l1 = l1 && inside;
    }
    r.l1 = l1;

    bool l2 = true;
    for (std::size_t i = 0; i < nb; ++i)
        for (std::size_t k = i + 1; k < nb; ++k)
            for (std::size_t j = i + 1; j < k; ++j)
                if (!(d.bags[i] & d.bags[k]).subset_of(d.bags[j]))
                    l2 = false;
    r.l2 = l2;

    const int ell = d.adhesion();
    bool l3 = true;
    bool l4 = true;
    for (int i = 1; i <= m; ++i)
    {
        VertexSet u = d.adhesion_set(i);
        if (u.size() != ell)
            l3 = false;
        if (u == d.bags[static_cast<std::size_t>(i - 1)] || u == d.bags[static_cast<std::size_t>(i)])
            l4 = false;
    }
    r.l3 = l3;
    r.l4 = l4;

    bool r1 = true;
    for (int i = 1; i <= m - 1; ++i)
        if (static_cast<int>(max_linkage(g, d.adhesion_set(i), d.adhesion_set(i + 1), d.bags[static_cast<std::size_t>(i)])
                                 .size()) != ell)
            r1 = false;
    r.r1 = r1;

    bool r2 = true;
    for (const auto& b : d.bags)
        if (!g.connected_within(b))
            r2 = false;
    r.r2 = r2;

    bool r3 = true;
    for (int i = 1; i + 1 <= m; ++i)
        if (d.adhesion_set(i).intersects(d.adhesion_set(i + 1)))
            r3 = false;
    r.r3 = r3;

    Linkage computed;
    if (linkage == nullptr)
    {
        computed = foundational_linkage(g, d);
        linkage = &computed;
    }
    if (m < 1 || static_cast<int>(linkage->size()) != ell)
        return r;
    const VertexSet on_paths = linkage->vertices();
    std::vector<VertexSet> path_sets;
    for (const auto& p : linkage->paths)
        path_sets.push_back(VertexSet::from(p));

    bool fl1 = true;
    for (const auto& p : path_sets)
    {
        int trivial = 0;
        for (int i = 1; i <= m - 1; ++i)
            if ((p & d.bags[static_cast<std::size_t>(i)]).size() == 1)
                ++trivial;
        if (trivial != 0 && trivial != m - 1)
            fl1 = false;
    }
    r.fl1 = fl1;

    bool fl2 = true;
    for (std::size_t a = 0; a < path_sets.size(); ++a)
        for (std::size_t b = a + 1; b < path_sets.size(); ++b)
        {
            int joined = 0;
            for (int i = 1; i <= m - 1; ++i)
            {
                const VertexSet& bag = d.bags[static_cast<std::size_t>(i)];
                if (detail::joined_avoiding(g, bag, path_sets[a] & bag, path_sets[b] & bag, on_paths))
                    ++joined;
            }
            if (joined != 0 && joined != m - 1)
                fl2 = false;
        }
    r.fl2 = fl2;
    return r;
}

// ---------------------------------------------------------------------------
// Bounds

using BigInt = boost::multiprecision::cpp_int;

/// coefficient * 3^exponent, kept symbolic when the exponent is large.
struct PowerOfThree
{
    BigInt coefficient;
    BigInt exponent;

    /// The exact value when the exponent is at most `max_exponent`.
    [[nodiscard]] std::optional<BigInt> value(unsigned long max_exponent = 1000000) const
    {
        if (exponent > max_exponent)
            return std::nullopt;
        return coefficient * boost::multiprecision::pow(BigInt(3), exponent.convert_to<unsigned>());
    }

    [[nodiscard]] std::string str() const { return coefficient.str() + "*3^" + exponent.str(); }
};

inline BigInt factorial(long n)
{
    BigInt out = 1;
    for (long i = 2; i <= n; ++i)
        out *= i;
    return out;
}

inline BigInt big_pow(BigInt base, BigInt e)
{
    BigInt out = 1;
    while (e > 0)
    {
        if ((e & 1) != 0)
            out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

/// N_1(k, M) = 3k * 3^((M+2)^(k+1)).
inline PowerOfThree n1_bound(long k, const BigInt& m)
{
    if (k < 1 || m < 1)
        throw TangleError("n1_bound needs k, M >= 1");
    return {BigInt(3 * k), big_pow(m + 2, k + 1)};
}

/// M_1(l, M) = (M * C(l, 2) + 1) * (l!)^(l+1) * l!.
inline BigInt m1_bound(long l, const BigInt& m)
{
    if (l < 0 || m < 1)
        throw TangleError("m1_bound needs l >= 0, M >= 1");
    BigInt choose2 = BigInt(l) * (l - 1) / 2;
    BigInt f = factorial(l);
    return (m * choose2 + 1) * big_pow(f, l + 1) * f;
}

/// N(k, M) = N_1(k, M_1(k, M + 2)).
inline PowerOfThree n_bound(long k, const BigInt& m)
{
    return n1_bound(k, m1_bound(k, m + 2));
}

struct BoundLedger
{
    long k = 0;
    BigInt m;
    PowerOfThree n1;
    BigInt m1;
    PowerOfThree n;
    /// Edge threshold N(k, 18k) for deleting an edge in graphs without
    /// higher-order tangles.
    PowerOfThree edge_threshold;
};

inline BoundLedger compute_bounds(long k, const BigInt& m)
{
    BoundLedger out;
    out.k = k;
    out.m = m;
    out.n1 = n1_bound(k, m);
    out.m1 = m1_bound(k, m);
    out.n = n_bound(k, m);
    out.edge_threshold = n_bound(k, BigInt(18 * k));
    return out;
}

// ---------------------------------------------------------------------------
// File format: one bag per line, then an optional LINKAGE section with one
// path per line.

struct DecompositionFile
{
    LinearDecomposition decomposition;
    std::optional<Linkage> linkage;
};

namespace detail
{

inline std::vector<int> parse_int_line(const std::string& line, std::size_t lineno)
{
    std::istringstream in(line);
    std::vector<int> out;
    std::string tok;
    while (in >> tok)
    {
        std::size_t used = 0;
        int v = 0;
        try
        {
            v = std::stoi(tok, &used);
        }
        catch (const std::exception&)
        {
            used = 0;
        }
        if (used != tok.size())
            throw TangleError("line " + std::to_string(lineno) + ": bad integer '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

} // namespace detail

inline DecompositionFile parse_decomposition(const std::string& text)
{
    DecompositionFile out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool in_linkage = false;
    while (std::getline(in, line))
    {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        if (line.find("LINKAGE") != std::string::npos)
        {
            in_linkage = true;
            out.linkage = Linkage{};
            continue;
        }
        auto ints = detail::parse_int_line(line, lineno);
        if (in_linkage)
            out.linkage->paths.push_back(ints);
        else
        {
            VertexSet bag;
            for (int v : ints)
                bag.insert(v);
            out.decomposition.bags.push_back(bag);
        }
    }
    return out;
}

inline void write_decomposition(std::ostream& out, const LinearDecomposition& d, const Linkage* linkage = nullptr)
{
    for (const auto& b : d.bags)
    {
        bool first = true;
        b.for_each([&](int v) {
            out << (first ? "" : " ") << v;
            first = false;
        });
        out << '\n';
    }
    if (linkage != nullptr)
    {
        out << "LINKAGE\n";
        for (const auto& p : linkage->paths)
        {
            for (std::size_t i = 0; i < p.size(); ++i)
                out << (i ? " " : "") << p[i];
            out << '\n';
        }
    }
}

} // namespace tangles

#endif // TANGLES_DECOMPOSITION_HPP_INCLUDED
