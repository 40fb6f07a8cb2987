#ifndef TANGLES_TANGLE_HPP_INCLUDED
#define TANGLES_TANGLE_HPP_INCLUDED

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tangles/separation.hpp"

namespace tangles
{

using SystemPtr = std::shared_ptr<const SeparationSystem>;

inline SystemPtr make_system(const Graph& g, int k)
{
    return std::make_shared<const SeparationSystem>(enumerate_separations(g, k));
}

/// An orientation of S_k(G): for every member of the system, whether its
/// stored first side is the small side.
class Tangle
{
public:
    Tangle() = default;
    Tangle(SystemPtr system, std::vector<std::uint8_t> first_small)
        : system_(std::move(system)), first_small_(std::move(first_small))
    {
        if (first_small_.size() != system_->size())
            throw TangleError("not an orientation");
    }

    [[nodiscard]] int k() const { return system_->k(); }
    [[nodiscard]] const SeparationSystem& system() const { return *system_; }
    [[nodiscard]] const SystemPtr& system_ptr() const { return system_; }
    [[nodiscard]] std::size_t size() const { return first_small_.size(); }
    [[nodiscard]] const std::vector<std::uint8_t>& bits() const { return first_small_; }

    [[nodiscard]] Separation oriented(std::size_t i) const
    {
        const Separation& m = (*system_)[i];
        return first_small_[i] ? m : m.inverse();
    }

    /// Whether the oriented separation s is a member.
    [[nodiscard]] bool contains(const Separation& s) const
    {
        int i = system_->find(s);
        return i >= 0 && oriented(static_cast<std::size_t>(i)) == s;
    }

    /// Whether the underlying separation of s is oriented at all.
    [[nodiscard]] bool orients(const Separation& s) const { return system_->find(s) >= 0; }

    [[nodiscard]] std::vector<Separation> members() const
    {
        std::vector<Separation> out;
        out.reserve(size());
        for (std::size_t i = 0; i < size(); ++i)
            out.push_back(oriented(i));
        return out;
    }

    /// Equality as sets of oriented separations.
    friend bool operator==(const Tangle& a, const Tangle& b)
    {
        if (a.k() != b.k() || a.size() != b.size() || a.system().vertices() != b.system().vertices())
            return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!b.contains(a.oriented(i)))
                return false;
        return true;
    }

private:
    SystemPtr system_;
    std::vector<std::uint8_t> first_small_;
};

/// Build an orientation from a list of oriented separations; every member
/// of S_k(g) must appear exactly once.
inline Tangle orientation_from(const SystemPtr& system, const std::vector<Separation>& chosen)
{
    std::vector<int> seen(system->size(), -1);
    for (const auto& s : chosen)
    {
        int i = system->find(s);
        if (i < 0 || seen[static_cast<std::size_t>(i)] >= 0)
            throw TangleError("not an orientation");
        seen[static_cast<std::size_t>(i)] = (*system)[static_cast<std::size_t>(i)] == s ? 1 : 0;
    }
    std::vector<std::uint8_t> bits(system->size());
    for (std::size_t i = 0; i < bits.size(); ++i)
    {
        if (seen[i] < 0)
            throw TangleError("not an orientation");
        bits[i] = static_cast<std::uint8_t>(seen[i]);
    }
    return Tangle(system, std::move(bits));
}

/// Orientation of S_k(g) taking, for each member, the orientation for which
/// `pick_small(s)` holds on the stored first side.
template <typename Pred>
Tangle orientation_by(const SystemPtr& system, Pred&& pick)
{
    std::vector<std::uint8_t> bits(system->size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        bits[i] = pick((*system)[i]) ? 1 : 0;
    return Tangle(system, std::move(bits));
}

/// Edge-coverage masks for fast forbidden-triple tests: each vertex set is
/// summarised by the set of edges it induces.
class CoverIndex
{
public:
    explicit CoverIndex(const Graph& g) : vertices_(g.vertices()), edges_(g.edges())
    {
        words_ = (edges_.size() + 63) / 64;
        full_.assign(words_, 0);
        for (std::size_t i = 0; i < edges_.size(); ++i)
            full_[i / 64] |= std::uint64_t{1} << (i % 64);
    }

    [[nodiscard]] std::size_t words() const { return words_; }

    /// Append the edge mask of G[a] to buf.
    void append_mask(const VertexSet& a, std::vector<std::uint64_t>& buf) const
    {
        std::size_t base = buf.size();
        buf.resize(base + words_, 0);
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (a.contains(edges_[i].u) && a.contains(edges_[i].v))
                buf[base + i / 64] |= std::uint64_t{1} << (i % 64);
    }

    /// Whether the small sides indexed by x, y, z (offsets into buf) cover G.
    [[nodiscard]] bool covers(const std::vector<VertexSet>& sides, const std::vector<std::uint64_t>& buf,
                              std::size_t x, std::size_t y, std::size_t z) const
    {
        if ((sides[x] | sides[y] | sides[z]) != vertices_)
            return false;
        const std::uint64_t* px = buf.data() + x * words_;
        const std::uint64_t* py = buf.data() + y * words_;
        const std::uint64_t* pz = buf.data() + z * words_;
        for (std::size_t w = 0; w < words_; ++w)
            if ((px[w] | py[w] | pz[w]) != full_[w])
                return false;
        return true;
    }

private:
    VertexSet vertices_;
    std::vector<Edge> edges_;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> full_;
};

/// Whether G[A1] ∪ G[A2] ∪ G[A3] = G for the small sides A_i.
inline bool is_forbidden_triple(const Graph& g, const Separation& s1, const Separation& s2, const Separation& s3)
{
    VertexSet u = s1.small | s2.small | s3.small;
    if (u != g.vertices())
        return false;
    for (const auto& e : g.edges())
    {
        bool covered = false;
        for (const Separation* s : {&s1, &s2, &s3})
            if (s->small.contains(e.u) && s->small.contains(e.v))
                covered = true;
        if (!covered)
            return false;
    }
    return true;
}

/// Indices of the <=-maximal members of a set of oriented separations.
inline std::vector<std::size_t> maximal_elements(const std::vector<Separation>& seps)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < seps.size(); ++i)
    {
        bool dominated = false;
        for (std::size_t j = 0; j < seps.size() && !dominated; ++j)
            if (j != i && seps[i].leq(seps[j]) && !(seps[j] == seps[i] && j > i))
                dominated = true;
        if (!dominated)
            out.push_back(i);
    }
    return out;
}

/// A forbidden triple among `seps` (indices, ascending), or nullopt. The
/// third small side must contain every vertex the first two miss, so only
/// members containing the rarest such vertex are tried.
inline std::optional<std::array<std::size_t, 3>> find_forbidden_triple(const Graph& g,
                                                                       const std::vector<Separation>& seps)
{
    CoverIndex cover(g);
    std::vector<VertexSet> sides;
    std::vector<std::uint64_t> buf;
    std::vector<std::vector<std::size_t>> containing(kMaxVertices);
    sides.reserve(seps.size());
    for (std::size_t i = 0; i < seps.size(); ++i)
    {
        sides.push_back(seps[i].small);
        cover.append_mask(seps[i].small, buf);
        seps[i].small.for_each([&](int v) { containing[static_cast<std::size_t>(v)].push_back(i); });
    }
    std::vector<std::size_t> everyone(seps.size());
    for (std::size_t i = 0; i < seps.size(); ++i)
        everyone[i] = i;
    std::vector<int> by_rarity = g.vertices().to_vector();
    std::stable_sort(by_rarity.begin(), by_rarity.end(), [&](int x, int y) {
        return containing[static_cast<std::size_t>(x)].size() < containing[static_cast<std::size_t>(y)].size();
    });
    for (std::size_t a = 0; a < seps.size(); ++a)
        for (std::size_t b = a; b < seps.size(); ++b)
        {
            const VertexSet covered = sides[a] | sides[b];
            const std::vector<std::size_t>* pool = &everyone;
            for (int v : by_rarity)
                if (!covered.contains(v))
                {
                    pool = &containing[static_cast<std::size_t>(v)];
                    break;
                }
            for (auto it = std::lower_bound(pool->begin(), pool->end(), b); it != pool->end(); ++it)
                if (cover.covers(sides, buf, a, b, *it))
                    return std::array<std::size_t, 3>{a, b, *it};
        }
    return std::nullopt;
}

/// First forbidden triple in index order, trying every triple.
inline std::optional<std::array<std::size_t, 3>> scan_all_triples(const Graph& g, const std::vector<Separation>& seps)
{
    CoverIndex cover(g);
    std::vector<VertexSet> sides;
    std::vector<std::uint64_t> buf;
    sides.reserve(seps.size());
    for (const auto& s : seps)
    {
        sides.push_back(s.small);
        cover.append_mask(s.small, buf);
    }
    for (std::size_t a = 0; a < seps.size(); ++a)
        for (std::size_t b = a; b < seps.size(); ++b)
            for (std::size_t c = b; c < seps.size(); ++c)
                if (cover.covers(sides, buf, a, b, c))
                    return std::array<std::size_t, 3>{a, b, c};
    return std::nullopt;
}

/// Tangle test checking only triples of <=-maximal members.
inline bool is_tangle(const Graph& g, const Tangle& t)
{
    if (t.system().vertices() != g.vertices())
        throw TangleError("not an orientation");
    std::vector<Separation> all = t.members();
    std::vector<Separation> top;
    for (std::size_t i : maximal_elements(all))
        top.push_back(all[i]);
    return !find_forbidden_triple(g, top).has_value();
}

/// Tangle test over every triple of members.
inline bool is_tangle_naive(const Graph& g, const Tangle& t)
{
    if (t.system().vertices() != g.vertices())
        throw TangleError("not an orientation");
    return !scan_all_triples(g, t.members()).has_value();
}

/// Tangle test on a raw list of oriented separations.
inline bool is_tangle(const Graph& g, int k, const std::vector<Separation>& orientation)
{
    return is_tangle(g, orientation_from(make_system(g, k), orientation));
}

struct EnumerateOptions
{
    /// Stop after this many tangles (0 = no limit).
    std::size_t limit = 0;
    /// Required orientations; each must be a member of S_k.
    std::vector<Separation> fixed;
};

namespace detail
{

class TangleSearch
{
public:
    TangleSearch(const Graph& g, SystemPtr system, const EnumerateOptions& opts)
        : g_(g), system_(std::move(system)), cover_(g), opts_(opts)
    {
        const std::size_t n = system_->size();
        forced_.assign(n, -1);
        for (const auto& s : opts.fixed)
        {
            int i = system_->find(s);
            if (i < 0)
                throw TangleError("fixed separation is not in S_k");
            int bit = (*system_)[static_cast<std::size_t>(i)] == s ? 1 : 0;
            if (forced_[static_cast<std::size_t>(i)] >= 0 && forced_[static_cast<std::size_t>(i)] != bit)
                throw TangleError("conflicting fixed orientations");
            forced_[static_cast<std::size_t>(i)] = bit;
        }
        // slot 2i: member i with first side small, slot 2i+1: inverse
        for (std::size_t i = 0; i < n; ++i)
        {
            for (int o = 0; o < 2; ++o)
            {
                Separation s = o == 0 ? (*system_)[i] : (*system_)[i].inverse();
                seps_.push_back(s);
                sides_.push_back(s.small);
                cover_.append_mask(s.small, buf_);
            }
        }
        bits_.assign(n, 0);
    }

    std::vector<Tangle> run()
    {
        std::vector<std::size_t> frontier;
        recurse(0, frontier);
        return std::move(found_);
    }

private:
    bool done() const { return opts_.limit != 0 && found_.size() >= opts_.limit; }

    void recurse(std::size_t i, const std::vector<std::size_t>& frontier)
    {
        if (done())
            return;
        if (i == system_->size())
        {
            found_.emplace_back(system_, bits_);
            return;
        }
        for (int o = 0; o < 2 && !done(); ++o)
        {
            int bit = o == 0 ? 1 : 0;
            if (forced_[i] >= 0 && forced_[i] != bit)
                continue;
            std::size_t slot = 2 * i + static_cast<std::size_t>(o);
            std::vector<std::size_t> next;
            if (!admit(slot, frontier, next))
                continue;
            bits_[i] = static_cast<std::uint8_t>(bit);
            recurse(i + 1, next);
        }
    }

    /// Try adding seps_[slot]; on success fill the new maximal frontier.
    bool admit(std::size_t slot, const std::vector<std::size_t>& frontier, std::vector<std::size_t>& next)
    {
        const Separation& s = seps_[slot];
        for (std::size_t f : frontier)
        {
            if (s.leq(seps_[f]))
            {
                next = frontier;
                return true;
            }
        }
        if (cover_.covers(sides_, buf_, slot, slot, slot))
            return false;
        for (std::size_t a = 0; a < frontier.size(); ++a)
        {
            if (cover_.covers(sides_, buf_, slot, slot, frontier[a]))
                return false;
            for (std::size_t b = a; b < frontier.size(); ++b)
                if (cover_.covers(sides_, buf_, slot, frontier[a], frontier[b]))
                    return false;
        }
        next.clear();
        for (std::size_t f : frontier)
            if (!seps_[f].leq(s))
                next.push_back(f);
        next.push_back(slot);
        return true;
    }

    const Graph& g_;
    SystemPtr system_;
    CoverIndex cover_;
    EnumerateOptions opts_;
    std::vector<int> forced_;
    std::vector<Separation> seps_;
    std::vector<VertexSet> sides_;
    std::vector<std::uint64_t> buf_;
    std::vector<std::uint8_t> bits_;
    std::vector<Tangle> found_;
};

} // namespace detail

/// All k-tangles of g (optionally constrained), in lexicographic order of
/// their orientation bits over the canonical member list.
inline std::vector<Tangle> enumerate_tangles(const Graph& g, const SystemPtr& system,
                                             const EnumerateOptions& opts = {})
{
    detail::TangleSearch search(g, system, opts);
    return search.run();
}

inline std::vector<Tangle> enumerate_tangles(const Graph& g, int k, const EnumerateOptions& opts = {})
{
    return enumerate_tangles(g, make_system(g, k), opts);
}

/// X_τ: the intersection of all big sides.
inline VertexSet tangle_core(const Tangle& t, const Graph& g)
{
    VertexSet x = g.vertices();
    for (std::size_t i = 0; i < t.size(); ++i)
        x &= t.oriented(i).big;
    return x;
}

struct AxiomReport
{
    bool consistent = true;
    bool regular = true;
    bool profile = true;

    [[nodiscard]] bool all() const { return consistent && regular && profile; }
};

inline AxiomReport check_axioms(const Tangle& t, const Graph& g)
{
    AxiomReport r;
    std::vector<Separation> ms = t.members();
    const int k = t.k();
    for (const auto& s : ms)
        for (const auto& u : ms)
            if (u.inverse().leq(s))
                r.consistent = false;
    const VertexSet v = g.vertices();
    for (const auto& m : t.system().members())
    {
        for (const Separation& s : {m, m.inverse()})
        {
            if (s.big == v && s.small.size() < k && !t.contains(s))
                r.regular = false;
        }
    }
    for (std::size_t i = 0; i < ms.size() && r.profile; ++i)
    {
        for (std::size_t j = i + 1; j < ms.size(); ++j)
        {
            Separation sup = supremum(ms[i], ms[j]);
            if (sup.order() < k && !t.contains(sup))
            {
                r.profile = false;
                break;
            }
        }
    }
    return r;
}

/// Whether every member of t is a member of t2.
inline bool extends(const Tangle& t, const Tangle& t2)
{
    for (std::size_t i = 0; i < t.size(); ++i)
        if (!t2.contains(t.oriented(i)))
            return false;
    return true;
}

/// Lift of a tangle of a subgraph sub of g.
inline Tangle lift_subgraph(const Tangle& t2, const Graph& sub, const Graph& g, SystemPtr system = nullptr)
{
    if (!g.contains_subgraph(sub))
        throw TangleError("lift: not a subgraph");
    if (!system)
        system = make_system(g, t2.k());
    const VertexSet vs = sub.vertices();
    return orientation_by(system, [&](const Separation& s) {
        Separation r{s.small & vs, s.big & vs};
        if (!t2.orients(r))
            throw TangleError("lift: restriction is not oriented by the subgraph tangle");
        return t2.contains(r);
    });
}

/// Lift of a tangle of the graph obtained from g by suppressing v.
inline Tangle lift_suppression(const Tangle& t2, const Graph& g, int v, SystemPtr system = nullptr)
{
    if (t2.k() < 3)
        throw TangleError("lift undefined below order 3");
    if (!g.has_vertex(v) || g.degree(v) != 2)
        throw TangleError("not suppressible");
    if (!system)
        system = make_system(g, t2.k());
    const int u1 = g.neighbours(v).min();
    const int u2 = g.neighbours(v).max();
    auto included = [&](const Separation& s) {
        VertexSet a = s.small;
        VertexSet b = s.big;
        a.erase(v);
        b.erase(v);
        bool in_a = a.contains(u1) && a.contains(u2);
        bool in_b = b.contains(u1) && b.contains(u2);
        if (in_a || in_b)
            return t2.contains({a, b});
        int ui = s.strict_small().contains(u1) ? u1 : u2;
        int uj = ui == u1 ? u2 : u1;
        VertexSet bi = b;
        bi.insert(ui);
        VertexSet aj = a;
        aj.insert(uj);
        return t2.contains({a, bi}) || t2.contains({aj, b});
    };
    return orientation_by(system, [&](const Separation& s) {
        bool fwd = included(s);
        bool back = included(s.inverse());
        if (fwd == back)
            throw TangleError("lift: not an orientation");
        return fwd;
    });
}

/// Text form: "k <k>" then one oriented separation per line in canonical
/// member order.
inline std::string format_tangle(const Tangle& t)
{
    std::ostringstream os;
    os << "k " << t.k() << '\n';
    for (std::size_t i = 0; i < t.size(); ++i)
        os << format_separation(t.oriented(i)) << '\n';
    return os.str();
}

inline nlohmann::json tangle_to_json(const Tangle& t)
{
    nlohmann::json seps = nlohmann::json::array();
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        Separation s = t.oriented(i);
        seps.push_back({s.small.to_vector(), s.big.to_vector()});
    }
    return {{"k", t.k()}, {"separations", seps}};
}

/// Parse either the text form or the JSON form against g.
inline Tangle parse_tangle(const std::string& text, const Graph& g)
{
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        throw TangleError("empty tangle description");
    int k = 0;
    std::vector<Separation> seps;
    if (text[first] == '{')
    {
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(text);
            k = j.at("k").get<int>();
            for (const auto& s : j.at("separations"))
                seps.push_back({VertexSet::from(s.at(0).get<std::vector<int>>()),
                                VertexSet::from(s.at(1).get<std::vector<int>>())});
        }
        catch (const nlohmann::json::exception& e)
        {
            throw TangleError(std::string("malformed tangle JSON: ") + e.what());
        }
    }
    else
    {
        std::istringstream in(text);
        std::string line;
        bool header = false;
        while (std::getline(in, line))
        {
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            if (!header)
            {
                std::istringstream ls(line);
                std::string word;
                if (!(ls >> word >> k) || word != "k")
                    throw TangleError("tangle text must start with 'k <order>'");
                header = true;
                continue;
            }
            seps.push_back(parse_separation(line));
        }
        if (!header)
            throw TangleError("tangle text must start with 'k <order>'");
    }
    if (k < 1)
        throw TangleError("tangle order must be at least 1");
    return orientation_from(make_system(g, k), seps);
}

} // namespace tangles

#endif // TANGLES_TANGLE_HPP_INCLUDED
