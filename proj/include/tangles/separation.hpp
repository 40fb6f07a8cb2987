#ifndef TANGLES_SEPARATION_HPP_INCLUDED
#define TANGLES_SEPARATION_HPP_INCLUDED

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tangles/graph.hpp"

namespace tangles
{

/// Oriented separation (A, B): A is the small side, B the big side.
struct Separation
{
    VertexSet small;
    VertexSet big;

    [[nodiscard]] VertexSet separator() const { return small & big; }
    [[nodiscard]] int order() const { return separator().size(); }
    [[nodiscard]] Separation inverse() const { return {big, small}; }
    [[nodiscard]] VertexSet strict_small() const { return small - big; }
    [[nodiscard]] VertexSet strict_big() const { return big - small; }

    /// (A,B) <= (C,D) iff A ⊆ C and B ⊇ D.
    [[nodiscard]] bool leq(const Separation& o) const
    {
        return small.subset_of(o.small) && o.big.subset_of(big);
    }

    [[nodiscard]] bool is_separation_of(const Graph& g) const
    {
        if ((small | big) != g.vertices())
            return false;
        return !g.has_edge_between(strict_small(), strict_big());
    }

    /// Orientation whose first side holds the smallest label outside the
    /// separator; the degenerate case A = B is its own canonical form.
    [[nodiscard]] Separation canonical() const
    {
        int m = (small ^ big).min();
        if (m < 0 || small.contains(m))
            return *this;
        return inverse();
    }

    friend bool operator==(const Separation&, const Separation&) = default;
};

inline Separation infimum(const Separation& s, const Separation& t)
{
    return {s.small & t.small, s.big | t.big};
}

inline Separation supremum(const Separation& s, const Separation& t)
{
    return {s.small | t.small, s.big & t.big};
}

/// Whether some orientations of the two underlying separations are comparable.
inline bool is_nested(const Separation& s, const Separation& t)
{
    return s.leq(t) || s.leq(t.inverse()) || s.inverse().leq(t) || s.inverse().leq(t.inverse());
}

/// |s ∧ t| + |s ∨ t| == |s| + |t|.
inline bool check_submodular_equality(const Separation& s, const Separation& t)
{
    return infimum(s, t).order() + supremum(s, t).order() == s.order() + t.order();
}

/// Total order used for canonical listings: by order, then small side, then
/// big side, comparing sorted label lists lexicographically.
inline bool canonical_less(const Separation& s, const Separation& t)
{
    int os = s.order();
    int ot = t.order();
    if (os != ot)
        return os < ot;
    if (s.small != t.small)
        return VertexSet::lex_less(s.small, t.small);
    return VertexSet::lex_less(s.big, t.big);
}

struct SeparationHash
{
    std::size_t operator()(const Separation& s) const noexcept
    {
        return s.small.hash() * 31U ^ (s.big.hash() + 0x517CC1B727220A95ULL);
    }
};

/// The unoriented separations of order < k, one canonical representative
/// each, sorted by canonical_less.
class SeparationSystem
{
public:
    SeparationSystem() = default;

    SeparationSystem(int k, VertexSet vertices, std::vector<Separation> members)
        : k_(k), vertices_(vertices), members_(std::move(members))
    {
        for (auto& m : members_)
            m = m.canonical();
        std::sort(members_.begin(), members_.end(), canonical_less);
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
        index_.reserve(members_.size() * 2);
        for (std::size_t i = 0; i < members_.size(); ++i)
            index_.emplace(members_[i], static_cast<int>(i));
    }

    [[nodiscard]] int k() const { return k_; }
    [[nodiscard]] const VertexSet& vertices() const { return vertices_; }
    [[nodiscard]] const std::vector<Separation>& members() const& { return members_; }
    [[nodiscard]] std::vector<Separation> members() && { return std::move(members_); }
    [[nodiscard]] std::size_t size() const { return members_.size(); }
    [[nodiscard]] const Separation& operator[](std::size_t i) const { return members_[i]; }

    /// Index of the underlying separation of s, or -1.
    [[nodiscard]] int find(const Separation& s) const
    {
        auto it = index_.find(s.canonical());
        return it == index_.end() ? -1 : it->second;
    }

    /// Whether s equals the stored canonical orientation of its member.
    [[nodiscard]] static bool is_canonical_orientation(const Separation& s) { return s.canonical() == s; }

private:
    int k_ = 0;
    VertexSet vertices_;
    std::vector<Separation> members_;
    std::unordered_map<Separation, int, SeparationHash> index_;
};

/// Calls f(separator) for every subset of `pool` of size < limit, in
/// increasing size and then colex order.
template <typename F>
void for_each_small_subset(const VertexSet& pool, int limit, F&& f)
{
    std::vector<int> items = pool.to_vector();
    int n = static_cast<int>(items.size());
    for (int size = 0; size < limit && size <= n; ++size)
    {
        std::vector<int> idx(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i)
            idx[static_cast<std::size_t>(i)] = i;
        while (true)
        {
            VertexSet s;
            for (int i : idx)
                s.insert(items[static_cast<std::size_t>(i)]);
            f(s);
            int p = size - 1;
            while (p >= 0 && idx[static_cast<std::size_t>(p)] == n - size + p)
                --p;
            if (p < 0)
                break;
            ++idx[static_cast<std::size_t>(p)];
            for (int q = p + 1; q < size; ++q)
                idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
        }
    }
}

/// Every separation of g with separator exactly s, one orientation each:
/// the first component of g - s always goes to the first side.
template <typename F>
void for_each_separation_with_separator(const Graph& g, const VertexSet& s, F&& f)
{
    std::vector<VertexSet> comps = g.component_sets(g.vertices() - s);
    if (comps.empty())
    {
        f(Separation{s, s});
        return;
    }
    if (comps.size() > 62)
        throw TangleError("too many components to enumerate separations");
    std::uint64_t count = std::uint64_t{1} << (comps.size() - 1);
    for (std::uint64_t mask = 0; mask < count; ++mask)
    {
        VertexSet a = s | comps[0];
        VertexSet b = s;
        for (std::size_t c = 1; c < comps.size(); ++c)
        {
            if ((mask >> (c - 1)) & 1U)
                a |= comps[c];
            else
                b |= comps[c];
        }
        f(Separation{a, b});
    }
}

/// S_k(g): all unoriented separations of order < k.
inline SeparationSystem enumerate_separations(const Graph& g, int k)
{
    if (k < 1)
        throw TangleError("order bound k must be at least 1");
    std::vector<Separation> out;
    for_each_small_subset(g.vertices(), k, [&](const VertexSet& s) {
        for_each_separation_with_separator(g, s, [&](const Separation& sep) { out.push_back(sep); });
    });
    return SeparationSystem(k, g.vertices(), std::move(out));
}

inline void write_vertex_list(std::ostream& os, const VertexSet& s) { os << s; }

/// "[a, b] [c, d, e]" on one line.
inline std::string format_separation(const Separation& s)
{
    std::ostringstream os;
    os << s.small << ' ' << s.big;
    return os.str();
}

inline VertexSet parse_vertex_list(std::istream& in)
{
    char c = 0;
    if (!(in >> c) || c != '[')
        throw TangleError("expected '[' in vertex list");
    VertexSet s;
    in >> std::ws;
    if (in.peek() == ']')
    {
        in.get();
        return s;
    }
    while (true)
    {
        int v = 0;
        if (!(in >> v))
            throw TangleError("expected integer in vertex list");
        s.insert(v);
        if (!(in >> c))
            throw TangleError("unterminated vertex list");
        if (c == ']')
            return s;
        if (c != ',')
            throw TangleError("expected ',' or ']' in vertex list");
    }
}

inline Separation parse_separation(const std::string& line)
{
    std::istringstream in(line);
    Separation s;
    s.small = parse_vertex_list(in);
    s.big = parse_vertex_list(in);
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const Separation& s)
{
    return os << '(' << s.small << ", " << s.big << ')';
}

} // namespace tangles

#endif // TANGLES_SEPARATION_HPP_INCLUDED
