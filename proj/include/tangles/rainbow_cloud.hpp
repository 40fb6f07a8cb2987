#ifndef TANGLES_RAINBOW_CLOUD_HPP_INCLUDED
#define TANGLES_RAINBOW_CLOUD_HPP_INCLUDED

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tangles/decomposition.hpp"
#include "tangles/linkage.hpp"
#include "tangles/survival.hpp"
#include "tangles/tangle.hpp"

namespace tangles
{

/// Rainbow R = G[∪ bags] with its linear decomposition, sun Z and cloud
/// C = G[cloud]. Adhesion sets U_0..U_{M+1}.
struct RCDecomposition
{
    LinearDecomposition bags;
    VertexSet sun;
    VertexSet cloud;

    [[nodiscard]] int length() const { return bags.length(); }

    [[nodiscard]] const VertexSet& bag(int i) const
    {
        if (i < 0 || i > length())
            throw TangleError("bag index out of range");
        return bags.bags[static_cast<std::size_t>(i)];
    }

    [[nodiscard]] VertexSet rainbow() const { return bags.vertices(); }

    /// U_i for i in [0, M+1].
    [[nodiscard]] VertexSet adhesion_set(int i) const
    {
        const int m = length();
        if (i < 0 || i > m + 1)
            throw TangleError("adhesion index out of range");
        if (i == m + 1)
            return cloud & bag(m);
        if (i == 0)
            return cloud & bag(0);
        return bags.adhesion_set(i);
    }

    /// ℓ = |U_0|.
    [[nodiscard]] int adhesion() const { return adhesion_set(0).size(); }

    /// V(R_{i,j}).
    [[nodiscard]] VertexSet rainbow_span(int i, int j) const { return bags.span(i, j); }

    /// V(C_{i,j}).
    [[nodiscard]] VertexSet cloud_outside(int i, int j) const
    {
        return cloud | bags.span(0, i - 1) | bags.span(j + 1, length());
    }

    bool operator==(const RCDecomposition&) const = default;
};

struct RCReport
{
    bool cover = false;
    bool sun = false;
    bool rc1 = false;
    bool rc2 = false;
    bool rc3 = false;
    bool rc4 = false;
    LinearReport linear;

    [[nodiscard]] bool all() const { return cover && sun && rc1 && rc2 && rc3 && rc4 && linear.rainbow(); }
};

inline RCReport validate_rc(const Graph& g, const RCDecomposition& rc)
{
    RCReport r;
    const int m = rc.length();
    if (m < 0)
        return r;
    const VertexSet vr = rc.rainbow();
    const VertexSet vc = rc.cloud;
    const VertexSet inner = vr | rc.sun;

    bool cover = (vr | vc) == g.vertices();
    for (const auto& e : g.edges())
    {
        bool in_r = inner.contains(e.u) && inner.contains(e.v);
        bool in_c = vc.contains(e.u) && vc.contains(e.v);
        cover = cover && (in_r || in_c);
    }
    r.cover = cover;
    r.sun = rc.sun.subset_of(vc) && !rc.sun.intersects(vr);

    const VertexSet u0 = rc.adhesion_set(0);
    const VertexSet uend = rc.adhesion_set(m + 1);
    r.rc1 = (vr & vc) == (u0 | uend);

    const int ell = m >= 1 ? rc.bags.adhesion() : u0.size();
    bool rc2 = u0.size() == ell && uend.size() == ell;
    rc2 = rc2 && !u0.intersects(rc.adhesion_set(1)) && !rc.adhesion_set(m).intersects(uend);
    r.rc2 = rc2;

    const VertexSet u1 = rc.adhesion_set(1);
    const VertexSet um = rc.adhesion_set(m);
    r.rc3 = static_cast<int>(max_linkage(g, u0, u1, rc.bag(0)).size()) == ell &&
            static_cast<int>(max_linkage(g, um, uend, rc.bag(m)).size()) == ell;

    bool rc4 = true;
    for (int i = 0; i <= m; ++i)
        if (!rc.sun.subset_of(g.neighbourhood(rc.bag(i))))
            rc4 = false;
    r.rc4 = rc4;

    r.linear = validate_linear(g.induced(vr), rc.bags);
    return r;
}

/// (R, W, Z, C)_{i,j}: keep bags i..j, move the rest into the cloud.
inline RCDecomposition slice_rc(const RCDecomposition& rc, int i, int j)
{
    if (i < 0 || j > rc.length() || i > j)
        throw TangleError("slice indices out of range");
    RCDecomposition out;
    out.bags.bags.assign(rc.bags.bags.begin() + i, rc.bags.bags.begin() + j + 1);
    out.sun = rc.sun;
    out.cloud = rc.cloud_outside(i, j);
    return out;
}

/// Replace bags a..b by their union.
inline RCDecomposition merge_bags(const RCDecomposition& rc, int a, int b)
{
    if (a < 0 || b > rc.length() || a > b)
        throw TangleError("merge indices out of range");
    RCDecomposition out = rc;
    auto& bs = out.bags.bags;
    bs[static_cast<std::size_t>(a)] = rc.rainbow_span(a, b);
    bs.erase(bs.begin() + a + 1, bs.begin() + b + 1);
    return out;
}

/// (V(R_{i,j}) ∪ Z, V(C_{i,j})), separator U_i ∪ U_{j+1} ∪ Z.
inline Separation rainbow_separation(const RCDecomposition& rc, int i, int j)
{
    if (i < 0 || j > rc.length() || i > j)
        throw TangleError("slice indices out of range");
    return {rc.rainbow_span(i, j) | rc.sun, rc.cloud_outside(i, j)};
}

// ---------------------------------------------------------------------------
// Crossing and slicing

enum class Crossing
{
    none,
    clockwise,
    counterclockwise
};

struct CrossingInfo
{
    Crossing direction = Crossing::none;
    /// Extremal bag indices of the clockwise orientation.
    int i_min = -1;
    int j_max = -1;
};

namespace detail
{

/// Minimal i <= 2k with W_i ⊆ A \ B and maximal j >= M - 2k with W_j ⊆ B \ A.
inline std::optional<std::pair<int, int>> clockwise_indices(const RCDecomposition& rc, const Separation& s, int k)
{
    const int m = rc.length();
    const VertexSet a = s.strict_small();
    const VertexSet b = s.strict_big();
    int i = -1;
    for (int t = 0; t <= std::min(2 * k, m); ++t)
        if (rc.bag(t).subset_of(a))
        {
            i = t;
            break;
        }
    int j = -1;
    for (int t = m; t >= std::max(m - 2 * k, 0); --t)
        if (rc.bag(t).subset_of(b))
        {
            j = t;
            break;
        }
    if (i < 0 || j < 0)
        return std::nullopt;
    return std::pair{i, j};
}

} // namespace detail

inline CrossingInfo classify_crossing(const RCDecomposition& rc, const Separation& s, int k)
{
    CrossingInfo info;
    Separation cw = s;
    if (auto ij = detail::clockwise_indices(rc, s, k))
    {
        info = {Crossing::clockwise, ij->first, ij->second};
    }
    else if (auto ji = detail::clockwise_indices(rc, s.inverse(), k))
    {
        info = {Crossing::counterclockwise, ji->first, ji->second};
        cw = s.inverse();
    }
    if (info.direction != Crossing::none && !rc.sun.subset_of(cw.separator()))
        throw TangleError("crossing separation does not contain the sun in its separator");
    return info;
}

inline CrossingInfo classify_crossing(const RCDecomposition& rc, const Separation& s)
{
    return classify_crossing(rc, s, s.order());
}

/// (A^h, B^h) for a separation crossing in either direction.
inline Separation split_crossing(const RCDecomposition& rc, const Separation& s, int h)
{
    CrossingInfo info = classify_crossing(rc, s);
    if (info.direction == Crossing::none)
        throw TangleError("split_crossing: separation does not cross the rainbow");
    const int i = info.i_min;
    const int j = info.j_max;
    if (h < i + 1 || h > j)
        throw TangleError("split index out of range");
    const Separation cw = info.direction == Crossing::clockwise ? s : s.inverse();
    const VertexSet outside = rc.cloud_outside(i, j);
    Separation split{(cw.small & outside) | rc.rainbow_span(i, h - 1), rc.rainbow_span(h, j) | (cw.big & outside)};
    return info.direction == Crossing::clockwise ? split : split.inverse();
}

/// i < h < j with i <= 2k, j >= M - 2k, W_i and W_j on one strict side and
/// W_h on the other.
inline bool slices_rainbow(const RCDecomposition& rc, const Separation& s, int k)
{
    const int m = rc.length();
    const VertexSet a = s.strict_small();
    const VertexSet b = s.strict_big();
    std::vector<int> side(static_cast<std::size_t>(m + 1), 0);
    std::vector<int> prefix_a(static_cast<std::size_t>(m + 2), 0);
    std::vector<int> prefix_b(static_cast<std::size_t>(m + 2), 0);
    for (int t = 0; t <= m; ++t)
    {
        const auto u = static_cast<std::size_t>(t);
        if (rc.bag(t).subset_of(a))
            side[u] = 1;
        else if (rc.bag(t).subset_of(b))
            side[u] = 2;
        prefix_a[u + 1] = prefix_a[u] + (side[u] == 1 ? 1 : 0);
        prefix_b[u + 1] = prefix_b[u] + (side[u] == 2 ? 1 : 0);
    }
    for (int i = 0; i <= std::min(2 * k, m); ++i)
    {
        const int si = side[static_cast<std::size_t>(i)];
        if (si == 0)
            continue;
        for (int j = std::max(m - 2 * k, i + 2); j <= m; ++j)
        {
            if (side[static_cast<std::size_t>(j)] != si)
                continue;
            const auto& other = si == 1 ? prefix_b : prefix_a;
            if (other[static_cast<std::size_t>(j)] - other[static_cast<std::size_t>(i + 1)] > 0)
                return true;
        }
    }
    return false;
}

inline bool slices_rainbow(const RCDecomposition& rc, const Separation& s)
{
    return slices_rainbow(rc, s, s.order());
}

enum class CutKind
{
    crossing,
    slicing,
    neither
};

inline CutKind classify_cross_or_slice(const RCDecomposition& rc, const Separation& s)
{
    if (classify_crossing(rc, s).direction != Crossing::none)
        return CutKind::crossing;
    if (slices_rainbow(rc, s))
        return CutKind::slicing;
    return CutKind::neither;
}

// ---------------------------------------------------------------------------
// Living in the rainbow

struct TurningPoint
{
    /// The clockwise orientation of the separation.
    Separation separation;
    int h_star = -1;
};

/// The turning point of a clockwise-crossing separation under t, or nullopt
/// when t orients it monotonically.
inline std::optional<int> turning_point(const RCDecomposition& rc, const Tangle& t, const Separation& cw)
{
    auto ij = detail::clockwise_indices(rc, cw, cw.order());
    if (!ij)
        throw TangleError("turning_point needs a clockwise-crossing separation");
    const auto [i, j] = *ij;
    if (j <= i + 1)
        return std::nullopt;
    const VertexSet outside = rc.cloud_outside(i, j);
    std::vector<bool> forward;
    for (int h = i + 1; h <= j; ++h)
    {
        Separation split{(cw.small & outside) | rc.rainbow_span(i, h - 1), rc.rainbow_span(h, j) | (cw.big & outside)};
        if (!t.orients(split))
            throw TangleError("split separation is not oriented by the tangle");
        forward.push_back(t.contains(split));
    }
    if (std::all_of(forward.begin(), forward.end(), [&](bool f) { return f == forward.front(); }))
        return std::nullopt;
    auto first_back = std::find(forward.begin(), forward.end(), false);
    if (first_back == forward.begin() || std::find(first_back, forward.end(), true) != forward.end())
        throw TangleError("tangle orients an increasing split sequence inconsistently");
    return i + static_cast<int>(first_back - forward.begin());
}

/// Clockwise orientations of the rainbow-crossing members of S_k.
inline std::vector<Separation> crossing_orientations(const RCDecomposition& rc, const SeparationSystem& system)
{
    std::vector<Separation> out;
    for (const auto& m : system.members())
        for (const Separation& s : {m, m.inverse()})
            if (detail::clockwise_indices(rc, s, s.order()))
                out.push_back(s);
    return out;
}

/// A member (A,B) of t with B \ A ⊆ V(R) \ V(C), first in canonical order.
inline std::optional<Separation> lr1_witness(const RCDecomposition& rc, const Tangle& t)
{
    const VertexSet inside = rc.rainbow() - rc.cloud;
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        Separation s = t.oriented(i);
        if (s.strict_big().subset_of(inside))
            return s;
    }
    return std::nullopt;
}

/// Every rainbow-crossing separation of order < k that t orients
/// non-monotonically, with its turning point.
inline std::vector<TurningPoint> turning_points(const RCDecomposition& rc, const Tangle& t)
{
    std::vector<TurningPoint> out;
    for (const auto& cw : crossing_orientations(rc, t.system()))
        if (auto h = turning_point(rc, t, cw))
            out.push_back({cw, *h});
    return out;
}

struct LivingVerdict
{
    enum class Kind
    {
        no,
        lr1,
        lr2
    };
    Kind kind = Kind::no;
    std::optional<Separation> witness;
    std::optional<TurningPoint> turning;

    [[nodiscard]] bool lives() const { return kind != Kind::no; }
};

inline LivingVerdict lives_in_rainbow(const RCDecomposition& rc, const Tangle& t)
{
    LivingVerdict v;
    if (auto w = lr1_witness(rc, t))
    {
        v.kind = LivingVerdict::Kind::lr1;
        v.witness = w;
        return v;
    }
    for (const auto& cw : crossing_orientations(rc, t.system()))
    {
        if (auto h = turning_point(rc, t, cw))
        {
            v.kind = LivingVerdict::Kind::lr2;
            v.turning = TurningPoint{cw, *h};
            return v;
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Shortening

struct ShortenResult
{
    RCDecomposition rc;
    int i = 0;
    int j = 0;
    LivingVerdict::Kind cause = LivingVerdict::Kind::no;
    /// First and last bag meeting Y \ X of the short witness (LR1 case).
    std::optional<std::pair<int, int>> witness_bags;
    /// The common turning point (LR2 case).
    std::optional<int> h_star;
};

namespace detail
{

/// A member (X,Y) of t with Y \ X inside a short run of bags r..s.
inline std::pair<Separation, std::pair<int, int>> short_witness(const Graph& g, const RCDecomposition& rc,
                                                               const Tangle& t)
{
    const int m = rc.length();
    const int k = t.k();
    if (2 * rc.adhesion() + rc.sun.size() < k)
    {
        for (int h = 0; h <= m; ++h)
        {
            Separation cut = rainbow_separation(rc, h, h).inverse();
            if (t.contains(cut))
                return {cut, {h, h}};
        }
        throw TangleError("short witness: every single-bag slice points into the rainbow");
    }
    const VertexSet inside = rc.rainbow() - rc.cloud;
    std::vector<Separation> cands;
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        Separation s = t.oriented(i);
        if (s.strict_big().subset_of(inside))
            cands.push_back(s);
    }
    if (cands.empty())
        throw TangleError("short witness: no member points into the rainbow");
    std::vector<Separation> tops;
    for (std::size_t i : maximal_elements(cands))
        tops.push_back(cands[i]);
    Separation w = *std::min_element(tops.begin(), tops.end(), canonical_less);
    if (!g.connected_within(w.strict_big()))
        throw TangleError("short witness: maximal witness has a disconnected strict side");
    int r = -1;
    int s = -1;
    for (int h = 0; h <= m; ++h)
    {
        if (rc.bag(h).intersects(w.strict_big()))
        {
            if (r < 0)
                r = h;
            s = h;
        }
    }
    return {w, {r, s}};
}

} // namespace detail

/// A slice of rc of length at least M/2 - k in whose rainbow t does not live.
inline ShortenResult shorten_to_not_living(const Graph& g, const RCDecomposition& rc, const Tangle& t)
{
    const int m = rc.length();
    const int k = t.k();
    if (m < 6 * k)
        throw TangleError("shorten_to_not_living needs length at least 6k");
    ShortenResult out;
    LivingVerdict v = lives_in_rainbow(rc, t);
    out.cause = v.kind;
    int i = 0;
    int j = m;
    if (v.kind == LivingVerdict::Kind::lr1)
    {
        auto [w, rs] = detail::short_witness(g, rc, t);
        out.witness_bags = rs;
        const auto [r, s] = rs;
        // r > M/2 - k
        if (2 * r > m - 2 * k)
            j = r - 1;
        else
            i = s + 1;
    }
    else if (v.kind == LivingVerdict::Kind::lr2)
    {
        const int h = v.turning->h_star;
        for (const auto& tp : turning_points(rc, t))
            if (tp.h_star != h)
                throw TangleError("non-monotone crossing separations disagree on the turning point");
        out.h_star = h;
        if (2 * h >= m)
            j = h - 1;
        else
            i = h + 1;
    }
    if (i > j || 2 * (j - i) < m - 2 * k)
        throw TangleError("shortened rainbow is too short");
    out.i = i;
    out.j = j;
    out.rc = slice_rc(rc, i, j);
    if (lives_in_rainbow(out.rc, t).lives())
        throw TangleError("tangle still lives in the shortened rainbow");
    return out;
}

// ---------------------------------------------------------------------------
// Edge choice and extension

inline int min_degree(const Graph& g)
{
    int d = kMaxVertices;
    g.vertices().for_each([&](int v) { d = std::min(d, g.degree(v)); });
    return d;
}

struct EdgeChoice
{
    Edge edge;
    /// An RC-decomposition of both g and g - e of even length M with the
    /// edge at the middle bag W_{M/2}.
    RCDecomposition rc;
    int original_length = 0;
    int shorten_i = 0;
    int shorten_j = 0;
};

/// Shorten until t does not live in the rainbow, make the length even,
/// merge the three middle bags and pick the least qualifying edge there.
inline EdgeChoice choose_edge(const Graph& g, const RCDecomposition& rc, const Tangle& t)
{
    if (rc.adhesion() + rc.sun.size() < 1)
        throw TangleError("choose_edge needs adhesion plus sun size at least 1");
    if (rc.sun.empty() && min_degree(g) < 3)
        throw TangleError("choose_edge needs minimum degree at least 3 when the sun is empty");
    EdgeChoice out;
    out.original_length = rc.length();
    ShortenResult sr = shorten_to_not_living(g, rc, t);
    out.shorten_i = sr.i;
    out.shorten_j = sr.j;
    RCDecomposition even = sr.rc;
    if (even.length() % 2 != 0)
    {
        RCDecomposition cut = slice_rc(even, 0, even.length() - 1);
        if (lives_in_rainbow(cut, t).lives())
        {
            cut = slice_rc(even, 1, even.length());
            ++out.shorten_i;
        }
        else
        {
            --out.shorten_j;
        }
        even = cut;
    }
    const int mid = even.length() / 2;
    if (mid < 1)
        throw TangleError("choose_edge: rainbow too short to merge the middle bags");
    RCDecomposition merged = merge_bags(even, mid - 1, mid + 1);
    if (lives_in_rainbow(merged, t).lives())
        throw TangleError("choose_edge: tangle lives in the merged rainbow");
    const int centre = merged.length() / 2;
    const VertexSet bag = merged.bag(centre);

    std::vector<Edge> cands;
    if (!merged.sun.empty())
    {
        for (const auto& e : g.edges())
            if ((merged.sun.contains(e.u) && bag.contains(e.v)) || (merged.sun.contains(e.v) && bag.contains(e.u)))
                cands.push_back(e);
    }
    else
    {
        Linkage p = max_linkage(g, merged.adhesion_set(centre), merged.adhesion_set(centre + 1), bag);
        std::vector<Edge> on_p;
        for (const auto& path : p.paths)
            for (std::size_t i = 0; i + 1 < path.size(); ++i)
                on_p.emplace_back(path[i], path[i + 1]);
        for (const auto& e : g.induced(bag).edges())
            if (std::find(on_p.begin(), on_p.end(), e) == on_p.end() && delete_edge(g, e).connected_within(bag))
                cands.push_back(e);
    }
    for (const auto& e : cands)
    {
        if (validate_rc(delete_edge(g, e), merged).all())
        {
            out.edge = e;
            out.rc = merged;
            return out;
        }
    }
    throw TangleError("choose_edge: no edge keeps the decomposition valid");
}

struct ExtensionOptions
{
    /// Skip the length-18k and minimum-degree preconditions.
    bool relaxed = false;
};

struct RCExtension
{
    Survivor result;
    std::size_t forced = 0;
    std::size_t by_cloud = 0;
};

/// The k-tangle of g - e extending t: forced orientations first, otherwise
/// towards the side whose e-component meets the cloud.
inline RCExtension extend_after_deletion(const Graph& g, const Tangle& t, const EdgeChoice& choice,
                                         const ExtensionOptions& opts = {})
{
    const int k = t.k();
    if (!opts.relaxed)
    {
        if (choice.original_length < 18 * k)
            throw TangleError("extend_after_deletion needs an RC-decomposition of length at least 18k");
        if (min_degree(g) < 3)
            throw TangleError("extend_after_deletion needs minimum degree at least 3");
    }
    const Edge e = choice.edge;
    if (!g.has_edge(e))
        throw TangleError("no such edge");
    const VertexSet cloud = choice.rc.cloud;
    Graph h = delete_edge(g, e);
    std::vector<Separation> tmax = maximal_members(t);
    RCExtension out;
    Tangle ext = orientation_by(make_system(h, k), [&](const Separation& s) {
        if (auto f = forced_orientation(tmax, s))
        {
            ++out.forced;
            return *f == s;
        }
        if (s.is_separation_of(g))
            throw TangleError("extend_after_deletion: separation of g not forced by the tangle");
        const VertexSet rest = h.vertices() - s.separator();
        const int in_a = s.strict_small().contains(e.u) ? e.u : e.v;
        const int in_b = e.other(in_a);
        const bool a_meets = h.reach(in_a, rest).intersects(cloud);
        const bool b_meets = h.reach(in_b, rest).intersects(cloud);
        if (a_meets == b_meets)
            throw TangleError("extend_after_deletion: both or neither edge component meets the cloud");
        ++out.by_cloud;
        return b_meets;
    });
    detail::verify_extension(h, t, ext, "extend_after_deletion");
    out.result = {h, ext, e};
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic instances

struct SynthRCOptions
{
    int length = 8;
    int ell = 2;
    int sun = 1;
    /// Size of the cloud clique.
    int cloud = 4;
    /// Optional clique inside bag `pocket_bag`, attached to column
    /// pocket_bag + 1 (or to both columns of the bag when `pocket_wide`).
    int pocket_bag = -1;
    int pocket_size = 0;
    bool pocket_wide = false;
};

struct SynthRC
{
    Graph graph;
    RCDecomposition rc;
    VertexSet cloud_clique;
    VertexSet pocket;
};

/// ℓ horizontal paths over columns 0..M+1 joined vertically in each column,
/// bag W_i = columns i, i+1; sun vertices each adjacent to one vertex per
/// bag; a clique joined to U_0 ∪ U_{M+1} ∪ Z. With ℓ = 0 each bag is a
/// single vertex.
inline SynthRC synth_rc(const SynthRCOptions& o)
{
    const int m = o.length;
    const int ell = o.ell;
    if (m < 0 || ell < 0 || o.sun < 0 || o.cloud < 0 || o.pocket_size < 0)
        throw TangleError("synth_rc: negative parameter");
    if (o.pocket_size > 0 && (o.pocket_bag < 0 || o.pocket_bag > m || ell == 0))
        throw TangleError("synth_rc: pocket bag out of range");
    if (m == 0 && ell > 0)
        throw TangleError("synth_rc: a single bag needs adhesion 0");
    const int columns = m + 2;
    const int nr = ell == 0 ? m + 1 : columns * ell;
    const int total = nr + o.sun + o.cloud + o.pocket_size;
    if (total > kMaxVertices)
        throw TangleError("synth_rc: too many vertices");
    auto at = [&](int c, int r) { return c * ell + r; };
    SynthRC out;
    Graph& g = out.graph;
    g = Graph::empty(total);
    std::vector<VertexSet> bags(static_cast<std::size_t>(m + 1));
    VertexSet ends;
    if (ell == 0)
    {
        for (int i = 0; i <= m; ++i)
            bags[static_cast<std::size_t>(i)] = VertexSet{i};
    }
    else
    {
        for (int c = 0; c < columns; ++c)
            for (int r = 0; r < ell; ++r)
            {
                if (c + 1 < columns)
                    g.add_edge(at(c, r), at(c + 1, r));
                if (r + 1 < ell)
                    g.add_edge(at(c, r), at(c, r + 1));
            }
        for (int i = 0; i <= m; ++i)
            for (int r = 0; r < ell; ++r)
            {
                bags[static_cast<std::size_t>(i)].insert(at(i, r));
                bags[static_cast<std::size_t>(i)].insert(at(i + 1, r));
            }
        for (int r = 0; r < ell; ++r)
        {
            ends.insert(at(0, r));
            ends.insert(at(m + 1, r));
        }
    }
    VertexSet sun;
    for (int a = 0; a < o.sun; ++a)
    {
        const int z = nr + a;
        sun.insert(z);
        for (int i = 0; i <= m; ++i)
            g.add_edge(z, ell == 0 ? i : at(i + 1, a % ell));
    }
    VertexSet clique;
    for (int c = 0; c < o.cloud; ++c)
        clique.insert(nr + o.sun + c);
    clique.for_each([&](int c) {
        clique.for_each([&](int d) {
            if (c < d)
                g.add_edge(c, d);
        });
        (ends | sun).for_each([&](int x) { g.add_edge(c, x); });
    });
    VertexSet pocket;
    for (int p = 0; p < o.pocket_size; ++p)
        pocket.insert(nr + o.sun + o.cloud + p);
    if (!pocket.empty())
    {
        VertexSet anchor;
        for (int r = 0; r < ell; ++r)
        {
            anchor.insert(at(o.pocket_bag + 1, r));
            if (o.pocket_wide)
                anchor.insert(at(o.pocket_bag, r));
        }
        pocket.for_each([&](int p) {
            pocket.for_each([&](int q) {
                if (p < q)
                    g.add_edge(p, q);
            });
            anchor.for_each([&](int x) { g.add_edge(p, x); });
        });
        bags[static_cast<std::size_t>(o.pocket_bag)] |= pocket;
    }
    out.rc.bags.bags = std::move(bags);
    out.rc.sun = sun;
    out.rc.cloud = clique | ends | sun;
    out.cloud_clique = clique;
    out.pocket = pocket;
    return out;
}

// ---------------------------------------------------------------------------
// File format: sections RAINBOW-BAGS (one bag per line), SUN, CLOUD-VERTICES
// and an optional LINKAGE (one path per line).

struct RCFile
{
    RCDecomposition rc;
    std::optional<Linkage> linkage;
};

inline RCFile parse_rc(const std::string& text)
{
    enum class Section
    {
        none,
        bags,
        sun,
        cloud,
        linkage
    };
    RCFile out;
    Section sec = Section::none;
    bool seen_bags = false;
    bool seen_cloud = false;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        std::string word = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
        if (word == "RAINBOW-BAGS")
        {
            sec = Section::bags;
            seen_bags = true;
            continue;
        }
        if (word == "SUN")
        {
            sec = Section::sun;
            continue;
        }
        if (word == "CLOUD-VERTICES")
        {
            sec = Section::cloud;
            seen_cloud = true;
            continue;
        }
        if (word == "LINKAGE")
        {
            sec = Section::linkage;
            out.linkage = Linkage{};
            continue;
        }
        auto ints = detail::parse_int_line(line, lineno);
        VertexSet set;
        for (int v : ints)
        {
            VertexSet::check_label(v);
            set.insert(v);
        }
        switch (sec)
        {
        case Section::none:
            throw TangleError("line " + std::to_string(lineno) + ": data before a section header");
        case Section::bags:
            out.rc.bags.bags.push_back(set);
            break;
        case Section::sun:
            out.rc.sun |= set;
            break;
        case Section::cloud:
            out.rc.cloud |= set;
            break;
        case Section::linkage:
            out.linkage->paths.push_back(ints);
            break;
        }
    }
    if (!seen_bags || out.rc.bags.bags.empty())
        throw TangleError("RC file has no RAINBOW-BAGS");
    if (!seen_cloud)
        throw TangleError("RC file has no CLOUD-VERTICES");
    return out;
}

inline void write_rc(std::ostream& out, const RCDecomposition& rc, const Linkage* linkage = nullptr)
{
    auto line = [&](const VertexSet& s) {
        bool first = true;
        s.for_each([&](int v) {
            out << (first ? "" : " ") << v;
            first = false;
        });
        out << '\n';
    };
    out << "RAINBOW-BAGS\n";
    for (const auto& b : rc.bags.bags)
        line(b);
    out << "SUN\n";
    if (!rc.sun.empty())
        line(rc.sun);
    out << "CLOUD-VERTICES\n";
    line(rc.cloud);
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

#endif // TANGLES_RAINBOW_CLOUD_HPP_INCLUDED
