#ifndef TANGLES_VERTEX_SET_HPP_INCLUDED
#define TANGLES_VERTEX_SET_HPP_INCLUDED

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tangles
{

/// Largest supported vertex label plus one. Every exhaustive routine in the
/// library works on fixed-width masks of this size.
inline constexpr int kMaxVertices = 128;

/// Base class of every error raised by the library.
class TangleError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A set of vertex labels in [0, kMaxVertices) stored as a two-word bit mask.
class VertexSet
{
public:
    static constexpr int kWords = kMaxVertices / 64;

    constexpr VertexSet() = default;

    VertexSet(std::initializer_list<int> labels)
    {
        for (int v : labels)
            insert(v);
    }

    static VertexSet from(const std::vector<int>& labels)
    {
        VertexSet s;
        for (int v : labels)
            s.insert(v);
        return s;
    }

    /// The set {0, ..., n-1}.
    static VertexSet range(int n)
    {
        VertexSet s;
        for (int v = 0; v < n; ++v)
            s.insert(v);
        return s;
    }

    static void check_label(int v)
    {
        if (v < 0 || v >= kMaxVertices)
            throw TangleError("vertex label " + std::to_string(v) + " out of range [0, " +
                              std::to_string(kMaxVertices) + ")");
    }

    void insert(int v)
    {
        check_label(v);
        words_[v >> 6] |= (std::uint64_t{1} << (v & 63));
    }

    void erase(int v)
    {
        check_label(v);
        words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
    }

    [[nodiscard]] bool contains(int v) const
    {
        if (v < 0 || v >= kMaxVertices)
            return false;
        return (words_[v >> 6] >> (v & 63)) & 1U;
    }

    [[nodiscard]] int size() const
    {
        int n = 0;
        for (auto w : words_)
            n += std::popcount(w);
        return n;
    }

    [[nodiscard]] bool empty() const
    {
        for (auto w : words_)
            if (w != 0)
                return false;
        return true;
    }

    [[nodiscard]] bool subset_of(const VertexSet& other) const
    {
        for (int i = 0; i < kWords; ++i)
            if ((words_[i] & ~other.words_[i]) != 0)
                return false;
        return true;
    }

    [[nodiscard]] bool intersects(const VertexSet& other) const
    {
        for (int i = 0; i < kWords; ++i)
            if ((words_[i] & other.words_[i]) != 0)
                return true;
        return false;
    }

    /// Smallest label in the set, or -1 when empty.
    [[nodiscard]] int min() const
    {
        for (int i = 0; i < kWords; ++i)
            if (words_[i] != 0)
                return i * 64 + std::countr_zero(words_[i]);
        return -1;
    }

    /// Largest label in the set, or -1 when empty.
    [[nodiscard]] int max() const
    {
        for (int i = kWords - 1; i >= 0; --i)
            if (words_[i] != 0)
                return i * 64 + 63 - std::countl_zero(words_[i]);
        return -1;
    }

    /// Smallest label strictly greater than v, or -1.
    [[nodiscard]] int next(int v) const
    {
        int start = v + 1;
        if (start >= kMaxVertices)
            return -1;
        int wi = start >> 6;
        std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (start & 63));
        while (true)
        {
            if (w != 0)
                return wi * 64 + std::countr_zero(w);
            if (++wi >= kWords)
                return -1;
            w = words_[wi];
        }
    }

    template <typename F>
    void for_each(F&& f) const
    {
        for (int i = 0; i < kWords; ++i)
        {
            std::uint64_t w = words_[i];
            while (w != 0)
            {
                int bit = std::countr_zero(w);
                f(i * 64 + bit);
                w &= w - 1;
            }
        }
    }

    [[nodiscard]] std::vector<int> to_vector() const
    {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(size()));
        for_each([&](int v) { out.push_back(v); });
        return out;
    }

    VertexSet& operator|=(const VertexSet& o)
    {
        for (int i = 0; i < kWords; ++i)
            words_[i] |= o.words_[i];
        return *this;
    }
    VertexSet& operator&=(const VertexSet& o)
    {
        for (int i = 0; i < kWords; ++i)
            words_[i] &= o.words_[i];
        return *this;
    }
    VertexSet& operator-=(const VertexSet& o)
    {
        for (int i = 0; i < kWords; ++i)
            words_[i] &= ~o.words_[i];
        return *this;
    }

    friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
    friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
    friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }
    friend VertexSet operator^(VertexSet a, const VertexSet& b)
    {
        for (int i = 0; i < kWords; ++i)
            a.words_[i] ^= b.words_[i];
        return a;
    }

    friend bool operator==(const VertexSet&, const VertexSet&) = default;

    /// Lexicographic comparison of the sorted label lists.
    [[nodiscard]] static bool lex_less(const VertexSet& a, const VertexSet& b)
    {
        VertexSet diff;
        for (int i = 0; i < kWords; ++i)
            diff.words_[i] = a.words_[i] ^ b.words_[i];
        int x = diff.min();
        if (x < 0)
            return false;
        if (b.contains(x))
            return a.next(x) < 0;
        return b.next(x) >= 0;
    }

    [[nodiscard]] std::size_t hash() const
    {
        std::uint64_t h = words_[0] * 0x9E3779B97F4A7C15ULL;
        h ^= words_[1] + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }

    [[nodiscard]] const std::array<std::uint64_t, kWords>& words() const { return words_; }

private:
    std::array<std::uint64_t, kWords> words_{};
};

inline std::ostream& operator<<(std::ostream& os, const VertexSet& s)
{
    os << '[';
    bool first = true;
    s.for_each([&](int v) {
        if (!first)
            os << ", ";
        os << v;
        first = false;
    });
    return os << ']';
}

} // namespace tangles

template <>
struct std::hash<tangles::VertexSet>
{
    std::size_t operator()(const tangles::VertexSet& s) const noexcept { return s.hash(); }
};

#endif // TANGLES_VERTEX_SET_HPP_INCLUDED
