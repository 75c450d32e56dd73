#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace auditsim {

/// Domain time: milliseconds since the Unix epoch. All schedules, triggers
/// and record timestamps use this unit, in both simulated and wall modes.
using TimeMs = std::int64_t;

constexpr TimeMs kMillisPerSecond = 1000;
constexpr TimeMs kMillisPerMinute = 60 * kMillisPerSecond;

constexpr TimeMs seconds(std::int64_t s) { return s * kMillisPerSecond; }

/// Smallest minute boundary strictly after `t`. A `t` that already sits on
/// a boundary yields the following minute.
constexpr TimeMs next_minute_after(TimeMs t)
{
    return t - (t % kMillisPerMinute) + kMillisPerMinute;
}

// ---------------------------------------------------------------------------
// Deterministic hashing / random streams.
//
// Everything random in the harness is derived from a user seed through the
// splitmix64 finalizer, so runs are reproducible across platforms and
// independent of std::hash or libstdc++ distribution internals.
// ---------------------------------------------------------------------------

constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Order-sensitive accumulator for building derived seeds out of structured
/// keys (strings, integers). feed() chains mix64 over the content.
class HashChain {
public:
    explicit HashChain(std::uint64_t seed = 0) : state_(mix64(seed ^ 0x5bf0'3e9c'51ab'77d1ull)) {}

    HashChain& feed(std::uint64_t v)
    {
        state_ = mix64(state_ ^ v);
        return *this;
    }

    HashChain& feed(std::int64_t v) { return feed(static_cast<std::uint64_t>(v)); }
    HashChain& feed(int v) { return feed(static_cast<std::uint64_t>(static_cast<std::int64_t>(v))); }

    HashChain& feed(std::string_view s)
    {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return feed(h).feed(static_cast<std::uint64_t>(s.size()));
    }

    std::uint64_t digest() const { return mix64(state_); }

private:
    std::uint64_t state_;
};

/// Counter-based random stream seeded from a HashChain digest.
/// next_u64/next_double are pure functions of (seed, call index).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() { return mix64(seed_ ^ mix64(counter_++)); }

    /// Uniform in [0, 1).
    double next_double()
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (one value per call; no cache so the
    /// stream stays a pure function of the call index).
    double next_normal();

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

inline double RandomStream::next_normal()
{
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0)
        u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// ---------------------------------------------------------------------------
// Small string helpers shared by wire formats and payload generation.
// ---------------------------------------------------------------------------

inline std::string percent_encode(std::string_view in)
{
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(in.size());
    for (unsigned char c : in) {
        bool plain = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                     (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' || c == '~';
        if (plain) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        }
    }
    return out;
}

inline std::string percent_decode(std::string_view in)
{
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    std::string out;
    out.reserve(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i] == '%' && i + 2 < in.size()) {
            int hi = nibble(in[i + 1]);
            int lo = nibble(in[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>(hi * 16 + lo));
                i += 2;
                continue;
            }
        }
        out.push_back(in[i]);
    }
    return out;
}

/// Decodes the UTF-8 code point starting at `i`; advances `i` past it.
/// Malformed bytes decode as themselves (latin-1 fallback) one at a time.
inline char32_t utf8_next(std::string_view s, std::size_t& i)
{
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = c;
    if (c >= 0xF0)
        len = 4, cp = c & 0x07;
    else if (c >= 0xE0)
        len = 3, cp = c & 0x0F;
    else if (c >= 0xC0)
        len = 2, cp = c & 0x1F;
    if (len > 1) {
        if (i + len > s.size()) {
            ++i;
            return c;
        }
        for (std::size_t k = 1; k < len; ++k) {
            unsigned char cont = static_cast<unsigned char>(s[i + k]);
            if ((cont & 0xC0) != 0x80) {
                ++i;
                return c;
            }
            cp = (cp << 6) | (cont & 0x3F);
        }
    }
    i += len;
    return cp;
}

inline void utf8_append(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string format_bytes(double bytes)
{
    char buf[64];
    if (bytes >= 1024.0 * 1024.0 * 1024.0)
        std::snprintf(buf, sizeof buf, "%.2f GB", bytes / (1024.0 * 1024.0 * 1024.0));
    else if (bytes >= 1024.0 * 1024.0)
        std::snprintf(buf, sizeof buf, "%.2f MB", bytes / (1024.0 * 1024.0));
    else if (bytes >= 1024.0)
        std::snprintf(buf, sizeof buf, "%.2f KB", bytes / 1024.0);
    else
        std::snprintf(buf, sizeof buf, "%.0f B", bytes);
    return buf;
}

} // namespace auditsim
