#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace auditsim {

/// One agent's ordered walk over (engine, query) pairs.
///
/// An agent initialized at engine offset s executes, for step k,
///   engine index (s + k) mod E,  query index k mod Q,
/// shifting engine and query simultaneously each cycle. The schedule covers
/// the query list `iterations` times end to end.
struct RotationSchedule {
    struct Pair {
        int engine_index = 0;
        int query_index = 0;
        bool operator==(const Pair& o) const
        {
            return engine_index == o.engine_index && query_index == o.query_index;
        }
        bool operator<(const Pair& o) const
        {
            return engine_index != o.engine_index ? engine_index < o.engine_index
                                                  : query_index < o.query_index;
        }
    };

    std::vector<Pair> pairs;
    int start_offset = 0;

    std::size_t size() const { return pairs.size(); }

    /// Iteration (0-based repetition of the query list) step k belongs to.
    int iteration_of(std::size_t k, int query_count) const
    {
        return static_cast<int>(k) / query_count;
    }
};

inline RotationSchedule rotation_schedule(int engines, int queries, int iterations,
                                          int start_offset)
{
    if (engines < 1)
        throw std::invalid_argument("rotation_schedule: need at least one engine");
    if (queries < 1)
        throw std::invalid_argument("rotation_schedule: need at least one query");
    if (iterations < 1)
        throw std::invalid_argument("rotation_schedule: need at least one iteration");
    if (start_offset < 0 || start_offset >= engines)
        throw std::invalid_argument("rotation_schedule: start offset must be in [0, engines)");

    RotationSchedule sched;
    sched.start_offset = start_offset;
    sched.pairs.reserve(static_cast<std::size_t>(queries) * iterations);
    for (int k = 0; k < queries * iterations; ++k)
        sched.pairs.push_back({(start_offset + k) % engines, k % queries});
    return sched;
}

} // namespace auditsim
