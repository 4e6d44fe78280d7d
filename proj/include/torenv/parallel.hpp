#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace torenv {

/// Process-wide worker count for node maps (1 = sequential).  Set once by
/// the CLI; results must not depend on it (block-partitioned maps only).
int& thread_count();

/// Deterministic parallel map over [0, count): partitions the range into
/// contiguous blocks, one per worker.  `fn(i)` must write only to slot i
/// of its outputs.  With thread_count()==1 this is a plain loop.
void parallel_nodes(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Block variant: fn(begin, end) on contiguous subranges.
void parallel_blocks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace torenv
