// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace ousamp {

/// 0 selects std::thread::hardware_concurrency().
unsigned resolve_threads(unsigned requested) noexcept;

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work items
/// must write only to their own slot; if several throw, the exception of the
/// lowest index is rethrown so failures do not depend on scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace ousamp
