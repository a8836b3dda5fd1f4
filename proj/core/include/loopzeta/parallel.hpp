#pragma once

#include <cstddef>
#include <functional>

namespace loopzeta {

/// Runs body(i) for i in [0, count). Implementations may run items
/// concurrently; body must only touch per-index state.
using ParallelFor = std::function<void(std::size_t count, const std::function<void(std::size_t)>& body)>;

inline void serial_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace loopzeta
