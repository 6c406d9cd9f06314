#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bltt::detail {

/// Per-thread buffer of at least n elements, reused across calls. Contents
/// are unspecified. Callers that may be active at the same time on one
/// thread must use different slots.
template <typename T, int Slot>
std::span<T> scratch(std::size_t n) {
  thread_local std::vector<T> buffer;
  if (buffer.size() < n) buffer.resize(n);
  return {buffer.data(), n};
}

} // namespace bltt::detail
