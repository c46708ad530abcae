#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <utility>

namespace cert {

inline constexpr std::size_t kDefaultStackBytes = std::size_t(1) << 30;

/// Runs `fn` on a fresh thread with a `bytes`-sized stack and waits for it.
/// Exceptions thrown by `fn` are rethrown in the caller.
void run_on_large_stack(const std::function<void()>& fn, std::size_t bytes = kDefaultStackBytes);

template <typename F>
auto with_large_stack(F&& fn, std::size_t bytes = kDefaultStackBytes) {
  using R = decltype(fn());
  std::optional<R> out;
  run_on_large_stack([&] { out.emplace(fn()); }, bytes);
  return std::move(*out);
}

}  // namespace cert
