#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>

namespace retint {

/// Stable sub-seed for a labelled stage (and optional replicate index) of a run.
///
/// Depends only on its arguments, so adding a stage never shifts another stage's stream.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t root, std::string_view label, std::uint64_t index = 0) noexcept;

/// Runs body(i) for i in [0, count) on up to `jobs` threads; jobs <= 1 runs inline.
/// The first exception thrown by any task is rethrown after all threads join.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body);

/// Hardware concurrency, at least 1.
[[nodiscard]] unsigned default_jobs() noexcept;

}  // namespace retint
