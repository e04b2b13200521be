#ifndef CBIR_PARALLEL_HPP
#define CBIR_PARALLEL_HPP

#include <optional>
#include <string_view>

namespace cbir {

// Caps the number of OpenMP threads used by the parallel kernels and by
// per-image extraction during index builds. 0 restores the runtime default.
void set_thread_cap(int threads);

[[nodiscard]] int thread_cap() noexcept;

// Parses a CBIR_THREADS value: a non-negative integer, 0 meaning "auto".
[[nodiscard]] std::optional<int> parse_thread_env(std::string_view text);

// Reads CBIR_THREADS from the environment and applies it. Returns false if the
// variable is set but malformed (the cap is left unchanged).
bool apply_thread_env();

}  // namespace cbir

#endif  // CBIR_PARALLEL_HPP
