#include "cbir/parallel.hpp"

#include <omp.h>

#include <charconv>
#include <cstdlib>

namespace cbir {

namespace {
int g_default_threads = omp_get_max_threads();
int g_cap = 0;
}  // namespace

void set_thread_cap(int threads) {
    g_cap = threads > 0 ? threads : 0;
    omp_set_num_threads(g_cap > 0 ? g_cap : g_default_threads);
}

int thread_cap() noexcept { return g_cap; }

std::optional<int> parse_thread_env(std::string_view text) {
    int value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || value < 0) {
        return std::nullopt;
    }
    return value;
}

bool apply_thread_env() {
    const char* raw = std::getenv("CBIR_THREADS");
    if (raw == nullptr) return true;
    auto parsed = parse_thread_env(raw);
    if (!parsed) return false;
    set_thread_cap(*parsed);
    return true;
}

}  // namespace cbir
