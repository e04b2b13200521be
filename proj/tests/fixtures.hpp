#ifndef CBIR_TESTS_FIXTURES_HPP
#define CBIR_TESTS_FIXTURES_HPP

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include "cbir/index_store.hpp"
#include "cbir/synth.hpp"

namespace fixtures {

namespace fs = std::filesystem;

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        std::random_device rd;
        path_ = fs::temp_directory_path() /
                ("cbir_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& leaf) const { return path_ / leaf; }

private:
    fs::path path_;
};

// root/<category>/<category>_NN.png for the first `categories` desk categories.
inline void write_corpus(const fs::path& root, int categories, int per_category, int size = 96) {
    const auto cats = cbir::synth::desk_categories();
    for (int c = 0; c < categories; ++c) {
        fs::create_directories(root / cats[c]);
        for (int i = 0; i < per_category; ++i) {
            const auto img = cbir::synth::desk_scene(cats[c], i, size);
            cbir::synth::write_file(root / cats[c] / (cats[c] + "_0" + std::to_string(i) + ".png"),
                                    cbir::synth::encode_png(img));
        }
    }
}

inline fs::path desk_corpus() { return fs::path(CBIR_SOURCE_DIR) / "data" / "desk_corpus"; }

// Built once per test process.
inline const cbir::IndexFile& desk_index() {
    static const cbir::IndexFile idx = cbir::build_index(desk_corpus());
    return idx;
}

}  // namespace fixtures

#endif
