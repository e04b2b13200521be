// Writes the bundled four-category corpus as PNG files:
//   make_desk_corpus <out_dir> [--per-category N] [--size S]

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>

#include "cbir/synth.hpp"

int main(int argc, char** argv) {
    CLI::App app{"generate the synthetic desk corpus"};
    std::string out_dir;
    int per_category = 8;
    int size = 256;
    app.add_option("out_dir", out_dir)->required();
    app.add_option("--per-category", per_category)->check(CLI::PositiveNumber);
    app.add_option("--size", size)->check(CLI::Range(16, 4096));
    CLI11_PARSE(app, argc, argv);

    namespace fs = std::filesystem;
    for (const auto& cat : cbir::synth::desk_categories()) {
        const fs::path dir = fs::path(out_dir) / cat;
        fs::create_directories(dir);
        for (int i = 0; i < per_category; ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "%s_%02d.png", cat.c_str(), i);
            const auto img = cbir::synth::desk_scene(cat, i, size);
            cbir::synth::write_file(dir / name, cbir::synth::encode_png(img));
        }
    }
    return 0;
}
