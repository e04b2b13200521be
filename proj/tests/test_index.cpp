#include <doctest.h>

#include <fstream>
#include <random>
#include <set>

#include "cbir/error.hpp"
#include "cbir/index_store.hpp"
#include "fixtures.hpp"
#include "random_index.hpp"

using namespace cbir;

namespace {

ErrorCode load_error(std::span<const std::uint8_t> bytes) {
    try {
        (void)deserialize_index(bytes);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a load error");
    return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("randomized indexes round trip bit-exactly") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 50; ++trial) {
        const auto idx = testgen::random_index(rng);
        const auto bytes = serialize_index(idx);
        const auto back = deserialize_index(bytes);
        CHECK(back == idx);
        CHECK(serialize_index(back) == bytes);
    }
}

TEST_CASE("corrupt files are rejected") {
    std::mt19937_64 rng(4);
    const auto idx = testgen::random_index(rng);
    const auto bytes = serialize_index(idx);

    auto bad = bytes;
    bad[0] = 'X';
    CHECK(load_error(bad) == ErrorCode::BadMagic);
    CHECK(load_error(std::vector<std::uint8_t>{'P', 'N'}) == ErrorCode::BadMagic);

    std::uniform_int_distribution<std::size_t> cut(0, bytes.size() - 1);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = cut(rng);
        const std::span<const std::uint8_t> prefix(bytes.data(), n);
        CHECK(load_error(prefix) == ErrorCode::TruncatedFile);
    }

    auto version = bytes;
    version[4] = 9;
    CHECK(load_error(version) == ErrorCode::UnsupportedVersion);

    auto extra = bytes;
    extra.push_back(0);
    CHECK(load_error(extra) == ErrorCode::TrailingBytes);

    auto flipped = bytes;
    flipped[bytes.size() / 2] ^= 0x10;
    const auto code = load_error(flipped);
    CHECK((code == ErrorCode::ChecksumMismatch || code == ErrorCode::TruncatedFile ||
           code == ErrorCode::InvalidArgument || code == ErrorCode::TrailingBytes));

    auto crc = bytes;
    crc.back() ^= 0xff;
    CHECK(load_error(crc) == ErrorCode::ChecksumMismatch);
}

TEST_CASE("record count must agree with the bytes present") {
    IndexFile idx;
    idx.category_models = {{"a", {}}, {"b", {}}};
    auto bytes = serialize_index(idx);
    // With no records the count sits just before the CRC trailer.
    bytes[bytes.size() - 8] = 1;
    const auto crc = crc32_of(std::span<const std::uint8_t>(bytes.data(), bytes.size() - 4));
    for (int i = 0; i < 4; ++i) bytes[bytes.size() - 4 + i] = static_cast<std::uint8_t>(crc >> (8 * i));
    CHECK(load_error(bytes) == ErrorCode::TruncatedFile);
}

TEST_CASE("build_index on a small tree") {
    fixtures::TempDir dir;
    fixtures::write_corpus(dir.path(), 2, 2, 64);
    std::vector<std::string> skipped;
    // Stray files are skipped and reported.
    cbir::synth::write_file(dir / "animal/zz_notes.png", std::vector<std::uint8_t>{'h', 'i'});
    const auto idx = build_index(dir.path(), {}, [&](const std::string& p, const std::string&) { skipped.push_back(p); });
    REQUIRE(idx.records.size() == 4);
    CHECK(skipped.size() == 1);
    CHECK(idx.category_models.size() == 2);
    std::vector<std::string> paths;
    for (std::uint32_t i = 0; i < 4; ++i) {
        CHECK(idx.records[i].image_id == i);
        paths.push_back(idx.records[i].path);
    }
    CHECK(std::is_sorted(paths.begin(), paths.end()));
    CHECK(idx.records[0].category == "animal");
    CHECK(idx.records[3].category == "face");
    CHECK(paths[0] == "animal/animal_00.png");

    const auto again = build_index(dir.path());
    CHECK(serialize_index(again) == serialize_index(idx));

    const auto file = dir / "idx.cbir";
    save_index(idx, file);
    CHECK(load_index(file) == idx);
}

TEST_CASE("build_index errors") {
    fixtures::TempDir one;
    fixtures::write_corpus(one.path(), 1, 2, 32);
    CHECK_THROWS_WITH_AS((void)build_index(one.path()), doctest::Contains("TooFewCategories"), Error);

    fixtures::TempDir empty_cat;
    fixtures::write_corpus(empty_cat.path(), 2, 1, 32);
    std::filesystem::create_directories(empty_cat / "vehicle");
    cbir::synth::write_file(empty_cat / "vehicle/broken.jpg", std::vector<std::uint8_t>{0xff, 0xd8, 0xff});
    CHECK_THROWS_WITH_AS((void)build_index(empty_cat.path()), doctest::Contains("EmptyCategory"), Error);

    CHECK_THROWS_AS((void)load_index(empty_cat / "missing.cbir"), Error);
}

TEST_CASE("category names are lowercased") {
    fixtures::TempDir dir;
    fixtures::write_corpus(dir.path(), 2, 1, 32);
    std::filesystem::rename(dir / "face", dir / "Face");
    const auto idx = build_index(dir.path());
    std::set<std::string> cats;
    for (const auto& m : idx.category_models) cats.insert(m.category);
    CHECK(cats == std::set<std::string>{"animal", "face"});
}
