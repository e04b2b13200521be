#include "cbir/index_store.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>

#include "cbir/error.hpp"

namespace cbir {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'C', 'B', 'I', 'R'};

class ByteWriter {
public:
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }
    void raw(std::span<const std::uint8_t> bytes) { buf_.insert(buf_.end(), bytes.begin(), bytes.end()); }

    [[nodiscard]] std::span<const std::uint8_t> bytes() const noexcept { return buf_; }
    std::vector<std::uint8_t> take() { return std::move(buf_); }

private:
    std::vector<std::uint8_t> buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    [[nodiscard]] std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
    [[nodiscard]] std::size_t position() const noexcept { return pos_; }

    // Ensures count items of item_size bytes are present before anything is allocated.
    void need(std::uint64_t count, std::uint64_t item_size, const char* what) const {
        if (item_size != 0 && count > remaining() / item_size) {
            throw Error(ErrorCode::TruncatedFile, std::string("file ends inside ") + what + " at byte " +
                                                      std::to_string(pos_));
        }
    }
    std::uint32_t u32(const char* what) {
        need(1, 4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
        return v;
    }
    std::uint64_t u64(const char* what) {
        need(1, 8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
        return v;
    }
    double f64(const char* what) { return std::bit_cast<double>(u64(what)); }
    std::vector<double> f64s(std::uint64_t count, const char* what) {
        need(count, 8, what);
        std::vector<double> out(static_cast<std::size_t>(count));
        for (double& v : out) v = f64(what);
        return out;
    }
    std::string str(const char* what) {
        const std::uint32_t len = u32(what);
        need(len, 1, what);
        std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), len);
        pos_ += len;
        return s;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::uint32_t as_u32(int v) { return static_cast<std::uint32_t>(v); }
int as_int(std::uint32_t v) { return static_cast<int>(std::min<std::uint32_t>(v, 0x7fffffffu)); }

void write_config(ByteWriter& w, const IndexConfig& c) {
    w.u32(as_u32(c.quantization.bins_h));
    w.u32(as_u32(c.quantization.bins_s));
    w.u32(as_u32(c.quantization.bins_v));
    w.u32(static_cast<std::uint32_t>(c.metric));
    w.u32(as_u32(c.spectral_side));
    w.u32(as_u32(c.spectral_k));
    w.f64(c.jacobi.tol);
    w.u32(as_u32(c.jacobi.max_sweeps));
    w.f64(c.harris.k);
    w.u32(as_u32(c.harris.window));
    w.f64(c.harris.sigma);
    w.f64(c.harris.rel_threshold);
    w.u32(as_u32(c.harris.nms_radius));
    w.u32(as_u32(c.match_max_dim));
    w.u32(as_u32(c.patch));
    w.f64(c.ratio);
    w.f64(c.edge_threshold);
    w.u32(as_u32(c.classify_side));
}

// Enum fields are range-checked later, once the checksum has vouched for the bytes.
IndexConfig read_config(ByteReader& r, std::uint32_t& raw_metric) {
    IndexConfig c;
    c.quantization.bins_h = as_int(r.u32("config"));
    c.quantization.bins_s = as_int(r.u32("config"));
    c.quantization.bins_v = as_int(r.u32("config"));
    raw_metric = r.u32("config");
    c.spectral_side = as_int(r.u32("config"));
    c.spectral_k = as_int(r.u32("config"));
    c.jacobi.tol = r.f64("config");
    c.jacobi.max_sweeps = as_int(r.u32("config"));
    c.harris.k = r.f64("config");
    c.harris.window = as_int(r.u32("config"));
    c.harris.sigma = r.f64("config");
    c.harris.rel_threshold = r.f64("config");
    c.harris.nms_radius = as_int(r.u32("config"));
    c.match_max_dim = as_int(r.u32("config"));
    c.patch = as_int(r.u32("config"));
    c.ratio = r.f64("config");
    c.edge_threshold = r.f64("config");
    c.classify_side = as_int(r.u32("config"));
    return c;
}

void write_record(ByteWriter& w, const IndexRecord& rec) {
    w.u32(rec.image_id);
    w.str(rec.path);
    w.str(rec.category);

    w.u32(static_cast<std::uint32_t>(rec.histogram.values.size()));
    w.u64(rec.histogram.n);
    for (double v : rec.histogram.values) w.f64(v);

    w.u32(as_u32(rec.spectral.side));
    w.u32(as_u32(rec.spectral.k));
    w.u32(static_cast<std::uint32_t>(rec.spectral.values.size()));
    for (double v : rec.spectral.values) w.f64(v);

    const auto& fs = rec.features;
    w.u32(static_cast<std::uint32_t>(fs.points.size()));
    w.u32(as_u32(fs.dim));
    for (double v : fs.descriptors) w.f64(v);
    for (const Corner& c : fs.points) {
        w.u32(as_u32(c.x));
        w.u32(as_u32(c.y));
    }
    for (const Corner& c : fs.points) w.f64(c.response);

    for (double v : rec.edge_sig.orientation_hist) w.f64(v);
    w.f64(rec.edge_sig.edge_density);
}

IndexRecord read_record(ByteReader& r) {
    IndexRecord rec;
    rec.image_id = r.u32("record id");
    rec.path = r.str("record path");
    rec.category = r.str("record category");

    const std::uint32_t bins = r.u32("histogram");
    rec.histogram.n = r.u64("histogram");
    rec.histogram.values = r.f64s(bins, "histogram");

    rec.spectral.side = as_int(r.u32("spectral signature"));
    rec.spectral.k = as_int(r.u32("spectral signature"));
    const std::uint32_t len = r.u32("spectral signature");
    rec.spectral.values = r.f64s(len, "spectral signature");

    const std::uint32_t m = r.u32("feature set");
    const std::uint32_t n = r.u32("feature set");
    rec.features.dim = as_int(n);
    rec.features.descriptors = r.f64s(static_cast<std::uint64_t>(m) * n, "descriptors");
    r.need(m, 16, "corners");
    rec.features.points.resize(m);
    for (Corner& c : rec.features.points) {
        c.x = as_int(r.u32("corners"));
        c.y = as_int(r.u32("corners"));
    }
    for (Corner& c : rec.features.points) c.response = r.f64("corners");

    for (double& v : rec.edge_sig.orientation_hist) v = r.f64("edge signature");
    rec.edge_sig.edge_density = r.f64("edge signature");
    return rec;
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

RasterImage ensure_rgb(const RasterImage& img) {
    if (img.format() == PixelFormat::RGB8) return img;
    std::vector<std::uint8_t> rgb(img.pixel_count() * 3);
    const auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = px[i];
    return RasterImage(img.width(), img.height(), PixelFormat::RGB8, std::move(rgb));
}

}  // namespace

void IndexConfig::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, "index config: " + what); };
    if (!quantization.valid()) fail("quantization bins must be >= 1 with L >= 2");
    if (metric != HistMetric::L1 && metric != HistMetric::Intersection) fail("unknown histogram metric");
    if (spectral_side < 1) fail("spectral side must be >= 1");
    if (spectral_k < 1) fail("spectral k must be >= 1");
    if (!(jacobi.tol > 0.0)) fail("jacobi tolerance must be > 0");
    if (jacobi.max_sweeps < 1) fail("jacobi max sweeps must be >= 1");
    if (!(harris.k > 0.0)) fail("harris k must be > 0");
    if (harris.window < 1 || harris.window % 2 == 0) fail("harris window must be odd");
    if (!(harris.sigma > 0.0)) fail("harris sigma must be > 0");
    if (!(harris.rel_threshold >= 0.0 && harris.rel_threshold <= 1.0)) fail("harris threshold must lie in [0, 1]");
    if (harris.nms_radius < 0) fail("nms radius must be >= 0");
    if (match_max_dim < harris.window + 2) fail("match max dimension too small for the harris window");
    if (patch < 1 || patch % 2 == 0) fail("patch must be odd");
    if (!(ratio > 0.0 && ratio < 1.0)) fail("ratio must lie in (0, 1)");
    if (!(edge_threshold > 0.0)) fail("edge threshold must be > 0");
    if (classify_side < 3) fail("classifier side must be >= 3");
}

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) noexcept {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed large buffers in chunks.
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        const std::size_t chunk = std::min<std::size_t>(bytes.size() - pos, 1u << 30);
        crc = crc32(crc, bytes.data() + pos, static_cast<uInt>(chunk));
        pos += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

EdgeSignature config_edge_signature(const RasterImage& img, const IndexConfig& config) {
    const RasterImage gray = resize_bilinear(to_grayscale(img), config.classify_side, config.classify_side);
    return edge_signature(sobel_edges(gray), config.edge_threshold);
}

IndexRecord extract_record(const RasterImage& img, const IndexConfig& config) {
    IndexRecord rec;
    const RasterImage rgb = ensure_rgb(img);
    const RasterImage gray = to_grayscale(rgb);
    rec.histogram = compute_histogram(rgb, config.quantization);
    rec.spectral = spectral_signature(gray, config.spectral_side, config.spectral_k, config.jacobi);
    rec.features = image_features(gray, config.harris, config.patch, config.match_max_dim);
    rec.edge_sig = config_edge_signature(gray, config);
    return rec;
}

IndexFile build_index(const fs::path& root, const IndexConfig& config, const SkipReporter& on_skip) {
    config.validate();
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw Error(ErrorCode::IoError, root.string() + " is not a directory");

    struct Candidate {
        std::string rel;  // root-relative, generic separators
        std::string category;
        fs::path full;
    };
    std::vector<Candidate> files;
    std::set<std::string> categories;
    for (const auto& dir : fs::directory_iterator(root)) {
        if (!dir.is_directory()) continue;
        const std::string label = lowercase(dir.path().filename().string());
        categories.insert(label);
        for (const auto& entry : fs::directory_iterator(dir.path())) {
            if (!entry.is_regular_file()) continue;
            files.push_back({fs::relative(entry.path(), root).generic_string(), label, entry.path()});
        }
    }
    if (categories.size() < 2) {
        throw Error(ErrorCode::TooFewCategories,
                    root.string() + " holds " + std::to_string(categories.size()) + " category directories");
    }
    std::sort(files.begin(), files.end(), [](const Candidate& a, const Candidate& b) { return a.rel < b.rel; });

    // Extraction runs in parallel; results land in per-file slots so the
    // assembled index does not depend on scheduling.
    std::vector<std::optional<IndexRecord>> slots(files.size());
    std::vector<std::string> failures(files.size());
    const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(files.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            slots[i] = extract_record(load_image(files[i].full), config);
        } catch (const Error& e) {
            failures[i] = std::string(e.name()) + ": " + e.context();
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    }

    IndexFile idx;
    idx.config = config;
    std::map<std::string, std::size_t> per_category;
    for (const auto& label : categories) per_category[label] = 0;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (!slots[i]) {
            if (on_skip) on_skip(files[i].rel, failures[i]);
            continue;
        }
        IndexRecord rec = std::move(*slots[i]);
        rec.image_id = static_cast<std::uint32_t>(idx.records.size());
        rec.path = files[i].rel;
        rec.category = files[i].category;
        ++per_category[rec.category];
        idx.records.push_back(std::move(rec));
    }
    for (const auto& [label, n] : per_category) {
        if (n == 0) throw Error(ErrorCode::EmptyCategory, "category '" + label + "' has no decodable images");
    }

    std::vector<LabeledSignature> labeled;
    labeled.reserve(idx.records.size());
    for (const auto& rec : idx.records) labeled.push_back({rec.category, rec.edge_sig});
    idx.category_models = train_centroids(labeled);
    return idx;
}

std::vector<std::uint8_t> serialize_index(const IndexFile& idx) {
    ByteWriter w;
    w.raw(kMagic);
    w.u32(idx.format_version);
    write_config(w, idx.config);
    w.u32(static_cast<std::uint32_t>(idx.category_models.size()));
    for (const auto& m : idx.category_models) {
        w.str(m.category);
        w.u32(static_cast<std::uint32_t>(m.centroid.size()));
        for (double v : m.centroid) w.f64(v);
    }
    w.u32(static_cast<std::uint32_t>(idx.records.size()));
    for (const auto& rec : idx.records) write_record(w, rec);
    const std::uint32_t crc = crc32_of(w.bytes());
    w.u32(crc);
    return w.take();
}

IndexFile deserialize_index(std::span<const std::uint8_t> bytes) {
    const std::size_t head = std::min(bytes.size(), kMagic.size());
    if (!std::equal(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(head), kMagic.begin())) {
        throw Error(ErrorCode::BadMagic, "leading bytes are not \"CBIR\"");
    }
    if (head < kMagic.size()) throw Error(ErrorCode::TruncatedFile, "file ends inside the magic bytes");
    ByteReader body(bytes.subspan(kMagic.size()));

    IndexFile idx;
    idx.format_version = body.u32("version");
    if (idx.format_version != kIndexFormatVersion) {
        throw Error(ErrorCode::UnsupportedVersion, "format version " + std::to_string(idx.format_version));
    }
    std::uint32_t raw_metric = 0;
    idx.config = read_config(body, raw_metric);

    struct RawModel {
        std::string label;
        std::vector<double> centroid;
    };
    const std::uint32_t model_count = body.u32("model count");
    body.need(model_count, 8, "category models");
    std::vector<RawModel> raw_models(model_count);
    for (auto& m : raw_models) {
        m.label = body.str("category model");
        const std::uint32_t dim = body.u32("category model");
        m.centroid = body.f64s(dim, "category model");
    }

    const std::uint32_t record_count = body.u32("record count");
    // Smallest possible record: fixed-size fields only.
    body.need(record_count, 4 * 9 + 8 + 8 * kEdgeFeatureDim, "records");
    idx.records.reserve(record_count);
    for (std::uint32_t i = 0; i < record_count; ++i) idx.records.push_back(read_record(body));

    if (body.remaining() < 4) throw Error(ErrorCode::TruncatedFile, "file ends inside the checksum");
    if (body.remaining() > 4) {
        throw Error(ErrorCode::TrailingBytes,
                    std::to_string(body.remaining() - 4) + " bytes follow the declared " +
                        std::to_string(record_count) + " records");
    }
    const std::size_t payload = kMagic.size() + body.position();
    const std::uint32_t stored = body.u32("checksum");
    const std::uint32_t actual = crc32_of(bytes.first(payload));
    if (stored != actual) throw Error(ErrorCode::ChecksumMismatch, "stored crc32 does not match contents");

    // Field-level checks, now that the bytes are known to be what was written.
    if (raw_metric > static_cast<std::uint32_t>(HistMetric::Intersection)) {
        throw Error(ErrorCode::InvalidArgument, "index config: unknown histogram metric " + std::to_string(raw_metric));
    }
    idx.config.metric = static_cast<HistMetric>(raw_metric);
    idx.config.validate();

    std::set<std::string> labels;
    for (auto& m : raw_models) {
        if (m.centroid.size() != static_cast<std::size_t>(kEdgeFeatureDim)) {
            throw Error(ErrorCode::InvalidArgument, "category model '" + m.label + "' has " +
                                                        std::to_string(m.centroid.size()) + " dimensions");
        }
        CategoryModel model;
        model.category = std::move(m.label);
        std::copy(m.centroid.begin(), m.centroid.end(), model.centroid.begin());
        labels.insert(model.category);
        idx.category_models.push_back(std::move(model));
    }
    std::set<std::uint32_t> ids;
    for (const auto& rec : idx.records) {
        if (!ids.insert(rec.image_id).second) {
            throw Error(ErrorCode::InvalidArgument, "duplicate image id " + std::to_string(rec.image_id));
        }
        if (!labels.contains(rec.category)) {
            throw Error(ErrorCode::InvalidArgument, "record " + std::to_string(rec.image_id) +
                                                        " names unknown category '" + rec.category + "'");
        }
    }
    return idx;
}

void save_index(const IndexFile& idx, const fs::path& path) {
    const auto bytes = serialize_index(idx);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

IndexFile load_index(const fs::path& path) {
    const auto bytes = read_file_bytes(path);
    try {
        return deserialize_index(bytes);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.context());
    }
}

}  // namespace cbir
