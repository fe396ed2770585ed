#include "serf/datasets.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "serf/rng.hpp"

namespace serf {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_u32_be(const std::vector<unsigned char>& bytes, std::size_t offset,
                          const char* what) {
    if (bytes.size() < offset + 4) {
        throw ParseError(std::string("truncated ") + what + ": need " +
                         std::to_string(offset + 4) + " header bytes, have " +
                         std::to_string(bytes.size()));
    }
    return (static_cast<std::uint32_t>(bytes[offset]) << 24) |
           (static_cast<std::uint32_t>(bytes[offset + 1]) << 16) |
           (static_cast<std::uint32_t>(bytes[offset + 2]) << 8) |
           static_cast<std::uint32_t>(bytes[offset + 3]);
}

void push_u32_be(std::vector<unsigned char>& out, std::uint32_t v) {
    out.push_back(static_cast<unsigned char>(v >> 24));
    out.push_back(static_cast<unsigned char>(v >> 16));
    out.push_back(static_cast<unsigned char>(v >> 8));
    out.push_back(static_cast<unsigned char>(v));
}

std::string hex32(std::uint32_t v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08x", v);
    return buf;
}

std::vector<unsigned char> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                      std::istreambuf_iterator<char>());
}

}  // namespace

Tensor2 parse_idx_images(const std::vector<unsigned char>& bytes) {
    const std::uint32_t magic = read_u32_be(bytes, 0, "image file");
    if (magic != kImageMagic) {
        throw ParseError("bad image magic: expected " + hex32(kImageMagic) + ", got " +
                         hex32(magic));
    }
    const std::uint32_t count = read_u32_be(bytes, 4, "image file");
    const std::uint32_t rows = read_u32_be(bytes, 8, "image file");
    const std::uint32_t cols = read_u32_be(bytes, 12, "image file");
    const std::size_t expected = static_cast<std::size_t>(count) * rows * cols;
    const std::size_t found = bytes.size() - 16;
    if (found != expected) {
        throw ParseError("image payload: expected " + std::to_string(expected) +
                         " bytes after header, found " + std::to_string(found));
    }
    Tensor2 images(count, static_cast<std::size_t>(rows) * cols);
    for (std::size_t k = 0; k < expected; ++k) {
        images.data()[k] = static_cast<double>(bytes[16 + k]) / 255.0;
    }
    return images;
}

std::vector<int> parse_idx_labels(const std::vector<unsigned char>& bytes) {
    const std::uint32_t magic = read_u32_be(bytes, 0, "label file");
    if (magic != kLabelMagic) {
        throw ParseError("bad label magic: expected " + hex32(kLabelMagic) + ", got " +
                         hex32(magic));
    }
    const std::uint32_t count = read_u32_be(bytes, 4, "label file");
    const std::size_t found = bytes.size() - 8;
    if (found != count) {
        throw ParseError("label payload: expected " + std::to_string(count) +
                         " bytes after header, found " + std::to_string(found));
    }
    std::vector<int> labels(count);
    for (std::size_t k = 0; k < count; ++k) {
        const unsigned char b = bytes[8 + k];
        if (b > 9) {
            throw ParseError("label " + std::to_string(int(b)) + " out of range [0,9] at index " +
                             std::to_string(k));
        }
        labels[k] = b;
    }
    return labels;
}

std::vector<unsigned char> write_idx_images(const Tensor2& images, std::uint32_t rows,
                                            std::uint32_t cols) {
    if (static_cast<std::size_t>(rows) * cols != images.cols()) {
        throw std::invalid_argument("image geometry " + std::to_string(rows) + "x" +
                                    std::to_string(cols) + " does not match " +
                                    std::to_string(images.cols()) + " features");
    }
    std::vector<unsigned char> out;
    out.reserve(16 + images.size());
    push_u32_be(out, kImageMagic);
    push_u32_be(out, static_cast<std::uint32_t>(images.rows()));
    push_u32_be(out, rows);
    push_u32_be(out, cols);
    for (std::size_t k = 0; k < images.size(); ++k) {
        double p = images.data()[k];
        p = std::min(std::max(p, 0.0), 1.0);
        out.push_back(static_cast<unsigned char>(std::lround(p * 255.0)));
    }
    return out;
}

std::vector<unsigned char> write_idx_labels(const std::vector<int>& labels) {
    std::vector<unsigned char> out;
    out.reserve(8 + labels.size());
    push_u32_be(out, kLabelMagic);
    push_u32_be(out, static_cast<std::uint32_t>(labels.size()));
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] < 0 || labels[k] > 9) {
            throw std::invalid_argument("label " + std::to_string(labels[k]) +
                                        " out of range [0,9] at index " + std::to_string(k));
        }
        out.push_back(static_cast<unsigned char>(labels[k]));
    }
    return out;
}

LabeledDataset load_idx(const std::string& images_path, const std::string& labels_path,
                        const std::string& name) {
    LabeledDataset ds;
    ds.images = parse_idx_images(read_file(images_path));
    ds.labels = parse_idx_labels(read_file(labels_path));
    ds.name = name;
    if (ds.images.rows() != ds.labels.size()) {
        throw ParseError(name + ": " + std::to_string(ds.images.rows()) + " images but " +
                         std::to_string(ds.labels.size()) + " labels");
    }
    return ds;
}

LabeledDataset synthetic_blobs(std::size_t classes, std::size_t per_class, std::size_t dim,
                               std::uint64_t seed) {
    if (classes < 2) throw std::invalid_argument("synthetic_blobs needs at least 2 classes");
    if (dim < 1) throw std::invalid_argument("synthetic_blobs needs dim >= 1");
    LabeledDataset ds;
    ds.name = "synthetic_blobs";
    ds.images = Tensor2(classes * per_class, dim);
    ds.labels.resize(classes * per_class);
    Rng rng(seed);
    std::size_t row = 0;
    for (std::size_t c = 0; c < classes; ++c) {
        for (std::size_t s = 0; s < per_class; ++s, ++row) {
            ds.labels[row] = static_cast<int>(c);
            double* px = ds.images.row(row);
            for (std::size_t f = 0; f < dim; ++f) {
                const double mean = 0.15 + (f == (c % dim) ? 0.7 : 0.0);
                const double v = mean + 0.05 * rng.normal();
                px[f] = std::min(std::max(v, 0.0), 1.0);
            }
        }
    }
    return ds;
}

std::vector<std::vector<std::size_t>> batches(std::size_t n, std::size_t batch_size,
                                              std::uint64_t seed, std::uint64_t epoch) {
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    Rng rng(seed, epoch);
    const std::vector<std::size_t> order = rng.permutation(n);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t start = 0; start < n; start += batch_size) {
        const std::size_t stop = std::min(n, start + batch_size);
        out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(stop));
    }
    return out;
}

void standardize_features(LabeledDataset& train, LabeledDataset* test) {
    const std::size_t dim = train.images.cols();
    if (test && test->images.cols() != dim) {
        throw std::invalid_argument("standardize: train has " + std::to_string(dim) +
                                    " features, test has " + std::to_string(test->images.cols()));
    }
    const double n = static_cast<double>(train.images.rows());
    std::vector<double> mean(dim, 0.0), sd(dim, 0.0);
    for (std::size_t i = 0; i < train.images.rows(); ++i) {
        const double* row = train.images.row(i);
        for (std::size_t f = 0; f < dim; ++f) mean[f] += row[f];
    }
    for (std::size_t f = 0; f < dim; ++f) mean[f] /= n;
    for (std::size_t i = 0; i < train.images.rows(); ++i) {
        const double* row = train.images.row(i);
        for (std::size_t f = 0; f < dim; ++f) {
            const double d = row[f] - mean[f];
            sd[f] += d * d;
        }
    }
    for (std::size_t f = 0; f < dim; ++f) sd[f] = std::max(std::sqrt(sd[f] / n), 1e-12);

    auto apply = [&](LabeledDataset& ds) {
        for (std::size_t i = 0; i < ds.images.rows(); ++i) {
            double* row = ds.images.row(i);
            for (std::size_t f = 0; f < dim; ++f) row[f] = (row[f] - mean[f]) / sd[f];
        }
    };
    apply(train);
    if (test) apply(*test);
}

std::optional<TrainTest> try_load_mnist(const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path base(dir);
    const fs::path train_images = base / "train-images-idx3-ubyte";
    const fs::path train_labels = base / "train-labels-idx1-ubyte";
    const fs::path test_images = base / "t10k-images-idx3-ubyte";
    const fs::path test_labels = base / "t10k-labels-idx1-ubyte";
    for (const fs::path& p : {train_images, train_labels, test_images, test_labels}) {
        if (!fs::exists(p)) return std::nullopt;
    }
    TrainTest tt;
    tt.train = load_idx(train_images.string(), train_labels.string(), "mnist-train");
    tt.test = load_idx(test_images.string(), test_labels.string(), "mnist-test");
    return tt;
}

std::optional<std::string> dataset_cache_dir() {
    const char* v = std::getenv("SERF_DATA_DIR");
    if (v && *v) return std::string(v);
    return std::nullopt;
}

}  // namespace serf
