#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "serf/tensor.hpp"

namespace serf {

// Malformed input data; the CLI maps this family to its IO exit code.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct LabeledDataset {
    Tensor2 images;           // n x d, pixel values in [0,1]
    std::vector<int> labels;  // class ids, one per row
    std::string name;
};

// IDX container, big-endian. Image magic 0x00000803, label magic 0x00000801.
Tensor2 parse_idx_images(const std::vector<unsigned char>& bytes);
std::vector<int> parse_idx_labels(const std::vector<unsigned char>& bytes);

// Inverse of the parsers, for building fixtures. Pixels are quantized back
// to bytes with round(p*255).
std::vector<unsigned char> write_idx_images(const Tensor2& images, std::uint32_t rows,
                                            std::uint32_t cols);
std::vector<unsigned char> write_idx_labels(const std::vector<int>& labels);

LabeledDataset load_idx(const std::string& images_path, const std::string& labels_path,
                        const std::string& name);

// Gaussian clusters, one per class, centered on distinct axis bumps so a
// linear model separates them. Deterministic per seed.
LabeledDataset synthetic_blobs(std::size_t classes, std::size_t per_class, std::size_t dim,
                               std::uint64_t seed);

// Row-index batches covering 0..n-1 exactly once, shuffled by (seed, epoch),
// last partial batch kept.
std::vector<std::vector<std::size_t>> batches(std::size_t n, std::size_t batch_size,
                                              std::uint64_t seed, std::uint64_t epoch);

// Per-feature (x - mean)/std using train statistics, applied to both splits.
void standardize_features(LabeledDataset& train, LabeledDataset* test);

struct TrainTest {
    LabeledDataset train;
    LabeledDataset test;
};

// Reads the four standard MNIST files from dir; nullopt when any is missing.
std::optional<TrainTest> try_load_mnist(const std::string& dir);

// Value of SERF_DATA_DIR when set.
std::optional<std::string> dataset_cache_dir();

}  // namespace serf
