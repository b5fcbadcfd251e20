// Copyright 2026 The qbarcode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QBARCODE_DATASET_H_
#define QBARCODE_DATASET_H_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qbarcode/pattern_bounds.h"

namespace qbarcode {

struct GreyImage {
    int width = 0;
    int height = 0;
    /// Row-major, width * height bytes.
    std::vector<uint8_t> pixels;
};

/// Row-major bit-packed image, 1 = white. Bits past width * height are zero,
/// so the Hamming distance is a plain popcount over the words.
class BinaryImage {
   public:
    BinaryImage() = default;
    BinaryImage(int width, int height);

    int width() const {
        return width_;
    }
    int height() const {
        return height_;
    }
    size_t num_bits() const {
        return size_t(width_) * size_t(height_);
    }
    size_t num_words() const {
        return words_.size();
    }

    bool get(size_t index) const {
        return (words_[index >> 6] >> (index & 63)) & 1;
    }
    void set(size_t index, bool value) {
        uint64_t mask = uint64_t(1) << (index & 63);
        if (value) {
            words_[index >> 6] |= mask;
        } else {
            words_[index >> 6] &= ~mask;
        }
    }
    void flip(size_t index) {
        words_[index >> 6] ^= uint64_t(1) << (index & 63);
    }

    std::span<const uint64_t> words() const {
        return words_;
    }
    std::span<uint64_t> mutable_words() {
        return words_;
    }

    /// Parses a string of '0'/'1' characters into a width x 1 image.
    static BinaryImage from_string(std::string_view bits);
    std::string str() const;

    bool operator==(const BinaryImage &other) const = default;

   private:
    int width_ = 0;
    int height_ = 0;
    std::vector<uint64_t> words_;
};

enum class DatasetRole { TRAIN, TEST };

struct LabeledDataset {
    std::vector<BinaryImage> images;
    std::vector<int> labels;
    DatasetRole role = DatasetRole::TRAIN;

    size_t size() const {
        return images.size();
    }
    /// 1 + the largest label, 0 for an empty dataset.
    int num_classes() const;
    std::vector<int64_t> class_counts() const;
    /// Throws DomainError on mismatched lengths, shapes, or negative labels.
    void validate() const;
};

struct IdxData {
    std::vector<GreyImage> images;
    std::vector<uint8_t> labels;
};

/// Reads an IDX image file (magic 0x00000803) and label file (magic 0x00000801).
/// Files ending in .gz are decompressed transparently. Throws ParseError.
IdxData load_idx(const std::string &images_path, const std::string &labels_path);

/// Serializes images and labels as IDX files. Used to stage test fixtures.
void write_idx(const std::string &images_path, const std::string &labels_path, const IdxData &data);

/// Looks for the MNIST IDX files (plain or .gz) in a directory. Returns
/// std::nullopt when any of the four files is missing.
struct MnistPaths {
    std::string train_images;
    std::string train_labels;
    std::string test_images;
    std::string test_labels;
};
std::optional<MnistPaths> find_mnist(const std::string &directory);

constexpr uint8_t kDefaultBinarizeThreshold = 128;

/// White iff pixel >= threshold.
BinaryImage binarize(const GreyImage &grey, uint8_t threshold = kDefaultBinarizeThreshold);
/// Binarizes the first `limit` images (all when unset).
LabeledDataset binarize_dataset(const IdxData &data, DatasetRole role,
                                uint8_t threshold = kDefaultBinarizeThreshold,
                                std::optional<size_t> limit = std::nullopt);

int64_t hamming(const BinaryImage &a, const BinaryImage &b);

struct PairSampling {
    enum class Kind { ALL_PAIRS, SUBSAMPLE };
    Kind kind = Kind::ALL_PAIRS;
    /// Pairs drawn per class pair in SUBSAMPLE mode.
    uint64_t pairs_per_class_pair = 0;
    uint64_t seed = 0;

    static PairSampling all_pairs() {
        return {};
    }
    static PairSampling subsample(uint64_t pairs, uint64_t seed) {
        return {Kind::SUBSAMPLE, pairs, seed};
    }
};

struct ClassPairStatistics {
    /// One histogram per unordered class pair (c < c'), in lexicographic order.
    std::vector<ClassPairHistogram> histograms;
    std::vector<HistogramSummary> summaries;
    /// Classes below num_classes() without images. Pairs involving them are skipped.
    std::vector<int> empty_classes;
    /// Number of cross-class pairs at Hamming distance 0.
    uint64_t cross_class_duplicates = 0;
};

ClassPairStatistics class_pair_statistics(const LabeledDataset &dataset, const PairSampling &sampling,
                                          int threads = 0);

struct CrossClassMinimum {
    int64_t distance = -1;
    /// Indices of the first pair (in scan order) attaining the minimum.
    size_t index_a = 0;
    size_t index_b = 0;
};

/// Exhaustive minimum Hamming distance between images with different labels.
CrossClassMinimum min_cross_class_distance_detail(const LabeledDataset &dataset, int threads = 0);
int64_t min_cross_class_distance(const LabeledDataset &dataset, int threads = 0);

/// Flips every pixel independently with probability p.
BinaryImage apply_pixel_noise(const BinaryImage &image, double p, std::mt19937_64 &rng);

}  // namespace qbarcode

#endif  // QBARCODE_DATASET_H_
