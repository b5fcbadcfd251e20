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

#include "qbarcode/dataset.h"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <filesystem>
#include <limits>
#include <numeric>

#include "qbarcode/errors.h"
#include "qbarcode/parallel.h"

namespace qbarcode {

namespace {

constexpr uint32_t kImagesMagic = 0x00000803;
constexpr uint32_t kLabelsMagic = 0x00000801;

std::vector<uint8_t> read_maybe_gzipped(const std::string &path) {
    if (!std::filesystem::exists(path)) {
        throw ParseError(path, 0, "file does not exist");
    }
    gzFile file = gzopen(path.c_str(), "rb");
    if (file == nullptr) {
        throw ParseError(path, 0, "cannot open file");
    }
    std::vector<uint8_t> out;
    std::vector<uint8_t> chunk(1 << 20);
    while (true) {
        int got = gzread(file, chunk.data(), unsigned(chunk.size()));
        if (got < 0) {
            int code = 0;
            std::string message = gzerror(file, &code);
            gzclose(file);
            throw ParseError(path, out.size(), "decompression failed: " + message);
        }
        if (got == 0) {
            break;
        }
        out.insert(out.end(), chunk.begin(), chunk.begin() + got);
    }
    gzclose(file);
    return out;
}

uint32_t read_be32(const std::vector<uint8_t> &bytes, size_t offset, const std::string &path, const char *field) {
    if (offset + 4 > bytes.size()) {
        throw ParseError(path, bytes.size(), std::string("truncated while reading ") + field);
    }
    return (uint32_t(bytes[offset]) << 24) | (uint32_t(bytes[offset + 1]) << 16) | (uint32_t(bytes[offset + 2]) << 8) |
           uint32_t(bytes[offset + 3]);
}

std::string hex32(uint32_t v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "0x%08X", v);
    return buf;
}

void check_magic(uint32_t got, uint32_t expected, const std::string &path) {
    if (got != expected) {
        throw ParseError(path, 0, "bad magic " + hex32(got) + ", expected " + hex32(expected));
    }
}

void write_be32(std::vector<uint8_t> &out, uint32_t v) {
    out.push_back(uint8_t(v >> 24));
    out.push_back(uint8_t(v >> 16));
    out.push_back(uint8_t(v >> 8));
    out.push_back(uint8_t(v));
}

void write_file(const std::string &path, const std::vector<uint8_t> &bytes) {
    bool gz = path.ends_with(".gz");
    gzFile file = gzopen(path.c_str(), gz ? "wb" : "wbT");
    if (file == nullptr) {
        throw ParseError(path, 0, "cannot open file for writing");
    }
    if (!bytes.empty() && gzwrite(file, bytes.data(), unsigned(bytes.size())) != int(bytes.size())) {
        gzclose(file);
        throw ParseError(path, 0, "write failed");
    }
    gzclose(file);
}

/// Images of one class copied into a contiguous word array.
struct PackedClass {
    std::vector<uint64_t> words;
    std::vector<size_t> indices;
};

std::vector<PackedClass> pack_by_class(const LabeledDataset &dataset) {
    std::vector<PackedClass> out(size_t(dataset.num_classes()));
    for (size_t i = 0; i < dataset.size(); i++) {
        auto &pc = out[size_t(dataset.labels[i])];
        auto w = dataset.images[i].words();
        pc.words.insert(pc.words.end(), w.begin(), w.end());
        pc.indices.push_back(i);
    }
    return out;
}

template <size_t W>
inline int64_t distance_fixed(const uint64_t *a, const uint64_t *b) {
    int64_t d = 0;
    for (size_t w = 0; w < W; w++) {
        d += std::popcount(a[w] ^ b[w]);
    }
    return d;
}

inline int64_t distance_dynamic(const uint64_t *a, const uint64_t *b, size_t words) {
    int64_t d = 0;
    for (size_t w = 0; w < words; w++) {
        d += std::popcount(a[w] ^ b[w]);
    }
    return d;
}

/// Calls visit(i, j, distance) for rows [row_begin, row_end) of `a` against all rows of `b`.
template <typename Visit>
void scan_block(const PackedClass &a, const PackedClass &b, size_t stride, size_t row_begin, size_t row_end,
                Visit &&visit) {
    size_t nb = b.indices.size();
    const uint64_t *bw = b.words.data();
    auto run = [&](auto distance) {
        for (size_t i = row_begin; i < row_end; i++) {
            const uint64_t *aw = a.words.data() + i * stride;
            for (size_t j = 0; j < nb; j++) {
                visit(i, j, distance(aw, bw + j * stride));
            }
        }
    };
    // 28x28 images pack into 13 words; the fixed-width kernel unrolls.
    if (stride == 13) {
        run([](const uint64_t *x, const uint64_t *y) { return distance_fixed<13>(x, y); });
    } else {
        run([stride](const uint64_t *x, const uint64_t *y) { return distance_dynamic(x, y, stride); });
    }
}

struct PairTask {
    int class_a;
    int class_b;
    size_t row_begin;
    size_t row_end;
};

std::vector<PairTask> make_pair_tasks(const std::vector<PackedClass> &packed, size_t rows_per_task) {
    std::vector<PairTask> tasks;
    int c = int(packed.size());
    for (int a = 0; a < c; a++) {
        for (int b = a + 1; b < c; b++) {
            size_t na = packed[size_t(a)].indices.size();
            if (na == 0 || packed[size_t(b)].indices.empty()) {
                continue;
            }
            for (size_t r = 0; r < na; r += rows_per_task) {
                tasks.push_back({a, b, r, std::min(na, r + rows_per_task)});
            }
        }
    }
    return tasks;
}

size_t image_stride(const LabeledDataset &dataset) {
    return dataset.images.empty() ? 0 : dataset.images.front().num_words();
}

size_t uniform_index(std::mt19937_64 &rng, size_t n) {
    return size_t((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

}  // namespace

BinaryImage::BinaryImage(int width, int height) : width_(width), height_(height) {
    if (width < 0 || height < 0) {
        throw DomainError("image dimensions must be non-negative");
    }
    words_.assign((num_bits() + 63) / 64, 0);
}

BinaryImage BinaryImage::from_string(std::string_view bits) {
    BinaryImage out(int(bits.size()), 1);
    for (size_t i = 0; i < bits.size(); i++) {
        if (bits[i] == '1') {
            out.set(i, true);
        } else if (bits[i] != '0') {
            throw DomainError("bit strings may only contain '0' and '1'");
        }
    }
    return out;
}

std::string BinaryImage::str() const {
    std::string out(num_bits(), '0');
    for (size_t i = 0; i < num_bits(); i++) {
        if (get(i)) {
            out[i] = '1';
        }
    }
    return out;
}

int LabeledDataset::num_classes() const {
    int c = 0;
    for (int label : labels) {
        c = std::max(c, label + 1);
    }
    return c;
}

std::vector<int64_t> LabeledDataset::class_counts() const {
    std::vector<int64_t> counts(size_t(num_classes()), 0);
    for (int label : labels) {
        counts[size_t(label)]++;
    }
    return counts;
}

void LabeledDataset::validate() const {
    if (images.size() != labels.size()) {
        throw DomainError("dataset has " + std::to_string(images.size()) + " images but " +
                          std::to_string(labels.size()) + " labels");
    }
    for (size_t i = 0; i < images.size(); i++) {
        if (labels[i] < 0) {
            throw DomainError("negative label at index " + std::to_string(i));
        }
        if (images[i].width() != images[0].width() || images[i].height() != images[0].height()) {
            throw DomainError("image " + std::to_string(i) + " has a different shape");
        }
    }
}

IdxData load_idx(const std::string &images_path, const std::string &labels_path) {
    IdxData out;
    auto image_bytes = read_maybe_gzipped(images_path);
    check_magic(read_be32(image_bytes, 0, images_path, "magic"), kImagesMagic, images_path);
    uint32_t count = read_be32(image_bytes, 4, images_path, "image count");
    uint32_t rows = read_be32(image_bytes, 8, images_path, "row count");
    uint32_t cols = read_be32(image_bytes, 12, images_path, "column count");
    if (rows == 0 || cols == 0 || rows > 1 << 15 || cols > 1 << 15) {
        throw ParseError(images_path, 8, "implausible image shape " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    uint64_t pixels = uint64_t(rows) * cols;
    uint64_t needed = 16 + uint64_t(count) * pixels;
    if (image_bytes.size() < needed) {
        uint64_t complete = (image_bytes.size() - 16) / pixels;
        throw ParseError(images_path, image_bytes.size(),
                         "truncated: header declares " + std::to_string(count) + " images, data ends inside image " +
                             std::to_string(complete));
    }
    out.images.resize(count);
    for (uint64_t i = 0; i < count; i++) {
        auto &img = out.images[i];
        img.width = int(cols);
        img.height = int(rows);
        auto begin = image_bytes.begin() + std::ptrdiff_t(16 + i * pixels);
        img.pixels.assign(begin, begin + std::ptrdiff_t(pixels));
    }

    auto label_bytes = read_maybe_gzipped(labels_path);
    check_magic(read_be32(label_bytes, 0, labels_path, "magic"), kLabelsMagic, labels_path);
    uint32_t label_count = read_be32(label_bytes, 4, labels_path, "label count");
    if (label_count != count) {
        throw ParseError(labels_path, 4,
                         "label count " + std::to_string(label_count) + " does not match image count " +
                             std::to_string(count));
    }
    if (label_bytes.size() < 8 + uint64_t(label_count)) {
        throw ParseError(labels_path, label_bytes.size(),
                         "truncated: header declares " + std::to_string(label_count) + " labels");
    }
    out.labels.assign(label_bytes.begin() + 8, label_bytes.begin() + 8 + label_count);
    return out;
}

void write_idx(const std::string &images_path, const std::string &labels_path, const IdxData &data) {
    if (data.images.size() != data.labels.size()) {
        throw DomainError("image and label counts differ");
    }
    std::vector<uint8_t> images;
    write_be32(images, kImagesMagic);
    write_be32(images, uint32_t(data.images.size()));
    int rows = data.images.empty() ? 1 : data.images[0].height;
    int cols = data.images.empty() ? 1 : data.images[0].width;
    write_be32(images, uint32_t(rows));
    write_be32(images, uint32_t(cols));
    for (const auto &img : data.images) {
        if (img.width != cols || img.height != rows || img.pixels.size() != size_t(rows) * size_t(cols)) {
            throw DomainError("all images must share one shape");
        }
        images.insert(images.end(), img.pixels.begin(), img.pixels.end());
    }
    std::vector<uint8_t> labels;
    write_be32(labels, kLabelsMagic);
    write_be32(labels, uint32_t(data.labels.size()));
    labels.insert(labels.end(), data.labels.begin(), data.labels.end());
    write_file(images_path, images);
    write_file(labels_path, labels);
}

std::optional<MnistPaths> find_mnist(const std::string &directory) {
    namespace fs = std::filesystem;
    if (directory.empty() || !fs::is_directory(directory)) {
        return std::nullopt;
    }
    auto locate = [&](const std::string &stem, const std::string &kind) -> std::optional<std::string> {
        for (const char *sep : {"-", "."}) {
            for (const char *ext : {"", ".gz"}) {
                fs::path p = fs::path(directory) / (stem + sep + kind + "-ubyte" + ext);
                if (fs::exists(p)) {
                    return p.string();
                }
            }
        }
        return std::nullopt;
    };
    auto ti = locate("train-images", "idx3");
    auto tl = locate("train-labels", "idx1");
    auto si = locate("t10k-images", "idx3");
    auto sl = locate("t10k-labels", "idx1");
    if (!ti || !tl || !si || !sl) {
        return std::nullopt;
    }
    return MnistPaths{*ti, *tl, *si, *sl};
}

BinaryImage binarize(const GreyImage &grey, uint8_t threshold) {
    if (grey.width <= 0 || grey.height <= 0 || grey.pixels.size() != size_t(grey.width) * size_t(grey.height)) {
        throw DomainError("grey image pixel count does not match its shape");
    }
    BinaryImage out(grey.width, grey.height);
    for (size_t i = 0; i < grey.pixels.size(); i++) {
        if (grey.pixels[i] >= threshold) {
            out.set(i, true);
        }
    }
    return out;
}

LabeledDataset binarize_dataset(const IdxData &data, DatasetRole role, uint8_t threshold, std::optional<size_t> limit) {
    size_t n = std::min(data.images.size(), limit.value_or(data.images.size()));
    LabeledDataset out;
    out.role = role;
    out.images.reserve(n);
    out.labels.reserve(n);
    for (size_t i = 0; i < n; i++) {
        out.images.push_back(binarize(data.images[i], threshold));
        out.labels.push_back(int(data.labels[i]));
    }
    return out;
}

int64_t hamming(const BinaryImage &a, const BinaryImage &b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw DomainError("hamming distance needs images of equal shape");
    }
    return distance_dynamic(a.words().data(), b.words().data(), a.num_words());
}

ClassPairStatistics class_pair_statistics(const LabeledDataset &dataset, const PairSampling &sampling, int threads) {
    dataset.validate();
    ClassPairStatistics out;
    auto counts = dataset.class_counts();
    int num_classes = int(counts.size());
    int populated = 0;
    for (int c = 0; c < num_classes; c++) {
        if (counts[size_t(c)] == 0) {
            out.empty_classes.push_back(c);
        } else {
            populated++;
        }
    }
    if (populated < 2) {
        throw DomainError("class pair statistics need at least two populated classes");
    }
    size_t stride = image_stride(dataset);
    size_t n_bins = dataset.images.front().num_bits() + 1;
    auto packed = pack_by_class(dataset);

    // Slot of each unordered populated pair in the output.
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> slot(size_t(num_classes * num_classes), -1);
    for (int a = 0; a < num_classes; a++) {
        for (int b = a + 1; b < num_classes; b++) {
            if (counts[size_t(a)] > 0 && counts[size_t(b)] > 0) {
                slot[size_t(a * num_classes + b)] = int(pairs.size());
                pairs.push_back({a, b});
            }
        }
    }

    int workers = resolve_threads(threads);
    std::vector<std::vector<uint64_t>> partial(size_t(workers), std::vector<uint64_t>(pairs.size() * n_bins, 0));

    if (sampling.kind == PairSampling::Kind::ALL_PAIRS) {
        auto tasks = make_pair_tasks(packed, 64);
        parallel_for(tasks.size(), workers, [&](size_t begin, size_t end, int worker) {
            for (size_t t = begin; t < end; t++) {
                const auto &task = tasks[t];
                uint64_t *hist = partial[size_t(worker)].data() +
                                 size_t(slot[size_t(task.class_a * num_classes + task.class_b)]) * n_bins;
                scan_block(packed[size_t(task.class_a)], packed[size_t(task.class_b)], stride, task.row_begin,
                           task.row_end, [hist](size_t, size_t, int64_t d) { hist[d]++; });
            }
        });
    } else {
        if (sampling.pairs_per_class_pair == 0) {
            throw DomainError("subsampling needs a positive number of pairs");
        }
        parallel_for(pairs.size(), workers, [&](size_t begin, size_t end, int worker) {
            for (size_t s = begin; s < end; s++) {
                auto [a, b] = pairs[s];
                const auto &pa = packed[size_t(a)];
                const auto &pb = packed[size_t(b)];
                std::mt19937_64 rng(derive_seed(sampling.seed, {uint64_t(a), uint64_t(b)}));
                uint64_t *hist = partial[size_t(worker)].data() + s * n_bins;
                for (uint64_t k = 0; k < sampling.pairs_per_class_pair; k++) {
                    size_t i = uniform_index(rng, pa.indices.size());
                    size_t j = uniform_index(rng, pb.indices.size());
                    hist[distance_dynamic(pa.words.data() + i * stride, pb.words.data() + j * stride, stride)]++;
                }
            }
        });
    }

    for (size_t s = 0; s < pairs.size(); s++) {
        ClassPairHistogram h;
        h.class_a = pairs[s].first;
        h.class_b = pairs[s].second;
        h.counts.assign(n_bins, 0);
        for (const auto &p : partial) {
            for (size_t bin = 0; bin < n_bins; bin++) {
                h.counts[bin] += p[s * n_bins + bin];
            }
        }
        out.cross_class_duplicates += h.counts[0];
        out.summaries.push_back(summarize(h));
        out.histograms.push_back(std::move(h));
    }
    return out;
}

CrossClassMinimum min_cross_class_distance_detail(const LabeledDataset &dataset, int threads) {
    dataset.validate();
    auto counts = dataset.class_counts();
    if (std::count_if(counts.begin(), counts.end(), [](int64_t c) { return c > 0; }) < 2) {
        throw DomainError("cross-class distance needs at least two populated classes");
    }
    size_t stride = image_stride(dataset);
    auto packed = pack_by_class(dataset);
    auto tasks = make_pair_tasks(packed, 64);
    int workers = resolve_threads(threads);

    // Ties resolve to the lexicographically smallest (index_a, index_b), which
    // keeps the reported pair independent of the schedule.
    auto better = [](const CrossClassMinimum &x, const CrossClassMinimum &y) {
        if (y.distance < 0) {
            return x.distance >= 0;
        }
        if (x.distance != y.distance) {
            return x.distance >= 0 && x.distance < y.distance;
        }
        return std::pair(x.index_a, x.index_b) < std::pair(y.index_a, y.index_b);
    };
    std::vector<CrossClassMinimum> best(static_cast<size_t>(workers));
    parallel_for(tasks.size(), workers, [&](size_t begin, size_t end, int worker) {
        CrossClassMinimum local;
        int64_t cutoff = std::numeric_limits<int64_t>::max();
        for (size_t t = begin; t < end; t++) {
            const auto &task = tasks[t];
            const auto &pa = packed[size_t(task.class_a)];
            const auto &pb = packed[size_t(task.class_b)];
            scan_block(pa, pb, stride, task.row_begin, task.row_end, [&](size_t i, size_t j, int64_t d) {
                if (d > cutoff) {
                    return;
                }
                size_t x = pa.indices[i];
                size_t y = pb.indices[j];
                CrossClassMinimum candidate{d, std::min(x, y), std::max(x, y)};
                if (better(candidate, local)) {
                    local = candidate;
                    cutoff = d;
                }
            });
        }
        best[size_t(worker)] = local;
    });
    CrossClassMinimum result;
    for (const auto &b : best) {
        if (better(b, result)) {
            result = b;
        }
    }
    return result;
}

int64_t min_cross_class_distance(const LabeledDataset &dataset, int threads) {
    return min_cross_class_distance_detail(dataset, threads).distance;
}

BinaryImage apply_pixel_noise(const BinaryImage &image, double p, std::mt19937_64 &rng) {
    if (!(p >= 0 && p <= 1)) {
        throw DomainError("flip probability must lie in [0, 1]");
    }
    BinaryImage out = image;
    if (p == 0) {
        return out;
    }
    for (size_t i = 0; i < out.num_bits(); i++) {
        if (unit_interval(rng()) < p) {
            out.flip(i);
        }
    }
    return out;
}

}  // namespace qbarcode
