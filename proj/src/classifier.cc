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

#include "qbarcode/classifier.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "qbarcode/errors.h"
#include "qbarcode/parallel.h"

namespace qbarcode {

namespace {

template <size_t W>
NnResult scan_fixed(const uint64_t *words, size_t count, const uint64_t *q, const std::vector<int> &labels) {
    size_t best = 0;
    int64_t best_d = std::numeric_limits<int64_t>::max();
    for (size_t i = 0; i < count; i++) {
        const uint64_t *row = words + i * W;
        int64_t d = 0;
        for (size_t w = 0; w < W; w++) {
            d += std::popcount(row[w] ^ q[w]);
        }
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return {labels[best], best, best_d};
}

NnResult scan_dynamic(const uint64_t *words, size_t count, size_t stride, const uint64_t *q,
                      const std::vector<int> &labels) {
    size_t best = 0;
    int64_t best_d = std::numeric_limits<int64_t>::max();
    for (size_t i = 0; i < count; i++) {
        const uint64_t *row = words + i * stride;
        int64_t d = 0;
        for (size_t w = 0; w < stride; w++) {
            d += std::popcount(row[w] ^ q[w]);
        }
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return {labels[best], best, best_d};
}

}  // namespace

NearestNeighborIndex::NearestNeighborIndex(const LabeledDataset &train) {
    train.validate();
    if (train.size() == 0) {
        throw DomainError("nearest-neighbor index needs a nonempty training set");
    }
    width_ = train.images[0].width();
    height_ = train.images[0].height();
    stride_ = train.images[0].num_words();
    words_.reserve(stride_ * train.size());
    for (const auto &img : train.images) {
        auto w = img.words();
        words_.insert(words_.end(), w.begin(), w.end());
    }
    labels_ = train.labels;
}

NnResult NearestNeighborIndex::classify(const BinaryImage &query) const {
    if (query.width() != width_ || query.height() != height_) {
        throw DomainError("query shape does not match the training images");
    }
    const uint64_t *q = query.words().data();
    if (stride_ == 13) {
        return scan_fixed<13>(words_.data(), labels_.size(), q, labels_);
    }
    return scan_dynamic(words_.data(), labels_.size(), stride_, q, labels_);
}

NnResult nn_classify(const LabeledDataset &train, const BinaryImage &query) {
    return NearestNeighborIndex(train).classify(query);
}

NoisyErrorCurve noisy_error_curve(const LabeledDataset &train, const LabeledDataset &test,
                                  std::span<const double> p_grid, int trials_per_point, uint64_t seed, int threads) {
    if (trials_per_point < 1) {
        throw DomainError("trials_per_point must be positive");
    }
    test.validate();
    if (test.size() == 0) {
        throw DomainError("test set must be nonempty");
    }
    for (size_t i = 0; i < p_grid.size(); i++) {
        if (!(p_grid[i] >= 0 && p_grid[i] <= 1)) {
            throw DomainError("flip probabilities must lie in [0, 1]");
        }
        if (i > 0 && !(p_grid[i] > p_grid[i - 1])) {
            throw DomainError("flip probability grid must be strictly increasing");
        }
    }
    NearestNeighborIndex index(train);
    size_t tasks = test.size() * size_t(trials_per_point);
    int workers = resolve_threads(threads);

    NoisyErrorCurve curve;
    for (double p : p_grid) {
        std::vector<int64_t> wrong(size_t(workers), 0);
        uint64_t p_key = std::bit_cast<uint64_t>(p);
        parallel_for(tasks, workers, [&](size_t begin, size_t end, int worker) {
            int64_t local = 0;
            for (size_t t = begin; t < end; t++) {
                size_t image = t / size_t(trials_per_point);
                size_t trial = t % size_t(trials_per_point);
                std::mt19937_64 rng(derive_seed(seed, {p_key, uint64_t(image), uint64_t(trial)}));
                BinaryImage noisy = apply_pixel_noise(test.images[image], p, rng);
                if (index.classify(noisy).label != test.labels[image]) {
                    local++;
                }
            }
            wrong[size_t(worker)] = local;
        });
        int64_t total_wrong = 0;
        for (int64_t w : wrong) {
            total_wrong += w;
        }
        double e = double(total_wrong) / double(tasks);
        curve.points.push_back({p, e, std::sqrt(e * (1 - e) / double(tasks)), int64_t(tasks), total_wrong});
    }
    return curve;
}

std::vector<double> isotonic_regression(std::span<const double> values, std::span<const double> weights) {
    if (values.size() != weights.size()) {
        throw DomainError("values and weights differ in length");
    }
    struct Block {
        double mean;
        double weight;
        size_t length;
    };
    std::vector<Block> blocks;
    for (size_t i = 0; i < values.size(); i++) {
        if (!(weights[i] > 0)) {
            throw DomainError("isotonic weights must be positive");
        }
        blocks.push_back({values[i], weights[i], 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
            Block top = blocks.back();
            blocks.pop_back();
            Block &prev = blocks.back();
            double w = prev.weight + top.weight;
            prev.mean = (prev.mean * prev.weight + top.mean * top.weight) / w;
            prev.weight = w;
            prev.length += top.length;
        }
    }
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto &b : blocks) {
        out.insert(out.end(), b.length, b.mean);
    }
    return out;
}

MonotoneCurve::MonotoneCurve(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.empty() || x_.size() != y_.size()) {
        throw DomainError("monotone curve needs matching, nonempty abscissae and ordinates");
    }
    for (size_t i = 1; i < x_.size(); i++) {
        if (!(x_[i] > x_[i - 1])) {
            throw DomainError("monotone curve abscissae must be strictly increasing");
        }
        if (y_[i] < y_[i - 1]) {
            throw DomainError("monotone curve ordinates must be non-decreasing");
        }
    }
}

MonotoneCurve MonotoneCurve::fit(const NoisyErrorCurve &curve) {
    std::vector<double> x, y, w;
    for (const auto &pt : curve.points) {
        x.push_back(pt.p);
        y.push_back(pt.error);
        w.push_back(double(std::max<int64_t>(pt.trials, 1)));
    }
    return MonotoneCurve(std::move(x), isotonic_regression(y, w));
}

double MonotoneCurve::operator()(double x) const {
    if (!(x >= x_.front() && x <= x_.back())) {
        throw ExtrapolationError("p = " + std::to_string(x) + " lies outside the sampled range [" +
                                 std::to_string(x_.front()) + ", " + std::to_string(x_.back()) + "]");
    }
    auto it = std::lower_bound(x_.begin(), x_.end(), x);
    size_t hi = size_t(it - x_.begin());
    if (x_[hi] == x) {
        return y_[hi];
    }
    size_t lo = hi - 1;
    double t = (x - x_[lo]) / (x_[hi] - x_[lo]);
    return y_[lo] + t * (y_[hi] - y_[lo]);
}

std::string_view pipeline_source_name(PipelineSource source) {
    switch (source) {
        case PipelineSource::QUANTUM_HELSTROM:
            return "QUANTUM_HELSTROM";
        case PipelineSource::CLASSICAL_HELSTROM:
            return "CLASSICAL_HELSTROM";
        case PipelineSource::QUANTUM_PHOTODET:
            return "QUANTUM_PHOTODET";
        case PipelineSource::CLASSICAL_PHOTODET:
            return "CLASSICAL_PHOTODET";
    }
    return "UNKNOWN";
}

std::optional<PipelineSource> parse_pipeline_source(std::string_view name) {
    for (auto s : {PipelineSource::QUANTUM_HELSTROM, PipelineSource::CLASSICAL_HELSTROM,
                   PipelineSource::QUANTUM_PHOTODET, PipelineSource::CLASSICAL_PHOTODET}) {
        if (pipeline_source_name(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

PixelError pixel_error_from_source(double n_total, const TransmissivityPair &pair, PipelineSource source,
                                   PhotodetMode mode) {
    if (!(n_total >= 0)) {
        throw DomainError("n_total must be non-negative");
    }
    switch (source) {
        case PipelineSource::QUANTUM_HELSTROM:
        case PipelineSource::CLASSICAL_HELSTROM: {
            auto d = delta_coefficients(pair);
            double delta = source == PipelineSource::QUANTUM_HELSTROM ? d.delta_q : d.delta_c;
            double f = asymptotic_fidelity_power(n_total, delta);
            // (1 - sqrt(1 - F^2)) / 2 without cancellation.
            double lower = f * f / (2 * (1 + std::sqrt(std::max(0.0, 1 - f * f))));
            return {lower, f / 2};
        }
        case PipelineSource::QUANTUM_PHOTODET: {
            double p = pair.degenerate() || n_total == 0 ? 0.5 : photodet_error_tmsv(n_total, pair, mode);
            return {p, p};
        }
        case PipelineSource::CLASSICAL_PHOTODET: {
            double p = pair.degenerate() ? 0.5 : photodet_error_coherent(n_total, pair);
            return {p, p};
        }
    }
    throw DomainError("unknown pipeline source");
}

std::vector<PipelineCurve> compose_pipeline(const MonotoneCurve &curve, const TransmissivityPair &pair,
                                            std::span<const double> n_total_grid,
                                            std::span<const PipelineSource> sources, PhotodetMode mode) {
    std::vector<PipelineCurve> out;
    for (auto source : sources) {
        PipelineCurve pc{source, {}};
        bool photodet = source == PipelineSource::QUANTUM_PHOTODET || source == PipelineSource::CLASSICAL_PHOTODET;
        for (double n_total : n_total_grid) {
            auto p = pixel_error_from_source(n_total, pair, source, mode);
            PipelinePoint pt{};
            pt.n_total = n_total;
            pt.p_lower = p.lower;
            pt.p_upper = p.upper;
            pt.e_lower = curve(p.lower);
            pt.e_upper = curve(p.upper);
            pt.e_photodet = photodet ? pt.e_lower : std::numeric_limits<double>::quiet_NaN();
            pc.points.push_back(pt);
        }
        out.push_back(std::move(pc));
    }
    return out;
}

FiniteTrainingProbabilities finite_training_probabilities(double p_image, int64_t training_size,
                                                          std::optional<std::vector<double>> d_cumulative) {
    if (!(p_image >= 0 && p_image <= 1)) {
        throw DomainError("p_image must lie in [0, 1]");
    }
    if (training_size < 1) {
        throw DomainError("training size must be positive");
    }
    double t = double(training_size);
    auto at_least_once = [t](double q) { return q >= 1 ? 1.0 : -std::expm1(t * std::log1p(-q)); };
    FiniteTrainingProbabilities out{at_least_once(p_image), nullptr};
    if (d_cumulative) {
        for (size_t i = 0; i < d_cumulative->size(); i++) {
            double c = (*d_cumulative)[i];
            if (!(c >= 0 && c <= 1) || (i > 0 && c < (*d_cumulative)[i - 1])) {
                throw DomainError("d_cumulative must be a non-decreasing table of probabilities");
            }
        }
        out.p_dmin_leq = [table = std::move(*d_cumulative), at_least_once](int64_t d) {
            if (d < 0) {
                return 0.0;
            }
            double c = size_t(d) < table.size() ? table[size_t(d)] : 1.0;
            return at_least_once(c);
        };
    }
    return out;
}

}  // namespace qbarcode
