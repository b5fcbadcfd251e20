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

#ifndef QBARCODE_CLASSIFIER_H_
#define QBARCODE_CLASSIFIER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qbarcode/dataset.h"
#include "qbarcode/gaussian_optics.h"

namespace qbarcode {

struct NnResult {
    int label;
    size_t index;
    int64_t distance;
};

/// Training images packed into one contiguous word array for fast scans.
class NearestNeighborIndex {
   public:
    explicit NearestNeighborIndex(const LabeledDataset &train);

    /// Minimum-Hamming-distance training image; ties go to the lowest index.
    NnResult classify(const BinaryImage &query) const;

    size_t size() const {
        return labels_.size();
    }

   private:
    std::vector<uint64_t> words_;
    std::vector<int> labels_;
    size_t stride_ = 0;
    int width_ = 0;
    int height_ = 0;
};

NnResult nn_classify(const LabeledDataset &train, const BinaryImage &query);

struct NoisyErrorPoint {
    double p;
    double error;
    double standard_error;
    /// Classifications performed at this p: test images x trials.
    int64_t trials;
    int64_t wrong;
};

struct NoisyErrorCurve {
    std::vector<NoisyErrorPoint> points;
};

/// Monte Carlo estimate of the nearest-neighbor error when every pixel of each
/// test image is flipped with probability p. Draws depend only on (seed, p,
/// test index, trial), so the result does not depend on `threads`.
NoisyErrorCurve noisy_error_curve(const LabeledDataset &train, const LabeledDataset &test,
                                  std::span<const double> p_grid, int trials_per_point, uint64_t seed,
                                  int threads = 0);

/// Non-decreasing piecewise-linear function fitted to a NoisyErrorCurve by
/// weighted isotonic regression.
class MonotoneCurve {
   public:
    MonotoneCurve(std::vector<double> x, std::vector<double> y);
    static MonotoneCurve fit(const NoisyErrorCurve &curve);

    /// Throws ExtrapolationError outside [x.front(), x.back()].
    double operator()(double x) const;

    const std::vector<double> &x() const {
        return x_;
    }
    const std::vector<double> &y() const {
        return y_;
    }

   private:
    std::vector<double> x_;
    std::vector<double> y_;
};

/// Pool-adjacent-violators fit: the weighted least-squares non-decreasing sequence.
std::vector<double> isotonic_regression(std::span<const double> values, std::span<const double> weights);

enum class PipelineSource { QUANTUM_HELSTROM, CLASSICAL_HELSTROM, QUANTUM_PHOTODET, CLASSICAL_PHOTODET };

std::string_view pipeline_source_name(PipelineSource source);
std::optional<PipelineSource> parse_pipeline_source(std::string_view name);

struct PixelError {
    double lower;
    double upper;
};

/// Helstrom sources give [(1 - sqrt(1 - F^2)) / 2, F / 2] with F the asymptotic
/// fidelity power; photodetection sources give a point (lower == upper).
PixelError pixel_error_from_source(double n_total, const TransmissivityPair &pair, PipelineSource source,
                                   PhotodetMode mode = PhotodetMode::EXACT_SUM);

struct PipelinePoint {
    double n_total;
    double p_lower;
    double p_upper;
    double e_lower;
    double e_upper;
    /// Equal to e_lower == e_upper for photodetection sources, NaN otherwise.
    double e_photodet;
};

struct PipelineCurve {
    PipelineSource source;
    std::vector<PipelinePoint> points;
};

std::vector<PipelineCurve> compose_pipeline(const MonotoneCurve &curve, const TransmissivityPair &pair,
                                            std::span<const double> n_total_grid,
                                            std::span<const PipelineSource> sources,
                                            PhotodetMode mode = PhotodetMode::EXACT_SUM);

struct FiniteTrainingProbabilities {
    /// 1 - (1 - p_i)^T.
    double p_exact_match;
    /// D -> 1 - (1 - P(d <= D))^T, set only when a cumulative table was given.
    std::function<double(int64_t)> p_dmin_leq;
};

/// `d_cumulative[D]` holds P(d <= D | i); entries past the end count as 1.
FiniteTrainingProbabilities finite_training_probabilities(
    double p_image, int64_t training_size, std::optional<std::vector<double>> d_cumulative = std::nullopt);

}  // namespace qbarcode

#endif  // QBARCODE_CLASSIFIER_H_
