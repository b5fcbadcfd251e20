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

#ifndef QBARCODE_PATTERN_BOUNDS_H_
#define QBARCODE_PATTERN_BOUNDS_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qbarcode/discrimination_bounds.h"

namespace qbarcode {

struct LabeledDataset;

/// Hamming-distance counts between images of class_a and images of class_b,
/// indexed by h = 0..n.
struct ClassPairHistogram {
    int class_a = 0;
    int class_b = 0;
    std::vector<uint64_t> counts;

    uint64_t total() const;
    /// counts / total(). All zeros when the histogram is empty.
    std::vector<double> normalized() const;
};

struct HistogramSummary {
    double mu = 0;
    double sigma = 0;
    /// Smallest h with a nonzero count; -1 for an empty histogram.
    int64_t h_min = -1;
};

/// Sample mean, sample standard deviation (n - 1 denominator) and minimum distance.
HistogramSummary summarize(const ClassPairHistogram &histogram);

struct ClassPrior {
    std::vector<double> probabilities;
    std::vector<int64_t> training_counts;

    int64_t total() const;
    /// Empirical frequencies T_c / T.
    static ClassPrior from_counts(std::vector<int64_t> counts);
};

/// B[f] = (1/2) sum_{c != c'} P(c) P(c') sum_h P_cc'(h) f^h.
///
/// A histogram for (c, c') also serves (c', c). Throws IncompleteInputError
/// when a pair of classes with nonzero prior has no histogram.
double b_functional(std::span<const ClassPairHistogram> histograms, const ClassPrior &priors, double f);
/// log B evaluated at f = exp(log_f), so that f = F^M can be passed for huge M.
double log_b_functional(std::span<const ClassPairHistogram> histograms, const ClassPrior &priors, double log_f);

/// The empirical functional B_T[f] = sum over cross-class pairs k < k' of f^h / T^2,
/// stored as a single count-by-distance table so each query costs O(n).
class TrainingBFunctional {
   public:
    TrainingBFunctional(std::span<const ClassPairHistogram> unordered_histograms, int64_t training_size);

    double operator()(double f) const;
    double log_value(double log_f) const;

    int64_t training_size() const {
        return training_size_;
    }
    const std::vector<uint64_t> &counts() const {
        return counts_;
    }
    /// Smallest cross-class distance, -1 when there are no cross-class pairs.
    int64_t h_min() const;

   private:
    std::vector<uint64_t> counts_;
    int64_t training_size_;
};

TrainingBFunctional training_b_functional(const LabeledDataset &dataset);
double b_training(const LabeledDataset &dataset, double f);

/// [b_low, min(1, 2 k b_high)], with b_low = B[F^2M] and b_high = B[F^M].
BoundInterval pattern_error_sandwich(double b_low, double b_high, double k_factor);
BoundInterval pattern_error_sandwich_from_logs(double log_b_low, double log_b_high, double k_factor);

/// 1 / min sqrt(P(c,i) P(c',i')) over nonzero entries of a joint distribution.
/// Throws DomainError on negative entries, an all-zero table, or one that does
/// not sum to 1.
double k_factor(std::span<const double> joint);

/// Normal approximation of sum_h P_cc'(h) f^h.
double gaussian_approx_bcc(const HistogramSummary &summary, double f);
double log_gaussian_approx_bcc(const HistogramSummary &summary, double log_f);

/// (-h_min log f, -2 h_min log f).
std::pair<double, double> asymptotic_rate_sandwich(int64_t h_min, double f);

}  // namespace qbarcode

#endif  // QBARCODE_PATTERN_BOUNDS_H_
