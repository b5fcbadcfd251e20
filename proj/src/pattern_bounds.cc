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

#include "qbarcode/pattern_bounds.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "qbarcode/dataset.h"
#include "qbarcode/errors.h"
#include "qbarcode/special_functions.h"

namespace qbarcode {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double checked_log_f(double f) {
    if (!(f >= 0 && f <= 1)) {
        throw DomainError("f must lie in [0, 1], got " + std::to_string(f));
    }
    return f == 0 ? -kInf : std::log(f);
}

/// log sum_h w_h exp(h log_f), with 0^0 = 1.
template <typename Weight>
double log_polynomial(const std::vector<Weight> &weights, double log_f) {
    std::vector<double> terms;
    terms.reserve(weights.size());
    for (size_t h = 0; h < weights.size(); h++) {
        if (weights[h] == 0) {
            continue;
        }
        double power = h == 0 ? 0.0 : double(h) * log_f;
        terms.push_back(std::log(double(weights[h])) + power);
    }
    return terms.empty() ? -kInf : log_sum_exp(terms);
}

}  // namespace

uint64_t ClassPairHistogram::total() const {
    uint64_t t = 0;
    for (uint64_t c : counts) {
        t += c;
    }
    return t;
}

std::vector<double> ClassPairHistogram::normalized() const {
    std::vector<double> out(counts.size(), 0.0);
    uint64_t t = total();
    if (t == 0) {
        return out;
    }
    for (size_t h = 0; h < counts.size(); h++) {
        out[h] = double(counts[h]) / double(t);
    }
    return out;
}

HistogramSummary summarize(const ClassPairHistogram &histogram) {
    HistogramSummary s;
    uint64_t t = histogram.total();
    if (t == 0) {
        return s;
    }
    // Integer moments stay exact for every realistic dataset size.
    long double sum = 0;
    long double sum_sq = 0;
    for (size_t h = 0; h < histogram.counts.size(); h++) {
        uint64_t c = histogram.counts[h];
        if (c == 0) {
            continue;
        }
        if (s.h_min < 0) {
            s.h_min = int64_t(h);
        }
        sum += (long double)c * h;
        sum_sq += (long double)c * h * h;
    }
    long double mean = sum / t;
    s.mu = double(mean);
    if (t > 1) {
        long double var = (sum_sq - sum * mean) / (t - 1);
        s.sigma = double(std::sqrt(std::max<long double>(0, var)));
    }
    return s;
}

int64_t ClassPrior::total() const {
    int64_t t = 0;
    for (int64_t c : training_counts) {
        t += c;
    }
    return t;
}

ClassPrior ClassPrior::from_counts(std::vector<int64_t> counts) {
    ClassPrior prior;
    int64_t t = 0;
    for (int64_t c : counts) {
        if (c < 0) {
            throw DomainError("class counts must be non-negative");
        }
        t += c;
    }
    if (t == 0) {
        throw DomainError("class counts sum to zero");
    }
    for (int64_t c : counts) {
        prior.probabilities.push_back(double(c) / double(t));
    }
    prior.training_counts = std::move(counts);
    return prior;
}

double log_b_functional(std::span<const ClassPairHistogram> histograms, const ClassPrior &priors, double log_f) {
    std::map<std::pair<int, int>, const ClassPairHistogram *> by_pair;
    for (const auto &h : histograms) {
        by_pair.emplace(std::pair(h.class_a, h.class_b), &h);
    }
    size_t num_classes = priors.probabilities.size();
    std::vector<double> terms;
    for (size_t a = 0; a < num_classes; a++) {
        for (size_t b = 0; b < num_classes; b++) {
            double weight = priors.probabilities[a] * priors.probabilities[b];
            if (a == b || weight == 0) {
                continue;
            }
            auto it = by_pair.find(std::pair(int(a), int(b)));
            if (it == by_pair.end()) {
                it = by_pair.find(std::pair(int(b), int(a)));
            }
            if (it == by_pair.end()) {
                throw IncompleteInputError("no histogram for class pair (" + std::to_string(a) + ", " +
                                           std::to_string(b) + ")");
            }
            uint64_t total = it->second->total();
            if (total == 0) {
                throw IncompleteInputError("empty histogram for class pair (" + std::to_string(a) + ", " +
                                           std::to_string(b) + ")");
            }
            double inner = log_polynomial(it->second->counts, log_f) - std::log(double(total));
            terms.push_back(std::log(weight) + inner);
        }
    }
    if (terms.empty()) {
        return -kInf;
    }
    return log_sum_exp(terms) - std::numbers::ln2;
}

double b_functional(std::span<const ClassPairHistogram> histograms, const ClassPrior &priors, double f) {
    return std::exp(log_b_functional(histograms, priors, checked_log_f(f)));
}

TrainingBFunctional::TrainingBFunctional(std::span<const ClassPairHistogram> unordered_histograms,
                                         int64_t training_size)
    : training_size_(training_size) {
    if (training_size < 1) {
        throw DomainError("training set must be nonempty");
    }
    for (const auto &h : unordered_histograms) {
        if (h.class_a == h.class_b) {
            continue;
        }
        if (h.counts.size() > counts_.size()) {
            counts_.resize(h.counts.size(), 0);
        }
        for (size_t i = 0; i < h.counts.size(); i++) {
            counts_[i] += h.counts[i];
        }
    }
}

double TrainingBFunctional::log_value(double log_f) const {
    return log_polynomial(counts_, log_f) - 2 * std::log(double(training_size_));
}

double TrainingBFunctional::operator()(double f) const {
    double log_f = checked_log_f(f);
    // Horner in linear space keeps the polynomial identity exact to rounding;
    // fall back to the log form once the value underflows.
    double acc = 0;
    for (size_t h = counts_.size(); h-- > 0;) {
        acc = acc * f + double(counts_[h]);
    }
    double t = double(training_size_);
    double value = acc / (t * t);
    if (value > 1e-280) {
        return value;
    }
    return std::exp(log_value(log_f));
}

int64_t TrainingBFunctional::h_min() const {
    for (size_t h = 0; h < counts_.size(); h++) {
        if (counts_[h] != 0) {
            return int64_t(h);
        }
    }
    return -1;
}

TrainingBFunctional training_b_functional(const LabeledDataset &dataset) {
    dataset.validate();
    if (dataset.size() == 0) {
        throw DomainError("training set must be nonempty");
    }
    auto counts = dataset.class_counts();
    int populated = int(std::count_if(counts.begin(), counts.end(), [](int64_t c) { return c > 0; }));
    if (populated < 2) {
        return TrainingBFunctional({}, int64_t(dataset.size()));
    }
    auto stats = class_pair_statistics(dataset, PairSampling::all_pairs());
    return TrainingBFunctional(stats.histograms, int64_t(dataset.size()));
}

double b_training(const LabeledDataset &dataset, double f) {
    return training_b_functional(dataset)(f);
}

BoundInterval pattern_error_sandwich_from_logs(double log_b_low, double log_b_high, double k_factor) {
    if (!(k_factor > 0)) {
        throw DomainError("k_factor must be positive");
    }
    double log_upper = std::log(2 * k_factor) + log_b_high;
    return BoundInterval::from_logs(log_b_low, log_upper, BoundKind::PATTERN_PGM);
}

BoundInterval pattern_error_sandwich(double b_low, double b_high, double k_factor) {
    if (!(b_low >= 0) || !(b_high >= 0)) {
        throw DomainError("B values must be non-negative");
    }
    return pattern_error_sandwich_from_logs(b_low == 0 ? -kInf : std::log(b_low),
                                            b_high == 0 ? -kInf : std::log(b_high), k_factor);
}

double k_factor(std::span<const double> joint) {
    double total = 0;
    double min_nonzero = kInf;
    for (double p : joint) {
        if (!(p >= 0)) {
            throw DomainError("joint distribution has a negative or NaN entry");
        }
        total += p;
        if (p > 0) {
            min_nonzero = std::min(min_nonzero, p);
        }
    }
    if (total == 0) {
        throw DomainError("joint distribution is identically zero");
    }
    if (std::abs(total - 1) > 1e-9) {
        throw DomainError("joint distribution sums to " + std::to_string(total) + ", not 1");
    }
    // min over pairs of sqrt(P P') is attained at the smallest entry paired with itself.
    return 1 / min_nonzero;
}

double log_gaussian_approx_bcc(const HistogramSummary &summary, double log_f) {
    if (!(log_f <= 0)) {
        throw DomainError("f must lie in [0, 1]");
    }
    if (!(summary.sigma >= 0)) {
        throw DomainError("sigma must be non-negative");
    }
    if (log_f == -kInf) {
        return -kInf;
    }
    if (summary.sigma == 0) {
        return summary.mu * log_f;
    }
    double s = summary.sigma;
    double w = s * s * log_f + summary.mu - double(summary.h_min);
    // erf(x) + 1 = erfc(-x).
    return -std::numbers::ln2 + summary.mu * log_f + 0.5 * s * s * log_f * log_f +
           log_erfc(-w / (std::numbers::sqrt2 * s));
}

double gaussian_approx_bcc(const HistogramSummary &summary, double f) {
    return std::exp(log_gaussian_approx_bcc(summary, checked_log_f(f)));
}

std::pair<double, double> asymptotic_rate_sandwich(int64_t h_min, double f) {
    if (h_min < 1) {
        throw DomainError("h_min must be at least 1");
    }
    if (!(f > 0 && f <= 1)) {
        throw DomainError("f must lie in (0, 1]");
    }
    double r = -double(h_min) * std::log(f);
    return {r, 2 * r};
}

}  // namespace qbarcode
