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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "qbarcode/errors.h"
#include "test_data.h"

using namespace qbarcode;

namespace {

LabeledDataset from_strings(const std::vector<std::pair<std::string, int>> &items) {
    LabeledDataset d;
    for (const auto &[bits, label] : items) {
        d.images.push_back(BinaryImage::from_string(bits));
        d.labels.push_back(label);
    }
    return d;
}

LabeledDataset random_dataset(size_t count, int width, int height, int classes, std::mt19937_64 &rng) {
    LabeledDataset d;
    for (size_t i = 0; i < count; i++) {
        d.images.push_back(fixtures::random_image(width, height, rng));
        d.labels.push_back(int(rng() % uint64_t(classes)));
    }
    return d;
}

BinaryImage complement(const BinaryImage &img) {
    BinaryImage out = img;
    for (size_t i = 0; i < out.num_bits(); i++) {
        out.flip(i);
    }
    return out;
}

const TransmissivityPair kPair(0.9, 0.95);

}  // namespace

TEST(classifier, nn_examples) {
    auto train = from_strings({{"000", 0}, {"111", 1}});
    auto r = nn_classify(train, BinaryImage::from_string("001"));
    EXPECT_EQ(r.label, 0);
    EXPECT_EQ(r.distance, 1);
    EXPECT_EQ(nn_classify(train, BinaryImage::from_string("111")).distance, 0);
    EXPECT_EQ(nn_classify(train, BinaryImage::from_string("111")).label, 1);

    auto tie = from_strings({{"000", 0}, {"011", 1}});
    auto t = nn_classify(tie, BinaryImage::from_string("001"));
    EXPECT_EQ(t.label, 0);
    EXPECT_EQ(t.index, 0u);
    auto reversed = from_strings({{"011", 1}, {"000", 0}});
    EXPECT_EQ(nn_classify(reversed, BinaryImage::from_string("001")).label, 1);

    EXPECT_THROW(nn_classify(train, BinaryImage::from_string("0011")), DomainError);
    EXPECT_THROW(nn_classify(LabeledDataset{}, BinaryImage::from_string("0")), DomainError);
}

TEST(classifier, nn_matches_naive_scan) {
    std::mt19937_64 rng(21);
    for (auto [w, h] : {std::pair{28, 28}, std::pair{5, 3}, std::pair{70, 2}}) {
        auto train = random_dataset(500, w, h, 10, rng);
        // Plant duplicates so that ties occur.
        for (size_t i = 0; i < 20; i++) {
            train.images[400 + i] = train.images[i];
        }
        NearestNeighborIndex index(train);
        for (int q = 0; q < 10000 / 3; q++) {
            auto query = fixtures::random_image(w, h, rng);
            if (q % 7 == 0) {
                query = train.images[size_t(q) % 500];
            }
            size_t best = 0;
            int64_t best_d = -1;
            for (size_t i = 0; i < train.size(); i++) {
                int64_t d = 0;
                for (size_t b = 0; b < query.num_bits(); b++) {
                    d += query.get(b) != train.images[i].get(b);
                }
                if (best_d < 0 || d < best_d) {
                    best_d = d;
                    best = i;
                }
            }
            auto r = index.classify(query);
            ASSERT_EQ(r.index, best);
            ASSERT_EQ(r.distance, best_d);
            ASSERT_EQ(r.label, train.labels[best]);
        }
    }
}

TEST(classifier, noisy_curve_is_deterministic_across_threads) {
    auto train = binarize_dataset(fixtures::synthetic_digits(300, 31), DatasetRole::TRAIN);
    auto test = binarize_dataset(fixtures::synthetic_digits(60, 32), DatasetRole::TEST);
    std::vector<double> grid{0, 0.05, 0.1, 0.3};
    auto a = noisy_error_curve(train, test, grid, 4, 7, 1);
    for (int threads : {2, 3, 8}) {
        auto b = noisy_error_curve(train, test, grid, 4, 7, threads);
        ASSERT_EQ(a.points.size(), b.points.size());
        for (size_t i = 0; i < a.points.size(); i++) {
            EXPECT_EQ(a.points[i].wrong, b.points[i].wrong);
            EXPECT_EQ(std::bit_cast<uint64_t>(a.points[i].error), std::bit_cast<uint64_t>(b.points[i].error));
        }
    }
    for (const auto &pt : a.points) {
        EXPECT_EQ(pt.trials, 240);
        EXPECT_DOUBLE_EQ(pt.error, double(pt.wrong) / 240);
        EXPECT_DOUBLE_EQ(pt.standard_error, std::sqrt(pt.error * (1 - pt.error) / 240));
    }
    auto other = noisy_error_curve(train, test, grid, 4, 8, 1);
    EXPECT_NE(a.points[3].wrong, other.points[3].wrong);
}

TEST(classifier, noisy_curve_noiseless_point_is_exact) {
    auto train = binarize_dataset(fixtures::synthetic_digits(200, 33), DatasetRole::TRAIN);
    auto test = binarize_dataset(fixtures::synthetic_digits(80, 34), DatasetRole::TEST);
    int64_t wrong = 0;
    for (size_t i = 0; i < test.size(); i++) {
        wrong += nn_classify(train, test.images[i]).label != test.labels[i];
    }
    std::vector<double> grid{0};
    auto curve = noisy_error_curve(train, test, grid, 3, 1);
    EXPECT_EQ(curve.points[0].wrong, 3 * wrong);
}

TEST(classifier, complement_symmetry) {
    auto train = from_strings({{"111000", 0}, {"000111", 1}, {"110100", 0}, {"001011", 1}});
    auto test = from_strings({{"111001", 0}, {"100111", 1}, {"010101", 0}, {"011000", 1}});
    LabeledDataset flipped = test;
    for (auto &img : flipped.images) {
        img = complement(img);
    }
    std::vector<double> one{1}, zero{0};
    auto at_one = noisy_error_curve(train, test, one, 5, 3);
    auto complemented = noisy_error_curve(train, flipped, zero, 5, 4);
    EXPECT_EQ(at_one.points[0].wrong, complemented.points[0].wrong);
}

TEST(classifier, noisy_curve_validation) {
    auto d = from_strings({{"01", 0}, {"10", 1}});
    std::vector<double> bad_order{0.2, 0.1}, bad_range{0, 1.5}, ok{0};
    EXPECT_THROW(noisy_error_curve(d, d, bad_order, 1, 0), DomainError);
    EXPECT_THROW(noisy_error_curve(d, d, bad_range, 1, 0), DomainError);
    EXPECT_THROW(noisy_error_curve(d, d, ok, 0, 0), DomainError);
}

TEST(classifier, isotonic_regression) {
    std::vector<double> v{1, 3, 2, 4}, w{1, 1, 1, 1};
    EXPECT_EQ(isotonic_regression(v, w), (std::vector<double>{1, 2.5, 2.5, 4}));
    std::vector<double> v2{5, 1}, w2{3, 1};
    EXPECT_EQ(isotonic_regression(v2, w2), (std::vector<double>{4, 4}));

    // Brute-force oracle: the fit minimises weighted squared error among monotone sequences on a lattice.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 200; trial++) {
        std::vector<double> values(6), weights(6);
        for (size_t i = 0; i < 6; i++) {
            values[i] = u(rng);
            weights[i] = 0.1 + u(rng);
        }
        auto fit = isotonic_regression(values, weights);
        double fit_cost = 0;
        for (size_t i = 0; i < 6; i++) {
            if (i > 0) {
                ASSERT_LE(fit[i - 1], fit[i] + 1e-15);
            }
            fit_cost += weights[i] * (fit[i] - values[i]) * (fit[i] - values[i]);
        }
        for (int probe = 0; probe < 200; probe++) {
            std::vector<double> cand(6);
            for (auto &c : cand) {
                c = u(rng);
            }
            std::sort(cand.begin(), cand.end());
            double cost = 0;
            for (size_t i = 0; i < 6; i++) {
                cost += weights[i] * (cand[i] - values[i]) * (cand[i] - values[i]);
            }
            ASSERT_GE(cost, fit_cost - 1e-12);
        }
    }
}

TEST(classifier, monotone_curve_interpolation) {
    NoisyErrorCurve raw{{{0, 0.1, 0, 100, 10}, {0.1, 0.3, 0, 100, 30}, {0.2, 0.2, 0, 100, 20}, {0.4, 0.6, 0, 100, 60}}};
    auto curve = MonotoneCurve::fit(raw);
    EXPECT_DOUBLE_EQ(curve(0), 0.1);
    EXPECT_DOUBLE_EQ(curve(0.1), 0.25);
    EXPECT_DOUBLE_EQ(curve(0.2), 0.25);
    EXPECT_DOUBLE_EQ(curve(0.3), 0.425);
    EXPECT_DOUBLE_EQ(curve(0.05), 0.175);
    EXPECT_THROW(curve(-0.01), ExtrapolationError);
    EXPECT_THROW(curve(0.41), ExtrapolationError);
    EXPECT_THROW(MonotoneCurve({0, 0}, {0, 1}), DomainError);
    EXPECT_THROW(MonotoneCurve({0, 1}, {1, 0}), DomainError);
}

TEST(classifier, pixel_error_examples) {
    for (auto s : {PipelineSource::QUANTUM_HELSTROM, PipelineSource::CLASSICAL_HELSTROM}) {
        auto e = pixel_error_from_source(0, kPair, s);
        EXPECT_DOUBLE_EQ(e.lower, 0.5);
        EXPECT_DOUBLE_EQ(e.upper, 0.5);
    }
    auto q = pixel_error_from_source(500, kPair, PipelineSource::QUANTUM_HELSTROM);
    double delta_q = 1 - std::sqrt(0.1 * 0.05) - std::sqrt(0.9 * 0.95);
    double f = std::exp(-500 * delta_q);
    EXPECT_NEAR(f, 0.0989, 5e-4);
    EXPECT_NEAR(q.upper, f / 2, 1e-13);
    EXPECT_NEAR(q.lower, (1 - std::sqrt(1 - f * f)) / 2, 1e-12);
    EXPECT_NEAR(q.lower, 0.00245, 1e-5);
    EXPECT_NEAR(q.upper, 0.0494, 1e-4);

    auto photodet = pixel_error_from_source(0, kPair, PipelineSource::QUANTUM_PHOTODET);
    EXPECT_DOUBLE_EQ(photodet.lower, 0.5);
    auto degenerate = pixel_error_from_source(10, TransmissivityPair(0.9, 0.9), PipelineSource::CLASSICAL_PHOTODET);
    EXPECT_DOUBLE_EQ(degenerate.upper, 0.5);
    EXPECT_THROW(pixel_error_from_source(-1, kPair, PipelineSource::QUANTUM_HELSTROM), DomainError);
}

TEST(classifier, quantum_interval_separates_from_classical) {
    double n = 1;
    while (pixel_error_from_source(n, kPair, PipelineSource::QUANTUM_HELSTROM).upper >=
           pixel_error_from_source(n, kPair, PipelineSource::CLASSICAL_HELSTROM).lower) {
        n *= 1.1;
        ASSERT_LT(n, 1e6);
    }
    // The bands separate after a few tens of photons and stay apart.
    EXPECT_LT(n, 100);
    for (double m = n; m < 2000; m += 50) {
        EXPECT_LT(pixel_error_from_source(m, kPair, PipelineSource::QUANTUM_HELSTROM).upper,
                  pixel_error_from_source(m, kPair, PipelineSource::CLASSICAL_HELSTROM).lower);
    }
}

TEST(classifier, compose_pipeline) {
    MonotoneCurve curve({0, 0.25, 0.5}, {0.05, 0.4, 0.9});
    std::vector<double> grid{0, 50, 100, 200, 500, 1000};
    std::vector<PipelineSource> sources{PipelineSource::QUANTUM_HELSTROM, PipelineSource::CLASSICAL_HELSTROM,
                                        PipelineSource::QUANTUM_PHOTODET, PipelineSource::CLASSICAL_PHOTODET};
    auto out = compose_pipeline(curve, kPair, grid, sources);
    ASSERT_EQ(out.size(), 4u);
    for (const auto &pc : out) {
        bool photodet = pc.source == PipelineSource::QUANTUM_PHOTODET || pc.source == PipelineSource::CLASSICAL_PHOTODET;
        for (const auto &pt : pc.points) {
            EXPECT_LE(pt.e_lower, pt.e_upper);
            EXPECT_GE(pt.e_lower, 0);
            EXPECT_LE(pt.e_upper, 1);
            EXPECT_EQ(std::isnan(pt.e_photodet), !photodet);
            EXPECT_DOUBLE_EQ(pt.e_lower, curve(pt.p_lower));
        }
    }
    for (size_t i = 0; i < grid.size(); i++) {
        EXPECT_LE(out[2].points[i].e_photodet, out[3].points[i].e_photodet);
        EXPECT_LE(out[0].points[i].e_upper, out[1].points[i].e_upper);
    }
    MonotoneCurve narrow({0.1, 0.5}, {0.1, 0.9});
    std::vector<double> big{1e5};
    EXPECT_THROW(compose_pipeline(narrow, kPair, big, sources), ExtrapolationError);
}

TEST(classifier, finite_training_probabilities) {
    EXPECT_DOUBLE_EQ(finite_training_probabilities(0.5, 1).p_exact_match, 0.5);
    EXPECT_NEAR(finite_training_probabilities(0.01, 100).p_exact_match, 1 - std::pow(0.99, 100), 1e-14);
    EXPECT_NEAR(finite_training_probabilities(0.01, 100).p_exact_match, 0.634, 1e-3);
    EXPECT_DOUBLE_EQ(finite_training_probabilities(1e-3, 100000).p_exact_match, 1);
    EXPECT_NEAR(finite_training_probabilities(1e-12, 1000).p_exact_match, 1e-9, 1e-18);
    EXPECT_DOUBLE_EQ(finite_training_probabilities(1, 3).p_exact_match, 1);

    auto r = finite_training_probabilities(0.1, 10, std::vector<double>{0.1, 0.3, 0.6});
    EXPECT_DOUBLE_EQ(r.p_dmin_leq(-1), 0);
    EXPECT_NEAR(r.p_dmin_leq(1), 1 - std::pow(0.7, 10), 1e-14);
    EXPECT_DOUBLE_EQ(r.p_dmin_leq(7), 1);
    EXPECT_FALSE(finite_training_probabilities(0.1, 10).p_dmin_leq);
    EXPECT_THROW(finite_training_probabilities(0.1, 0), DomainError);
    EXPECT_THROW(finite_training_probabilities(0.1, 5, std::vector<double>{0.5, 0.2}), DomainError);
}

TEST(classifier, pipeline_source_names) {
    for (auto s : {PipelineSource::QUANTUM_HELSTROM, PipelineSource::CLASSICAL_HELSTROM,
                   PipelineSource::QUANTUM_PHOTODET, PipelineSource::CLASSICAL_PHOTODET}) {
        EXPECT_EQ(parse_pipeline_source(pipeline_source_name(s)), s);
    }
    EXPECT_FALSE(parse_pipeline_source("bogus"));
}
