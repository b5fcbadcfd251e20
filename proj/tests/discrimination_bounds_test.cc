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

#include "qbarcode/discrimination_bounds.h"

#include <cmath>
#include <limits>
#include <vector>

#include "gtest/gtest.h"
#include "qbarcode/errors.h"
#include "qbarcode/special_functions.h"
#include "oracles.h"

using namespace qbarcode;
using namespace qbarcode::fixtures;

TEST(discrimination_bounds, pairwise_sum_matches_enumeration) {
    for (int n = 1; n <= 12; n++) {
        auto counts = distance_counts(all_words(n), n);
        for (int i = 1; i <= 9; i++) {
            double f = 0.1 * i;
            double brute = weigh(counts, f) / std::ldexp(1.0, n);
            EXPECT_NEAR(pairwise_fidelity_sum(n, f), brute, 1e-12 * std::max(1.0, brute)) << n << " " << f;
        }
    }
    EXPECT_EQ(pairwise_fidelity_sum(5, 0), 0);
    EXPECT_EQ(pairwise_fidelity_sum(5, 1), 31);
    EXPECT_NEAR(pairwise_fidelity_sum(3, 0.5), 2.375, 1e-15);
}

TEST(discrimination_bounds, kcpf_sum_matches_subset_enumeration) {
    for (int n = 2; n <= 12; n++) {
        for (int k = 1; k <= n - 1; k++) {
            auto words = weight_k_words(n, k);
            auto counts = distance_counts(words, n);
            for (int i = 1; i <= 9; i++) {
                double f = 0.1 * i;
                double brute = weigh(counts, f) / double(words.size());
                EXPECT_NEAR(kcpf_pairwise_sum(n, k, f), brute, 1e-12 * std::max(1.0, brute)) << n << " " << k;
                EXPECT_NEAR(std::exp(log_kcpf_pairwise_sum(n, k, f)), brute, 1e-12 * std::max(1.0, brute));
            }
        }
    }
}

TEST(discrimination_bounds, kcpf_four_pixels_two_whites) {
    // 6 configurations; each sees 4 others at distance 2 and 1 at distance 4.
    auto counts = distance_counts(weight_k_words(4, 2), 4);
    EXPECT_EQ(counts[2], 24u);
    EXPECT_EQ(counts[4], 6u);
    for (double f : {0.2, 0.5, 0.9}) {
        EXPECT_NEAR(kcpf_pairwise_sum(4, 2, f), std::pow(f, 4) + 4 * f * f, 1e-15);
    }
    EXPECT_NEAR(kcpf_pairwise_sum(4, 2, 1), 5, 1e-15);
    EXPECT_NEAR(kcpf_pairwise_sum(10, 3, 1), 119, 1e-12);
    EXPECT_THROW(kcpf_pairwise_sum(4, 0, 0.5), DomainError);
    EXPECT_THROW(kcpf_pairwise_sum(4, 4, 0.5), DomainError);
}

TEST(discrimination_bounds, barcode_examples) {
    auto zero = barcode_error_bounds({1, 1, 0.0});
    EXPECT_EQ(zero.lower, 0);
    EXPECT_EQ(zero.upper, 0);

    auto b = barcode_error_bounds({4, 2, 0.5});
    EXPECT_NEAR(b.lower, (std::pow(std::pow(0.5, 4) + 1, 4) - 1) / 32, 1e-15);
    EXPECT_NEAR(b.lower, pairwise_fidelity_sum(4, std::pow(0.5, 4)) / 32, 1e-15);
    EXPECT_NEAR(b.upper, 1 - std::pow(0.875, 4), 1e-15);
    EXPECT_EQ(b.kind, BoundKind::GLOBAL_PGM);

    for (int n : {1, 3, 7}) {
        auto one = barcode_error_bounds({n, 3, 1.0});
        EXPECT_NEAR(one.lower, (std::ldexp(1.0, n) - 1) / std::ldexp(1.0, n + 1), 1e-15);
        EXPECT_NEAR(one.upper, 1 - std::ldexp(1.0, -n), 1e-15);
    }
}

TEST(discrimination_bounds, simplified_examples) {
    auto s = barcode_error_bounds_simplified({4, 2, 0.5});
    EXPECT_NEAR(s.lower, 0.0078125, 1e-16);
    EXPECT_NEAR(s.upper, 0.5, 1e-16);
    auto z = barcode_error_bounds_simplified({4, 2, 0.0});
    EXPECT_EQ(z.lower, 0);
    EXPECT_EQ(z.upper, 0);
    auto single = barcode_error_bounds_simplified({1, 1, 0.3});
    EXPECT_NEAR(single.lower, 0.09 / 4, 1e-16);
    EXPECT_NEAR(single.upper, 0.15, 1e-16);
    // Bernoulli relaxation only loosens.
    for (int n : {1, 5, 20}) {
        for (double f : {0.1, 0.5, 0.9}) {
            BarcodeSpec spec{n, 2, f};
            EXPECT_LE(barcode_error_bounds_simplified(spec).lower, barcode_error_bounds(spec).lower * (1 + 1e-15));
            EXPECT_GE(barcode_error_bounds_simplified(spec).upper, barcode_error_bounds(spec).upper * (1 - 1e-15));
        }
    }
}

TEST(discrimination_bounds, local_examples) {
    auto z = local_measurement_bounds({3, 1, 0.0});
    EXPECT_EQ(z.lower, 0);
    EXPECT_EQ(z.upper, 0);
    for (int n : {1, 4}) {
        auto one = local_measurement_bounds({n, 2, 1.0});
        EXPECT_NEAR(one.lower, 1 - std::ldexp(1.0, -n), 1e-15);
        EXPECT_NEAR(one.upper, 1 - std::ldexp(1.0, -n), 1e-15);
    }
    auto b = local_measurement_bounds({2, 1, 0.6});
    EXPECT_NEAR(b.lower, 0.19, 1e-15);
    EXPECT_NEAR(b.upper, 0.51, 1e-15);
    // Two independent single-pixel Helstrom measurements, each failing with
    // (1 - sqrt(1 - F^2)) / 2.
    double p_pixel = (1 - std::sqrt(1 - 0.36)) / 2;
    EXPECT_NEAR(b.lower, 1 - std::pow(1 - p_pixel, 2), 1e-15);
}

TEST(discrimination_bounds, orderings_over_a_sweep) {
    for (int n = 1; n <= 20; n++) {
        for (int m = 1; m <= 10; m++) {
            for (int i = 0; i <= 20; i++) {
                double f = 0.05 * i;
                BarcodeSpec spec{n, m, f};
                auto g = barcode_error_bounds(spec);
                auto l = local_measurement_bounds(spec);
                auto s = barcode_error_bounds_simplified(spec);
                EXPECT_LE(g.lower, g.upper * (1 + 1e-15) + 1e-300);
                EXPECT_LE(l.lower, l.upper * (1 + 1e-15) + 1e-300);
                EXPECT_LE(s.lower, s.upper * (1 + 1e-15) + 1e-300);
                // Local-measurement upper bound under the unclamped global one.
                double global_upper = std::min(1.0, std::exp(log_global_upper_bound(spec)));
                EXPECT_LE(l.upper, global_upper * (1 + 1e-14) + 1e-300);
                if (m > 1) {
                    BarcodeSpec fewer{n, m - 1, f};
                    EXPECT_LE(barcode_error_bounds(spec).lower, barcode_error_bounds(fewer).lower * (1 + 1e-14));
                    EXPECT_LE(barcode_error_bounds(spec).upper, barcode_error_bounds(fewer).upper * (1 + 1e-14));
                    EXPECT_LE(local_measurement_bounds(spec).lower,
                              local_measurement_bounds(fewer).lower * (1 + 1e-14));
                }
                if (i > 0) {
                    BarcodeSpec darker{n, m, 0.05 * (i - 1)};
                    EXPECT_GE(g.lower * (1 + 1e-14), barcode_error_bounds(darker).lower);
                    EXPECT_GE(g.upper * (1 + 1e-14), barcode_error_bounds(darker).upper);
                    EXPECT_GE(l.lower * (1 + 1e-14), local_measurement_bounds(darker).lower);
                }
            }
        }
    }
}

TEST(discrimination_bounds, log_domain_survives_large_n) {
    BarcodeSpec spec{1000000, 10, 0.9};
    auto g = barcode_error_bounds(spec);
    EXPECT_EQ(g.lower, 0);
    EXPECT_TRUE(std::isfinite(g.log_lower));
    // (1 + F^2M)^n overwhelms the -1: log lower ~ n log(1 + F^2M) - (n+1) log 2.
    double expected = 1e6 * std::log1p(std::pow(0.9, 20)) - 1000001 * std::log(2.0);
    EXPECT_NEAR(g.log_lower, expected, 1e-9 * std::abs(expected));
    EXPECT_EQ(g.upper, 1);

    // n F^2M << 1: log lower ~ log(n F^2M) - (n+1) log 2.
    auto faint = barcode_error_bounds({1000000, 100, 0.9});
    double faint_expected = std::log(1e6) + 200 * std::log(0.9) - 1000001 * std::log(2.0);
    EXPECT_NEAR(faint.log_lower, faint_expected, 1e-3);

    // F^M far below the smallest double.
    BarcodeSpec deep{10, 5000, 0.5};
    auto d = barcode_error_bounds(deep);
    EXPECT_NEAR(d.log_upper, std::log(10.0) + 5000 * std::log(0.5) - std::log(2.0), 1e-9);
    EXPECT_NEAR(d.log_lower, std::log(10.0) + 10000 * std::log(0.5) - 11 * std::log(2.0), 1e-9);
}

TEST(discrimination_bounds, exponent_sandwich_for_large_m) {
    for (double f : {0.5, 0.9, 0.99}) {
        int64_t m = 10000000;
        auto s = barcode_error_bounds_simplified({10, m, f});
        double rate_from_upper = -s.log_upper / double(m);
        double rate_from_lower = -s.log_lower / double(m);
        EXPECT_NEAR(rate_from_upper, -std::log(f), 1e-3 * -std::log(f));
        EXPECT_NEAR(rate_from_lower, -2 * std::log(f), 1e-3 * -std::log(f));
    }
}

TEST(discrimination_bounds, min_copies) {
    EXPECT_EQ(min_copies_for_error(10, 0.5, 0.01), 10);
    EXPECT_LE(std::expm1(10 * std::pow(0.5, 10)), 0.01 + 1e-12);
    EXPECT_GT(std::expm1(10 * std::pow(0.5, 9)), 0.01);
    EXPECT_EQ(min_copies_for_error(1, 0.5, 0.7), 1);
    EXPECT_EQ(min_copies_for_error(1, 0.3, 0.999), 1);
    EXPECT_THROW(min_copies_for_error(10, 0.0, 0.1), DomainError);
    EXPECT_THROW(min_copies_for_error(10, 1.0, 0.1), DomainError);
}

TEST(discrimination_bounds, kcpf_bounds) {
    auto zero = kcpf_error_bounds(10, 3, 0.0, 2);
    EXPECT_EQ(zero.exact.lower, 0);
    EXPECT_EQ(zero.exact.upper, 0);

    auto b = kcpf_error_bounds(4, 2, 0.5, 1);
    EXPECT_NEAR(b.exact.lower, (std::pow(0.5, 8) + 4 * std::pow(0.5, 4)) / 12, 1e-15);
    EXPECT_EQ(b.exact.upper, 1);
    EXPECT_NEAR(std::exp(b.exact.log_upper), 1.0625, 1e-14);

    // For n = 100, k = 50 the leading term dominates both lower bounds and
    // their ratio is 2^n / C(n, k), about 12.6.
    auto big = kcpf_error_bounds(100, 50, 0.9, 200);
    double log_ratio = big.exact.log_lower - big.asymptotic.log_lower;
    EXPECT_NEAR(log_ratio, 100 * std::log(2.0) - log_binomial_coefficient(100, 50), 1e-6);
    EXPECT_NEAR(std::exp(log_ratio), 12.56, 0.05);
    // The upper bounds share the leading term k(n-k) F^2M.
    EXPECT_NEAR(big.exact.log_upper, big.asymptotic.log_upper, 1e-6);
}

TEST(discrimination_bounds, chernoff_rates) {
    auto one = chernoff_rate_sandwich(1);
    EXPECT_EQ(one.rate_lower, 0);
    EXPECT_NEAR(one.rate_upper, std::log(2.0), 1e-16);
    EXPECT_EQ(one.rate_upper_tight, 0);
    auto half = chernoff_rate_sandwich(0.5);
    EXPECT_NEAR(half.rate_lower, std::log(2.0) / 3, 1e-15);
    EXPECT_NEAR(half.rate_upper_tight, -std::log(1 - std::sqrt(0.75)), 1e-14);
    auto zero = chernoff_rate_sandwich(0);
    EXPECT_TRUE(std::isinf(zero.rate_lower));
    double prev_lower = std::numeric_limits<double>::infinity();
    double prev_tight = prev_lower;
    for (int i = 1; i <= 100; i++) {
        auto r = chernoff_rate_sandwich(0.01 * i);
        EXPECT_LE(r.rate_lower, prev_lower);
        EXPECT_LE(r.rate_upper_tight, prev_tight);
        EXPECT_LE(r.rate_lower, r.rate_upper_tight + 1e-15);
        EXPECT_LE(r.rate_upper_tight, r.rate_upper);
        prev_lower = r.rate_lower;
        prev_tight = r.rate_upper_tight;
    }
}
