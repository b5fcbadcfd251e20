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

#include "qbarcode/advantage.h"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "qbarcode/errors.h"
#include "qbarcode/special_functions.h"

namespace qbarcode {

namespace {

constexpr double kLn2 = std::numbers::ln2;

AdvantageMode resolve_mode(const ProbeBudget &budget, std::optional<AdvantageMode> mode) {
    AdvantageMode m = mode.value_or(budget.is_asymptotic() ? AdvantageMode::ASYMPTOTIC : AdvantageMode::FINITE);
    if (m == AdvantageMode::FINITE && budget.is_asymptotic()) {
        throw DomainError("finite-mode advantage check needs a finite number of probes");
    }
    return m;
}

/// (log F_q, log F_c) without the round trip through the linear fidelities.
std::pair<double, double> log_fidelities(double n_signal, const TransmissivityPair &pair) {
    auto d = delta_coefficients(pair);
    return {-std::log1p(n_signal * d.delta_q), -n_signal * d.delta_c};
}

double grid_value(int i, int resolution) {
    return double(i) / double(resolution - 1);
}

}  // namespace

double nu_threshold(const TransmissivityPair &pair) {
    auto d = delta_coefficients(pair);
    return (d.delta_q - 2 * d.delta_c) / kLn2;
}

std::vector<AdvantageGridPoint> advantage_region_grid(int resolution) {
    if (resolution < 2) {
        throw DomainError("grid resolution must be at least 2");
    }
    std::vector<AdvantageGridPoint> out;
    out.reserve(size_t(resolution) * size_t(resolution));
    for (int i = 0; i < resolution; i++) {
        for (int j = 0; j < resolution; j++) {
            double eb = grid_value(i, resolution);
            double ew = grid_value(j, resolution);
            out.push_back({eb, ew, nu_threshold(TransmissivityPair(eb, ew))});
        }
    }
    return out;
}

std::vector<AdvantageGridPoint> advantage_eta_w_one_slice(int resolution) {
    if (resolution < 2) {
        throw DomainError("slice resolution must be at least 2");
    }
    std::vector<AdvantageGridPoint> out;
    for (int i = 0; i < resolution; i++) {
        double eb = grid_value(i, resolution);
        out.push_back({eb, 1.0, nu_threshold(TransmissivityPair(eb, 1.0))});
    }
    return out;
}

AdvantageVerdict barcode_advantage_check(int64_t n_pixels, const ProbeBudget &budget,
                                         const TransmissivityPair &pair, std::optional<AdvantageMode> mode) {
    if (n_pixels < 1) {
        throw DomainError("n_pixels must be positive");
    }
    AdvantageVerdict v{};
    v.nu_threshold = nu_threshold(pair);
    v.mode = resolve_mode(budget, mode);
    double n = double(n_pixels);
    if (v.mode == AdvantageMode::ASYMPTOTIC) {
        v.margin = (v.nu_threshold * budget.n_total - n) * kLn2;
    } else {
        double m = double(*budget.probes);
        auto [log_fq, log_fc] = log_fidelities(budget.n_signal, pair);
        v.margin = 2 * m * log_fc - n * kLn2 - m * log_fq;
    }
    v.quantum_wins = v.margin > 0;
    return v;
}

AdvantageVerdict kcpf_advantage_check(int64_t n_pixels, int64_t k_whites, const ProbeBudget &budget,
                                      const TransmissivityPair &pair, std::optional<AdvantageMode> mode) {
    if (k_whites < 1 || k_whites > n_pixels - 1) {
        throw DomainError("k_whites must satisfy 1 <= k <= n-1");
    }
    AdvantageVerdict v{};
    v.nu_threshold = nu_threshold(pair);
    v.mode = resolve_mode(budget, mode);
    double n = double(n_pixels);
    double entropy_bits = n * binary_entropy(double(k_whites) / n) + 1;
    if (v.mode == AdvantageMode::ASYMPTOTIC) {
        v.margin = (2 * v.nu_threshold * budget.n_total - entropy_bits) * kLn2;
    } else {
        // k(n-k) F_c^4M / 2^(nH+1) against k(n-k) F_q^2M.
        double m = double(*budget.probes);
        auto [log_fq, log_fc] = log_fidelities(budget.n_signal, pair);
        v.margin = 4 * m * log_fc - entropy_bits * kLn2 - 2 * m * log_fq;
    }
    v.quantum_wins = v.margin > 0;
    return v;
}

double min_photons_for_training_advantage(int64_t training_size, int64_t h_min, const TransmissivityPair &pair) {
    if (training_size < 1) {
        throw DomainError("training size must be positive");
    }
    if (h_min < 1) {
        throw DomainError("h_min must be positive");
    }
    double nu = nu_threshold(pair);
    if (!(nu > 0)) {
        throw NoAdvantageError("nu_th = " + std::to_string(nu) + " <= 0: no provable advantage for this pair");
    }
    return std::log2(2 * double(training_size)) / (nu * double(h_min));
}

}  // namespace qbarcode
