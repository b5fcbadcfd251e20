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

#ifndef QBARCODE_ADVANTAGE_H_
#define QBARCODE_ADVANTAGE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "qbarcode/gaussian_optics.h"

namespace qbarcode {

enum class AdvantageMode { FINITE, ASYMPTOTIC };

struct AdvantageVerdict {
    double nu_threshold;
    /// True only for a strictly positive margin.
    bool quantum_wins;
    /// Natural-log gap between the classical lower bound and the quantum upper bound.
    double margin;
    AdvantageMode mode;
};

/// (Delta_q - 2 Delta_c) / log 2.
double nu_threshold(const TransmissivityPair &pair);

struct AdvantageGridPoint {
    double eta_b;
    double eta_w;
    double nu_threshold;
};

/// resolution x resolution grid over [0, 1]^2, eta_b major.
std::vector<AdvantageGridPoint> advantage_region_grid(int resolution);
/// The eta_w = 1 slice over `resolution` evenly spaced eta_b values.
std::vector<AdvantageGridPoint> advantage_eta_w_one_slice(int resolution);

/// Compares F_c^2M against 2^n F_q^M. The mode defaults to ASYMPTOTIC for
/// asymptotic budgets and FINITE otherwise; asymptotic mode uses n <= nu_th M N_S.
AdvantageVerdict barcode_advantage_check(int64_t n_pixels, const ProbeBudget &budget,
                                         const TransmissivityPair &pair,
                                         std::optional<AdvantageMode> mode = std::nullopt);

/// Compares the k-CPF classical lower bound against the quantum upper bound;
/// asymptotically n H(k/n) + 1 <= 2 nu_th M N_S.
AdvantageVerdict kcpf_advantage_check(int64_t n_pixels, int64_t k_whites, const ProbeBudget &budget,
                                      const TransmissivityPair &pair,
                                      std::optional<AdvantageMode> mode = std::nullopt);

/// log2(2T) / (nu_th h_min). Throws NoAdvantageError when nu_th <= 0.
double min_photons_for_training_advantage(int64_t training_size, int64_t h_min, const TransmissivityPair &pair);

}  // namespace qbarcode

#endif  // QBARCODE_ADVANTAGE_H_
