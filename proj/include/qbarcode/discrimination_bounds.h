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

#ifndef QBARCODE_DISCRIMINATION_BOUNDS_H_
#define QBARCODE_DISCRIMINATION_BOUNDS_H_

#include <cstdint>
#include <string_view>

namespace qbarcode {

enum class BoundKind { GLOBAL_PGM, LOCAL_HELSTROM, SIMPLIFIED, KCPF, KCPF_ASYMPTOTIC, PATTERN_PGM };

std::string_view bound_kind_name(BoundKind kind);

/// A [lower, upper] sandwich on an error probability.
///
/// `lower` and `upper` are clamped to [0, 1]. The unclamped values are kept
/// in log form (natural log, -inf for an exact zero) so callers can still
/// read bounds whose linear value under- or overflows.
struct BoundInterval {
    double lower;
    double upper;
    BoundKind kind;
    double log_lower;
    double log_upper;

    static BoundInterval from_logs(double log_lower, double log_upper, BoundKind kind);
};

/// An n-pixel barcode probed M times, with single-pixel output fidelity F.
struct BarcodeSpec {
    int64_t n_pixels;
    int64_t probes;
    double fidelity;

    /// Throws DomainError on n < 1, M < 1 or F outside [0, 1].
    void validate() const;
};

/// D_n(f) = (f+1)^n - 1, the normalized sum of f^hamming over ordered
/// pairs of distinct n-bit strings.
double pairwise_fidelity_sum(int64_t n_pixels, double f);

/// Global-measurement lower bound ((F^2M + 1)^n - 1) / 2^(n+1) and the
/// local-Helstrom upper bound 1 - (1 - F^M / 2)^n.
BoundInterval barcode_error_bounds(const BarcodeSpec &spec);

/// Bernoulli-relaxed version: [n F^2M / 2^(n+1), (n/2) F^M].
BoundInterval barcode_error_bounds_simplified(const BarcodeSpec &spec);

/// Bounds for local measurements with M copies:
/// [1 - (1 + sqrt(1 - F^2M))^n / 2^n, 1 - (1 - F^M / 2)^n].
BoundInterval local_measurement_bounds(const BarcodeSpec &spec);

/// The global upper bound (F^M + 1)^n - 1 before clamping, in log form.
double log_global_upper_bound(const BarcodeSpec &spec);

/// Smallest M for which e^(n F^M) - 1 <= epsilon. Throws DomainError for f in {0, 1}.
int64_t min_copies_for_error(int64_t n_pixels, double f, double epsilon);

/// D_n^k(f) = 2F1(-k, k-n; 1; f^2) - 1, summed as a terminating series.
double kcpf_pairwise_sum(int64_t n_pixels, int64_t k_whites, double f);
/// log D_n^k(f); -inf when f == 0.
double log_kcpf_pairwise_sum(int64_t n_pixels, int64_t k_whites, double f);

struct KcpfBounds {
    BoundInterval exact;
    BoundInterval asymptotic;
};

/// Exact [D(F^2M) / (2 C(n,k)), D(F^M)] and the large-n form
/// [k(n-k) F^4M / 2^(n H(k/n) + 1), k(n-k) F^2M].
KcpfBounds kcpf_error_bounds(int64_t n_pixels, int64_t k_whites, double fidelity, int64_t probes);

struct ChernoffRates {
    double rate_lower;
    double rate_upper;
    double rate_upper_tight;
};

/// Sandwich on lim -(1/M) log p_err from the fidelity alone. Infinite rates
/// are returned as +inf when f_max == 0.
ChernoffRates chernoff_rate_sandwich(double f_max);

}  // namespace qbarcode

#endif  // QBARCODE_DISCRIMINATION_BOUNDS_H_
