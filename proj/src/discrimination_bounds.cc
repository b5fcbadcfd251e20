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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "qbarcode/errors.h"
#include "qbarcode/special_functions.h"

namespace qbarcode {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = std::numbers::ln2;

double log_of(double x) {
    return x <= 0 ? -kInf : std::log(x);
}

/// log((1 + y)^n - 1) given log y.
double log_pow1p_minus_one(double n, double log_y) {
    if (log_y == -kInf) {
        return -kInf;
    }
    if (log_y < -700) {
        return std::log(n) + log_y;
    }
    return log_expm1(n * std::log1p(std::exp(log_y)));
}

/// log(1 - (1 - y)^n) given log y, y in [0, 1].
double log_one_minus_pow1m(double n, double log_y) {
    if (log_y == -kInf) {
        return -kInf;
    }
    if (log_y < -700) {
        return std::log(n) + log_y;
    }
    double y = std::exp(log_y);
    if (y >= 1) {
        return 0;
    }
    return log1mexp(n * std::log1p(-y));
}

void check_fidelity(double f) {
    if (!(f >= 0 && f <= 1)) {
        throw DomainError("fidelity must lie in [0, 1], got " + std::to_string(f));
    }
}

void check_k(int64_t n, int64_t k) {
    if (k < 1 || k > n - 1) {
        throw DomainError("k_whites must satisfy 1 <= k <= n-1 (n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                          ")");
    }
}

}  // namespace

std::string_view bound_kind_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::GLOBAL_PGM:
            return "GLOBAL_PGM";
        case BoundKind::LOCAL_HELSTROM:
            return "LOCAL_HELSTROM";
        case BoundKind::SIMPLIFIED:
            return "SIMPLIFIED";
        case BoundKind::KCPF:
            return "KCPF";
        case BoundKind::KCPF_ASYMPTOTIC:
            return "KCPF_ASYMPTOTIC";
        case BoundKind::PATTERN_PGM:
            return "PATTERN_PGM";
    }
    return "UNKNOWN";
}

BoundInterval BoundInterval::from_logs(double log_lower, double log_upper, BoundKind kind) {
    double lower = std::clamp(std::exp(log_lower), 0.0, 1.0);
    double upper = std::clamp(std::exp(log_upper), 0.0, 1.0);
    return {lower, upper, kind, log_lower, log_upper};
}

void BarcodeSpec::validate() const {
    if (n_pixels < 1) {
        throw DomainError("n_pixels must be positive");
    }
    if (probes < 1) {
        throw DomainError("probes must be positive");
    }
    check_fidelity(fidelity);
}

double pairwise_fidelity_sum(int64_t n_pixels, double f) {
    if (n_pixels < 1) {
        throw DomainError("n_pixels must be positive");
    }
    check_fidelity(f);
    return std::expm1(double(n_pixels) * std::log1p(f));
}

BoundInterval barcode_error_bounds(const BarcodeSpec &spec) {
    spec.validate();
    double n = double(spec.n_pixels);
    double log_f = log_of(spec.fidelity);
    double log_lower = log_pow1p_minus_one(n, 2 * double(spec.probes) * log_f) - (n + 1) * kLn2;
    double log_upper = log_one_minus_pow1m(n, double(spec.probes) * log_f - kLn2);
    return BoundInterval::from_logs(log_lower, log_upper, BoundKind::GLOBAL_PGM);
}

BoundInterval barcode_error_bounds_simplified(const BarcodeSpec &spec) {
    spec.validate();
    double n = double(spec.n_pixels);
    double log_f = log_of(spec.fidelity);
    double log_lower = spec.fidelity == 0 ? -kInf : std::log(n) + 2 * double(spec.probes) * log_f - (n + 1) * kLn2;
    double log_upper = spec.fidelity == 0 ? -kInf : std::log(n) - kLn2 + double(spec.probes) * log_f;
    return BoundInterval::from_logs(log_lower, log_upper, BoundKind::SIMPLIFIED);
}

BoundInterval local_measurement_bounds(const BarcodeSpec &spec) {
    spec.validate();
    double n = double(spec.n_pixels);
    double log_f = log_of(spec.fidelity);
    // 1 - (1 + sqrt(1 - y))/2 = y / (2 (1 + sqrt(1 - y))) with y = F^2M.
    double log_y = 2 * double(spec.probes) * log_f;
    double y = std::exp(log_y);
    double log_t = log_y - kLn2 - std::log1p(std::sqrt(std::max(0.0, 1 - y)));
    double log_lower = log_one_minus_pow1m(n, log_t);
    double log_upper = log_one_minus_pow1m(n, double(spec.probes) * log_f - kLn2);
    return BoundInterval::from_logs(log_lower, log_upper, BoundKind::LOCAL_HELSTROM);
}

double log_global_upper_bound(const BarcodeSpec &spec) {
    spec.validate();
    return log_pow1p_minus_one(double(spec.n_pixels), double(spec.probes) * log_of(spec.fidelity));
}

int64_t min_copies_for_error(int64_t n_pixels, double f, double epsilon) {
    if (n_pixels < 1) {
        throw DomainError("n_pixels must be positive");
    }
    if (!(f > 0 && f < 1)) {
        throw DomainError("min_copies_for_error needs 0 < f < 1");
    }
    if (!(epsilon > 0 && epsilon < 1)) {
        throw DomainError("epsilon must lie in (0, 1)");
    }
    double target = std::log1p(epsilon) / double(n_pixels);
    double m = -std::log(target) / -std::log(f);
    auto copies = static_cast<int64_t>(std::ceil(m));
    copies = std::max<int64_t>(copies, 1);
    // Guard the ceiling against rounding right at an integer.
    while (double(copies) * std::log(f) > std::log(target)) {
        copies++;
    }
    return copies;
}

double kcpf_pairwise_sum(int64_t n_pixels, int64_t k_whites, double f) {
    check_k(n_pixels, k_whites);
    check_fidelity(f);
    // Terminating 2F1(-k, k-n; 1; z) with z = f^2; the j = 0 term (== 1) is dropped.
    double z = f * f;
    double a = -double(k_whites);
    double b = double(k_whites - n_pixels);
    double term = 1;
    double sum = 0;
    for (int64_t j = 0; j < std::min(k_whites, n_pixels - k_whites); j++) {
        double jj = double(j);
        term *= (a + jj) * (b + jj) / ((1 + jj) * (jj + 1)) * z;
        sum += term;
    }
    return sum;
}

double log_kcpf_pairwise_sum(int64_t n_pixels, int64_t k_whites, double f) {
    check_k(n_pixels, k_whites);
    check_fidelity(f);
    if (f == 0) {
        return -kInf;
    }
    double log_z = 2 * std::log(f);
    double a = -double(k_whites);
    double b = double(k_whites - n_pixels);
    // The series terminates where a + j or b + j reaches zero.
    int64_t terms = std::min(k_whites, n_pixels - k_whites);
    std::vector<double> log_terms;
    log_terms.reserve(size_t(terms));
    double log_term = 0;
    for (int64_t j = 0; j < terms; j++) {
        double jj = double(j);
        log_term += std::log((a + jj) * (b + jj)) - 2 * std::log1p(jj) + log_z;
        log_terms.push_back(log_term);
    }
    return log_sum_exp(log_terms);
}

KcpfBounds kcpf_error_bounds(int64_t n_pixels, int64_t k_whites, double fidelity, int64_t probes) {
    check_k(n_pixels, k_whites);
    check_fidelity(fidelity);
    if (probes < 1) {
        throw DomainError("probes must be positive");
    }
    double n = double(n_pixels);
    double k = double(k_whites);
    double m = double(probes);
    double log_f = log_of(fidelity);

    KcpfBounds out{};
    if (fidelity == 0) {
        out.exact = BoundInterval::from_logs(-kInf, -kInf, BoundKind::KCPF);
        out.asymptotic = BoundInterval::from_logs(-kInf, -kInf, BoundKind::KCPF_ASYMPTOTIC);
        return out;
    }
    // D evaluated at F^M and F^2M; exp() of these may underflow, so go through logs.
    auto log_d_at = [&](double log_arg) {
        if (log_arg < -700) {
            // Leading term k(n-k) f^2 dominates once f underflows.
            return std::log(k * (n - k)) + 2 * log_arg;
        }
        return log_kcpf_pairwise_sum(n_pixels, k_whites, std::exp(log_arg));
    };
    double log_lower = log_d_at(2 * m * log_f) - kLn2 - log_binomial_coefficient(n_pixels, k_whites);
    double log_upper = log_d_at(m * log_f);
    out.exact = BoundInterval::from_logs(log_lower, log_upper, BoundKind::KCPF);

    double log_pairs = std::log(k * (n - k));
    double entropy_bits = n * binary_entropy(k / n) + 1;
    out.asymptotic = BoundInterval::from_logs(
        log_pairs + 4 * m * log_f - entropy_bits * kLn2, log_pairs + 2 * m * log_f, BoundKind::KCPF_ASYMPTOTIC);
    return out;
}

ChernoffRates chernoff_rate_sandwich(double f_max) {
    if (!(f_max >= 0 && f_max <= 1)) {
        throw DomainError("f_max must lie in [0, 1]");
    }
    if (f_max == 0) {
        return {kInf, kInf, kInf};
    }
    double log_f = std::log(f_max);
    double lower = -log_f / 3;
    double upper = -2 * log_f + kLn2;
    // 1 - sqrt(1 - f^2) = f^2 / (1 + sqrt(1 - f^2)).
    double tight = -2 * log_f + std::log1p(std::sqrt(std::max(0.0, 1 - f_max * f_max)));
    return {lower, upper, tight};
}

}  // namespace qbarcode
