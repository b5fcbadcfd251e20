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

#include "qbarcode/special_functions.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qbarcode {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

double log_expm1(double y) {
    if (y <= 0) {
        return -kInf;
    }
    if (y > 30) {
        return y + std::log1p(-std::exp(-y));
    }
    return std::log(std::expm1(y));
}

double log1mexp(double x) {
    if (x >= 0) {
        return -kInf;
    }
    // Maechler's switch point keeps full relative accuracy on both sides.
    return x > -std::numbers::ln2 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

double log_add_exp(double a, double b) {
    if (a == -kInf) {
        return b;
    }
    if (b == -kInf) {
        return a;
    }
    double hi = std::max(a, b);
    double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

double log_sum_exp(std::span<const double> terms) {
    double hi = -kInf;
    for (double t : terms) {
        hi = std::max(hi, t);
    }
    if (hi == -kInf || hi == kInf) {
        return hi;
    }
    double acc = 0;
    for (double t : terms) {
        acc += std::exp(t - hi);
    }
    return hi + std::log(acc);
}

double log_binomial_coefficient(int64_t n, int64_t k) {
    if (k < 0 || k > n) {
        return -kInf;
    }
    return std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(n - k) + 1);
}

double binary_entropy(double p) {
    if (p <= 0 || p >= 1) {
        return 0;
    }
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

double log_poisson_pmf(int64_t k, double lambda) {
    if (k < 0) {
        return -kInf;
    }
    if (lambda == 0) {
        return k == 0 ? 0.0 : -kInf;
    }
    return double(k) * std::log(lambda) - lambda - std::lgamma(double(k) + 1);
}

double log_binomial_pmf(int64_t trials, int64_t successes, double p) {
    if (successes < 0 || successes > trials) {
        return -kInf;
    }
    double log_c = log_binomial_coefficient(trials, successes);
    int64_t failures = trials - successes;
    double a = successes == 0 ? 0.0 : (p == 0 ? -kInf : double(successes) * std::log(p));
    double b = failures == 0 ? 0.0 : (p == 1 ? -kInf : double(failures) * std::log1p(-p));
    return log_c + a + b;
}

double log_upper_incomplete_gamma(int64_t s, double x) {
    if (x == 0) {
        return std::lgamma(double(s));
    }
    // Terms x^k/k! peak near k = x; accumulate relative to the running max.
    double log_x = std::log(x);
    double hi = -kInf;
    double acc = 0;
    for (int64_t k = 0; k < s; k++) {
        double t = double(k) * log_x - std::lgamma(double(k) + 1);
        if (t > hi) {
            acc = acc * std::exp(hi - t) + 1;
            hi = t;
        } else {
            acc += std::exp(t - hi);
        }
    }
    return std::lgamma(double(s)) - x + hi + std::log(acc);
}

double regularized_upper_gamma(int64_t s, double x) {
    return std::min(1.0, std::exp(log_upper_incomplete_gamma(s, x) - std::lgamma(double(s))));
}

double erfcx(double z) {
    if (z < 5) {
        return std::exp(z * z) * std::erfc(z);
    }
    // Backward evaluation of the Laplace continued fraction
    // erfc(z) = exp(-z^2)/sqrt(pi) / (z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))).
    double t = z;
    for (int n = 80; n >= 1; n--) {
        t = z + 0.5 * n / t;
    }
    return 1 / (t * std::sqrt(std::numbers::pi));
}

double log_erfc(double z) {
    if (z < 5) {
        return std::log(std::erfc(z));
    }
    return -z * z + std::log(erfcx(z));
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

}  // namespace qbarcode
