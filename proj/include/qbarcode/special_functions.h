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

#ifndef QBARCODE_SPECIAL_FUNCTIONS_H_
#define QBARCODE_SPECIAL_FUNCTIONS_H_

#include <cstdint>
#include <span>

namespace qbarcode {

// Log-domain arithmetic. Every bound in this library is evaluated through
// these so that 2^-n prefactors survive for n up to ~1e6.

/// log(exp(y) - 1) for y >= 0; -inf at y == 0.
double log_expm1(double y);
/// log(1 - exp(x)) for x <= 0; -inf at x == 0.
double log1mexp(double x);
double log_add_exp(double a, double b);
double log_sum_exp(std::span<const double> terms);

double log_binomial_coefficient(int64_t n, int64_t k);

/// Binary entropy in bits. H(0) = H(1) = 0.
double binary_entropy(double p);

double log_poisson_pmf(int64_t k, double lambda);
double log_binomial_pmf(int64_t trials, int64_t successes, double p);

/// log Gamma(s, x) for integer s >= 1, from the finite exponential sum
/// Gamma(s, x) = (s-1)! e^{-x} sum_{k<s} x^k / k!.
double log_upper_incomplete_gamma(int64_t s, double x);
/// Gamma(s, x) / (s-1)!, i.e. P(Poisson(x) <= s - 1).
double regularized_upper_gamma(int64_t s, double x);

/// exp(z^2) erfc(z), accurate for all z >= 0.
double erfcx(double z);
/// log(erfc(z)) without underflow for large positive z.
double log_erfc(double z);
/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace qbarcode

#endif  // QBARCODE_SPECIAL_FUNCTIONS_H_
