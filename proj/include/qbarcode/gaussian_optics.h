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

#ifndef QBARCODE_GAUSSIAN_OPTICS_H_
#define QBARCODE_GAUSSIAN_OPTICS_H_

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

namespace qbarcode {

/// Transmissivities of the lossy channels modelling a black and a white pixel.
struct TransmissivityPair {
    double eta_b;
    double eta_w;

    /// Throws DomainError unless both values lie in [0, 1].
    TransmissivityPair(double eta_b, double eta_w);

    TransmissivityPair swapped() const {
        return {eta_w, eta_b};
    }
    bool degenerate() const {
        return eta_b == eta_w;
    }
};

/// Energy budget per pixel: M probes of N_S mean photons each, or the
/// M -> infinity, N_S -> 0 limit at fixed total M * N_S.
struct ProbeBudget {
    double n_signal;
    std::optional<int64_t> probes;
    double n_total;

    static ProbeBudget finite(double n_signal, int64_t probes);
    static ProbeBudget asymptotic(double n_total);

    bool is_asymptotic() const {
        return !probes.has_value();
    }
};

/// Covariance matrix of a zero-mean two-mode Gaussian state over the
/// quadratures (x1, p1, x2, p2). Vacuum variance is 1/2.
struct TwoModeCovariance {
    Eigen::Matrix4d matrix;

    /// Checks V + (i/2) Omega >= 0 up to `tolerance`.
    bool is_physical(double tolerance = 1e-12) const;
};

/// The symplectic form (iY) (+) (iY).
Eigen::Matrix4d symplectic_form();

struct GaussianInvariants {
    double delta;
    double gamma;
    double lambda;
};

struct DeltaCoefficients {
    double delta_q;
    double delta_c;
};

/// Output covariance when the second mode of a TMSV with `n_signal` mean
/// photons per mode crosses a pure-loss channel of transmissivity `eta`.
TwoModeCovariance output_covariance(double n_signal, double eta);

/// Delta = det(V_a + V_b), Gamma = 2^4 det(Omega V_a Omega V_b - I/4),
/// Lambda = 2^4 det(V_a + i Omega/2) det(V_b + i Omega/2).
GaussianInvariants gaussian_invariants(const TwoModeCovariance &a, const TwoModeCovariance &b);

/// Uhlmann fidelity of two zero-mean two-mode Gaussian states from their invariants.
double fidelity_from_invariants(const GaussianInvariants &invariants);

/// Closed form 1 / (1 + N_S Delta_q) for TMSV probes.
double fidelity_quantum(double n_signal, const TransmissivityPair &pair);

/// Same quantity computed from the two output covariance matrices.
double fidelity_quantum_from_covariances(double n_signal, const TransmissivityPair &pair);

/// exp(-N_S Delta_c) for coherent-state probes.
double fidelity_classical(double n_signal, const TransmissivityPair &pair);

DeltaCoefficients delta_coefficients(const TransmissivityPair &pair);

/// exp(-n_total * delta): the limit of F^M as M -> infinity at fixed M * N_S.
double asymptotic_fidelity_power(double n_total, double delta);

/// Pixel error of a coherent probe read by photon counting with the
/// likelihood-ratio threshold n_th = N (eta_w - eta_b) / log(eta_w / eta_b).
/// Throws DegeneratePairError when eta_b == eta_w.
double photodet_error_coherent(double n_total, const TransmissivityPair &pair);

enum class PhotodetMode { EXACT_SUM, GAUSSIAN_APPROX };

/// Slope c of the maximum-likelihood decision line n1 = c * n2 between the
/// two conditional binomials, where n1 counts signal photons and n2 idler photons.
double photodet_threshold_slope(const TransmissivityPair &pair);

struct TmsvPhotodetSum {
    double error;
    /// Chernoff bound on the Poisson mass beyond the truncated sum.
    double truncation_bound;
    int64_t terms;
};

/// Exact-sum evaluation of the TMSV photon-counting error for an arbitrary
/// decision slope. n2 ~ Poisson(n_total), n1 | n2 ~ Binomial(n2, eta).
TmsvPhotodetSum photodet_tmsv_exact_sum(double n_total, const TransmissivityPair &pair, double slope);

/// Pixel error of a TMSV probe read by joint photon counting of signal and idler.
/// Requires both transmissivities strictly inside (0, 1).
double photodet_error_tmsv(double n_total, const TransmissivityPair &pair, PhotodetMode mode);

struct FockFidelity {
    double value;
    /// Probability mass of the TMSV discarded by the truncation.
    double truncation_error;
};

/// Brute-force fidelity of two TMSV-through-loss states built as density
/// matrices in a Fock basis truncated to `cutoff` levels per mode.
FockFidelity fock_fidelity_oracle(double n_signal, double eta_a, double eta_b, int cutoff);

}  // namespace qbarcode

#endif  // QBARCODE_GAUSSIAN_OPTICS_H_
