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

#include "qbarcode/gaussian_optics.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qbarcode/errors.h"
#include "qbarcode/special_functions.h"

namespace qbarcode {

namespace {

void check_eta(double eta, const char *name) {
    if (!(eta >= 0 && eta <= 1)) {
        throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(eta));
    }
}

void check_photons(double n, const char *name) {
    if (!(n >= 0) || !std::isfinite(n)) {
        throw DomainError(std::string(name) + " must be a finite non-negative photon number, got " + std::to_string(n));
    }
}

}  // namespace

TransmissivityPair::TransmissivityPair(double eta_b, double eta_w) : eta_b(eta_b), eta_w(eta_w) {
    check_eta(eta_b, "eta_b");
    check_eta(eta_w, "eta_w");
}

ProbeBudget ProbeBudget::finite(double n_signal, int64_t probes) {
    check_photons(n_signal, "n_signal");
    if (probes < 1) {
        throw DomainError("probe count must be positive");
    }
    return {n_signal, probes, n_signal * double(probes)};
}

ProbeBudget ProbeBudget::asymptotic(double n_total) {
    check_photons(n_total, "n_total");
    return {0, std::nullopt, n_total};
}

Eigen::Matrix4d symplectic_form() {
    Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
    omega(0, 1) = 1;
    omega(1, 0) = -1;
    omega(2, 3) = 1;
    omega(3, 2) = -1;
    return omega;
}

bool TwoModeCovariance::is_physical(double tolerance) const {
    if (!matrix.isApprox(matrix.transpose(), 1e-14)) {
        return false;
    }
    Eigen::Matrix4cd m = matrix.cast<std::complex<double>>() +
                         std::complex<double>(0, 0.5) * symplectic_form().cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -tolerance;
}

TwoModeCovariance output_covariance(double n_signal, double eta) {
    check_photons(n_signal, "n_signal");
    check_eta(eta, "eta");
    double mu = 2 * n_signal + 1;
    double mu_prime = std::sqrt(mu * mu - 1);
    double mu_eta = eta * mu + (1 - eta);
    double corr = std::sqrt(eta) * mu_prime;

    Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
    v(0, 0) = v(1, 1) = mu;
    v(2, 2) = v(3, 3) = mu_eta;
    v(0, 2) = v(2, 0) = corr;
    v(1, 3) = v(3, 1) = -corr;
    return {0.5 * v};
}

GaussianInvariants gaussian_invariants(const TwoModeCovariance &a, const TwoModeCovariance &b) {
    const Eigen::Matrix4d omega = symplectic_form();
    double delta = (a.matrix + b.matrix).determinant();
    double gamma = 16 * (omega * a.matrix * omega * b.matrix - 0.25 * Eigen::Matrix4d::Identity()).determinant();

    const Eigen::Matrix4cd half_i_omega = std::complex<double>(0, 0.5) * omega.cast<std::complex<double>>();
    std::complex<double> da = (a.matrix.cast<std::complex<double>>() + half_i_omega).determinant();
    std::complex<double> db = (b.matrix.cast<std::complex<double>>() + half_i_omega).determinant();
    double lambda = std::abs(16.0 * da * db);
    return {delta, gamma, lambda};
}

double fidelity_from_invariants(const GaussianInvariants &inv) {
    double s = std::sqrt(std::max(0.0, inv.gamma)) + std::sqrt(std::max(0.0, inv.lambda));
    double sd = std::sqrt(std::max(0.0, inv.delta));
    return 1 / (std::sqrt((s + sd) / 2) - std::sqrt(std::max(0.0, s - sd) / 2));
}

DeltaCoefficients delta_coefficients(const TransmissivityPair &pair) {
    double eb = pair.eta_b;
    double ew = pair.eta_w;
    if (pair.degenerate()) {
        return {0, 0};
    }
    double dq = 1 - std::sqrt((1 - ew) * (1 - eb)) - std::sqrt(ew * eb);
    double root_gap = std::sqrt(eb) - std::sqrt(ew);
    double dc = root_gap * root_gap / 2;
    return {std::clamp(dq, 0.0, 1.0), dc};
}

double fidelity_quantum(double n_signal, const TransmissivityPair &pair) {
    check_photons(n_signal, "n_signal");
    if (pair.degenerate()) {
        return 1;
    }
    return 1 / (1 + n_signal * delta_coefficients(pair).delta_q);
}

double fidelity_quantum_from_covariances(double n_signal, const TransmissivityPair &pair) {
    if (pair.degenerate()) {
        return 1;
    }
    return fidelity_from_invariants(
        gaussian_invariants(output_covariance(n_signal, pair.eta_b), output_covariance(n_signal, pair.eta_w)));
}

double fidelity_classical(double n_signal, const TransmissivityPair &pair) {
    check_photons(n_signal, "n_signal");
    if (pair.degenerate()) {
        return 1;
    }
    return std::exp(-n_signal * delta_coefficients(pair).delta_c);
}

double asymptotic_fidelity_power(double n_total, double delta) {
    check_photons(n_total, "n_total");
    if (!(delta >= 0)) {
        throw DomainError("delta must be non-negative");
    }
    if (n_total == 0 || delta == 0) {
        return 1;
    }
    return std::exp(-n_total * delta);
}

double photodet_error_coherent(double n_total, const TransmissivityPair &pair) {
    check_photons(n_total, "n_total");
    if (pair.degenerate()) {
        throw DegeneratePairError("photon-counting threshold undefined for eta_b == eta_w");
    }
    if (n_total == 0) {
        return 0.5;
    }
    double lo = std::min(pair.eta_b, pair.eta_w);
    double hi = std::max(pair.eta_b, pair.eta_w);
    // lo == 0 sends the log to infinity and the threshold to zero.
    double n_th = lo == 0 ? 0.0 : n_total * (hi - lo) / std::log(hi / lo);
    auto k = static_cast<int64_t>(std::floor(n_th));
    // Gamma(k+1, N eta) / k! is the Poisson CDF at k.
    double cdf_lo = regularized_upper_gamma(k + 1, n_total * lo);
    double cdf_hi = regularized_upper_gamma(k + 1, n_total * hi);
    return std::clamp(0.5 * (1 - (cdf_lo - cdf_hi)), 0.0, 0.5);
}

double photodet_threshold_slope(const TransmissivityPair &pair) {
    double eb = pair.eta_b;
    double ew = pair.eta_w;
    if (pair.degenerate()) {
        throw DegeneratePairError("photon-counting threshold undefined for eta_b == eta_w");
    }
    if (eb <= 0 || eb >= 1 || ew <= 0 || ew >= 1) {
        throw DomainError("TMSV photon-counting slope needs both transmissivities strictly inside (0, 1)");
    }
    // Decide "white" when eta_w^n1 (1-eta_w)^(n2-n1) beats the same with eta_b.
    double log_ratio_signal = std::log(ew / eb);
    double log_ratio_loss = std::log((1 - eb) / (1 - ew));
    return 1 / (1 + log_ratio_signal / log_ratio_loss);
}

namespace {

/// Upper truncation point and Chernoff bound on P(Poisson(lambda) > n_max).
std::pair<int64_t, double> poisson_truncation(double lambda) {
    auto n_max = static_cast<int64_t>(std::ceil(lambda + 12 * std::sqrt(lambda) + 30));
    double m = double(n_max + 1);
    double log_bound = -lambda + m * (1 + std::log(lambda) - std::log(m));
    return {n_max, std::exp(log_bound)};
}

}  // namespace

TmsvPhotodetSum photodet_tmsv_exact_sum(double n_total, const TransmissivityPair &pair, double slope) {
    check_photons(n_total, "n_total");
    if (n_total == 0) {
        return {0.5, 0, 1};
    }
    double lo = std::min(pair.eta_b, pair.eta_w);
    double hi = std::max(pair.eta_b, pair.eta_w);
    auto [n_max, tail] = poisson_truncation(n_total);

    // The darker channel is declared when n1 <= slope * n2.
    double success = 0;
    for (int64_t n2 = 0; n2 <= n_max; n2++) {
        double w = std::exp(log_poisson_pmf(n2, n_total));
        if (w == 0) {
            continue;
        }
        auto k = static_cast<int64_t>(std::floor(slope * double(n2)));
        double stay_lo;
        double leave_hi;
        if (k < 0) {
            stay_lo = 0;
            leave_hi = 1;
        } else if (k >= n2) {
            stay_lo = 1;
            leave_hi = 0;
        } else {
            boost::math::binomial_distribution<double> b_lo(double(n2), lo);
            boost::math::binomial_distribution<double> b_hi(double(n2), hi);
            stay_lo = boost::math::cdf(b_lo, double(k));
            leave_hi = boost::math::cdf(boost::math::complement(b_hi, double(k)));
        }
        success += w * 0.5 * (stay_lo + leave_hi);
    }
    return {std::clamp(1 - success, 0.0, 1.0), tail, n_max + 1};
}

namespace {

/// Normal approximation of P(n1 <= c n2) under the given channel, integrated
/// against the normal approximation of the Poisson idler count.
double gaussian_g(double lambda, double eta, double slope) {
    double sd = std::sqrt(lambda);
    double a = std::max(0.0, lambda - 10 * sd);
    double b = lambda + 10 * sd;
    double spread = std::sqrt(eta * (1 - eta));
    auto integrand = [&](double x) {
        if (x <= 0) {
            return 0.0;
        }
        double z = (x - lambda) / sd;
        double density = std::exp(-0.5 * z * z) / (sd * std::sqrt(2 * M_PI));
        double root = std::sqrt(x);
        double upper = normal_cdf((slope - eta) * root / spread);
        double lower = normal_cdf(-eta * root / spread);
        return density * (upper - lower);
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, a, b, 20, 1e-8);
}

}  // namespace

double photodet_error_tmsv(double n_total, const TransmissivityPair &pair, PhotodetMode mode) {
    check_photons(n_total, "n_total");
    double slope = photodet_threshold_slope(pair);
    if (n_total == 0) {
        return 0.5;
    }
    if (mode == PhotodetMode::EXACT_SUM) {
        return std::min(0.5, photodet_tmsv_exact_sum(n_total, pair, slope).error);
    }
    double lo = std::min(pair.eta_b, pair.eta_w);
    double hi = std::max(pair.eta_b, pair.eta_w);
    double g_lo = gaussian_g(n_total, lo, slope);
    double g_hi = gaussian_g(n_total, hi, slope);
    return std::clamp(0.5 - 0.5 * (g_lo - g_hi), 0.0, 0.5);
}

namespace {

/// Density matrix of a truncated TMSV after loss on the second mode.
/// Basis index is n_idler * cutoff + n_signal.
Eigen::MatrixXd lossy_tmsv_density(double n_signal, double eta, int cutoff) {
    const int dim = cutoff * cutoff;
    Eigen::VectorXd amp(cutoff);
    for (int n = 0; n < cutoff; n++) {
        // sqrt(N^n / (1+N)^(n+1)), with 0^0 = 1.
        double log_p = -std::log1p(n_signal) + (n == 0 ? 0.0 : double(n) * std::log(n_signal / (1 + n_signal)));
        amp(n) = n_signal == 0 ? (n == 0 ? 1.0 : 0.0) : std::exp(0.5 * log_p);
    }

    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(dim, dim);
    for (int k = 0; k < cutoff; k++) {
        // Kraus operator A_k |n> = sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k>.
        Eigen::VectorXd branch = Eigen::VectorXd::Zero(dim);
        for (int n = k; n < cutoff; n++) {
            double kraus = std::exp(0.5 * log_binomial_pmf(n, n - k, eta));
            branch(n * cutoff + (n - k)) = amp(n) * kraus;
        }
        rho.noalias() += branch * branch.transpose();
    }
    return rho;
}

}  // namespace

FockFidelity fock_fidelity_oracle(double n_signal, double eta_a, double eta_b, int cutoff) {
    check_photons(n_signal, "n_signal");
    check_eta(eta_a, "eta_a");
    check_eta(eta_b, "eta_b");
    if (cutoff < 1) {
        throw DomainError("cutoff must be positive");
    }
    Eigen::MatrixXd rho = lossy_tmsv_density(n_signal, eta_a, cutoff);
    Eigen::MatrixXd sigma = lossy_tmsv_density(n_signal, eta_b, cutoff);
    double kept = rho.trace();
    rho /= rho.trace();
    sigma /= sigma.trace();

    // sqrt(rho) restricted to its support; F = Tr sqrt(sqrt(rho) sigma sqrt(rho)).
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rho_eig(rho);
    const Eigen::VectorXd &evals = rho_eig.eigenvalues();
    std::vector<int> support;
    for (int i = 0; i < evals.size(); i++) {
        if (evals(i) > 1e-15) {
            support.push_back(i);
        }
    }
    Eigen::MatrixXd basis(rho.rows(), Eigen::Index(support.size()));
    Eigen::VectorXd root(Eigen::Index(support.size()));
    for (size_t j = 0; j < support.size(); j++) {
        basis.col(Eigen::Index(j)) = rho_eig.eigenvectors().col(support[j]);
        root(Eigen::Index(j)) = std::sqrt(evals(support[j]));
    }
    Eigen::MatrixXd inner = root.asDiagonal() * (basis.transpose() * sigma * basis) * root.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> inner_eig(inner, Eigen::EigenvaluesOnly);
    double fidelity = 0;
    for (Eigen::Index i = 0; i < inner_eig.eigenvalues().size(); i++) {
        fidelity += std::sqrt(std::max(0.0, inner_eig.eigenvalues()(i)));
    }
    return {fidelity, std::max(0.0, 1 - kept)};
}

}  // namespace qbarcode
