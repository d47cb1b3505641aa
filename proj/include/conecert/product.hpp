#pragma once

#include <utility>
#include <vector>

#include "conecert/links.hpp"

namespace conecert {

/// Weights of a minimal product: lambda_i = sqrt(k_i / k).
struct ProductSpec {
    std::vector<Link> factors;
    std::vector<double> weights;
    int k = 0;

    static ProductSpec of(std::vector<Link> factors);
};

/// cos R(L_1 x ... x L_n) = 1 - min_i { lambda_i^2 (1 - cos R_i) }.
/// Input is the list of (k_i, R_i); result lies in (0, pi/2] for n >= 2.
double product_normal_radius(const std::vector<std::pair<int, double>>& radii);

/// Composes factor spectra over the unit normals
///   nu = a1 (xi_1, 0) + a2 (0, xi_2) + a0 eta_0,   a1, a2 >= 0,
/// on a uniform angular grid of the given resolution. When both factors are
/// totally geodesic (all-zero spectra, complete) the normal space is the
/// eta-circle and the grid is replaced by the exact endpoint reduction.
SpectrumFamily compose_spectra(const Link& f1, const Link& f2, int a_resolution = 64);

/// Minimal product of >= 1 links; n-ary composition is the left fold of the
/// binary rule (order-insensitive in all derived fields).
Link minimal_product(const std::vector<Link>& factors);

/// Evaluator for D(t) = inf over represented unit normals of det(I - t A_nu).
class DetEnvelope {
public:
    explicit DetEnvelope(const SpectrumFamily& spectra);

    /// min over samples of prod_i (1 - t eig_i); eta families additionally run
    /// a golden-section descent over a0 from the best grid point.
    double operator()(double t) const;

    /// First t > 0 where D vanishes; +infinity when no sample has a positive
    /// eigenvalue.
    double first_zero() const;

    bool complete() const { return complete_; }

    /// Taylor coefficients of the initial-branch envelope at t = 0, i.e. of
    /// the sample that realizes the minimum on a right-neighborhood of 0.
    std::vector<double> initial_taylor(int order) const;

    double max_sum_sq() const { return max_sum_sq_; }

private:
    std::vector<NormalSample> samples_;
    std::optional<SpectrumFamily::EtaBlocks> eta_;
    bool complete_ = false;
    double first_zero_ = 0.0;
    double max_sum_sq_ = 0.0;
};

double det_envelope(const Link& link, double t);

} // namespace conecert
