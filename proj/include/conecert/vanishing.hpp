#pragma once

#include <array>
#include <optional>
#include <vector>

#include "conecert/product.hpp"

namespace conecert {

enum class BoundKind { C, F, Det };

/// Scalar bound B(t) standing in for inf_v det(I - t h^v), one of
///   C:   (1 - alpha t) e^{alpha t}
///   F:   (1 - alpha t sqrt(k/(k+1))) (1 + alpha t / sqrt(k(k+1)))^k,  k = m-1
///   Det: sampled determinant envelope D(t)
/// All three dip quadratically: B(t) = 1 - alpha_eff_sq t^2 / 2 + o(t^2).
class BoundEvaluator {
public:
    static BoundEvaluator c_kind(int m, double alpha);
    static BoundEvaluator f_kind(int m, double alpha);
    static BoundEvaluator det_kind(int m, double alpha_sq, DetEnvelope envelope);

    double operator()(double t) const;

    /// First positive zero of B (+infinity when B never vanishes).
    double first_zero() const { return first_zero_; }

    /// Taylor coefficients B_0..B_order at t = 0.
    std::vector<double> taylor(int order) const;

    BoundKind kind() const { return kind_; }
    int m() const { return m_; }
    double alpha() const { return alpha_; }
    double alpha_eff_sq() const { return alpha_eff_sq_; }
    bool rigorous() const { return kind_ != BoundKind::Det || envelope_->complete(); }

private:
    BoundEvaluator() = default;

    BoundKind kind_ = BoundKind::C;
    int m_ = 0;
    double alpha_ = 0.0;
    double alpha_eff_sq_ = 0.0;
    double first_zero_ = 0.0;
    std::optional<DetEnvelope> envelope_;
};

double c_bound(double alpha, double t);
double f_bound(double alpha, double t, int m);

enum class Outcome {
    Found,
    LocalObstruction,   // (m-2)^2 < 4 alpha_eff_sq: no trajectory leaves the start
    EnvelopeHit,        // trajectory met the feasibility envelope w = c(theta)
    BoundVanishedEarly, // B reached 0 while w > 0
};

struct VanishingResult {
    Outcome outcome = Outcome::LocalObstruction;
    BoundKind bound = BoundKind::C;
    double theta0 = 0.0;      // radians, valid when outcome == Found
    double tan_theta0 = 0.0;
    double stop_theta = 0.0;  // where integration stopped for the NotFound cases

    struct Diagnostics {
        long steps = 0;
        double final_step = 0.0;
        double theta_handoff = 0.0; // series -> adaptive switch point
        double series_discriminant = 0.0;
    } diag;

    // accepted (theta, w) pairs when requested
    std::vector<std::array<double, 2>> trajectory;

    bool found() const { return outcome == Outcome::Found; }
};

struct SolverOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double theta_eps = 1e-4; // requested series step; see vanishing_angle notes
    bool keep_trajectory = false;
};

/// Integrates the vanishing-angle ODE in the canonical variable w = r^{-m}:
///
///     w'(theta) = -m sqrt(c(theta)^2 - w^2),   c = cos^{m-1}(theta) B(tan theta),
///
/// with the degenerate start w(0) = c(0) = 1. The envelope-touching initial
/// condition is left through the power series w = 1 - b theta^2 + ..., where b
/// is the larger root of 4b^2 - 2m^2 b + m^2(m - 1 + alpha_eff_sq) = 0 (the
/// fastest-descending branch gives the smallest vanishing angle). Returns the
/// theta where w crosses 0, or a structured nonexistence reason.
VanishingResult vanishing_angle(const BoundEvaluator& bound, const SolverOptions& opts = {});

/// Dual formulation in g(t) = (r cos theta)^{-m}, t = tan theta:
///
///     g'(t) = m [ t g - sqrt((1 + t^2) B(t)^2 - g^2) ] / (1 + t^2),
///
/// equivalent to the w-form through g(t) = w(theta) / cos^m(theta). Used as a
/// mutually verifying route.
VanishingResult vanishing_angle_gform(const BoundEvaluator& bound, const SolverOptions& opts = {});

VanishingResult theta_c(int m, double alpha, const SolverOptions& opts = {});
VanishingResult theta_F(int m, double alpha, const SolverOptions& opts = {});
VanishingResult theta_det(const Link& link, const SolverOptions& opts = {});

} // namespace conecert
