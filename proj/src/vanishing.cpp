#include "conecert/vanishing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace conecert {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Truncated power series, used for the degenerate start of the vanishing-angle
// ODE. Order 12 keeps the handoff error orders of magnitude below the
// integrator tolerance for every instance exercised here.
// ---------------------------------------------------------------------------

constexpr int kOrder = 12;
using Series = std::array<double, kOrder + 1>;

Series series_const(double c) {
    Series s{};
    s[0] = c;
    return s;
}

Series smul(const Series& a, const Series& b) {
    Series r{};
    for (int i = 0; i <= kOrder; ++i) {
        if (a[i] == 0.0) continue;
        for (int j = 0; i + j <= kOrder; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

// exp of a series with zero constant term
Series sexp(const Series& a) {
    Series r = series_const(1.0);
    Series term = series_const(1.0);
    for (int n = 1; n <= kOrder; ++n) {
        term = smul(term, a);
        for (int i = 0; i <= kOrder; ++i) term[i] /= n;
        for (int i = 0; i <= kOrder; ++i) r[i] += term[i];
    }
    return r;
}

// B(t(x)) for a series t with zero constant term (Horner composition)
Series scompose(const Series& B, const Series& t) {
    Series r = series_const(B[kOrder]);
    for (int n = kOrder - 1; n >= 0; --n) {
        r = smul(r, t);
        r[0] += B[n];
    }
    return r;
}

const Series& tan_series() {
    static const Series s = [] {
        Series t{};
        t[1] = 1.0;
        t[3] = 1.0 / 3.0;
        t[5] = 2.0 / 15.0;
        t[7] = 17.0 / 315.0;
        t[9] = 62.0 / 2835.0;
        t[11] = 1382.0 / 155925.0;
        return t;
    }();
    return s;
}

const Series& log_cos_series() {
    static const Series s = [] {
        Series t{};
        t[2] = -1.0 / 2.0;
        t[4] = -1.0 / 12.0;
        t[6] = -1.0 / 45.0;
        t[8] = -17.0 / 2520.0;
        t[10] = -31.0 / 14175.0;
        t[12] = -691.0 / 935550.0;
        return t;
    }();
    return s;
}

Series to_series(const std::vector<double>& coeffs) {
    Series s{};
    for (size_t i = 0; i < coeffs.size() && i <= kOrder; ++i) s[i] = coeffs[i];
    return s;
}

// Series coefficients of w(theta) solving w'^2 = m^2 (c^2 - w^2) with the
// degenerate start w(0) = 1, w = 1 - b theta^2 + ..., b the larger root of
// 4b^2 - 2m^2 b + m^2 (m - 1 + alpha_eff_sq) = 0. Matching the theta^n
// coefficient of the squared equation is linear in a_n for n >= 3 and the
// pivot m (2m - n (m + sqrt(disc))) never vanishes there.
Series w_start_series(int m, const Series& B, double disc) {
    const Series Bt = scompose(B, tan_series());
    Series lncos = log_cos_series();
    for (int i = 0; i <= kOrder; ++i) lncos[i] *= 2.0 * (m - 1);
    const Series c2 = smul(sexp(lncos), smul(Bt, Bt));

    Series a{};
    a[0] = 1.0;
    a[2] = -m * (m + std::sqrt(disc)) / 4.0;
    const double m2 = static_cast<double>(m) * m;
    for (int n = 3; n <= kOrder; ++n) {
        double s1 = 0.0; // (w'^2)_n without the a_n terms
        for (int i = 2; i < n; ++i) {
            const int l = n + 2 - i;
            if (l >= 2 && l <= n - 1) s1 += i * l * a[i] * a[l];
        }
        double s2 = 0.0; // (w^2)_n without the a_n terms
        for (int i = 1; i < n; ++i) s2 += a[i] * a[n - i];
        a[n] = (m2 * c2[n] - s1 - m2 * s2) / (2.0 * m2 + 4.0 * n * a[2]);
    }
    return a;
}

// Same for the dual form: m^2 g^2 - 2 m t g g' + (1 + t^2) g'^2 = m^2 B(t)^2,
// g = 1 - m (m - 2 + sqrt(disc)) / 4 t^2 + ...
Series g_start_series(int m, const Series& B, double disc) {
    const Series B2 = smul(B, B);
    Series a{};
    a[0] = 1.0;
    a[2] = -m * (m - 2.0 + std::sqrt(disc)) / 4.0;
    const double m2 = static_cast<double>(m) * m;
    for (int n = 3; n <= kOrder; ++n) {
        double s2 = 0.0, s3 = 0.0, s1b = 0.0;
        for (int i = 1; i < n; ++i) {
            const double prod = a[i] * a[n - i];
            s2 += prod;            // (g^2)_n interiors
            s3 += (n - i) * prod;  // (t g g')_n interiors
            s1b += i * (n - i) * prod; // (t^2 g'^2)_n = (g'^2)_{n-2}
        }
        double s1 = 0.0; // (g'^2)_n interiors
        for (int i = 3; i < n; ++i) {
            const int l = n + 2 - i;
            if (l >= 2 && l <= n - 1) s1 += i * l * a[i] * a[l];
        }
        const double known = m2 * s2 - 2.0 * m * s3 + s1 + s1b;
        a[n] = (m2 * B2[n] - known) / (2.0 * m2 - 2.0 * m * n + 4.0 * n * a[2]);
    }
    return a;
}

double eval_series(const Series& a, double x) {
    double r = a[kOrder];
    for (int n = kOrder - 1; n >= 0; --n) r = r * x + a[n];
    return r;
}

// ---------------------------------------------------------------------------
// Embedded Dormand-Prince 5(4) pair for the scalar solver ODEs.
// ---------------------------------------------------------------------------

template <typename RHS>
class Dopri5 {
public:
    Dopri5(RHS rhs, double rtol, double atol) : rhs_(rhs), rtol_(rtol), atol_(atol) {}

    // One accepted step from (x, y) with proposed size h (shrunk on
    // rejection). Returns the accepted size; h becomes the next proposal.
    double step(double& x, double& y, double& h) {
        double k1 = rhs_(x, y);
        for (int attempt = 0; attempt < 200; ++attempt) {
            const double k2 = rhs_(x + c2 * h, y + h * (a21 * k1));
            const double k3 = rhs_(x + c3 * h, y + h * (a31 * k1 + a32 * k2));
            const double k4 = rhs_(x + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
            const double k5 = rhs_(x + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const double k6 =
                rhs_(x + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const double y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const double k7 = rhs_(x + h, y5);
            const double err =
                h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double sc = atol_ + rtol_ * std::max(std::abs(y), std::abs(y5));
            const double ratio = std::abs(err) / sc;
            double factor = 0.9 * std::pow(std::max(ratio, 1e-30), -0.2);
            factor = std::clamp(factor, 0.2, 5.0);
            if (ratio <= 1.0) {
                const double used = h;
                x += h;
                y = y5;
                h = std::min(used * factor, 0.05);
                return used;
            }
            h *= factor;
            if (h < 1e-16) return 0.0; // stalled; caller decides
        }
        return 0.0;
    }

private:
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                            e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                            e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

    RHS rhs_;
    double rtol_, atol_;
};

// Adaptive re-integration from (x0, y0) to x1 (x1 > x0).
template <typename RHS>
double integrate_to(RHS&& rhs, double rtol, double atol, double x0, double y0, double x1) {
    Dopri5<RHS&> solver(rhs, rtol, atol);
    double x = x0, y = y0;
    double h = std::max((x1 - x0) / 8.0, 1e-16);
    while (x < x1 - 1e-16 * (1.0 + std::abs(x1))) {
        h = std::min(h, x1 - x);
        if (solver.step(x, y, h) == 0.0) break;
    }
    return y;
}

// Locates the zero crossing inside an accepted step [x0, x0+h] with
// y(x0) = y0 > 0 by bisection, re-integrating the left half each probe.
template <typename RHS>
double refine_crossing(RHS&& rhs, double rtol, double atol, double x0, double y0, double h) {
    double lo = x0, hi = x0 + h, ylo = y0;
    for (int it = 0; it < 120 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double ym = integrate_to(rhs, rtol, atol, lo, ylo, mid);
        if (ym > 0.0) {
            lo = mid;
            ylo = ym;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

constexpr double kEnvelopeViolation = -1e-10; // roundoff vs genuine infeasibility
constexpr double kBoundFloor = 1e-7;          // "B reached zero" classification

} // namespace

// ---------------------------------------------------------------------------
// Bound evaluators
// ---------------------------------------------------------------------------

double c_bound(double alpha, double t) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha) || !std::isfinite(t))
        throw std::invalid_argument("c_bound: alpha must be finite and >= 0, t finite");
    return (1.0 - alpha * t) * std::exp(alpha * t);
}

double f_bound(double alpha, double t, int m) {
    if (m < 2) throw std::invalid_argument("f_bound: m must be >= 2");
    if (!(alpha >= 0.0) || !std::isfinite(alpha) || !std::isfinite(t))
        throw std::invalid_argument("f_bound: alpha must be finite and >= 0, t finite");
    const double k = m - 1;
    const double s = std::sqrt(k * (k + 1.0));
    return (1.0 - alpha * t * std::sqrt(k / (k + 1.0))) * std::pow(1.0 + alpha * t / s, k);
}

BoundEvaluator BoundEvaluator::c_kind(int m, double alpha) {
    if (m < 2) throw std::invalid_argument("BoundEvaluator: m must be >= 2");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("BoundEvaluator: alpha must be finite and >= 0");
    BoundEvaluator b;
    b.kind_ = BoundKind::C;
    b.m_ = m;
    b.alpha_ = alpha;
    b.alpha_eff_sq_ = alpha * alpha;
    b.first_zero_ = alpha > 0.0 ? 1.0 / alpha : kInf;
    return b;
}

BoundEvaluator BoundEvaluator::f_kind(int m, double alpha) {
    if (m < 2) throw std::invalid_argument("BoundEvaluator: m must be >= 2");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("BoundEvaluator: alpha must be finite and >= 0");
    BoundEvaluator b;
    b.kind_ = BoundKind::F;
    b.m_ = m;
    b.alpha_ = alpha;
    b.alpha_eff_sq_ = alpha * alpha;
    b.first_zero_ = alpha > 0.0 ? std::sqrt(m / (m - 1.0)) / alpha : kInf;
    return b;
}

BoundEvaluator BoundEvaluator::det_kind(int m, double alpha_sq, DetEnvelope envelope) {
    if (m < 2) throw std::invalid_argument("BoundEvaluator: m must be >= 2");
    if (!(alpha_sq >= 0.0) || !std::isfinite(alpha_sq))
        throw std::invalid_argument("BoundEvaluator: alpha_sq must be finite and >= 0");
    BoundEvaluator b;
    b.kind_ = BoundKind::Det;
    b.m_ = m;
    b.alpha_ = std::sqrt(alpha_sq);
    b.alpha_eff_sq_ = alpha_sq; // trace-free expansion: D(t) = 1 - alpha^2 t^2/2 + o(t^2)
    b.first_zero_ = envelope.first_zero();
    b.envelope_ = std::move(envelope);
    return b;
}

double BoundEvaluator::operator()(double t) const {
    switch (kind_) {
        case BoundKind::C: return c_bound(alpha_, t);
        case BoundKind::F: return f_bound(alpha_, t, m_);
        case BoundKind::Det: return (*envelope_)(t);
    }
    return 0.0;
}

std::vector<double> BoundEvaluator::taylor(int order) const {
    std::vector<double> c(static_cast<size_t>(order) + 1, 0.0);
    c[0] = 1.0;
    switch (kind_) {
        case BoundKind::C: {
            // (1 - a t) e^{a t} = 1 - sum_{n>=2} (n-1) a^n t^n / n!
            double fact = 1.0, apow = 1.0;
            for (int n = 1; n <= order; ++n) {
                fact *= n;
                apow *= alpha_;
                c[static_cast<size_t>(n)] = -(n - 1) * apow / fact;
            }
            break;
        }
        case BoundKind::F: {
            const int k = m_ - 1;
            const double s = std::sqrt(static_cast<double>(k) * (k + 1));
            double binom = 1.0; // C(k, n-1)
            double ratio = 1.0; // (alpha/s)^n
            for (int n = 1; n <= order; ++n) {
                ratio *= alpha_ / s;
                // C(k,n) - k C(k,n-1) = C(k,n-1) (k - n + 1 - k n) / n
                const double coeff =
                    (n - 1 <= k) ? binom * (static_cast<double>(k) - n + 1 - static_cast<double>(k) * n) / n
                                 : 0.0;
                c[static_cast<size_t>(n)] = ratio * coeff;
                if (n <= k) binom *= static_cast<double>(k - n + 1) / n;
                else binom = 0.0;
            }
            break;
        }
        case BoundKind::Det: return envelope_->initial_taylor(order);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Solvers
// ---------------------------------------------------------------------------

namespace {

struct StartData {
    double disc = 0.0;
    bool obstructed = false;
    bool plane_case = false; // m = 2, B == 1: w = cos^2, vanishing at pi/2 exactly
};

StartData analyze_start(const BoundEvaluator& bound) {
    StartData s;
    const int m = bound.m();
    s.disc = (m - 2.0) * (m - 2.0) - 4.0 * bound.alpha_eff_sq();
    s.obstructed = s.disc < 0.0;
    s.plane_case = (m == 2) && bound.alpha_eff_sq() == 0.0 && !std::isfinite(bound.first_zero());
    return s;
}

VanishingResult not_found(const BoundEvaluator& bound, Outcome o, double stop_theta, double disc) {
    VanishingResult r;
    r.outcome = o;
    r.bound = bound.kind();
    r.stop_theta = stop_theta;
    r.diag.series_discriminant = disc;
    return r;
}

VanishingResult found_at(const BoundEvaluator& bound, double theta0, double disc) {
    VanishingResult r;
    r.outcome = Outcome::Found;
    r.bound = bound.kind();
    r.theta0 = theta0;
    r.tan_theta0 = theta0 < kPi / 2.0 ? std::tan(theta0) : kInf;
    r.diag.series_discriminant = disc;
    return r;
}

double checked_bound(const BoundEvaluator& bound, double t) {
    const double v = bound(t);
    if (!std::isfinite(v))
        throw std::invalid_argument("vanishing_angle: bound evaluation non-finite");
    return v;
}

// handoff point: at least 1e-3 unless the series radius or the domain cap is
// smaller; integrator noise committed near the degenerate start is amplified
// like theta^{2m/(m + sqrt(disc))}, so the handoff must not sit too low
double handoff_point(double requested, double curvature, double cap) {
    double h = std::max(requested, 1e-3);
    h = std::min(h, 0.02 / std::sqrt(std::max(curvature, 1e-300)));
    h = std::min(h, 0.5 * cap);
    return h;
}

} // namespace

VanishingResult vanishing_angle(const BoundEvaluator& bound, const SolverOptions& opts) {
    const int m = bound.m();
    const StartData start = analyze_start(bound);
    if (start.obstructed)
        return not_found(bound, Outcome::LocalObstruction, 0.0, start.disc);
    if (start.plane_case) return found_at(bound, kPi / 2.0, start.disc);

    const double t_zero = bound.first_zero();
    const double theta_cap =
        std::isfinite(t_zero) ? std::atan(t_zero) : kPi / 2.0 - 1e-9;

    const Series series = w_start_series(m, to_series(bound.taylor(kOrder)), start.disc);
    const double b_plus = -series[2];
    const double theta_h = handoff_point(opts.theta_eps, b_plus, theta_cap);

    const auto c2_of = [&](double theta) {
        const double b = checked_bound(bound, std::tan(theta));
        const double c = std::pow(std::cos(theta), m - 1) * b;
        return c * c;
    };
    const auto rhs = [&](double theta, double w) {
        const double rad = c2_of(theta) - w * w;
        return -m * std::sqrt(std::max(rad, 0.0));
    };

    VanishingResult result;
    result.bound = bound.kind();
    result.diag.series_discriminant = start.disc;
    result.diag.theta_handoff = theta_h;

    double theta = theta_h;
    double w = eval_series(series, theta_h);
    double h = theta_h / 8.0;
    if (opts.keep_trajectory) result.trajectory.push_back({theta, w});

    Dopri5<decltype(rhs)&> solver(rhs, opts.rel_tol, opts.abs_tol);
    for (long step = 0; step < 2000000; ++step) {
        const double theta_prev = theta, w_prev = w;
        h = std::min(h, theta_cap - theta);
        const double used = solver.step(theta, w, h);
        const bool stalled = used == 0.0;

        if (!stalled && w <= 0.0) {
            const double theta0 =
                refine_crossing(rhs, opts.rel_tol, opts.abs_tol, theta_prev, w_prev, used);
            auto r = found_at(bound, theta0, start.disc);
            r.diag = result.diag;
            r.diag.steps = step + 1;
            r.diag.final_step = used;
            r.trajectory = std::move(result.trajectory);
            return r;
        }

        const double rad = c2_of(theta) - w * w;
        if (rad < kEnvelopeViolation || stalled) {
            const Outcome o = checked_bound(bound, std::tan(theta)) < kBoundFloor
                                  ? Outcome::BoundVanishedEarly
                                  : Outcome::EnvelopeHit;
            auto r = not_found(bound, o, theta, start.disc);
            r.diag = result.diag;
            r.diag.steps = step + 1;
            r.diag.final_step = used;
            r.trajectory = std::move(result.trajectory);
            return r;
        }

        if (opts.keep_trajectory) result.trajectory.push_back({theta, w});
        result.diag.steps = step + 1;
        result.diag.final_step = used;

        if (theta >= theta_cap - 1e-12) {
            if (std::isfinite(t_zero)) {
                auto r = not_found(bound, Outcome::BoundVanishedEarly, theta_cap, start.disc);
                r.diag = result.diag;
                r.trajectory = std::move(result.trajectory);
                return r;
            }
            // B never vanishes; the envelope cos^{m-1} squeezes w to 0 at pi/2
            auto r = found_at(bound, kPi / 2.0, start.disc);
            r.diag = result.diag;
            r.trajectory = std::move(result.trajectory);
            return r;
        }
    }
    throw std::runtime_error("vanishing_angle: step budget exceeded");
}

VanishingResult vanishing_angle_gform(const BoundEvaluator& bound, const SolverOptions& opts) {
    const int m = bound.m();
    const StartData start = analyze_start(bound);
    if (start.obstructed)
        return not_found(bound, Outcome::LocalObstruction, 0.0, start.disc);
    if (start.plane_case) return found_at(bound, kPi / 2.0, start.disc);

    const double t_zero = bound.first_zero();
    const double t_cap = std::isfinite(t_zero) ? t_zero : 1e8;

    const Series series = g_start_series(m, to_series(bound.taylor(kOrder)), start.disc);
    const double b_g = -series[2];
    const double t_h = handoff_point(opts.theta_eps, b_g, t_cap);

    const auto rhs = [&](double t, double g) {
        const double b = checked_bound(bound, t);
        const double rad = (1.0 + t * t) * b * b - g * g;
        return m * (t * g - std::sqrt(std::max(rad, 0.0))) / (1.0 + t * t);
    };

    VanishingResult result;
    result.bound = bound.kind();
    result.diag.series_discriminant = start.disc;
    result.diag.theta_handoff = t_h;

    double t = t_h;
    double g = eval_series(series, t_h);
    double h = t_h / 8.0;
    if (opts.keep_trajectory) result.trajectory.push_back({t, g});

    Dopri5<decltype(rhs)&> solver(rhs, opts.rel_tol, opts.abs_tol);
    for (long step = 0; step < 2000000; ++step) {
        const double t_prev = t, g_prev = g;
        h = std::min(h, t_cap - t);
        const double used = solver.step(t, g, h);
        const bool stalled = used == 0.0;

        if (!stalled && g <= 0.0) {
            const double t0 =
                refine_crossing(rhs, opts.rel_tol, opts.abs_tol, t_prev, g_prev, used);
            auto r = found_at(bound, std::atan(t0), start.disc);
            r.diag = result.diag;
            r.diag.steps = step + 1;
            r.diag.final_step = used;
            r.trajectory = std::move(result.trajectory);
            return r;
        }

        const double b = checked_bound(bound, t);
        const double rad = (1.0 + t * t) * b * b - g * g;
        if (rad < kEnvelopeViolation || stalled) {
            const Outcome o = b < kBoundFloor ? Outcome::BoundVanishedEarly : Outcome::EnvelopeHit;
            auto r = not_found(bound, o, std::atan(t), start.disc);
            r.diag = result.diag;
            r.diag.steps = step + 1;
            r.diag.final_step = used;
            r.trajectory = std::move(result.trajectory);
            return r;
        }

        if (opts.keep_trajectory) result.trajectory.push_back({t, g});
        result.diag.steps = step + 1;
        result.diag.final_step = used;

        if (t >= t_cap - 1e-12 * (1.0 + t_cap)) {
            if (std::isfinite(t_zero)) {
                auto r = not_found(bound, Outcome::BoundVanishedEarly, std::atan(t_cap), start.disc);
                r.diag = result.diag;
                r.trajectory = std::move(result.trajectory);
                return r;
            }
            auto r = found_at(bound, kPi / 2.0, start.disc);
            r.diag = result.diag;
            r.trajectory = std::move(result.trajectory);
            return r;
        }
    }
    throw std::runtime_error("vanishing_angle_gform: step budget exceeded");
}

VanishingResult theta_c(int m, double alpha, const SolverOptions& opts) {
    return vanishing_angle(BoundEvaluator::c_kind(m, alpha), opts);
}

VanishingResult theta_F(int m, double alpha, const SolverOptions& opts) {
    return vanishing_angle(BoundEvaluator::f_kind(m, alpha), opts);
}

VanishingResult theta_det(const Link& link, const SolverOptions& opts) {
    if (!link.spectra) throw std::invalid_argument("theta_det: spectra-unavailable");
    return vanishing_angle(
        BoundEvaluator::det_kind(link.k + 1, link.alpha_sq, DetEnvelope(*link.spectra)), opts);
}

} // namespace conecert
