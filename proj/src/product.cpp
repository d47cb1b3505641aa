#include "conecert/product.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace conecert {

namespace {

constexpr double kPi = std::numbers::pi;

double clamped_acos(double x) {
    // guard against rounding drift just outside [-1, 1]
    if (x > 1.0 && x < 1.0 + 1e-14) x = 1.0;
    if (x < -1.0 && x > -1.0 - 1e-14) x = -1.0;
    if (x < -1.0 || x > 1.0) throw std::invalid_argument("acos argument out of range");
    return std::acos(x);
}

bool all_zero(const SpectrumFamily& family) {
    for (const auto& s : family.samples)
        for (double e : s.eigenvalues)
            if (e != 0.0) return false;
    return true;
}

double sample_det(const NormalSample& s, double t) {
    double p = 1.0;
    for (double e : s.eigenvalues) p *= 1.0 - t * e;
    return p;
}

// Samples closed under negation; flipping the sign of a factor normal negates
// its spectrum, which is what lets the composition grid keep a1, a2 >= 0.
std::vector<NormalSample> with_negations(const std::vector<NormalSample>& samples) {
    std::vector<NormalSample> out = samples;
    for (const auto& s : samples) {
        NormalSample neg = s;
        for (double& e : neg.eigenvalues) e = -e;
        bool dup = false;
        for (const auto& have : out)
            if (have.eigenvalues == neg.eigenvalues) { dup = true; break; }
        if (!dup) out.push_back(std::move(neg));
    }
    return out;
}

NormalSample composed_sample(const NormalSample& mu, const NormalSample& sigma, double lambda1,
                             double lambda2, double a0, double a1, double a2) {
    NormalSample s;
    s.eigenvalues.reserve(mu.eigenvalues.size() + sigma.eigenvalues.size());
    for (double m : mu.eigenvalues) s.eigenvalues.push_back(a1 * m / lambda1 - a0 * lambda2 / lambda1);
    for (double g : sigma.eigenvalues) s.eigenvalues.push_back(a2 * g / lambda2 + a0 * lambda1 / lambda2);
    return s;
}

Link binary_product(const Link& l1, const Link& l2) {
    const int k1 = l1.k, k2 = l2.k, k = k1 + k2;

    Link out;
    out.name = l1.name + " x " + l2.name;
    out.k = k;

    // alpha^2 = k max{1, s(L1), s(L2)}  (Lemma on second fundamental forms)
    const double slope_max = std::max({1.0, l1.slope(), l2.slope()});
    out.alpha_sq = k * slope_max;
    if (l1.slope_exact && l2.slope_exact) {
        const Rational s = max(Rational::of(1, 1), max(*l1.slope_exact, *l2.slope_exact));
        out.slope_exact = s;
        out.alpha_sq = static_cast<double>(k) * s.num / s.den;
    }

    out.normal_radius = product_normal_radius({{k1, l1.normal_radius}, {k2, l2.normal_radius}});

    if (l1.spectra && l2.spectra && l1.spectra->complete && l2.spectra->complete)
        out.spectra = compose_spectra(l1, l2);

    auto prov = [](const Link& l) {
        return l.provenance.rfind("product(", 0) == 0
                   ? l.provenance.substr(8, l.provenance.size() - 9)
                   : l.provenance;
    };
    out.provenance = "product(" + prov(l1) + "," + prov(l2) + ")";
    return out;
}

} // namespace

ProductSpec ProductSpec::of(std::vector<Link> factors) {
    if (factors.empty()) throw std::invalid_argument("minimal product needs at least one factor");
    ProductSpec spec;
    spec.k = 0;
    for (const auto& f : factors) {
        if (f.k < 1) throw std::invalid_argument("minimal product: unsupported zero-dimensional factor");
        spec.k += f.k;
    }
    spec.weights.reserve(factors.size());
    for (const auto& f : factors) spec.weights.push_back(std::sqrt(f.k / static_cast<double>(spec.k)));
    spec.factors = std::move(factors);
    return spec;
}

double product_normal_radius(const std::vector<std::pair<int, double>>& radii) {
    if (radii.empty()) throw std::invalid_argument("product_normal_radius: empty input");
    int k = 0;
    for (const auto& [ki, ri] : radii) {
        if (ki < 1) throw std::invalid_argument("product_normal_radius: dimension must be >= 1");
        if (!(ri > 0.0) || ri > kPi + 1e-12)
            throw std::invalid_argument("product_normal_radius: radius must lie in (0, pi]");
        k += ki;
    }
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& [ki, ri] : radii)
        smallest = std::min(smallest, (ki / static_cast<double>(k)) * (1.0 - std::cos(ri)));
    return clamped_acos(1.0 - smallest);
}

SpectrumFamily compose_spectra(const Link& f1, const Link& f2, int a_resolution) {
    if (!f1.spectra || !f2.spectra)
        throw std::invalid_argument("compose_spectra: spectra-unavailable for a factor");
    if (a_resolution < 8) throw std::invalid_argument("compose_spectra: a_resolution must be >= 8");

    const int k1 = f1.k, k2 = f2.k, k = k1 + k2;
    const double lambda1 = std::sqrt(k1 / static_cast<double>(k));
    const double lambda2 = std::sqrt(k2 / static_cast<double>(k));

    SpectrumFamily out;

    const bool zero_case =
        f1.spectra->complete && f2.spectra->complete && all_zero(*f1.spectra) && all_zero(*f2.spectra);
    if (zero_case) {
        // Normal space is exactly the eta-span. det(I - t A_{a0 eta}) is
        // log-concave in a0 with its maximum at a0 = 0, so the infimum over
        // a0 in [-1, 1] sits at the endpoints; the two endpoint samples
        // represent the envelope exactly.
        NormalSample mu{std::vector<double>(static_cast<size_t>(k1), 0.0)};
        NormalSample sigma{std::vector<double>(static_cast<size_t>(k2), 0.0)};
        out.samples.push_back(composed_sample(mu, sigma, lambda1, lambda2, 1.0, 0.0, 0.0));
        out.samples.push_back(composed_sample(mu, sigma, lambda1, lambda2, -1.0, 0.0, 0.0));
        out.complete = true;
        out.eta = SpectrumFamily::EtaBlocks{k1, k2, lambda1, lambda2};
        return out;
    }

    const auto samples1 = with_negations(f1.spectra->samples);
    const auto samples2 = with_negations(f2.spectra->samples);
    for (int i = 0; i <= a_resolution; ++i) {
        const double phi = kPi * i / a_resolution; // a0 = cos(phi) covers both signs
        const double a0 = std::cos(phi), sin_phi = std::sin(phi);
        for (int j = 0; j <= a_resolution; ++j) {
            const double psi = 0.5 * kPi * j / a_resolution;
            const double a1 = sin_phi * std::cos(psi);
            const double a2 = sin_phi * std::sin(psi);
            for (const auto& mu : samples1)
                for (const auto& sigma : samples2)
                    out.samples.push_back(
                        composed_sample(mu, sigma, lambda1, lambda2, a0, a1, a2));
            if (sin_phi == 0.0) break; // poles: psi is immaterial
        }
    }
    out.complete = false;
    return out;
}

Link minimal_product(const std::vector<Link>& factors) {
    ProductSpec spec = ProductSpec::of(factors); // validates dimensions
    if (spec.factors.size() == 1) return spec.factors.front();
    Link acc = spec.factors.front();
    for (size_t i = 1; i < spec.factors.size(); ++i) acc = binary_product(acc, spec.factors[i]);
    return acc;
}

DetEnvelope::DetEnvelope(const SpectrumFamily& spectra) {
    if (spectra.samples.empty())
        throw std::invalid_argument("DetEnvelope: spectra-unavailable (no samples)");
    samples_ = spectra.samples;
    eta_ = spectra.eta;
    complete_ = spectra.complete;
    double max_eig = 0.0;
    for (const auto& s : samples_) {
        double sum = 0.0;
        for (double e : s.eigenvalues) {
            max_eig = std::max(max_eig, e);
            sum += e * e;
        }
        max_sum_sq_ = std::max(max_sum_sq_, sum);
    }
    first_zero_ = max_eig > 0.0 ? 1.0 / max_eig : std::numeric_limits<double>::infinity();
}

double DetEnvelope::operator()(double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("DetEnvelope: t must be >= 0");
    if (eta_) {
        // 1-parameter eta family: coarse grid, then golden-section descent
        // from the best grid point (lands on an endpoint; see compose_spectra)
        const auto f = [&](double a0) {
            return std::pow(1.0 + t * a0 * eta_->lambda2 / eta_->lambda1, eta_->k1) *
                   std::pow(1.0 - t * a0 * eta_->lambda1 / eta_->lambda2, eta_->k2);
        };
        const int n = 64;
        int best = 0;
        double fbest = f(-1.0);
        for (int i = 1; i <= n; ++i) {
            const double v = f(-1.0 + 2.0 * i / n);
            if (v < fbest) { fbest = v; best = i; }
        }
        double lo = -1.0 + 2.0 * std::max(0, best - 1) / n;
        double hi = -1.0 + 2.0 * std::min(n, best + 1) / n;
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) { hi = x2; x2 = x1; f2 = f1; x1 = hi - inv_phi * (hi - lo); f1 = f(x1); }
            else { lo = x1; x1 = x2; f1 = f2; x2 = lo + inv_phi * (hi - lo); f2 = f(x2); }
        }
        return std::min({fbest, f1, f2});
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : samples_) best = std::min(best, sample_det(s, t));
    return best;
}

double DetEnvelope::first_zero() const { return first_zero_; }

std::vector<double> DetEnvelope::initial_taylor(int order) const {
    // The envelope agrees near 0+ with the sample of largest eigenvalue-square
    // sum; ties are broken toward the lexicographically smallest tail of
    // Taylor coefficients (the lower branch of the min).
    std::vector<std::vector<double>> candidates;
    for (const auto& s : samples_) {
        double sum = 0.0;
        for (double e : s.eigenvalues) sum += e * e;
        if (sum < max_sum_sq_ - 1e-12 * std::max(1.0, max_sum_sq_)) continue;
        std::vector<double> c(static_cast<size_t>(order) + 1, 0.0);
        c[0] = 1.0;
        for (double e : s.eigenvalues)
            for (int i = order; i >= 1; --i) c[static_cast<size_t>(i)] -= e * c[static_cast<size_t>(i) - 1];
        candidates.push_back(std::move(c));
    }
    return *std::min_element(candidates.begin(), candidates.end());
}

double det_envelope(const Link& link, double t) {
    if (!link.spectra) throw std::invalid_argument("det_envelope: spectra-unavailable");
    return DetEnvelope(*link.spectra)(t);
}

} // namespace conecert
