#include "conecert/links.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

namespace conecert {

namespace {

constexpr double kPi = std::numbers::pi;

bool admissible_multiplicities(int g, int m1, int m2) {
    if (m1 < 1 || m2 < 1) return false;
    switch (g) {
        case 1:
        case 2:
        case 4: return true; // g=4 pairs accepted without re-validating the classification
        case 3: return m1 == m2 && (m1 == 1 || m1 == 2 || m1 == 4 || m1 == 8);
        case 6: return m1 == m2 && (m1 == 1 || m1 == 2);
        default: return false;
    }
}

SpectrumFamily zero_spectrum(int k) {
    SpectrumFamily family;
    family.samples.push_back(NormalSample{std::vector<double>(static_cast<size_t>(k), 0.0)});
    family.complete = true;
    return family;
}

// Principal curvatures of the minimal leaf: cot(theta_1 + (beta-1) pi/g) with
// multiplicities m_beta, where theta_1 makes the trace vanish. For g=2 and
// g=4 the trace condition collapses to tan^2(c theta_1) = m1/m2; for equal
// multiplicities the curvature angles are symmetric about pi/2.
SpectrumFamily iso_hypersurface_spectrum(int g, int m1, int m2, int k) {
    if (g == 1) return zero_spectrum(k);
    double theta1 = 0.0;
    if (g == 2) {
        theta1 = std::atan(std::sqrt(static_cast<double>(m1) / m2));
    } else if (g == 4) {
        theta1 = 0.5 * std::atan(std::sqrt(static_cast<double>(m1) / m2));
    } else {
        theta1 = kPi / (2.0 * g); // g = 3, 6: equal multiplicities
    }
    NormalSample plus;
    plus.eigenvalues.reserve(static_cast<size_t>(k));
    for (int beta = 0; beta < g; ++beta) {
        const double angle = theta1 + beta * kPi / g;
        const double curv = std::cos(angle) / std::sin(angle);
        const int mult = (beta % 2 == 0) ? m1 : m2;
        for (int i = 0; i < mult; ++i) plus.eigenvalues.push_back(curv);
    }
    NormalSample minus = plus;
    for (double& e : minus.eigenvalues) e = -e;
    SpectrumFamily family;
    family.samples = {plus, minus};
    family.complete = true; // codimension one: +-nu exhausts the normal bundle
    return family;
}

double spectra_max_sum_sq(const SpectrumFamily& family) {
    double best = 0.0;
    for (const auto& s : family.samples) {
        double sum = 0.0;
        for (double e : s.eigenvalues) sum += e * e;
        best = std::max(best, sum);
    }
    return best;
}

} // namespace

Link make_sphere(int d) {
    if (d < 1) throw std::invalid_argument("make_sphere: invalid dimension d = " + std::to_string(d));
    Link link;
    link.name = "S^" + std::to_string(d);
    link.k = d;
    link.alpha_sq = 0.0;
    link.normal_radius = kPi;
    link.spectra = zero_spectrum(d);
    link.provenance = "catalog:sphere:" + std::to_string(d);
    link.slope_exact = Rational::of(0, 1);
    return link;
}

Link make_isoparametric_hypersurface(int g, int m1, int m2) {
    if (g != 1 && g != 2 && g != 3 && g != 4 && g != 6)
        throw std::invalid_argument("make_isoparametric_hypersurface: invalid catalog entry, g = " +
                                    std::to_string(g));
    if (!admissible_multiplicities(g, m1, m2))
        throw std::invalid_argument(
            "make_isoparametric_hypersurface: invalid catalog entry, inadmissible multiplicities");

    int k = 0;
    double cos_r = 0.0;
    switch (g) {
        case 1: k = m1; cos_r = -1.0; break;
        case 2: k = m1 + m2; cos_r = 1.0 - 2.0 * std::min(m1, m2) / static_cast<double>(m1 + m2); break;
        case 3: k = 3 * m1; cos_r = 0.5; break;
        case 4:
            k = 2 * (m1 + m2);
            cos_r = std::sqrt(1.0 - std::min(m1, m2) / static_cast<double>(m1 + m2));
            break;
        case 6: k = 6 * m1; cos_r = std::numbers::sqrt3 / 2.0; break;
    }

    Link link;
    link.name = "M(g=" + std::to_string(g) + ";" + std::to_string(m1) + "," + std::to_string(m2) + ")";
    link.k = k;
    link.alpha_sq = static_cast<double>(g - 1) * k;
    link.normal_radius = std::acos(std::clamp(cos_r, -1.0, 1.0));
    link.spectra = iso_hypersurface_spectrum(g, m1, m2, k);
    link.provenance = "catalog:iso:g" + std::to_string(g) + ":m=" + std::to_string(m1) + "," +
                      std::to_string(m2) + ":S^" + std::to_string(k + 1);
    link.slope_exact = Rational::of(g - 1, 1);
    return link;
}

Link make_focal(int g, int m1, int m2, FocalSide side) {
    if (g == 1) throw std::invalid_argument("make_focal: degenerate focal set (k = 0 for g = 1)");
    if (g != 2 && g != 3 && g != 4 && g != 6)
        throw std::invalid_argument("make_focal: invalid catalog entry, g = " + std::to_string(g));
    if (!admissible_multiplicities(g, m1, m2))
        throw std::invalid_argument("make_focal: invalid catalog entry, inadmissible multiplicities");

    int k = 0;
    double alpha_sq = 0.0;
    Rational slope = Rational::of(0, 1);
    switch (g) {
        case 2:
            k = (side == FocalSide::Minus) ? m1 : m2;
            alpha_sq = 0.0;
            break;
        case 3:
            k = 2 * m1;
            alpha_sq = k / 3.0;
            slope = Rational::of(1, 3);
            break;
        case 4:
            k = (side == FocalSide::Minus) ? 2 * m1 + m2 : m1 + 2 * m2;
            alpha_sq = (side == FocalSide::Minus) ? 2.0 * m1 : 2.0 * m2;
            slope = Rational::of((side == FocalSide::Minus) ? 2 * m1 : 2 * m2, k);
            break;
        case 6:
            k = 5 * m1;
            alpha_sq = 4.0 * k / 3.0;
            slope = Rational::of(4, 3);
            break;
    }

    const char side_char = (side == FocalSide::Minus) ? '-' : '+';
    Link link;
    link.name = std::string("M") + side_char + "(g=" + std::to_string(g) + ";" + std::to_string(m1) +
                "," + std::to_string(m2) + ")";
    link.k = k;
    link.alpha_sq = alpha_sq;
    link.normal_radius = 2.0 * kPi / g;
    if (alpha_sq == 0.0) link.spectra = zero_spectrum(k); // g=2 focal sets are great subspheres
    link.provenance = "catalog:focal:g" + std::to_string(g) + ":m=" + std::to_string(m1) + "," +
                      std::to_string(m2) + ":" + side_char;
    link.slope_exact = slope;
    return link;
}

SlopeClass classify(const Link& link, double rel_tol) {
    SlopeClass cls;
    cls.slope = link.slope();
    if (link.slope_exact) {
        const Rational one = Rational::of(1, 1);
        if (*link.slope_exact == one) cls.letter = SlopeLetter::b;
        else cls.letter = (*link.slope_exact < one) ? SlopeLetter::a : SlopeLetter::c;
    } else {
        const double tol = rel_tol * std::max(1.0, std::abs(cls.slope));
        if (std::abs(cls.slope - 1.0) <= tol) cls.letter = SlopeLetter::b;
        else cls.letter = (cls.slope < 1.0) ? SlopeLetter::a : SlopeLetter::c;
    }
    switch (cls.letter) {
        case SlopeLetter::a: cls.roman = SlopeRoman::I; break;
        case SlopeLetter::b: cls.roman = SlopeRoman::Both; break;
        case SlopeLetter::c: cls.roman = SlopeRoman::II; break;
    }
    return cls;
}

std::vector<Link> catalog_enumerate(int max_dim) {
    std::vector<Link> out;
    if (max_dim < 1) return out;

    for (int d = 1; d <= max_dim; ++d) out.push_back(make_sphere(d));

    // minimal isoparametric hypersurfaces; g=1 duplicates the spheres above
    for (int m1 = 1; 2 * m1 <= max_dim; ++m1)
        for (int m2 = m1; m1 + m2 <= max_dim; ++m2)
            out.push_back(make_isoparametric_hypersurface(2, m1, m2));
    for (int m : {1, 2, 4, 8})
        if (3 * m <= max_dim) out.push_back(make_isoparametric_hypersurface(3, m, m));
    for (int m1 = 1; 4 * m1 <= max_dim; ++m1)
        for (int m2 = m1; 2 * (m1 + m2) <= max_dim; ++m2)
            out.push_back(make_isoparametric_hypersurface(4, m1, m2));
    for (int m : {1, 2})
        if (6 * m <= max_dim) out.push_back(make_isoparametric_hypersurface(6, m, m));

    // focal submanifolds; sides with identical certification data (m1 = m2,
    // or the (m1,m2) <-> (m2,m1) side swap for g=4) appear once
    std::vector<std::tuple<int, int, double>> seen; // (g, k, alpha_sq)
    auto push_focal = [&](int g, int m1, int m2, FocalSide side) {
        Link f = make_focal(g, m1, m2, side);
        if (f.k > max_dim) return;
        const auto sig = std::make_tuple(g, f.k, f.alpha_sq);
        if (std::find(seen.begin(), seen.end(), sig) != seen.end()) return;
        seen.push_back(sig);
        out.push_back(std::move(f));
    };
    for (int m1 = 1; m1 <= max_dim; ++m1)
        for (int m2 = m1; m2 <= max_dim; ++m2)
            for (FocalSide side : {FocalSide::Minus, FocalSide::Plus})
                push_focal(2, m1, m2, side);
    for (int m : {1, 2, 4, 8})
        for (FocalSide side : {FocalSide::Minus, FocalSide::Plus})
            push_focal(3, m, m, side);
    for (int m1 = 1; m1 <= max_dim; ++m1)
        for (int m2 = m1; m2 <= max_dim; ++m2)
            for (FocalSide side : {FocalSide::Minus, FocalSide::Plus})
                push_focal(4, m1, m2, side);
    for (int m : {1, 2})
        for (FocalSide side : {FocalSide::Minus, FocalSide::Plus})
            push_focal(6, m, m, side);
    return out;
}

void validate(const Link& link) {
    if (link.k < 1) throw std::invalid_argument("link field 'k': must be >= 1");
    if (!(link.alpha_sq >= 0.0) || !std::isfinite(link.alpha_sq))
        throw std::invalid_argument("link field 'alpha_sq': must be finite and >= 0");
    if (!(link.normal_radius > 0.0) || link.normal_radius > kPi + 1e-12)
        throw std::invalid_argument("link field 'normal_radius': must lie in (0, pi]");
    if (link.alpha_sq == 0.0 && std::abs(link.normal_radius - kPi) > 1e-12)
        throw std::invalid_argument(
            "link field 'alpha_sq': zero only for totally geodesic links (normal_radius pi)");
    if (link.spectra) {
        const auto& family = *link.spectra;
        if (family.samples.empty())
            throw std::invalid_argument("link field 'spectra': must hold at least one sample");
        for (const auto& s : family.samples) {
            if (s.eigenvalues.size() != static_cast<size_t>(link.k))
                throw std::invalid_argument("link field 'spectra': sample length must equal k");
            double trace = 0.0, scale = 1.0;
            for (double e : s.eigenvalues) { trace += e; scale += std::abs(e); }
            if (std::abs(trace) > 1e-9 * scale)
                throw std::invalid_argument("link field 'spectra': sample is not trace-free");
        }
        const double recomputed = spectra_max_sum_sq(family);
        const double tol = 1e-12 * std::max(1.0, link.alpha_sq);
        if (std::abs(recomputed - link.alpha_sq) > tol)
            throw std::invalid_argument(
                "link field 'alpha_sq': disagrees with the maximum spectral sum of squares");
    }
}

} // namespace conecert
