#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conecert/rational.hpp"

namespace conecert {

/// Shape-operator spectrum for one unit normal: the eigenvalues of A_v at the
/// point attaining the supremum. Minimality makes every sample trace-free.
struct NormalSample {
    std::vector<double> eigenvalues;
};

/// Sampled shape-operator spectra over the unit normal bundle.
///
/// `complete` means the samples exhaust the normal bundle up to symmetry, so
/// envelope minima computed from them are true infima. For products of
/// totally geodesic factors the normal space is the eta-circle alone and the
/// two endpoint samples (a0 = +-1) capture the envelope exactly; `eta` keeps
/// the block data for the closed-form evaluator.
struct SpectrumFamily {
    std::vector<NormalSample> samples;
    bool complete = false;

    struct EtaBlocks {
        int k1 = 0, k2 = 0;
        double lambda1 = 0.0, lambda2 = 0.0;
    };
    std::optional<EtaBlocks> eta;
};

enum class SlopeLetter { a, b, c };
enum class SlopeRoman { I, II, Both };

/// Slope taxonomy: s(L) = alpha^2 / k, letter (a)/(b)/(c) for < 1 / = 1 / > 1,
/// roman class (I) = (a) u (b), (II) = (b) u (c).
struct SlopeClass {
    double slope = 0.0;
    SlopeLetter letter = SlopeLetter::a;
    SlopeRoman roman = SlopeRoman::I;
};

/// A closed minimal submanifold of a sphere, entered as certification data.
struct Link {
    std::string name;
    int k = 0;                   // dimension; cone dimension is k+1
    double alpha_sq = 0.0;       // sup over unit normals of |h^v|_F^2
    double normal_radius = 0.0;  // R in (0, pi], radians
    std::optional<SpectrumFamily> spectra;
    std::string provenance;      // "catalog:...", "user", "product(...)"

    // exact slope for catalog entries and their products; absent for loaded
    // user links, where classification falls back to the floating tolerance
    std::optional<Rational> slope_exact;

    double slope() const { return alpha_sq / static_cast<double>(k); }
};

enum class FocalSide { Minus, Plus };

Link make_sphere(int d);
Link make_isoparametric_hypersurface(int g, int m1, int m2);
Link make_focal(int g, int m1, int m2, FocalSide side);

SlopeClass classify(const Link& link, double rel_tol = 1e-12);

/// All catalog entries (spheres, minimal isoparametric hypersurfaces, focal
/// submanifolds) with k <= max_dim, in a fixed deterministic order.
std::vector<Link> catalog_enumerate(int max_dim);

/// Checks the Link invariants; throws std::invalid_argument naming the
/// offending field.
void validate(const Link& link);

} // namespace conecert
