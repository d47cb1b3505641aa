#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conecert/vanishing.hpp"

namespace conecert {

enum class Strategy { Auto, C, F, Det };
enum class Verdict { AreaMinimizing, Undetermined };

/// Verdict of Lawlor's criterion for one link: area-minimizing iff the
/// vanishing angle exists and theta0 <= R/2.
struct Certificate {
    // link summary
    std::string link_name;
    int k = 0;
    double alpha_sq = 0.0;
    double normal_radius = 0.0;

    BoundKind bound = BoundKind::C;
    Verdict verdict = Verdict::Undetermined;
    std::optional<double> theta0;          // radians
    double half_normal_radius = 0.0;       // R/2
    std::optional<double> margin;          // R/2 - theta0
    std::optional<Outcome> failure;        // reason when undetermined
    bool rigorous = true;                  // false for incomplete det envelopes

    bool minimizing() const { return verdict == Verdict::AreaMinimizing; }
};

Certificate certify(const Link& link, Strategy strategy = Strategy::Auto,
                    const SolverOptions& opts = {});

/// Result of the minimum-copies search for a base multiset.
struct SearchReport {
    std::vector<std::pair<Link, int>> base; // canonical order, (link, min count)
    int n_max = 0;
    int window = 0;
    std::optional<int> n_min;
    int window_verified = 0; // count of n in (n_min, n_min+window] also certified
    std::vector<std::pair<int, Certificate>> attempts;
};

/// Smallest total copy count n <= n_max whose minimal product certifies
/// together with its whole window n..n+window (extra copies go to the
/// smallest base block).
SearchReport min_copies(std::vector<std::pair<Link, int>> base, int n_max, int window = 5,
                        const SolverOptions& opts = {});

/// Smallest k such that theta_c(k+1, sqrt(k * max_slope)) exists and is at
/// most arccos(1 - min_gap/k)/2, with the following 8 values re-checked.
/// Empty when the search cap 4096 is exceeded.
std::optional<int> uniform_dimension_threshold(double max_slope, double min_gap,
                                               const SolverOptions& opts = {});

/// Measured existence threshold: smallest k with theta_c(k+1, sqrt(k*slope))
/// found. (The catalogued sufficient bound is total dimension >= 11; the
/// measured value is reported instead of hard-coding it.)
int smallest_existing_dimension(double slope = 1.0, int k_cap = 64,
                                const SolverOptions& opts = {});

/// Deterministically samples catalog multisets with total k in
/// [min_dim-1, max_dim-1] and certifies each with the c-bound.
std::vector<Certificate> isoparametric_sweep(int min_dim, int max_dim, int samples,
                                             std::uint64_t seed,
                                             const SolverOptions& opts = {});

enum class TheoremId { T2, T3, T4, ManyS };

struct TheoremReport {
    TheoremId theorem = TheoremId::T2;
    std::vector<std::pair<std::string, bool>> checklist;
    bool hypotheses_ok = false;
    std::string failed_hypothesis; // first failing item, empty when ok
    bool conclusion_confirmed = false;
    std::optional<Certificate> product_certificate;
};

/// Re-verifies a configuration theorem's hypotheses numerically, then
/// confirms its conclusion by a direct c-bound solve.
TheoremReport configuration_theorem_check(const std::vector<Link>& links, TheoremId theorem,
                                          const SolverOptions& opts = {});

} // namespace conecert
