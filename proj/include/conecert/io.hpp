#pragma once

#include <string>
#include <vector>

#include "conecert/certify.hpp"

namespace conecert {

inline constexpr const char* kLinkSchema = "link/v1";
inline constexpr const char* kCertificateSchema = "certificate/v1";
inline constexpr const char* kReportSchema = "report/v1";
inline constexpr const char* kToolVersion = "conecert 1.0.0";

std::string link_to_json(const Link& link);
Link link_from_json(const std::string& text);
Link link_from_file(const std::string& path);

std::string certificate_to_json(const Certificate& cert);
std::string search_report_to_json(const SearchReport& report);
std::string sweep_to_json(const std::vector<Certificate>& certs, int min_dim, int max_dim,
                          int samples, std::uint64_t seed);
std::string theorem_report_to_json(const TheoremReport& report);

std::string outcome_name(Outcome o);
std::string bound_name(BoundKind k);

/// CSV with header m,alpha,bound,theta_deg,tan_theta,outcome; NotFound rows
/// leave the angle columns empty and carry the structured reason.
std::string emit_vanishing_table(const std::vector<int>& ms, const std::vector<double>& alphas,
                                 BoundKind kind, const SolverOptions& opts = {});

/// Two-column CSV (theta,w) of the solver trajectory.
std::string emit_trace(int m, double alpha, BoundKind kind, const SolverOptions& opts = {});

} // namespace conecert
