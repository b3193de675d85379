#pragma once

#include <vector>

#include "muskin/analysis.hpp"

namespace muskin {

/// Whole-domain norms of one exact solution.
struct StabilityRow {
    double mu_r = 0.0;
    double norm_H = 0.0;
    double norm_E = 0.0;
    double sqrt_mur_normHminus = 0.0;
    double norm_j = 0.0;
    double norm_curlH = 0.0;
    double quotient = 0.0;  ///< (norm_H + norm_E + sqrt_mur_normHminus) / norm_j
    double refinement_change = 0.0;
};

StabilityRow stability_row(const ModalSolution& s, const NormOptions& opt = {});

struct StabilityReport {
    std::vector<StabilityRow> rows;
    double quotient_variation = 0.0;  ///< max/min of the quotient
    bool interior_nonincreasing = false;
    bool verdict = false;
};

StabilityReport stability_sweep(const Geometry& g, const MediaParams& media, const Drive& drive,
                                const std::vector<double>& mu_r, const NormOptions& opt = {}, int threads = 1);

/// Pointwise relative residual of div(mu H) by sixth-order central differences.
double div_mu_h_residual(const ModalSolution& s, const std::vector<Point3>& points);

struct ConstantsRow {
    double mu_r = 0.0;
    double norm_curlH = 0.0;
    double norm_j = 0.0;
    double curl_bound = 0.0;  ///< C1 ||j||
    double div_residual = 0.0;
    bool pass = false;
};

struct ConstantsReport {
    StabilityConstants constants;
    std::vector<ConstantsRow> rows;
    bool verdict = false;
};

ConstantsReport constants_check(const Geometry& g, const MediaParams& media, const Drive& drive,
                                const std::vector<double>& mu_r, const NormOptions& opt = {});

/// Default sample points for the divergence check: both regions, away from Sigma and the shell edges.
std::vector<Point3> div_sample_points(const Geometry& g, const Drive& drive);

}  // namespace muskin
