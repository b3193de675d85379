#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "muskin/asymptotics.hpp"
#include "muskin/scalar_tp.hpp"

namespace muskin {

enum class NormKind { L2, CurlSeminorm };

/// Modal H and curl H of some field at radius r on the given side of Sigma.
using RadialField = std::function<ModalFields(double r, Region side)>;

struct NormOptions {
    int radial_order = 64;     ///< Gauss-Legendre nodes per panel
    int angular_nodes = 0;     ///< 0 = automatic (>= 8x the active mode index, at least 16)
    double layer_scale = 0.0;  ///< boundary-layer length eps/Re(lambda); 0 disables graded panels
    bool check_refinement = true;
    double refine_tol = 1e-6;
};

struct RegionNorms {
    double l2 = 0.0;
    double curl = 0.0;
    double refinement_change = 0.0;  ///< relative change when both quadrature orders double
};

/// L2 norms of H and curl H over Omega_- or Omega_+ (per unit length on the cylinder).
/// Radial panels break at Sigma and at the cutoff knots; angular integration is a
/// trapezoid in azimuth (plus Gauss-Legendre in cos(theta) on the sphere).
RegionNorms region_norms(const Geometry& g, const Drive& drive, const RadialField& f, Region region,
                         const NormOptions& opt = {}, const Cutoff* knots = nullptr);

double region_norm(const Geometry& g, const Drive& drive, const RadialField& f, Region region, NormKind kind,
                   const NormOptions& opt = {}, const Cutoff* knots = nullptr);

/// (sum (1 + w)^s |c|^2)^{1/2} times sqrt(2 pi r_sigma) (cylinder) or r_sigma (sphere), w = m^2 or n(n+1).
double surface_norm(const Geometry& g, const std::vector<SurfaceMode>& field, double s);

struct RemainderRecord {
    int m = 0;
    double eps = 0.0;
    double rplus_l2 = 0.0, curl_rplus_l2 = 0.0, rminus_l2 = 0.0, curl_rminus_l2 = 0.0;
    double combined = 0.0;
    double refinement_change = 0.0;
    /// ||R+|| + ||curl R+|| + eps^{-1/2} ||R-|| + eps^{1/2} ||curl R-||.
    [[nodiscard]] double combined_from_parts() const;
};

RemainderRecord remainder(const ModalSolution& exact, const CompositeApprox& approx, const NormOptions& opt = {});
/// Same, for any approximant given as a radial field (order m, small parameter eps).
RemainderRecord remainder(const ModalSolution& exact, const RadialField& approx, int m, double eps,
                          const Cutoff* knots, const NormOptions& opt = {});

struct RateFit {
    double slope = 0.0, intercept = 0.0, max_residual = 0.0;
    double slope_stderr = 0.0;
    double ci_low = 0.0, ci_high = 0.0;  ///< 95% Student-t interval for the slope
};

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& values);

struct OrderResult {
    int m = 0;
    std::vector<RemainderRecord> records;
    RateFit fit;
    double expected_slope = 0.0;
    bool pass = false;
};

struct ConvergenceReport {
    Geometry geometry;
    MediaParams media;
    Drive drive;
    Cutoff cutoff;
    double slope_tolerance = 0.3;
    std::vector<OrderResult> orders;
    [[nodiscard]] bool pass() const;
};

struct RatesRequest {
    Geometry geometry;
    MediaParams media;  ///< mu_r is overwritten per sweep point
    Drive drive;
    std::vector<double> eps;  ///< sweep values (fit uses the finest four)
    std::vector<int> orders{0, 1, 2};
    Cutoff cutoff;  ///< d1 = 0 means the default cutoff
    double slope_tolerance = 0.3;
    NormOptions norms;
    int threads = 1;
};

ConvergenceReport run_rates(const RatesRequest& req);

nlohmann::json to_json(const ConvergenceReport& r);
ConvergenceReport report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Geometry& g);
nlohmann::json to_json(const MediaParams& p);
nlohmann::json to_json(const Drive& d);
Geometry geometry_from_json(const nlohmann::json& j);
MediaParams media_from_json(const nlohmann::json& j);
Drive drive_from_json(const nlohmann::json& j);

}  // namespace muskin
