#pragma once

#include <array>
#include <vector>

#include "muskin/geometry.hpp"
#include "muskin/modal.hpp"

namespace muskin {

/// H+_j restricted to Omega_+, stored as an exterior-only modal solution.
struct ExpansionTerm {
    int order = 0;
    ModalSolution solution;     ///< coeff[0] (interior) is unused and zero
    cplx sigma_trace{0.0};      ///< prescribed tangential trace coordinate on Sigma
    cplx gamma_trace{0.0};      ///< prescribed tangential trace coordinate on Gamma
};

/// (p0 + p1 Y + p2 Y^2) exp(-lambda Y).
struct ExpPoly {
    std::array<cplx, 3> c{};
    [[nodiscard]] cplx eval(cplx lambda, double Y) const;
    /// d/dY as another ExpPoly.
    [[nodiscard]] ExpPoly derivative(cplx lambda) const;
};

/// Boundary-layer profile V_j: tangential covariant components and normal component.
struct Profile {
    int order = 0;
    ExpPoly t1, t2;  ///< tangential, frame of TangentialModal
    ExpPoly v;       ///< normal component H . n
};

struct ProfileData {
    TangentialModal j0, j1;
    cplx lambda;
    CurvatureData curvature;
    cplx div_j0{0.0};
};

struct ProfileSample {
    TangentialModal tangential;
    cplx normal;
};

/// Modal tangential trace coordinate of a field with the drive's polarisation.
cplx trace_coordinate(const Geometry& g, const Drive& drive, const ModalVector& H);

ExpansionTerm solve_term(int j, const Geometry& g, const MediaParams& media, const Drive& drive,
                         const std::vector<ExpansionTerm>& prior);

/// j_k = lambda^{-1} (alpha_-/alpha_+) (curl H+_k x n) at Sigma.
TangentialModal trace_jk(const ExpansionTerm& term, const DerivedParams& d);

ProfileData make_profile_data(const Geometry& g, const DerivedParams& d, const Drive& drive,
                              const std::vector<ExpansionTerm>& terms);

/// Closed-form profiles V_0, V_1, V_2.
std::array<Profile, 3> build_profiles(const Geometry& g, const ProfileData& pd, int mode);

ProfileSample profile_eval(const Profile& p, cplx lambda, double Y3);

struct RecurrenceResiduals {
    double tangential[3] = {0, 0, 0};  ///< (i) for n = 0, 1, 2
    double trace[3] = {0, 0, 0};       ///< (ii)
    double normal[3] = {0, 0, 0};      ///< (iii)
    double extra = 0.0;                ///< v_2(0) vs H+_0 . n
    [[nodiscard]] double max() const;
};

RecurrenceResiduals profile_recurrence_residual(const std::array<Profile, 3>& profiles, const Geometry& g,
                                                const DerivedParams& d, const Drive& drive,
                                                const std::vector<ExpansionTerm>& terms, int n_tangential = 32,
                                                int n_depth = 64);

/// Full expansion hierarchy for one drive.
struct Expansion {
    Geometry geometry;
    MediaParams media;
    DerivedParams derived;
    Drive drive;
    std::vector<ExpansionTerm> terms;  ///< H+_0, H+_1, H+_2
    ProfileData data;
    std::array<Profile, 3> profiles;
};

Expansion build_expansion(const Geometry& g, const MediaParams& media, const Drive& drive);

/// Largest relative deviation of the tangential part of V_2 from -j_1 exp(-lambda Y) on a
/// depth grid. On the sphere C - H vanishes, so this should be at rounding level.
/// Throws DomainError for the cylinder, where the curvature correction is present.
double umbilic_profile_deviation(const Expansion& e, int n_depth = 64);

/// Truncated composite approximation of order m at small parameter eps.
class CompositeApprox {
public:
    CompositeApprox(const Expansion& e, int m, double eps, const Cutoff& cutoff);

    [[nodiscard]] ModalFields fields(double r, Region region) const;
    [[nodiscard]] FieldSample eval_point(const Point3& x) const;
    [[nodiscard]] int order() const { return m_; }
    [[nodiscard]] double eps() const { return eps_; }
    [[nodiscard]] const Cutoff& cutoff() const { return cutoff_; }

private:
    const Expansion* e_;
    int m_;
    double eps_;
    Cutoff cutoff_;
};

}  // namespace muskin
