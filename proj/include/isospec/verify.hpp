/**
 * @file verify.hpp
 * @brief Finite-difference oracles and the pair verifier.
 *
 * Every check produces a CheckEntry; nothing here throws on a failed check.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isospec/orbit.hpp"

namespace isospec {

/// t-valued one-form on the sphere (real forms use z1 only).
struct OneFormField {
    std::function<TorusVector(const SpherePoint&, const TangentVector&)> evaluator;
    /// When set, integration surfaces are retracted onto
    /// P^-1(O_{a,b}) = S(c) x S^1(a) x S^1(b) instead of the unit sphere.
    std::optional<OrbitStratum> domain_restriction;
};

/// Circulation of the form around s([0,h]^2), s(t) = retract(x + t1 X1 + t2 X2),
/// divided by h^2. First order in h.
/// Throws Error{StepTooLarge | DomainError}.
TorusVector fd_exterior_derivative(const OneFormField& form, const SpherePoint& x, const TangentVector& X1,
                                   const TangentVector& X2, double h);
/// Romberg table on D(h), D(h/2), ...: one stage is 2 D(h/2) - D(h), O(h^2);
/// two stages also cancel the h^2 term.
TorusVector fd_exterior_derivative_richardson(const OneFormField& form, const SpherePoint& x,
                                              const TangentVector& X1, const TangentVector& X2, double h,
                                              int stages = 2);

/// Fundamental vector of Z_k by a Richardson-extrapolated central difference
/// of the torus action.
TangentVector fd_fundamental_vector(const SpherePoint& x, int k, double eps = 1e-3);
/// Orbit Gram from finite-difference fundamental vectors, projected
/// Round-orthogonally to the circle fibre.
Eigen::Matrix2d fd_orbit_gram(const SpaceParams& params, const SpherePoint& x, double eps = 1e-3);
/// Gram of the fundamental vectors after projecting them orthogonally to the
/// circle fibre with respect to the metric itself.
Eigen::Matrix2d quotient_orbit_gram(const SpaceParams& params, const MetricSpec& metric, const SpherePoint& x);

struct Tolerances {
    double isospectral = 1e-9;
    double admissibility = 1e-11;
    double volume = 1e-9;
    double intertwining = 1e-8;
    double vertical_metric = 1e-10;
    double closed_form = 1e-5;
    double component_equality = 1e-6;
};

struct VerifyConfig {
    std::uint64_t seed = 0;
    int samples = 200;
    int mu_range = 3;
    Tolerances tol;
    /// |v1| = |v2| = a for the differential closed forms
    double stratum_a = 0.4;
    double fd_step = 1e-3;
    double spectrum_cutoff = 50.0;
};

struct CheckEntry {
    std::string name;
    std::string anchor;
    long sample_count = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;

    /// passed = residual <= tolerance (NaN fails).
    static CheckEntry make(std::string name, std::string anchor, long samples, double residual, double tolerance,
                           std::string detail = {});
};

struct VerificationReport {
    std::vector<CheckEntry> checks;
    nlohmann::json metadata = nlohmann::json::object();

    bool all_passed() const;
    const CheckEntry* find(const std::string& name) const;
};

/// T2-horizontality, T2-invariance, S1-horizontality and S1-invariance of
/// kappa at random regular points, named admissibility.<label>.*.
std::vector<CheckEntry> check_admissibility(const JMap& j, const SpaceParams& params, int samples, std::uint64_t seed,
                                            double tol, const std::string& label = "first");

/// |det h_kappa / det h0 - 1| on random orthonormal frames.
CheckEntry check_volume_ratio(const JMap& j, const SpaceParams& params, int samples, std::uint64_t seed, double tol,
                              const std::string& label = "first");

/// dkappa on P^-1(O_{a,a}) against
/// 2(1-2a^2) <j_k U1h, U2h> - 2 <j_k u, iu><iU1, U2>.
CheckEntry check_dkappa_closed_form(const JMap& j, const SpaceParams& params, const OrbitStratum& stratum,
                                    int samples, std::uint64_t seed, double h = 1e-3, double tol = 1e-5);

/// domega0 on P^-1(O_{a,a}) against -2q/(p(1-2a^2)) <iU1, U2>: closed form,
/// equality of the two components, and nonvanishing.
std::vector<CheckEntry> check_curvature_closed_form(const SpaceParams& params, const OrbitStratum& stratum,
                                                    int samples, std::uint64_t seed, double h = 1e-3,
                                                    double tol = 1e-5, double component_tol = 1e-6);

/// Z with coordinates (mu(Z1), mu(Z2)) for mu = k1 l1 + k2 l2 in L*.
TorusVector mu_direction(const SpaceParams& params, std::array<int, 2> k);

/// (mu o kappa)(x, X) against (mu o kappa')((A_Z u, v), (A_Z U, V)).
/// Throws Error{SpectraDiffer} when j, j2 are not isospectral at Z.
CheckEntry check_intertwining(const JMap& j, const JMap& j2, const SpaceParams& params, std::array<int, 2> mu,
                              int samples, std::uint64_t seed, double tol);

/// Runs every check on the pair and records genericity and the
/// non-equivalence certificate under metadata["informational"].
VerificationReport verify_pair(const JMap& j, const JMap& j2, const SpaceParams& params, const VerifyConfig& config);

}  // namespace isospec
