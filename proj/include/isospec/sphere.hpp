/**
 * @file sphere.hpp
 * @brief S^{2n+1} in C^{n+1} = C^{n-1} x C^2, its circle and two-torus
 *        actions, the one-form kappa and the metrics <,>, h0 and h_kappa.
 *
 * Quotient quantities are always computed upstairs on horizontal lifts; no
 * orbifold charts are modelled.
 */
#pragma once

#include <random>
#include <span>
#include <variant>
#include <vector>

#include "isospec/jmap.hpp"

namespace isospec {

/// (n, p, q): n >= 4, p, q >= 1 coprime. The S^1 weight of u is p, of v is q.
struct SpaceParams {
    int n = 4;
    int p = 1;
    int q = 1;

    /// Throws Error{InvalidParams}.
    static SpaceParams make(int n, int p, int q);
    int m() const noexcept { return n - 1; }
};

/// Point (u, v) in C^{n-1} x C^2 with |u|^2 + |v|^2 = 1.
struct SpherePoint {
    ComplexVector u;
    ComplexVector v;

    /// Validates the unit-norm invariant within tol. Throws Error{NotOnSphere}.
    static SpherePoint make(ComplexVector u, ComplexVector v, double tol = 1e-12);
    /// Rescales (u, v) to unit norm.
    static SpherePoint normalized(ComplexVector u, ComplexVector v);

    double u_norm2() const { return u.squaredNorm(); }
    /// u != 0, v1 != 0, v2 != 0 with margin eps.
    bool is_regular(double eps = 1e-10) const;
};

/// Tangent vector (U, V) at base; tangency means re<(U,V),(u,v)> = 0.
struct TangentVector {
    SpherePoint base;
    ComplexVector U;
    ComplexVector V;

    /// Validates tangency within tol. Throws Error{NotTangent | DimensionMismatch}.
    static TangentVector make(const SpherePoint& base, ComplexVector U, ComplexVector V, double tol = 1e-12);
    /// Removes the radial component.
    static TangentVector projected(const SpherePoint& base, ComplexVector U, ComplexVector V);
    static TangentVector zero(const SpherePoint& base);

    TangentVector operator+(const TangentVector& o) const;
    TangentVector operator-(const TangentVector& o) const;
    TangentVector operator*(double s) const;
};

/// re(sum a_i conj(b_i)).
double real_inner(const ComplexVector& a, const ComplexVector& b);
/// Round inner product of two tangent vectors (base points not checked).
double round_inner(const TangentVector& x, const TangentVector& y);

struct RoundMetric {};
struct H0Metric {};
struct HKappaMetric {
    JMap j;
};
using MetricSpec = std::variant<RoundMetric, H0Metric, HKappaMetric>;

enum class ActionGroup { S1, T2 };

/// (sigma^p u, sigma^q v). Throws Error{NotUnitScalar}.
SpherePoint s1_act(const SpaceParams& params, Complex sigma, const SpherePoint& x);
/// Differential of the circle action on a tangent vector.
TangentVector s1_push(const SpaceParams& params, Complex sigma, const TangentVector& x);

/// (u, sigma1 v1, sigma2 v2). Throws Error{NotUnitScalar}.
SpherePoint t2_act(Complex sigma1, Complex sigma2, const SpherePoint& x);
TangentVector t2_push(Complex sigma1, Complex sigma2, const TangentVector& x);

/// (0, i z1 v1, i z2 v2).
TangentVector fundamental_vector(TorusVector z, const SpherePoint& x);
/// (i p u, i q v).
TangentVector s1_vertical(const SpaceParams& params, const SpherePoint& x);

/// kappa^k = |u|^2 <j_k u, U> - <U, iu><j_k u, iu>.
/// Throws Error{DimensionMismatch} when j.m() != dim u.
TorusVector kappa_eval(const JMap& j, const SpherePoint& x, const TangentVector& X);

/// Round, h0 or h_kappa. Throws Error{BasePointMismatch}.
double metric_eval(const SpaceParams& params, const MetricSpec& spec, const TangentVector& X,
                   const TangentVector& Y);

/// det Gram_{h_kappa}(frame) / det Gram_{h0}(frame).
/// Throws Error{DegenerateFrame} when the Round Gram determinant is below 1e-8.
double volume_density_ratio(const SpaceParams& params, const JMap& j, const SpherePoint& x,
                            std::span<const TangentVector> frame);

/// Round-orthogonal projection away from the vertical space of the group.
TangentVector horizontal_project(const SpaceParams& params, ActionGroup group, const TangentVector& X);

/// Gram matrix of vectors under a metric.
RealMatrix gram_matrix(const SpaceParams& params, const MetricSpec& spec, std::span<const TangentVector> vectors);

SpherePoint random_sphere_point(const SpaceParams& params, std::mt19937_64& rng);
/// Rejects points with |u|, |v1| or |v2| below 1e-6.
SpherePoint random_regular_point(const SpaceParams& params, std::mt19937_64& rng);
TangentVector random_tangent(const SpherePoint& x, std::mt19937_64& rng);
Complex random_unit_scalar(std::mt19937_64& rng);

}  // namespace isospec
