/**
 * @file orbit.hpp
 * @brief Torus orbits in O(p,q): Gram matrices, areas, angles, the weight
 *        lattice L and its dual, flat-torus spectra and the connection form.
 */
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "isospec/sphere.hpp"

namespace isospec {

/// 2x2 Gram matrix of the quotient fundamental fields Z1^, Z2^.
struct OrbitGram {
    Eigen::Matrix2d G = Eigen::Matrix2d::Identity();
};

/// Stratum O_{a,b}: |v1| = a, |v2| = b, |u| = c = sqrt(1 - a^2 - b^2).
struct OrbitStratum {
    double a = 0.5;
    double b = 0.5;
    double c = 0.7071067811865476;

    /// Throws Error{DomainError} unless 0 < a, 0 < b, a^2 + b^2 < 1.
    static OrbitStratum make(double a, double b);
    /// The point (c, 0, .., 0; a, b).
    SpherePoint representative(const SpaceParams& params) const;
};

/// Exact rational with positive denominator, always in lowest terms.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t num, std::int64_t den = 1);
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    bool operator==(const Rational& o) const = default;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

using RationalPair = std::array<Rational, 2>;

/// Lattice in t spanned by 2*pi*basis_coeff[k]; the dual lattice in t* is
/// spanned by dual_coeff[k] / (2*pi). Coordinates are against Z1, Z2.
struct WeightLattice {
    int p = 1;
    std::array<RationalPair, 2> basis_coeff{};
    std::array<RationalPair, 2> dual_coeff{};

    /// Dual basis is computed by exact inversion. Throws Error{DomainError}
    /// on a degenerate basis.
    static WeightLattice from_basis(const std::array<RationalPair, 2>& coeff);

    /// Columns are the basis vectors.
    Eigen::Matrix2d basis() const;
    /// Columns are the dual covectors.
    Eigen::Matrix2d dual_basis() const;
    /// pairing[i][k] = dual_i(basis_k), exact.
    std::array<RationalPair, 2> pairing() const;
    /// |det basis|.
    double covolume() const;
};

/// L = span_Z{2 pi Z1, (2 pi / p)(Z1 + Z2)} with its dual.
WeightLattice dual_lattice(const SpaceParams& params);
/// 2 pi Z^2.
WeightLattice square_lattice();

/// G_jk = delta_jk |v_j|^2 - q^2 |v_j|^2 |v_k|^2 / (p^2 |u|^2 + q^2 |v|^2).
/// Throws Error{SingularPoint} when |u|, |v1| or |v2| is below 1e-10.
OrbitGram orbit_gram(const SpaceParams& params, const SpherePoint& x);

/// Pull-back of the quotient metric to T at (sigma1, sigma2):
/// sum A_j B_j |v_j|^2 - q^2 (sum A_j |v_j|^2)(sum B_j |v_j|^2) / D.
/// Throws Error{SingularPoint | NotUnitScalar}.
double general_orbit_product(const SpaceParams& params, const SpherePoint& x, std::array<double, 2> A,
                             std::array<double, 2> B, std::array<Complex, 2> sigma = {Complex{1.0}, Complex{1.0}});

/// (4 pi^2 / p) sqrt(det G). Throws Error{SingularPoint}.
double orbit_area(const SpaceParams& params, const SpherePoint& x);
/// Area from (a, b, c) via a^2 b^2 (1 - q^2(1-c^2)/(p^2 c^2 + q^2 (1-c^2))).
double orbit_area(const SpaceParams& params, const OrbitStratum& stratum);

/// arccos(-q^2 a^2 / (p^2 (1 - 2a^2) + q^2 a^2)) on O_{a,a}.
/// Throws Error{DomainError} unless 0 < a < 1/sqrt2.
double orbit_angle(const SpaceParams& params, double a);
/// arccos(G12 / sqrt(G11 G22)).
double gram_angle(const OrbitGram& gram);

/// Eigenvalues 4 pi^2 |l|^2_{G^-1} <= cutoff for l in the dual lattice,
/// ascending with multiplicity. Throws Error{NotPositiveDefinite | DomainError}.
std::vector<double> flat_torus_spectrum(const OrbitGram& gram, const WeightLattice& lattice, double cutoff);

/// omega0^j(X) = -(q/p) <U, iu>/|u|^2 + <V_j, i v_j>/|v_j|^2.
/// Throws Error{SingularPoint}.
TorusVector connection_form_eval(const SpaceParams& params, const SpherePoint& x, const TangentVector& X);

}  // namespace isospec
