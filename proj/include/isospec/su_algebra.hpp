/**
 * @file su_algebra.hpp
 * @brief Dense complex linear algebra on su(m): validation, a fixed real
 *        basis, commutants, Hermitian spectra and re-unitarization.
 *
 * Hermitian eigendecomposition and SVD are delegated to Eigen
 * (SelfAdjointEigenSolver / JacobiSVD). Both are backward stable, so for the
 * matrix sizes used here (m <= 16) eigenvalues carry absolute errors of a
 * few ulp times the spectral norm.
 */
#pragma once

#include <complex>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace isospec {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultValidationTol = 1e-12;
inline constexpr double kDefaultRankTol = 1e-8;

/// Traceless skew-Hermitian matrix. Always stored in exact structural form:
/// the constructor paths symmetrize and traceless-project their input.
class SuElement {
public:
    /// Zero element of su(m).
    static SuElement zero(int m);

    /// Projects an arbitrary square matrix onto su(m) without validation:
    /// X <- (X - X^H)/2, then X <- X - (tr X / m) I, and finally the last
    /// diagonal entry is pinned to minus the sum of the others so the
    /// projection is a bitwise fixed point on its own output.
    static SuElement project(const ComplexMatrix& x);

    const ComplexMatrix& matrix() const noexcept { return x_; }
    int dim() const noexcept { return static_cast<int>(x_.rows()); }

    SuElement operator+(const SuElement& other) const;
    SuElement operator-(const SuElement& other) const;
    SuElement operator*(double s) const;

private:
    explicit SuElement(ComplexMatrix x) : x_(std::move(x)) {}
    ComplexMatrix x_;
};

/// Returns X as an SuElement iff ||X + X^H||_max <= tol and |tr X| <= tol.
/// Throws Error{NotSkewHermitian | NotTraceless | DimensionMismatch}.
SuElement validate_su(const ComplexMatrix& x, double tol = kDefaultValidationTol);

/// Orthonormal real basis of su(m) under <X,Y> = re tr(X^H Y), in the order
///   1. (E_ab - E_ba)/sqrt2           for a < b, row-major over (a,b)
///   2. i(E_ab + E_ba)/sqrt2          for a < b, row-major over (a,b)
///   3. i diag(1,..,1,-k,0,..)/sqrt(k(k+1)), k = 1..m-1
/// The list has m^2 - 1 elements.
std::vector<ComplexMatrix> su_basis(int m);

/// Coordinates of X in su_basis(m).
RealVector su_coordinates(const SuElement& x);
SuElement su_from_coordinates(int m, const RealVector& coords);

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

/// dim_R of { X in su(m) : [X, G] = 0 for every generator G }.
/// Rank of the stacked real system is decided against
/// rank_tol * (largest singular value).
int commutant_dimension(std::span<const SuElement> generators,
                        double rank_tol = kDefaultRankTol);

/// Polar factor of A with one column rephased so that det = 1.
/// Throws Error{SingularInput}.
ComplexMatrix nearest_special_unitary(const ComplexMatrix& a);

struct HermitianSpectrum {
    RealVector values;      ///< ascending
    ComplexMatrix vectors;  ///< columns are orthonormal eigenvectors
};

/// Spectrum of the Hermitian matrix -iX.
HermitianSpectrum hermitian_spectrum(const SuElement& x);
RealVector sorted_eigenvalues(const SuElement& x);

double max_abs(const ComplexMatrix& x);

/// Standard complex Gaussian entries, then projected into su(m).
SuElement random_su(int m, std::mt19937_64& rng);
/// Haar-distributed element of SU(m).
ComplexMatrix random_special_unitary(int m, std::mt19937_64& rng);

}  // namespace isospec
