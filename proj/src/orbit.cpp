#include "isospec/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "isospec/error.hpp"

namespace isospec {

namespace {

constexpr double kSingularEps = 1e-10;

void require_regular(const SpherePoint& x, const char* what) {
    const double smallest = std::min({x.u.norm(), std::abs(x.v(0)), std::abs(x.v(1))});
    if (smallest < kSingularEps) {
        std::ostringstream os;
        os << what << ": point is not regular (smallest component " << smallest << ")";
        throw Error(ErrorCode::SingularPoint, os.str(), smallest);
    }
}

double rescale_denominator(const SpaceParams& params, const SpherePoint& x) {
    const double p = params.p;
    const double q = params.q;
    return p * p * x.u.squaredNorm() + q * q * x.v.squaredNorm();
}

}  // namespace

OrbitStratum OrbitStratum::make(double a, double b) {
    if (!(a > 0.0 && b > 0.0 && a * a + b * b < 1.0)) {
        std::ostringstream os;
        os << "stratum (a, b) = (" << a << ", " << b << ") needs a, b > 0 and a^2 + b^2 < 1";
        throw Error(ErrorCode::DomainError, os.str());
    }
    return OrbitStratum{a, b, std::sqrt(1.0 - a * a - b * b)};
}

SpherePoint OrbitStratum::representative(const SpaceParams& params) const {
    ComplexVector u = ComplexVector::Zero(params.n - 1);
    u(0) = c;
    ComplexVector v(2);
    v << a, b;
    return SpherePoint{std::move(u), std::move(v)};
}

Rational Rational::make(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error(ErrorCode::DomainError, "rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    return g > 1 ? Rational{num / g, den / g} : Rational{num, den};
}

Rational Rational::operator+(const Rational& o) const { return make(num * o.den + o.num * den, den * o.den); }
Rational Rational::operator-(const Rational& o) const { return make(num * o.den - o.num * den, den * o.den); }
Rational Rational::operator*(const Rational& o) const { return make(num * o.num, den * o.den); }
Rational Rational::operator/(const Rational& o) const { return make(num * o.den, den * o.num); }

WeightLattice WeightLattice::from_basis(const std::array<RationalPair, 2>& coeff) {
    // B has the basis vectors as columns; dual covectors are the rows of B^-1
    const Rational& b00 = coeff[0][0];
    const Rational& b10 = coeff[0][1];
    const Rational& b01 = coeff[1][0];
    const Rational& b11 = coeff[1][1];
    const Rational det = b00 * b11 - b01 * b10;
    if (det.num == 0) throw Error(ErrorCode::DomainError, "lattice basis is degenerate");
    WeightLattice lat;
    lat.basis_coeff = coeff;
    lat.dual_coeff[0] = {b11 / det, Rational::make(0) - b01 / det};
    lat.dual_coeff[1] = {Rational::make(0) - b10 / det, b00 / det};
    return lat;
}

Eigen::Matrix2d WeightLattice::basis() const {
    Eigen::Matrix2d b;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i) b(i, k) = 2.0 * std::numbers::pi * basis_coeff[k][i].value();
    return b;
}

Eigen::Matrix2d WeightLattice::dual_basis() const {
    Eigen::Matrix2d d;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i) d(i, k) = dual_coeff[k][i].value() / (2.0 * std::numbers::pi);
    return d;
}

std::array<RationalPair, 2> WeightLattice::pairing() const {
    std::array<RationalPair, 2> out{};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 2; ++k)
            out[i][k] = dual_coeff[i][0] * basis_coeff[k][0] + dual_coeff[i][1] * basis_coeff[k][1];
    return out;
}

double WeightLattice::covolume() const { return std::abs(basis().determinant()); }

WeightLattice dual_lattice(const SpaceParams& params) {
    const Rational one = Rational::make(1);
    const Rational inv_p = Rational::make(1, params.p);
    WeightLattice lat = WeightLattice::from_basis({RationalPair{one, Rational::make(0)}, RationalPair{inv_p, inv_p}});
    lat.p = params.p;
    return lat;
}

WeightLattice square_lattice() {
    return WeightLattice::from_basis(
        {RationalPair{Rational::make(1), Rational::make(0)}, RationalPair{Rational::make(0), Rational::make(1)}});
}

OrbitGram orbit_gram(const SpaceParams& params, const SpherePoint& x) {
    require_regular(x, "orbit_gram");
    const double q = params.q;
    const double d = rescale_denominator(params, x);
    const Eigen::Vector2d w{std::norm(x.v(0)), std::norm(x.v(1))};
    OrbitGram g;
    const double s = q * q / d;
    g.G(0, 0) = w(0) - s * w(0) * w(0);
    g.G(1, 1) = w(1) - s * w(1) * w(1);
    g.G(0, 1) = g.G(1, 0) = -s * w(0) * w(1);
    return g;
}

double general_orbit_product(const SpaceParams& params, const SpherePoint& x, std::array<double, 2> A,
                             std::array<double, 2> B, std::array<Complex, 2> sigma) {
    const SpherePoint y = t2_act(sigma[0], sigma[1], x);
    require_regular(y, "general_orbit_product");
    const double q = params.q;
    const double d = rescale_denominator(params, y);
    const double w0 = std::norm(y.v(0));
    const double w1 = std::norm(y.v(1));
    const double sa = A[0] * w0 + A[1] * w1;
    const double sb = B[0] * w0 + B[1] * w1;
    return A[0] * B[0] * w0 + A[1] * B[1] * w1 - q * q * sa * sb / d;
}

double orbit_area(const SpaceParams& params, const SpherePoint& x) {
    const double det = orbit_gram(params, x).G.determinant();
    return 4.0 * std::numbers::pi * std::numbers::pi / params.p * std::sqrt(std::max(det, 0.0));
}

double orbit_area(const SpaceParams& params, const OrbitStratum& s) {
    const double p = params.p;
    const double q = params.q;
    const double c2 = s.c * s.c;
    const double v2 = 1.0 - c2;
    const double rhs = s.a * s.a * s.b * s.b * (1.0 - q * q * v2 / (p * p * c2 + q * q * v2));
    // (p^2 / 16 pi^4) A^2 = rhs
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return 4.0 * pi2 / p * std::sqrt(std::max(rhs, 0.0));
}

double orbit_angle(const SpaceParams& params, double a) {
    if (!(a > 0.0 && a < 1.0 / std::numbers::sqrt2)) {
        std::ostringstream os;
        os << "orbit_angle: a = " << a << " outside (0, 1/sqrt2)";
        throw Error(ErrorCode::DomainError, os.str());
    }
    const double p = params.p;
    const double q = params.q;
    const double a2 = a * a;
    return std::acos(-q * q * a2 / (p * p * (1.0 - 2.0 * a2) + q * q * a2));
}

double gram_angle(const OrbitGram& gram) {
    const double c = gram.G(0, 1) / std::sqrt(gram.G(0, 0) * gram.G(1, 1));
    return std::acos(std::clamp(c, -1.0, 1.0));
}

std::vector<double> flat_torus_spectrum(const OrbitGram& gram, const WeightLattice& lattice, double cutoff) {
    if (!(cutoff >= 0.0)) throw Error(ErrorCode::DomainError, "flat_torus_spectrum: cutoff must be >= 0");
    const Eigen::Matrix2d& g = gram.G;
    if (std::abs(g(0, 1) - g(1, 0)) > 1e-12 * g.cwiseAbs().maxCoeff()) {
        throw Error(ErrorCode::NotPositiveDefinite, "flat_torus_spectrum: Gram is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> ges(g);
    if (!(ges.eigenvalues()(0) > 0.0)) {
        throw Error(ErrorCode::NotPositiveDefinite, "flat_torus_spectrum: Gram is not positive definite",
                    ges.eigenvalues()(0));
    }
    // lambda(k) = k^T M k with M = 4 pi^2 D^T G^-1 D, D the dual basis
    const Eigen::Matrix2d d = lattice.dual_basis();
    const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
    Eigen::Matrix2d m = four_pi2 * d.transpose() * g.inverse() * d;
    m = 0.5 * (m + m.transpose()).eval();
    const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(m).eigenvalues()(0);
    const double radius = 1.1 * std::sqrt(cutoff / lmin);
    const auto kmax = static_cast<long>(std::ceil(radius));
    const double bound = cutoff * (1.0 + 1e-12);

    std::vector<double> out;
    for (long k1 = -kmax; k1 <= kmax; ++k1) {
        for (long k2 = -kmax; k2 <= kmax; ++k2) {
            const Eigen::Vector2d k{static_cast<double>(k1), static_cast<double>(k2)};
            const double lambda = k.dot(m * k);
            if (lambda <= bound) out.push_back(lambda);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

TorusVector connection_form_eval(const SpaceParams& params, const SpherePoint& x, const TangentVector& X) {
    require_regular(x, "connection_form_eval");
    const Complex i{0.0, 1.0};
    const double s1 = -static_cast<double>(params.q) / params.p * real_inner(X.U, i * x.u) / x.u.squaredNorm();
    auto fibre = [&](Eigen::Index k) {
        return (X.V(k) * std::conj(i * x.v(k))).real() / std::norm(x.v(k));
    };
    return {s1 + fibre(0), s1 + fibre(1)};
}

}  // namespace isospec
