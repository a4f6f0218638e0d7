#include "isospec/su_algebra.hpp"

#include <cmath>
#include <sstream>

#include "isospec/error.hpp"

namespace isospec {

namespace {

void require_square(const ComplexMatrix& x, const char* what) {
    if (x.rows() != x.cols() || x.rows() < 1) {
        std::ostringstream os;
        os << what << ": expected a square matrix, got " << x.rows() << "x" << x.cols();
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
}

}  // namespace

SuElement SuElement::zero(int m) {
    return SuElement(ComplexMatrix::Zero(m, m));
}

SuElement SuElement::project(const ComplexMatrix& x) {
    require_square(x, "SuElement::project");
    const Eigen::Index m = x.rows();
    ComplexMatrix s(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < m; ++b) {
            s(a, b) = (x(a, b) - std::conj(x(b, a))) * 0.5;
        }
    }
    Complex tr{0.0, 0.0};
    for (Eigen::Index k = 0; k < m; ++k) tr += s(k, k);
    if (tr != Complex{0.0, 0.0}) {
        const Complex shift = tr / static_cast<double>(m);
        for (Eigen::Index k = 0; k < m; ++k) s(k, k) -= shift;
    }
    Complex head{0.0, 0.0};
    for (Eigen::Index k = 0; k + 1 < m; ++k) head += s(k, k);
    s(m - 1, m - 1) = -head;
    return SuElement(std::move(s));
}

SuElement SuElement::operator+(const SuElement& other) const {
    return project(x_ + other.x_);
}

SuElement SuElement::operator-(const SuElement& other) const {
    return project(x_ - other.x_);
}

SuElement SuElement::operator*(double s) const {
    return project(x_ * s);
}

SuElement validate_su(const ComplexMatrix& x, double tol) {
    require_square(x, "validate_su");
    const double skew = max_abs(x + x.adjoint());
    if (skew > tol) {
        std::ostringstream os;
        os << "||X + X^H||_max = " << skew << " exceeds " << tol;
        throw Error(ErrorCode::NotSkewHermitian, os.str(), skew);
    }
    const double tr = std::abs(x.trace());
    if (tr > tol) {
        std::ostringstream os;
        os << "|tr X| = " << tr << " exceeds " << tol;
        throw Error(ErrorCode::NotTraceless, os.str(), tr);
    }
    return SuElement::project(x);
}

std::vector<ComplexMatrix> su_basis(int m) {
    std::vector<ComplexMatrix> basis;
    basis.reserve(static_cast<std::size_t>(m * m - 1));
    const double r2 = 1.0 / std::sqrt(2.0);
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            ComplexMatrix e = ComplexMatrix::Zero(m, m);
            e(a, b) = r2;
            e(b, a) = -r2;
            basis.push_back(std::move(e));
        }
    }
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            ComplexMatrix e = ComplexMatrix::Zero(m, m);
            e(a, b) = Complex{0.0, r2};
            e(b, a) = Complex{0.0, r2};
            basis.push_back(std::move(e));
        }
    }
    for (int k = 1; k < m; ++k) {
        ComplexMatrix e = ComplexMatrix::Zero(m, m);
        const double norm = std::sqrt(static_cast<double>(k) * (k + 1));
        for (int t = 0; t < k; ++t) e(t, t) = Complex{0.0, 1.0 / norm};
        e(k, k) = Complex{0.0, -static_cast<double>(k) / norm};
        basis.push_back(std::move(e));
    }
    return basis;
}

RealVector su_coordinates(const SuElement& x) {
    const ComplexMatrix& a = x.matrix();
    const int m = x.dim();
    RealVector c(m * m - 1);
    const double r2 = 1.0 / std::sqrt(2.0);
    int idx = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) c(idx++) = (a(i, j).real() - a(j, i).real()) * r2;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) c(idx++) = (a(i, j).imag() + a(j, i).imag()) * r2;
    for (int k = 1; k < m; ++k) {
        const double norm = std::sqrt(static_cast<double>(k) * (k + 1));
        double s = 0.0;
        for (int t = 0; t < k; ++t) s += a(t, t).imag();
        s -= k * a(k, k).imag();
        c(idx++) = s / norm;
    }
    return c;
}

SuElement su_from_coordinates(int m, const RealVector& coords) {
    if (coords.size() != m * m - 1) {
        throw Error(ErrorCode::DimensionMismatch, "su_from_coordinates: coordinate count != m^2 - 1");
    }
    const auto basis = su_basis(m);
    ComplexMatrix x = ComplexMatrix::Zero(m, m);
    for (std::size_t b = 0; b < basis.size(); ++b) x += coords(static_cast<Eigen::Index>(b)) * basis[b];
    return SuElement::project(x);
}

int commutant_dimension(std::span<const SuElement> generators, double rank_tol) {
    if (generators.empty()) {
        throw Error(ErrorCode::DimensionMismatch, "commutant_dimension: no generators");
    }
    const int m = generators.front().dim();
    for (const auto& g : generators) {
        if (g.dim() != m) {
            throw Error(ErrorCode::DimensionMismatch, "commutant_dimension: generators differ in dimension");
        }
    }
    const auto basis = su_basis(m);
    const Eigen::Index dim = static_cast<Eigen::Index>(basis.size());
    const Eigen::Index block = 2 * m * m;
    RealMatrix system(block * static_cast<Eigen::Index>(generators.size()), dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        for (std::size_t g = 0; g < generators.size(); ++g) {
            const ComplexMatrix c = commutator(basis[static_cast<std::size_t>(b)], generators[g].matrix());
            const Eigen::Index off = block * static_cast<Eigen::Index>(g);
            for (Eigen::Index k = 0; k < m * m; ++k) {
                system(off + 2 * k, b) = c(k).real();
                system(off + 2 * k + 1, b) = c(k).imag();
            }
        }
    }
    Eigen::JacobiSVD<RealMatrix> svd(system);
    const RealVector& sv = svd.singularValues();
    const double top = sv.size() > 0 ? sv(0) : 0.0;
    int rank = 0;
    if (top > 0.0) {
        for (Eigen::Index k = 0; k < sv.size(); ++k)
            if (sv(k) > rank_tol * top) ++rank;
    }
    return static_cast<int>(dim) - rank;
}

ComplexMatrix nearest_special_unitary(const ComplexMatrix& a) {
    require_square(a, "nearest_special_unitary");
    Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector& sv = svd.singularValues();
    const double top = sv(0);
    const double bottom = sv(sv.size() - 1);
    if (!(top > 0.0) || bottom <= 1e-14 * top) {
        throw Error(ErrorCode::SingularInput, "nearest_special_unitary: matrix is numerically singular",
                    top > 0.0 ? bottom / top : 0.0);
    }
    ComplexMatrix u = svd.matrixU() * svd.matrixV().adjoint();
    const Complex det = u.determinant();
    u.col(0) *= std::conj(det) / std::abs(det);
    return u;
}

HermitianSpectrum hermitian_spectrum(const SuElement& x) {
    const ComplexMatrix h = Complex{0.0, -1.0} * x.matrix();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    return {es.eigenvalues(), es.eigenvectors()};
}

RealVector sorted_eigenvalues(const SuElement& x) {
    const ComplexMatrix h = Complex{0.0, -1.0} * x.matrix();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double max_abs(const ComplexMatrix& x) {
    return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
}

SuElement random_su(int m, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix x(m, m);
    for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = Complex{gauss(rng), gauss(rng)};
    return SuElement::project(x);
}

ComplexMatrix random_special_unitary(int m, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix z(m, m);
    for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = Complex{gauss(rng), gauss(rng)};
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m, m);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < m; ++k) {
        const Complex d = r(k, k);
        if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
    }
    const Complex det = q.determinant();
    q.col(0) *= std::conj(det) / std::abs(det);
    return q;
}

}  // namespace isospec
