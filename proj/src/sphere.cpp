#include "isospec/sphere.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "isospec/error.hpp"

namespace isospec {

namespace {

constexpr double kUnitTol = 1e-12;

void require_unit(Complex s, const char* what) {
    const double dev = std::abs(std::abs(s) - 1.0);
    if (dev > kUnitTol) {
        std::ostringstream os;
        os << what << ": |sigma| - 1 = " << dev;
        throw Error(ErrorCode::NotUnitScalar, os.str(), dev);
    }
}

Complex ipow(Complex s, int k) {
    Complex r{1.0, 0.0};
    for (int i = 0; i < k; ++i) r *= s;
    return r;
}

void require_same_base(const TangentVector& x, const TangentVector& y) {
    const double du = x.base.u.size() == y.base.u.size() ? (x.base.u - y.base.u).cwiseAbs().maxCoeff() : 1.0;
    const double dv = (x.base.v - y.base.v).cwiseAbs().maxCoeff();
    if (std::max(du, dv) > 1e-12) {
        throw Error(ErrorCode::BasePointMismatch, "tangent vectors live at different base points", std::max(du, dv));
    }
}

TangentVector raw_tangent(const SpherePoint& base, ComplexVector U, ComplexVector V) {
    TangentVector t;
    t.base = base;
    t.U = std::move(U);
    t.V = std::move(V);
    return t;
}

double h0_eval(const SpaceParams& params, const TangentVector& X, const TangentVector& Y) {
    const TangentVector w = s1_vertical(params, X.base);
    const double ww = round_inner(w, w);
    const double xw = round_inner(X, w);
    const double yw = round_inner(Y, w);
    // <X^v, Y^v> = xw*yw/ww ; <X^h, Y^h> = <X,Y> - xw*yw/ww ; ww = p^2|u|^2 + q^2|v|^2
    const double vertical = xw * yw / ww;
    return vertical / ww + (round_inner(X, Y) - vertical);
}

TangentVector kappa_lift(const JMap& j, const TangentVector& X) {
    const TorusVector k = kappa_eval(j, X.base, X);
    return X + fundamental_vector(k, X.base);
}

}  // namespace

SpaceParams SpaceParams::make(int n, int p, int q) {
    if (n < 4) throw Error(ErrorCode::InvalidParams, "n must be >= 4");
    if (p < 1 || q < 1) throw Error(ErrorCode::InvalidParams, "p and q must be positive");
    if (std::gcd(p, q) != 1) throw Error(ErrorCode::InvalidParams, "p and q must be coprime");
    return SpaceParams{n, p, q};
}

SpherePoint SpherePoint::make(ComplexVector u, ComplexVector v, double tol) {
    if (v.size() != 2 || u.size() < 1) {
        throw Error(ErrorCode::DimensionMismatch, "SpherePoint: v must lie in C^2 and u must be nonempty");
    }
    const double dev = std::abs(u.squaredNorm() + v.squaredNorm() - 1.0);
    if (dev > tol) {
        std::ostringstream os;
        os << "SpherePoint: |u|^2 + |v|^2 - 1 = " << dev;
        throw Error(ErrorCode::NotOnSphere, os.str(), dev);
    }
    return SpherePoint{std::move(u), std::move(v)};
}

SpherePoint SpherePoint::normalized(ComplexVector u, ComplexVector v) {
    const double norm = std::sqrt(u.squaredNorm() + v.squaredNorm());
    return SpherePoint{u / norm, v / norm};
}

bool SpherePoint::is_regular(double eps) const {
    return u.norm() > eps && std::abs(v(0)) > eps && std::abs(v(1)) > eps;
}

TangentVector TangentVector::make(const SpherePoint& base, ComplexVector U, ComplexVector V, double tol) {
    if (U.size() != base.u.size() || V.size() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "TangentVector: component sizes do not match the base point");
    }
    const double radial = real_inner(U, base.u) + real_inner(V, base.v);
    if (std::abs(radial) > tol) {
        std::ostringstream os;
        os << "TangentVector: radial component " << radial;
        throw Error(ErrorCode::NotTangent, os.str(), std::abs(radial));
    }
    return raw_tangent(base, std::move(U), std::move(V));
}

TangentVector TangentVector::projected(const SpherePoint& base, ComplexVector U, ComplexVector V) {
    const double radial = real_inner(U, base.u) + real_inner(V, base.v);
    const double norm2 = base.u.squaredNorm() + base.v.squaredNorm();
    U -= (radial / norm2) * base.u;
    V -= (radial / norm2) * base.v;
    return raw_tangent(base, std::move(U), std::move(V));
}

TangentVector TangentVector::zero(const SpherePoint& base) {
    return raw_tangent(base, ComplexVector::Zero(base.u.size()), ComplexVector::Zero(2));
}

TangentVector TangentVector::operator+(const TangentVector& o) const {
    return raw_tangent(base, U + o.U, V + o.V);
}

TangentVector TangentVector::operator-(const TangentVector& o) const {
    return raw_tangent(base, U - o.U, V - o.V);
}

TangentVector TangentVector::operator*(double s) const {
    return raw_tangent(base, s * U, s * V);
}

double real_inner(const ComplexVector& a, const ComplexVector& b) {
    // b.dot(a) = sum conj(b_i) a_i
    return b.dot(a).real();
}

double round_inner(const TangentVector& x, const TangentVector& y) {
    return real_inner(x.U, y.U) + real_inner(x.V, y.V);
}

SpherePoint s1_act(const SpaceParams& params, Complex sigma, const SpherePoint& x) {
    require_unit(sigma, "s1_act");
    return SpherePoint::normalized(ipow(sigma, params.p) * x.u, ipow(sigma, params.q) * x.v);
}

TangentVector s1_push(const SpaceParams& params, Complex sigma, const TangentVector& x) {
    require_unit(sigma, "s1_push");
    const Complex sp = ipow(sigma, params.p);
    const Complex sq = ipow(sigma, params.q);
    return raw_tangent(s1_act(params, sigma, x.base), sp * x.U, sq * x.V);
}

SpherePoint t2_act(Complex sigma1, Complex sigma2, const SpherePoint& x) {
    require_unit(sigma1, "t2_act");
    require_unit(sigma2, "t2_act");
    ComplexVector v = x.v;
    v(0) *= sigma1;
    v(1) *= sigma2;
    return SpherePoint::normalized(x.u, std::move(v));
}

TangentVector t2_push(Complex sigma1, Complex sigma2, const TangentVector& x) {
    ComplexVector V = x.V;
    V(0) *= sigma1;
    V(1) *= sigma2;
    return raw_tangent(t2_act(sigma1, sigma2, x.base), x.U, std::move(V));
}

TangentVector fundamental_vector(TorusVector z, const SpherePoint& x) {
    ComplexVector V(2);
    V(0) = Complex{0.0, z.z1} * x.v(0);
    V(1) = Complex{0.0, z.z2} * x.v(1);
    return raw_tangent(x, ComplexVector::Zero(x.u.size()), std::move(V));
}

TangentVector s1_vertical(const SpaceParams& params, const SpherePoint& x) {
    const Complex i{0.0, 1.0};
    return raw_tangent(x, (i * static_cast<double>(params.p)) * x.u, (i * static_cast<double>(params.q)) * x.v);
}

TorusVector kappa_eval(const JMap& j, const SpherePoint& x, const TangentVector& X) {
    if (j.m() != x.u.size() || X.U.size() != x.u.size()) {
        throw Error(ErrorCode::DimensionMismatch, "kappa_eval: j.m() must equal dim u");
    }
    const ComplexVector iu = Complex{0.0, 1.0} * x.u;
    const double u2 = x.u.squaredNorm();
    const double along = real_inner(X.U, iu);
    auto component = [&](const ComplexMatrix& jk) {
        const ComplexVector ju = jk * x.u;
        return u2 * real_inner(ju, X.U) - along * real_inner(ju, iu);
    };
    return {component(j.j1().matrix()), component(j.j2().matrix())};
}

double metric_eval(const SpaceParams& params, const MetricSpec& spec, const TangentVector& X,
                   const TangentVector& Y) {
    require_same_base(X, Y);
    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, RoundMetric>) {
                return round_inner(X, Y);
            } else if constexpr (std::is_same_v<M, H0Metric>) {
                return h0_eval(params, X, Y);
            } else {
                return h0_eval(params, kappa_lift(m.j, X), kappa_lift(m.j, Y));
            }
        },
        spec);
}

RealMatrix gram_matrix(const SpaceParams& params, const MetricSpec& spec, std::span<const TangentVector> vectors) {
    const auto k = static_cast<Eigen::Index>(vectors.size());
    RealMatrix g(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = a; b < k; ++b) {
            g(a, b) = metric_eval(params, spec, vectors[static_cast<std::size_t>(a)],
                                  vectors[static_cast<std::size_t>(b)]);
            g(b, a) = g(a, b);
        }
    }
    return g;
}

double volume_density_ratio(const SpaceParams& params, const JMap& j, const SpherePoint& x,
                            std::span<const TangentVector> frame) {
    const auto expected = static_cast<std::size_t>(2 * params.n + 1);
    if (frame.size() != expected) {
        std::ostringstream os;
        os << "volume_density_ratio: frame has " << frame.size() << " vectors, expected " << expected;
        throw Error(ErrorCode::DegenerateFrame, os.str());
    }
    for (const auto& f : frame) {
        (void)x;
        const double du = (f.base.u - x.u).cwiseAbs().maxCoeff();
        const double dv = (f.base.v - x.v).cwiseAbs().maxCoeff();
        if (std::max(du, dv) > 1e-12) throw Error(ErrorCode::BasePointMismatch, "frame vector not based at x");
    }
    const double round_det = gram_matrix(params, RoundMetric{}, frame).determinant();
    if (!(round_det >= 1e-8)) {
        throw Error(ErrorCode::DegenerateFrame, "frame Gram determinant below 1e-8", round_det);
    }
    const double det0 = gram_matrix(params, H0Metric{}, frame).determinant();
    const double detk = gram_matrix(params, HKappaMetric{j}, frame).determinant();
    return detk / det0;
}

TangentVector horizontal_project(const SpaceParams& params, ActionGroup group, const TangentVector& X) {
    std::vector<TangentVector> span;
    if (group == ActionGroup::S1) {
        span.push_back(s1_vertical(params, X.base));
    } else {
        span.push_back(fundamental_vector({1.0, 0.0}, X.base));
        span.push_back(fundamental_vector({0.0, 1.0}, X.base));
    }
    // Gram-Schmidt, dropping directions that vanish at non-regular points
    std::vector<TangentVector> ortho;
    for (auto w : span) {
        for (const auto& e : ortho) w = w - e * round_inner(w, e);
        const double norm = std::sqrt(round_inner(w, w));
        if (norm > 1e-14) ortho.push_back(w * (1.0 / norm));
    }
    TangentVector h = X;
    for (const auto& e : ortho) h = h - e * round_inner(h, e);
    return h;
}

SpherePoint random_sphere_point(const SpaceParams& params, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexVector u(params.n - 1);
    ComplexVector v(2);
    for (Eigen::Index k = 0; k < u.size(); ++k) u(k) = Complex{gauss(rng), gauss(rng)};
    for (Eigen::Index k = 0; k < 2; ++k) v(k) = Complex{gauss(rng), gauss(rng)};
    return SpherePoint::normalized(std::move(u), std::move(v));
}

SpherePoint random_regular_point(const SpaceParams& params, std::mt19937_64& rng) {
    for (;;) {
        SpherePoint x = random_sphere_point(params, rng);
        if (x.is_regular(1e-6)) return x;
    }
}

TangentVector random_tangent(const SpherePoint& x, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexVector U(x.u.size());
    ComplexVector V(2);
    for (Eigen::Index k = 0; k < U.size(); ++k) U(k) = Complex{gauss(rng), gauss(rng)};
    for (Eigen::Index k = 0; k < 2; ++k) V(k) = Complex{gauss(rng), gauss(rng)};
    return TangentVector::projected(x, std::move(U), std::move(V));
}

Complex random_unit_scalar(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    return std::polar(1.0, angle(rng));
}

}  // namespace isospec
