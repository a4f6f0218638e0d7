#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isospec/error.hpp"
#include "isospec/sphere.hpp"
#include "isospec/verify.hpp"
#include "support.hpp"

using namespace isospec;
using fixture::I;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an isospec::Error");
    return ErrorCode::DomainError;
}

double tangent_gap(const TangentVector& a, const TangentVector& b) {
    return std::max((a.U - b.U).cwiseAbs().maxCoeff(), (a.V - b.V).cwiseAbs().maxCoeff());
}

std::vector<TangentVector> random_frame(const SpaceParams& params, const SpherePoint& x, std::mt19937_64& rng) {
    std::vector<TangentVector> frame;
    for (int k = 0; k < 2 * params.n + 1; ++k) frame.push_back(random_tangent(x, rng));
    return frame;
}

}  // namespace

TEST_CASE("parameter and point validation") {
    CHECK(code_of([] { SpaceParams::make(3, 1, 1); }) == ErrorCode::InvalidParams);
    CHECK(code_of([] { SpaceParams::make(4, 2, 4); }) == ErrorCode::InvalidParams);
    CHECK(code_of([] { SpaceParams::make(4, 0, 1); }) == ErrorCode::InvalidParams);
    CHECK(SpaceParams::make(5, 2, 3).m() == 4);

    ComplexVector u = ComplexVector::Zero(3), v = ComplexVector::Zero(2);
    u(0) = 1.0;
    v(0) = 0.1;
    CHECK(code_of([&] { SpherePoint::make(u, v); }) == ErrorCode::NotOnSphere);
    const SpherePoint x = SpherePoint::normalized(u, v);
    CHECK(std::abs(x.u.squaredNorm() + x.v.squaredNorm() - 1.0) <= 1e-15);
    CHECK_FALSE(x.is_regular());
    CHECK(code_of([&] { TangentVector::make(x, x.u, x.v); }) == ErrorCode::NotTangent);
    CHECK(code_of([&] { TangentVector::make(x, ComplexVector::Zero(2), x.v); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("group actions") {
    std::mt19937_64 rng(61);
    const SpaceParams params = SpaceParams::make(5, 2, 3);
    const SpherePoint x = random_regular_point(params, rng);
    CHECK(code_of([&] { s1_act(params, Complex{1.1, 0.0}, x); }) == ErrorCode::NotUnitScalar);
    CHECK(code_of([&] { t2_act(Complex{1.0, 0.0}, Complex{0.0, 0.9}, x); }) == ErrorCode::NotUnitScalar);
    for (int trial = 0; trial < 20; ++trial) {
        const Complex s = random_unit_scalar(rng), t = random_unit_scalar(rng);
        const SpherePoint a = s1_act(params, s, s1_act(params, t, x));
        const SpherePoint b = s1_act(params, s * t, x);
        CHECK((a.u - b.u).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK((a.v - b.v).cwiseAbs().maxCoeff() <= 1e-14);
        const TangentVector X = random_tangent(x, rng), Y = random_tangent(x, rng);
        CHECK(std::abs(round_inner(s1_push(params, s, X), s1_push(params, s, Y)) - round_inner(X, Y)) <= 1e-13);
        CHECK(std::abs(round_inner(t2_push(s, t, X), t2_push(s, t, Y)) - round_inner(X, Y)) <= 1e-13);
    }
}

TEST_CASE("fundamental vectors match the derivative of the action") {
    std::mt19937_64 rng(67);
    const SpaceParams params = SpaceParams::make(4, 1, 2);
    for (int trial = 0; trial < 10; ++trial) {
        const SpherePoint x = random_regular_point(params, rng);
        for (int k = 0; k < 2; ++k) {
            const TorusVector z = k == 0 ? TorusVector{1.0, 0.0} : TorusVector{0.0, 1.0};
            CHECK(tangent_gap(fundamental_vector(z, x), fd_fundamental_vector(x, k)) <= 1e-9);
        }
        // the circle fibre direction is d/dt (e^{ipt} u, e^{iqt} v)
        const double eps = 1e-5;
        const SpherePoint plus = s1_act(params, std::polar(1.0, eps), x);
        const SpherePoint minus = s1_act(params, std::polar(1.0, -eps), x);
        const TangentVector w = s1_vertical(params, x);
        CHECK(((plus.u - minus.u) / (2 * eps) - w.U).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK(((plus.v - minus.v) / (2 * eps) - w.V).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("kappa on a hand-computed vector") {
    const SpaceParams params = SpaceParams::make(4, 1, 1);
    const double c = 1.0 / std::sqrt(2.0);
    ComplexVector u = ComplexVector::Zero(3), v(2), U = ComplexVector::Zero(3);
    u(0) = c;
    v << 0.5, 0.5;
    U(1) = 1.0;
    const SpherePoint x = SpherePoint::make(u, v);
    const TangentVector X = TangentVector::make(x, U, ComplexVector::Zero(2));
    const TorusVector k = kappa_eval(fixture::sample_jmap(), x, X);
    CHECK(k.z1 == doctest::Approx(-c * c * c).epsilon(1e-14));
    CHECK(k.z2 == doctest::Approx(-0.5 * c * c * c).epsilon(1e-14));
    (void)params;
}

TEST_CASE("kappa properties") {
    std::mt19937_64 rng(71);
    const SpaceParams params = SpaceParams::make(4, 2, 1);
    const JMap j = random_jmap(3, rng);
    const JMap j2 = random_jmap(3, rng);
    for (int trial = 0; trial < 20; ++trial) {
        const SpherePoint x = random_regular_point(params, rng);
        const TangentVector X = random_tangent(x, rng);
        const TorusVector on_fibre = kappa_eval(j, x, s1_vertical(params, x));
        CHECK(std::hypot(on_fibre.z1, on_fibre.z2) <= 1e-14);
        const TorusVector on_torus = kappa_eval(j, x, fundamental_vector({0.7, -0.2}, x));
        CHECK(std::hypot(on_torus.z1, on_torus.z2) == 0.0);

        const TorusVector a = kappa_eval(j, x, X), b = kappa_eval(j2, x, X);
        const TorusVector sum = kappa_eval(JMap(j.j1() + j2.j1(), j.j2() + j2.j2()), x, X);
        CHECK(std::abs(sum.z1 - a.z1 - b.z1) <= 1e-13);
        CHECK(std::abs(sum.z2 - a.z2 - b.z2) <= 1e-13);

        // kappa_{A j A^-1}(Ax, AX) = kappa_j(x, X)
        const ComplexMatrix A = random_special_unitary(3, rng);
        const SpherePoint y = SpherePoint::normalized(A * x.u, x.v);
        const TangentVector Y = TangentVector::projected(y, A * X.U, X.V);
        const TorusVector c = kappa_eval(conjugate(j, A), y, Y);
        CHECK(std::abs(c.z1 - a.z1) <= 1e-13);
        CHECK(std::abs(c.z2 - a.z2) <= 1e-13);
    }
    CHECK(code_of([&] {
              const SpherePoint x = random_regular_point(SpaceParams::make(5, 1, 1), rng);
              kappa_eval(j, x, random_tangent(x, rng));
          }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("h0 shrinks the circle fibre to unit length") {
    std::mt19937_64 rng(73);
    for (auto [p, q] : {std::pair{1, 1}, {2, 3}, {5, 2}}) {
        const SpaceParams params = SpaceParams::make(4, p, q);
        for (int trial = 0; trial < 10; ++trial) {
            const SpherePoint x = random_regular_point(params, rng);
            const TangentVector w = s1_vertical(params, x);
            CHECK(metric_eval(params, H0Metric{}, w, w) == doctest::Approx(1.0).epsilon(1e-13));
            const TangentVector h = horizontal_project(params, ActionGroup::S1, random_tangent(x, rng));
            const TangentVector k = horizontal_project(params, ActionGroup::S1, random_tangent(x, rng));
            CHECK(std::abs(metric_eval(params, H0Metric{}, h, k) - round_inner(h, k)) <= 1e-13);
            CHECK(std::abs(metric_eval(params, H0Metric{}, h, w)) <= 1e-13);
        }
    }
}

TEST_CASE("metrics are symmetric, bilinear and positive definite") {
    std::mt19937_64 rng(79);
    const SpaceParams params = SpaceParams::make(4, 1, 2);
    const JMap j = random_jmap(3, rng);
    const std::vector<MetricSpec> specs{RoundMetric{}, H0Metric{}, HKappaMetric{j}};
    for (int trial = 0; trial < 10; ++trial) {
        const SpherePoint x = random_regular_point(params, rng);
        const TangentVector X = random_tangent(x, rng), Y = random_tangent(x, rng), W = random_tangent(x, rng);
        for (const auto& spec : specs) {
            CHECK(std::abs(metric_eval(params, spec, X, Y) - metric_eval(params, spec, Y, X)) <= 1e-13);
            const double lin = metric_eval(params, spec, X * 2.0 + W, Y) - 2.0 * metric_eval(params, spec, X, Y) -
                               metric_eval(params, spec, W, Y);
            CHECK(std::abs(lin) <= 1e-12);
            const RealMatrix g = gram_matrix(params, spec, random_frame(params, x, rng));
            CHECK(Eigen::SelfAdjointEigenSolver<RealMatrix>(g).eigenvalues().minCoeff() > 0.0);
        }
    }
    const SpherePoint x = random_regular_point(params, rng), y = random_regular_point(params, rng);
    CHECK(code_of([&] { metric_eval(params, H0Metric{}, random_tangent(x, rng), random_tangent(y, rng)); }) ==
          ErrorCode::BasePointMismatch);
}

TEST_CASE("h_kappa agrees with h0 between torus verticals only") {
    std::mt19937_64 rng(83);
    const SpaceParams params = SpaceParams::make(4, 1, 1);
    const JMap j = random_jmap(3, rng);
    const JMap zero(SuElement::zero(3), SuElement::zero(3));
    double mixed = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const SpherePoint x = random_regular_point(params, rng);
        const TangentVector z1 = fundamental_vector({1.0, 0.0}, x), z2 = fundamental_vector({-0.3, 2.0}, x);
        CHECK(std::abs(metric_eval(params, HKappaMetric{j}, z1, z2) - metric_eval(params, H0Metric{}, z1, z2)) <=
              1e-14);
        const TangentVector X = random_tangent(x, rng), Y = random_tangent(x, rng);
        CHECK(metric_eval(params, HKappaMetric{zero}, X, Y) == metric_eval(params, H0Metric{}, X, Y));
        mixed = std::max(mixed, std::abs(metric_eval(params, HKappaMetric{j}, X, z1) -
                                         metric_eval(params, H0Metric{}, X, z1)));
    }
    // a general vector paired with a vertical one sees the kappa shift
    CHECK(mixed > 1e-3);
}

TEST_CASE("h_kappa against the circle fibre picks up h0(w, kappa(Y)*)") {
    std::mt19937_64 rng(87);
    const SpaceParams params = SpaceParams::make(4, 2, 3);
    const JMap j = random_jmap(3, rng);
    double shift = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const SpherePoint x = random_regular_point(params, rng);
        const TangentVector w = s1_vertical(params, x);
        const TangentVector Y = random_tangent(x, rng);
        const TangentVector lift = fundamental_vector(kappa_eval(j, x, Y), x);
        const double hk = metric_eval(params, HKappaMetric{j}, w, Y);
        const double h0 = metric_eval(params, H0Metric{}, w, Y);
        CHECK(std::abs(hk - h0 - metric_eval(params, H0Metric{}, w, lift)) <= 1e-13);
        shift = std::max(shift, std::abs(hk - h0));
    }
    CHECK(shift > 1e-3);
}

TEST_CASE("volume density") {
    std::mt19937_64 rng(89);
    const SpaceParams params = SpaceParams::make(4, 2, 3);
    ComplexVector u(3), v(2);
    u << 0.3 + 0.1 * I, -0.2 * I, 0.4;
    v << 0.5 - 0.2 * I, 0.1 + 0.3 * I;
    const SpherePoint x = SpherePoint::normalized(u, v);
    const auto frame = random_frame(params, x, rng);
    // det h0 / det Round = 1 / (p^2|u|^2 + q^2|v|^2) on any frame
    const double control = gram_matrix(params, H0Metric{}, frame).determinant() /
                           gram_matrix(params, RoundMetric{}, frame).determinant();
    CHECK(control == doctest::Approx(0.14649681528662417).epsilon(1e-10));

    for (int trial = 0; trial < 20; ++trial) {
        const JMap j = random_jmap(3, rng);
        const SpherePoint y = random_regular_point(params, rng);
        CHECK(std::abs(volume_density_ratio(params, j, y, random_frame(params, y, rng)) - 1.0) <= 1e-9);
    }
    const JMap j = random_jmap(3, rng);
    auto short_frame = frame;
    short_frame.pop_back();
    CHECK(code_of([&] { volume_density_ratio(params, j, x, short_frame); }) == ErrorCode::DegenerateFrame);
    auto flat_frame = frame;
    flat_frame.back() = flat_frame.front();
    CHECK(code_of([&] { volume_density_ratio(params, j, x, flat_frame); }) == ErrorCode::DegenerateFrame);
}

TEST_CASE("horizontal projection") {
    std::mt19937_64 rng(97);
    const SpaceParams params = SpaceParams::make(4, 3, 2);
    for (int trial = 0; trial < 10; ++trial) {
        const SpherePoint x = random_regular_point(params, rng);
        const TangentVector X = random_tangent(x, rng);
        for (ActionGroup g : {ActionGroup::S1, ActionGroup::T2}) {
            const TangentVector h = horizontal_project(params, g, X);
            CHECK(tangent_gap(horizontal_project(params, g, h), h) <= 1e-14);
        }
        const TangentVector s = horizontal_project(params, ActionGroup::S1, X);
        CHECK(std::abs(round_inner(s, s1_vertical(params, x))) <= 1e-14);
        const TangentVector t = horizontal_project(params, ActionGroup::T2, X);
        CHECK(std::abs(round_inner(t, fundamental_vector({1.0, 0.0}, x))) <= 1e-14);
        CHECK(std::abs(round_inner(t, fundamental_vector({0.0, 1.0}, x))) <= 1e-14);
    }
    // v1 = 0: one torus direction vanishes and is skipped
    ComplexVector u = ComplexVector::Zero(3), v(2);
    u(0) = 0.6;
    v << 0.0, 0.8;
    const SpherePoint x = SpherePoint::make(u, v);
    const TangentVector h = horizontal_project(params, ActionGroup::T2, random_tangent(x, rng));
    CHECK(std::isfinite(h.U.norm()));
    CHECK(std::abs(round_inner(h, fundamental_vector({0.0, 1.0}, x))) <= 1e-14);
}
