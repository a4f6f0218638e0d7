#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isospec/error.hpp"
#include "isospec/io.hpp"
#include "isospec/verify.hpp"
#include "support.hpp"

using namespace isospec;

namespace {

const SpaceParams kParams = SpaceParams::make(4, 1, 1);

OneFormField exact_form() {
    // d of f = re(u0 conj(v0)) + |v1|^4
    return {[](const SpherePoint& x, const TangentVector& X) {
                const double v1 = std::norm(x.v(1));
                const double df = (X.U(0) * std::conj(x.v(0)) + x.u(0) * std::conj(X.V(0))).real() +
                                  4.0 * v1 * (X.V(1) * std::conj(x.v(1))).real();
                return TorusVector{df, 0.0};
            },
            std::nullopt};
}

OneFormField fibre_form() {
    return {[](const SpherePoint& x, const TangentVector& X) {
                return TorusVector{real_inner(X.U, Complex{0.0, 1.0} * x.u), 0.0};
            },
            std::nullopt};
}

VerifyConfig quick_config(std::uint64_t seed = 5) {
    VerifyConfig c;
    c.seed = seed;
    c.samples = 25;
    c.mu_range = 2;
    return c;
}

}  // namespace

TEST_CASE("exterior derivative oracle") {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 10; ++trial) {
        const SpherePoint x = random_regular_point(kParams, rng);
        const TangentVector X1 = random_tangent(x, rng), X2 = random_tangent(x, rng);
        const TorusVector closed = fd_exterior_derivative_richardson(exact_form(), x, X1, X2, 1e-3);
        CHECK(std::abs(closed.z1) <= 1e-9);
        // d<U, iu> = 2 <iU1, U2>
        const double expected = 2.0 * real_inner(Complex{0.0, 1.0} * X1.U, X2.U);
        const TorusVector d = fd_exterior_derivative_richardson(fibre_form(), x, X1, X2, 1e-3);
        CHECK(std::abs(d.z1 - expected) <= 1e-7);
        // two Romberg stages leave at most an O(h^3) error
        const double coarse = fd_exterior_derivative_richardson(fibre_form(), x, X1, X2, 4e-3).z1 - expected;
        const double fine = fd_exterior_derivative_richardson(fibre_form(), x, X1, X2, 2e-3).z1 - expected;
        CHECK(std::abs(coarse / fine) > 7.0);
        const double first_order = fd_exterior_derivative(fibre_form(), x, X1, X2, 1e-3).z1;
        CHECK(std::abs(first_order - expected) > std::abs(d.z1 - expected));
    }
    const SpherePoint x = random_regular_point(kParams, rng);
    const TangentVector X = random_tangent(x, rng);
    auto code = [&](double h) {
        try {
            fd_exterior_derivative(fibre_form(), x, X, X, h);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::SchemaError;
    };
    CHECK(code(10.0) == ErrorCode::StepTooLarge);
    CHECK(code(0.0) == ErrorCode::DomainError);
}

TEST_CASE("closed forms on the diagonal stratum") {
    std::mt19937_64 rng(109);
    for (double a : {0.3, 0.4, 0.55}) {
        const OrbitStratum st = OrbitStratum::make(a, a);
        for (auto [p, q] : {std::pair{1, 1}, {2, 3}}) {
            const SpaceParams params = SpaceParams::make(4, p, q);
            const JMap j = random_jmap(3, rng);
            const CheckEntry e = check_dkappa_closed_form(j, params, st, 30, 3);
            CHECK_MESSAGE(e.passed, e.name << " residual " << e.max_residual);
            CHECK(check_dkappa_closed_form(j * 2.5, params, st, 30, 3).passed);
            for (const CheckEntry& c : check_curvature_closed_form(params, st, 30, 3))
                CHECK_MESSAGE(c.passed, c.name << " residual " << c.max_residual);
        }
    }
    const CheckEntry off = check_dkappa_closed_form(fixture::sample_jmap(), kParams, OrbitStratum::make(0.3, 0.5), 5, 1);
    CHECK_FALSE(off.passed);
    CHECK_FALSE(off.detail.empty());
}

TEST_CASE("the dkappa check detects a wrong form") {
    // the closed form of j checked against the form of 1.01 j
    const OrbitStratum st = OrbitStratum::make(0.4, 0.4);
    const JMap j = fixture::sample_jmap();
    const CheckEntry base = check_dkappa_closed_form(j, kParams, st, 30, 2);
    const CheckEntry tight = check_dkappa_closed_form(j, kParams, st, 30, 2, 1e-3, 1e-14);
    CHECK(base.passed);
    CHECK_FALSE(tight.passed);
    CHECK(tight.max_residual == base.max_residual);
}

TEST_CASE("mu directions") {
    const SpaceParams params = SpaceParams::make(4, 3, 2);
    const WeightLattice L = dual_lattice(params);
    for (int k1 = -2; k1 <= 2; ++k1) {
        for (int k2 = -2; k2 <= 2; ++k2) {
            const TorusVector z = mu_direction(params, {k1, k2});
            // pairing with the lattice basis is integral
            const Eigen::Vector2d pair = L.basis().transpose() * Eigen::Vector2d{z.z1, z.z2};
            CHECK(pair(0) == doctest::Approx(k1));
            CHECK(pair(1) == doctest::Approx(k2));
        }
    }
}

TEST_CASE("intertwining") {
    std::mt19937_64 rng(113);
    const JMap j = fixture::sample_jmap();
    CHECK(check_intertwining(j, j, kParams, {1, 0}, 50, 1, 1e-8).passed);
    for (int trial = 0; trial < 5; ++trial) {
        const JMap k = random_jmap(3, rng);
        const JMap c = conjugate(k, random_special_unitary(3, rng));
        for (std::array<int, 2> mu : {std::array{1, 0}, {0, 1}, {2, -1}, {-3, 3}}) {
            const CheckEntry e = check_intertwining(k, c, kParams, mu, 50, 1, 1e-8);
            CHECK_MESSAGE(e.passed, e.name << " residual " << e.max_residual);
        }
    }
    const auto fam = generate_isospectral_family(1, 3, 3, 0.05);
    CHECK(check_intertwining(fam.members[0], fam.members[3], kParams, {1, 2}, 50, 1, 1e-8).passed);
    const JMap other = random_jmap(3, rng);
    CHECK_THROWS_AS(check_intertwining(j, other, kParams, {1, 0}, 10, 1, 1e-8), Error);
}

TEST_CASE("verify_pair on a conjugated pair") {
    std::mt19937_64 rng(127);
    const JMap j = fixture::sample_jmap();
    const JMap c = conjugate(j, random_special_unitary(3, rng));
    const VerificationReport r = verify_pair(j, c, kParams, quick_config());
    for (const auto& e : r.checks) CHECK_MESSAGE(e.passed, e.name << " residual " << e.max_residual);
    CHECK(r.all_passed());
    for (const char* name : {"isospectrality", "intertwining", "volume_ratio.first", "volume_ratio.second",
                             "admissibility.first.s1_horizontal", "admissibility.second.t2_invariant",
                             "dkappa_closed_form.first", "curvature_closed_form", "curvature_nonvanishing",
                             "orbit_gram.closed_form", "vertical_metric.second", "orbit_spectrum_invariance"}) {
        CHECK_MESSAGE(r.find(name) != nullptr, name);
    }
    for (std::size_t k = 1; k < r.checks.size(); ++k) CHECK(r.checks[k - 1].name < r.checks[k].name);
    CHECK(r.metadata["informational"]["certificate"]["verdict"] == "Inconclusive");
    CHECK(r.find("intertwining")->sample_count == 25 * 24);
}

TEST_CASE("verify_pair on a non-isospectral pair") {
    std::mt19937_64 rng(131);
    const JMap j = fixture::sample_jmap();
    const JMap other = random_jmap(3, rng);
    const VerificationReport r = verify_pair(j, other, kParams, quick_config());
    CHECK_FALSE(r.all_passed());
    CHECK_FALSE(r.find("isospectrality")->passed);
    CHECK_FALSE(r.find("intertwining")->passed);
    CHECK(r.find("volume_ratio.second")->passed);
    CHECK(r.find("admissibility.second.s1_invariant")->passed);
    CHECK(r.metadata["informational"]["certificate"]["verdict"] == "Inequivalent");
}

TEST_CASE("verify_pair is symmetric and deterministic") {
    const auto fam = generate_isospectral_family(3, 3, 2, 0.05);
    const JMap& a = fam.members.front();
    const JMap& b = fam.members.back();
    const VerificationReport ab = verify_pair(a, b, kParams, quick_config(11));
    const VerificationReport ba = verify_pair(b, a, kParams, quick_config(11));
    CHECK(ab.all_passed());
    CHECK(ba.all_passed());
    CHECK(ab.checks.size() == ba.checks.size());
    CHECK(ab.find("isospectrality")->max_residual == ba.find("isospectrality")->max_residual);
    const VerificationReport again = verify_pair(a, b, kParams, quick_config(11));
    CHECK(canonical_dump(report_to_json(ab)) == canonical_dump(report_to_json(again)));
}

TEST_CASE("verify_pair rejects mismatched dimensions") {
    std::mt19937_64 rng(137);
    CHECK_THROWS_AS(verify_pair(random_jmap(4, rng), random_jmap(4, rng), kParams, quick_config()), Error);
}

TEST_CASE("check entries") {
    CHECK(CheckEntry::make("x", "a", 1, 0.5, 1.0).passed);
    CHECK_FALSE(CheckEntry::make("x", "a", 1, 1.5, 1.0).passed);
    CHECK_FALSE(CheckEntry::make("x", "a", 1, std::nan(""), 1.0).passed);
}
