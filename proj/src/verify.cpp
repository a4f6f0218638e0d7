#include "isospec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "isospec/error.hpp"

#ifndef ISOSPEC_VERSION
#define ISOSPEC_VERSION "0.0.0"
#endif

namespace isospec {

namespace {

/// Residual recorded for a check that could not be evaluated.
constexpr double kUnevaluated = std::numeric_limits<double>::max();

// 5-point Gauss-Legendre on [-1, 1]
constexpr std::array<double, 5> kNodes{-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                       0.9061798459386640};
constexpr std::array<double, 5> kWeights{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                         0.4786286704993665, 0.2369268850561891};

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
    return std::mt19937_64(seq);
}

double worst(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
    return std::max(a, b);
}

double max_abs(TorusVector z) { return std::max(std::abs(z.z1), std::abs(z.z2)); }

/// Point of the integration surface and its pushed-forward tangent vectors.
struct SurfacePoint {
    SpherePoint point;
    TangentVector d1;
    TangentVector d2;
};

class Surface {
public:
    Surface(const OneFormField& form, const SpherePoint& x, const TangentVector& X1, const TangentVector& X2)
        : restriction_(form.domain_restriction), x_(x), X1_(X1), X2_(X2) {}

    SurfacePoint at(double t1, double t2) const {
        const ComplexVector yu = x_.u + t1 * X1_.U + t2 * X2_.U;
        const ComplexVector yv = x_.v + t1 * X1_.V + t2 * X2_.V;
        return restriction_ ? restricted(yu, yv) : spherical(yu, yv);
    }

private:
    SurfacePoint spherical(const ComplexVector& yu, const ComplexVector& yv) const {
        const double r = std::sqrt(yu.squaredNorm() + yv.squaredNorm());
        SpherePoint s{yu / r, yv / r};
        if (!s.is_regular(1e-8)) throw Error(ErrorCode::StepTooLarge, "integration surface leaves the regular set");
        auto push = [&](const TangentVector& X) {
            const double radial = real_inner(X.U, s.u) + real_inner(X.V, s.v);
            return TangentVector{s, (X.U - radial * s.u) / r, (X.V - radial * s.v) / r};
        };
        TangentVector d1 = push(X1_);
        TangentVector d2 = push(X2_);
        return {std::move(s), std::move(d1), std::move(d2)};
    }

    SurfacePoint restricted(const ComplexVector& yu, const ComplexVector& yv) const {
        const OrbitStratum& st = *restriction_;
        const double ru = yu.norm();
        const std::array<double, 2> radii{st.a, st.b};
        const std::array<double, 2> rv{std::abs(yv(0)), std::abs(yv(1))};
        if (ru < 1e-8 || rv[0] < 1e-8 || rv[1] < 1e-8) {
            throw Error(ErrorCode::StepTooLarge, "integration surface leaves the regular set");
        }
        SpherePoint s{(st.c / ru) * yu, ComplexVector(2)};
        for (Eigen::Index k = 0; k < 2; ++k) s.v(k) = (radii[static_cast<std::size_t>(k)] / rv[static_cast<std::size_t>(k)]) * yv(k);
        const ComplexVector uhat = yu / ru;
        auto push = [&](const TangentVector& X) {
            TangentVector out{s, (st.c / ru) * (X.U - real_inner(X.U, uhat) * uhat), ComplexVector(2)};
            for (Eigen::Index k = 0; k < 2; ++k) {
                const auto kk = static_cast<std::size_t>(k);
                const Complex vhat = yv(k) / rv[kk];
                const double along = (X.V(k) * std::conj(vhat)).real();
                out.V(k) = (radii[kk] / rv[kk]) * (X.V(k) - along * vhat);
            }
            return out;
        };
        TangentVector d1 = push(X1_);
        TangentVector d2 = push(X2_);
        return {std::move(s), std::move(d1), std::move(d2)};
    }

    std::optional<OrbitStratum> restriction_;
    const SpherePoint& x_;
    const TangentVector& X1_;
    const TangentVector& X2_;
};

/// Random point of P^-1(O_{a,b}) and a unit tangent vector to it.
SpherePoint random_stratum_point(const SpaceParams& params, const OrbitStratum& st, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    ComplexVector u(params.n - 1);
    for (Eigen::Index k = 0; k < u.size(); ++k) u(k) = Complex{gauss(rng), gauss(rng)};
    u *= st.c / u.norm();
    ComplexVector v(2);
    v(0) = std::polar(st.a, angle(rng));
    v(1) = std::polar(st.b, angle(rng));
    return SpherePoint{std::move(u), std::move(v)};
}

TangentVector random_stratum_tangent(const SpherePoint& x, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexVector U(x.u.size());
    for (Eigen::Index k = 0; k < U.size(); ++k) U(k) = Complex{gauss(rng), gauss(rng)};
    U -= (real_inner(U, x.u) / x.u.squaredNorm()) * x.u;
    ComplexVector V(2);
    for (Eigen::Index k = 0; k < 2; ++k) V(k) = Complex{0.0, gauss(rng)} * x.v(k);
    TangentVector X{x, std::move(U), std::move(V)};
    return X * (1.0 / std::sqrt(round_inner(X, X)));
}

std::vector<TangentVector> random_orthonormal_frame(const SpherePoint& x, int size, std::mt19937_64& rng) {
    std::vector<TangentVector> frame;
    while (static_cast<int>(frame.size()) < size) {
        TangentVector t = random_tangent(x, rng);
        for (const auto& e : frame) t = t - e * round_inner(t, e);
        const double norm = std::sqrt(round_inner(t, t));
        if (norm > 1e-6) frame.push_back(t * (1.0 / norm));
    }
    return frame;
}

CheckEntry unevaluated(const std::string& name, const std::string& anchor, double tol, const std::exception& e) {
    return CheckEntry::make(name, anchor, 0, kUnevaluated, tol, e.what());
}

}  // namespace

CheckEntry CheckEntry::make(std::string name, std::string anchor, long samples, double residual, double tolerance,
                            std::string detail) {
    CheckEntry e;
    e.name = std::move(name);
    e.anchor = std::move(anchor);
    e.sample_count = samples;
    e.max_residual = residual;
    e.tolerance = tolerance;
    e.passed = residual <= tolerance;
    e.detail = std::move(detail);
    return e;
}

std::vector<CheckEntry> check_admissibility(const JMap& j, const SpaceParams& params, int samples, std::uint64_t seed,
                                            double tol, const std::string& label) {
    std::vector<CheckEntry> out;
    auto rng = stream(seed, 0xad00 + (label == "first" ? 1 : 2));
    std::normal_distribution<double> gauss(0.0, 1.0);
    double t2h = 0.0, t2i = 0.0, s1h = 0.0, s1i = 0.0;
    for (int s = 0; s < samples; ++s) {
        const SpherePoint x = random_regular_point(params, rng);
        const TangentVector X = random_tangent(x, rng);
        const TorusVector base = kappa_eval(j, x, X);
        const TorusVector z{gauss(rng), gauss(rng)};
        t2h = worst(t2h, max_abs(kappa_eval(j, x, fundamental_vector(z, x))));
        const Complex s1 = random_unit_scalar(rng);
        const Complex s2 = random_unit_scalar(rng);
        const TangentVector tx = t2_push(s1, s2, X);
        t2i = worst(t2i, max_abs(kappa_eval(j, tx.base, tx) - base));
        s1h = worst(s1h, max_abs(kappa_eval(j, x, s1_vertical(params, x))));
        const TangentVector sx = s1_push(params, random_unit_scalar(rng), X);
        s1i = worst(s1i, max_abs(kappa_eval(j, sx.base, sx) - base));
    }
    const std::string prefix = "admissibility." + label + ".";
    out.push_back(CheckEntry::make(prefix + "t2_horizontal", "kappa vanishes on torus fundamental vectors", samples,
                                   t2h, tol));
    out.push_back(CheckEntry::make(prefix + "t2_invariant", "kappa is torus invariant", samples, t2i, tol));
    out.push_back(CheckEntry::make(prefix + "s1_horizontal", "kappa vanishes on the circle fibre", samples, s1h, tol));
    out.push_back(CheckEntry::make(prefix + "s1_invariant", "kappa is circle invariant", samples, s1i, tol));
    return out;
}

CheckEntry check_volume_ratio(const JMap& j, const SpaceParams& params, int samples, std::uint64_t seed, double tol,
                              const std::string& label) {
    auto rng = stream(seed, 0xb000 + (label == "first" ? 1 : 2));
    double res = 0.0;
    for (int s = 0; s < samples; ++s) {
        const SpherePoint x = random_regular_point(params, rng);
        const auto frame = random_orthonormal_frame(x, 2 * params.n + 1, rng);
        res = worst(res, std::abs(volume_density_ratio(params, j, x, frame) - 1.0));
    }
    return CheckEntry::make("volume_ratio." + label, "h_kappa and h0 share the volume form", samples, res, tol);
}

bool VerificationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckEntry& e) { return e.passed; });
}

const CheckEntry* VerificationReport::find(const std::string& name) const {
    for (const auto& e : checks)
        if (e.name == name) return &e;
    return nullptr;
}

TorusVector fd_exterior_derivative(const OneFormField& form, const SpherePoint& x, const TangentVector& X1,
                                   const TangentVector& X2, double h) {
    if (!(h > 0.0)) throw Error(ErrorCode::DomainError, "fd_exterior_derivative: h must be > 0");
    const double reach = h * (std::sqrt(round_inner(X1, X1)) + std::sqrt(round_inner(X2, X2)));
    if (reach > 0.5) {
        std::ostringstream os;
        os << "fd_exterior_derivative: h (|X1| + |X2|) = " << reach << " exceeds 0.5";
        throw Error(ErrorCode::StepTooLarge, os.str(), reach);
    }
    const Surface surf(form, x, X1, X2);
    TorusVector circulation{};
    for (std::size_t k = 0; k < kNodes.size(); ++k) {
        const double t = 0.5 * h * (1.0 + kNodes[k]);
        const double w = 0.5 * h * kWeights[k];
        const SurfacePoint bottom = surf.at(t, 0.0);
        const SurfacePoint right = surf.at(h, t);
        const SurfacePoint top = surf.at(t, h);
        const SurfacePoint left = surf.at(0.0, t);
        const TorusVector edge = form.evaluator(bottom.point, bottom.d1) + form.evaluator(right.point, right.d2) -
                                 form.evaluator(top.point, top.d1) - form.evaluator(left.point, left.d2);
        circulation = circulation + edge * w;
    }
    return circulation * (1.0 / (h * h));
}

TorusVector fd_exterior_derivative_richardson(const OneFormField& form, const SpherePoint& x,
                                              const TangentVector& X1, const TangentVector& X2, double h,
                                              int stages) {
    if (stages < 1 || stages > 4) throw Error(ErrorCode::DomainError, "Richardson stages must be in 1..4");
    std::vector<TorusVector> row;
    for (int k = 0; k <= stages; ++k) row.push_back(fd_exterior_derivative(form, x, X1, X2, std::ldexp(h, -k)));
    for (int s = 1; s <= stages; ++s) {
        const double gain = std::ldexp(1.0, s);
        for (std::size_t k = 0; k + 1 < row.size(); ++k) {
            row[k] = (row[k + 1] * gain - row[k]) * (1.0 / (gain - 1.0));
        }
        row.pop_back();
    }
    return row.front();
}

TangentVector fd_fundamental_vector(const SpherePoint& x, int k, double eps) {
    auto central = [&](double e) {
        const Complex plus = std::polar(1.0, e);
        const Complex minus = std::polar(1.0, -e);
        const SpherePoint a = k == 0 ? t2_act(plus, 1.0, x) : t2_act(1.0, plus, x);
        const SpherePoint b = k == 0 ? t2_act(minus, 1.0, x) : t2_act(1.0, minus, x);
        return std::pair<ComplexVector, ComplexVector>{(a.u - b.u) / (2.0 * e), (a.v - b.v) / (2.0 * e)};
    };
    const auto [u1, v1] = central(eps);
    const auto [u2, v2] = central(0.5 * eps);
    return TangentVector{x, (4.0 * u2 - u1) / 3.0, (4.0 * v2 - v1) / 3.0};
}

Eigen::Matrix2d fd_orbit_gram(const SpaceParams& params, const SpherePoint& x, double eps) {
    std::array<TangentVector, 2> f{horizontal_project(params, ActionGroup::S1, fd_fundamental_vector(x, 0, eps)),
                                   horizontal_project(params, ActionGroup::S1, fd_fundamental_vector(x, 1, eps))};
    Eigen::Matrix2d g;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) g(a, b) = round_inner(f[static_cast<std::size_t>(a)], f[static_cast<std::size_t>(b)]);
    return g;
}

Eigen::Matrix2d quotient_orbit_gram(const SpaceParams& params, const MetricSpec& metric, const SpherePoint& x) {
    const TangentVector w = s1_vertical(params, x);
    const double ww = metric_eval(params, metric, w, w);
    std::array<TangentVector, 2> f{fundamental_vector({1.0, 0.0}, x), fundamental_vector({0.0, 1.0}, x)};
    for (auto& v : f) v = v - w * (metric_eval(params, metric, v, w) / ww);
    Eigen::Matrix2d g;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            g(a, b) = metric_eval(params, metric, f[static_cast<std::size_t>(a)], f[static_cast<std::size_t>(b)]);
    return g;
}

CheckEntry check_dkappa_closed_form(const JMap& j, const SpaceParams& params, const OrbitStratum& stratum,
                                    int samples, std::uint64_t seed, double h, double tol) {
    const std::string name = "dkappa_closed_form";
    const std::string anchor = "exterior derivative of kappa on the diagonal stratum";
    try {
        if (std::abs(stratum.a - stratum.b) > 1e-15) {
            throw Error(ErrorCode::DomainError, "closed form needs a stratum with a = b");
        }
        if (j.m() != params.m()) throw Error(ErrorCode::DimensionMismatch, "j.m() must equal n - 1");
        auto rng = stream(seed, 0xdc00);
        const OneFormField form{[&j](const SpherePoint& p, const TangentVector& X) { return kappa_eval(j, p, X); },
                                stratum};
        const double c2 = stratum.c * stratum.c;
        const Complex i{0.0, 1.0};
        double res = 0.0;
        for (int s = 0; s < samples; ++s) {
            const SpherePoint x = random_stratum_point(params, stratum, rng);
            const TangentVector X1 = random_stratum_tangent(x, rng);
            const TangentVector X2 = random_stratum_tangent(x, rng);
            const TorusVector fd = fd_exterior_derivative_richardson(form, x, X1, X2, h);
            const ComplexVector iu = i * x.u;
            const ComplexVector h1 = X1.U - (real_inner(X1.U, iu) / c2) * iu;
            const ComplexVector h2 = X2.U - (real_inner(X2.U, iu) / c2) * iu;
            const double twist = real_inner(i * X1.U, X2.U);
            auto closed = [&](const ComplexMatrix& jk) {
                return 2.0 * c2 * real_inner(jk * h1, h2) - 2.0 * real_inner(jk * x.u, iu) * twist;
            };
            const TorusVector expected{closed(j.j1().matrix()), closed(j.j2().matrix())};
            res = worst(res, max_abs(fd - expected));
        }
        return CheckEntry::make(name, anchor, samples, res, tol);
    } catch (const std::exception& e) {
        return unevaluated(name, anchor, tol, e);
    }
}

std::vector<CheckEntry> check_curvature_closed_form(const SpaceParams& params, const OrbitStratum& stratum,
                                                    int samples, std::uint64_t seed, double h, double tol,
                                                    double component_tol) {
    const std::string anchor = "restricted curvature is a multiple of the Kaehler form";
    constexpr double kNonvanishing = 1e-3;
    try {
        if (std::abs(stratum.a - stratum.b) > 1e-15) {
            throw Error(ErrorCode::DomainError, "closed form needs a stratum with a = b");
        }
        auto rng = stream(seed, 0xcc00);
        const OneFormField form{
            [&params](const SpherePoint& p, const TangentVector& X) { return connection_form_eval(params, p, X); },
            stratum};
        const double c2 = stratum.c * stratum.c;
        const double factor = -2.0 * params.q / (params.p * c2);
        const Complex i{0.0, 1.0};
        double res = 0.0, split = 0.0, largest = 0.0;
        for (int s = 0; s < samples; ++s) {
            const SpherePoint x = random_stratum_point(params, stratum, rng);
            const TangentVector X1 = random_stratum_tangent(x, rng);
            const TangentVector X2 = random_stratum_tangent(x, rng);
            const TorusVector fd = fd_exterior_derivative_richardson(form, x, X1, X2, h);
            const double expected = factor * real_inner(i * X1.U, X2.U);
            res = worst(res, std::max(std::abs(fd.z1 - expected), std::abs(fd.z2 - expected)));
            split = worst(split, std::abs(fd.z1 - fd.z2));
            largest = std::max(largest, max_abs(fd));
        }
        std::ostringstream detail;
        detail << "max |value| = " << largest << ", threshold " << kNonvanishing;
        return {CheckEntry::make("curvature_closed_form", anchor, samples, res, tol),
                CheckEntry::make("curvature_component_equality", anchor, samples, split, component_tol),
                CheckEntry::make("curvature_nonvanishing", anchor, samples,
                                 largest > 0.0 ? kNonvanishing / largest : kUnevaluated, 1.0, detail.str())};
    } catch (const std::exception& e) {
        return {unevaluated("curvature_closed_form", anchor, tol, e),
                unevaluated("curvature_component_equality", anchor, component_tol, e),
                unevaluated("curvature_nonvanishing", anchor, 1.0, e)};
    }
}

TorusVector mu_direction(const SpaceParams& params, std::array<int, 2> k) {
    const Eigen::Matrix2d dual = dual_lattice(params).dual_basis();
    const Eigen::Vector2d z = dual * Eigen::Vector2d{static_cast<double>(k[0]), static_cast<double>(k[1])};
    return {z(0), z(1)};
}

CheckEntry check_intertwining(const JMap& j, const JMap& j2, const SpaceParams& params, std::array<int, 2> mu,
                              int samples, std::uint64_t seed, double tol) {
    const TorusVector z = mu_direction(params, mu);
    const TorusVector nudge{0.6e-4, 0.8e-4};
    ComplexMatrix a;
    int retries = 0;
    for (;; ++retries) {
        try {
            a = find_intertwiner(j, j2, z + nudge * retries, tol);
            break;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateAlignmentFailed || retries == 3) throw;
        }
    }
    auto rng = stream(seed, 0x1700 + static_cast<std::uint64_t>((mu[0] + 64) * 256 + (mu[1] + 64)));
    double res = 0.0;
    for (int s = 0; s < samples; ++s) {
        const SpherePoint x = random_sphere_point(params, rng);
        const TangentVector X = random_tangent(x, rng);
        const SpherePoint ex{a * x.u, x.v};
        const TangentVector eX{ex, a * X.U, X.V};
        res = worst(res, std::abs(z.dot(kappa_eval(j, x, X)) - z.dot(kappa_eval(j2, ex, eX))));
    }
    std::ostringstream name;
    name << "intertwining(" << mu[0] << "," << mu[1] << ")";
    std::string detail;
    if (retries > 0) detail = "Z perturbed " + std::to_string(retries) + " time(s) after a degenerate alignment";
    return CheckEntry::make(name.str(), "mu o kappa = E_mu^*(mu o kappa')", samples, res, tol, detail);
}

VerificationReport verify_pair(const JMap& j, const JMap& j2, const SpaceParams& params, const VerifyConfig& config) {
    if (j.m() != params.m() || j2.m() != params.m()) {
        throw Error(ErrorCode::DimensionMismatch, "verify_pair: both maps need m = n - 1");
    }
    const Tolerances& tol = config.tol;
    const int samples = config.samples;
    VerificationReport report;
    auto& checks = report.checks;

    const double deviation = isospectral_deviation(j, j2);
    checks.push_back(CheckEntry::make("isospectrality", "j_Z and j'_Z are conjugate for every Z", params.m() + 1,
                                      deviation, tol.isospectral));

    const std::array<std::pair<const JMap*, std::string>, 2> maps{std::pair{&j, std::string("first")},
                                                                  std::pair{&j2, std::string("second")}};
    for (const auto& [map, label] : maps) {
        for (auto& e : check_admissibility(*map, params, samples, config.seed, tol.admissibility, label))
            checks.push_back(std::move(e));
        try {
            checks.push_back(check_volume_ratio(*map, params, samples, config.seed, tol.volume, label));
        } catch (const std::exception& e) {
            checks.push_back(unevaluated("volume_ratio." + label, "h_kappa and h0 share the volume form", tol.volume, e));
        }
    }

    // intertwining over the mu window, aggregated into one entry
    {
        const std::string anchor = "mu o kappa = E_mu^*(mu o kappa')";
        double res = 0.0;
        long count = 0;
        std::vector<std::string> notes;
        for (int k1 = -config.mu_range; k1 <= config.mu_range; ++k1) {
            for (int k2 = -config.mu_range; k2 <= config.mu_range; ++k2) {
                if (k1 == 0 && k2 == 0) continue;
                try {
                    const CheckEntry e = check_intertwining(j, j2, params, {k1, k2}, samples, config.seed,
                                                            tol.intertwining);
                    res = worst(res, e.max_residual);
                    count += e.sample_count;
                    if (!e.detail.empty()) notes.push_back(e.name + ": " + e.detail);
                } catch (const Error& err) {
                    res = kUnevaluated;
                    std::ostringstream os;
                    os << "intertwining(" << k1 << "," << k2 << "): " << err.what();
                    notes.push_back(os.str());
                }
            }
        }
        std::string detail;
        for (std::size_t k = 0; k < notes.size() && k < 8; ++k) detail += (k ? "; " : "") + notes[k];
        if (notes.size() > 8) detail += "; ... (" + std::to_string(notes.size()) + " notes)";
        checks.push_back(CheckEntry::make("intertwining", anchor, count, res, tol.intertwining, detail));
    }

    // closed-form orbit Gram and invariance of the vertical metric
    {
        auto rng = stream(config.seed, 0x6a00);
        double closed = 0.0, first = 0.0, second = 0.0, spectra = 0.0;
        const WeightLattice lattice = dual_lattice(params);
        const int spectral_samples = std::min(samples, 20);
        for (int s = 0; s < samples; ++s) {
            const SpherePoint x = random_regular_point(params, rng);
            const Eigen::Matrix2d g0 = quotient_orbit_gram(params, H0Metric{}, x);
            const Eigen::Matrix2d g1 = quotient_orbit_gram(params, HKappaMetric{j}, x);
            const Eigen::Matrix2d g2 = quotient_orbit_gram(params, HKappaMetric{j2}, x);
            closed = worst(closed, (g0 - orbit_gram(params, x).G).cwiseAbs().maxCoeff());
            first = worst(first, (g1 - g0).cwiseAbs().maxCoeff());
            second = worst(second, (g2 - g0).cwiseAbs().maxCoeff());
            if (s < spectral_samples) {
                const auto s0 = flat_torus_spectrum(OrbitGram{g0}, lattice, config.spectrum_cutoff);
                for (const auto& g : {g1, g2}) {
                    const auto sk = flat_torus_spectrum(OrbitGram{g}, lattice, config.spectrum_cutoff);
                    if (sk.size() != s0.size()) {
                        spectra = kUnevaluated;
                        continue;
                    }
                    for (std::size_t k = 0; k < sk.size(); ++k) spectra = worst(spectra, std::abs(sk[k] - s0[k]));
                }
            }
        }
        checks.push_back(CheckEntry::make("orbit_gram.closed_form", "torus orbit Gram matrix", samples, closed,
                                          tol.vertical_metric));
        checks.push_back(CheckEntry::make("vertical_metric.first", "h_kappa restricts to h0 on verticals", samples,
                                          first, tol.vertical_metric));
        checks.push_back(CheckEntry::make("vertical_metric.second", "h_kappa restricts to h0 on verticals", samples,
                                          second, tol.vertical_metric));
        checks.push_back(CheckEntry::make("orbit_spectrum_invariance", "flat torus orbit spectra", spectral_samples,
                                          spectra, tol.vertical_metric));
    }

    // differential closed forms on the diagonal stratum
    try {
        const OrbitStratum st = OrbitStratum::make(config.stratum_a, config.stratum_a);
        for (const auto& [map, label] : maps) {
            CheckEntry e = check_dkappa_closed_form(*map, params, st, samples, config.seed + (label == "first" ? 0 : 1),
                                                    config.fd_step, tol.closed_form);
            e.name += "." + label;
            checks.push_back(std::move(e));
        }
        for (auto& e : check_curvature_closed_form(params, st, samples, config.seed, config.fd_step, tol.closed_form,
                                                   tol.component_equality))
            checks.push_back(std::move(e));
    } catch (const std::exception& e) {
        checks.push_back(unevaluated("dkappa_closed_form", "exterior derivative of kappa", tol.closed_form, e));
    }

    std::sort(checks.begin(), checks.end(),
              [](const CheckEntry& a, const CheckEntry& b) { return a.name < b.name; });

    nlohmann::json info;
    info["generic_first"] = is_generic(j);
    info["generic_second"] = is_generic(j2);
    const NonEquivalenceCertificate cert = non_equivalence_certificate(j, j2);
    nlohmann::json c;
    c["verdict"] = cert.inequivalent ? "Inequivalent" : "Inconclusive";
    c["gap"] = cert.gap;
    if (cert.inequivalent) {
        c["invariant"] = cert.invariant;
        c["value_first"] = {cert.value_first.real(), cert.value_first.imag()};
        c["value_second"] = {cert.value_second.real(), cert.value_second.imag()};
    }
    info["certificate"] = c;

    auto& meta = report.metadata;
    meta["params"] = {{"n", params.n}, {"p", params.p}, {"q", params.q}};
    meta["seed"] = config.seed;
    meta["samples"] = config.samples;
    meta["mu_range"] = config.mu_range;
    meta["stratum_a"] = config.stratum_a;
    meta["fd_step"] = config.fd_step;
    meta["spectrum_cutoff"] = config.spectrum_cutoff;
    meta["tolerances"] = {{"isospectral", tol.isospectral},
                          {"admissibility", tol.admissibility},
                          {"volume", tol.volume},
                          {"intertwining", tol.intertwining},
                          {"vertical_metric", tol.vertical_metric},
                          {"closed_form", tol.closed_form},
                          {"component_equality", tol.component_equality}};
    meta["tool_version"] = ISOSPEC_VERSION;
    meta["informational"] = info;
    return report;
}

}  // namespace isospec
