// Isospectral continuation for j-maps.
//
// The isospectral set through j0 is cut out by the power sums
//   F_{i,k}(j) = tr((-i j_{Z_i})^k) - tr((-i j0_{Z_i})^k),  k = 2..m,
// over the m+1 sample directions Z_i. Conjugation by SU(m) moves inside this
// set trivially, so the predictor only uses kernel directions of dF that are
// Frobenius-orthogonal to { ([X,j1],[X,j2]) : X in su(m) }.

#include <cmath>
#include <optional>
#include <sstream>

#include "isospec/error.hpp"
#include "isospec/jmap.hpp"

namespace isospec {

namespace {

struct Chart {
    int m;
    int d;  // m^2 - 1
    std::vector<ComplexMatrix> basis;
    std::vector<TorusVector> dirs;

    explicit Chart(int m_) : m(m_), d(m_ * m_ - 1), basis(su_basis(m_)), dirs(sample_directions(m_)) {}

    RealVector coords(const JMap& j) const {
        RealVector x(2 * d);
        x.head(d) = su_coordinates(j.j1());
        x.tail(d) = su_coordinates(j.j2());
        return x;
    }

    JMap jmap(const RealVector& x) const {
        return JMap(su_from_coordinates(m, x.head(d)), su_from_coordinates(m, x.tail(d)));
    }

    Eigen::Index constraint_count() const { return static_cast<Eigen::Index>(dirs.size()) * (m - 1); }

    RealVector power_sums(const JMap& j) const {
        RealVector out(constraint_count());
        Eigen::Index row = 0;
        for (const auto& z : dirs) {
            const ComplexMatrix h = Complex{0.0, -1.0} * evaluate(j, z).matrix();
            ComplexMatrix power = h;
            for (int k = 2; k <= m; ++k) {
                power = power * h;
                out(row++) = power.trace().real();
            }
        }
        return out;
    }

    RealMatrix jacobian(const JMap& j) const {
        RealMatrix jac(constraint_count(), 2 * d);
        Eigen::Index row = 0;
        for (const auto& z : dirs) {
            const ComplexMatrix h = Complex{0.0, -1.0} * evaluate(j, z).matrix();
            ComplexMatrix power = h;  // h^{k-1}
            for (int k = 2; k <= m; ++k) {
                for (int b = 0; b < d; ++b) {
                    const ComplexMatrix dh = Complex{0.0, -1.0} * basis[static_cast<std::size_t>(b)];
                    const double g = k * (power * dh).trace().real();
                    jac(row, b) = z.z1 * g;
                    jac(row, d + b) = z.z2 * g;
                }
                power = power * h;
                ++row;
            }
        }
        return jac;
    }

    /// Orthonormal basis of the conjugation directions at j.
    RealMatrix trivial_directions(const JMap& j, double rank_tol) const {
        RealMatrix t(2 * d, d);
        for (int b = 0; b < d; ++b) {
            const auto& x = basis[static_cast<std::size_t>(b)];
            t.col(b).head(d) = su_coordinates(SuElement::project(commutator(x, j.j1().matrix())));
            t.col(b).tail(d) = su_coordinates(SuElement::project(commutator(x, j.j2().matrix())));
        }
        Eigen::JacobiSVD<RealMatrix> svd(t, Eigen::ComputeThinU);
        const RealVector& sv = svd.singularValues();
        Eigen::Index rank = 0;
        for (Eigen::Index k = 0; k < sv.size(); ++k)
            if (sv(k) > rank_tol * sv(0)) ++rank;
        return svd.matrixU().leftCols(rank);
    }
};

/// Unit kernel direction of dF orthogonal to the conjugation directions, if any.
std::optional<RealVector> nontrivial_direction(const Chart& chart, const RealVector& x,
                                               const ContinuationOptions& opt) {
    const JMap j = chart.jmap(x);
    const RealMatrix jac = chart.jacobian(j);
    Eigen::JacobiSVD<RealMatrix> svd(jac, Eigen::ComputeFullV);
    const RealVector& sv = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > opt.kernel_rank_tol * sv(0)) ++rank;
    const RealMatrix kernel = svd.matrixV().rightCols(x.size() - rank);
    const RealMatrix triv = chart.trivial_directions(j, opt.kernel_rank_tol);
    const RealMatrix residual = kernel - triv * (triv.transpose() * kernel);
    Eigen::JacobiSVD<RealMatrix> rsvd(residual, Eigen::ComputeThinU);
    if (rsvd.singularValues().size() == 0 || rsvd.singularValues()(0) <= opt.nontrivial_threshold) {
        return std::nullopt;
    }
    RealVector dir = rsvd.matrixU().col(0);
    dir -= triv * (triv.transpose() * dir);
    return RealVector(dir.normalized());
}

/// Min-norm Newton iteration back onto F = 0. Returns the final ||F||.
double newton_correct(const Chart& chart, RealVector& x, const RealVector& target, const ContinuationOptions& opt) {
    double norm = (chart.power_sums(chart.jmap(x)) - target).norm();
    const double floor = 1e-13 * std::max(1.0, target.norm());
    for (int it = 0; it < opt.newton_max_iterations && norm > floor; ++it) {
        const JMap j = chart.jmap(x);
        const RealVector f = chart.power_sums(j) - target;
        const RealMatrix jac = chart.jacobian(j);
        Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(jac);
        cod.setThreshold(opt.kernel_rank_tol);
        const RealVector dx = cod.solve(f);
        const RealVector next = x - dx;
        const double next_norm = (chart.power_sums(chart.jmap(next)) - target).norm();
        if (!(next_norm < norm)) break;  // stagnated
        x = next;
        norm = next_norm;
    }
    return norm;
}

JMap structured_seed(int m, std::mt19937_64& rng) {
    // j1 with a repeated eigenvalue, random j2
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double lambda = 1.0 + std::abs(gauss(rng));
    ComplexMatrix d = ComplexMatrix::Zero(m, m);
    for (int k = 0; k + 1 < m; ++k) d(k, k) = Complex{0.0, lambda};
    d(m - 1, m - 1) = Complex{0.0, -lambda * (m - 1)};
    const ComplexMatrix u = random_special_unitary(m, rng);
    return JMap(SuElement::project(u * d * u.adjoint()), random_su(m, rng));
}

/// Attempts one continuation run; nullopt when no nontrivial direction exists.
std::optional<std::vector<JMap>> continue_from(const JMap& start, int steps, double step_size,
                                               const ContinuationOptions& opt) {
    const Chart chart(start.m());
    RealVector x = chart.coords(start);
    const RealVector target = chart.power_sums(start);
    const double h = step_size * x.norm();
    std::vector<JMap> members{start};
    std::optional<RealVector> previous;
    for (int s = 0; s < steps; ++s) {
        auto dir = nontrivial_direction(chart, x, opt);
        if (!dir) return std::nullopt;
        if (previous && dir->dot(*previous) < 0.0) *dir = -*dir;
        x += h * (*dir);
        const double residual = newton_correct(chart, x, target, opt);
        if (!(residual <= opt.newton_tolerance)) {
            std::ostringstream os;
            os << "Newton correction left ||F|| = " << residual << " after " << opt.newton_max_iterations
               << " iterations at step " << s + 1;
            throw Error(ErrorCode::ContinuationDiverged, os.str(), residual);
        }
        previous = dir;
        members.push_back(chart.jmap(x));
    }
    return members;
}

ComplexMatrix exp_skew(const ComplexMatrix& x, double t) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(Complex{0.0, -1.0} * x);
    ComplexVector phases(es.eigenvalues().size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, t * es.eigenvalues()(k));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

JMap family_seed(std::uint64_t seed, int m) {
    std::mt19937_64 rng(seed);
    return random_jmap(m, rng);
}

IsospectralFamily conjugation_orbit_family(const JMap& j, std::uint64_t seed, int steps, double step_size) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const SuElement x = random_su(j.m(), rng);
    const ComplexMatrix gen = x.matrix() / x.matrix().norm();
    IsospectralFamily fam;
    fam.trivial = true;
    for (int k = 0; k <= steps; ++k) {
        fam.members.push_back(k == 0 ? j : conjugate(j, exp_skew(gen, k * step_size)));
    }
    return fam;
}

IsospectralFamily generate_isospectral_family(std::uint64_t seed, int m, int steps, double step_size,
                                              const ContinuationOptions& options) {
    if (m < 3) throw Error(ErrorCode::InvalidParams, "m must be >= 3");
    if (steps < 0) throw Error(ErrorCode::InvalidParams, "steps must be >= 0");
    if (!(step_size > 0.0)) throw Error(ErrorCode::InvalidParams, "step_size must be > 0");

    const JMap start = family_seed(seed, m);
    IsospectralFamily fam;
    if (steps == 0) {
        fam.members.push_back(start);
        return fam;
    }

    std::mt19937_64 rng(seed + 1);
    JMap current = start;
    for (int attempt = 0; attempt <= options.retry_budget; ++attempt) {
        if (auto members = continue_from(current, steps, step_size, options)) {
            fam.members = std::move(*members);
            fam.restarts = attempt;
            bool certified = false;
            for (std::size_t k = 1; k < fam.members.size(); ++k) {
                if (non_equivalence_certificate(fam.members.front(), fam.members[k]).inequivalent) {
                    certified = true;
                    break;
                }
            }
            if (!certified) {
                fam.warnings.emplace_back(
                    "continuation family has no certified inequivalent pair; all certificates Inconclusive");
            }
            return fam;
        }
        current = structured_seed(m, rng);
    }

    IsospectralFamily fallback = conjugation_orbit_family(start, seed, steps, step_size);
    fallback.restarts = options.retry_budget + 1;
    fallback.warnings.emplace_back("no nontrivial isospectral direction found; returned a conjugation orbit");
    return fallback;
}

}  // namespace isospec
