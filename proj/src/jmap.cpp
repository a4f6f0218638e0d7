#include "isospec/jmap.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

#include "isospec/error.hpp"

namespace isospec {

namespace {

void require_same_dim(const JMap& a, const JMap& b, const char* what) {
    if (a.m() != b.m()) {
        std::ostringstream os;
        os << what << ": dimensions differ (" << a.m() << " vs " << b.m() << ")";
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
}

struct Word {
    std::string name;
    std::vector<int> letters;
};

const std::vector<Word>& word_list() {
    static const std::vector<Word> words = [] {
        std::vector<Word> out;
        for (int len = 1; len <= 4; ++len) {
            for (int code = 0; code < (1 << len); ++code) {
                Word w;
                for (int pos = len - 1; pos >= 0; --pos) {
                    const int letter = (code >> pos) & 1;
                    w.letters.push_back(letter);
                    w.name.push_back(static_cast<char>('1' + letter));
                }
                out.push_back(std::move(w));
            }
        }
        return out;
    }();
    return words;
}

double round_for_comparison(double x) {
    const double r = std::round(x / kInvariantRounding) * kInvariantRounding;
    return r + 0.0;  // folds -0 into +0
}

bool lex_less(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double ar = round_for_comparison(a[k].real());
        const double br = round_for_comparison(b[k].real());
        if (ar != br) return ar < br;
        const double ai = round_for_comparison(a[k].imag());
        const double bi = round_for_comparison(b[k].imag());
        if (ai != bi) return ai < bi;
    }
    return false;
}

/// Images of j under every signed swap, with and without conjugation.
std::vector<JMap> symmetry_images(const JMap& j) {
    std::vector<JMap> images;
    for (const auto& psi : dihedral_group()) {
        JMap moved = precompose(j, psi);
        images.push_back(moved);
        images.push_back(complex_conjugate(moved));
    }
    return images;
}

}  // namespace

JMap::JMap(SuElement j1, SuElement j2) : j1_(std::move(j1)), j2_(std::move(j2)) {
    if (j1_.dim() != j2_.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "JMap: components differ in dimension");
    }
    if (j1_.dim() < 3) {
        throw Error(ErrorCode::DimensionMismatch, "JMap: m must be >= 3");
    }
}

SuElement evaluate(const JMap& j, TorusVector z) {
    return SuElement::project(z.z1 * j.j1().matrix() + z.z2 * j.j2().matrix());
}

JMap conjugate(const JMap& j, const ComplexMatrix& a) {
    const ComplexMatrix ainv = a.adjoint();
    return JMap(SuElement::project(a * j.j1().matrix() * ainv), SuElement::project(a * j.j2().matrix() * ainv));
}

JMap random_jmap(int m, std::mt19937_64& rng) {
    SuElement a = random_su(m, rng);
    SuElement b = random_su(m, rng);
    return JMap(std::move(a), std::move(b));
}

std::vector<TorusVector> sample_directions(int m) {
    std::vector<TorusVector> dirs;
    dirs.reserve(static_cast<std::size_t>(m + 1));
    for (int i = 0; i <= m; ++i) {
        const double theta = i * std::numbers::pi / (m + 2);
        dirs.push_back({std::cos(theta), std::sin(theta)});
    }
    return dirs;
}

double isospectral_deviation(const JMap& j, const JMap& other) {
    require_same_dim(j, other, "isospectral_deviation");
    double worst = 0.0;
    for (const auto& z : sample_directions(j.m())) {
        const RealVector a = sorted_eigenvalues(evaluate(j, z));
        const RealVector b = sorted_eigenvalues(evaluate(other, z));
        worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
    }
    return worst;
}

bool is_isospectral_pair(const JMap& j, const JMap& other, double tol) {
    return isospectral_deviation(j, other) <= tol;
}

bool is_generic(const JMap& j, double rank_tol) {
    const std::array<SuElement, 2> gens{j.j1(), j.j2()};
    return commutant_dimension(gens, rank_tol) == 0;
}

double trace_invariant(const JMap& j) {
    const ComplexMatrix& a = j.j1().matrix();
    const ComplexMatrix& b = j.j2().matrix();
    const ComplexMatrix s = a * a + b * b;
    const Complex t = (s * s).trace();
    if (std::abs(t.imag()) > 1e-10) {
        std::ostringstream os;
        os << "trace_invariant: imaginary residual " << t.imag();
        throw Error(ErrorCode::NonRealResult, os.str(), std::abs(t.imag()));
    }
    return t.real();
}

TorusVector DihedralSymmetry::apply(TorusVector z) const {
    // Z = z1 Z1 + z2 Z2 -> z1 sign0 Z_{index0} + z2 sign1 Z_{index1}
    std::array<double, 2> out{0.0, 0.0};
    out[static_cast<std::size_t>(index[0])] += sign[0] * z.z1;
    out[static_cast<std::size_t>(index[1])] += sign[1] * z.z2;
    return {out[0], out[1]};
}

DihedralSymmetry DihedralSymmetry::compose(const DihedralSymmetry& other) const {
    DihedralSymmetry r;
    for (std::size_t k = 0; k < 2; ++k) {
        const auto mid = static_cast<std::size_t>(other.index[k]);
        r.index[k] = index[mid];
        r.sign[k] = other.sign[k] * sign[mid];
    }
    return r;
}

DihedralSymmetry DihedralSymmetry::inverse() const {
    DihedralSymmetry r;
    for (std::size_t k = 0; k < 2; ++k) {
        const auto target = static_cast<std::size_t>(index[k]);
        r.index[target] = static_cast<int>(k);
        r.sign[target] = sign[k];
    }
    return r;
}

std::vector<DihedralSymmetry> dihedral_group() {
    std::vector<DihedralSymmetry> group;
    for (const auto& idx : {std::array<int, 2>{0, 1}, std::array<int, 2>{1, 0}}) {
        for (int s0 : {1, -1}) {
            for (int s1 : {1, -1}) group.push_back({idx, {s0, s1}});
        }
    }
    return group;
}

JMap precompose(const JMap& j, const DihedralSymmetry& psi) {
    const TorusVector e1 = psi.apply({1.0, 0.0});
    const TorusVector e2 = psi.apply({0.0, 1.0});
    return JMap(evaluate(j, e1), evaluate(j, e2));
}

JMap complex_conjugate(const JMap& j) {
    return JMap(SuElement::project(j.j1().matrix().conjugate()), SuElement::project(j.j2().matrix().conjugate()));
}

EquivalenceInvariants word_traces(const JMap& j) {
    const std::array<const ComplexMatrix*, 2> letters{&j.j1().matrix(), &j.j2().matrix()};
    EquivalenceInvariants inv;
    const auto& words = word_list();
    inv.names.reserve(words.size() + 1);
    inv.values.reserve(words.size() + 1);
    inv.names.emplace_back("tr((j1^2+j2^2)^2)");
    {
        const ComplexMatrix s = (*letters[0]) * (*letters[0]) + (*letters[1]) * (*letters[1]);
        inv.values.push_back((s * s).trace());
    }
    const int m = j.m();
    for (const auto& w : words) {
        ComplexMatrix prod = ComplexMatrix::Identity(m, m);
        for (int letter : w.letters) prod = prod * (*letters[static_cast<std::size_t>(letter)]);
        inv.names.push_back("tr(" + w.name + ")");
        inv.values.push_back(prod.trace());
    }
    return inv;
}

EquivalenceInvariants equivalence_invariants(const JMap& j) {
    EquivalenceInvariants best;
    bool first = true;
    for (const auto& image : symmetry_images(j)) {
        EquivalenceInvariants cand = word_traces(image);
        if (first || lex_less(cand.values, best.values)) {
            best = std::move(cand);
            first = false;
        }
    }
    return best;
}

NonEquivalenceCertificate non_equivalence_certificate(const JMap& j, const JMap& other) {
    require_same_dim(j, other, "non_equivalence_certificate");
    const auto reference = word_traces(j).values;
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& image : symmetry_images(other)) {
        const auto vals = word_traces(image).values;
        double dev = 0.0;
        for (std::size_t k = 0; k < vals.size(); ++k) dev = std::max(dev, std::abs(vals[k] - reference[k]));
        gap = std::min(gap, dev);
    }
    NonEquivalenceCertificate cert;
    cert.gap = gap;
    if (gap <= kCertificateGap) return cert;

    cert.inequivalent = true;
    const auto a = equivalence_invariants(j);
    const auto b = equivalence_invariants(other);
    std::size_t witness = 0;
    double widest = -1.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        const double d = std::abs(a.values[k] - b.values[k]);
        if (d > kCertificateGap) {
            witness = k;
            widest = d;
            break;
        }
        if (d > widest) {
            widest = d;
            witness = k;
        }
    }
    cert.invariant = a.names[witness];
    cert.value_first = a.values[witness];
    cert.value_second = b.values[witness];
    return cert;
}

ComplexMatrix find_intertwiner(const JMap& j, const JMap& other, TorusVector z, double tol) {
    require_same_dim(j, other, "find_intertwiner");
    const SuElement jz = evaluate(j, z);
    const SuElement kz = evaluate(other, z);
    const HermitianSpectrum s = hermitian_spectrum(jz);
    const HermitianSpectrum t = hermitian_spectrum(kz);
    const double mismatch = (s.values - t.values).cwiseAbs().maxCoeff();
    if (mismatch > tol) {
        std::ostringstream os;
        os << "find_intertwiner: sorted spectra differ by " << mismatch;
        throw Error(ErrorCode::SpectraDiffer, os.str(), mismatch);
    }

    const int m = j.m();
    ComplexMatrix a = ComplexMatrix::Zero(m, m);
    int start = 0;
    while (start < m) {
        int end = start + 1;
        while (end < m && s.values(end) - s.values(end - 1) <= tol) ++end;
        const int size = end - start;
        const ComplexMatrix vs = s.vectors.middleCols(start, size);
        const ComplexMatrix vt = t.vectors.middleCols(start, size);
        const ComplexMatrix cross = vt.adjoint() * vs;
        ComplexMatrix w;
        if (size == 1) {
            const Complex c = cross(0, 0);
            w = ComplexMatrix::Constant(1, 1, std::abs(c) > 1e-8 ? c / std::abs(c) : Complex{1.0, 0.0});
        } else {
            Eigen::JacobiSVD<ComplexMatrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
            const double smallest = svd.singularValues()(size - 1);
            if (smallest < 1e-8) {
                std::ostringstream os;
                os << "find_intertwiner: eigenspace cross-Gram of a " << size
                   << "-fold cluster is singular (sigma_min = " << smallest << ")";
                throw Error(ErrorCode::DegenerateAlignmentFailed, os.str(), smallest);
            }
            w = svd.matrixU() * svd.matrixV().adjoint();
        }
        a += vt * w * vs.adjoint();
        start = end;
    }

    const Complex det = a.determinant();
    a *= std::polar(1.0, -std::arg(det) / m);
    a = nearest_special_unitary(a);

    const double residual = max_abs(kz.matrix() - a * jz.matrix() * a.adjoint());
    if (residual > 10.0 * tol) {
        std::ostringstream os;
        os << "find_intertwiner: conjugation residual " << residual << " exceeds " << 10.0 * tol;
        throw Error(ErrorCode::DegenerateAlignmentFailed, os.str(), residual);
    }
    return a;
}

}  // namespace isospec
