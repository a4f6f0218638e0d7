/**
 * @file jmap.hpp
 * @brief Linear maps j : t = R^2 -> su(m) and the decisions built on them:
 *        isospectrality, genericity, conjugation/symmetry invariants and
 *        intertwiners.
 *
 * A JMap is stored as the pair (j1, j2) = (j_{Z1}, j_{Z2}) for the basis
 * Z1 = (i,0), Z2 = (0,i) of the torus Lie algebra t.
 */
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "isospec/su_algebra.hpp"

namespace isospec {

/// Coordinates of Z = z1*Z1 + z2*Z2 in t.
struct TorusVector {
    double z1 = 0.0;
    double z2 = 0.0;

    TorusVector operator+(const TorusVector& o) const { return {z1 + o.z1, z2 + o.z2}; }
    TorusVector operator-(const TorusVector& o) const { return {z1 - o.z1, z2 - o.z2}; }
    TorusVector operator*(double s) const { return {s * z1, s * z2}; }
    double dot(const TorusVector& o) const { return z1 * o.z1 + z2 * o.z2; }
};

class JMap {
public:
    /// Throws Error{DimensionMismatch} unless both components share m >= 3.
    JMap(SuElement j1, SuElement j2);

    int m() const noexcept { return j1_.dim(); }
    const SuElement& j1() const noexcept { return j1_; }
    const SuElement& j2() const noexcept { return j2_; }

    JMap operator*(double s) const { return JMap(j1_ * s, j2_ * s); }

private:
    SuElement j1_;
    SuElement j2_;
};

/// z1*j1 + z2*j2.
SuElement evaluate(const JMap& j, TorusVector z);

/// (A j1 A^{-1}, A j2 A^{-1}) for unitary A.
JMap conjugate(const JMap& j, const ComplexMatrix& a);

JMap random_jmap(int m, std::mt19937_64& rng);

/// Directions (cos t_i, sin t_i), t_i = i*pi/(m+2), i = 0..m.
std::vector<TorusVector> sample_directions(int m);

/// Largest deviation between sorted spectra of -i j_Z and -i j'_Z over
/// sample_directions(m).
double isospectral_deviation(const JMap& j, const JMap& other);

/// spec(j_Z) == spec(j'_Z) for every Z, decided on m+1 non-proportional
/// directions (each characteristic-polynomial coefficient is homogeneous of
/// degree <= m in Z). Throws Error{DimensionMismatch}.
bool is_isospectral_pair(const JMap& j, const JMap& other, double tol);

/// No nonzero element of su(m) commutes with both j1 and j2.
bool is_generic(const JMap& j, double rank_tol = kDefaultRankTol);

/// tr((j1^2 + j2^2)^2). Throws Error{NonRealResult} if the imaginary part
/// exceeds 1e-10.
double trace_invariant(const JMap& j);

/// Element of the signed-swap group acting on t: Z_k -> sign[k] * Z_{index[k]}.
struct DihedralSymmetry {
    std::array<int, 2> index{0, 1};
    std::array<int, 2> sign{1, 1};

    TorusVector apply(TorusVector z) const;
    /// (this o other)(Z) = this(other(Z)).
    DihedralSymmetry compose(const DihedralSymmetry& other) const;
    DihedralSymmetry inverse() const;
    bool operator==(const DihedralSymmetry&) const = default;
};

/// All 8 elements, identity first.
std::vector<DihedralSymmetry> dihedral_group();

/// The map Z -> j_{psi(Z)}.
JMap precompose(const JMap& j, const DihedralSymmetry& psi);

/// Entry-wise complex conjugation of both components (the action of Q).
JMap complex_conjugate(const JMap& j);

/// Traces of the fixed word list, canonicalized under the signed swaps and
/// complex conjugation. Entry 0 is tr((j1^2+j2^2)^2); the remaining entries
/// are tr(w) for every word w of length 1..4 in the letters {1,2}, ordered by
/// length and then lexicographically ("1", "2", "11", "12", ..., "2222").
struct EquivalenceInvariants {
    std::vector<std::string> names;
    std::vector<Complex> values;
};

/// Raw (uncanonicalized) word traces in the documented order.
EquivalenceInvariants word_traces(const JMap& j);
EquivalenceInvariants equivalence_invariants(const JMap& j);

inline constexpr double kInvariantRounding = 1e-9;
inline constexpr double kCertificateGap = 1e-7;

struct NonEquivalenceCertificate {
    bool inequivalent = false;  ///< false means Inconclusive
    std::string invariant;      ///< witness name when inequivalent
    Complex value_first{};
    Complex value_second{};
    /// min over symmetries/conjugation of the max word-trace deviation
    double gap = 0.0;
};

/// One-sided certificate: Inequivalent when the canonical invariants differ
/// by more than 1e-7, Inconclusive otherwise. Throws Error{DimensionMismatch}.
NonEquivalenceCertificate non_equivalence_certificate(const JMap& j, const JMap& other);

/// A_Z in SU(m) with j'_Z = A_Z j_Z A_Z^{-1} up to 10*tol.
/// Throws Error{SpectraDiffer | DegenerateAlignmentFailed | DimensionMismatch}.
ComplexMatrix find_intertwiner(const JMap& j, const JMap& other, TorusVector z, double tol);

struct IsospectralFamily {
    std::vector<JMap> members;
    /// true when the family is a conjugation orbit (fallback path)
    bool trivial = false;
    int restarts = 0;
    std::vector<std::string> warnings;
};

struct ContinuationOptions {
    int retry_budget = 4;
    int newton_max_iterations = 50;
    double newton_tolerance = 1e-8;
    double kernel_rank_tol = 1e-8;
    /// a kernel direction is nontrivial when its component orthogonal to the
    /// conjugation directions exceeds this
    double nontrivial_threshold = 1e-6;
};

/// Starting point j(seed) used by generate_isospectral_family.
JMap family_seed(std::uint64_t seed, int m);

/// Numerical continuation along the isospectral set through j(seed).
/// Throws Error{ContinuationDiverged | InvalidParams}.
IsospectralFamily generate_isospectral_family(std::uint64_t seed, int m, int steps, double step_size,
                                              const ContinuationOptions& options = {});

/// Conjugation orbit exp(tX) j exp(-tX), t = 0, step, ..., steps*step.
IsospectralFamily conjugation_orbit_family(const JMap& j, std::uint64_t seed, int steps, double step_size);

}  // namespace isospec
