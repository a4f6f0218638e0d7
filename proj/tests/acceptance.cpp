// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "isospec/commands.hpp"
#include "isospec/error.hpp"
#include "isospec/io.hpp"

using namespace isospec;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool passed = true;
    std::ostringstream note;
    std::string problems;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            problems += "; FAILED: " + what;
        }
    }
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

int failures = 0;

void criterion(int number, const std::string& title, double budget_seconds, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > budget_seconds) {
        std::ostringstream os;
        os << "took " << secs << " s, budget " << budget_seconds << " s";
        out.require(false, os.str());
    }
    if (!out.passed) ++failures;
    std::cout << (out.passed ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << title << " ("
              << out.note.str() << (out.note.str().empty() ? "" : ", ") << fmt(secs) << " s" << out.problems << ")"
              << std::endl;
}

struct Quiet {
    std::ostringstream out, err;
};

}  // namespace

int main() {
    std::mt19937_64 rng(20240601);

    criterion(1, "kappa admissibility at n=4, p=2, q=3", 10.0, [&](Outcome& o) {
        const SpaceParams params = SpaceParams::make(4, 2, 3);
        const JMap j = random_jmap(3, rng);
        double worst = 0.0;
        for (const CheckEntry& e : check_admissibility(j, params, 1000, 1, 1e-11)) {
            worst = std::max(worst, e.max_residual);
            o.require(e.passed && e.sample_count == 1000, e.name + " residual " + fmt(e.max_residual));
        }
        o.note << "max residual " << fmt(worst) << " over 1000 points";
    });

    criterion(2, "volume density ratio h_kappa / h0 = 1", 30.0, [&](Outcome& o) {
        const SpaceParams params = SpaceParams::make(4, 2, 3);
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            const CheckEntry e = check_volume_ratio(random_jmap(3, rng), params, 500, 100 + k, 1e-9);
            worst = std::max(worst, e.max_residual);
            o.require(e.passed, "j #" + std::to_string(k) + " residual " + fmt(e.max_residual));
        }
        o.note << "max |ratio - 1| " << fmt(worst) << " over 5 x 500 frames";
    });

    criterion(3, "closed-form orbit Gram against the orbit-map oracle", 60.0, [&](Outcome& o) {
        double worst = 0.0;
        for (auto [p, q] : {std::pair{1, 1}, {2, 3}, {3, 5}}) {
            const SpaceParams params = SpaceParams::make(4, p, q);
            for (int s = 0; s < 1000; ++s) {
                const SpherePoint x = random_regular_point(params, rng);
                worst = std::max(worst, (orbit_gram(params, x).G - fd_orbit_gram(params, x)).cwiseAbs().maxCoeff());
            }
        }
        o.require(worst <= 1e-9, "residual " + fmt(worst));
        o.note << "max residual " << fmt(worst) << " over 3 x 1000 points";
    });

    criterion(4, "orbit area from the Gram matrix and from (a, b, c)", 60.0, [&](Outcome& o) {
        double worst = 0.0;
        for (auto [p, q] : {std::pair{1, 1}, {2, 3}, {3, 5}}) {
            const SpaceParams params = SpaceParams::make(4, p, q);
            for (int s = 0; s < 1000; ++s) {
                const SpherePoint x = random_regular_point(params, rng);
                const OrbitStratum st = OrbitStratum::make(std::abs(x.v(0)), std::abs(x.v(1)));
                worst = std::max(worst, std::abs(orbit_area(params, x) - orbit_area(params, st)));
            }
        }
        o.require(worst <= 1e-10, "residual " + fmt(worst));
        const SpaceParams unit = SpaceParams::make(4, 1, 1);
        const OrbitStratum half = OrbitStratum::make(0.5, 0.5);
        const double exact = kPi * kPi / std::sqrt(2.0);
        const double dev = std::max(std::abs(orbit_area(unit, half.representative(unit)) - exact),
                                    std::abs(orbit_area(unit, half) - exact));
        o.require(dev <= 1e-10, "pi^2/sqrt2 deviation " + fmt(dev));
        o.note << "max residual " << fmt(worst) << ", pi^2/sqrt2 deviation " << fmt(dev);
    });

    criterion(5, "orbit angle formula against the Gram angle", 5.0, [&](Outcome& o) {
        double worst = 0.0;
        for (auto [p, q] : {std::pair{1, 1}, {2, 3}}) {
            const SpaceParams params = SpaceParams::make(4, p, q);
            for (double f : {0.1, 0.3, 0.6}) {
                const double a = f / std::sqrt(2.0);
                const OrbitGram g = orbit_gram(params, OrbitStratum::make(a, a).representative(params));
                worst = std::max(worst, std::abs(orbit_angle(params, a) - gram_angle(g)));
            }
        }
        o.require(worst <= 1e-10, "residual " + fmt(worst));
        const double dev = std::abs(orbit_angle(SpaceParams::make(4, 1, 1), 0.5) - std::acos(-1.0 / 3.0));
        o.require(dev <= 1e-10, "arccos(-1/3) deviation " + fmt(dev));
        o.note << "max residual " << fmt(worst) << ", arccos(-1/3) deviation " << fmt(dev);
    });

    criterion(6, "finite-difference dkappa and curvature closed forms at a = 0.4", 120.0, [&](Outcome& o) {
        const OrbitStratum st = OrbitStratum::make(0.4, 0.4);
        double dk = 0.0, curv = 0.0, split = 0.0;
        for (auto [p, q] : {std::pair{1, 1}, {2, 3}}) {
            const SpaceParams params = SpaceParams::make(4, p, q);
            const CheckEntry d = check_dkappa_closed_form(random_jmap(3, rng), params, st, 200, 7, 1e-3, 1e-5);
            o.require(d.passed && d.sample_count == 200, "dkappa residual " + fmt(d.max_residual));
            dk = std::max(dk, d.max_residual);
            for (const CheckEntry& e : check_curvature_closed_form(params, st, 200, 7, 1e-3, 1e-5, 1e-6)) {
                o.require(e.passed, e.name + " residual " + fmt(e.max_residual));
                if (e.name == "curvature_closed_form") curv = std::max(curv, e.max_residual);
                if (e.name == "curvature_component_equality") split = std::max(split, e.max_residual);
            }
        }
        o.note << "dkappa " << fmt(dk) << ", curvature " << fmt(curv) << ", component split " << fmt(split);
    });

    criterion(7, "verify exits 0 on (j, AjA^-1) and 2 on an unrelated pair", 120.0, [&](Outcome& o) {
        const fs::path dir = fs::temp_directory_path() / "isospec_acceptance_7";
        fs::remove_all(dir);
        fs::create_directories(dir);
        const JMap j = random_jmap(3, rng);
        const JMap conj = conjugate(j, random_special_unitary(3, rng));
        const std::string a = (dir / "j.json").string(), b = (dir / "conj.json").string(),
                          r = (dir / "random.json").string();
        save_jmap(a, j);
        save_jmap(b, conj);
        save_jmap(r, random_jmap(3, rng));

        RunConfig config;
        config.seed = 7;
        config.output_path = (dir / "equivalent_report.json").string();
        Quiet q1;
        const int ok = cmd_verify(config, a, b, q1.out, q1.err);
        o.require(ok == kExitOk, "equivalent pair exit " + std::to_string(ok));
        const nlohmann::json report = read_json(config.output_path);
        double inter = -1.0;
        for (const auto& c : report["checks"])
            if (c["name"] == "intertwining") inter = c["max_residual"].get<double>();
        o.require(inter >= 0.0 && inter <= 1e-8, "intertwining residual " + fmt(inter));

        double per_mu = 0.0;
        int windows = 0;
        for (int k1 = -3; k1 <= 3; ++k1)
            for (int k2 = -3; k2 <= 3; ++k2) {
                if (k1 == 0 && k2 == 0) continue;
                const CheckEntry e = check_intertwining(j, conj, config.params, {k1, k2}, 200, 7, 1e-8);
                per_mu = std::max(per_mu, e.max_residual);
                ++windows;
                o.require(e.passed, e.name + " residual " + fmt(e.max_residual));
            }

        config.output_path = (dir / "random_report.json").string();
        Quiet q2;
        const int bad = cmd_verify(config, a, r, q2.out, q2.err);
        o.require(bad == kExitFailed, "unrelated pair exit " + std::to_string(bad));
        bool iso_failed = false;
        const nlohmann::json failed = read_json(config.output_path);
        for (const auto& c : failed["checks"])
            if (c["name"] == "isospectrality") iso_failed = c["passed"] == false;
        o.require(iso_failed, "isospectrality did not fail on the unrelated pair");
        o.note << "exit codes " << ok << "/" << bad << ", intertwining max " << fmt(std::max(inter, per_mu)) << " over "
               << windows << " mu";
        fs::remove_all(dir);
    });

    criterion(8, "non-equivalence certificates and genericity", 60.0, [&](Outcome& o) {
        int inequivalent = 0, drawn = 0;
        while (drawn < 50) {
            const JMap a = random_jmap(3, rng), b = random_jmap(3, rng);
            if (std::abs(trace_invariant(a) - trace_invariant(b)) < 1.0) continue;
            ++drawn;
            inequivalent += non_equivalence_certificate(a, b).inequivalent;
        }
        int inconclusive = 0;
        for (int k = 0; k < 50; ++k) {
            const JMap a = random_jmap(3, rng);
            inconclusive += !non_equivalence_certificate(a, conjugate(a, random_special_unitary(3, rng))).inequivalent;
        }
        int generic = 0;
        for (int k = 0; k < 100; ++k) generic += is_generic(random_jmap(3, rng));
        const SuElement x = random_su(3, rng);
        const bool diagonal_generic = is_generic(JMap(x, x));
        o.require(inequivalent == 50, "inequivalent " + std::to_string(inequivalent) + "/50");
        o.require(inconclusive == 50, "inconclusive " + std::to_string(inconclusive) + "/50");
        o.require(generic >= 95, "generic " + std::to_string(generic) + "/100");
        o.require(!diagonal_generic, "(X, X) reported generic");
        o.note << "inequivalent " << inequivalent << "/50, inconclusive " << inconclusive << "/50, generic " << generic
               << "/100";
    });

    criterion(9, "flat torus spectra", 30.0, [&](Outcome& o) {
        const std::vector<int> expected{0, 1, 1, 1, 1, 2, 2, 2, 2, 4, 4, 4, 4, 5, 5, 5, 5, 5, 5,
                                        5, 5, 8, 8, 8, 8, 9, 9, 9, 9, 10, 10, 10, 10, 10, 10, 10, 10};
        const auto unit = flat_torus_spectrum(OrbitGram{}, square_lattice(), 10.0);
        o.require(unit.size() == expected.size(), std::to_string(unit.size()) + " eigenvalues");
        double unit_dev = 0.0;
        for (std::size_t k = 0; k < std::min(unit.size(), expected.size()); ++k)
            unit_dev = std::max(unit_dev, std::abs(unit[k] - expected[k]));
        o.require(unit_dev <= 1e-12, "unit spectrum deviation " + fmt(unit_dev));

        double worst = 0.0;
        for (auto [p, q] : {std::pair{1, 1}, {2, 3}}) {
            const SpaceParams params = SpaceParams::make(4, p, q);
            const WeightLattice lattice = dual_lattice(params);
            const JMap j = random_jmap(3, rng);
            for (int s = 0; s < 100; ++s) {
                const SpherePoint x = random_regular_point(params, rng);
                const auto s0 = flat_torus_spectrum(OrbitGram{quotient_orbit_gram(params, H0Metric{}, x)}, lattice, 50.0);
                const auto sk =
                    flat_torus_spectrum(OrbitGram{quotient_orbit_gram(params, HKappaMetric{j}, x)}, lattice, 50.0);
                if (s0.size() != sk.size()) {
                    worst = 1.0;
                    continue;
                }
                for (std::size_t k = 0; k < s0.size(); ++k) worst = std::max(worst, std::abs(s0[k] - sk[k]));
            }
        }
        o.require(worst <= 1e-10, "h0 / h_kappa spectral deviation " + fmt(worst));
        o.note << unit.size() << " unit eigenvalues, max deviation " << fmt(unit_dev) << "; h0 vs h_kappa "
               << fmt(worst);
    });

    criterion(10, "generate m=3, steps=4 and re-certify the family", 300.0, [&](Outcome& o) {
        const fs::path dir = fs::temp_directory_path() / "isospec_acceptance_10";
        fs::remove_all(dir);
        RunConfig config;
        config.seed = 1;
        config.output_path = dir.string();
        Quiet q;
        const int code = cmd_generate(config, 3, 4, 0.05, q.out, q.err);
        o.require(code == kExitOk, "generate exit " + std::to_string(code));
        const nlohmann::json manifest = read_json((dir / "manifest.json").string());
        std::vector<JMap> members;
        std::vector<std::string> paths;
        for (const auto& name : manifest["members"]) {
            paths.push_back((dir / name.get<std::string>()).string());
            members.push_back(load_jmap(paths.back()));
        }
        o.require(members.size() == 5, std::to_string(members.size()) + " members");
        o.require(manifest["pairs"].size() == 10, "pair count");
        int certified = 0, inequivalent = 0;
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                certified += is_isospectral_pair(members[a], members[b], 1e-9);
                inequivalent += non_equivalence_certificate(members[a], members[b]).inequivalent;
            }
        o.require(certified == 10, std::to_string(certified) + "/10 pairs isospectral on reload");
        const bool trivial = manifest["trivial"].get<bool>();

        RunConfig verify = config;
        verify.output_path = (dir / "report.json").string();
        Quiet qv;
        const int vcode = cmd_verify(verify, paths.front(), paths.back(), qv.out, qv.err);
        o.require(vcode == kExitOk, "verify on members exit " + std::to_string(vcode));
        o.note << (trivial ? "trivial fallback" : "nontrivial family") << ", " << certified
               << "/10 isospectral, " << inequivalent << "/10 certified inequivalent, verify exit " << vcode;
        fs::remove_all(dir);
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
