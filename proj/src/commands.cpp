#include "isospec/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "isospec/error.hpp"
#include "isospec/io.hpp"

#ifndef ISOSPEC_VERSION
#define ISOSPEC_VERSION "0.0.0"
#endif

namespace isospec {

namespace {

[[noreturn]] void schema(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::SchemaError, "config field '" + field + "': " + what);
}

template <typename T>
T field_as(const nlohmann::json& doc, const std::string& name) {
    try {
        return doc.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
        schema(name, "has the wrong type");
    }
}

int field_int(const nlohmann::json& doc, const std::string& name) {
    if (!doc.at(name).is_number_integer()) schema(name, "expected an integer");
    return field_as<int>(doc, name);
}

double field_real(const nlohmann::json& doc, const std::string& name) {
    if (!doc.at(name).is_number()) schema(name, "expected a number");
    return field_as<double>(doc, name);
}

nlohmann::json tolerances_to_json(const Tolerances& t) {
    return {{"isospectral", t.isospectral},   {"admissibility", t.admissibility},
            {"volume", t.volume},             {"intertwining", t.intertwining},
            {"vertical_metric", t.vertical_metric}, {"closed_form", t.closed_form},
            {"component_equality", t.component_equality}};
}

double* tolerance_slot(Tolerances& t, const std::string& name) {
    if (name == "isospectral") return &t.isospectral;
    if (name == "admissibility") return &t.admissibility;
    if (name == "volume") return &t.volume;
    if (name == "intertwining") return &t.intertwining;
    if (name == "vertical_metric") return &t.vertical_metric;
    if (name == "closed_form") return &t.closed_form;
    if (name == "component_equality") return &t.component_equality;
    return nullptr;
}

nlohmann::json certificate_to_json(const NonEquivalenceCertificate& cert) {
    nlohmann::json c{{"verdict", cert.inequivalent ? "Inequivalent" : "Inconclusive"}, {"gap", cert.gap}};
    if (cert.inequivalent) {
        c["invariant"] = cert.invariant;
        c["value_first"] = {cert.value_first.real(), cert.value_first.imag()};
        c["value_second"] = {cert.value_second.real(), cert.value_second.imag()};
    }
    return c;
}

nlohmann::json params_to_json(const SpaceParams& p) { return {{"n", p.n}, {"p", p.p}, {"q", p.q}}; }

nlohmann::json matrix2_to_json(const Eigen::Matrix2d& g) {
    return {{g(0, 0), g(0, 1)}, {g(1, 0), g(1, 1)}};
}

nlohmann::json complex_vector_to_json(const ComplexVector& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back({v(k).real(), v(k).imag()});
    return out;
}

void emit(const RunConfig& config, const nlohmann::json& doc, std::ostream& out) {
    if (config.output_path.empty()) {
        out << canonical_dump(doc);
    } else {
        write_text(config.output_path, canonical_dump(doc));
    }
}

}  // namespace

void RunConfig::validate() const {
    SpaceParams::make(params.n, params.p, params.q);
    if (samples < 1) throw Error(ErrorCode::InvalidParams, "samples must be >= 1");
    if (mu_range < 1) throw Error(ErrorCode::InvalidParams, "mu_range must be >= 1");
    const nlohmann::json tols = tolerances_to_json(tolerances);
    for (const auto& [name, value] : tols.items()) {
        if (!(value.get<double>() > 0.0)) throw Error(ErrorCode::InvalidParams, "tolerance '" + name + "' must be > 0");
    }
    if (!(cutoff >= 0.0)) throw Error(ErrorCode::InvalidParams, "cutoff must be >= 0");
    if (!(stratum_a > 0.0 && stratum_a < 1.0 / std::sqrt(2.0))) {
        throw Error(ErrorCode::InvalidParams, "stratum_a must lie in (0, 1/sqrt2)");
    }
    if (!(fd_step > 0.0)) throw Error(ErrorCode::InvalidParams, "fd_step must be > 0");
}

VerifyConfig RunConfig::verify_config() const {
    VerifyConfig v;
    v.seed = seed;
    v.samples = samples;
    v.mu_range = mu_range;
    v.tol = tolerances;
    v.stratum_a = stratum_a;
    v.fd_step = fd_step;
    v.spectrum_cutoff = cutoff;
    return v;
}

RunConfig config_from_json(const nlohmann::json& doc, RunConfig base) {
    if (!doc.is_object()) schema("<root>", "expected an object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "params") {
            if (!value.is_object()) schema("params", "expected an object");
            for (const auto& [pk, pv] : value.items()) {
                if (pk != "n" && pk != "p" && pk != "q") schema("params." + pk, "unknown field");
                if (!pv.is_number_integer()) schema("params." + pk, "expected an integer");
            }
            if (value.contains("n")) base.params.n = value["n"].get<int>();
            if (value.contains("p")) base.params.p = value["p"].get<int>();
            if (value.contains("q")) base.params.q = value["q"].get<int>();
        } else if (key == "seed") {
            if (!value.is_number_integer() || (!value.is_number_unsigned() && value.get<std::int64_t>() < 0)) {
                schema("seed", "expected a nonnegative integer");
            }
            base.seed = value.get<std::uint64_t>();
        } else if (key == "samples") {
            base.samples = field_int(doc, key);
        } else if (key == "mu_range") {
            base.mu_range = field_int(doc, key);
        } else if (key == "tolerances") {
            if (!value.is_object()) schema("tolerances", "expected an object");
            for (const auto& [tk, tv] : value.items()) {
                double* slot = tolerance_slot(base.tolerances, tk);
                if (!slot) schema("tolerances." + tk, "unknown tolerance");
                if (!tv.is_number()) schema("tolerances." + tk, "expected a number");
                *slot = tv.get<double>();
            }
        } else if (key == "output_path") {
            if (!value.is_string()) schema("output_path", "expected a string");
            base.output_path = value.get<std::string>();
        } else if (key == "cutoff") {
            base.cutoff = field_real(doc, key);
        } else if (key == "stratum_a") {
            base.stratum_a = field_real(doc, key);
        } else if (key == "fd_step") {
            base.fd_step = field_real(doc, key);
        } else if (key == "timestamp") {
            if (!value.is_number_integer()) schema("timestamp", "expected integer Unix seconds");
            base.timestamp = value.get<std::int64_t>();
        } else {
            schema(key, "unknown field");
        }
    }
    base.validate();
    return base;
}

nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json doc{{"params", params_to_json(c.params)},
                       {"seed", c.seed},
                       {"samples", c.samples},
                       {"mu_range", c.mu_range},
                       {"tolerances", tolerances_to_json(c.tolerances)},
                       {"output_path", c.output_path},
                       {"cutoff", c.cutoff},
                       {"stratum_a", c.stratum_a},
                       {"fd_step", c.fd_step}};
    if (c.timestamp) doc["timestamp"] = *c.timestamp;
    return doc;
}

std::string resolve_timestamp(const RunConfig& config) {
    std::int64_t secs = 0;
    if (config.timestamp) {
        secs = *config.timestamp;
    } else if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
        secs = std::strtoll(env, nullptr, 10);
    } else {
        secs = std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
                   .count();
    }
    const auto t = static_cast<std::time_t>(secs);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int cmd_generate(const RunConfig& config, int m, int steps, double step_size, std::ostream& out, std::ostream& err) {
    if (m < 3) {
        err << "m must be ≥ 3\n";
        return kExitUsage;
    }
    if (steps < 0 || !(step_size > 0.0)) {
        err << "steps must be >= 0 and step_size > 0\n";
        return kExitUsage;
    }
    try {
        config.validate();
        const std::filesystem::path dir = config.output_path.empty() ? "." : config.output_path;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir.string() + "': " + ec.message());

        IsospectralFamily fam;
        bool diverged = false;
        try {
            fam = generate_isospectral_family(config.seed, m, steps, step_size);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ContinuationDiverged) throw;
            fam = conjugation_orbit_family(family_seed(config.seed, m), config.seed, steps, step_size);
            fam.warnings.emplace_back(e.what());
            diverged = true;
        }

        nlohmann::json members = nlohmann::json::array();
        for (std::size_t k = 0; k < fam.members.size(); ++k) {
            char name[32];
            std::snprintf(name, sizeof name, "member_%03zu.json", k);
            save_jmap((dir / name).string(), fam.members[k]);
            members.push_back(name);
        }

        bool all_isospectral = true;
        nlohmann::json pairs = nlohmann::json::array();
        for (std::size_t a = 0; a < fam.members.size(); ++a) {
            for (std::size_t b = a + 1; b < fam.members.size(); ++b) {
                const double dev = isospectral_deviation(fam.members[a], fam.members[b]);
                const bool iso = dev <= config.tolerances.isospectral;
                all_isospectral = all_isospectral && iso;
                pairs.push_back({{"first", a},
                                 {"second", b},
                                 {"isospectral", iso},
                                 {"deviation", dev},
                                 {"certificate",
                                  certificate_to_json(non_equivalence_certificate(fam.members[a], fam.members[b]))}});
            }
        }

        const nlohmann::json manifest{{"m", m},
                                      {"seed", config.seed},
                                      {"steps", steps},
                                      {"step_size", step_size},
                                      {"trivial", fam.trivial},
                                      {"diverged", diverged},
                                      {"restarts", fam.restarts},
                                      {"warnings", fam.warnings},
                                      {"members", members},
                                      {"pairs", pairs},
                                      {"isospectral_tolerance", config.tolerances.isospectral},
                                      {"tool_version", ISOSPEC_VERSION},
                                      {"timestamp", resolve_timestamp(config)}};
        write_text((dir / "manifest.json").string(), canonical_dump(manifest));

        out << "wrote " << fam.members.size() << " members and " << pairs.size() << " pair verdicts to "
            << dir.string() << (fam.trivial ? " (trivial conjugation orbit)" : "") << "\n";
        for (const auto& w : fam.warnings) err << "warning: " << w << "\n";
        if (diverged) return kExitFailed;
        return all_isospectral ? kExitOk : kExitFailed;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_verify(const RunConfig& config, const std::string& jmap_path_1, const std::string& jmap_path_2,
               std::ostream& out, std::ostream& err) {
    VerificationReport report;
    try {
        config.validate();
        const JMap j = load_jmap(jmap_path_1);
        const JMap j2 = load_jmap(jmap_path_2);
        for (const auto* map : {&j, &j2}) {
            if (map->m() != config.params.m()) {
                std::ostringstream os;
                os << "j-map has m = " << map->m() << " but params.n - 1 = " << config.params.m();
                throw Error(ErrorCode::DimensionMismatch, os.str());
            }
        }
        report = verify_pair(j, j2, config.params, config.verify_config());
        report.metadata["timestamp"] = resolve_timestamp(config);
        emit(config, report_to_json(report), out);
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }
    std::ostream& log = config.output_path.empty() ? err : out;
    for (const auto& c : report.checks) {
        log << (c.passed ? "PASS " : "FAIL ") << c.name << "  residual " << c.max_residual << " / " << c.tolerance
            << "\n";
    }
    return report.all_passed() ? kExitOk : kExitFailed;
}

int cmd_orbit(const RunConfig& config, const OrbitQuery& query, std::ostream& out, std::ostream& err) {
    try {
        config.validate();
        const SpaceParams& params = config.params;
        nlohmann::json doc{{"params", params_to_json(params)}, {"cutoff", config.cutoff}};
        std::optional<SpherePoint> point;
        if (query.point_path) {
            auto [u, v] = point_from_json(read_json(*query.point_path));
            if (u.size() != params.n - 1) {
                std::ostringstream os;
                os << "point has dim u = " << u.size() << " but params.n - 1 = " << params.m();
                throw Error(ErrorCode::DimensionMismatch, os.str());
            }
            const double dev = std::abs(u.squaredNorm() + v.squaredNorm() - 1.0);
            if (dev > 1e-9) throw Error(ErrorCode::NotOnSphere, "point is off the unit sphere", dev);
            if (dev > 1e-12) err << "warning: point renormalized (|x|^2 - 1 = " << dev << ")\n";
            point = SpherePoint::normalized(std::move(u), std::move(v));
        } else if (query.a && query.b) {
            const OrbitStratum st = OrbitStratum::make(*query.a, *query.b);
            point = st.representative(params);
            doc["stratum"] = {{"a", st.a}, {"b", st.b}, {"c", st.c}};
            doc["area_closed_form"] = orbit_area(params, st);
        } else {
            err << "orbit needs --point FILE or both --a and --b\n";
            return kExitUsage;
        }
        const SpherePoint& x = *point;
        const OrbitGram gram = orbit_gram(params, x);
        const WeightLattice lattice = dual_lattice(params);
        doc["point"] = {{"u", complex_vector_to_json(x.u)}, {"v", complex_vector_to_json(x.v)}};
        doc["gram"] = matrix2_to_json(gram.G);
        doc["area"] = orbit_area(params, x);
        doc["angle_from_gram"] = gram_angle(gram);
        const double a = std::abs(x.v(0));
        if (std::abs(a - std::abs(x.v(1))) <= 1e-12 && a < 1.0 / std::sqrt(2.0)) {
            doc["angle"] = orbit_angle(params, a);
        }
        doc["lattice"] = {{"basis", matrix2_to_json(lattice.basis())},
                          {"dual_basis", matrix2_to_json(lattice.dual_basis())},
                          {"covolume", lattice.covolume()}};
        doc["spectrum"] = flat_torus_spectrum(gram, lattice, config.cutoff);
        emit(config, doc, out);
        return kExitOk;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_certify(const RunConfig& config, const std::string& jmap_path_1, const std::string& jmap_path_2,
                std::ostream& out, std::ostream& err) {
    try {
        const JMap j = load_jmap(jmap_path_1);
        const JMap j2 = load_jmap(jmap_path_2);
        const nlohmann::json doc{{"generic_first", is_generic(j)},
                                 {"generic_second", is_generic(j2)},
                                 {"isospectral_deviation", isospectral_deviation(j, j2)},
                                 {"trace_invariant", {trace_invariant(j), trace_invariant(j2)}},
                                 {"certificate", certificate_to_json(non_equivalence_certificate(j, j2))},
                                 {"tool_version", ISOSPEC_VERSION}};
        emit(config, doc, out);
        return kExitOk;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace isospec
