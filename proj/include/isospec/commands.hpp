/**
 * @file commands.hpp
 * @brief The generate / verify / orbit / certify commands behind the isospec
 *        executable. Each returns a process exit code:
 *        0 all passed, 1 usage / I/O / schema error, 2 verification failure.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "isospec/verify.hpp"

namespace isospec {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailed = 2;

/// Run configuration. Every field has a default; a config file overrides the
/// defaults and command-line flags override the file.
struct RunConfig {
    SpaceParams params;
    std::uint64_t seed = 0;
    int samples = 200;
    int mu_range = 3;
    Tolerances tolerances;
    std::string output_path;
    double cutoff = 50.0;
    double stratum_a = 0.4;
    double fd_step = 1e-3;
    /// Unix seconds for report metadata; falls back to SOURCE_DATE_EPOCH,
    /// then to the wall clock.
    std::optional<std::int64_t> timestamp;

    /// Throws Error{InvalidParams}.
    void validate() const;
    VerifyConfig verify_config() const;
};

/// Applies the fields present in doc on top of base.
/// Throws Error{SchemaError | InvalidParams}.
RunConfig config_from_json(const nlohmann::json& doc, RunConfig base = {});
nlohmann::json config_to_json(const RunConfig& config);

/// ISO-8601 UTC time for the report metadata.
std::string resolve_timestamp(const RunConfig& config);

/// Writes member_000.json ... and manifest.json into config.output_path
/// (a directory, created if needed; "." when empty).
int cmd_generate(const RunConfig& config, int m, int steps, double step_size, std::ostream& out, std::ostream& err);

/// Writes the report to config.output_path, or to out when it is empty.
int cmd_verify(const RunConfig& config, const std::string& jmap_path_1, const std::string& jmap_path_2,
               std::ostream& out, std::ostream& err);

struct OrbitQuery {
    /// JSON file with {"u": [...], "v": [...]}
    std::optional<std::string> point_path;
    std::optional<double> a;
    std::optional<double> b;
};

int cmd_orbit(const RunConfig& config, const OrbitQuery& query, std::ostream& out, std::ostream& err);

/// Genericity of both maps and the non-equivalence certificate.
int cmd_certify(const RunConfig& config, const std::string& jmap_path_1, const std::string& jmap_path_2,
                std::ostream& out, std::ostream& err);

}  // namespace isospec
