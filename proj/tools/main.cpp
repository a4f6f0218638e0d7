// isospec command-line front end.

#include <iostream>

#include <CLI11.hpp>

#include "isospec/commands.hpp"
#include "isospec/error.hpp"
#include "isospec/io.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::optional<int> mu_range;
    std::optional<std::string> out;
    std::optional<double> cutoff;
    std::optional<std::int64_t> timestamp;
    std::optional<int> n;
    std::optional<int> p;
    std::optional<int> q;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON run configuration");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--samples", o.samples, "samples per check");
    cmd->add_option("--mu-range", o.mu_range, "intertwining window |k| <= N");
    cmd->add_option("--out", o.out, "output file (directory for generate)");
    cmd->add_option("--cutoff", o.cutoff, "flat-torus spectrum cutoff");
    cmd->add_option("--timestamp", o.timestamp, "Unix seconds recorded in reports");
    cmd->add_option("--n", o.n, "sphere S^{2n+1}");
    cmd->add_option("--p", o.p, "circle weight of u");
    cmd->add_option("--q", o.q, "circle weight of v");
}

isospec::RunConfig resolve(const Overrides& o) {
    isospec::RunConfig c;
    if (!o.config_path.empty()) c = isospec::config_from_json(isospec::read_json(o.config_path));
    if (o.seed) c.seed = *o.seed;
    if (o.samples) c.samples = *o.samples;
    if (o.mu_range) c.mu_range = *o.mu_range;
    if (o.out) c.output_path = *o.out;
    if (o.cutoff) c.cutoff = *o.cutoff;
    if (o.timestamp) c.timestamp = *o.timestamp;
    if (o.n) c.params.n = *o.n;
    if (o.p) c.params.p = *o.p;
    if (o.q) c.params.q = *o.q;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"isospec: torus-method checks for metrics on O(p,q)"};
    app.require_subcommand(1);
    Overrides o;

    auto* gen = app.add_subcommand("generate", "continue an isospectral family of j-maps");
    int m = 3, steps = 4;
    double step_size = 0.05;
    add_common(gen, o);
    gen->add_option("--m", m, "matrix size (>= 3)");
    gen->add_option("--steps", steps, "continuation steps");
    gen->add_option("--step-size", step_size, "step length relative to |j|");

    auto* ver = app.add_subcommand("verify", "check every hypothesis for a pair of j-maps");
    std::string first, second;
    add_common(ver, o);
    ver->add_option("first", first, "JMap JSON")->required();
    ver->add_option("second", second, "JMap JSON")->required();

    auto* orb = app.add_subcommand("orbit", "torus-orbit geometry at a point or stratum");
    isospec::OrbitQuery query;
    add_common(orb, o);
    orb->add_option("--point", query.point_path, "JSON point {\"u\": [...], \"v\": [...]}");
    orb->add_option("--a", query.a, "|v1| on the stratum");
    orb->add_option("--b", query.b, "|v2| on the stratum");

    auto* cert = app.add_subcommand("certify", "genericity and non-equivalence certificate");
    add_common(cert, o);
    cert->add_option("first", first, "JMap JSON")->required();
    cert->add_option("second", second, "JMap JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return isospec::kExitUsage;
    }

    isospec::RunConfig config;
    try {
        config = resolve(o);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return isospec::kExitUsage;
    }

    if (gen->parsed()) return isospec::cmd_generate(config, m, steps, step_size, std::cout, std::cerr);
    if (ver->parsed()) return isospec::cmd_verify(config, first, second, std::cout, std::cerr);
    if (orb->parsed()) return isospec::cmd_orbit(config, query, std::cout, std::cerr);
    return isospec::cmd_certify(config, first, second, std::cout, std::cerr);
}
