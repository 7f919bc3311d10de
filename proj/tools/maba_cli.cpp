// Batch front-end: parses a JSON problem config, runs the requested
// computation or verification suite, and prints a machine-readable report
// to standard output (optionally to a file via --json-out).
//
// Exit codes: 0 all checks pass, 1 at least one check failed, 2 config or
// usage error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "maba/suites.hpp"

namespace {

int emit(const maba::Report& rep, const std::string& json_out) {
    std::string text = rep.to_json().dump(2);
    std::cout << text << "\n";
    if (!json_out.empty()) {
        std::ofstream out(json_out);
        if (!out) {
            std::cerr << "error: cannot write " << json_out << "\n";
            return 2;
        }
        out << text << "\n";
    }
    return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"twisted XXX chain toolkit: determinant formulas, Bethe solving, and the "
                 "brute-force verification suites"};
    app.require_subcommand(1);

    std::string config_path;
    std::string json_out;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    int threads_override = 0;
    app.add_option("--config", config_path, "JSON problem configuration")->required();
    app.add_option("--json-out", json_out, "also write the report to this file");
    app.add_option("--seed", seed_override, "override the config seed")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("--threads", threads_override, "worker threads (1 = bit-reproducible)");

    auto* cmd_izergin = app.add_subcommand("verify-izergin", "determinant property suite");
    auto* cmd_app = app.add_subcommand("verify-appendices",
                                       "summation, inverse-matrix and on-shell identity suite");
    auto* cmd_solve = app.add_subcommand("solve-bethe", "multi-start root search with "
                                                        "certification; emits solutions");
    auto* cmd_sp = app.add_subcommand("scalar-product",
                                      "evaluate all scalar-product representations");
    auto* cmd_norm = app.add_subcommand("norm", "norm of an on-shell vector");
    auto* cmd_spec = app.add_subcommand("spectrum-check",
                                        "solutions against the dense transfer-matrix spectrum");
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    std::string u_file, v_file;
    cmd_sp->add_option("--u", u_file, "JSON file with the on-shell roots")->required();
    cmd_sp->add_option("--v", v_file, "JSON file with the dual parameters")->required();
    std::string norm_u_file;
    cmd_norm->add_option("--u", norm_u_file, "JSON file with the on-shell roots")->required();
    int z_samples = 3;
    cmd_spec->add_option("--z-samples", z_samples, "spectral sample count");

    CLI11_PARSE(app, argc, argv);

    try {
        maba::RunConfig cfg = maba::load_config(config_path);
        if (seed_set) cfg.seed = seed_override;
        if (threads_override > 0) cfg.threads = threads_override;
        maba::Model model = maba::model_from_config(cfg);

        if (cmd_izergin->parsed()) return emit(maba::suite_verify_izergin(model, cfg), json_out);
        if (cmd_app->parsed()) return emit(maba::suite_verify_appendices(model, cfg), json_out);
        if (cmd_solve->parsed()) return emit(maba::suite_solve_bethe(model, cfg), json_out);
        if (cmd_sp->parsed()) {
            maba::ParamSet u = maba::load_roots(u_file);
            maba::ParamSet v = maba::load_roots(v_file);
            return emit(maba::suite_scalar_product(model, cfg, v, u), json_out);
        }
        if (cmd_norm->parsed()) {
            maba::ParamSet u = maba::load_roots(norm_u_file);
            return emit(maba::suite_norm(model, cfg, u), json_out);
        }
        if (cmd_spec->parsed())
            return emit(maba::suite_spectrum_check(model, cfg, z_samples), json_out);
        std::cerr << "error: no command\n";
        return 2;
    } catch (const maba::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const maba::InvalidParams& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const maba::DegenerateTwist& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const maba::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
