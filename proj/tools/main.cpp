// pqc: build, classify and verify single-qubit private quantum channels.
//
//   pqc synth    --in job.json [--out report.json] [--target '[x,y,z]'|auto]
//   pqc classify --in channel.json [--out report.json]
//   pqc curve    [--samples N] [--out curve.csv]
//   pqc verify   --in job.json [--out report.json]   (job.json embeds "channel")
//
// Common flags: --tol-cp, --tol-verify, --seed, --samples. Flags override the
// matching fields of the job file. Exit codes: 0 ok, 1 bad input or I/O,
// 2 unreachable cipher state, 3 verification failure, 4 non-unital channel.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "pqc/cli.hpp"

namespace {

pqc::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw pqc::Error("cannot open input file " + path);
    return pqc::json::parse(in);
}

int write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return std::cout ? pqc::k_exit_ok : pqc::k_exit_parse;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    return out ? pqc::k_exit_ok : pqc::k_exit_parse;
}

struct Flags {
    std::string in_path;
    std::string out_path;
    std::string target_text;
    double tol_cp = pqc::k_cp_tol_default;
    double tol_verify = 1e-9;
    std::uint64_t seed = 0;
    int samples = 100;
};

struct CommonOpts {
    CLI::Option* tol_cp = nullptr;
    CLI::Option* tol_verify = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* samples = nullptr;
};

CommonOpts add_common(CLI::App* cmd, Flags& flags) {
    CommonOpts opts;
    cmd->add_option("--out", flags.out_path, "output file (default: stdout)");
    opts.tol_cp = cmd->add_option("--tol-cp", flags.tol_cp, "complete positivity tolerance");
    opts.tol_verify = cmd->add_option("--tol-verify", flags.tol_verify, "verification tolerance");
    opts.seed = cmd->add_option("--seed", flags.seed, "seed for hull sampling");
    opts.samples = cmd->add_option("--samples", flags.samples, "hull samples / curve grid size");
    return opts;
}

void apply_overrides(pqc::JobSpec& spec, const Flags& flags, const CommonOpts& opts) {
    if (opts.tol_cp->count() > 0) spec.tol_cp = flags.tol_cp;
    if (opts.tol_verify->count() > 0) spec.tol_verify = flags.tol_verify;
    if (opts.seed->count() > 0) spec.seed = flags.seed;
    if (opts.samples->count() > 0) spec.samples = flags.samples;
    if (!flags.target_text.empty()) {
        if (flags.target_text == "auto") {
            spec.target_auto = true;
        } else {
            spec.target_auto = false;
            spec.target = pqc::state_of_json(pqc::json::parse(flags.target_text));
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-qubit private quantum channel toolkit"};
    app.require_subcommand(1);

    Flags flags;

    CLI::App* synth = app.add_subcommand("synth", "build an encrypting ensemble for a plaintext set");
    synth->add_option("--in", flags.in_path, "job file")->required();
    synth->add_option("--target", flags.target_text, "cipher state as JSON, or 'auto'");
    const CommonOpts synth_opts = add_common(synth, flags);

    CLI::App* classify = app.add_subcommand("classify", "diagonalize a channel and test encryption");
    classify->add_option("--in", flags.in_path, "channel file")->required();
    const CommonOpts classify_opts = add_common(classify, flags);

    CLI::App* curve = app.add_subcommand("curve", "key entropy H(r) for planes, as CSV");
    curve->add_option("--out", flags.out_path, "output file (default: stdout)");
    CLI::Option* curve_samples =
        curve->add_option("--samples", flags.samples, "grid size (default 101)");

    CLI::App* verify = app.add_subcommand("verify", "check a channel against a plaintext set");
    verify->add_option("--in", flags.in_path, "job file with an embedded channel")->required();
    const CommonOpts verify_opts = add_common(verify, flags);

    CLI11_PARSE(app, argc, argv);

    std::ostringstream buffer;
    int code = pqc::k_exit_ok;
    try {
        if (synth->parsed()) {
            pqc::JobSpec spec = pqc::jobspec_of_json(read_json_file(flags.in_path));
            apply_overrides(spec, flags, synth_opts);
            code = pqc::cmd_synth(spec, buffer);
        } else if (classify->parsed()) {
            const pqc::json doc = read_json_file(flags.in_path);
            pqc::JobSpec spec;
            apply_overrides(spec, flags, classify_opts);
            code = pqc::cmd_classify(doc, spec, buffer);
        } else if (curve->parsed()) {
            code = pqc::cmd_curve(curve_samples->count() > 0 ? flags.samples : 101, buffer);
        } else if (verify->parsed()) {
            const pqc::json job = read_json_file(flags.in_path);
            if (!job.contains("channel"))
                throw pqc::InvalidState("verify job file needs a \"channel\" block");
            pqc::JobSpec spec = pqc::jobspec_of_json(job);
            apply_overrides(spec, flags, verify_opts);
            code = pqc::cmd_verify(job.at("channel"), spec, buffer);
        }
    } catch (const pqc::UnachievableTarget& err) {
        const pqc::json payload = {
            {"schema", pqc::k_report_schema}, {"kind", "error"}, {"error", err.what()}};
        buffer.str("");
        buffer << payload.dump(2) << '\n';
        std::cerr << "pqc: " << err.what() << '\n';
        code = pqc::k_exit_unachievable;
    } catch (const pqc::NotUnital& err) {
        std::cerr << "pqc: " << err.what() << '\n';
        return pqc::k_exit_not_unital;
    } catch (const std::exception& err) {
        std::cerr << "pqc: " << err.what() << '\n';
        return pqc::k_exit_parse;
    }

    const int write_code = write_output(flags.out_path, buffer.str());
    return write_code == pqc::k_exit_ok ? code : write_code;
}
