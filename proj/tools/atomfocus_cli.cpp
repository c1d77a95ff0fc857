#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "atomfocus/config.hpp"
#include "atomfocus/runner.hpp"

using atomfocus::io::ExperimentConfig;
using atomfocus::io::RunMode;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string outdir;
    int threads = 0;        // 0 = keep config value
    bool force_2d = false;
    bool force_3d = false;
    int verbosity = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required) {
    auto* c = cmd->add_option("-c,--config", f.config_path, "experiment config file");
    if (config_required) c->required();
    cmd->add_option("-o,--outdir", f.outdir, "output directory (overrides run.output_dir)");
    cmd->add_option("-t,--threads", f.threads, "worker threads (overrides run.threads)");
    auto* d2 = cmd->add_flag("--2d", f.force_2d, "collapsed-y desk model");
    cmd->add_flag("--3d", f.force_3d, "full 3D (default)")->excludes(d2);
    cmd->add_flag("-v,--verbose", f.verbosity, "progress output (repeat for more)");
}

ExperimentConfig load(const CommonFlags& f, RunMode mode) {
    ExperimentConfig cfg;
    if (!f.config_path.empty()) cfg = atomfocus::io::load_config_file(f.config_path);
    cfg.mode = mode;
    if (!f.outdir.empty()) cfg.output_dir = f.outdir;
    if (f.threads > 0) cfg.threads = f.threads;
    if (f.force_2d) cfg.dim = 2;
    if (f.force_3d) cfg.dim = 3;
    return cfg;
}

int execute(const ExperimentConfig& cfg, int verbosity) {
    auto manifest = atomfocus::io::run(cfg, verbosity);
    std::printf("%s: wrote %zu output(s) to %s (%.1f s)\n", manifest.mode.c_str(),
                manifest.outputs.size(), cfg.output_dir.c_str(), manifest.wall_seconds);
    for (const auto& w : manifest.warnings) std::printf("  warning: %s\n", w.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"atom-lens simulation toolkit"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        RunMode mode;
        bool config_required;
    };
    const Sub subs[] = {
        {"ground-state", "relax and report the trapped ground state", RunMode::ground_state, false},
        {"focus", "full focusing pipeline (ground state, release, profile)", RunMode::gpe, false},
        {"classical", "ray deposition through the lens", RunMode::classical, false},
        {"budget", "closed-form aberration budget", RunMode::budget, false},
        {"sweep", "kick and/or power scan", RunMode::sweep, true},
        {"analyze", "re-fit an existing profile CSV", RunMode::analyze, false},
    };

    CommonFlags flags[std::size(subs)];
    std::string analyze_input;
    for (std::size_t i = 0; i < std::size(subs); ++i) {
        auto* cmd = app.add_subcommand(subs[i].name, subs[i].help);
        add_common(cmd, flags[i], subs[i].config_required);
        if (subs[i].mode == RunMode::analyze)
            cmd->add_option("-i,--input", analyze_input, "profile CSV to re-fit")->required();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < std::size(subs); ++i) {
            auto* cmd = app.get_subcommand(subs[i].name);
            if (!cmd->parsed()) continue;
            auto cfg = load(flags[i], subs[i].mode);
            if (subs[i].mode == RunMode::analyze) cfg.analyze_input = analyze_input;
            return execute(cfg, flags[i].verbosity);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
