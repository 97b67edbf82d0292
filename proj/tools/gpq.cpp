#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include "gpq/errors.hpp"
#include "gpq/experiments.hpp"

namespace {

struct Job {
    std::string config;  // empty: built-in defaults
    std::string log;
    int code = 0;
};

void run_job(Job& job, const std::string& cmd, const std::string& out_override, bool many) {
    std::ostringstream log;
    try {
        gpq::RunConfig cfg = job.config.empty() ? gpq::RunConfig{} : gpq::load_config(job.config);
        std::filesystem::path base = out_override.empty() ? std::filesystem::path(cfg.out_dir) : std::filesystem::path(out_override);
        if (many) base /= std::filesystem::path(job.config).stem();
        cfg.out_dir = base.string();
        job.code = gpq::run_command(cmd, cfg, log);
    } catch (const gpq::Error& e) {
        log << "error: " << e.what() << "\n";
        job.code = gpq::is_config_error(e.code()) ? 2 : 3;
    }
    job.log = log.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gpq - numerical lab for the 1-D quintic Gross-Pitaevskii equation"};
    app.require_subcommand(1);

    std::vector<std::string> configs;
    int jobs = 1;
    std::string out;
    bool serial = false;

    const std::vector<std::pair<std::string, std::string>> cmds = {
        {"verify", "run the closed-form identity suite"},
        {"spectrum", "lowest eigenvalues of the linearized pencil"},
        {"evolve", "time-evolve the configured initial data"},
        {"modulate", "fit (c, a, theta) to a snapshot file"},
        {"stability", "perturbed black soliton stability run"},
        {"profile", "write a soliton profile table"},
    };
    for (const auto& [name, help] : cmds) {
        auto* sc = app.add_subcommand(name, help);
        sc->add_option("--config", configs, "config file(s); several run as independent jobs");
        sc->add_option("--jobs", jobs, "number of configs run concurrently")->check(CLI::PositiveNumber);
        sc->add_option("--out", out, "output directory (overrides GPQ_OUT and output.dir)");
        sc->add_flag("--serial", serial, "use the serial reference kernels");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();

    if (out.empty())
        if (const char* env = std::getenv("GPQ_OUT"); env && *env) out = env;
    if (serial) gpq::set_exec(gpq::Exec::serial);

    std::vector<Job> list;
    if (configs.empty())
        list.push_back({});
    else
        for (const auto& c : configs) list.push_back({c});
    const bool many = list.size() > 1;

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < list.size();) run_job(list[i], cmd, out, many);
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(jobs, static_cast<int>(list.size()));
    for (int k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int code = 0;
    for (const auto& j : list) {
        if (many) std::cout << "== " << j.config << " (exit " << j.code << ")\n";
        std::cout << j.log;
        code = std::max(code, j.code);
    }
    return code;
}
