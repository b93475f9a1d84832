// heatctl command line tool. All functionality goes through the C API of
// the shared library; this file only does argument handling and file
// placement.

#include "heatctl.h"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

constexpr int kExitConfig = 4;
constexpr int kExitInternal = 5;

struct ConfigDeleter {
    void operator()(heatctl_config* c) const { heatctl_config_destroy(c); }
};
struct RunDeleter {
    void operator()(heatctl_run* r) const { heatctl_run_destroy(r); }
};
struct CheckDeleter {
    void operator()(heatctl_check* c) const { heatctl_check_destroy(c); }
};

using ConfigPtr = std::unique_ptr<heatctl_config, ConfigDeleter>;

int fail(int code) {
    std::cerr << "heatctl: " << heatctl_last_error() << "\n";
    return code;
}

ConfigPtr build_config(const std::string& config_path,
                       const std::vector<std::string>& sets, int& err) {
    ConfigPtr cfg(heatctl_config_create());
    err = 0;
    if (!cfg) {
        err = kExitInternal;
        return cfg;
    }
    if (!config_path.empty()) {
        if (int rc = heatctl_config_load_file(cfg.get(), config_path.c_str());
            rc != HEATCTL_OK) {
            err = rc;
            return cfg;
        }
    }
    for (const auto& kv : sets) {
        if (int rc = heatctl_config_set_kv(cfg.get(), kv.c_str());
            rc != HEATCTL_OK) {
            err = rc;
            return cfg;
        }
    }
    return cfg;
}

std::string resolve_out_dir(const std::string& flag_dir,
                            const heatctl_config* cfg) {
    if (!flag_dir.empty()) return flag_dir;
    if (const char* env = std::getenv("HEATCTL_OUT"); env && *env)
        return env;
    // fall back to output.dir from the config dump
    std::vector<char> buf(65536);
    heatctl_config_dump(cfg, buf.data(), static_cast<int>(buf.size()));
    std::string dump(buf.data());
    const std::string key = "output.dir = ";
    const auto pos = dump.find(key);
    if (pos == std::string::npos) return ".";
    const auto end = dump.find('\n', pos);
    return dump.substr(pos + key.size(), end - pos - key.size());
}

int run_variant(const std::string& variant, const std::string& config_path,
                const std::vector<std::string>& sets, int threads,
                const std::string& out_flag) {
    int err = 0;
    ConfigPtr cfg = build_config(config_path, sets, err);
    if (err) return fail(err);

    std::unique_ptr<heatctl_run, RunDeleter> run(
        heatctl_run_execute(cfg.get(), variant.c_str(), threads));
    if (!run) return fail(kExitInternal);

    const std::string dir = resolve_out_dir(out_flag, cfg.get());
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);

    const std::string csv = dir + "/table.csv";
    const std::string records = dir + "/records.jsonl";
    const std::string report = dir + "/report.txt";
    if (heatctl_run_write_csv(run.get(), csv.c_str()) != HEATCTL_OK)
        return fail(kExitInternal);
    if (heatctl_run_write_records(run.get(), records.c_str()) != HEATCTL_OK)
        return fail(kExitInternal);
    if (heatctl_run_write_report(run.get(), report.c_str()) != HEATCTL_OK)
        return fail(kExitInternal);

    const int status = heatctl_run_status(run.get());
    const int n = heatctl_run_record_count(run.get());
    double last[7] = {0};
    heatctl_run_record(run.get(), n - 1, last);
    std::cout << variant << ": "
              << (status == HEATCTL_STATUS_CONVERGED   ? "converged"
                  : status == HEATCTL_STATUS_DIVERGED ? "diverged"
                                                       : "maxiter")
              << " after " << n - 1 << " iterations, sqrt(2E) = " << last[5]
              << "\n";
    double ratio = 0.0;
    if (heatctl_run_forward_ratio(run.get(), &ratio) == HEATCTL_OK)
        std::cout << "forward check ||y(T)||/||u0|| = " << ratio << "\n";
    std::cout << "outputs: " << csv << ", " << records << ", " << report
              << "\n";
    return status;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"null controls for the 1D semilinear heat equation via "
                 "Carleman-weighted space-time least squares"};
    app.require_subcommand(1);
    app.footer(std::string("config keys (key  default  description):\n") +
               heatctl_config_keys());

    std::string config_path, out_dir, records_path;
    std::vector<std::string> sets;
    int threads = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path,
                        "flat key=value configuration file");
        sub->add_option("--set", sets, "override: key=value")
            ->take_all()
            ->allow_extra_args(false);
        sub->add_option("--threads", threads,
                        "worker threads (default: hardware)");
        sub->add_option("--out", out_dir,
                        "output directory (overrides HEATCTL_OUT and "
                        "output.dir)");
    };

    CLI::App* cmd_run =
        app.add_subcommand("run", "least-squares (damped Newton) iteration");
    add_common(cmd_run);
    CLI::App* cmd_newton =
        app.add_subcommand("newton", "undamped Newton iteration");
    add_common(cmd_newton);
    CLI::App* cmd_picard =
        app.add_subcommand("picard", "fixed-point baseline iteration");
    add_common(cmd_picard);
    CLI::App* cmd_check =
        app.add_subcommand("check", "run the property-check suite");
    add_common(cmd_check);
    CLI::App* cmd_table = app.add_subcommand(
        "table", "re-emit table.csv from a stored records file");
    cmd_table->add_option("--records", records_path, "records.jsonl path")
        ->required();
    cmd_table->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (cmd_run->parsed())
            return run_variant("ls", config_path, sets, threads, out_dir);
        if (cmd_newton->parsed())
            return run_variant("newton", config_path, sets, threads,
                               out_dir);
        if (cmd_picard->parsed())
            return run_variant("picard", config_path, sets, threads,
                               out_dir);
        if (cmd_check->parsed()) {
            int err = 0;
            ConfigPtr cfg = build_config(config_path, sets, err);
            if (err) return fail(err);
            std::unique_ptr<heatctl_check, CheckDeleter> chk(
                heatctl_check_execute(cfg.get(), threads));
            if (!chk) return fail(kExitInternal);
            std::cout << heatctl_check_text(chk.get());
            const std::string dir = resolve_out_dir(out_dir, cfg.get());
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            std::ofstream(dir + "/report.txt")
                << heatctl_check_text(chk.get());
            return heatctl_check_passed(chk.get()) ? 0 : kExitInternal;
        }
        if (cmd_table->parsed()) {
            const std::string dir = out_dir.empty() ? "." : out_dir;
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            const std::string csv = dir + "/table.csv";
            if (heatctl_table_from_records(records_path.c_str(),
                                           csv.c_str()) != HEATCTL_OK)
                return fail(kExitConfig);
            std::cout << "wrote " << csv << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "heatctl: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitConfig;
}
