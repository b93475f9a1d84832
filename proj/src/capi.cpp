#include "heatctl.h"

#include "heatctl/config.hpp"
#include "heatctl/errors.hpp"
#include "heatctl/parallel.hpp"
#include "heatctl/reporting.hpp"

#include <cstring>
#include <string>

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename F>
int guarded(F&& f) {
    try {
        f();
        return HEATCTL_OK;
    } catch (const heatctl::ConfigError& e) {
        set_error(e.what());
        return HEATCTL_ERR_CONFIG;
    } catch (const std::exception& e) {
        set_error(e.what());
        return HEATCTL_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return HEATCTL_ERR_INTERNAL;
    }
}

int resolve_threads(int threads) {
    return threads <= 0 ? heatctl::default_threads() : threads;
}

} // namespace

struct heatctl_config_s {
    heatctl::ExperimentConfig cfg;
};

struct heatctl_run_s {
    heatctl::RunOutput out;
    std::string scratch;
};

struct heatctl_check_s {
    heatctl::CheckReport report;
    std::string text;
};

extern "C" {

const char* heatctl_version(void) { return "0.1.0"; }

const char* heatctl_last_error(void) { return g_last_error.c_str(); }

heatctl_config* heatctl_config_create(void) {
    return new (std::nothrow) heatctl_config_s();
}

void heatctl_config_destroy(heatctl_config* cfg) { delete cfg; }

int heatctl_config_load_file(heatctl_config* cfg, const char* path) {
    if (!cfg || !path) {
        set_error("null argument");
        return HEATCTL_ERR_CONFIG;
    }
    return guarded([&] {
        heatctl::ExperimentConfig parsed = heatctl::parse_config_file(path);
        cfg->cfg = parsed;
    });
}

int heatctl_config_set(heatctl_config* cfg, const char* key,
                       const char* value) {
    if (!cfg || !key || !value) {
        set_error("null argument");
        return HEATCTL_ERR_CONFIG;
    }
    return guarded([&] { heatctl::apply_override(cfg->cfg, key, value); });
}

int heatctl_config_set_kv(heatctl_config* cfg, const char* keyval) {
    if (!cfg || !keyval) {
        set_error("null argument");
        return HEATCTL_ERR_CONFIG;
    }
    return guarded(
        [&] { heatctl::apply_override(cfg->cfg, std::string(keyval)); });
}

int heatctl_config_dump(const heatctl_config* cfg, char* buf, int buflen) {
    if (!cfg) {
        set_error("null argument");
        return -1;
    }
    std::string all;
    for (const auto& line : cfg->cfg.dump()) {
        all += line;
        all += '\n';
    }
    if (buf && buflen > 0) {
        const int n = std::min<int>(buflen - 1, static_cast<int>(all.size()));
        std::memcpy(buf, all.data(), n);
        buf[n] = '\0';
    }
    return static_cast<int>(all.size()) + 1;
}

const char* heatctl_config_keys(void) {
    static const std::string keys = heatctl::config_key_help();
    return keys.c_str();
}

heatctl_run* heatctl_run_execute(const heatctl_config* cfg,
                                 const char* variant, int threads) {
    if (!cfg || !variant) {
        set_error("null argument");
        return nullptr;
    }
    const std::string v(variant);
    if (v != "ls" && v != "newton" && v != "picard") {
        set_error("variant must be ls, newton or picard");
        return nullptr;
    }
    auto* run = new (std::nothrow) heatctl_run_s();
    if (!run) {
        set_error("out of memory");
        return nullptr;
    }
    const int rc = guarded([&] {
        run->out = heatctl::execute(cfg->cfg, v, resolve_threads(threads));
    });
    if (rc != HEATCTL_OK) {
        delete run;
        return nullptr;
    }
    return run;
}

void heatctl_run_destroy(heatctl_run* run) { delete run; }

int heatctl_run_status(const heatctl_run* run) {
    if (!run) return HEATCTL_ERR_INTERNAL;
    return static_cast<int>(run->out.result.status);
}

int heatctl_run_record_count(const heatctl_run* run) {
    if (!run) return 0;
    return static_cast<int>(run->out.result.records.size());
}

int heatctl_run_record(const heatctl_run* run, int idx, double out[7]) {
    if (!run || !out) {
        set_error("null argument");
        return HEATCTL_ERR_CONFIG;
    }
    const auto& recs = run->out.result.records;
    if (idx < 0 || idx >= static_cast<int>(recs.size())) {
        set_error("record index out of range");
        return HEATCTL_ERR_CONFIG;
    }
    const auto& r = recs[idx];
    out[0] = r.k;
    out[1] = r.rel_dy;
    out[2] = r.rel_df;
    out[3] = r.norm_y;
    out[4] = r.norm_f;
    out[5] = r.sqrt2E;
    out[6] = r.lambda;
    return HEATCTL_OK;
}

int heatctl_run_forward_ratio(const heatctl_run* run, double* ratio) {
    if (!run || !ratio) {
        set_error("null argument");
        return HEATCTL_ERR_CONFIG;
    }
    if (!run->out.forward_ratio) {
        set_error("forward verification only available for converged "
                  "ls/newton runs");
        return HEATCTL_ERR_INTERNAL;
    }
    *ratio = *run->out.forward_ratio;
    return HEATCTL_OK;
}

int heatctl_run_write_csv(const heatctl_run* run, const char* path) {
    if (!run || !path) {
        set_error("null argument");
        return HEATCTL_ERR_CONFIG;
    }
    return guarded([&] {
        heatctl::write_file(path,
                            heatctl::emit_table(run->out.result.records));
    });
}

int heatctl_run_write_records(const heatctl_run* run, const char* path) {
    if (!run || !path) {
        set_error("null argument");
        return HEATCTL_ERR_CONFIG;
    }
    return guarded([&] {
        heatctl::write_file(path,
                            heatctl::emit_records(run->out.result.records));
    });
}

int heatctl_run_write_report(const heatctl_run* run, const char* path) {
    if (!run || !path) {
        set_error("null argument");
        return HEATCTL_ERR_CONFIG;
    }
    return guarded(
        [&] { heatctl::write_file(path, heatctl::emit_report(run->out)); });
}

int heatctl_table_from_records(const char* records_path,
                               const char* csv_path) {
    if (!records_path || !csv_path) {
        set_error("null argument");
        return HEATCTL_ERR_CONFIG;
    }
    return guarded([&] {
        const auto records =
            heatctl::parse_records(heatctl::read_file(records_path));
        heatctl::write_file(csv_path, heatctl::emit_table(records));
    });
}

heatctl_check* heatctl_check_execute(const heatctl_config* cfg,
                                     int threads) {
    if (!cfg) {
        set_error("null argument");
        return nullptr;
    }
    auto* chk = new (std::nothrow) heatctl_check_s();
    if (!chk) {
        set_error("out of memory");
        return nullptr;
    }
    const int rc = guarded([&] {
        chk->report = heatctl::check_suite(cfg->cfg, resolve_threads(threads));
        chk->text = chk->report.text();
    });
    if (rc != HEATCTL_OK) {
        delete chk;
        return nullptr;
    }
    return chk;
}

void heatctl_check_destroy(heatctl_check* chk) { delete chk; }

int heatctl_check_passed(const heatctl_check* chk) {
    return chk && chk->report.all_pass() ? 1 : 0;
}

const char* heatctl_check_text(const heatctl_check* chk) {
    return chk ? chk->text.c_str() : "";
}

} // extern "C"
