// Exercises the shared-library surface the way an external client would.
#include "heatctl.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

static int failures = 0;

#define REQUIRE_C(cond)                                                     \
    do {                                                                    \
        if (!(cond)) {                                                      \
            std::printf("FAIL %s:%d: %s (last error: %s)\n", __FILE__,      \
                        __LINE__, #cond, heatctl_last_error());             \
            ++failures;                                                     \
        }                                                                   \
    } while (0)

int main() {
    REQUIRE_C(std::strcmp(heatctl_version(), "0.1.0") == 0);
    REQUIRE_C(heatctl_config_keys() != nullptr);
    REQUIRE_C(std::strstr(heatctl_config_keys(), "u0.beta") != nullptr);

    heatctl_config* cfg = heatctl_config_create();
    REQUIRE_C(cfg != nullptr);

    // config errors surface as codes with messages
    REQUIRE_C(heatctl_config_set(cfg, "mesh.nx", "banana") ==
              HEATCTL_ERR_CONFIG);
    REQUIRE_C(std::strlen(heatctl_last_error()) > 0);
    REQUIRE_C(heatctl_config_set_kv(cfg, "no.such.key=1") ==
              HEATCTL_ERR_CONFIG);
    REQUIRE_C(heatctl_config_load_file(cfg, "/nonexistent.cfg") ==
              HEATCTL_ERR_CONFIG);

    // a run without beta is a config error
    REQUIRE_C(heatctl_run_execute(cfg, "ls", 1) == nullptr);

    REQUIRE_C(heatctl_config_set_kv(cfg, "u0.beta=10") == HEATCTL_OK);
    REQUIRE_C(heatctl_config_set_kv(cfg, "mesh.nx=16") == HEATCTL_OK);
    REQUIRE_C(heatctl_config_set_kv(cfg, "mesh.nt=16") == HEATCTL_OK);
    REQUIRE_C(heatctl_config_set_kv(cfg, "g.kind=linear") == HEATCTL_OK);

    char buf[8192];
    const int need = heatctl_config_dump(cfg, buf, sizeof buf);
    REQUIRE_C(need > 0);
    REQUIRE_C(std::strstr(buf, "mesh.nx = 16") != nullptr);

    REQUIRE_C(heatctl_run_execute(cfg, "bogus", 1) == nullptr);

    heatctl_run* run = heatctl_run_execute(cfg, "ls", 2);
    REQUIRE_C(run != nullptr);
    if (run) {
        REQUIRE_C(heatctl_run_status(run) == HEATCTL_STATUS_CONVERGED);
        const int n = heatctl_run_record_count(run);
        REQUIRE_C(n >= 1);
        double rec[7];
        REQUIRE_C(heatctl_run_record(run, 0, rec) == HEATCTL_OK);
        REQUIRE_C(rec[0] == 0.0);
        REQUIRE_C(rec[3] > 0.0); // ||y_0||
        REQUIRE_C(heatctl_run_record(run, n, rec) == HEATCTL_ERR_CONFIG);

        double ratio = -1.0;
        REQUIRE_C(heatctl_run_forward_ratio(run, &ratio) == HEATCTL_OK);
        REQUIRE_C(ratio >= 0.0);

        REQUIRE_C(heatctl_run_write_csv(run, "/tmp/capi_table.csv") ==
                  HEATCTL_OK);
        REQUIRE_C(heatctl_run_write_records(run, "/tmp/capi_records.jsonl") ==
                  HEATCTL_OK);
        REQUIRE_C(heatctl_run_write_report(run, "/tmp/capi_report.txt") ==
                  HEATCTL_OK);
        REQUIRE_C(heatctl_run_write_csv(run, "/nonexistent/dir/t.csv") !=
                  HEATCTL_OK);

        REQUIRE_C(heatctl_table_from_records("/tmp/capi_records.jsonl",
                                             "/tmp/capi_table2.csv") ==
                  HEATCTL_OK);
        // byte-identical re-emission
        FILE* f1 = std::fopen("/tmp/capi_table.csv", "rb");
        FILE* f2 = std::fopen("/tmp/capi_table2.csv", "rb");
        REQUIRE_C(f1 && f2);
        if (f1 && f2) {
            std::string s1, s2;
            int c;
            while ((c = std::fgetc(f1)) != EOF) s1.push_back(char(c));
            while ((c = std::fgetc(f2)) != EOF) s2.push_back(char(c));
            REQUIRE_C(s1 == s2);
        }
        if (f1) std::fclose(f1);
        if (f2) std::fclose(f2);
        heatctl_run_destroy(run);
    }

    heatctl_config_destroy(cfg);

    if (failures == 0) std::printf("capi: all checks passed\n");
    return failures == 0 ? 0 : 1;
}
