#include "heatctl/reporting.hpp"

#include "heatctl/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace heatctl {

std::string format_sci(double v) {
    if (v == 0.0) return "0.000000e0";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    const std::string s(buf);
    const auto e = s.find('e');
    const std::string mant = s.substr(0, e);
    std::string exp = s.substr(e + 1);
    const bool neg = exp[0] == '-';
    std::size_t i = 1;
    while (i + 1 < exp.size() && exp[i] == '0') ++i;
    return mant + "e" + (neg ? "-" : "") + exp.substr(i);
}

std::string emit_table(const std::vector<IterationRecord>& records) {
    if (records.empty())
        throw SolverError("emit_table: no records");
    std::string out = "k,rel_dy,rel_df,norm_y,norm_f,sqrt2E,lambda\n";
    for (const auto& r : records) {
        out += std::to_string(r.k);
        out += ',';
        out += format_sci(r.rel_dy);
        out += ',';
        out += format_sci(r.rel_df);
        out += ',';
        out += format_sci(r.norm_y);
        out += ',';
        out += format_sci(r.norm_f);
        out += ',';
        out += format_sci(r.sqrt2E);
        out += ',';
        out += format_sci(r.lambda);
        out += '\n';
    }
    return out;
}

std::string emit_records(const std::vector<IterationRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["k"] = r.k;
        j["rel_dy"] = r.rel_dy;
        j["rel_df"] = r.rel_df;
        j["norm_y"] = r.norm_y;
        j["norm_f"] = r.norm_f;
        j["sqrt2E"] = r.sqrt2E;
        j["lambda"] = r.lambda;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<IterationRecord> parse_records(const std::string& jsonl) {
    std::vector<IterationRecord> out;
    std::istringstream in(jsonl);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw ConfigError("records line " + std::to_string(lineno) +
                              ": " + e.what());
        }
        IterationRecord r;
        r.k = j.at("k").get<int>();
        r.rel_dy = j.at("rel_dy").get<double>();
        r.rel_df = j.at("rel_df").get<double>();
        r.norm_y = j.at("norm_y").get<double>();
        r.norm_f = j.at("norm_f").get<double>();
        r.sqrt2E = j.at("sqrt2E").get<double>();
        r.lambda = j.at("lambda").get<double>();
        out.push_back(r);
    }
    return out;
}

RunOutput execute(const ExperimentConfig& cfg, const std::string& variant,
                  int threads) {
    RunOutput out;
    out.cfg = cfg;
    out.variant = variant;

    ExperimentConfig c = cfg;
    c.run_variant = variant;
    const double beta = c.beta_or_throw();

    Workspace ws(c.weight_params(), c.grid(), c.nonlinearity(),
                 c.mesh_quad_order, c.riesz_refine, c.solver_options(),
                 c.nu, threads);
    Driver drv(ws);
    auto u0 = [beta](double x) { return beta * std::sin(M_PI * x); };

    const RunConfig rc = c.run_config();
    if (rc.variant == Variant::picard)
        out.result = drv.picard_run(u0, rc);
    else
        out.result = drv.run(u0, rc);

    if (rc.variant != Variant::picard &&
        out.result.status == RunStatus::converged) {
        const auto rep =
            null_control_report(ws, out.result.state, u0, c.forward_config());
        out.forward_ratio = rep.ratio;
    }
    return out;
}

std::string emit_report(const RunOutput& out) {
    std::ostringstream os;
    os << "heatctl " << out.variant << " report\n";
    const char* status = "maxiter";
    if (out.result.status == RunStatus::converged) status = "converged";
    if (out.result.status == RunStatus::diverged) status = "diverged";
    os << "status: " << status << "\n";
    os << "iterations: " << out.result.records.size() - 1 << "\n";
    const auto& last = out.result.records.back();
    os << "final sqrt(2E): " << format_sci(last.sqrt2E) << "\n";
    os << "final ||y||_L2(QT): " << format_sci(last.norm_y) << "\n";
    os << "final ||f||_L2(qT): " << format_sci(last.norm_f) << "\n";
    if (out.forward_ratio)
        os << "forward check ||y(T)||/||u0||: "
           << format_sci(*out.forward_ratio) << "\n";
    if (out.variant == "picard") {
        if (out.result.picard_converged)
            os << "note: the fixed-point iteration converged on this mesh; "
                  "the reference behaviour for this setup is bounded "
                  "non-convergence\n";
        else
            os << "note: fixed-point iterates stayed bounded without "
                  "reaching the rel_dy tolerance\n";
    }
    os << "config:\n";
    for (const auto& line : out.cfg.dump()) os << "  " << line << "\n";
    return os.str();
}

std::string CheckReport::text() const {
    std::ostringstream os;
    for (const auto& c : checks)
        os << (c.pass ? "[pass] " : "[FAIL] ") << c.name
           << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    os << (all_pass() ? "all checks passed" : "CHECKS FAILED") << "\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SolverError("cannot write '" + path + "'");
    out << content;
    if (!out) throw SolverError("write failed for '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace heatctl
