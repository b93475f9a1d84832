#include "heatctl/config.hpp"

#include "heatctl/errors.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace heatctl {

namespace {

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + v +
                          "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected an integer, got '" +
                          v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + v +
                      "'");
}

struct KeyEntry {
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
    const char* doc;
};

std::string fmt_num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

const std::vector<std::pair<std::string, KeyEntry>>& key_table() {
    static const std::vector<std::pair<std::string, KeyEntry>> table = {
        {"omega.a1",
         {[](ExperimentConfig& c, const std::string& v) {
              c.omega_a = parse_double("omega.a1", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.omega_a); },
          "left end of the control interval"}},
        {"omega.a2",
         {[](ExperimentConfig& c, const std::string& v) {
              c.omega_b = parse_double("omega.a2", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.omega_b); },
          "right end of the control interval"}},
        {"T",
         {[](ExperimentConfig& c, const std::string& v) {
              c.T = parse_double("T", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.T); },
          "time horizon"}},
        {"nu",
         {[](ExperimentConfig& c, const std::string& v) {
              c.nu = parse_double("nu", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.nu); },
          "diffusion coefficient"}},
        {"u0.beta",
         {[](ExperimentConfig& c, const std::string& v) {
              c.u0_beta = parse_double("u0.beta", v);
          },
          [](const ExperimentConfig& c) {
              return c.u0_beta ? fmt_num(*c.u0_beta) : std::string("unset");
          },
          "amplitude of u0(x) = beta sin(pi x); required for runs"}},
        {"g.kind",
         {[](ExperimentConfig& c, const std::string& v) {
              if (v != "paper" && v != "linear" && v != "zero" &&
                  v != "custom-table")
                  throw ConfigError("key 'g.kind': must be one of paper, "
                                    "linear, zero, custom-table");
              c.g_kind = v;
          },
          [](const ExperimentConfig& c) { return c.g_kind; },
          "nonlinearity: paper | linear | zero | custom-table"}},
        {"g.a",
         {[](ExperimentConfig& c, const std::string& v) {
              c.g_a = parse_double("g.a", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.g_a); },
          "junction point of the benchmark nonlinearity"}},
        {"g.alpha",
         {[](ExperimentConfig& c, const std::string& v) {
              c.g_alpha = parse_double("g.alpha", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.g_alpha); },
          "growth exponent of the benchmark nonlinearity"}},
        {"g.c",
         {[](ExperimentConfig& c, const std::string& v) {
              c.g_c = parse_double("g.c", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.g_c); },
          "slope of the linear nonlinearity"}},
        {"g.smooth_inner",
         {[](ExperimentConfig& c, const std::string& v) {
              c.g_smooth_inner = parse_bool("g.smooth_inner", v);
          },
          [](const ExperimentConfig& c) {
              return std::string(c.g_smooth_inner ? "true" : "false");
          },
          "replace the |s| kink of the inner branch by an even quartic"}},
        {"g.table",
         {[](ExperimentConfig& c, const std::string& v) { c.g_table = v; },
          [](const ExperimentConfig& c) { return c.g_table; },
          "path of the (s, g) table for g.kind=custom-table"}},
        {"mesh.nx",
         {[](ExperimentConfig& c, const std::string& v) {
              c.mesh_nx = parse_int("mesh.nx", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.mesh_nx); },
          "space-time mesh cells in x"}},
        {"mesh.nt",
         {[](ExperimentConfig& c, const std::string& v) {
              c.mesh_nt = parse_int("mesh.nt", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.mesh_nt); },
          "space-time mesh cells in t"}},
        {"mesh.quad_order",
         {[](ExperimentConfig& c, const std::string& v) {
              c.mesh_quad_order = parse_int("mesh.quad_order", v);
          },
          [](const ExperimentConfig& c) {
              return fmt_num(c.mesh_quad_order);
          },
          "Gauss points per cell and direction (>= 3)"}},
        {"solver.kind",
         {[](ExperimentConfig& c, const std::string& v) {
              if (v != "direct" && v != "cg")
                  throw ConfigError(
                      "key 'solver.kind': must be direct or cg");
              c.solver_kind = v;
          },
          [](const ExperimentConfig& c) { return c.solver_kind; },
          "sparse solve: direct (LDLT) or cg"}},
        {"solver.constraint",
         {[](ExperimentConfig& c, const std::string& v) {
              if (v != "projected" && v != "pointwise")
                  throw ConfigError("key 'solver.constraint': must be "
                                    "projected or pointwise");
              c.solver_constraint = v;
          },
          [](const ExperimentConfig& c) { return c.solver_constraint; },
          "state elimination: projected (nodal) or pointwise"}},
        {"solver.cg_tol",
         {[](ExperimentConfig& c, const std::string& v) {
              c.solver_cg_tol = parse_double("solver.cg_tol", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.solver_cg_tol); },
          "relative residual for cg"}},
        {"solver.cg_maxit",
         {[](ExperimentConfig& c, const std::string& v) {
              c.solver_cg_maxit = parse_int("solver.cg_maxit", v);
          },
          [](const ExperimentConfig& c) {
              return fmt_num(c.solver_cg_maxit);
          },
          "iteration cap for cg"}},
        {"riesz.refine",
         {[](ExperimentConfig& c, const std::string& v) {
              c.riesz_refine = parse_int("riesz.refine", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.riesz_refine); },
          "spatial refinement factor of the dual-norm mesh"}},
        {"forward.nx",
         {[](ExperimentConfig& c, const std::string& v) {
              c.forward_nx = parse_int("forward.nx", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.forward_nx); },
          "forward-solver spatial nodes"}},
        {"forward.nt",
         {[](ExperimentConfig& c, const std::string& v) {
              c.forward_nt = parse_int("forward.nt", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.forward_nt); },
          "forward-solver time steps"}},
        {"forward.scheme",
         {[](ExperimentConfig& c, const std::string& v) {
              if (v != "crank_nicolson" && v != "implicit_euler")
                  throw ConfigError("key 'forward.scheme': must be "
                                    "crank_nicolson or implicit_euler");
              c.forward_scheme = v;
          },
          [](const ExperimentConfig& c) { return c.forward_scheme; },
          "time scheme of the forward solver"}},
        {"forward.newton_tol",
         {[](ExperimentConfig& c, const std::string& v) {
              c.forward_newton_tol = parse_double("forward.newton_tol", v);
          },
          [](const ExperimentConfig& c) {
              return fmt_num(c.forward_newton_tol);
          },
          "Newton tolerance per time step"}},
        {"forward.newton_maxit",
         {[](ExperimentConfig& c, const std::string& v) {
              c.forward_newton_maxit =
                  parse_int("forward.newton_maxit", v);
          },
          [](const ExperimentConfig& c) {
              return fmt_num(c.forward_newton_maxit);
          },
          "Newton iteration cap per time step"}},
        {"run.epsilon",
         {[](ExperimentConfig& c, const std::string& v) {
              c.run_epsilon = parse_double("run.epsilon", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.run_epsilon); },
          "stop when E drops below this"}},
        {"run.step_max",
         {[](ExperimentConfig& c, const std::string& v) {
              c.run_step_max = parse_double("run.step_max", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.run_step_max); },
          "line-search interval is [0, step_max]"}},
        {"run.variant",
         {[](ExperimentConfig& c, const std::string& v) {
              if (v != "ls" && v != "newton" && v != "picard")
                  throw ConfigError(
                      "key 'run.variant': must be ls, newton or picard");
              c.run_variant = v;
          },
          [](const ExperimentConfig& c) { return c.run_variant; },
          "iteration: ls | newton | picard"}},
        {"run.max_iters",
         {[](ExperimentConfig& c, const std::string& v) {
              c.run_max_iters = parse_int("run.max_iters", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.run_max_iters); },
          "iteration cap"}},
        {"run.divergence_cap",
         {[](ExperimentConfig& c, const std::string& v) {
              c.run_divergence_cap =
                  parse_double("run.divergence_cap", v);
          },
          [](const ExperimentConfig& c) {
              return fmt_num(c.run_divergence_cap);
          },
          "abort when sqrt(2E) exceeds cap x initial"}},
        {"run.picard_tol",
         {[](ExperimentConfig& c, const std::string& v) {
              c.run_picard_tol = parse_double("run.picard_tol", v);
          },
          [](const ExperimentConfig& c) {
              return fmt_num(c.run_picard_tol);
          },
          "rel_dy stop for the Picard baseline"}},
        {"weights.s",
         {[](ExperimentConfig& c, const std::string& v) {
              c.weights_s = parse_double("weights.s", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.weights_s); },
          "Carleman exponent scale s"}},
        {"weights.lam",
         {[](ExperimentConfig& c, const std::string& v) {
              c.weights_lam = parse_double("weights.lam", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.weights_lam); },
          "exponent lambda inside beta"}},
        {"weights.m",
         {[](ExperimentConfig& c, const std::string& v) {
              c.weights_m = parse_double("weights.m", v);
          },
          [](const ExperimentConfig& c) { return fmt_num(c.weights_m); },
          "amplification m > 1"}},
        {"output.dir",
         {[](ExperimentConfig& c, const std::string& v) {
              c.output_dir = v;
          },
          [](const ExperimentConfig& c) { return c.output_dir; },
          "directory for table.csv, records.jsonl, report.txt"}},
    };
    return table;
}

const KeyEntry* find_key(const std::string& key) {
    for (const auto& [k, e] : key_table())
        if (k == key) return &e;
    return nullptr;
}

} // namespace

WeightParams ExperimentConfig::weight_params() const {
    WeightParams wp;
    wp.s_w = weights_s;
    wp.lam_w = weights_lam;
    wp.m_w = weights_m;
    wp.T = T;
    wp.omega_a = omega_a;
    wp.omega_b = omega_b;
    validate(wp);
    return wp;
}

Grid ExperimentConfig::grid() const {
    Grid g;
    g.nx = mesh_nx;
    g.nt = mesh_nt;
    g.T = T;
    validate(g);
    return g;
}

Nonlinearity ExperimentConfig::nonlinearity() const {
    if (g_kind == "paper") return paper_g(g_a, g_alpha, g_smooth_inner);
    if (g_kind == "linear") return linear_g(g_c);
    if (g_kind == "zero") return zero_g();
    if (g_kind == "custom-table") {
        if (g_table.empty())
            throw ConfigError("g.kind=custom-table requires g.table=PATH");
        std::ifstream in(g_table);
        if (!in)
            throw ConfigError("cannot open g.table file '" + g_table + "'");
        std::vector<double> s, gs;
        double a, b;
        while (in >> a >> b) {
            s.push_back(a);
            gs.push_back(b);
        }
        return table_g(s, gs);
    }
    throw ConfigError("unknown g.kind '" + g_kind + "'");
}

SolverOptions ExperimentConfig::solver_options() const {
    SolverOptions o;
    o.kind = solver_kind == "cg" ? SolverOptions::Kind::cg
                                 : SolverOptions::Kind::direct;
    o.constraint = solver_constraint == "pointwise"
                       ? SolverOptions::Constraint::pointwise
                       : SolverOptions::Constraint::projected;
    o.cg_tol = solver_cg_tol;
    o.cg_maxit = solver_cg_maxit;
    return o;
}

ForwardConfig ExperimentConfig::forward_config() const {
    ForwardConfig f;
    f.nx = forward_nx;
    f.nt = forward_nt;
    f.scheme = forward_scheme == "implicit_euler"
                   ? ForwardConfig::Scheme::implicit_euler
                   : ForwardConfig::Scheme::crank_nicolson;
    f.newton_tol = forward_newton_tol;
    f.newton_maxit = forward_newton_maxit;
    f.nu = nu;
    f.T = T;
    return f;
}

RunConfig ExperimentConfig::run_config() const {
    RunConfig r;
    r.epsilon = run_epsilon;
    r.step_max = run_step_max;
    r.max_iters = run_max_iters;
    r.divergence_cap = run_divergence_cap;
    r.picard_tol = run_picard_tol;
    if (run_variant == "ls") r.variant = Variant::ls;
    else if (run_variant == "newton") r.variant = Variant::newton;
    else r.variant = Variant::picard;
    if (!(r.epsilon > 0.0)) throw ConfigError("run.epsilon must be > 0");
    if (!(r.step_max >= 1.0))
        throw ConfigError("run.step_max must be >= 1");
    return r;
}

double ExperimentConfig::beta_or_throw() const {
    if (!u0_beta)
        throw ConfigError(
            "u0.beta is required (initial data u0(x) = beta sin(pi x))");
    return *u0_beta;
}

std::vector<std::string> ExperimentConfig::dump() const {
    std::vector<std::string> out;
    for (const auto& [k, e] : key_table())
        out.push_back(k + " = " + e.get(*this));
    return out;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key=value, got '" + line + "'");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string()
                                          : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const KeyEntry* e = find_key(key);
        if (!e)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": unknown key '" + key + "'");
        try {
            e->set(cfg, value);
        } catch (const ConfigError& err) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " +
                              err.what());
        }
    }
    return cfg;
}

void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value) {
    const KeyEntry* e = find_key(key);
    if (!e) throw ConfigError("unknown key '" + key + "'");
    e->set(cfg, value);
}

void apply_override(ExperimentConfig& cfg, const std::string& keyval) {
    const auto eq = keyval.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must be key=value, got '" + keyval +
                          "'");
    apply_override(cfg, keyval.substr(0, eq), keyval.substr(eq + 1));
}

std::string config_key_help() {
    std::ostringstream os;
    ExperimentConfig defaults;
    for (const auto& [k, e] : key_table()) {
        os << "  " << k;
        for (std::size_t i = k.size(); i < 24; ++i) os << ' ';
        os << e.get(defaults);
        std::string d = e.get(defaults);
        for (std::size_t i = d.size(); i < 16; ++i) os << ' ';
        os << e.doc << "\n";
    }
    return os.str();
}

} // namespace heatctl
