#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "loglap/assembly.hpp"
#include "loglap/errors.hpp"
#include "loglap/geometry.hpp"
#include "loglap/pointops.hpp"
#include "loglap/poisson.hpp"
#include "loglap/special.hpp"
#include "loglap/spectral.hpp"

namespace loglap::cli {

using nlohmann::json;

namespace {

const std::vector<std::pair<Command, const char*>> kCommands = {
    {Command::constants, "constants"}, {Command::eval, "eval"},       {Command::assemble, "assemble"},
    {Command::eig, "eig"},             {Command::slimit, "slimit"},   {Command::faberkrahn, "faberkrahn"},
    {Command::maxprin, "maxprin"},     {Command::poisson, "poisson"}, {Command::hardy, "hardy"},
    {Command::barrier, "barrier"},
};

bool needs_domain(Command c) {
    return c != Command::constants && c != Command::eval && c != Command::barrier;
}

// key=value lines become --key value unless the flag is already on the command line.
std::vector<std::string> read_config(const std::string& path, const std::vector<std::string>& args) {
    std::ifstream in(path);
    if (!in) throw UsageError("--config: cannot read " + path);
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::vector<std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("--config: line " + std::to_string(lineno) + " is not key=value");
        const std::string key = "--" + trim(line.substr(0, eq));
        if (key == "--config") throw UsageError("--config: nested config files are not supported");
        if (std::find(args.begin(), args.end(), key) != args.end()) continue;
        out.push_back(key);
        out.push_back(trim(line.substr(eq + 1)));
    }
    return out;
}

}  // namespace

const char* command_name(Command c) {
    for (const auto& [k, n] : kCommands)
        if (k == c) return n;
    return "unknown";
}

RunConfig parse_args(const std::vector<std::string>& args) {
    RunConfig cfg;
    CLI::App app{"Logarithmic Laplacian toolkit"};
    std::string config_path;
    app.add_option("--config", config_path, "Flat key=value file; command-line flags override it");
    app.require_subcommand(1, 1);

    std::string format = "json";
    std::optional<double> tau;
    std::string lambda1_text;
    app.add_option("--domain", cfg.domains, "Domain spec (repeat for faberkrahn)");
    app.add_option("--dim", cfg.dim, "Space dimension")->check(CLI::Range(1, 10));
    app.add_option("--cells", cfg.cells, "Cells per unit length")->check(CLI::PositiveNumber);
    app.add_option("--s", cfg.s_list, "Fractional orders")->delimiter(',');
    app.add_option("--tau", tau, "Decay / barrier exponent");
    app.add_option("--count", cfg.count, "Number of eigenpairs")->check(CLI::PositiveNumber);
    app.add_option("--R", cfg.R, "Barrier ball radius");
    app.add_option("--rho", cfg.rho, "Barrier distances")->delimiter(',');
    app.add_option("--shells", cfg.shells, "Decay shells t_k")->delimiter(',');
    app.add_option("--field", cfg.field, "bump | gauss:sigma=S | cosbell:r=R | const:C");
    app.add_option("--x", cfg.x, "Evaluation point")->delimiter(',');
    app.add_option("--kind", cfg.kind, "Form kind")
        ->check(CLI::IsMember({"potential", "truncated", "frac", "interior"}));
    app.add_option("--lambda1-classical", lambda1_text, "Classical Dirichlet eigenvalue, or 'auto'");
    app.add_option("--dump", cfg.dump, "Matrix dump path");
    app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output", cfg.output, "Report path (stdout when empty)");
    app.add_option("--abs-tol", cfg.quad.abs_tol, "Quadrature absolute tolerance")->check(CLI::PositiveNumber);
    app.add_option("--max-depth", cfg.quad.max_depth, "Quadrature bisection depth")->check(CLI::Range(1, 200));
    app.add_option("--seed", cfg.quad.seed, "Random seed");
    app.add_option("--threads", cfg.threads, "Assembly worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

    std::vector<CLI::App*> subs;
    for (const auto& [k, n] : kCommands) subs.push_back(app.add_subcommand(n)->fallthrough());

    if (!args.empty() && !args.front().empty() && args.front()[0] != '-') {
        bool known = false;
        for (const auto& kc : kCommands) known = known || args.front() == kc.second;
        if (!known) throw UsageError("unknown command '" + args.front() + "'");
    }
    std::vector<std::string> all = args;
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--config") {
            std::vector<std::string> extra = read_config(args[i + 1], args);
            all.insert(all.end(), extra.begin(), extra.end());
        }
    std::vector<std::string> rev(all.rbegin(), all.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        throw UsageError(app.help(), true);
    } catch (const CLI::CallForAllHelp&) {
        throw UsageError(app.help("", CLI::AppFormatMode::All), true);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) cfg.command = kCommands[i].first;

    cfg.format = format == "csv" ? Format::csv : Format::json;
    if (!lambda1_text.empty() && lambda1_text != "auto") {
        try {
            std::size_t pos = 0;
            cfg.lambda1_classical = std::stod(lambda1_text, &pos);
            if (pos != lambda1_text.size()) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            throw UsageError("--lambda1-classical: expected a number or 'auto', got '" + lambda1_text + "'");
        }
        if (!(*cfg.lambda1_classical > 0.0)) throw UsageError("--lambda1-classical must be positive");
    }

    const Command c = cfg.command;
    cfg.tau = tau.value_or(c == Command::barrier ? 0.3 : 0.4);
    if (needs_domain(c) && cfg.domains.empty()) throw UsageError(std::string(command_name(c)) + " requires --domain");
    if (c == Command::faberkrahn && cfg.domains.size() < 2) throw UsageError("faberkrahn needs at least two --domain");
    if (c != Command::faberkrahn && cfg.domains.size() > 1) throw UsageError("--domain given more than once");
    if (c == Command::eval && cfg.x.empty()) throw UsageError("eval requires --x");
    if (c == Command::slimit && cfg.s_list.empty()) cfg.s_list = {0.1, 0.05, 0.02, 0.01};
    if (c == Command::assemble && cfg.kind == "frac" && cfg.s_list.size() != 1)
        throw UsageError("assemble --kind frac needs exactly one --s");
    if (c == Command::barrier && cfg.rho.empty()) cfg.rho = {1e-2, 1e-3};
    if (c == Command::poisson && cfg.shells.empty()) cfg.shells = {0.125, 0.0625, 0.03125, 0.015625};
    if ((c == Command::poisson || c == Command::barrier) && !(cfg.tau > 0.0 && cfg.tau < 0.5))
        throw UsageError("--tau must lie in (0, 1/2)");
    return cfg;
}

namespace {

struct Report {
    json params = json::object();
    json results = json::array();
    json provenance = json::object();

    void add(const std::string& name, const json& value, const json& tol, const std::string& tag) {
        results.push_back({{"name", name}, {"value", value}, {"tolerance", tol}, {"theorem_tag", tag}});
    }
};

std::string csv_cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }
    return v.dump();
}

void emit(const RunConfig& cfg, const json& doc, std::ostream& out) {
    std::ostringstream os;
    if (cfg.format == Format::json || doc.contains("error")) {
        os << doc.dump(2) << "\n";
    } else {
        os << "name,value,tolerance,theorem_tag\n";
        for (const auto& r : doc["results"])
            os << csv_cell(r["name"]) << "," << csv_cell(r["value"]) << "," << csv_cell(r["tolerance"]) << ","
               << csv_cell(r["theorem_tag"]) << "\n";
    }
    if (cfg.output.empty()) {
        out << os.str();
        return;
    }
    std::ofstream f(cfg.output);
    if (!f) throw Error("cannot open output file " + cfg.output);
    f << os.str();
}

Point to_point(const std::vector<double>& v, int dim) {
    if (static_cast<int>(v.size()) != dim)
        throw ValidationError("--x has " + std::to_string(v.size()) + " components, expected " + std::to_string(dim));
    Point p{0.0, 0.0, 0.0};
    for (int i = 0; i < dim; ++i) p[i] = v[i];
    return p;
}

std::function<double(const Point&)> rhs_function(const std::string& spec, int dim) {
    if (spec.rfind("const:", 0) == 0) {
        const double c = std::stod(spec.substr(6));
        return [c](const Point&) { return c; };
    }
    const ScalarField f = parse_field(spec, dim);
    return [f](const Point& x) { return f(x); };
}

void mesh_provenance(Report& r, const CellMesh& m) {
    r.provenance["cells_per_unit"] = m.cells_per_unit;
    r.provenance["mesh_cells"] = m.size();
    r.provenance["cell_side"] = m.h;
}

void run_constants(const RunConfig& cfg, Report& r) {
    const int N = cfg.dim;
    const Constants c = base_constants(N, cfg.quad);
    const Thresholds t = thresholds(N);
    const double tol = 1e-12;
    r.add("c_N", c.c_N, tol, "constants/normalization");
    r.add("rho_N", c.rho_N, tol, "constants/rho");
    r.add("rho_N_closed_form", rho_N_closed_form(N), tol, "constants/rho");
    r.add("kappa_N", c.kappa_N, cfg.quad.abs_tol, "constants/kappa-identity");
    r.add("c_N_kappa_N", c.c_N * c.kappa_N, cfg.quad.abs_tol, "constants/kappa-identity");
    r.add("r_N", t.r_N, tol, "constants/thresholds");
    r.add("r_NB", t.r_NB, tol, "constants/thresholds");
    r.add("volume_threshold", t.volume_threshold, tol, "constants/thresholds");
}

void run_eval(const RunConfig& cfg, Report& r) {
    const ScalarField u = parse_field(cfg.field, cfg.dim);
    const Point x = to_point(cfg.x, cfg.dim);
    const double tol = cfg.quad.abs_tol;
    r.add("u", u(x), 0.0, "representation/field");
    r.add("loglap", loglap_at(u, x, cfg.quad), tol, "representation/whole-space");
    if (!cfg.domains.empty()) {
        const Domain d = parse_domain(cfg.domains.front());
        if (d.dim() != cfg.dim) throw ValidationError("domain dimension differs from --dim");
        r.add("h_omega", h_omega(d, x, cfg.quad), tol, "representation/regional");
        r.add("loglap_regional", loglap_at(u, x, cfg.quad, &d), tol, "representation/regional");
    }
    for (double s : cfg.s_list) {
        std::ostringstream key;
        key << "s=" << s;
        r.add("fraclap[" + key.str() + "]", fraclap_at(u, x, s, cfg.quad), tol, "representation/fractional");
        r.add("diff_quotient[" + key.str() + "]", diff_quotient_at(u, x, s, cfg.quad), tol,
              "representation/difference-quotient");
    }
}

void run_assemble(const RunConfig& cfg, const Domain& d, Report& r) {
    const CellMesh mesh = build_mesh(d, cfg.cells);
    mesh_provenance(r, mesh);
    const AssemblyOptions opts{cfg.threads};
    AssembledForm f;
    if (cfg.kind == "potential")
        f = assemble_log_potential(mesh, cfg.quad, opts);
    else if (cfg.kind == "truncated")
        f = assemble_log_truncated(mesh, cfg.quad, opts);
    else if (cfg.kind == "frac")
        f = assemble_frac(mesh, cfg.s_list.front(), cfg.quad, opts);
    else
        f = assemble_interior_truncated(mesh, cfg.quad, opts);
    const Eigen::MatrixXd& A = f.stiffness;
    double off_max = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            if (i != j) off_max = std::max(off_max, A(i, j));
    if (A.rows() < 2) off_max = 0.0;
    r.add("cells", static_cast<double>(mesh.size()), 0.0, "assembly/dirichlet-form");
    r.add("mass_trace", f.mass.sum(), 1e-12, "assembly/dirichlet-form");
    r.add("max_abs_entry", A.cwiseAbs().maxCoeff(), cfg.quad.abs_tol, "assembly/dirichlet-form");
    r.add("max_offdiagonal", off_max, cfg.quad.abs_tol, "assembly/dirichlet-form");
    r.add("asymmetry", (A - A.transpose()).cwiseAbs().maxCoeff(), 0.0, "assembly/dirichlet-form");
    if (!cfg.dump.empty()) {
        std::ofstream os(cfg.dump);
        if (!os) throw Error("cannot open dump file " + cfg.dump);
        write_matrix_dump(f, os);
        r.add("dump", cfg.dump, nullptr, "assembly/dirichlet-form");
    }
}

void run_eig(const RunConfig& cfg, const Domain& d, Report& r) {
    const CellMesh mesh = build_mesh(d, cfg.cells);
    mesh_provenance(r, mesh);
    if (cfg.count > static_cast<int>(mesh.size()))
        throw ValidationError("--count " + std::to_string(cfg.count) + " exceeds the dimension " +
                              std::to_string(mesh.size()) + " of the discrete space");
    const AssembledForm f = assemble_log_potential(mesh, cfg.quad, {cfg.threads});
    const SpectralResult s = solve_gevp(f.stiffness, f.mass, cfg.count);
    for (int k = 0; k < cfg.count; ++k)
        r.add("lambda_" + std::to_string(k + 1), s.eigenvalues[k], 1e-8, "spectrum/eigenvalue-sequence");
    r.add("simplicity_margin", s.simplicity_margin(), 1e-8, "spectrum/simple-first-eigenvalue");
    const Eigen::MatrixXd G = s.eigenvectors.transpose() * f.mass.asDiagonal() * s.eigenvectors;
    r.add("orthonormality_error", (G - Eigen::MatrixXd::Identity(cfg.count, cfg.count)).cwiseAbs().maxCoeff(), 1e-8,
          "spectrum/eigenvalue-sequence");
    r.add("xi1_min", s.eigenvectors.col(0).minCoeff(), 1e-8, "spectrum/positive-eigenfunction");
}

void run_slimit(const RunConfig& cfg, const Domain& d, Report& r) {
    r.provenance["cells_per_unit"] = cfg.cells;
    const SDerivativeStudy st = s_derivative_study(d, cfg.s_list, cfg.cells, cfg.quad, {cfg.threads});
    r.add("lambda1_log", st.lambda_log, 1e-8, "spectrum/s-derivative");
    for (const auto& row : st.rows) {
        std::ostringstream k;
        k << "[s=" << row.s << "]";
        r.add("lambda1_s" + k.str(), row.lambda_s, 1e-8, "spectrum/s-derivative");
        r.add("quotient" + k.str(), row.quotient, 1e-8, "spectrum/s-derivative");
        r.add("gap" + k.str(), row.gap, 1e-8, "spectrum/s-derivative");
        r.add("eigenfunction_distance" + k.str(), row.eig_distance, 1e-8, "spectrum/s-derivative");
    }
    for (std::size_t i = 0; i < st.richardson.size(); ++i)
        r.add("richardson_" + std::to_string(i + 1), st.richardson[i], 1e-8, "spectrum/s-derivative");
}

void run_faberkrahn(const RunConfig& cfg, Report& r) {
    std::vector<Domain> ds;
    for (const auto& s : cfg.domains) ds.push_back(parse_domain(s));
    r.provenance["cells_per_unit"] = cfg.cells;
    const FaberKrahnTable t = faber_krahn_compare(ds, cfg.cells, cfg.quad, {cfg.threads});
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const std::string k = "[" + row.domain + "]";
        r.add("lambda1" + k, row.lambda1, 1e-8, "spectrum/faber-krahn");
        r.add("lambda1_rescaled" + k, row.lambda1_rescaled, 1e-8, "spectrum/faber-krahn");
        r.add("mesh_measure" + k, row.mesh_measure, 1e-12, "spectrum/faber-krahn");
    }
    r.add("minimizer", t.rows[t.minimizer].domain, nullptr, "spectrum/faber-krahn");
    r.add("minimizer_rescaled", t.rows[t.minimizer_rescaled].domain, nullptr, "spectrum/faber-krahn");
}

void run_maxprin(const RunConfig& cfg, const Domain& d, Report& r) {
    r.provenance["cells_per_unit"] = cfg.cells;
    std::optional<double> cl = cfg.lambda1_classical;
    if (!cl) cl = classical_lambda1(d);
    const MPVerdict v = mp_classify(d, cfg.cells, cfg.quad, cl, {cfg.threads});
    r.add("lambda1", v.lambda1, 1e-8, "max-principle/eigenvalue-sign");
    r.add("verdict", verdict_name(v.verdict), nullptr, "max-principle/eigenvalue-sign");
    r.add("margin", v.margin, 1e-3, "max-principle/eigenvalue-sign");
    r.add("h_omega_min", v.h_min, cfg.quad.abs_tol, "max-principle/h-omega-sign");
    r.add("h_omega_certificate", v.h_certificate, nullptr, "max-principle/h-omega-sign");
    r.add("volume", v.volume, 1e-12, "max-principle/volume-threshold");
    r.add("volume_threshold", v.volume_threshold, 1e-12, "max-principle/volume-threshold");
    r.add("volume_certificate", v.volume_certificate, nullptr, "max-principle/volume-threshold");
    if (v.lambda1_classical) {
        r.add("lambda1_classical", *v.lambda1_classical, 1e-8, "max-principle/classical-eigenvalue-bound");
        r.add("classical_certificate", v.classical_certificate, nullptr, "max-principle/classical-eigenvalue-bound");
    }
    std::string certs;
    if (v.h_certificate) certs += "h-omega-sign";
    if (v.volume_certificate) certs += std::string(certs.empty() ? "" : ";") + "volume-threshold";
    if (v.classical_certificate) certs += std::string(certs.empty() ? "" : ";") + "classical-eigenvalue-bound";
    r.add("certificate", certs.empty() ? "none" : certs, nullptr, "max-principle/certificates");
    r.add("consistent", v.consistent, nullptr, "max-principle/certificates");
}

void run_poisson(const RunConfig& cfg, const Domain& d, Report& r) {
    r.provenance["cells_per_unit"] = cfg.cells;
    const PoissonSolution sol =
        solve_poisson(d, rhs_function(cfg.field == "bump" ? "const:1" : cfg.field, d.dim()), cfg.cells, cfg.quad,
                      {cfg.threads});
    r.provenance["mesh_cells"] = sol.mesh.size();
    r.add("lambda1", sol.lambda1, 1e-8, "poisson/weak-solution");
    r.add("residual", sol.residual, 1e-10, "poisson/weak-solution");
    r.add("u_min", sol.solution.minCoeff(), 1e-10, "poisson/weak-solution");
    r.add("u_max", sol.solution.maxCoeff(), 1e-10, "poisson/weak-solution");
    const auto prof = decay_profile(sol, cfg.tau, cfg.shells);
    for (const auto& row : prof) {
        std::ostringstream k;
        k << "[t=" << row.t << "]";
        r.add("sup_abs" + k.str(), row.sup_abs, 1e-10, "poisson/boundary-decay");
        r.add("weighted" + k.str(), row.weighted, 1e-10, "poisson/boundary-decay");
    }
    if (prof.size() >= 3) r.add("decay_verdict", decay_verdict_name(decay_verdict(prof)), nullptr, "poisson/boundary-decay");
    r.add("geometry", sol.geometry_certified ? "certified" : "geometry-uncertified", nullptr, "poisson/boundary-decay");
}

void run_hardy(const RunConfig& cfg, const Domain& d, Report& r) {
    const HardyResult h = hardy_quotient(d, cfg.cells, cfg.quad, {cfg.threads});
    r.provenance["cells_per_unit"] = cfg.cells;
    r.provenance["mesh_cells"] = h.cells;
    r.add("hardy_quotient", h.quotient, 1e-8, "hardy/log-boundary");
}

void run_barrier(const RunConfig& cfg, Report& r) {
    const Barrier b = make_barrier(cfg.R, cfg.tau, cfg.dim);
    const BarrierReport rep = barrier_check(b, cfg.rho, cfg.quad);
    for (const auto& row : rep.rows) {
        std::ostringstream k;
        k << "[rho=" << row.rho << "]";
        r.add("loglap" + k.str(), row.loglap, cfg.quad.abs_tol, "barrier/supersolution");
        r.add("ratio" + k.str(), row.ratio, cfg.quad.abs_tol, "barrier/supersolution");
    }
    r.add("bound", rep.bound, 1e-10, "barrier/supersolution");
    r.add("increasing", rep.increasing, nullptr, "barrier/supersolution");
    r.add("positive", rep.positive, nullptr, "barrier/supersolution");
    r.add("reaches_bound", rep.reaches_bound, nullptr, "barrier/supersolution");
}

json params_of(const RunConfig& cfg) {
    json p;
    p["dim"] = cfg.dim;
    p["cells"] = cfg.cells;
    if (!cfg.domains.empty()) p["domain"] = cfg.domains;
    if (!cfg.s_list.empty()) p["s"] = cfg.s_list;
    p["tau"] = cfg.tau;
    p["count"] = cfg.count;
    p["R"] = cfg.R;
    if (!cfg.rho.empty()) p["rho"] = cfg.rho;
    if (!cfg.shells.empty()) p["shells"] = cfg.shells;
    p["field"] = cfg.field;
    if (!cfg.x.empty()) p["x"] = cfg.x;
    p["kind"] = cfg.kind;
    if (cfg.lambda1_classical) p["lambda1_classical"] = *cfg.lambda1_classical;
    p["format"] = cfg.format == Format::json ? "json" : "csv";
    return p;
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& out) {
    Report r;
    r.params = params_of(cfg);
    r.provenance = {{"abs_tol", cfg.quad.abs_tol},
                    {"max_depth", cfg.quad.max_depth},
                    {"seed", cfg.quad.seed},
                    {"threads", cfg.threads},
                    {"version", "0.1.0"}};
    try {
        cfg.quad.validate();
        std::optional<Domain> d;
        if (needs_domain(cfg.command) && cfg.command != Command::faberkrahn) d = parse_domain(cfg.domains.front());
        switch (cfg.command) {
            case Command::constants: run_constants(cfg, r); break;
            case Command::eval: run_eval(cfg, r); break;
            case Command::assemble: run_assemble(cfg, *d, r); break;
            case Command::eig: run_eig(cfg, *d, r); break;
            case Command::slimit: run_slimit(cfg, *d, r); break;
            case Command::faberkrahn: run_faberkrahn(cfg, r); break;
            case Command::maxprin: run_maxprin(cfg, *d, r); break;
            case Command::poisson: run_poisson(cfg, *d, r); break;
            case Command::hardy: run_hardy(cfg, *d, r); break;
            case Command::barrier: run_barrier(cfg, r); break;
        }
        json doc = {{"command", command_name(cfg.command)},
                    {"params", r.params},
                    {"results", r.results},
                    {"provenance", r.provenance}};
        emit(cfg, doc, out);
        return 0;
    } catch (const Error& e) {
        json doc = {{"command", command_name(cfg.command)},
                    {"params", r.params},
                    {"error", {{"kind", e.kind()}, {"message", e.what()}}},
                    {"provenance", r.provenance}};
        try {
            emit(cfg, doc, out);
        } catch (const Error&) {
            out << doc.dump(2) << "\n";
        }
        return 1;
    }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_args(args);
    } catch (const UsageError& e) {
        if (e.help()) {
            out << e.what();
            return 0;
        }
        err << "usage error: " << e.what() << "\nrun with --help for the list of commands and flags\n";
        return 2;
    }
    return run_command(cfg, out);
}

}  // namespace loglap::cli
