#include "stabrad/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stabrad/errors.hpp"
#include "stabrad/sensitivity.hpp"

namespace stabrad {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(std::string_view source, const std::string& where, const std::string& what) {
    throw ParseError(std::string(source) + ": " + where + ": " + what);
}

void reject_unknown(const json& obj, std::string_view source, const std::string& where,
                    std::initializer_list<std::string_view> known) {
    for (const auto& [key, value] : obj.items()) {
        bool found = false;
        for (auto k : known) found = found || k == key;
        if (!found) fail(source, where.empty() ? key : where + "." + key, "unknown field");
    }
}

const json& require(const json& obj, std::string_view source, const std::string& where, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(source, where.empty() ? key : where + "." + key, "missing required field");
    return *it;
}

RealMatrix read_matrix(const json& node, std::string_view source, const std::string& where) {
    if (!node.is_array() || node.empty()) fail(source, where, "expected a non-empty array of rows");
    const std::size_t rows = node.size();
    std::size_t cols = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        const auto& row = node[i];
        const std::string at = where + "[" + std::to_string(i) + "]";
        if (!row.is_array() || row.empty()) fail(source, at, "expected a non-empty array of numbers");
        if (i == 0) cols = row.size();
        if (row.size() != cols) {
            fail(source, at, "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
        }
    }
    RealMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const auto& v = node[i][j];
            if (!v.is_number()) {
                fail(source, where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]", "expected a number");
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v.get<double>();
        }
    }
    return out;
}

SparsityMask read_mask(const json& node, std::string_view source, const std::string& where) {
    RealMatrix flags = read_matrix(node, source, where);
    for (Eigen::Index i = 0; i < flags.rows(); ++i) {
        for (Eigen::Index j = 0; j < flags.cols(); ++j) {
            const double v = flags(i, j);
            if (v != 0.0 && v != 1.0) {
                fail(source, where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                     "mask entries must be 0 or 1");
            }
        }
    }
    return SparsityMask(std::move(flags));
}

double read_number(const json& node, std::string_view source, const std::string& where) {
    if (!node.is_number()) fail(source, where, "expected a number");
    return node.get<double>();
}

std::size_t read_count(const json& node, std::string_view source, const std::string& where) {
    if (!node.is_number_unsigned() && !(node.is_number_integer() && node.get<long long>() >= 0)) {
        fail(source, where, "expected a nonnegative integer");
    }
    return node.get<std::size_t>();
}

bool read_bool(const json& node, std::string_view source, const std::string& where) {
    if (!node.is_boolean()) fail(source, where, "expected true or false");
    return node.get<bool>();
}

template <typename Fn>
void with_field(const json& obj, const char* key, Fn&& fn) {
    if (const auto it = obj.find(key); it != obj.end()) fn(*it);
}

void read_tolerances(const json& node, std::string_view source, const std::string& where, Tolerances& tol) {
    if (!node.is_object()) fail(source, where, "expected an object");
    reject_unknown(node, source, where, {"simplicity_tol", "tol_feas"});
    with_field(node, "simplicity_tol", [&](const json& v) { tol.simplicity_tol = read_number(v, source, where + ".simplicity_tol"); });
    with_field(node, "tol_feas", [&](const json& v) { tol.tol_feas = read_number(v, source, where + ".tol_feas"); });
}

void read_sla(const json& node, std::string_view source, SLAConfig& cfg) {
    const std::string where = "sla";
    if (!node.is_object()) fail(source, where, "expected an object");
    reject_unknown(node, source, where,
                   {"beta", "beta_growth", "repair_noise", "max_iters", "refine_final", "refine_tol", "seed",
                    "max_beta_growths", "max_noise_repairs"});
    with_field(node, "beta", [&](const json& v) { cfg.beta = read_number(v, source, "sla.beta"); });
    with_field(node, "beta_growth", [&](const json& v) { cfg.beta_growth = read_number(v, source, "sla.beta_growth"); });
    with_field(node, "repair_noise", [&](const json& v) { cfg.repair_noise = read_number(v, source, "sla.repair_noise"); });
    with_field(node, "max_iters", [&](const json& v) { cfg.max_iters = read_count(v, source, "sla.max_iters"); });
    with_field(node, "refine_final", [&](const json& v) { cfg.refine_final = read_bool(v, source, "sla.refine_final"); });
    with_field(node, "refine_tol", [&](const json& v) { cfg.refine_tol = read_number(v, source, "sla.refine_tol"); });
    with_field(node, "seed", [&](const json& v) { cfg.seed = read_count(v, source, "sla.seed"); });
    with_field(node, "max_beta_growths", [&](const json& v) { cfg.max_beta_growths = read_count(v, source, "sla.max_beta_growths"); });
    with_field(node, "max_noise_repairs", [&](const json& v) { cfg.max_noise_repairs = read_count(v, source, "sla.max_noise_repairs"); });
    try {
        cfg.check();
    } catch (const Error& e) {
        fail(source, where, e.what());
    }
}

void read_solver(const json& node, std::string_view source, SolverConfig& cfg) {
    const std::string where = "solver";
    if (!node.is_object()) fail(source, where, "expected an object");
    reject_unknown(node, source, where,
                   {"restarts", "seed", "penalty_rounds", "rho0", "rho_growth", "inner_iters", "fd_step",
                    "constraint_tol", "start_scale", "restoration_iters"});
    with_field(node, "restarts", [&](const json& v) { cfg.restarts = read_count(v, source, "solver.restarts"); });
    with_field(node, "seed", [&](const json& v) { cfg.seed = read_count(v, source, "solver.seed"); });
    with_field(node, "penalty_rounds", [&](const json& v) { cfg.penalty_rounds = read_count(v, source, "solver.penalty_rounds"); });
    with_field(node, "rho0", [&](const json& v) { cfg.rho0 = read_number(v, source, "solver.rho0"); });
    with_field(node, "rho_growth", [&](const json& v) { cfg.rho_growth = read_number(v, source, "solver.rho_growth"); });
    with_field(node, "inner_iters", [&](const json& v) { cfg.inner_iters = read_count(v, source, "solver.inner_iters"); });
    with_field(node, "fd_step", [&](const json& v) { cfg.fd_step = read_number(v, source, "solver.fd_step"); });
    with_field(node, "constraint_tol", [&](const json& v) { cfg.constraint_tol = read_number(v, source, "solver.constraint_tol"); });
    with_field(node, "start_scale", [&](const json& v) { cfg.start_scale = read_number(v, source, "solver.start_scale"); });
    with_field(node, "restoration_iters", [&](const json& v) { cfg.restoration_iters = read_count(v, source, "solver.restoration_iters"); });
}

void read_oracle(const json& node, std::string_view source, OracleConfig& cfg) {
    if (!node.is_object()) fail(source, "oracle", "expected an object");
    reject_unknown(node, source, "oracle", {"grid_points", "bisect_tol"});
    with_field(node, "grid_points", [&](const json& v) { cfg.grid_points = read_count(v, source, "oracle.grid_points"); });
    with_field(node, "bisect_tol", [&](const json& v) { cfg.bisect_tol = read_number(v, source, "oracle.bisect_tol"); });
}

template <typename Json>
Json matrix_json(const RealMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json config_json(const ProblemDocument& doc) {
    const SLAConfig sla = doc.sla.resolve(doc.spec.A);
    ordered_json tol;
    tol["simplicity_tol"] = doc.sla.tol.simplicity_tol > 0.0 ? doc.sla.tol.simplicity_tol
                                                             : default_simplicity_tol(doc.spec.A);
    tol["tol_feas"] = doc.sla.tol.tol_feas > 0.0 ? doc.sla.tol.tol_feas : default_tol_feas(doc.spec.B, doc.spec.C);

    ordered_json s;
    s["beta"] = *sla.beta;
    s["beta_growth"] = sla.beta_growth;
    s["repair_noise"] = *sla.repair_noise;
    s["max_iters"] = sla.max_iters;
    s["refine_final"] = sla.refine_final;
    s["refine_tol"] = sla.refine_tol;
    s["seed"] = sla.seed;
    s["max_beta_growths"] = sla.max_beta_growths;
    s["max_noise_repairs"] = sla.max_noise_repairs;

    ordered_json out;
    out["tolerances"] = tol;
    out["sla"] = s;
    return out;
}

ordered_json solver_json(const SolverConfig& c) {
    ordered_json s;
    s["restarts"] = c.restarts;
    s["seed"] = c.seed;
    s["penalty_rounds"] = c.penalty_rounds;
    s["rho0"] = c.rho0;
    s["rho_growth"] = c.rho_growth;
    s["inner_iters"] = c.inner_iters;
    s["fd_step"] = c.fd_step;
    s["constraint_tol"] = c.constraint_tol;
    s["start_scale"] = c.start_scale;
    s["restoration_iters"] = c.restoration_iters;
    return s;
}

ordered_json report_json(const SRReport& r) {
    ordered_json out;
    out["method"] = std::string(to_string(r.method));
    out["status"] = std::string(to_string(r.status));
    out["nominal_abscissa"] = r.nominal_abscissa;
    if (r.feasible()) {
        out["value"] = r.value;
        out["argmin_k"] = r.argmin_k;
    }
    out["delta_star"] = matrix_json<ordered_json>(r.delta_star);
    if (r.method == Method::LA) {
        ordered_json cands = ordered_json::array();
        for (const auto& c : r.per_k) {
            ordered_json item;
            item["k"] = c.k;
            item["lambda_real"] = c.lambda_real;
            item["masked_norm"] = c.masked_norm;
            item["value"] = c.value;
            item["delta"] = matrix_json<ordered_json>(c.delta);
            cands.push_back(std::move(item));
        }
        out["candidates"] = std::move(cands);
    }
    if (r.trace) {
        out["iterations"] = r.trace->iterations.size();
        out["noise_norm"] = r.trace->noise_norm;
        ordered_json rows = ordered_json::array();
        for (const auto& it : r.trace->iterations) {
            ordered_json row;
            row["k"] = it.k;
            row["beta"] = it.beta;
            row["alpha"] = it.alpha;
            row["cumulative_norm"] = it.cumulative_norm;
            row["step_norm"] = it.step.norm();
            row["beta_growths"] = it.beta_growths;
            row["noise_repairs"] = it.noise_repairs;
            row["refined"] = it.refined;
            rows.push_back(std::move(row));
        }
        out["trace"] = std::move(rows);
    }
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ProblemDocument parse_problem_text(std::string_view text, std::string_view source) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(source) + ": " + e.what());
    }
    if (!root.is_object()) fail(source, "<root>", "expected an object");
    reject_unknown(root, source, "", {"name", "A", "B", "C", "S", "design", "sla", "solver", "tolerances", "oracle"});

    ProblemDocument doc;
    auto& spec = doc.spec;
    with_field(root, "name", [&](const json& v) {
        if (!v.is_string()) fail(source, "name", "expected a string");
        spec.name = v.get<std::string>();
    });
    spec.A = read_matrix(require(root, source, "", "A"), source, "A");
    spec.B = read_matrix(require(root, source, "", "B"), source, "B");
    spec.C = read_matrix(require(root, source, "", "C"), source, "C");
    spec.S = read_mask(require(root, source, "", "S"), source, "S");

    with_field(root, "design", [&](const json& d) {
        if (!d.is_object()) fail(source, "design", "expected an object");
        reject_unknown(d, source, "design", {"Bo", "Co", "So", "epsilon"});
        DesignBlock block;
        block.Bo = d.contains("Bo") ? read_matrix(d["Bo"], source, "design.Bo") : spec.B;
        block.Co = d.contains("Co") ? read_matrix(d["Co"], source, "design.Co") : spec.C;
        block.So = d.contains("So") ? read_mask(d["So"], source, "design.So") : spec.S;
        with_field(d, "epsilon", [&](const json& v) { block.epsilon = read_number(v, source, "design.epsilon"); });
        spec.design = std::move(block);
    });
    with_field(root, "tolerances", [&](const json& v) { read_tolerances(v, source, "tolerances", doc.sla.tol); });
    doc.solver.tol = doc.sla.tol;
    with_field(root, "sla", [&](const json& v) { read_sla(v, source, doc.sla); });
    with_field(root, "solver", [&](const json& v) { read_solver(v, source, doc.solver); });
    with_field(root, "oracle", [&](const json& v) { read_oracle(v, source, doc.oracle); });

    spec = validate(std::move(spec));
    return doc;
}

ProblemDocument parse_problem(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem_text(buf.str(), path.string());
}

std::string serialize_problem(const ProblemDocument& doc) {
    ordered_json out;
    out["name"] = doc.spec.name;
    out["A"] = matrix_json<ordered_json>(doc.spec.A);
    out["B"] = matrix_json<ordered_json>(doc.spec.B);
    out["C"] = matrix_json<ordered_json>(doc.spec.C);
    out["S"] = matrix_json<ordered_json>(doc.spec.S.matrix());
    if (doc.spec.design) {
        const auto& d = *doc.spec.design;
        ordered_json block;
        block["Bo"] = matrix_json<ordered_json>(d.Bo);
        block["Co"] = matrix_json<ordered_json>(d.Co);
        block["So"] = matrix_json<ordered_json>(d.So.matrix());
        if (d.epsilon) block["epsilon"] = *d.epsilon;
        out["design"] = std::move(block);
    }
    ordered_json tol;
    if (doc.sla.tol.simplicity_tol > 0.0) tol["simplicity_tol"] = doc.sla.tol.simplicity_tol;
    if (doc.sla.tol.tol_feas > 0.0) tol["tol_feas"] = doc.sla.tol.tol_feas;
    if (!tol.empty()) out["tolerances"] = std::move(tol);

    ordered_json sla;
    if (doc.sla.beta) sla["beta"] = *doc.sla.beta;
    sla["beta_growth"] = doc.sla.beta_growth;
    if (doc.sla.repair_noise) sla["repair_noise"] = *doc.sla.repair_noise;
    sla["max_iters"] = doc.sla.max_iters;
    sla["refine_final"] = doc.sla.refine_final;
    sla["refine_tol"] = doc.sla.refine_tol;
    sla["seed"] = doc.sla.seed;
    sla["max_beta_growths"] = doc.sla.max_beta_growths;
    sla["max_noise_repairs"] = doc.sla.max_noise_repairs;
    out["sla"] = std::move(sla);
    out["solver"] = solver_json(doc.solver);
    ordered_json oracle;
    oracle["grid_points"] = doc.oracle.grid_points;
    oracle["bisect_tol"] = doc.oracle.bisect_tol;
    out["oracle"] = std::move(oracle);
    return out.dump(2) + "\n";
}

std::string sr_reports_json(const ProblemDocument& doc, const std::vector<SRReport>& reports) {
    ordered_json out;
    out["problem"] = doc.spec.name;
    out["config"] = config_json(doc);
    ordered_json list = ordered_json::array();
    for (const auto& r : reports) list.push_back(report_json(r));
    out["reports"] = std::move(list);
    return out.dump(2) + "\n";
}

std::string design_report_json(const ProblemDocument& doc, const DesignReport& r) {
    ordered_json out;
    out["problem"] = doc.spec.name;
    out["method"] = std::string(to_string(r.method));
    out["status"] = std::string(to_string(r.status));
    out["epsilon"] = r.epsilon;
    if (std::isfinite(r.initial_sr)) out["initial_sr"] = r.initial_sr;
    out["norm"] = r.norm;
    out["delta_o_star"] = matrix_json<ordered_json>(r.delta_o_star);
    out["redesigned_A"] = matrix_json<ordered_json>(r.redesigned);
    out["achieved_sr_la"] = r.achieved_sr_la ? ordered_json(*r.achieved_sr_la) : ordered_json(nullptr);
    out["achieved_sr_sla"] = r.achieved_sr_sla ? ordered_json(*r.achieved_sr_sla) : ordered_json(nullptr);
    ordered_json diag;
    diag["converged"] = r.solver.converged;
    diag["iterations"] = r.solver.iterations;
    diag["evaluations"] = r.solver.evaluations;
    diag["restarts"] = r.solver.restarts;
    diag["converged_starts"] = r.solver.converged_starts;
    diag["final_penalty"] = r.solver.final_penalty;
    diag["max_violation"] = r.solver.max_violation;
    out["solver"] = std::move(diag);
    ordered_json config = config_json(doc);
    config["solver"] = solver_json(doc.solver);
    out["config"] = std::move(config);
    return out.dump(2) + "\n";
}

std::string trace_csv(const SLATrace& trace) {
    std::string out = "j,k,beta,alpha,cumulative_norm,step_norm,beta_growths,noise_repairs,refined\n";
    for (std::size_t j = 0; j < trace.iterations.size(); ++j) {
        const auto& it = trace.iterations[j];
        out += std::to_string(j + 1) + "," + std::to_string(it.k) + "," + format_double(it.beta) + "," +
               format_double(it.alpha) + "," + format_double(it.cumulative_norm) + "," +
               format_double(it.step.norm()) + "," + std::to_string(it.beta_growths) + "," +
               std::to_string(it.noise_repairs) + "," + (it.refined ? "1" : "0") + "\n";
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    const bool exact = !rows.empty() && rows.front().alpha_exact.has_value();
    std::string out = exact ? "gamma,alpha_exact,alpha_la,alpha_sla,e_la,e_sla\n" : "gamma,alpha_la,alpha_sla\n";
    for (const auto& r : rows) {
        out += format_double(r.gamma);
        if (exact) out += "," + format_double(*r.alpha_exact);
        out += "," + format_double(r.alpha_la) + "," + format_double(r.alpha_sla);
        if (exact) out += "," + format_double(*r.e_la) + "," + format_double(*r.e_sla);
        out += "\n";
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot move output into place at " + path.string() + ": " + ec.message());
    }
}

}  // namespace stabrad
