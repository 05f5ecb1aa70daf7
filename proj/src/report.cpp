#include "gdnm/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace gdnm::report {

using nlohmann::json;

namespace {

json num(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;  // JSON has no NaN/Inf
}

double num_back(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return j.get<double>();
}

json vec_to_json(const linalg::Vector& v) {
    json a = json::array();
    for (std::size_t i = 0; i < v.dim(); ++i) a.push_back(num(v[i]));
    return a;
}

linalg::Vector vec_from_json(const json& a) {
    linalg::Vector v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[i] = num_back(a[i]);
    return v;
}

solver::Status status_from_string(const std::string& s) {
    for (auto st : {solver::Status::Converged, solver::Status::MaxIterations,
                    solver::Status::LineSearchFailed, solver::Status::DirectionFailed,
                    solver::Status::TimedOut, solver::Status::ScheduleExhausted})
        if (s == solver::to_string(st)) return st;
    throw std::invalid_argument("unknown status '" + s + "'");
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

json build_info() {
    return {{"compiler", __VERSION__}, {"cxx_standard", static_cast<long>(__cplusplus)}};
}

json to_json(const solver::IterationRecord& rec) {
    return {{"k", rec.k},
            {"objective", num(rec.objective)},
            {"grad_norm", num(rec.grad_norm)},
            {"step_tau", num(rec.step_tau)},
            {"direction_norm", num(rec.direction_norm)},
            {"wall_seconds", num(rec.wall_seconds)},
            {"fallback_used", rec.fallback_used},
            {"dir_dot_grad", num(rec.dir_dot_grad)},
            {"kkt_eta", num(rec.kkt_eta)},
            {"membership_ok", rec.membership_ok}};
}

solver::IterationRecord iteration_from_json(const json& j) {
    solver::IterationRecord rec;
    rec.k = j.at("k").get<int>();
    rec.objective = num_back(j.at("objective"));
    rec.grad_norm = num_back(j.at("grad_norm"));
    rec.step_tau = num_back(j.at("step_tau"));
    rec.direction_norm = num_back(j.at("direction_norm"));
    rec.wall_seconds = num_back(j.at("wall_seconds"));
    rec.fallback_used = j.at("fallback_used").get<bool>();
    rec.dir_dot_grad = num_back(j.at("dir_dot_grad"));
    rec.kkt_eta = num_back(j.at("kkt_eta"));
    rec.membership_ok = j.at("membership_ok").get<bool>();
    return rec;
}

json to_json(const solver::SolveReport& rep) {
    json trace = json::array();
    for (const auto& rec : rep.trace) trace.push_back(to_json(rec));
    json ratios = json::array();
    for (double r : rep.rate_diagnostics) ratios.push_back(num(r));
    return {{"status", solver::to_string(rep.status)},
            {"final_x", vec_to_json(rep.final_x)},
            {"iterations", rep.iterations},
            {"trace", std::move(trace)},
            {"rate_diagnostics", std::move(ratios)},
            {"final_objective", num(rep.final_objective)},
            {"final_grad_norm", num(rep.final_grad_norm)},
            {"final_eta", num(rep.final_eta)}};
}

solver::SolveReport solve_report_from_json(const json& j) {
    solver::SolveReport rep;
    rep.status = status_from_string(j.at("status").get<std::string>());
    rep.final_x = vec_from_json(j.at("final_x"));
    rep.iterations = j.at("iterations").get<int>();
    for (const auto& rec : j.at("trace")) rep.trace.push_back(iteration_from_json(rec));
    for (const auto& r : j.at("rate_diagnostics")) rep.rate_diagnostics.push_back(num_back(r));
    rep.final_objective = num_back(j.at("final_objective"));
    rep.final_grad_norm = num_back(j.at("final_grad_norm"));
    rep.final_eta = num_back(j.at("final_eta"));
    return rep;
}

json to_json(const composite::CompositeReport& rep) {
    json j = to_json(rep.report);
    j["final_u"] = j["final_x"];  // the reduced-space iterate
    j["final_x"] = vec_to_json(rep.x);
    j["x"] = vec_to_json(rep.x);
    j["final_psi"] = j["final_objective"];  // reduced-model value
    j["final_objective"] = num(rep.original_objective);
    j["gamma"] = num(rep.gamma);
    j["lip_ell"] = num(rep.lip_ell);
    j["kappa"] = rep.kappa ? json(num(*rep.kappa)) : json(nullptr);
    j["sigma_superlinear_bound_held"] =
        rep.sigma_superlinear_bound_held ? json(*rep.sigma_superlinear_bound_held) : json(nullptr);
    if (!rep.tikhonov_stages.empty()) {
        json stages = json::array();
        for (const auto& st : rep.tikhonov_stages)
            stages.push_back({{"eps", num(st.eps)},
                              {"iterations", st.iterations},
                              {"status", solver::to_string(st.status)}});
        j["tikhonov_stages"] = std::move(stages);
    }
    return j;
}

json to_json(const bench::BenchRow& row) {
    return {{"m", row.m},
            {"n", row.n},
            {"solver", row.solver},
            {"iterations", row.iterations},
            {"wall_seconds", num(row.wall_seconds)},
            {"final_eta", num(row.final_eta)},
            {"final_objective", num(row.final_objective)},
            {"status", row.status},
            {"requires_tikhonov", row.requires_tikhonov}};
}

bench::BenchRow bench_row_from_json(const json& j) {
    bench::BenchRow row;
    row.m = j.at("m").get<int>();
    row.n = j.at("n").get<int>();
    row.solver = j.at("solver").get<std::string>();
    row.iterations = j.at("iterations").get<int>();
    row.wall_seconds = num_back(j.at("wall_seconds"));
    row.final_eta = num_back(j.at("final_eta"));
    row.final_objective = num_back(j.at("final_objective"));
    row.status = j.at("status").get<std::string>();
    row.requires_tikhonov = j.value("requires_tikhonov", false);
    return row;
}

json make_document(const std::string& kind, json config, json result) {
    return {{"schema_version", kSchemaVersion},
            {"kind", kind},
            {"config", std::move(config)},
            {"build", build_info()},
            {"result", std::move(result)}};
}

std::string bench_rows_csv(const std::vector<bench::BenchRow>& rows) {
    std::ostringstream out;
    out << "m,n,solver,iterations,wall_seconds,final_eta,final_objective,status\n";
    for (const auto& r : rows)
        out << r.m << ',' << r.n << ',' << r.solver << ',' << r.iterations << ','
            << fmt17(r.wall_seconds) << ',' << fmt17(r.final_eta) << ','
            << fmt17(r.final_objective) << ',' << r.status << '\n';
    return out.str();
}

std::vector<bench::BenchRow> bench_rows_from_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("bench csv: empty input");
    std::vector<bench::BenchRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 8) throw std::invalid_argument("bench csv: expected 8 columns");
        bench::BenchRow row;
        row.m = std::stoi(cells[0]);
        row.n = std::stoi(cells[1]);
        row.solver = cells[2];
        row.iterations = std::stoi(cells[3]);
        row.wall_seconds = std::stod(cells[4]);
        row.final_eta = std::stod(cells[5]);
        row.final_objective = std::stod(cells[6]);
        row.status = cells[7];
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string trace_csv(const std::vector<solver::IterationRecord>& trace) {
    std::ostringstream out;
    out << "k,objective,grad_norm,step_tau,direction_norm,wall_seconds,fallback_used,"
           "dir_dot_grad,kkt_eta,membership_ok\n";
    for (const auto& r : trace)
        out << r.k << ',' << fmt17(r.objective) << ',' << fmt17(r.grad_norm) << ','
            << fmt17(r.step_tau) << ',' << fmt17(r.direction_norm) << ','
            << fmt17(r.wall_seconds) << ',' << (r.fallback_used ? 1 : 0) << ','
            << fmt17(r.dir_dot_grad) << ',' << fmt17(r.kkt_eta) << ','
            << (r.membership_ok ? 1 : 0) << '\n';
    return out.str();
}

} // namespace gdnm::report
