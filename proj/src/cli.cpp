/*
   Copyright 2026 The levyfield Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "levyfield/cli.hpp"

#include "levyfield/distributions.hpp"
#include "levyfield/parallel.hpp"
#include "levyfield/rng.hpp"
#include "levyfield/sampler.hpp"
#include "levyfield/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace levy::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string &what) { fail(ErrorKind::Config, what); }

double get_num(const json &j, const char *key)
{
    if (!j.contains(key))
        bad(std::string("missing field '") + key + "'");
    if (!j[key].is_number())
        bad(std::string("field '") + key + "' must be a number");
    return j[key].get<double>();
}

double get_num(const json &j, const char *key, double def)
{
    return j.contains(key) ? get_num(j, key) : def;
}

// A number, or the string "auto" which maps to 0.
double num_or_auto(const json &j, const char *key)
{
    if (!j.contains(key))
        return 0.0;
    const json &v = j[key];
    if (v.is_string()) {
        if (v.get<std::string>() != "auto")
            bad(std::string("field '") + key + "' must be a number or \"auto\"");
        return 0.0;
    }
    double x = get_num(j, key);
    if (!(x > 0.0))
        bad(std::string("field '") + key + "' must be positive");
    return x;
}

Gh1Params parse_gh1(const json &j)
{
    return make_gh1(get_num(j, "lambda"), get_num(j, "alpha"), get_num(j, "beta", 0.0),
                    get_num(j, "delta"), get_num(j, "mu", 0.0));
}

CharFnModel parse_model(const json &j)
{
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        bad("model.type is required");
    const std::string t = j["type"].get<std::string>();
    if (t == "gaussian")
        return CharFnModel::gaussian(get_num(j, "mean", 0.0), get_num(j, "var", 1.0));
    if (t == "student_t3")
        return CharFnModel::student_t3();
    if (t == "cauchy")
        return CharFnModel::cauchy(get_num(j, "scale", 1.0));
    if (t == "ig")
        return CharFnModel::ig(get_num(j, "a"), get_num(j, "b"));
    if (t == "gig")
        return CharFnModel::gig(get_num(j, "a"), get_num(j, "b"), get_num(j, "p"));
    if (t == "gh1") {
        auto g = parse_gh1(j);
        return CharFnModel::gh1(g.lambda, g.alpha, g.beta, g.delta, g.mu);
    }
    bad("unknown model type '" + t + "'");
}

Eigen::VectorXd vec(const json &j, const char *key, int n)
{
    if (!j.contains(key))
        return Eigen::VectorXd::Zero(n);
    auto v = j[key].get<std::vector<double>>();
    if (static_cast<int>(v.size()) != n)
        bad(std::string("field '") + key + "' has the wrong length");
    return Eigen::Map<Eigen::VectorXd>(v.data(), n);
}

GhSpec parse_gh(const json &j)
{
    GhSpec s;
    if (j.contains("marginals")) {
        s.kind = GhSpec::Kind::Marginals;
        for (const auto &m : j["marginals"])
            s.marginals.push_back(parse_gh1(m));
        if (s.marginals.empty())
            bad("gh.marginals is empty");
    } else if (j.contains("marginal")) {
        s.kind = GhSpec::Kind::Template;
        s.tmpl = parse_gh1(j["marginal"]);
        s.N = static_cast<int>(num_or_auto(j, "N"));
    } else if (j.contains("gamma")) {
        s.kind = GhSpec::Kind::Full;
        auto rows = j["gamma"].get<std::vector<std::vector<double>>>();
        int n = static_cast<int>(rows.size());
        if (n == 0)
            bad("gh.gamma is empty");
        Eigen::MatrixXd g(n, n);
        for (int r = 0; r < n; ++r) {
            if (static_cast<int>(rows[r].size()) != n)
                bad("gh.gamma must be square");
            for (int c = 0; c < n; ++c)
                g(r, c) = rows[r][c];
        }
        s.full = make_ghn(get_num(j, "lambda"), get_num(j, "alpha"), vec(j, "beta", n),
                          get_num(j, "delta"), vec(j, "mu", n), g);
    } else {
        bad("gh needs one of marginals, marginal or gamma");
    }
    return s;
}

std::vector<double> parse_theta_grid(const json &v)
{
    if (v.is_string()) {
        if (v.get<std::string>() != "default")
            bad("theta_grid must be \"default\", a list or {start, stop, step}");
        return default_theta_grid();
    }
    if (v.is_array())
        return v.get<std::vector<double>>();
    double a = get_num(v, "start"), b = get_num(v, "stop"), h = get_num(v, "step");
    if (!(h > 0.0) || !(b >= a))
        bad("theta_grid range is empty");
    std::vector<double> g;
    for (int k = 0; a + k * h <= b + 1e-12; ++k)
        g.push_back(a + k * h);
    return g;
}

std::vector<double> as_vector(const Eigen::VectorXd &v) { return {v.data(), v.data() + v.size()}; }

std::filesystem::path out_file(const RunConfig &cfg, const std::string &name)
{
    std::filesystem::create_directories(cfg.out);
    return std::filesystem::path(cfg.out) / name;
}

void write_json(const RunConfig &cfg, const std::string &name, const json &j)
{
    std::ofstream os(out_file(cfg, name));
    os << j.dump(2) << '\n';
}

const CharFnModel &require_model(const RunConfig &cfg)
{
    if (!cfg.model)
        bad("this command needs a model");
    return *cfg.model;
}

json resolved_plan(const AutoPlanRequest &req, const AutoPlan &ap)
{
    json r;
    if (req.D <= 0.0)
        r["D"] = ap.plan.D;
    if (req.eps <= 0.0)
        r["eps"] = ap.plan.eps;
    if (req.R <= 0.0)
        r["R"] = ap.plan.bounds.R;
    r["theta"] = ap.choice.tb.theta;
    r["B"] = ap.choice.tb.B;
    return r;
}

// Median wall time of f() over reps runs.
template <class F> double median_seconds(int reps, F &&f)
{
    std::vector<double> t;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    std::sort(t.begin(), t.end());
    std::size_t m = t.size() / 2;
    return t.size() % 2 ? t[m] : 0.5 * (t[m - 1] + t[m]);
}

std::vector<double> x_grid(const RunConfig &cfg)
{
    std::vector<double> x(cfg.x_points);
    for (int i = 0; i < cfg.x_points; ++i)
        x[i] = cfg.x_points == 1 ? cfg.x_lo
                                 : cfg.x_lo + (cfg.x_hi - cfg.x_lo) * i / (cfg.x_points - 1);
    return x;
}

TabulatedCdf gig_cdf_table(const GigParams &g)
{
    auto c = cumulants(CharFnModel::gig(g.a, g.b, g.p), 1.0, 2);
    double hi = c[1] + 40.0 * std::sqrt(c[2]);
    return TabulatedCdf([g](double x) { return gig_density(g, x); }, 0.0, INFINITY, 0.0, hi);
}

} // namespace

double RunConfig::delta() const { return T / std::ldexp(1.0, n); }

RunConfig parse_config(const json &j)
{
    try {
        if (!j.is_object())
            bad("config must be a JSON object");
        RunConfig c;
        if (j.contains("model"))
            c.model = parse_model(j["model"]);
        if (j.contains("gh"))
            c.gh = parse_gh(j["gh"]);
        if (!c.model && c.gh.kind == GhSpec::Kind::None)
            bad("config needs a model or gh section");

        c.plan.eta = static_cast<int>(get_num(j, "eta", 4));
        std::string mode = j.value("tail_mode", "cdf");
        if (mode == "cdf")
            c.plan.mode = TailMode::CdfTail;
        else if (mode == "density")
            c.plan.mode = TailMode::DensityTail;
        else
            bad("tail_mode must be cdf or density");
        c.plan.D = num_or_auto(j, "D");
        c.plan.eps = num_or_auto(j, "eps");
        c.plan.R = num_or_auto(j, "R");
        c.plan.p = get_num(j, "p", 1.0);
        if (j.contains("theta_grid"))
            c.plan.theta_grid = parse_theta_grid(j["theta_grid"]);
        c.plan.scan.points = static_cast<int>(get_num(j, "scan_points", c.plan.scan.points));
        c.plan.scan.u_max = get_num(j, "scan_u_max", c.plan.scan.u_max);

        c.n = static_cast<int>(get_num(j, "n", c.n));
        c.T = get_num(j, "T", c.T);
        if (c.n < 0 || c.n > 30 || !(c.T > 0.0))
            bad("need 0 <= n <= 30 and T > 0");
        if (j.contains("matern")) {
            const json &m = j["matern"];
            c.matern = make_matern(get_num(m, "v", 1.0), get_num(m, "r", 0.1),
                                   get_num(m, "chi", 1.5));
        }
        c.nystrom_m = static_cast<int>(get_num(j, "nystrom_m", c.nystrom_m));
        if (j.contains("domain")) {
            auto d = j["domain"].get<std::vector<double>>();
            if (d.size() != 2 || !(d[1] > d[0]))
                bad("domain must be [lo, hi] with lo < hi");
            c.x_lo = d[0];
            c.x_hi = d[1];
        }
        c.x_points = static_cast<int>(get_num(j, "x_points", c.x_points));
        c.x_probe = get_num(j, "x_probe", c.x_hi);
        c.stream_index = static_cast<std::uint64_t>(get_num(j, "stream_index", 0));
        if (j.contains("etas"))
            c.etas = j["etas"].get<std::vector<int>>();
        c.paths = static_cast<std::size_t>(get_num(j, "paths", static_cast<double>(c.paths)));
        c.fields = static_cast<std::size_t>(get_num(j, "fields", static_cast<double>(c.fields)));
        c.repetitions = std::max(5, static_cast<int>(get_num(j, "repetitions", 5)));
        if (j.contains("levels"))
            c.levels = j["levels"].get<std::vector<int>>();
        c.reference_level = static_cast<int>(get_num(j, "reference_level", c.reference_level));
        c.write_coefficients = j.value("write_coefficients", false);
        if (j.contains("seed"))
            c.seed = j["seed"].get<std::uint64_t>();
        c.threads = static_cast<int>(get_num(j, "threads", 1));
        c.out = j.value("out", std::string("."));
        if (c.x_points < 1 || c.nystrom_m < 1 || c.threads < 1 || c.paths < 1)
            bad("x_points, nystrom_m, threads and paths must be positive");
        return c;
    } catch (const json::exception &e) {
        bad(std::string("config: ") + e.what());
    }
}

RunConfig load_config(const std::string &path)
{
    std::ifstream is(path);
    if (!is)
        bad("cannot open config " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception &e) {
        bad(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

int exit_code(const Error &e)
{
    switch (e.kind()) {
    case ErrorKind::Config:
    case ErrorKind::Domain:
    case ErrorKind::InfeasibleOrder:
    case ErrorKind::IncompatibleShape:
    case ErrorKind::IncompatibleScale:
    case ErrorKind::UnsupportedMoment:
        return 2;
    default:
        return 3;
    }
}

json to_json(const GhNParams &p)
{
    json g = json::array();
    for (int r = 0; r < p.n; ++r)
        g.push_back(as_vector(p.gamma.row(r).transpose()));
    return {{"n", p.n},          {"lambda", p.lambda},        {"alpha", p.alpha},
            {"delta", p.delta},  {"beta", as_vector(p.beta)}, {"mu", as_vector(p.mu)},
            {"gamma", g}};
}

json to_json(const AutoPlan &ap)
{
    const auto &pl = ap.plan;
    return {{"model", pl.model.name()},
            {"delta", pl.delta},
            {"tail_mode", pl.bounds.mode == TailMode::CdfTail ? "cdf" : "density"},
            {"eta", pl.bounds.eta},
            {"R", pl.bounds.R},
            {"kappa", pl.kappa},
            {"D", pl.D},
            {"eps", pl.eps},
            {"J", pl.J},
            {"J_from_D", ap.J_from_D},
            {"J_from_eps", ap.J_from_eps},
            {"theta", ap.choice.tb.theta},
            {"B", ap.choice.tb.B},
            {"log_B", ap.choice.tb.log_B},
            {"u_star", ap.choice.tb.u_star},
            {"M", pl.M},
            {"fmin", pl.fmin},
            {"fmax", pl.fmax}};
}

FieldSetup field_setup(const RunConfig &cfg, int eta)
{
    if (cfg.gh.kind == GhSpec::Kind::None)
        bad("field commands need a gh section");
    FieldSetup s;
    const double delta = cfg.delta();
    GhNParams probe;
    switch (cfg.gh.kind) {
    case GhSpec::Kind::Marginals:
        probe = decorrelate(cfg.gh.marginals);
        break;
    case GhSpec::Kind::Template:
        probe = decorrelate({cfg.gh.tmpl});
        break;
    default:
        probe = *cfg.gh.full;
    }
    s.gig = subordinator_of(probe);
    AutoPlanRequest req = cfg.plan;
    req.eta = eta;
    s.plan = auto_plan(CharFnModel::gig(s.gig.a, s.gig.b, s.gig.p), delta, req);
    const auto &pl = s.plan.plan;
    const CharFnModel gm = pl.model;
    const double C = budget_constant_C(pl.bounds, pl.kappa);
    s.e1 = lp_sampling_budget(pl.bounds, pl.D, C, 1.0, delta, cfg.T, c_ell_standin(gm, 1.0)).total;
    s.e2 = lp_sampling_budget(pl.bounds, pl.D, C, 2.0, delta, cfg.T, c_ell_standin(gm, 2.0)).e_gig;

    s.basis = nystrom_eigs(cfg.matern, cfg.x_lo, cfg.x_hi, cfg.nystrom_m);
    double c_probe = c_ell_constants(s.e1, s.e2, probe, delta).c_ell;
    s.trunc = truncation_select(s.basis, c_probe, delta, cfg.T);
    if (cfg.gh.kind == GhSpec::Kind::Template) {
        int N = cfg.gh.N > 0 ? cfg.gh.N : s.trunc.N;
        s.params = decorrelate(std::vector<Gh1Params>(N, cfg.gh.tmpl));
    } else {
        s.params = probe;
    }
    if (s.params.n > cfg.nystrom_m)
        bad("field dimension exceeds the Nystrom basis size");
    s.c_ell = c_ell_constants(s.e1, s.e2, s.params, delta).c_ell;
    double b = field_error_bound(s.basis, s.params.n, s.c_ell, delta, cfg.T);
    s.bound_sq = b * b;

    s.resolved = resolved_plan(cfg.plan, s.plan);
    s.resolved["N_selected"] = s.trunc.N;
    s.resolved["N_capped"] = s.trunc.capped;
    s.resolved["N"] = s.params.n;
    s.resolved["c_ell"] = s.c_ell;
    return s;
}

TableRow table_row(const RunConfig &cfg, int eta)
{
    TableRow row;
    row.eta = eta;
    row.setup = field_setup(cfg, eta);
    const auto &s = row.setup;
    const int N = s.params.n;
    const auto &plan = s.plan.plan;

    auto xs = x_grid(cfg);
    Eigen::MatrixXd phi = phi_matrix(s.basis, N, xs);
    std::uint64_t k = 0;
    row.seconds = median_seconds(cfg.repetitions, [&] {
        assemble_field(phi, xs, s.params, plan, cfg.n, cfg.T, RngStream(cfg.seed ^ 0x5eedULL, k++));
    });

    // Both time-1 laws are only known in closed form at t = 1.
    if (cfg.fields < 20 || cfg.T != 1.0)
        return row;
    Eigen::MatrixXd phi1 = phi_matrix(s.basis, N, {cfg.x_probe});
    std::vector<double> v(cfg.fields);
    parallel_for(cfg.fields, cfg.threads, [&](std::size_t i) {
        auto f = assemble_field(phi1, {cfg.x_probe}, s.params, plan, cfg.n, cfg.T,
                                RngStream(cfg.seed, i));
        v[i] = f.values(0, f.values.cols() - 1);
    });
    Eigen::VectorXd c = phi1.col(0).cwiseQuotient(gh_cov(s.params).diagonal().cwiseSqrt());
    Gh1Params L = point_law(s.params, c);
    double sd = phi1.col(0).norm();
    TabulatedCdf F([&](double y) { return gh1_density(L, y); }, -INFINITY, INFINITY,
                   L.mu - 40.0 * sd, L.mu + 40.0 * sd);
    row.ks_gh = ks_test(v, [&](double y) { return F(y); }).p_value;

    // The subordinator on its own streams.
    auto paths = sample_paths(plan, cfg.n, cfg.T, cfg.seed, cfg.fields, cfg.threads,
                              std::uint64_t(1) << 40);
    std::vector<double> g(cfg.fields);
    for (std::size_t i = 0; i < cfg.fields; ++i) {
        rectify_increasing(paths[i]);
        g[i] = paths[i].values.back();
    }
    TabulatedCdf G = gig_cdf_table(s.gig);
    row.ks_gig = ks_test(g, [&](double y) { return G(y); }).p_value;
    return row;
}

json cmd_plan(const RunConfig &cfg)
{
    const auto &model = require_model(cfg);
    AutoPlan ap = auto_plan(model, cfg.delta(), cfg.plan);
    json r = to_json(ap);
    const auto &pl = ap.plan;
    double C = budget_constant_C(pl.bounds, pl.kappa);
    if (cfg.plan.p < pl.bounds.eta - (pl.bounds.mode == TailMode::DensityTail ? 1.0 : 0.0)) {
        auto e = lp_sampling_budget(pl.bounds, pl.D, C, cfg.plan.p, cfg.delta(), cfg.T,
                                    c_ell_standin(model, cfg.plan.p));
        r["budget"] = {{"p", e.p},
                       {"tail_term", e.tail_term},
                       {"cdf_gap_term", e.cdf_gap_term},
                       {"discretization_term", e.discretization_term},
                       {"total", e.total}};
    }
    r["resolved"] = resolved_plan(cfg.plan, ap);
    write_json(cfg, "plan.json", r);
    if (cfg.write_coefficients) {
        std::ofstream os(out_file(cfg, "coefficients.csv"));
        write_coefficients_csv(pl, os);
    }
    return r;
}

json cmd_sample_process(const RunConfig &cfg)
{
    const auto &model = require_model(cfg);
    AutoPlan ap = auto_plan(model, cfg.delta(), cfg.plan);
    auto paths = sample_paths(ap.plan, cfg.n, cfg.T, cfg.seed, cfg.paths, cfg.threads);
    {
        std::ofstream os(out_file(cfg, "paths.csv"));
        os.precision(17);
        os << 't';
        for (std::size_t i = 0; i < paths.size(); ++i)
            os << ",path" << i;
        os << '\n';
        for (std::size_t j = 0; j < paths[0].t.size(); ++j) {
            os << paths[0].t[j];
            for (const auto &p : paths)
                os << ',' << p.values[j];
            os << '\n';
        }
    }
    json r = {{"seed", cfg.seed},
              {"paths", cfg.paths},
              {"steps", paths[0].t.size() - 1},
              {"plan", to_json(ap)},
              {"resolved", resolved_plan(cfg.plan, ap)}};
    write_json(cfg, "paths_meta.json", r);
    return r;
}

json cmd_sample_field(const RunConfig &cfg)
{
    int eta = cfg.plan.eta;
    FieldSetup s = field_setup(cfg, eta);
    auto xs = x_grid(cfg);
    FieldSample f = assemble_field(s.basis, s.params.n, s.params, s.plan.plan, cfg.n, cfg.T, xs,
                                   RngStream(cfg.seed, cfg.stream_index));
    {
        std::ofstream os(out_file(cfg, "field.csv"));
        write_field_csv(f, os);
    }
    std::ostringstream meta;
    write_field_meta_json(f, meta);
    json r = json::parse(meta.str());
    r["plan"] = to_json(s.plan);
    r["E1"] = s.e1;
    r["E2"] = s.e2;
    r["field_bound_sq"] = s.bound_sq;
    r["resolved"] = s.resolved;
    write_json(cfg, "field_meta.json", r);
    return r;
}

json cmd_tables(const RunConfig &cfg)
{
    std::vector<TableRow> rows;
    for (int eta : cfg.etas)
        rows.push_back(table_row(cfg, eta));
    const double delta = cfg.delta();
    std::ofstream os(out_file(cfg, "tables.csv"));
    os.precision(10);
    os << "eta,E1,E1_over_delta,E2,field_bound_sq,N,M,theta,ks_p_gh,ks_p_gig,seconds,rel_time\n";
    json r = {{"rows", json::array()}};
    for (const auto &row : rows) {
        const auto &s = row.setup;
        double rel = row.seconds / rows.front().seconds;
        os << row.eta << ',' << s.e1 << ',' << s.e1 / delta << ',' << s.e2 << ',' << s.bound_sq
           << ',' << s.params.n << ',' << s.plan.plan.M << ',' << s.plan.choice.tb.theta << ','
           << row.ks_gh << ',' << row.ks_gig << ',' << row.seconds << ',' << rel << '\n';
        r["rows"].push_back({{"eta", row.eta},
                             {"E1", s.e1},
                             {"E1_over_delta", s.e1 / delta},
                             {"E2", s.e2},
                             {"field_bound_sq", s.bound_sq},
                             {"N", s.params.n},
                             {"M", s.plan.plan.M},
                             {"theta", s.plan.choice.tb.theta},
                             {"ks_p_gh", row.ks_gh},
                             {"ks_p_gig", row.ks_gig},
                             {"seconds", row.seconds},
                             {"rel_time", rel},
                             {"resolved", s.resolved}});
    }
    write_json(cfg, "tables.json", r);
    return r;
}

json cmd_convergence(const RunConfig &cfg)
{
    const auto &model = require_model(cfg);
    ConvergenceOptions o;
    o.levels = cfg.levels;
    o.reference_level = cfg.reference_level;
    o.T = cfg.T;
    o.p = cfg.plan.p;
    o.paths = cfg.paths;
    o.plan_request = cfg.plan;
    o.threads = cfg.threads;
    auto res = convergence_study(model, o, cfg.seed);
    {
        std::ofstream os(out_file(cfg, "convergence.csv"));
        write_convergence_csv(res, os);
    }
    json r = {{"slope", res.slope}, {"rows", json::array()}};
    for (const auto &row : res.rows)
        r["rows"].push_back({{"delta", row.delta},
                             {"empirical", row.empirical},
                             {"stderr", row.std_error},
                             {"budget", row.budget},
                             {"M", row.M}});
    write_json(cfg, "convergence.json", r);
    return r;
}

json cmd_decorrelate(const RunConfig &cfg)
{
    std::vector<Gh1Params> ms;
    switch (cfg.gh.kind) {
    case GhSpec::Kind::Marginals:
        ms = cfg.gh.marginals;
        break;
    case GhSpec::Kind::Template:
        if (cfg.gh.N <= 0)
            bad("decorrelate needs an explicit N");
        ms.assign(cfg.gh.N, cfg.gh.tmpl);
        break;
    default:
        bad("decorrelate needs gh.marginals or gh.marginal with N");
    }
    GhNParams p = decorrelate(ms);
    Eigen::MatrixXd cov = gh_cov(p);
    double off = 0.0;
    for (int r = 0; r < p.n; ++r)
        for (int c = 0; c < p.n; ++c)
            if (r != c)
                off = std::max(off, std::abs(cov(r, c)));
    json r = to_json(p);
    r["max_abs_offdiag_cov"] = off;
    write_json(cfg, "decorrelated.json", r);
    return r;
}

} // namespace levy::cli
