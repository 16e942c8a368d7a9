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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include "levyfield/charfn.hpp"
#include "levyfield/cli.hpp"
#include "levyfield/distributions.hpp"
#include "levyfield/errors.hpp"
#include "levyfield/ghmodel.hpp"
#include "levyfield/inversion.hpp"
#include "levyfield/klfield.hpp"
#include "levyfield/rng.hpp"
#include "levyfield/sampler.hpp"
#include "levyfield/specfun.hpp"
#include "levyfield/stats.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace levy;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

bool within(double x, double target, double frac) { return std::abs(x - target) <= frac * target; }

// Records sub-checks and prints each one.
struct Checks {
    bool ok = true;
    void operator()(bool pass, const std::string &what)
    {
        std::printf("    [%s] %s\n", pass ? "ok" : "FAIL", what.c_str());
        ok = ok && pass;
    }
};

std::string fmt(const char *f, double a)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char *f, double a, double b)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char *f, double a, double b, double c)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

cli::RunConfig field_config(double lambda, double chi)
{
    cli::RunConfig c;
    c.gh.kind = cli::GhSpec::Kind::Template;
    c.gh.tmpl = make_gh1(lambda, 5.0, 0.0, 4.0, 0.0);
    c.gh.N = 0;
    c.matern = make_matern(1.0, 0.1, chi);
    c.nystrom_m = 256;
    c.n = 6;
    c.T = 1.0;
    c.x_points = 11;
    c.x_probe = 1.0;
    c.fields = 1000;
    c.seed = 2026;
    return c;
}

// 1. Sup-norm gap of the inverted CDF on [-D/2, D/2].
bool criterion1()
{
    Checks check;
    struct Case {
        const char *name;
        CharFnModel model;
        std::function<double(double, double)> cdf; // (delta, x)
    };
    std::vector<Case> cases = {
        {"Gaussian(0,1)", CharFnModel::gaussian(0.0, 1.0),
         [](double d, double x) { return normal_cdf(x / std::sqrt(d)); }},
        {"IG(1,1)", CharFnModel::ig(1.0, 1.0),
         [](double d, double x) { return x <= 0.0 ? 0.0 : ig_cdf(d, 1.0, x); }}};
    struct Setting {
        double D, eps;
    };
    const std::vector<Setting> settings = {{4.0, 1e-3}, {8.0, 1e-4}, {10.0, 1e-5}};
    for (const auto &c : cases) {
        for (double delta : {1.0, 1.0 / 64}) {
            for (const auto &s : settings) {
                AutoPlanRequest r;
                r.eta = 4;
                r.D = s.D;
                r.eps = s.eps;
                auto plan = auto_plan(c.model, delta, r).plan;
                const int pts = 10000;
                std::vector<double> xs(pts);
                for (int i = 0; i < pts; ++i)
                    xs[i] = -plan.D / 2 + plan.D * i / (pts - 1);
                auto F = eval_cdf_batch(plan, xs);
                double gap = 0.0;
                for (int i = 0; i < pts; ++i)
                    gap = std::max(gap, std::abs(F[i] - c.cdf(delta, xs[i])));
                check(gap < plan.eps,
                      std::string(c.name) + fmt(" delta=%g", delta) +
                          fmt(" D=%g eps=%.3g", plan.D, plan.eps) +
                          fmt(" M=%.0f sup gap/eps=%.4f", double(plan.M), gap / plan.eps));
            }
        }
    }
    return check.ok;
}

// 2. Plan sizes and the optimal theta.
bool criterion2()
{
    Checks check;
    const double delta = 1.0 / 64;
    {
        AutoPlanRequest r;
        r.eta = 2;
        r.D = std::pow(delta, 1.0 / (1.0 - 2.0));
        auto ap = auto_plan(CharFnModel::student_t3(), delta, r);
        check(within(double(ap.plan.M), 12924.0, 0.25),
              fmt("t3 eta=2: M=%.0f (target 12924 +-25%%), theta=%g", double(ap.plan.M),
                  ap.choice.tb.theta));
    }
    for (auto [eta, target] : {std::pair{4, 79086.0}, std::pair{10, 33030.0}}) {
        AutoPlanRequest r;
        r.eta = eta;
        auto ap = auto_plan(CharFnModel::gig(4.0, 5.0, 1.0), delta, r);
        check(within(double(ap.plan.M), target, 0.25),
              fmt("GIG(4,5,1) eta=%g: M=%.0f (target %.0f +-25%%)", double(eta),
                  double(ap.plan.M), target));
    }
    for (int eta : {4, 6, 8, 10}) {
        AutoPlanRequest r;
        r.eta = eta;
        auto ap = auto_plan(CharFnModel::gig(4.0, 5.0, -0.5), delta, r);
        double th = ap.choice.tb.theta;
        check(std::abs(th - 11.0) <= 0.5,
              fmt("NIG subordinator GIG(4,5,-1/2) eta=%g: theta_opt=%g (target 11 +-0.5), M=%.0f",
                  double(eta), th, double(ap.plan.M)));
    }
    return check.ok;
}

// 3. L1 error budgets of the subordinators.
bool criterion3()
{
    Checks check;
    const double delta = 1.0 / 64;
    auto nig = cli::field_setup(field_config(-0.5, 1.5), 4);
    check(within(nig.e1, 0.0132, 0.25), fmt("NIG eta=4: E1=%.5f (target 0.0132 +-25%%)", nig.e1));
    check(nig.e1 / delta >= 0.5 && nig.e1 / delta <= 1.5,
          fmt("NIG eta=4: E1/delta=%.4f in [0.5, 1.5]", nig.e1 / delta));
    auto hyp = cli::field_setup(field_config(1.0, 0.5), 4);
    check(within(hyp.e1, 0.0143, 0.25),
          fmt("hyperbolic eta=4: E1=%.5f (target 0.0143 +-25%%)", hyp.e1));
    std::printf("    E2 (squared L2 bound): NIG %.4f, hyperbolic %.4f\n", nig.e2, hyp.e2);
    return check.ok;
}

// 4. Convergence order against exact IG paths.
bool criterion4()
{
    Checks check;
    ConvergenceOptions o;
    o.levels = {4, 5, 6, 7, 8};
    o.reference_level = 12;
    o.paths = 10000;
    o.plan_request.eta = 4;
    auto r = convergence_study(CharFnModel::ig(40.0, 20.0), o, 2026);
    for (const auto &row : r.rows)
        check(row.empirical <= row.budget,
              fmt("delta=%g: empirical %.5g <= budget %.5g", row.delta, row.empirical,
                  row.budget) +
                  fmt(" (stderr %.2g, M=%.0f)", row.std_error, double(row.M)));
    check(r.slope >= 0.8, fmt("log-log slope %.4f >= 0.8", r.slope));
    return check.ok;
}

// 5. Decorrelation.
bool criterion5()
{
    Checks check;
    for (double lambda : {-0.5, 1.0}) {
        auto p = decorrelate(std::vector<Gh1Params>(18, make_gh1(lambda, 5.0, 0.0, 4.0, 0.0)));
        bool exact = p.n == 18 && p.alpha == 5.0 && p.delta == 4.0 &&
                     p.gamma == Eigen::MatrixXd::Identity(18, 18) && p.beta.isZero(0.0);
        check(exact, fmt("lambda=%g, N=18: Gamma = I, alpha = 5, delta = 4 exactly", lambda));
    }

    // Random admissible asymmetric NIG pair sharing delta sqrt(alpha^2 - beta^2).
    std::mt19937_64 g(20260101);
    std::uniform_real_distribution<double> Ua(1.5, 4.0), Ub(-0.5, 0.5), Uc(2.0, 4.0);
    GhNParams p;
    std::vector<Gh1Params> ms;
    for (int attempt = 0;; ++attempt) {
        double c = Uc(g);
        ms.clear();
        for (int i = 0; i < 2; ++i) {
            double a = Ua(g), b = Ub(g) * a;
            ms.push_back(make_gh1(-0.5, a, b, c / std::sqrt(a * a - b * b), Ub(g)));
        }
        try {
            p = decorrelate(ms);
            break;
        } catch (const Error &e) {
            if (e.kind() != ErrorKind::InfeasibleDecorrelation || attempt > 100)
                throw;
        }
    }
    std::printf("    pair: (alpha, beta, delta) = (%.4f, %.4f, %.4f), (%.4f, %.4f, %.4f)\n",
                ms[0].alpha, ms[0].beta, ms[0].delta, ms[1].alpha, ms[1].beta, ms[1].delta);
    double off = std::abs(gh_cov(p)(0, 1));
    check(off <= 1e-9, fmt("gh_cov off-diagonal %.3g <= 1e-9", off));

    // 1e5 increments over unit time with an exact IG subordinator.
    const int n = 100000;
    GigParams sub = subordinator_of(p);
    RngStream s(5, 0);
    PathSkeleton path;
    path.delta = 1.0;
    path.t.resize(n + 1);
    path.values.resize(n + 1);
    path.values[0] = 0.0;
    for (int k = 0; k < n; ++k) {
        path.t[k + 1] = k + 1.0;
        double z = s.normal(), u = s.uniform();
        path.values[k + 1] = path.values[k] + ig_from_normal(sub.a, sub.b, z, u);
    }
    RngStream normals(5, 1);
    Eigen::MatrixXd inc = subordinate(p, path, normals);
    double rho = empirical_corr(inc)(0, 1);
    double tol = 3.0 / std::sqrt(double(n));
    check(std::abs(rho) <= tol, fmt("empirical increment correlation %.5f within +-%.5f", rho, tol));
    return check.ok;
}

// 6. Distribution of the NIG field and its subordinator.
bool criterion6()
{
    Checks check;
    auto cfg = field_config(-0.5, 1.5);
    const double delta = cfg.delta();
    auto row = cli::table_row(cfg, 4);
    const auto &s = row.setup;
    check(within(s.trunc.N, 18.0, 0.15), fmt("truncation N=%g (target 18 +-15%%)", s.trunc.N));
    check(row.ks_gh > 0.01, fmt("field at (x=1, t=1), 1000 samples: KS p=%.4f > 0.01", row.ks_gh));
    check(row.ks_gig > 0.01, fmt("subordinator at t=1: KS p=%.4f > 0.01", row.ks_gig));

    // First increments against IG(4 delta, 5).
    auto paths = sample_paths(s.plan.plan, cfg.n, cfg.T, 77, 1000);
    std::vector<double> inc(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i)
        inc[i] = paths[i].values[1] - paths[i].values[0];
    double p_inc =
        ks_test(inc, [&](double x) { return x <= 0.0 ? 0.0 : ig_cdf(4.0 * delta, 5.0, x); }).p_value;
    check(p_inc > 0.01, fmt("subordinator increment vs IG(4 delta, 5): KS p=%.4f > 0.01", p_inc));
    std::printf("    plan M=%.0f, theta=%g, median time per field %.4f s\n", double(s.plan.plan.M),
                s.plan.choice.tb.theta, row.seconds);
    return check.ok;
}

// 7. Trace identity and the field error bound.
bool criterion7()
{
    Checks check;
    for (double chi : {0.5, 1.5}) {
        auto b = nystrom_eigs(make_matern(1.0, 0.1, chi), 0.0, 1.0, 256);
        double tr = b.rho.sum();
        check(std::abs(tr - 1.0) <= 0.01, fmt("chi=%g: sum rho = %.6f within 1%% of 1", chi, tr));
    }
    auto hyp = cli::field_setup(field_config(1.0, 0.5), 4);
    check(within(hyp.bound_sq, 0.0646, 0.5),
          fmt("hyperbolic chi=1/2 eta=4: bound^2 = %.4f (target 0.0646 +-50%%), N=%g", hyp.bound_sq,
              hyp.params.n));

    // Empirical counterpart for the NIG field, where the subordinator is IG
    // and has an exact quantile. With beta = 0 and unit-variance marginals,
    // E||L(1) - L_N(1)||^2 = tail + sum_{i<=N} rho_i E|G(1) - G~(1)| / Var.
    auto nig = cli::field_setup(field_config(-0.5, 1.5), 4);
    const auto &plan = nig.plan.plan;
    const double delta = 1.0 / 64;
    auto rule = make_initial_rule(plan.model, delta);
    const int paths = 1000;
    double sum = 0.0;
    for (int k = 0; k < paths; ++k) {
        RngStream s(31, k);
        double diff = 0.0;
        for (int j = 0; j < 64; ++j) {
            double u = s.uniform();
            diff += ig_quantile(4.0 * delta, 5.0, u) - pseudo_inverse(plan, rule, u);
        }
        sum += std::abs(diff);
    }
    double eg = sum / paths;
    double var = gh_cov(nig.params)(0, 0);
    double head = nig.basis.rho.head(nig.params.n).sum();
    double tail = nig.basis.trace - head;
    double emp = tail + head * eg / var;
    std::printf("    NIG chi=3/2 eta=4: bound^2 %.4f, empirical %.4f (E|G-G~| = %.3g)\n",
                nig.bound_sq, emp, eg);
    return check.ok;
}

// 8. Special functions.
bool criterion8()
{
    Checks check;
    const double pi = 3.14159265358979323846;
    check(rel(gamma_fn(1.0), 1.0) < 1e-14 && rel(gamma_fn(0.5), std::sqrt(pi)) < 1e-14 &&
              rel(gamma_fn(5.0), 24.0) < 1e-14,
          "gamma at 1, 1/2, 5");
    check(rel(bessel_k(0.5, 1.0), std::sqrt(pi / 2) / std::exp(1.0)) < 1e-10,
          "K_{1/2}(1) closed form");
    check(bessel_k(-0.5, 2.0) == bessel_k(0.5, 2.0), "K_{-1/2}(2) = K_{1/2}(2)");
    double quad = boost::math::quadrature::exp_sinh<double>().integrate(
        [](double t) {
            double c = std::cosh(t);
            return c > 700.0 ? 0.0 : std::exp(-c) * c;
        });
    check(rel(bessel_k(1.0, 1.0), quad) < 1e-10, fmt("K_1(1) vs integral representation %.16g", quad));
    bool half = true;
    for (double x : {0.1, 1.0, 10.0})
        half = half && rel(bessel_k(0.5, x), std::sqrt(pi / (2 * x)) * std::exp(-x)) < 1e-10;
    check(half, "K_{1/2}(x) closed form at 0.1, 1, 10");
    bool dec = true;
    for (double nu : {0.0, 0.5, 1.0, 2.5, 7.0}) {
        double prev = INFINITY;
        for (double x = 0.05; x < 60.0; x *= 1.07) {
            double v = bessel_k(nu, x);
            dec = dec && v < prev;
            prev = v;
        }
    }
    check(dec, "K_nu strictly decreasing in x on sampled grids");
    bool recur = true;
    for (double nu : {0.3, 1.0, 2.7})
        for (double x : {0.2, 1.5, 9.0})
            recur = recur && rel(bessel_k(nu + 1, x), bessel_k(nu - 1, x) + 2 * nu / x * bessel_k(nu, x)) < 1e-10;
    check(recur, "K_{nu+1} = K_{nu-1} + (2 nu / x) K_nu");
    check(rel(hurwitz_zeta(2.0, 1.0), pi * pi / 6) < 1e-12, "zeta(2, 1) = pi^2/6");
    check(rel(hurwitz_zeta(3.0, 0.7), 3.217496437095461273) < 1e-10, "zeta(3, 0.7) frozen value");
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> Uz(1.1, 8.0), Us(0.05, 5.0);
    bool zr = true;
    for (int k = 0; k < 200; ++k) {
        double z = Uz(g), s = Us(g);
        zr = zr && rel(hurwitz_zeta(z, s), std::pow(s, -z) + hurwitz_zeta(z, s + 1)) < 1e-10;
    }
    check(zr, "zeta(z, s) = s^-z + zeta(z, s + 1) on a random grid");
    check(rel(v1(0.5, 4.0), 519.5151521813463319) < 1e-10 && rel(v2(0.5, 4.0), 87.21212137866991632) < 1e-10,
          "v1(0.5, 4), v2(0.5, 4) frozen values");
    check(v1(1e-4, 4.0) > 1e16, "v1 diverges as kappa -> 0");
    bool dom = false;
    try {
        v1(2.0 / 3.0, 4.0);
    } catch (const Error &) {
        dom = true;
    }
    check(dom, "kappa = 2/3 rejected");
    return check.ok;
}

} // namespace

// Optional arguments select criteria by number.
int main(int argc, char **argv)
{
    using clock = std::chrono::steady_clock;
    const std::vector<std::pair<const char *, bool (*)()>> all = {
        {"inversion sup-norm accuracy", criterion1}, {"plan sizes and theta_opt", criterion2},
        {"error budgets", criterion3},               {"convergence order", criterion4},
        {"decorrelation", criterion5},               {"field distribution", criterion6},
        {"trace identity and field bound", criterion7}, {"special functions", criterion8}};
    int failed = 0;
    std::vector<std::string> summary;
    std::vector<bool> run(all.size(), argc < 2);
    for (int a = 1; a < argc; ++a) {
        std::size_t k = std::stoul(argv[a]);
        if (k >= 1 && k <= all.size())
            run[k - 1] = true;
    }
    for (std::size_t k = 0; k < all.size(); ++k) {
        if (!run[k])
            continue;
        std::printf("criterion %zu: %s\n", k + 1, all[k].first);
        std::fflush(stdout);
        auto t0 = clock::now();
        bool ok = false;
        try {
            ok = all[k].second();
        } catch (const std::exception &e) {
            std::printf("    [FAIL] exception: %s\n", e.what());
        }
        double sec = std::chrono::duration<double>(clock::now() - t0).count();
        char line[160];
        std::snprintf(line, sizeof line, "%s criterion %zu (%s) %.1f s", ok ? "PASS" : "FAIL", k + 1,
                      all[k].first, sec);
        std::printf("%s\n", line);
        std::fflush(stdout);
        summary.push_back(line);
        failed += !ok;
    }
    std::printf("\nsummary\n");
    for (const auto &s : summary)
        std::printf("%s\n", s.c_str());
    return failed ? 1 : 0;
}
