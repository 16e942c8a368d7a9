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

#include "levyfield/sampler.hpp"

#include "levyfield/distributions.hpp"
#include "levyfield/errors.hpp"
#include "levyfield/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace levy {

InitialValueRule make_initial_rule(const CharFnModel &model, double delta)
{
    InitialValueRule r;
    int top = max_moment_order(model);
    if (top >= 0 && top < 2)
        return r;
    auto c = cumulants(model, delta, 2);
    if (!(c[2] > 0.0))
        return r;
    if (model.is_subordinator()) {
        r.kind = InitialValueRule::Kind::InverseGaussian;
        r.b0 = std::sqrt(c[1] / c[2]);
        r.a0 = c[1] * r.b0;
    } else {
        r.kind = InitialValueRule::Kind::Normal;
        r.mean = c[1];
        r.sd = std::sqrt(c[2]);
    }
    return r;
}

double initial_value(const InitialValueRule &rule, double u)
{
    switch (rule.kind) {
    case InitialValueRule::Kind::InverseGaussian:
        return ig_quantile(rule.a0, rule.b0, u);
    case InitialValueRule::Kind::Normal:
        return rule.mean + rule.sd * normal_quantile(u);
    case InitialValueRule::Kind::Zero:
        break;
    }
    return 0.0;
}

double initial_value(const CharFnModel &model, double delta, double u)
{
    return initial_value(make_initial_rule(model, delta), u);
}

namespace {

double bisect_envelope(const InversionPlan &plan, double u, const NewtonOptions &opt,
                       NewtonTrace *trace)
{
    if (trace)
        trace->bisection = true;
    const auto &gx = plan.grid_x;
    const auto &gf = plan.grid_f;
    // First table node whose running maximum reaches u.
    double run = -HUGE_VAL;
    std::size_t j = 0;
    for (; j < gf.size(); ++j) {
        run = std::max(run, gf[j]);
        if (run >= u)
            break;
    }
    if (j == gf.size())
        return gx.back();
    if (j == 0)
        return gx.front();
    double lo = gx[j - 1], hi = gx[j];
    double flo = gf[j - 1] - u;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double r = eval_cdf(plan, mid) - u;
        if (trace) {
            ++trace->evaluations;
            trace->residuals.push_back(std::abs(r));
        }
        if (std::abs(r) <= opt.root_tol || hi - lo <= 4e-16 * plan.D)
            return mid;
        if ((r < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = r;
        } else {
            hi = mid;
        }
    }
    std::ostringstream os;
    os << "bisection did not converge for u = " << u << " on [" << lo << ", " << hi << "]";
    fail(ErrorKind::NumericFailure, os.str());
}

} // namespace

double newton_invert(const InversionPlan &plan, double u, double x0, const NewtonOptions &opt,
                     NewtonTrace *trace)
{
    const double half = 0.5 * plan.D;
    auto project = [half](double x) { return std::clamp(x, -half, half); };
    double x = project(x0);
    double r = eval_cdf(plan, x) - u;
    if (trace) {
        ++trace->evaluations;
        trace->residuals.push_back(std::abs(r));
    }
    for (int it = 0; it < opt.max_iter; ++it) {
        if (std::abs(r) <= opt.root_tol)
            return x;
        double dF = eval_cdf_derivative(plan, x);
        if (trace)
            ++trace->evaluations;
        if (!(dF > 0.0) || !std::isfinite(dF))
            return bisect_envelope(plan, u, opt, trace);
        const double d = -r / dF;
        const double f0 = 0.5 * r * r;
        double lambda = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < opt.max_backtracks; ++bt) {
            double xn = project(x + lambda * d);
            double rn = eval_cdf(plan, xn) - u;
            if (trace)
                ++trace->evaluations;
            double fn = 0.5 * rn * rn;
            if (fn <= (1.0 - 2.0 * opt.armijo * lambda) * f0) {
                x = xn;
                r = rn;
                accepted = true;
                break;
            }
            // Minimizer of the quadratic through phi(0), phi'(0) = -2 f0, phi(lambda).
            double denom = 2.0 * (fn - f0 + 2.0 * f0 * lambda);
            double ln = denom > 0.0 ? 2.0 * f0 * lambda * lambda / denom : 0.5 * lambda;
            lambda = std::clamp(ln, 0.1 * lambda, 0.5 * lambda);
        }
        if (!accepted)
            return bisect_envelope(plan, u, opt, trace);
        if (trace)
            trace->residuals.push_back(std::abs(r));
    }
    if (std::abs(r) <= opt.root_tol)
        return x;
    return bisect_envelope(plan, u, opt, trace);
}

double pseudo_inverse(const InversionPlan &plan, const InitialValueRule &rule, double u,
                      const NewtonOptions &opt, NewtonTrace *trace)
{
    if (!(u >= 0.0 && u <= 1.0))
        fail(ErrorKind::Domain, "pseudo_inverse requires u in [0, 1]");
    const double half = 0.5 * plan.D;
    if (u < plan.fmin)
        return -half;
    if (u > plan.fmax)
        return half;
    double x0 = std::clamp(initial_value(rule, u), -half, half);
    return newton_invert(plan, u, x0, opt, trace);
}

double pseudo_inverse(const InversionPlan &plan, double u)
{
    return pseudo_inverse(plan, make_initial_rule(plan.model, plan.delta), u);
}

PathSkeleton sample_path(const InversionPlan &plan, int n, double T, RngStream stream)
{
    if (n < 0 || n > 40 || !(T > 0.0))
        fail(ErrorKind::Domain, "sample_path requires 0 <= n <= 40, T > 0");
    const std::size_t steps = std::size_t{1} << n;
    const double delta = T / static_cast<double>(steps);
    if (std::abs(delta - plan.delta) > 1e-12 * plan.delta)
        fail(ErrorKind::Domain, "plan delta does not match T / 2^n");
    auto rule = make_initial_rule(plan.model, plan.delta);
    PathSkeleton p;
    p.delta = delta;
    p.t.resize(steps + 1);
    p.values.resize(steps + 1);
    p.t[0] = 0.0;
    p.values[0] = 0.0;
    for (std::size_t j = 1; j <= steps; ++j) {
        p.t[j] = static_cast<double>(j) * delta;
        p.values[j] = p.values[j - 1] + pseudo_inverse(plan, rule, stream.uniform());
    }
    return p;
}

std::size_t rectify_increasing(PathSkeleton &path)
{
    std::size_t changed = 0;
    double prev_raw = path.values.empty() ? 0.0 : path.values[0];
    for (std::size_t j = 1; j < path.values.size(); ++j) {
        double raw = path.values[j];
        double inc = raw - prev_raw;
        prev_raw = raw;
        if (inc < 0.0) {
            inc = 0.0;
            ++changed;
        }
        path.values[j] = path.values[j - 1] + inc;
    }
    return changed;
}

std::vector<PathSkeleton> sample_paths(const InversionPlan &plan, int n, double T,
                                       std::uint64_t seed, std::size_t count, int threads,
                                       std::uint64_t first_index)
{
    std::vector<PathSkeleton> out(count);
    parallel_for(count, threads, [&](std::size_t i) {
        out[i] = sample_path(plan, n, T, RngStream(seed, first_index + i));
    });
    return out;
}

CoupledError coupled_error(const std::function<double(double)> &approx_quantile,
                           const std::function<double(double)> &exact_quantile,
                           std::size_t n_samples, double p, RngStream stream)
{
    if (n_samples < 2 || !(p >= 1.0))
        fail(ErrorKind::Domain, "coupled_error needs n >= 2 and p >= 1");
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        double u = stream.uniform();
        double e = std::pow(std::abs(exact_quantile(u) - approx_quantile(u)), p);
        s += e;
        s2 += e * e;
    }
    double n = static_cast<double>(n_samples);
    double mean = s / n;
    double var = std::max(0.0, (s2 - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n), n_samples};
}

CoupledError coupled_error(const InversionPlan &plan,
                           const std::function<double(double)> &exact_quantile,
                           std::size_t n_samples, double p, RngStream stream)
{
    auto rule = make_initial_rule(plan.model, plan.delta);
    return coupled_error([&](double u) { return pseudo_inverse(plan, rule, u); }, exact_quantile,
                         n_samples, p, stream);
}

void write_path_csv(const PathSkeleton &path, std::ostream &os)
{
    os << "t,value\n";
    os.precision(17);
    for (std::size_t j = 0; j < path.t.size(); ++j)
        os << path.t[j] << ',' << path.values[j] << '\n';
}

} // namespace levy
