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

#include "levyfield/stats.hpp"

#include "levyfield/distributions.hpp"
#include "levyfield/errors.hpp"
#include "levyfield/parallel.hpp"
#include "levyfield/rng.hpp"
#include "levyfield/sampler.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace levy {

namespace {

double integrate(const std::function<double(double)> &f, double a, double b)
{
    if (!(b > a))
        return 0.0;
    double err = 0.0;
    // The tolerance is relative; depth 15 keeps near-zero tail integrals cheap,
    // and the absolute check below decides acceptance.
    double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-12,
                                                                             &err);
    if (!std::isfinite(v) || err > 1e-10)
        fail(ErrorKind::NumericFailure, "numeric_cdf: quadrature did not reach 1e-10");
    return v;
}

} // namespace

double numeric_cdf(const std::function<double(double)> &density, double lo, double hi, double x)
{
    if (!(hi > lo))
        fail(ErrorKind::Domain, "numeric_cdf requires hi > lo");
    if (x <= lo)
        return 0.0;
    double v = integrate(density, lo, std::min(x, hi));
    return std::clamp(v, 0.0, 1.0);
}

TabulatedCdf::TabulatedCdf(const std::function<double(double)> &density, double lo, double hi,
                           double a, double b, int points)
    : a_(std::max(a, lo)), b_(std::min(b, hi))
{
    if (points < 2 || !(b_ > a_))
        fail(ErrorKind::Domain, "TabulatedCdf requires a < b inside the support");
    h_ = (b_ - a_) / (points - 1);
    F_.resize(points);
    f_.resize(points);
    below_ = a_ > lo ? integrate(density, lo, a_) : 0.0;
    above_ = b_ < hi ? integrate(density, b_, hi) : 0.0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double acc = below_;
    for (int j = 0; j < points; ++j) {
        double x = a_ + j * h_;
        if (j > 0)
            acc += GK::integrate(density, x - h_, x, 0, 0.0);
        F_[j] = acc;
        // Support endpoints are open; the slope there only shapes the
        // first cell, so zero is harmless.
        bool edge = (j == 0 && x <= lo) || (j == points - 1 && x >= hi);
        f_[j] = edge ? 0.0 : std::max(0.0, density(x));
    }
}

double TabulatedCdf::operator()(double x) const
{
    // Outside [a, b] the error is at most the neglected tail mass.
    if (x <= a_)
        return std::clamp(F_.front(), 0.0, 1.0);
    if (x >= b_)
        return std::clamp(F_.back(), 0.0, 1.0);
    double s = (x - a_) / h_;
    std::size_t j = std::min(static_cast<std::size_t>(s), F_.size() - 2);
    double t = s - static_cast<double>(j);
    double t2 = t * t, t3 = t2 * t;
    double v = (2 * t3 - 3 * t2 + 1) * F_[j] + (t3 - 2 * t2 + t) * h_ * f_[j] +
               (-2 * t3 + 3 * t2) * F_[j + 1] + (t3 - t2) * h_ * f_[j + 1];
    v = std::clamp(v, F_[j], F_[j + 1]);
    return std::clamp(v, 0.0, 1.0);
}

double kolmogorov_survival(double lambda)
{
    if (!(lambda > 0.0))
        return 1.0;
    if (lambda < 0.2)
        return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 == 1 ? term : -term);
        if (term < 1e-17)
            break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)> &cdf)
{
    const std::size_t n = samples.size();
    if (n < 20)
        fail(ErrorKind::Domain, "ks_test requires at least 20 samples");
    std::sort(samples.begin(), samples.end());
    double d = 0.0;
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        double F = cdf(samples[i]);
        d = std::max({d, (i + 1) / nn - F, F - i / nn});
    }
    return {d, kolmogorov_survival(std::sqrt(nn) * d), n};
}

Eigen::MatrixXd empirical_corr(const Eigen::MatrixXd &x)
{
    if (x.cols() < 2 || x.rows() < 30)
        fail(ErrorKind::Domain, "empirical_corr requires >= 2 columns and >= 30 rows");
    Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
    Eigen::MatrixXd cov = c.transpose() * c;
    Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
    if (!(sd.minCoeff() > 0.0))
        fail(ErrorKind::DegenerateMode, "empirical_corr: zero-variance column");
    Eigen::MatrixXd r = sd.cwiseInverse().asDiagonal() * cov * sd.cwiseInverse().asDiagonal();
    r.diagonal().setOnes();
    return 0.5 * (r + r.transpose());
}

ConvergenceResult convergence_study(const CharFnModel &model, const ConvergenceOptions &opt,
                                    std::uint64_t seed)
{
    const auto *ig = std::get_if<IgParams>(&model.params());
    const auto *gs = std::get_if<GaussianParams>(&model.params());
    if (!ig && !gs)
        fail(ErrorKind::Domain, "convergence_study needs a Gaussian or IG model");
    if (opt.levels.empty() || opt.paths < 2 || !(opt.T > 0.0) || !(opt.p >= 1.0))
        fail(ErrorKind::Domain, "convergence_study: invalid options");
    for (int l : opt.levels)
        if (l < 0 || l > opt.reference_level)
            fail(ErrorKind::Domain, "levels must lie in [0, reference_level]");
    if (opt.reference_level > 24)
        fail(ErrorKind::Domain, "reference_level too large");

    const std::size_t nref = std::size_t{1} << opt.reference_level;
    const double dref = opt.T / static_cast<double>(nref);
    const std::size_t L = opt.levels.size();

    std::vector<InversionPlan> plans;
    std::vector<InitialValueRule> rules;
    ConvergenceResult res;
    for (int l : opt.levels) {
        double delta = opt.T / std::ldexp(1.0, l);
        AutoPlan ap = auto_plan(model, delta, opt.plan_request);
        double C = budget_constant_C(ap.plan.bounds, ap.plan.kappa);
        ErrorBudget b = lp_sampling_budget(ap.plan.bounds, ap.plan.D, C, opt.p, delta, opt.T,
                                           c_ell_standin(model, opt.p));
        res.rows.push_back({delta, 0.0, 0.0, b.total, ap.plan.M});
        rules.push_back(make_initial_rule(model, delta));
        plans.push_back(std::move(ap.plan));
    }

    auto exact_cdf = [&](double delta, double x) {
        if (ig)
            return ig_cdf(ig->a * delta, ig->b, x);
        return normal_cdf((x - gs->mean * delta) / std::sqrt(gs->var * delta));
    };

    // err[path * L + level]
    std::vector<double> err(opt.paths * L);
    parallel_for(opt.paths, opt.threads, [&](std::size_t i) {
        RngStream rng(seed, i);
        std::vector<double> fine(nref + 1, 0.0);
        for (std::size_t j = 1; j <= nref; ++j) {
            double inc;
            if (ig) {
                double z = rng.normal();
                inc = ig_from_normal(ig->a * dref, ig->b, z, rng.uniform());
            } else {
                inc = gs->mean * dref + std::sqrt(gs->var * dref) * rng.normal();
            }
            fine[j] = fine[j - 1] + inc;
        }
        for (std::size_t k = 0; k < L; ++k) {
            const std::size_t steps = std::size_t{1} << opt.levels[k];
            const std::size_t per = nref / steps;
            const double delta = res.rows[k].delta;
            double approx = 0.0, acc = 0.0;
            for (std::size_t j = 0; j < steps; ++j) {
                // On [t_j, t_{j+1}) the approximation holds approx.
                for (std::size_t f = j * per; f < (j + 1) * per; ++f)
                    acc += std::pow(std::abs(fine[f] - approx), opt.p);
                double x = fine[(j + 1) * per] - fine[j * per];
                double u = std::clamp(exact_cdf(delta, x), 0.0, 1.0);
                approx += pseudo_inverse(plans[k], rules[k], u);
            }
            err[i * L + k] = acc / static_cast<double>(nref);
        }
    });

    const double n = static_cast<double>(opt.paths);
    for (std::size_t k = 0; k < L; ++k) {
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < opt.paths; ++i) {
            double e = err[i * L + k];
            s += e;
            s2 += e * e;
        }
        double mean = s / n;
        double var = std::max(0.0, (s2 / n - mean * mean) * n / (n - 1.0));
        double se = std::sqrt(var / n);
        double root = std::pow(mean, 1.0 / opt.p);
        res.rows[k].empirical = root;
        res.rows[k].std_error = mean > 0.0 ? se * root / (opt.p * mean) : 0.0;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto &r : res.rows) {
        double lx = std::log(r.delta), ly = std::log(r.empirical);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double m = static_cast<double>(res.rows.size());
    double den = m * sxx - sx * sx;
    res.slope = den > 0.0 ? (m * sxy - sx * sy) / den : std::numeric_limits<double>::quiet_NaN();
    return res;
}

void write_convergence_csv(const ConvergenceResult &r, std::ostream &os)
{
    os.precision(10);
    os << "delta,empirical,stderr,budget\n";
    for (const auto &row : r.rows)
        os << row.delta << ',' << row.empirical << ',' << row.std_error << ',' << row.budget
           << '\n';
}

} // namespace levy
