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

#include "levyfield/charfn.hpp"

#include "levyfield/errors.hpp"
#include "levyfield/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace levy {

namespace {

using cplx = std::complex<double>;
constexpr double two_pi = 2.0 * std::numbers::pi;

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

// log phi(u) at delta = 1 for u >= 0.
cplx log_phi_pos(const CharFnModel::Variant &v, double u)
{
    return std::visit(
        overloaded{
            [u](const GigParams &g) {
                cplx w(1.0, -2.0 * u / (g.b * g.b));
                double ab = g.a * g.b;
                return -0.5 * g.p * std::log(w) + log_bessel_k(g.p, ab * std::sqrt(w)) -
                       log_bessel_k(g.p, ab);
            },
            [u](const Gh1Params &g) {
                double gam2 = g.alpha * g.alpha - g.beta * g.beta;
                cplx bi(g.beta, u);
                cplx s = g.alpha * g.alpha - bi * bi;
                return cplx(0.0, u * g.mu) + 0.5 * g.lambda * (std::log(gam2) - std::log(s)) +
                       log_bessel_k(g.lambda, g.delta * std::sqrt(s)) -
                       log_bessel_k(g.lambda, g.delta * std::sqrt(gam2));
            },
            [u](const IgParams &g) {
                cplx w(1.0, -2.0 * u / (g.b * g.b));
                return -g.a * g.b * (std::sqrt(w) - 1.0);
            },
            [u](const GaussianParams &g) { return cplx(-0.5 * g.var * u * u, g.mean * u); },
            [u](const StudentT3Params &) {
                double s = std::sqrt(3.0) * u;
                return cplx(-s + std::log1p(s), 0.0);
            },
            [u](const CauchyParams &g) { return cplx(-g.scale * u, 0.0); },
        },
        v);
}

double binom(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

double double_factorial(int n)
{
    double r = 1.0;
    for (int i = n; i > 1; i -= 2)
        r *= i;
    return r;
}

// E[W^m] for W ~ GIG(a, b, p), m = 0..k.
std::vector<double> gig_raw_moments(double a, double b, double p, int k)
{
    std::vector<double> m(k + 1, 1.0);
    double ab = a * b;
    double l0 = log_bessel_k(p, ab);
    for (int j = 1; j <= k; ++j)
        m[j] = std::exp(j * std::log(a / b) + log_bessel_k(p + j, ab) - l0);
    return m;
}

std::vector<double> raw_to_cumulants(const std::vector<double> &m)
{
    int n = static_cast<int>(m.size()) - 1;
    std::vector<double> c(n + 1, 0.0);
    for (int j = 1; j <= n; ++j) {
        double s = m[j];
        for (int i = 1; i < j; ++i)
            s -= binom(j - 1, i - 1) * c[i] * m[j - i];
        c[j] = s;
    }
    return c;
}

std::vector<double> cumulants_to_raw(const std::vector<double> &c)
{
    int n = static_cast<int>(c.size()) - 1;
    std::vector<double> m(n + 1, 0.0);
    m[0] = 1.0;
    for (int j = 1; j <= n; ++j) {
        double s = 0.0;
        for (int i = 1; i <= j; ++i)
            s += binom(j - 1, i - 1) * c[i] * m[j - i];
        m[j] = s;
    }
    return m;
}

// Cumulants of the time-1 law.
std::vector<double> unit_cumulants(const CharFnModel::Variant &v, int k)
{
    return std::visit(
        overloaded{
            [k](const GigParams &g) { return raw_to_cumulants(gig_raw_moments(g.a, g.b, g.p, k)); },
            [k](const Gh1Params &g) {
                double gam = std::sqrt(g.alpha * g.alpha - g.beta * g.beta);
                auto w = gig_raw_moments(g.delta, gam, g.lambda, k);
                // Y = beta W + sqrt(W) Z; E[Y^j] = sum_{i even} C(j,i) beta^{j-i} E[W^{j-i/2}] (i-1)!!
                std::vector<double> y(k + 1, 0.0);
                for (int j = 0; j <= k; ++j)
                    for (int i = 0; i <= j; i += 2)
                        y[j] += binom(j, i) * std::pow(g.beta, j - i) * w[j - i / 2] *
                                double_factorial(i - 1);
                auto c = raw_to_cumulants(y);
                if (k >= 1)
                    c[1] += g.mu;
                return c;
            },
            [k](const IgParams &g) {
                double mu = g.a / g.b, lam = g.a * g.a;
                std::vector<double> c(k + 1, 0.0);
                for (int n = 1; n <= k; ++n)
                    c[n] = double_factorial(2 * n - 3) * std::pow(mu, 2 * n - 1) /
                           std::pow(lam, n - 1);
                return c;
            },
            [k](const GaussianParams &g) {
                std::vector<double> c(k + 1, 0.0);
                if (k >= 1)
                    c[1] = g.mean;
                if (k >= 2)
                    c[2] = g.var;
                return c;
            },
            [k](const StudentT3Params &) {
                std::vector<double> c(k + 1, 0.0);
                if (k >= 2)
                    c[2] = 3.0;
                return c;
            },
            [k](const CauchyParams &) { return std::vector<double>(k + 1, 0.0); },
        },
        v);
}

} // namespace

GigParams make_gig(double a, double b, double p)
{
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(p))
        fail(ErrorKind::Domain, "GIG requires a > 0, b > 0");
    return {a, b, p};
}

Gh1Params make_gh1(double lambda, double alpha, double beta, double delta, double mu)
{
    if (!(alpha > 0.0) || !(delta > 0.0) || !(alpha * alpha > beta * beta) ||
        !std::isfinite(lambda) || !std::isfinite(mu))
        fail(ErrorKind::Domain, "GH requires alpha > 0, delta > 0, alpha^2 > beta^2");
    return {lambda, alpha, beta, delta, mu};
}

CharFnModel CharFnModel::gig(double a, double b, double p) { return CharFnModel(make_gig(a, b, p)); }

CharFnModel CharFnModel::gh1(double lambda, double alpha, double beta, double delta, double mu)
{
    return CharFnModel(make_gh1(lambda, alpha, beta, delta, mu));
}

CharFnModel CharFnModel::ig(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0))
        fail(ErrorKind::Domain, "IG requires a > 0, b > 0");
    return CharFnModel(IgParams{a, b});
}

CharFnModel CharFnModel::gaussian(double mean, double var)
{
    if (!(var > 0.0) || !std::isfinite(mean))
        fail(ErrorKind::Domain, "Gaussian requires var > 0");
    return CharFnModel(GaussianParams{mean, var});
}

CharFnModel CharFnModel::student_t3() { return CharFnModel(StudentT3Params{}); }

CharFnModel CharFnModel::cauchy(double scale)
{
    if (!(scale > 0.0))
        fail(ErrorKind::Domain, "Cauchy requires scale > 0");
    return CharFnModel(CauchyParams{scale});
}

std::string CharFnModel::name() const
{
    static const char *names[] = {"GIG", "GH1", "IG", "Gaussian", "StudentT3", "Cauchy"};
    return names[v_.index()];
}

bool CharFnModel::is_subordinator() const
{
    return std::holds_alternative<GigParams>(v_) || std::holds_alternative<IgParams>(v_);
}

std::complex<double> log_eval_power(const CharFnModel &model, double u, double delta)
{
    if (!(delta > 0.0))
        fail(ErrorKind::Domain, "delta must be positive");
    if (u == 0.0)
        return 0.0;
    cplx l = delta * log_phi_pos(model.params(), std::abs(u));
    return u < 0.0 ? std::conj(l) : l;
}

std::complex<double> eval_power(const CharFnModel &model, double u, double delta)
{
    return std::exp(log_eval_power(model, u, delta));
}

int max_moment_order(const CharFnModel &model)
{
    if (std::holds_alternative<StudentT3Params>(model.params()))
        return 2;
    if (std::holds_alternative<CauchyParams>(model.params()))
        return 0;
    return -1;
}

std::vector<double> cumulants(const CharFnModel &model, double delta, int k)
{
    if (!(delta > 0.0))
        fail(ErrorKind::Domain, "delta must be positive");
    int top = max_moment_order(model);
    if (k < 1 || (top >= 0 && k > top))
        fail(ErrorKind::UnsupportedMoment,
             model.name() + " has no moment of order " + std::to_string(k));
    auto c = unit_cumulants(model.params(), k);
    for (double &x : c)
        x *= delta;
    return c;
}

double moment_at_zero(const CharFnModel &model, double delta, int k)
{
    return cumulants_to_raw(cumulants(model, delta, k))[k];
}

double tail_bound_R(const CharFnModel &model, double delta, int eta)
{
    if (eta < 2 || eta % 2 != 0)
        fail(ErrorKind::Domain, "eta must be an even positive integer");
    double r = moment_at_zero(model, delta, eta);
    if (!(r > 0.0))
        fail(ErrorKind::NumericFailure, "non-positive even moment");
    return r;
}

std::vector<double> default_theta_grid()
{
    std::vector<double> g;
    for (int i = 0; i <= 198; ++i)
        g.push_back(1.0 + 0.5 * i);
    return g;
}

std::vector<ThetaB> estimate_theta_B(const CharFnModel &model, double delta,
                                     const std::vector<double> &theta_grid,
                                     const ThetaScanOptions &opt)
{
    if (theta_grid.empty())
        fail(ErrorKind::Domain, "theta grid is empty");
    if (!(opt.u_min > 0.0) || !(opt.u_max > opt.u_min) || opt.points < 3)
        fail(ErrorKind::Domain, "bad scan range");
    const int n = opt.points;
    const double ls0 = std::log(opt.u_min), ls1 = std::log(opt.u_max);
    const double dls = (ls1 - ls0) / (n - 1);
    std::vector<double> la(n);
    for (int i = 0; i < n; ++i)
        la[i] = log_eval_power(model, std::exp(ls0 + i * dls), delta).real();

    auto la_at = [&](double ls) { return log_eval_power(model, std::exp(ls), delta).real(); };
    const double log2pi = std::log(two_pi);

    std::vector<ThetaB> out;
    out.reserve(theta_grid.size());
    for (double th : theta_grid) {
        if (!(th > 0.0))
            fail(ErrorKind::Domain, "theta must be positive");
        int best = 0;
        double gbest = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            double g = th * (ls0 + i * dls) + la[i];
            if (g > gbest) {
                gbest = g;
                best = i;
            }
        }
        ThetaB r{th, 0.0, 0.0, std::exp(ls0 + best * dls), best != n - 1};
        // Golden-section refinement on the bracketing cells.
        double lo = ls0 + std::max(best - 1, 0) * dls;
        double hi = ls0 + std::min(best + 1, n - 1) * dls;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
        double fc = th * c + la_at(c), fd = th * d + la_at(d);
        for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
            if (fc > fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - gr * (hi - lo);
                fc = th * c + la_at(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + gr * (hi - lo);
                fd = th * d + la_at(d);
            }
        }
        double gref = std::max(fc, fd);
        if (gref > gbest) {
            gbest = gref;
            r.u_star = std::exp(fc > fd ? c : d);
        }
        // Below u_min, |phi| <= 1 bounds the product by (u_min / 2pi)^theta.
        if (best == 0)
            gbest = std::max(gbest, th * ls0);
        r.log_B = gbest - th * log2pi;
        r.B = std::exp(r.log_B);
        out.push_back(r);
    }
    return out;
}

} // namespace levy
