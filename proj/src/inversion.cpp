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

#include "levyfield/inversion.hpp"

#include "levyfield/errors.hpp"
#include "levyfield/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <ostream>

namespace levy {

namespace {

using cplx = std::complex<double>;
constexpr double two_pi = 2.0 * std::numbers::pi;

double aggregate_v(const InversionBounds &b, double kappa)
{
    return b.mode == TailMode::CdfTail ? v1(kappa, b.eta) : v2(kappa, b.eta);
}

// J-exponent of the eps bound: 1/eta resp. 1/(eta-1).
double j_exponent(const InversionBounds &b)
{
    return b.mode == TailMode::CdfTail ? 1.0 / b.eta : 1.0 / (b.eta - 1.0);
}

void check_bounds(const InversionBounds &b)
{
    if (!(b.eta > 1.0))
        fail(ErrorKind::Domain, "eta must exceed 1");
    if (b.mode == TailMode::DensityTail && !(b.eta > 2.0))
        fail(ErrorKind::Domain, "density-tail bounds need eta > 2");
    if (!(b.R > 0.0))
        fail(ErrorKind::Domain, "R must be positive");
}

double required_M_log(double J, double eps, double theta, double log_B)
{
    double e = (std::log(6.0) + log_B - std::log(eps * std::numbers::pi * theta)) / theta;
    return 2.0 + 2.0 * J * std::exp(e);
}

// The kernel keeps V independent phasor vectors of W lanes each; lane l of
// vector v holds z^k for k = k0 + v * W + l and advances by z^(V W).
constexpr int W = 8;
constexpr int V = 4;
constexpr int lanes = W * V;
constexpr std::int64_t block = lanes * 64;
typedef double vec __attribute__((vector_size(W * sizeof(double))));

// S = sum_{k>=1} q_k z^k and T = sum_{k>=1} k q_k z^k with z = exp(-i omega x).
template <bool WithDerivative>
void phasor_sums(const InversionPlan &plan, double x, double &s_re, double &t_im)
{
    const double omega = two_pi / plan.J;
    const double th = omega * x;
    const double *qr = plan.q_re.data();
    const double *qi = plan.q_im.data();
    const std::int64_t K = static_cast<std::int64_t>(plan.q_re.size());
    vec acc_s[V] = {};
    vec acc_t[V] = {};
    const double wr_s = std::cos(lanes * th), wi_s = -std::sin(lanes * th);
    const vec wr = wr_s - vec{}, wi = wi_s - vec{};
    const vec step = static_cast<double>(lanes) - vec{};
    std::int64_t k0 = 1;
    while (k0 + lanes <= K) {
        const std::int64_t kend = k0 + std::min<std::int64_t>(block, ((K - k0) / lanes) * lanes);
        vec pr[V], pim[V], kd[V];
        for (int v = 0; v < V; ++v)
            for (int l = 0; l < W; ++l) {
                double k = static_cast<double>(k0 + v * W + l);
                pr[v][l] = std::cos(th * k);
                pim[v][l] = -std::sin(th * k);
                kd[v][l] = k;
            }
        for (std::int64_t k = k0; k < kend; k += lanes) {
            for (int v = 0; v < V; ++v) {
                vec a, b;
                std::memcpy(&a, qr + k + v * W, sizeof(vec));
                std::memcpy(&b, qi + k + v * W, sizeof(vec));
                acc_s[v] += a * pr[v] - b * pim[v];
                if constexpr (WithDerivative) {
                    acc_t[v] += kd[v] * (a * pim[v] + b * pr[v]);
                    kd[v] += step;
                }
                const vec npr = pr[v] * wr - pim[v] * wi;
                pim[v] = pr[v] * wi + pim[v] * wr;
                pr[v] = npr;
            }
        }
        k0 = kend;
    }
    s_re = 0.0;
    t_im = 0.0;
    for (int v = 0; v < V; ++v)
        for (int l = 0; l < W; ++l) {
            s_re += acc_s[v][l];
            t_im += acc_t[v][l];
        }
    for (std::int64_t k = k0; k < K; ++k) {
        const double a = th * static_cast<double>(k);
        const double c = std::cos(a), sn = std::sin(a);
        s_re += qr[k] * c + qi[k] * sn;
        if constexpr (WithDerivative)
            t_im += static_cast<double>(k) * (qi[k] * c - qr[k] * sn);
    }
}
// F~ at NX points in one sweep over q, so the coefficients stream from memory
// once per group instead of once per point.
constexpr int NX = 4;
constexpr int VB = 2;
constexpr int lanes_b = W * VB;

void phasor_sums_multi(const InversionPlan &plan, const double *xs, double *s_out)
{
    const double omega = two_pi / plan.J;
    const double *qr = plan.q_re.data();
    const double *qi = plan.q_im.data();
    const std::int64_t K = static_cast<std::int64_t>(plan.q_re.size());
    double th[NX];
    vec wr[NX], wi[NX];
    vec acc[NX][VB] = {};
    for (int i = 0; i < NX; ++i) {
        th[i] = omega * xs[i];
        wr[i] = std::cos(lanes_b * th[i]) - vec{};
        wi[i] = -std::sin(lanes_b * th[i]) - vec{};
    }
    std::int64_t k0 = 1;
    while (k0 + lanes_b <= K) {
        const std::int64_t kend =
            k0 + std::min<std::int64_t>(block, ((K - k0) / lanes_b) * lanes_b);
        vec pr[NX][VB], pim[NX][VB];
        for (int i = 0; i < NX; ++i)
            for (int v = 0; v < VB; ++v)
                for (int l = 0; l < W; ++l) {
                    double a = th[i] * static_cast<double>(k0 + v * W + l);
                    pr[i][v][l] = std::cos(a);
                    pim[i][v][l] = -std::sin(a);
                }
        for (std::int64_t k = k0; k < kend; k += lanes_b) {
            for (int v = 0; v < VB; ++v) {
                vec a, b;
                std::memcpy(&a, qr + k + v * W, sizeof(vec));
                std::memcpy(&b, qi + k + v * W, sizeof(vec));
                for (int i = 0; i < NX; ++i) {
                    acc[i][v] += a * pr[i][v] - b * pim[i][v];
                    const vec npr = pr[i][v] * wr[i] - pim[i][v] * wi[i];
                    pim[i][v] = pr[i][v] * wi[i] + pim[i][v] * wr[i];
                    pr[i][v] = npr;
                }
            }
        }
        k0 = kend;
    }
    for (int i = 0; i < NX; ++i) {
        double s = 0.0;
        for (int v = 0; v < VB; ++v)
            for (int l = 0; l < W; ++l)
                s += acc[i][v][l];
        for (std::int64_t k = k0; k < K; ++k) {
            const double a = th[i] * static_cast<double>(k);
            s += qr[k] * std::cos(a) + qi[k] * std::sin(a);
        }
        s_out[i] = s;
    }
}

} // namespace

double choose_kappa(const InversionBounds &bounds)
{
    check_bounds(bounds);
    const double eta = bounds.eta;
    for (int i = 666; i >= 1; --i) {
        double kappa = i * 1e-3;
        bool ok;
        if (bounds.mode == TailMode::CdfTail)
            ok = std::pow(kappa, eta) * v1(kappa, eta) <= std::pow(2.0, eta + 1.0);
        else
            ok = std::pow(kappa, eta - 1.0) * v2(kappa, eta) <= std::pow(2.0, eta) / (eta - 1.0);
        if (ok)
            return kappa;
    }
    fail(ErrorKind::NumericFailure, "no admissible kappa on the grid");
}

double default_eps(const InversionBounds &bounds, double kappa, double D)
{
    check_bounds(bounds);
    if (!(D > 0.0))
        fail(ErrorKind::Domain, "D must be positive");
    double v = aggregate_v(bounds, kappa);
    if (bounds.mode == TailMode::CdfTail)
        return 1.5 * bounds.R * v * std::pow(kappa, bounds.eta) * std::pow(D, -bounds.eta);
    return 1.5 * bounds.R * v * std::pow(kappa, bounds.eta - 1.0) * std::pow(D, 1.0 - bounds.eta);
}

std::pair<double, double> j_lower_bounds(const InversionBounds &bounds, double kappa, double D,
                                         double eps)
{
    check_bounds(bounds);
    double v = aggregate_v(bounds, kappa);
    return {D / kappa, std::pow(3.0 * bounds.R * v / (2.0 * eps), j_exponent(bounds))};
}

double required_M(double J, double eps, double theta, double B)
{
    return required_M_log(J, eps, theta, std::log(B));
}

InversionPlan build_plan(const CharFnModel &model, double delta, const InversionBounds &bounds,
                         double D, double eps, const PlanOptions &opt)
{
    check_bounds(bounds);
    if (!(delta > 0.0) || !(D > 0.0) || !(eps > 0.0))
        fail(ErrorKind::Domain, "delta, D and eps must be positive");
    if (!(bounds.theta > 0.0) || !(bounds.B > 0.0))
        fail(ErrorKind::Domain, "theta and B must be positive");

    InversionPlan plan;
    plan.model = model;
    plan.delta = delta;
    plan.bounds = bounds;
    plan.D = D;
    plan.eps = eps;
    plan.kappa = choose_kappa(bounds);
    auto [jd, je] = j_lower_bounds(bounds, plan.kappa, D, eps);
    plan.J = std::max(jd, je);

    double m = required_M_log(plan.J, eps, bounds.theta, std::log(bounds.B));
    if (!(m <= opt.max_M))
        throw PlanTooLarge(m, opt.max_M);
    auto M = static_cast<std::int64_t>(std::ceil(m));
    if (M % 2)
        ++M;
    plan.M = std::max<std::int64_t>(M, 4);

    const std::int64_t K = plan.M / 2;
    plan.q.assign(K, cplx(0.0, 0.0));
    plan.q[0] = 0.5;
    for (std::int64_t k = 1; k < K; ++k) {
        double kd = static_cast<double>(k);
        double w = (1.0 - std::cos(two_pi * plan.kappa * kd)) / (two_pi * kd);
        // With phi(u) = E exp(iuX), the reflected-frequency form of the
        // coefficient is the complex conjugate of i w phi(u).
        cplx phi = eval_power(model, two_pi * kd / plan.J, delta);
        plan.q[k] = cplx(0.0, w) * phi;
    }
    plan.q_re.resize(K);
    plan.q_im.resize(K);
    for (std::int64_t k = 0; k < K; ++k) {
        plan.q_re[k] = plan.q[k].real();
        plan.q_im[k] = plan.q[k].imag();
    }

    const int n = std::max(opt.table_points, 2);
    plan.grid_x.resize(n);
    for (int i = 0; i < n; ++i)
        plan.grid_x[i] = -0.5 * D + D * i / (n - 1);
    plan.grid_f = eval_cdf_batch(plan, plan.grid_x);
    plan.fmin = *std::min_element(plan.grid_f.begin(), plan.grid_f.end());
    plan.fmax = *std::max_element(plan.grid_f.begin(), plan.grid_f.end());
    return plan;
}

double eval_cdf(const InversionPlan &plan, double x)
{
    double s, t;
    phasor_sums<false>(plan, x, s, t);
    return 0.5 + 2.0 * s;
}

double eval_cdf_derivative(const InversionPlan &plan, double x)
{
    return eval_cdf_and_derivative(plan, x).second;
}

std::pair<double, double> eval_cdf_and_derivative(const InversionPlan &plan, double x)
{
    double s, t;
    phasor_sums<true>(plan, x, s, t);
    return {0.5 + 2.0 * s, 2.0 * (two_pi / plan.J) * t};
}

std::vector<double> eval_cdf_batch(const InversionPlan &plan, const std::vector<double> &xs)
{
    std::vector<double> out(xs.size());
    std::size_t i = 0;
    for (; i + NX <= xs.size(); i += NX) {
        double s[NX];
        phasor_sums_multi(plan, xs.data() + i, s);
        for (int j = 0; j < NX; ++j)
            out[i + j] = 0.5 + 2.0 * s[j];
    }
    for (; i < xs.size(); ++i)
        out[i] = eval_cdf(plan, xs[i]);
    return out;
}

ThetaChoice select_theta(const std::vector<ThetaB> &scan, double J, double eps)
{
    ThetaChoice best{{}, std::numeric_limits<double>::infinity()};
    bool found = false;
    for (const auto &tb : scan) {
        if (!tb.feasible)
            continue;
        double m = required_M_log(J, eps, tb.theta, tb.log_B);
        if (!found || m < best.M) {
            best = {tb, m};
            found = true;
        }
    }
    if (!found)
        fail(ErrorKind::NumericFailure, "no feasible theta in the scan");
    return best;
}

AutoPlan auto_plan(const CharFnModel &model, double delta, const AutoPlanRequest &req,
                   const PlanOptions &opt)
{
    InversionBounds b;
    b.mode = req.mode;
    b.eta = req.eta;
    if (req.R > 0.0)
        b.R = req.R;
    else if (req.mode == TailMode::CdfTail)
        b.R = tail_bound_R(model, delta, req.eta);
    else
        fail(ErrorKind::Domain, "density-tail bounds need an explicit R");
    double D = req.D > 0.0 ? req.D : tuned_D(delta, req.eta, req.p);
    double kappa = choose_kappa(b);
    double eps = req.eps > 0.0 ? req.eps : default_eps(b, kappa, D);
    auto [jd, je] = j_lower_bounds(b, kappa, D, eps);

    AutoPlan out;
    out.J_from_D = jd;
    out.J_from_eps = je;
    out.scan = estimate_theta_B(model, delta, req.theta_grid, req.scan);
    out.choice = select_theta(out.scan, std::max(jd, je), eps);
    b.theta = out.choice.tb.theta;
    b.B = out.choice.tb.B;
    out.plan = build_plan(model, delta, b, D, eps, opt);
    return out;
}

double budget_constant_C(const InversionBounds &bounds, double kappa)
{
    return kappa * std::pow(1.5 * bounds.R * aggregate_v(bounds, kappa), j_exponent(bounds));
}

double c_ell_standin(const CharFnModel &model, double p)
{
    if (!(p >= 1.0))
        fail(ErrorKind::InfeasibleOrder, "p must be at least 1");
    if (p == 1.0 && model.is_subordinator())
        return moment_at_zero(model, 1.0, 1);
    // Lyapunov: E|X|^p <= (E X^{2k})^{p/2k} for the smallest 2k >= p.
    int k2 = 2 * static_cast<int>(std::ceil(p / 2.0));
    double m = moment_at_zero(model, 1.0, k2);
    return std::pow(m, p / k2);
}

ErrorBudget lp_sampling_budget(const InversionBounds &bounds, double D, double C, double p,
                               double delta, double T, double c_ell)
{
    check_bounds(bounds);
    if (!(p >= 1.0))
        fail(ErrorKind::InfeasibleOrder, "p must be at least 1");
    if (bounds.mode == TailMode::CdfTail && !(p < bounds.eta))
        fail(ErrorKind::InfeasibleOrder, "p must be below eta");
    if (bounds.mode == TailMode::DensityTail && !(p < bounds.eta - 1.0))
        fail(ErrorKind::InfeasibleOrder, "p must be below eta - 1");
    if (!(D > 0.0) || !(C > 0.0) || !(delta > 0.0) || !(T > 0.0) || !(c_ell >= 0.0))
        fail(ErrorKind::Domain, "budget arguments must be positive");

    const double R = bounds.R, eta = bounds.eta;
    double tail, gap;
    if (bounds.mode == TailMode::CdfTail) {
        tail = 2.0 * R * p * hurwitz_zeta(eta + 1.0 - p, D / 2.0) +
               2.0 * R * std::pow(D / 2.0, p - eta);
        gap = std::pow(C, eta) * std::pow(D, p - eta);
    } else {
        tail = std::pow(2.0, p + 1.0) * R * hurwitz_zeta(eta - p, D / 2.0);
        gap = std::pow(C, eta - 1.0) * std::pow(D, p - eta + 1.0);
    }
    ErrorBudget e;
    e.p = p;
    const double steps = T / delta;
    e.inversion_term = steps * std::pow(tail + gap, 1.0 / p);
    e.cdf_gap_term = steps * std::pow(gap, 1.0 / p);
    e.tail_term = e.inversion_term - e.cdf_gap_term;
    e.discretization_term =
        std::pow(c_ell, 1.0 / p) * std::pow(delta / T, 1.0 / p) / (std::pow(2.0, 1.0 / p) - 1.0);
    e.total = e.tail_term + e.cdf_gap_term + e.discretization_term;
    e.e_gig = std::pow(e.total, p);
    e.e_gig_inversion_only = std::pow(e.inversion_term, p);
    return e;
}

double tuned_D(double delta, double eta, double p)
{
    if (!(eta > p))
        fail(ErrorKind::InfeasibleOrder, "tuned_D requires eta > p");
    if (!(delta > 0.0))
        fail(ErrorKind::Domain, "delta must be positive");
    return std::pow(delta, p / (p - eta));
}

void write_coefficients_csv(const InversionPlan &plan, std::ostream &os)
{
    os << "k,re,im\n";
    os.precision(17);
    for (std::size_t k = 0; k < plan.q.size(); ++k)
        os << k << ',' << plan.q[k].real() << ',' << plan.q[k].imag() << '\n';
}

} // namespace levy
