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

#include "levyfield/klfield.hpp"

#include "levyfield/errors.hpp"
#include "levyfield/sampler.hpp"
#include "levyfield/specfun.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace levy {

MaternConfig make_matern(double v, double r, double chi)
{
    if (!(v > 0.0) || !(r > 0.0) || !(chi > 0.0))
        fail(ErrorKind::Domain, "Matern requires v, r, chi > 0");
    return {v, r, chi};
}

double matern_kernel(double x, double y, const MaternConfig &cfg)
{
    const double d = std::abs(x - y);
    if (d == 0.0)
        return 1.0;
    const double s = std::sqrt(2.0 * cfg.chi) * d / cfg.r;
    // Half-integer orders have elementary forms.
    if (cfg.chi == 0.5)
        return std::exp(-s);
    if (cfg.chi == 1.5)
        return (1.0 + s) * std::exp(-s);
    if (cfg.chi == 2.5)
        return (1.0 + s + s * s / 3.0) * std::exp(-s);
    if (s > 700.0)
        return 0.0;
    double lk = (1.0 - cfg.chi) * std::log(2.0) - log_gamma(cfg.chi) + cfg.chi * std::log(s) +
                log_bessel_k(cfg.chi, s);
    return std::min(1.0, std::exp(lk));
}

KlBasis nystrom_eigs(const MaternConfig &cfg, double x_lo, double x_hi, int m)
{
    if (m < 2 || !(x_hi > x_lo))
        fail(ErrorKind::Domain, "nystrom_eigs requires m >= 2 and x_hi > x_lo");
    KlBasis b;
    b.cfg = cfg;
    b.x_lo = x_lo;
    b.x_hi = x_hi;
    b.trace = cfg.v * (x_hi - x_lo);
    const double h = (x_hi - x_lo) / m;
    b.nodes.resize(m);
    b.weights = Eigen::VectorXd::Constant(m, h);
    for (int j = 0; j < m; ++j)
        b.nodes[j] = x_lo + (j + 0.5) * h;
    // Uniform weights, so W^{1/2} K W^{1/2} = h K.
    Eigen::MatrixXd K(m, m);
    for (int i = 0; i < m; ++i) {
        K(i, i) = cfg.v * h;
        for (int j = i + 1; j < m; ++j)
            K(i, j) = K(j, i) = cfg.v * h * matern_kernel(b.nodes[i], b.nodes[j], cfg);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
    if (es.info() != Eigen::Success)
        fail(ErrorKind::NumericFailure, "Nystrom eigen-solver failed");
    // Eigen returns ascending order.
    b.rho.resize(m);
    b.evecs.resize(m, m);
    const double inv_sqrt_h = 1.0 / std::sqrt(h);
    for (int i = 0; i < m; ++i) {
        b.rho[i] = std::max(0.0, es.eigenvalues()[m - 1 - i]);
        b.evecs.col(i) = es.eigenvectors().col(m - 1 - i) * inv_sqrt_h;
    }
    return b;
}

namespace {

Eigen::VectorXd kernel_row(const KlBasis &b, double x)
{
    Eigen::VectorXd k(b.nodes.size());
    for (Eigen::Index j = 0; j < k.size(); ++j)
        k[j] = b.cfg.v * b.weights[j] * matern_kernel(x, b.nodes[j], b.cfg);
    return k;
}

} // namespace

double nystrom_interp(const KlBasis &basis, int i, double x)
{
    if (i < 0 || i >= basis.rho.size())
        fail(ErrorKind::Domain, "mode index out of range");
    if (!(basis.rho[i] > 0.0))
        fail(ErrorKind::DegenerateMode, "eigenvalue is zero");
    return kernel_row(basis, x).dot(basis.evecs.col(i)) / basis.rho[i];
}

Eigen::MatrixXd phi_matrix(const KlBasis &basis, int N, const std::vector<double> &x)
{
    if (N < 1 || N > basis.rho.size())
        fail(ErrorKind::Domain, "phi_matrix: N out of range");
    for (int i = 0; i < N; ++i)
        if (!(basis.rho[i] > 0.0))
            fail(ErrorKind::DegenerateMode, "eigenvalue is zero");
    Eigen::MatrixXd out(N, x.size());
    for (std::size_t c = 0; c < x.size(); ++c) {
        Eigen::VectorXd k = kernel_row(basis, x[c]);
        for (int i = 0; i < N; ++i)
            out(i, c) = k.dot(basis.evecs.col(i)) / std::sqrt(basis.rho[i]);
    }
    return out;
}

CEll c_ell_constants(double e1, double e2, const GhNParams &params, double delta)
{
    if (!(e1 >= 0.0) || !(e2 >= 0.0) || !(delta > 0.0))
        fail(ErrorKind::Domain, "c_ell_constants requires e1, e2 >= 0, delta > 0");
    CEll out;
    Eigen::VectorXd gb = params.gamma * params.beta;
    for (int i = 0; i < params.n; ++i) {
        double row = params.gamma.row(i).norm();
        double c = (e2 * gb[i] * gb[i] + e1 * row) / delta;
        out.per_mode.push_back(c);
        out.c_ell = std::max(out.c_ell, c);
    }
    return out;
}

CEll c_ell_normalized(double e1, double e2, const GhNParams &params, double delta)
{
    CEll raw = c_ell_constants(e1, e2, params, delta);
    Eigen::VectorXd var = gh_cov(params).diagonal();
    CEll out;
    for (int i = 0; i < params.n; ++i) {
        double c = raw.per_mode[i] / var[i];
        out.per_mode.push_back(c);
        out.c_ell = std::max(out.c_ell, c);
    }
    return out;
}

Truncation truncation_select(const KlBasis &basis, double c_ell, double delta, double T)
{
    if (!(c_ell > 0.0) || !(delta > 0.0) || !(T > 0.0))
        fail(ErrorKind::Domain, "truncation_select requires c_ell, delta, T > 0");
    double partial = 0.0;
    const int m = static_cast<int>(basis.rho.size());
    for (int N = 1; N <= m; ++N) {
        partial += basis.rho[N - 1];
        double tail = std::max(0.0, basis.trace - partial);
        if (T * tail <= c_ell * delta * partial)
            return {N, N == m};
    }
    return {m, true};
}

double field_error_bound(const KlBasis &basis, int N, double c_ell, double delta, double T)
{
    if (N < 0 || N > basis.rho.size())
        fail(ErrorKind::Domain, "field_error_bound: N out of range");
    double partial = basis.rho.head(N).sum();
    double tail = std::max(0.0, basis.trace - partial);
    return std::sqrt(T * tail) + std::sqrt(std::max(0.0, c_ell) * delta * partial);
}

Eigen::MatrixXd sample_normalized_ghn(const GhNParams &params, const InversionPlan &gig_plan,
                                      int n, double T, RngStream &stream, std::size_t *rectified)
{
    if (n < 0 || n > 30 || !(T > 0.0))
        fail(ErrorKind::Domain, "requires 0 <= n <= 30, T > 0");
    const std::size_t steps = std::size_t{1} << n;
    PathSkeleton g;
    g.delta = T / static_cast<double>(steps);
    if (std::abs(g.delta - gig_plan.delta) > 1e-12 * g.delta)
        fail(ErrorKind::Domain, "GIG plan delta does not match T / 2^n");
    auto rule = make_initial_rule(gig_plan.model, gig_plan.delta);
    g.t.resize(steps + 1);
    g.values.resize(steps + 1);
    g.t[0] = 0.0;
    g.values[0] = 0.0;
    for (std::size_t j = 1; j <= steps; ++j) {
        g.t[j] = static_cast<double>(j) * g.delta;
        g.values[j] = g.values[j - 1] + pseudo_inverse(gig_plan, rule, stream.uniform());
    }
    std::size_t fixed = rectify_increasing(g);
    if (rectified)
        *rectified = fixed;
    Eigen::MatrixXd inc = subordinate(params, g, stream);
    Eigen::VectorXd inv_sd = gh_cov(params).diagonal().cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd cum(steps + 1, params.n);
    cum.row(0).setZero();
    for (std::size_t j = 0; j < steps; ++j)
        cum.row(j + 1) = cum.row(j) + inc.row(j).cwiseProduct(inv_sd.transpose());
    return cum;
}

FieldSample assemble_field(const Eigen::MatrixXd &phi, const std::vector<double> &x_grid,
                           const GhNParams &params, const InversionPlan &gig_plan, int n,
                           double T, RngStream stream)
{
    if (phi.rows() != params.n || phi.cols() != static_cast<Eigen::Index>(x_grid.size()))
        fail(ErrorKind::Domain, "assemble_field: phi shape does not match N and x grid");
    FieldSample f;
    f.seed = stream.master_seed();
    f.stream_index = stream.stream_index();
    Eigen::MatrixXd cum = sample_normalized_ghn(params, gig_plan, n, T, stream, &f.rectified);
    f.x = x_grid;
    f.N = params.n;
    f.delta = gig_plan.delta;
    f.params = params;
    f.t.resize(cum.rows());
    for (Eigen::Index j = 0; j < cum.rows(); ++j)
        f.t[j] = static_cast<double>(j) * f.delta;
    f.values = phi.transpose() * cum.transpose();
    return f;
}

FieldSample assemble_field(const KlBasis &basis, int N, const GhNParams &params,
                           const InversionPlan &gig_plan, int n, double T,
                           const std::vector<double> &x_grid, RngStream stream)
{
    if (params.n != N)
        fail(ErrorKind::Domain, "assemble_field: params dimension must equal N");
    return assemble_field(phi_matrix(basis, N, x_grid), x_grid, params, gig_plan, n, T, stream);
}

void write_field_csv(const FieldSample &f, std::ostream &os)
{
    os.precision(17);
    os << "x";
    for (double t : f.t)
        os << ',' << t;
    os << '\n';
    for (std::size_t r = 0; r < f.x.size(); ++r) {
        os << f.x[r];
        for (Eigen::Index c = 0; c < f.values.cols(); ++c)
            os << ',' << f.values(static_cast<Eigen::Index>(r), c);
        os << '\n';
    }
}

void write_field_meta_json(const FieldSample &f, std::ostream &os)
{
    nlohmann::json j;
    j["seed"] = f.seed;
    j["stream_index"] = f.stream_index;
    j["N"] = f.N;
    j["delta"] = f.delta;
    j["rectified_increments"] = f.rectified;
    const auto &p = f.params;
    j["params"] = {{"lambda", p.lambda},
                   {"alpha", p.alpha},
                   {"delta", p.delta},
                   {"beta", std::vector<double>(p.beta.data(), p.beta.data() + p.beta.size())},
                   {"mu", std::vector<double>(p.mu.data(), p.mu.data() + p.mu.size())}};
    std::vector<double> g(p.gamma.size());
    for (int r = 0; r < p.n; ++r)
        for (int c = 0; c < p.n; ++c)
            g[r * p.n + c] = p.gamma(r, c);
    j["params"]["gamma"] = g;
    os << j.dump(2) << '\n';
}

} // namespace levy
