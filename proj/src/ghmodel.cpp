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

#include "levyfield/ghmodel.hpp"

#include "levyfield/errors.hpp"
#include "levyfield/specfun.hpp"

#include <cmath>
#include <numbers>

namespace levy {

namespace {

constexpr double log_2pi = 1.8378770664093454836;

void check_square(const Eigen::MatrixXd &g, int n)
{
    if (g.rows() != n || g.cols() != n)
        fail(ErrorKind::Domain, "gamma must be n x n");
}

// E W and Var W for W ~ GIG(a, b, p), via Bessel ratios.
std::pair<double, double> gig_mean_var(double a, double b, double p)
{
    double x = a * b;
    double l0 = log_bessel_k(p, x);
    double r1 = std::exp(log_bessel_k(p + 1.0, x) - l0);
    double r2 = std::exp(log_bessel_k(p + 2.0, x) - l0);
    double s = a / b;
    return {s * r1, s * s * (r2 - r1 * r1)};
}

} // namespace

GhNParams make_ghn(double lambda, double alpha, const Eigen::VectorXd &beta, double delta,
                   const Eigen::VectorXd &mu, const Eigen::MatrixXd &gamma, bool strict)
{
    const int n = static_cast<int>(beta.size());
    if (n < 1 || mu.size() != n)
        fail(ErrorKind::Domain, "beta and mu must have equal length n >= 1");
    check_square(gamma, n);
    if (!std::isfinite(lambda) || !(alpha > 0.0) || !(delta > 0.0))
        fail(ErrorKind::Domain, "GH_N requires alpha > 0, delta > 0");
    if (!beta.allFinite() || !mu.allFinite() || !gamma.allFinite())
        fail(ErrorKind::Domain, "GH_N parameters must be finite");
    const double scale = gamma.cwiseAbs().maxCoeff();
    if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
        fail(ErrorKind::Domain, "gamma must be symmetric");
    Eigen::MatrixXd g = 0.5 * (gamma + gamma.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success)
        fail(ErrorKind::Domain, "gamma must be positive definite");
    double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();

    GhNParams p;
    p.n = n;
    p.lambda = lambda;
    p.alpha = alpha;
    p.delta = delta;
    p.beta = beta;
    p.mu = mu;
    p.gamma = g;
    if (std::abs(logdet) > 1e-9) {
        if (strict)
            fail(ErrorKind::Domain, "det(gamma) must equal 1");
        double s = std::exp(logdet / n);
        p.gamma = g / s;
        p.delta = delta * std::sqrt(s);
        p.alpha = alpha / std::sqrt(s);
    }
    if (!(gamma_bar_sq(p) > 0.0))
        fail(ErrorKind::Domain, "GH_N requires alpha^2 > beta' gamma beta");
    return p;
}

double gamma_bar_sq(const GhNParams &p)
{
    return p.alpha * p.alpha - p.beta.dot(p.gamma * p.beta);
}

double log_gig_density(const GigParams &p, double x)
{
    if (!(x > 0.0))
        fail(ErrorKind::Domain, "gig_density requires x > 0");
    return p.p * std::log(p.b / p.a) - std::numbers::ln2 - log_bessel_k(p.p, p.a * p.b) +
           (p.p - 1.0) * std::log(x) - 0.5 * (p.a * p.a / x + p.b * p.b * x);
}

double gig_density(const GigParams &p, double x) { return std::exp(log_gig_density(p, x)); }

double log_gh1_density(const Gh1Params &p, double x)
{
    const double gam = std::sqrt(p.alpha * p.alpha - p.beta * p.beta);
    const double y = x - p.mu;
    const double g = std::hypot(p.delta, y);
    const double nu = p.lambda - 0.5;
    return p.lambda * std::log(gam) + (0.5 - p.lambda) * std::log(p.alpha) - 0.5 * log_2pi -
           p.lambda * std::log(p.delta) - log_bessel_k(p.lambda, p.delta * gam) +
           log_bessel_k(nu, p.alpha * g) + nu * std::log(g) + p.beta * y;
}

double gh1_density(const Gh1Params &p, double x) { return std::exp(log_gh1_density(p, x)); }

double ghn_density(const GhNParams &p, const Eigen::VectorXd &x)
{
    if (x.size() != p.n)
        fail(ErrorKind::Domain, "ghn_density: dimension mismatch");
    const double n = p.n;
    const double gb = std::sqrt(gamma_bar_sq(p));
    Eigen::VectorXd y = x - p.mu;
    // Quadratic form in gamma^{-1}, the covariance of the normal mixture.
    double q = y.dot(p.gamma.llt().solve(y));
    double g = std::sqrt(p.delta * p.delta + q);
    double nu = p.lambda - 0.5 * n;
    double lf = p.lambda * std::log(gb) + (0.5 * n - p.lambda) * std::log(p.alpha) -
                0.5 * n * log_2pi - p.lambda * std::log(p.delta) -
                log_bessel_k(p.lambda, p.delta * gb) + log_bessel_k(nu, p.alpha * g) +
                nu * std::log(g) + p.beta.dot(y);
    return std::exp(lf);
}

GigParams subordinator_of(const GhNParams &p)
{
    return make_gig(p.delta, std::sqrt(gamma_bar_sq(p)), p.lambda);
}

Eigen::MatrixXd subordinate(const GhNParams &p, const PathSkeleton &gig_path, RngStream &normals)
{
    const auto &v = gig_path.values;
    const Eigen::Index steps = v.empty() ? 0 : static_cast<Eigen::Index>(v.size()) - 1;
    Eigen::LLT<Eigen::MatrixXd> llt(p.gamma);
    if (llt.info() != Eigen::Success)
        fail(ErrorKind::Domain, "gamma has no Cholesky factor");
    Eigen::MatrixXd L = llt.matrixL();
    Eigen::VectorXd drift = p.mu * gig_path.delta;
    Eigen::VectorXd gb = p.gamma * p.beta;
    Eigen::MatrixXd out(steps, p.n);
    Eigen::VectorXd z(p.n);
    for (Eigen::Index j = 0; j < steps; ++j) {
        double dg = v[j + 1] - v[j];
        if (!(dg >= 0.0))
            fail(ErrorKind::InvalidSubordinator, "negative subordinator increment");
        for (int k = 0; k < p.n; ++k)
            z[k] = normals.normal();
        out.row(j) = (drift + gb * dg + std::sqrt(dg) * (L * z)).transpose();
    }
    return out;
}

GhNParams sub_law(const GhNParams &p, const std::vector<int> &idx)
{
    const int m = static_cast<int>(idx.size());
    if (m < 1)
        fail(ErrorKind::Domain, "sub_law needs at least one index");
    Eigen::MatrixXd g(m, m);
    Eigen::VectorXd mu(m), gbs(m);
    Eigen::VectorXd gb = p.gamma * p.beta;
    for (int a = 0; a < m; ++a) {
        if (idx[a] < 0 || idx[a] >= p.n)
            fail(ErrorKind::Domain, "sub_law index out of range");
        mu[a] = p.mu[idx[a]];
        gbs[a] = gb[idx[a]];
        for (int b = 0; b < m; ++b)
            g(a, b) = p.gamma(idx[a], idx[b]);
    }
    // The sub-vector is mu_S + (gamma beta)_S W + sqrt(W gamma_SS) Z with the
    // same W, so beta_S solves gamma_SS beta_S = (gamma beta)_S and gamma-bar
    // is unchanged.
    Eigen::VectorXd bs = g.llt().solve(gbs);
    double alpha = std::sqrt(gamma_bar_sq(p) + bs.dot(g * bs));
    return make_ghn(p.lambda, alpha, bs, p.delta, mu, g);
}

Gh1Params marginal(const GhNParams &p, int i)
{
    if (i < 0 || i >= p.n)
        fail(ErrorKind::Domain, "marginal index out of range");
    const double gii = p.gamma(i, i);
    double corr = 0.0;
    double bshift = 0.0;
    if (p.n > 1) {
        // Partition with the i-th row and column removed.
        std::vector<int> rest;
        for (int k = 0; k < p.n; ++k)
            if (k != i)
                rest.push_back(k);
        const int m = p.n - 1;
        Eigen::MatrixXd g22(m, m);
        Eigen::VectorXd g12(m), b(m);
        for (int a = 0; a < m; ++a) {
            g12[a] = p.gamma(i, rest[a]);
            b[a] = p.beta[rest[a]];
            for (int c = 0; c < m; ++c)
                g22(a, c) = p.gamma(rest[a], rest[c]);
        }
        Eigen::MatrixXd schur = g22 - g12 * g12.transpose() / gii;
        corr = b.dot(schur * b);
        bshift = g12.dot(b) / gii;
    }
    return make_gh1(p.lambda, std::sqrt((p.alpha * p.alpha - corr) / gii), p.beta[i] + bshift,
                    std::sqrt(gii) * p.delta, p.mu[i]);
}

GhNParams decorrelate(const std::vector<Gh1Params> &ms)
{
    const int n = static_cast<int>(ms.size());
    if (n < 1)
        fail(ErrorKind::Domain, "decorrelate needs at least one marginal");
    for (const auto &m : ms)
        make_gh1(m.lambda, m.alpha, m.beta, m.delta, m.mu);
    const double lambda = ms[0].lambda;
    auto cval = [](const Gh1Params &m) {
        return m.delta * std::sqrt(m.alpha * m.alpha - m.beta * m.beta);
    };
    const double c = cval(ms[0]);
    for (const auto &m : ms) {
        if (std::abs(m.lambda - lambda) > 1e-9)
            fail(ErrorKind::IncompatibleShape, "marginals have different lambda");
        if (std::abs(cval(m) - c) > 1e-9 * c)
            fail(ErrorKind::IncompatibleScale, "marginals have different delta sqrt(alpha^2 - beta^2)");
    }
    const double l0 = log_bessel_k(lambda, c);
    const double l1 = log_bessel_k(lambda + 1.0, c);
    const double l2 = log_bessel_k(lambda + 2.0, c);
    // (K1^2 - K2 K0) / (K1 K0) = K1/K0 - K2/K1
    const double factor = (std::exp(l1 - l0) - std::exp(l2 - l1)) / c;

    Eigen::MatrixXd U(n, n);
    Eigen::VectorXd beta(n), mu(n);
    for (int i = 0; i < n; ++i) {
        beta[i] = ms[i].beta;
        mu[i] = ms[i].mu;
        for (int j = 0; j < n; ++j) {
            const double di2 = ms[i].delta * ms[i].delta;
            const double dj2 = ms[j].delta * ms[j].delta;
            U(i, j) = i == j ? di2 : factor * ms[i].beta * di2 * ms[j].beta * dj2;
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(U);
    if (llt.info() != Eigen::Success)
        fail(ErrorKind::InfeasibleDecorrelation, "U is not positive definite");
    Eigen::VectorXd ld = llt.matrixL().toDenseMatrix().diagonal();
    if (!(ld.minCoeff() > 0.0))
        fail(ErrorKind::InfeasibleDecorrelation, "U is not positive definite");
    const double logdet = 2.0 * ld.array().log().sum();
    const double dU = std::exp(logdet / (2.0 * n));
    Eigen::MatrixXd G = U / (dU * dU);
    Eigen::VectorXd rhs = G.diagonal().cwiseProduct(beta);
    Eigen::VectorXd bU = G.llt().solve(rhs);
    const double aU = std::sqrt(bU.dot(G * bU) + (c / dU) * (c / dU));
    return make_ghn(lambda, aU, bU, dU, mu, G);
}

Eigen::VectorXd gh_mean(const GhNParams &p)
{
    auto [ew, vw] = gig_mean_var(p.delta, std::sqrt(gamma_bar_sq(p)), p.lambda);
    (void)vw;
    return p.mu + ew * (p.gamma * p.beta);
}

Eigen::MatrixXd gh_cov(const GhNParams &p)
{
    auto [ew, vw] = gig_mean_var(p.delta, std::sqrt(gamma_bar_sq(p)), p.lambda);
    Eigen::VectorXd gb = p.gamma * p.beta;
    return ew * p.gamma + vw * gb * gb.transpose();
}

Gh1Params point_law(const GhNParams &p, const Eigen::VectorXd &coeffs)
{
    if (coeffs.size() != p.n)
        fail(ErrorKind::Domain, "point_law: coefficient length mismatch");
    std::vector<int> keep;
    for (int i = 0; i < p.n; ++i)
        if (coeffs[i] != 0.0)
            keep.push_back(i);
    if (keep.empty())
        fail(ErrorKind::DegenerateCombination, "all coefficients are zero");
    if (static_cast<int>(keep.size()) < p.n) {
        Eigen::VectorXd phi(keep.size());
        for (std::size_t a = 0; a < keep.size(); ++a)
            phi[a] = coeffs[keep[a]];
        return point_law(sub_law(p, keep), phi);
    }
    const int n = p.n;
    const Eigen::VectorXd &phi = coeffs;
    // A: first row phi, diagonal phi_j below it.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    A.row(0) = phi.transpose();
    for (int j = 1; j < n; ++j)
        A(j, j) = phi[j];
    Eigen::MatrixXd gt = A * p.gamma * A.transpose();
    const double g11 = gt(0, 0);
    const double b1 = p.beta[0] / phi[0];
    double corr = 0.0, shift = 0.0;
    if (n > 1) {
        Eigen::VectorXd bt(n - 1);
        for (int j = 1; j < n; ++j)
            bt[j - 1] = p.beta[j] / phi[j] - b1;
        Eigen::VectorXd g21 = gt.col(0).tail(n - 1);
        Eigen::MatrixXd g22 = gt.bottomRightCorner(n - 1, n - 1);
        corr = bt.dot((g22 - g21 * g21.transpose() / g11) * bt);
        shift = g21.dot(bt) / g11;
    }
    return make_gh1(p.lambda, std::sqrt((p.alpha * p.alpha - corr) / g11), b1 + shift,
                    p.delta * std::sqrt(g11), phi.dot(p.mu));
}

} // namespace levy
