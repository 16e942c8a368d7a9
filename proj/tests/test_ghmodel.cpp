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

#include <doctest.h>

#include "levyfield/charfn.hpp"
#include "levyfield/distributions.hpp"
#include "levyfield/errors.hpp"
#include "levyfield/ghmodel.hpp"
#include "levyfield/specfun.hpp"
#include "levyfield/stats.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <random>

using namespace levy;
using cplx = std::complex<double>;

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

Gh1Params with_c(double lambda, double alpha, double beta, double c, double mu)
{
    return make_gh1(lambda, alpha, beta, c / std::sqrt(alpha * alpha - beta * beta), mu);
}

GhNParams random_ghn(std::mt19937_64 &g, int n)
{
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            A(i, j) = U(g);
    Eigen::MatrixXd G = A * A.transpose() + n * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd beta(n), mu(n);
    for (int i = 0; i < n; ++i) {
        beta[i] = 0.4 * U(g);
        mu[i] = U(g);
    }
    double alpha = std::sqrt(beta.dot(G * beta) / std::pow(G.determinant(), 1.0 / n)) + 1.5;
    return make_ghn(0.3 + U(g), alpha, beta, 1.0 + 0.5 * U(g), mu, G);
}

// Empirical covariance and its entrywise standard errors.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> cov_with_se(const Eigen::MatrixXd &x)
{
    const double n = static_cast<double>(x.rows());
    Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
    Eigen::MatrixXd cov = c.transpose() * c / n;
    Eigen::MatrixXd se(x.cols(), x.cols());
    for (Eigen::Index i = 0; i < x.cols(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            Eigen::ArrayXd prod = c.col(i).array() * c.col(j).array();
            double var = (prod - cov(i, j)).square().sum() / (n - 1.0);
            se(i, j) = std::sqrt(var / n);
        }
    return {cov, se};
}

// IG subordinator path with unit steps (lambda = -1/2 only).
PathSkeleton ig_path(double a, double b, int steps, RngStream &s)
{
    PathSkeleton p;
    p.delta = 1.0;
    p.t.resize(steps + 1);
    p.values.assign(steps + 1, 0.0);
    for (int j = 1; j <= steps; ++j) {
        p.t[j] = j;
        double z = s.normal();
        p.values[j] = p.values[j - 1] + ig_from_normal(a, b, z, s.uniform());
    }
    return p;
}

} // namespace

TEST_CASE("make_ghn validates and normalizes the determinant")
{
    Eigen::VectorXd b = Eigen::VectorXd::Zero(2), mu = Eigen::VectorXd::Zero(2);
    Eigen::MatrixXd G = 4.0 * Eigen::MatrixXd::Identity(2, 2);
    auto p = make_ghn(1.0, 5.0, b, 2.0, mu, G);
    CHECK(std::abs(p.gamma.determinant() - 1.0) < 1e-12);
    CHECK(std::abs(p.delta - 4.0) < 1e-12);
    CHECK(std::abs(p.alpha - 2.5) < 1e-12);
    CHECK_THROWS_AS(make_ghn(1.0, 5.0, b, 2.0, mu, G, true), Error);
    Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
    asym(0, 1) = 0.1;
    CHECK_THROWS_AS(make_ghn(1.0, 5.0, b, 2.0, mu, asym), Error);
    Eigen::VectorXd big(2);
    big << 5.0, 0.0;
    CHECK_THROWS_AS(make_ghn(1.0, 5.0, big, 2.0, mu, Eigen::MatrixXd::Identity(2, 2)), Error);
}

TEST_CASE("rescaling gamma leaves the law unchanged")
{
    std::mt19937_64 g(3);
    auto p = random_ghn(g, 3);
    // (s gamma, delta / sqrt(s), alpha sqrt(s), beta) is the same mixture.
    auto q = make_ghn(p.lambda, p.alpha * std::sqrt(2.0), p.beta, p.delta / std::sqrt(2.0), p.mu,
                      2.0 * p.gamma);
    CHECK(std::abs(q.delta - p.delta) < 1e-12);
    CHECK((gh_cov(p) - gh_cov(q)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((gh_mean(p) - gh_mean(q)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("densities integrate to one")
{
    GigParams gp = make_gig(4, 5, -0.5);
    CHECK(std::abs(numeric_cdf([&](double x) { return gig_density(gp, x); }, 0.0, INFINITY,
                               INFINITY) -
                   1.0) < 1e-8);
    GigParams gp2 = make_gig(0.5, 2.0, 1.7);
    CHECK(std::abs(numeric_cdf([&](double x) { return gig_density(gp2, x); }, 0.0, INFINITY,
                               INFINITY) -
                   1.0) < 1e-8);
    for (auto p : {make_gh1(-0.5, 5, 0, 4, 0), make_gh1(1.0, 3, -1.2, 0.7, 0.4),
                   make_gh1(2.5, 1.5, 0.5, 2.0, -1.0)}) {
        double I = numeric_cdf([&](double x) { return gh1_density(p, x); }, -INFINITY, INFINITY,
                               INFINITY);
        CHECK(std::abs(I - 1.0) < 1e-8);
    }
}

TEST_CASE("GH1 density symmetry and frozen value")
{
    auto p = make_gh1(-0.5, 5, 0, 4, 0.7);
    for (double x : {0.1, 1.0, 3.0})
        CHECK(std::abs(gh1_density(p, 0.7 + x) - gh1_density(p, 0.7 - x)) < 1e-15);
    CHECK(std::abs(gh1_density(make_gh1(-0.5, 5, 0, 4, 0), 0.0) - 0.4542687872257726364) < 1e-13);
}

TEST_CASE("GH1 density matches Fourier inversion of the characteristic function")
{
    for (auto p : {make_gh1(-0.5, 5, 0, 4, 0), make_gh1(1.0, 3, -1.2, 0.7, 0.4)}) {
        auto m = CharFnModel::gh1(p.lambda, p.alpha, p.beta, p.delta, p.mu);
        for (double x : {-2.0, -0.3, 0.0, 0.5, 1.7}) {
            double v = GK::integrate(
                           [&](double u) {
                               return (eval_power(m, u, 1.0) * std::exp(cplx(0.0, -u * x))).real();
                           },
                           0.0, INFINITY, 20, 1e-12) /
                       M_PI;
            CHECK(std::abs(v - gh1_density(p, x)) < 1e-6);
        }
    }
}

TEST_CASE("GH_N density integrates to the marginal density")
{
    // Integrating out x2 must return the coordinate-1 law; this fixes the
    // quadratic form to use gamma^{-1}.
    std::mt19937_64 g(11);
    auto p = random_ghn(g, 2);
    auto m0 = marginal(p, 0);
    for (double x1 : {-1.0, 0.2, 1.5}) {
        double v = GK::integrate(
            [&](double x2) {
                Eigen::VectorXd x(2);
                x << x1, x2;
                return ghn_density(p, x);
            },
            -INFINITY, INFINITY, 20, 1e-12);
        CHECK(std::abs(v - gh1_density(m0, x1)) < 1e-7);
    }
}

TEST_CASE("subordinator_of")
{
    Eigen::VectorXd z = Eigen::VectorXd::Zero(3);
    auto p = make_ghn(-0.5, 5, z, 4, z, Eigen::MatrixXd::Identity(3, 3));
    auto s = subordinator_of(p);
    CHECK(s.a == 4.0);
    CHECK(s.b == 5.0);
    CHECK(s.p == -0.5);
    Eigen::VectorXd b(3);
    b << 1.0, -0.5, 0.2;
    auto q = make_ghn(-0.5, 5, b, 4, z, Eigen::MatrixXd::Identity(3, 3));
    CHECK(std::abs(subordinator_of(q).b - std::sqrt(25.0 - b.squaredNorm())) < 1e-14);
}

TEST_CASE("subordinate: degenerate and invalid increments")
{
    Eigen::VectorXd mu(2), b(2);
    mu << 0.5, -1.0;
    b << 0.3, 0.1;
    auto p = make_ghn(1.0, 3.0, b, 1.0, mu, Eigen::MatrixXd::Identity(2, 2));
    PathSkeleton flat;
    flat.delta = 0.25;
    flat.t = {0, 0.25, 0.5};
    flat.values = {0.0, 0.0, 0.0};
    RngStream s(1, 0);
    auto inc = subordinate(p, flat, s);
    CHECK(inc.rows() == 2);
    for (int j = 0; j < 2; ++j)
        CHECK((inc.row(j).transpose() - mu * 0.25).cwiseAbs().maxCoeff() == 0.0);
    PathSkeleton bad = flat;
    bad.values = {0.0, 1.0, 0.5};
    CHECK_THROWS_AS(subordinate(p, bad, s), Error);
    try {
        subordinate(p, bad, s);
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::InvalidSubordinator);
    }
}

TEST_CASE("subordinate with beta = 0, gamma = I gives conditionally normal increments")
{
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
    auto p = make_ghn(-0.5, 5, z, 4, z, Eigen::MatrixXd::Identity(2, 2));
    PathSkeleton path;
    path.delta = 1.0;
    const int n = 20000;
    path.t.resize(n + 1);
    path.values.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        path.t[j] = j;
        path.values[j] = 2.0 * j; // every increment is 2
    }
    RngStream s(9, 0);
    auto inc = subordinate(p, path, s);
    std::vector<double> c0(n);
    for (int j = 0; j < n; ++j)
        c0[j] = inc(j, 0);
    auto ks = ks_test(c0, [](double x) { return normal_cdf(x / std::sqrt(2.0)); });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("empirical covariance of subordinated increments matches gh_cov")
{
    Eigen::VectorXd mu(2), b(2);
    mu << 0.1, -0.2;
    b << 0.8, -0.5;
    Eigen::MatrixXd G(2, 2);
    G << 1.5, 0.4, 0.4, 1.0;
    auto p = make_ghn(-0.5, 3.0, b, 1.2, mu, G);
    auto sub = subordinator_of(p);
    RngStream s(77, 0);
    auto path = ig_path(sub.a, sub.b, 100000, s);
    auto inc = subordinate(p, path, s);
    auto [cov, se] = cov_with_se(inc);
    auto ref = gh_cov(p);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(cov(i, j) - ref(i, j)) < 3.5 * se(i, j));
    Eigen::VectorXd mean = inc.colwise().mean();
    for (int i = 0; i < 2; ++i)
        CHECK(std::abs(mean[i] - gh_mean(p)[i]) < 3.5 * std::sqrt(ref(i, i) / 100000));
}

TEST_CASE("gh_mean and gh_cov special cases")
{
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2), mu(2);
    mu << 1.0, 2.0;
    Eigen::MatrixXd G(2, 2);
    G << 2.0, 0.5, 0.5, 0.625; // det 1
    auto p = make_ghn(1.0, 5, z, 4, mu, G);
    CHECK((gh_mean(p) - mu).norm() == 0.0);
    double f = 4.0 * bessel_k(2.0, 20.0) / (5.0 * bessel_k(1.0, 20.0));
    CHECK((gh_cov(p) - f * G).cwiseAbs().maxCoeff() < 1e-12);
    std::mt19937_64 g(5);
    auto q = random_ghn(g, 3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gh_cov(q));
    CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("marginal parameters")
{
    Eigen::VectorXd z = Eigen::VectorXd::Zero(3), mu(3);
    mu << 1, 2, 3;
    auto p = make_ghn(0.7, 5, z, 4, mu, Eigen::MatrixXd::Identity(3, 3));
    for (int i = 0; i < 3; ++i) {
        auto m = marginal(p, i);
        CHECK(m.lambda == 0.7);
        CHECK(m.alpha == 5.0);
        CHECK(m.beta == 0.0);
        CHECK(m.delta == 4.0);
        CHECK(m.mu == mu[i]);
    }
    CHECK_THROWS_AS(marginal(p, 3), Error);
}

TEST_CASE("marginal moments agree with the N-dimensional moments")
{
    std::mt19937_64 g(21);
    for (int rep = 0; rep < 5; ++rep) {
        auto p = random_ghn(g, 3);
        auto mean = gh_mean(p);
        auto cov = gh_cov(p);
        for (int i = 0; i < 3; ++i) {
            auto m = marginal(p, i);
            Eigen::VectorXd b1(1), mu1(1);
            b1 << m.beta;
            mu1 << m.mu;
            auto one = make_ghn(m.lambda, m.alpha, b1, m.delta, mu1, Eigen::MatrixXd::Ones(1, 1));
            CHECK(std::abs(gh_mean(one)[0] - mean[i]) < 1e-10);
            CHECK(std::abs(gh_cov(one)(0, 0) - cov(i, i)) < 1e-10);
            // Closed-form parameters agree with the sub-vector route.
            auto s = sub_law(p, {i});
            CHECK(std::abs(s.alpha - m.alpha) < 1e-10);
            CHECK(std::abs(s.beta[0] - m.beta) < 1e-10);
            CHECK(std::abs(s.delta - m.delta) < 1e-10);
        }
    }
}

TEST_CASE("decorrelate with identical symmetric marginals")
{
    for (double lambda : {-0.5, 1.0}) {
        std::vector<Gh1Params> ms(18, make_gh1(lambda, 5, 0, 4, 0));
        auto p = decorrelate(ms);
        CHECK(p.n == 18);
        CHECK(p.alpha == 5.0);
        CHECK(p.delta == 4.0);
        CHECK(p.beta.norm() == 0.0);
        CHECK((p.gamma - Eigen::MatrixXd::Identity(18, 18)).norm() == 0.0);
        auto s = subordinator_of(p);
        CHECK(s.a == 4.0);
        CHECK(s.b == 5.0);
    }
}

TEST_CASE("decorrelate round trip for asymmetric marginals")
{
    std::vector<Gh1Params> ms{with_c(1.0, 2.0, 0.8, 3.0, 0.1), with_c(1.0, 3.0, -1.2, 3.0, -0.2),
                              with_c(1.0, 1.5, 0.3, 3.0, 0.0)};
    auto p = decorrelate(ms);
    CHECK(std::abs(p.gamma.determinant() - 1.0) < 1e-12);
    auto cov = gh_cov(p);
    for (int i = 0; i < 3; ++i) {
        auto m = marginal(p, i);
        CHECK(std::abs(m.lambda - ms[i].lambda) < 1e-8);
        CHECK(std::abs(m.alpha - ms[i].alpha) < 1e-8);
        CHECK(std::abs(m.beta - ms[i].beta) < 1e-8);
        CHECK(std::abs(m.delta - ms[i].delta) < 1e-8);
        CHECK(std::abs(m.mu - ms[i].mu) < 1e-8);
        for (int j = 0; j < 3; ++j)
            if (i != j)
                CHECK(std::abs(cov(i, j)) < 1e-9);
    }
}

TEST_CASE("decorrelate failure modes")
{
    auto a = with_c(1.0, 2.0, 0.5, 3.0, 0.0);
    CHECK_THROWS_AS(decorrelate({a, with_c(0.5, 2.0, 0.5, 3.0, 0.0)}), Error);
    try {
        decorrelate({a, with_c(0.5, 2.0, 0.5, 3.0, 0.0)});
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::IncompatibleShape);
    }
    try {
        decorrelate({a, with_c(1.0, 2.0, 0.5, 3.1, 0.0)});
        FAIL("expected IncompatibleScale");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::IncompatibleScale);
    }
    // Strong skew with small c makes the off-diagonal of U dominate.
    try {
        decorrelate({with_c(1.0, 10.0, 9.99, 0.05, 0.0), with_c(1.0, 10.0, 9.99, 0.05, 0.0)});
        FAIL("expected InfeasibleDecorrelation");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::InfeasibleDecorrelation);
    }
}

TEST_CASE("decorrelated increments are empirically uncorrelated")
{
    std::vector<Gh1Params> ms{with_c(-0.5, 2.0, 0.8, 3.0, 0.1), with_c(-0.5, 3.0, -1.2, 3.0, -0.2)};
    auto p = decorrelate(ms);
    auto sub = subordinator_of(p);
    RngStream s(2026, 1);
    const int n = 100000;
    auto inc = subordinate(p, ig_path(sub.a, sub.b, n, s), s);
    auto r = empirical_corr(inc);
    CHECK(std::abs(r(0, 1)) < 3.0 / std::sqrt(n));
}

TEST_CASE("point law")
{
    Eigen::VectorXd z = Eigen::VectorXd::Zero(3);
    auto p = make_ghn(-0.5, 5, z, 4, z, Eigen::MatrixXd::Identity(3, 3));
    Eigen::VectorXd phi(3);
    phi << 0.3, -0.5, 1.1;
    auto L = point_law(p, phi);
    double s = phi.norm();
    CHECK(std::abs(L.alpha - 5.0 / s) < 1e-12);
    CHECK(std::abs(L.delta - 4.0 * s) < 1e-12);
    CHECK(std::abs(L.beta) < 1e-14);
    CHECK(L.mu == 0.0);
    CHECK(std::abs(L.alpha * L.delta - 20.0) < 1e-12);

    // N = 1 identity
    Eigen::VectorXd b1(1), m1(1), one(1);
    b1 << 0.4;
    m1 << -0.3;
    one << 1.0;
    auto q = make_ghn(1.0, 2.0, b1, 1.5, m1, Eigen::MatrixXd::Ones(1, 1));
    auto Lq = point_law(q, one);
    CHECK(std::abs(Lq.alpha - 2.0) < 1e-14);
    CHECK(std::abs(Lq.beta - 0.4) < 1e-14);
    CHECK(std::abs(Lq.delta - 1.5) < 1e-14);
    CHECK(std::abs(Lq.mu + 0.3) < 1e-14);

    CHECK_THROWS_AS(point_law(p, Eigen::VectorXd::Zero(3)), Error);
}

TEST_CASE("point law with a zero coefficient reduces to the sub-vector")
{
    std::mt19937_64 g(8);
    auto p = random_ghn(g, 3);
    Eigen::VectorXd phi(3), red(2);
    phi << 0.7, 0.0, -1.3;
    red << 0.7, -1.3;
    auto a = point_law(p, phi);
    auto b = point_law(sub_law(p, {0, 2}), red);
    CHECK(std::abs(a.alpha - b.alpha) < 1e-12);
    CHECK(std::abs(a.beta - b.beta) < 1e-12);
    CHECK(std::abs(a.delta - b.delta) < 1e-12);
    CHECK(std::abs(a.mu - b.mu) < 1e-12);
}

TEST_CASE("point law agrees with the characteristic function of the weighted sum")
{
    // phi_{c'X}(u) = exp(i u c'mu) M_GIG(i u c'gamma beta - u^2 c'gamma c / 2)
    std::mt19937_64 g(13);
    for (int rep = 0; rep < 4; ++rep) {
        auto p = random_ghn(g, 3);
        Eigen::VectorXd c(3);
        c << 0.5 + rep, -0.8, 0.3;
        auto L = point_law(p, c);
        // c-invariance
        double lhs = L.delta * std::sqrt(L.alpha * L.alpha - L.beta * L.beta);
        CHECK(std::abs(lhs - p.delta * std::sqrt(gamma_bar_sq(p))) < 1e-9);
        CHECK(std::abs(L.mu - c.dot(p.mu)) < 1e-14);
        auto m = CharFnModel::gh1(L.lambda, L.alpha, L.beta, L.delta, L.mu);
        const double a = p.delta, b2 = gamma_bar_sq(p), lam = p.lambda;
        const double v = c.dot(p.gamma * p.beta), w = c.dot(p.gamma * c);
        for (double u : {0.3, 1.0, 2.5}) {
            cplx t = b2 - 2.0 * cplx(-0.5 * u * u * w, u * v);
            cplx lm = 0.5 * lam * (std::log(b2) - std::log(t)) + log_bessel_k(lam, a * std::sqrt(t)) -
                      log_bessel_k(lam, a * std::sqrt(b2));
            cplx ref = std::exp(lm + cplx(0.0, u * c.dot(p.mu)));
            CHECK(std::abs(eval_power(m, u, 1.0) - ref) < 1e-10);
        }
    }
}
