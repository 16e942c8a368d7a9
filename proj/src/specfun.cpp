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

#include "levyfield/specfun.hpp"

#include "levyfield/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace levy {

namespace {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

constexpr std::array<double, 9> lanczos_coef = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// log Gamma(x) for x >= 0.5.
double lanczos_log(double x)
{
    double y = x - 1.0;
    double a = lanczos_coef[0];
    double t = y + 7.5;
    for (int i = 1; i < 9; ++i)
        a += lanczos_coef[i] / (y + i);
    return 0.5 * std::log(2.0 * pi) + (y + 0.5) * std::log(t) - t + std::log(a);
}

// log cosh(v) for v >= 0 without overflow.
double log_cosh(double v)
{
    return v + std::log1p(std::exp(-2.0 * v)) - std::numbers::ln2;
}

struct LogK {
    cplx value;
    double rel_err;
};

// Trapezoid rule for int_0^inf exp(-z cosh t) cosh(nu t) dt. The integrand
// extends to an even analytic function of t, so the rule converges
// geometrically once h resolves the peak.
std::optional<LogK> log_k_trapezoid(double nu, cplx z)
{
    const double xr = z.real();
    auto log_mag = [&](double t) { return -xr * std::cosh(t) + log_cosh(nu * t); };

    double tpk = std::asinh(nu / xr);
    // nu tanh(nu t) < nu shifts the true peak slightly left; refine by a few
    // Newton steps on the derivative.
    for (int it = 0; it < 20; ++it) {
        double g = -xr * std::sinh(tpk) + nu * std::tanh(nu * tpk);
        double c = std::cosh(nu * tpk);
        double gp = -xr * std::cosh(tpk) + nu * nu / (c * c);
        if (gp >= 0.0)
            break;
        double nt = tpk - g / gp;
        if (nt < 0.0)
            nt = 0.0;
        if (std::abs(nt - tpk) < 1e-14 * (1.0 + tpk)) {
            tpk = nt;
            break;
        }
        tpk = nt;
    }
    double fpk = log_mag(tpk);
    if (log_mag(0.0) > fpk)
        fpk = log_mag(0.0);

    // Upper cutoff where the integrand falls below e^-50 of the peak.
    double step = 0.25;
    double tmax = tpk + step;
    while (log_mag(tmax) > fpk - 50.0) {
        step *= 1.5;
        tmax += step;
    }

    auto term = [&](double t) {
        double mag = log_mag(t) - fpk;
        cplx ph = -cplx(0.0, z.imag()) * std::cosh(t);
        return std::exp(cplx(mag, 0.0) + ph);
    };

    int n = 16;
    double h = tmax / n;
    cplx sum = 0.5 * term(0.0) + 0.5 * term(tmax);
    for (int i = 1; i < n; ++i)
        sum += term(i * h);
    cplx prev = sum * h;
    constexpr int max_intervals = 1 << 20;
    while (n < max_intervals) {
        cplx add = 0.0;
        for (int i = 1; i < 2 * n; i += 2)
            add += term(i * h * 0.5);
        sum += add;
        n *= 2;
        h *= 0.5;
        cplx cur = sum * h;
        double diff = std::abs(cur - prev);
        double scale = std::abs(cur);
        prev = cur;
        if (n >= 64 && diff <= 1e-14 * scale) {
            if (scale == 0.0)
                return std::nullopt;
            return LogK{cplx(fpk, 0.0) + std::log(cur),
                        std::max(diff / scale, 1e-16)};
        }
    }
    return std::nullopt;
}

// Hankel expansion for large |z|; only used when the terms reach 1e-17
// before they start to grow.
std::optional<LogK> log_k_hankel(double nu, cplx z)
{
    const double mu = 4.0 * nu * nu;
    cplx term = 1.0;
    cplx sum = 1.0;
    double last = 1.0;
    for (int k = 1; k < 200; ++k) {
        double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (8.0 * k * z);
        double mag = std::abs(term);
        if (mag <= 1e-17 * std::abs(sum)) {
            sum += term;
            return LogK{0.5 * std::log(pi / (2.0 * z)) - z + std::log(sum), 1e-16};
        }
        if (mag > last && k > 1)
            return std::nullopt;
        last = mag;
        sum += term;
        if (mag == 0.0)
            return LogK{0.5 * std::log(pi / (2.0 * z)) - z + std::log(sum), 1e-16};
    }
    return std::nullopt;
}

LogK log_k_impl(double nu, cplx z)
{
    nu = std::abs(nu);
    if (std::abs(z) > 17.0) {
        if (auto r = log_k_hankel(nu, z))
            return *r;
    }
    if (auto r = log_k_trapezoid(nu, z))
        return *r;
    fail(ErrorKind::NumericFailure, "K_nu quadrature did not converge");
}

// Uniform large-order approximation; only its imaginary part is used, to
// select the continuous branch of the logarithm.
cplx log_k_reference(double nu, cplx z)
{
    nu = std::abs(nu);
    if (nu < 1.0)
        return 0.5 * std::log(pi / (2.0 * z)) - z;
    cplx w = z / nu;
    cplx s = std::sqrt(1.0 + w * w);
    return 0.5 * std::log(pi / (2.0 * nu)) - nu * (s + std::log(w / (1.0 + s))) -
           0.25 * std::log(1.0 + w * w);
}

} // namespace

double log_gamma(double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
        fail(ErrorKind::Domain, "gamma requires x > 0");
    if (x < 0.5)
        return lanczos_log(x + 1.0) - std::log(x);
    return lanczos_log(x);
}

double gamma_fn(double x)
{
    if (!(x > 0.0) || x > 171.6)
        fail(ErrorKind::Domain, "gamma_fn requires 0 < x <= 171.6");
    if (x < 0.5)
        return std::exp(lanczos_log(x + 1.0)) / x;
    return std::exp(lanczos_log(x));
}

double log_bessel_k(double nu, double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
        fail(ErrorKind::Domain, "bessel_k requires x > 0");
    return log_k_impl(nu, cplx(x, 0.0)).value.real();
}

SpecFunResult bessel_k_result(double nu, double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
        fail(ErrorKind::Domain, "bessel_k requires x > 0");
    LogK r = log_k_impl(nu, cplx(x, 0.0));
    double lv = r.value.real();
    if (lv > std::log(std::numeric_limits<double>::max()))
        fail(ErrorKind::Domain, "bessel_k overflows; use log_bessel_k");
    double v = std::exp(lv);
    // exp amplifies the absolute error of the logarithm by |lv| ulps.
    double rel = r.rel_err + 2.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(lv));
    return {v, v * rel};
}

double bessel_k(double nu, double x) { return bessel_k_result(nu, x).value; }

std::complex<double> log_bessel_k(double nu, std::complex<double> z)
{
    if (!(z.real() > 0.0))
        fail(ErrorKind::Domain, "complex bessel_k requires Re z > 0");
    if (z.imag() == 0.0)
        return {log_bessel_k(nu, z.real()), 0.0};
    cplx lk = log_k_impl(nu, z).value;
    cplx ref = log_k_reference(nu, z);
    double turns = std::round((lk.imag() - ref.imag()) / (2.0 * pi));
    return {lk.real(), lk.imag() - 2.0 * pi * turns};
}

SpecFunResult hurwitz_zeta_result(double z, double s)
{
    if (!(z > 1.0) || !(s > 0.0))
        fail(ErrorKind::Domain, "hurwitz_zeta requires z > 1, s > 0");
    constexpr int direct = 30;
    // B_2j / (2j)!
    constexpr std::array<double, 8> b2j = {
        1.0 / 6.0 / 2.0,
        -1.0 / 30.0 / 24.0,
        1.0 / 42.0 / 720.0,
        -1.0 / 30.0 / 40320.0,
        5.0 / 66.0 / 3628800.0,
        -691.0 / 2730.0 / 479001600.0,
        7.0 / 6.0 / 87178291200.0,
        -3617.0 / 510.0 / 20922789888000.0};
    double sum = 0.0;
    for (int k = direct - 1; k >= 0; --k)
        sum += std::pow(k + s, -z);
    double a = direct + s;
    double head = std::pow(a, 1.0 - z) / (z - 1.0) + 0.5 * std::pow(a, -z);
    double tail = 0.0;
    double rising = z;               // z (z+1) ... (z+2j-2)
    double apow = std::pow(a, -z - 1.0);
    double last = 0.0;
    for (int j = 0; j < 8; ++j) {
        last = b2j[j] * rising * apow;
        tail += last;
        rising *= (z + 2 * j + 1) * (z + 2 * j + 2);
        apow /= a * a;
    }
    double value = sum + head + tail;
    double err = std::abs(last) + 4.0 * std::numeric_limits<double>::epsilon() * value;
    return {value, err};
}

double hurwitz_zeta(double z, double s) { return hurwitz_zeta_result(z, s).value; }

namespace {
void check_kappa(double kappa, double eta)
{
    if (!(kappa > 0.0) || !(kappa < 2.0 / 3.0))
        fail(ErrorKind::Domain, "kappa must lie in (0, 2/3)");
    if (!(eta > 1.0))
        fail(ErrorKind::Domain, "eta must exceed 1");
}

double zeta_sum(double kappa, double eta)
{
    return 2.0 * hurwitz_zeta(eta, 1.0 - kappa / 2.0) + hurwitz_zeta(eta, 1.0 + kappa / 2.0) +
           hurwitz_zeta(eta, 1.0 - 1.5 * kappa);
}
} // namespace

double v1(double kappa, double eta)
{
    check_kappa(kappa, eta);
    return std::pow(kappa / 2.0, -eta) + zeta_sum(kappa, eta);
}

double v2(double kappa, double eta)
{
    check_kappa(kappa, eta);
    return std::pow(2.0, eta - 1.0) * std::pow(kappa, 1.0 - eta) / (eta - 1.0) +
           0.5 * kappa * zeta_sum(kappa, eta);
}

} // namespace levy
