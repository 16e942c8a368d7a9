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

#include "levyfield/distributions.hpp"

#include "levyfield/errors.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace levy {

namespace {
const boost::math::normal_distribution<double> std_normal(0.0, 1.0);
}

double normal_cdf(double x)
{
    if (std::isinf(x))
        return x > 0 ? 1.0 : 0.0;
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double u)
{
    if (!(u >= 0.0 && u <= 1.0))
        fail(ErrorKind::Domain, "normal_quantile requires u in [0, 1]");
    if (u == 0.0)
        return -HUGE_VAL;
    if (u == 1.0)
        return HUGE_VAL;
    return boost::math::quantile(std_normal, u);
}

double log_normal_cdf(double x)
{
    if (x > -20.0)
        return std::log(normal_cdf(x));
    // Mills ratio asymptotics; the truncation error is far below 1e-16 here.
    double z = -x, z2 = z * z;
    double s = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2) + 105.0 / (z2 * z2 * z2 * z2);
    return -0.5 * z2 - std::log(z) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(s);
}

double ig_cdf(double a, double b, double x)
{
    if (!(a > 0.0) || !(b > 0.0))
        fail(ErrorKind::Domain, "IG requires a, b > 0");
    if (!(x > 0.0))
        return 0.0;
    if (std::isinf(x))
        return 1.0;
    double mu = a / b, lam = a * a;
    double r = std::sqrt(lam / x);
    double z1 = r * (x / mu - 1.0);
    double z2 = r * (x / mu + 1.0);
    double second = std::exp(2.0 * lam / mu + log_normal_cdf(-z2));
    return std::min(1.0, normal_cdf(z1) + second);
}

double ig_quantile(double a, double b, double u)
{
    if (!(a > 0.0) || !(b > 0.0))
        fail(ErrorKind::Domain, "IG requires a, b > 0");
    if (!(u >= 0.0 && u <= 1.0))
        fail(ErrorKind::Domain, "ig_quantile requires u in [0, 1]");
    if (u == 0.0)
        return 0.0;
    if (u == 1.0)
        return HUGE_VAL;
    double mu = a / b, lam = a * a;
    double sd = std::sqrt(mu * mu * mu / lam);
    // Bracket in log x around a normal-approximation guess.
    double guess = std::max(mu + sd * normal_quantile(u), mu * 1e-3);
    double lg = std::log(guess);
    auto f = [&](double lx) { return ig_cdf(a, b, std::exp(lx)) - u; };
    double lo = lg - 0.5, hi = lg + 0.5;
    double flo = f(lo), fhi = f(hi);
    for (int i = 0; flo > 0.0 && i < 200; ++i) {
        lo -= 1.0 + (lg - lo);
        flo = f(lo);
    }
    for (int i = 0; fhi < 0.0 && i < 200; ++i) {
        hi += 1.0 + (hi - lg);
        fhi = f(hi);
    }
    if (flo > 0.0 || fhi < 0.0)
        fail(ErrorKind::NumericFailure, "ig_quantile could not bracket the root");
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                               boost::math::tools::eps_tolerance<double>(52), iters);
    return std::exp(0.5 * (r.first + r.second));
}

double ig_from_normal(double a, double b, double z, double u)
{
    double mu = a / b, lam = a * a;
    double y = z * z;
    double root = std::sqrt(4.0 * mu * lam * y + mu * mu * y * y);
    // mu + mu^2 y / (2 lam) - mu / (2 lam) sqrt(...), rearranged to avoid cancellation.
    double x = mu - 2.0 * mu * mu * y / (mu * y + root);
    if (!(x > 0.0))
        x = std::max(x, std::numeric_limits<double>::min());
    return u <= mu / (mu + x) ? x : mu * mu / x;
}

} // namespace levy
