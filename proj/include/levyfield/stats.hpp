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

#pragma once

#include "levyfield/inversion.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace levy {

// int_lo^min(x, hi) density, adaptive Gauss-Kronrod, clamped to [0, 1].
// lo may be -inf and hi +inf.
double numeric_cdf(const std::function<double(double)> &density, double lo, double hi, double x);

// CDF tabulated on a uniform grid over [a, b] by per-cell quadrature;
// cubic Hermite interpolation using the density as the slope.
class TabulatedCdf {
public:
    TabulatedCdf(const std::function<double(double)> &density, double lo, double hi, double a,
                 double b, int points = 4096);

    double operator()(double x) const;
    double lower() const { return a_; }
    double upper() const { return b_; }
    // Mass outside [a, b]; bounds the error there.
    double outside_mass() const { return below_ + above_; }

private:
    double a_, b_, h_;
    double below_ = 0.0; // mass left of a
    double above_ = 0.0; // mass right of b
    std::vector<double> F_, f_;
};

struct KsResult {
    double statistic;
    double p_value;
    std::size_t n;
};

// Survival function of the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

KsResult ks_test(std::vector<double> samples, const std::function<double(double)> &cdf);

// Pearson correlation of the columns.
Eigen::MatrixXd empirical_corr(const Eigen::MatrixXd &x);

struct ConvergenceRow {
    double delta;
    double empirical;
    double std_error;
    double budget;
    std::int64_t M;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    double slope; // least squares of log empirical on log delta
};

struct ConvergenceOptions {
    std::vector<int> levels{4, 5, 6, 7, 8}; // delta = T 2^-level
    int reference_level = 12;
    double T = 1.0;
    double p = 1.0;
    std::size_t paths = 10000;
    AutoPlanRequest plan_request;
    int threads = 1;
};

// Piecewise-constant approximations driven by inversion against exact
// reference paths on the 2^-reference_level grid. Each coarse increment X is
// coupled through U = F(X). The error per path is the time average
// (1/T) int |l(t) - l~(t)|^p dt; rows report its mean^{1/p}. Requires a
// Gaussian or IG model.
ConvergenceResult convergence_study(const CharFnModel &model, const ConvergenceOptions &opt,
                                    std::uint64_t seed);

// CSV with header delta,empirical,stderr,budget.
void write_convergence_csv(const ConvergenceResult &r, std::ostream &os);

} // namespace levy
