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

#include "levyfield/charfn.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace levy {

// Approximate CDF F~(x) = 1/2 + 2 Re sum_{k=1}^{M/2-1} q_k exp(-i 2 pi k x / J),
// certified to |F~ - F| < eps on [-D/2, D/2].
struct InversionPlan {
    CharFnModel model = CharFnModel::student_t3();
    double delta = 1.0;
    InversionBounds bounds;
    double kappa = 0.0;
    double J = 0.0;
    std::int64_t M = 0;
    double D = 0.0;
    double eps = 0.0;
    // q_k for k = 0 .. M/2 - 1, q_0 = 1/2.
    std::vector<std::complex<double>> q;

    // Envelope table of F~ on a uniform grid over [-D/2, D/2].
    std::vector<double> grid_x;
    std::vector<double> grid_f;
    double fmin = 0.0;
    double fmax = 1.0;

    // Split storage of q for the summation kernels.
    std::vector<double> q_re;
    std::vector<double> q_im;
};

struct PlanOptions {
    double max_M = 1e8;
    int table_points = 2049;
};

double choose_kappa(const InversionBounds &bounds);
double default_eps(const InversionBounds &bounds, double kappa, double D);
// The two lower bounds on J; the plan uses their maximum.
std::pair<double, double> j_lower_bounds(const InversionBounds &bounds, double kappa, double D,
                                         double eps);
// Smallest admissible M as a real number before rounding up to an even integer.
double required_M(double J, double eps, double theta, double B);

InversionPlan build_plan(const CharFnModel &model, double delta, const InversionBounds &bounds,
                         double D, double eps, const PlanOptions &opt = {});

double eval_cdf(const InversionPlan &plan, double x);
double eval_cdf_derivative(const InversionPlan &plan, double x);
// (F~(x), F~'(x)) in one pass.
std::pair<double, double> eval_cdf_and_derivative(const InversionPlan &plan, double x);
std::vector<double> eval_cdf_batch(const InversionPlan &plan, const std::vector<double> &xs);

// Choice of theta minimizing M for given J, eps; ties go to the smaller theta.
struct ThetaChoice {
    ThetaB tb;
    double M;
};
ThetaChoice select_theta(const std::vector<ThetaB> &scan, double J, double eps);

// Everything needed to go from a model and (eta, D, eps) to a plan.
struct AutoPlanRequest {
    TailMode mode = TailMode::CdfTail;
    int eta = 4;
    double D = 0.0;        // <= 0: tuned_D(delta, eta, p)
    double eps = 0.0;      // <= 0: default_eps
    double p = 1.0;        // order used by tuned_D
    double R = 0.0;        // <= 0: tail_bound_R (CdfTail only)
    std::vector<double> theta_grid = default_theta_grid();
    ThetaScanOptions scan;
};

struct AutoPlan {
    InversionPlan plan;
    std::vector<ThetaB> scan;
    ThetaChoice choice;
    double J_from_D;
    double J_from_eps;
};

AutoPlan auto_plan(const CharFnModel &model, double delta, const AutoPlanRequest &req,
                   const PlanOptions &opt = {});

struct ErrorBudget {
    double p = 1.0;
    // Fourier-inversion part (T / delta) E(|X - X~|^p)^{1/p}, split into the
    // tail contribution and the CDF-gap contribution.
    double tail_term = 0.0;
    double cdf_gap_term = 0.0;
    double inversion_term = 0.0;
    // Time-discretization part C_l^{1/p} (delta / T)^{1/p} / (2^{1/p} - 1).
    double discretization_term = 0.0;
    // Bound on E(|l(t) - l~(t)|^p)^{1/p}.
    double total = 0.0;
    // total^p, i.e. the bound on E|l(t) - l~(t)|^p.
    double e_gig = 0.0;
    double e_gig_inversion_only = 0.0;
};

// C in D = C eps^{-d}; kappa (3/2 R V)^{1/eta} resp. ^{1/(eta-1)}.
double budget_constant_C(const InversionBounds &bounds, double kappa);
// Stand-in for C_{l,T,p}: E|l(1)|^p from moments (p = 1 uses sqrt(m2)
// unless the law lives on [0, inf)).
double c_ell_standin(const CharFnModel &model, double p);

ErrorBudget lp_sampling_budget(const InversionBounds &bounds, double D, double C, double p,
                               double delta, double T, double c_ell);

double tuned_D(double delta, double eta, double p);

// CSV dump with header k,re,im.
void write_coefficients_csv(const InversionPlan &plan, std::ostream &os);

} // namespace levy
