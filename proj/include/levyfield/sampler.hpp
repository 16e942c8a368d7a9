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
#include "levyfield/rng.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace levy {

// Piecewise-constant path: value[j] holds on [t_j, t_{j+1}).
struct PathSkeleton {
    double delta = 0.0;
    std::vector<double> t;
    std::vector<double> values;
};

struct NewtonOptions {
    double root_tol = 1e-10;
    int max_iter = 50;
    double armijo = 1e-4;
    int max_backtracks = 40;
};

struct NewtonTrace {
    std::vector<double> residuals; // |F~(x_i) - u| per accepted iterate
    int evaluations = 0;
    bool bisection = false;
};

// Moment-matched starting point rule, precomputed per (model, delta).
struct InitialValueRule {
    enum class Kind { InverseGaussian, Normal, Zero } kind = Kind::Zero;
    double a0 = 0.0, b0 = 0.0; // IG(a0, b0)
    double mean = 0.0, sd = 0.0;
};

InitialValueRule make_initial_rule(const CharFnModel &model, double delta);
double initial_value(const InitialValueRule &rule, double u);
double initial_value(const CharFnModel &model, double delta, double u);

// Globalized Newton on F~(x) = u with Armijo backtracking and projection
// onto [-D/2, D/2]; falls back to bisection on the envelope table.
double newton_invert(const InversionPlan &plan, double u, double x0,
                     const NewtonOptions &opt = {}, NewtonTrace *trace = nullptr);

// Clamped pseudo-inverse of F~.
double pseudo_inverse(const InversionPlan &plan, double u);
double pseudo_inverse(const InversionPlan &plan, const InitialValueRule &rule, double u,
                      const NewtonOptions &opt = {}, NewtonTrace *trace = nullptr);

PathSkeleton sample_path(const InversionPlan &plan, int n, double T, RngStream stream);
// Path i uses stream (seed, first_index + i).
std::vector<PathSkeleton> sample_paths(const InversionPlan &plan, int n, double T,
                                       std::uint64_t seed, std::size_t count, int threads = 1,
                                       std::uint64_t first_index = 0);

// Replaces negative increments by zero. F~ of a subordinator carries up to
// eps of mass below 0; the true law has none. Returns the number of
// increments changed.
std::size_t rectify_increasing(PathSkeleton &path);

struct CoupledError {
    double estimate;
    double std_error;
    std::size_t n;
};

// Monte Carlo estimate of E|F^{-1}(U) - F~^{-1}(U)|^p with common U.
CoupledError coupled_error(const InversionPlan &plan, const std::function<double(double)> &exact_quantile,
                           std::size_t n_samples, double p, RngStream stream);
CoupledError coupled_error(const std::function<double(double)> &approx_quantile,
                           const std::function<double(double)> &exact_quantile,
                           std::size_t n_samples, double p, RngStream stream);

// CSV with header t,value.
void write_path_csv(const PathSkeleton &path, std::ostream &os);

} // namespace levy
