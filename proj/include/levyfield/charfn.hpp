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

#include "levyfield/params.hpp"

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace levy {

// Inverse Gaussian IG(a, b) = GIG(a, b, -1/2); mean a/b.
struct IgParams {
    double a;
    double b;
};

struct GaussianParams {
    double mean;
    double var;
};

// Student t with 3 degrees of freedom, unit scale.
struct StudentT3Params {};

struct CauchyParams {
    double scale;
};

// Infinitely divisible law of the time-1 increment.
class CharFnModel {
public:
    using Variant =
        std::variant<GigParams, Gh1Params, IgParams, GaussianParams, StudentT3Params, CauchyParams>;

    static CharFnModel gig(double a, double b, double p);
    static CharFnModel gh1(double lambda, double alpha, double beta, double delta, double mu);
    static CharFnModel ig(double a, double b);
    static CharFnModel gaussian(double mean, double var);
    static CharFnModel student_t3();
    static CharFnModel cauchy(double scale);

    const Variant &params() const { return v_; }
    std::string name() const;
    // Laws supported on [0, inf).
    bool is_subordinator() const;

private:
    explicit CharFnModel(Variant v) : v_(v) {}
    Variant v_;
};

enum class TailMode {
    CdfTail,    // F(-x), 1 - F(x) <= R x^-eta
    DensityTail // f(x) <= R |x|^-eta
};

struct InversionBounds {
    TailMode mode = TailMode::CdfTail;
    double eta = 2.0;
    double R = 1.0;
    double theta = 1.0;
    double B = 1.0;
};

// log of (phi(u))^delta on the continuous branch starting at log 1 = 0.
std::complex<double> log_eval_power(const CharFnModel &model, double u, double delta);
std::complex<double> eval_power(const CharFnModel &model, double u, double delta);

// i^-k d^k/du^k (phi)^delta at u = 0, i.e. E[X^k] for the delta-increment.
// Built from cumulants; throws UnsupportedMoment if the moment does not exist.
double moment_at_zero(const CharFnModel &model, double delta, int k);
// Cumulants kappa_1..kappa_k of the delta-increment (index 0 unused).
std::vector<double> cumulants(const CharFnModel &model, double delta, int k);
// Highest finite moment order; -1 for unlimited.
int max_moment_order(const CharFnModel &model);

// R = (-1)^{eta/2} d^eta/du^eta (phi)^delta at 0 for even eta.
double tail_bound_R(const CharFnModel &model, double delta, int eta);

struct ThetaB {
    double theta;
    double B;
    double log_B;   // B may overflow for large theta
    double u_star;  // maximizing frequency
    bool feasible;  // false if the maximum sits on the scan cutoff
};

struct ThetaScanOptions {
    double u_min = 1e-3;
    double u_max = 1e6;
    int points = 1 << 18;
};

// B(theta) = sup_u |(phi(u))^delta| |u / 2pi|^theta over the scan range.
std::vector<ThetaB> estimate_theta_B(const CharFnModel &model, double delta,
                                     const std::vector<double> &theta_grid,
                                     const ThetaScanOptions &opt = {});

// {1, 1.5, ..., 100}
std::vector<double> default_theta_grid();

} // namespace levy
