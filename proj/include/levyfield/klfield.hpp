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

#include "levyfield/ghmodel.hpp"
#include "levyfield/inversion.hpp"
#include "levyfield/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace levy {

struct MaternConfig {
    double v = 1.0;   // variance
    double r = 0.1;   // correlation length
    double chi = 0.5; // smoothness
};

MaternConfig make_matern(double v, double r, double chi);

// Unscaled Matern kernel, k(x, x) = 1.
double matern_kernel(double x, double y, const MaternConfig &cfg);

struct KlBasis {
    MaternConfig cfg;
    double x_lo = 0.0, x_hi = 1.0;
    double trace = 1.0;          // tr(Q) = v |D|
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
    Eigen::VectorXd rho;         // nonincreasing, >= 0
    Eigen::MatrixXd evecs;       // column i holds e_i at the nodes
};

// Midpoint-rule Nystrom discretization of Q on [x_lo, x_hi] with m nodes.
KlBasis nystrom_eigs(const MaternConfig &cfg, double x_lo, double x_hi, int m);

// e_i(x) by Nystrom interpolation (0-based i).
double nystrom_interp(const KlBasis &basis, int i, double x);

// sqrt(rho_i) e_i(x) for i < N; one row per mode, one column per x.
Eigen::MatrixXd phi_matrix(const KlBasis &basis, int N, const std::vector<double> &x);

struct CEll {
    std::vector<double> per_mode;
    double c_ell = 0.0;
};

// C~_i = (e2 (gamma beta)_i^2 + e1 |gamma row i|) / delta, C_l = max_i.
CEll c_ell_constants(double e1, double e2, const GhNParams &params, double delta);
// Same constants for marginals rescaled to unit variance at t = 1.
CEll c_ell_normalized(double e1, double e2, const GhNParams &params, double delta);

struct Truncation {
    int N = 0;
    bool capped = false; // crossing only at the full basis size
};

// Smallest N with T (tr Q - sum_{i<=N} rho_i) <= c_ell delta sum_{i<=N} rho_i.
Truncation truncation_select(const KlBasis &basis, double c_ell, double delta, double T);

// (T tail)^{1/2} + (c_ell delta sum_{i<=N} rho_i)^{1/2}
double field_error_bound(const KlBasis &basis, int N, double c_ell, double delta, double T);

struct FieldSample {
    std::vector<double> x;
    std::vector<double> t;
    Eigen::MatrixXd values; // |x| x |t|
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;
    int N = 0;
    double delta = 0.0;
    GhNParams params;
    std::size_t rectified = 0; // GIG increments clipped at 0
};

// One GH_N path on the 2^n grid of [0, T]. The GIG subordinator is drawn
// by inversion with gig_plan; marginals are scaled to unit variance at
// t = 1. Returns (2^n + 1) x N cumulative values.
Eigen::MatrixXd sample_normalized_ghn(const GhNParams &params, const InversionPlan &gig_plan,
                                      int n, double T, RngStream &stream,
                                      std::size_t *rectified = nullptr);

// Field sample sum_i phi_i(x) l_i(t) with precomputed phi (see phi_matrix).
FieldSample assemble_field(const Eigen::MatrixXd &phi, const std::vector<double> &x_grid,
                           const GhNParams &params, const InversionPlan &gig_plan, int n,
                           double T, RngStream stream);
FieldSample assemble_field(const KlBasis &basis, int N, const GhNParams &params,
                           const InversionPlan &gig_plan, int n, double T,
                           const std::vector<double> &x_grid, RngStream stream);

// CSV: header row "x" followed by t values; one row per x.
void write_field_csv(const FieldSample &f, std::ostream &os);
void write_field_meta_json(const FieldSample &f, std::ostream &os);

} // namespace levy
