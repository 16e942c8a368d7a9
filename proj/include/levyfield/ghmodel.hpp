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
#include "levyfield/rng.hpp"
#include "levyfield/sampler.hpp"

#include <Eigen/Dense>

#include <vector>

namespace levy {

// N-dimensional GH law; gamma is symmetric positive definite with det 1.
struct GhNParams {
    int n = 1;
    double lambda = 0.0;
    double alpha = 1.0;
    double delta = 1.0;
    Eigen::VectorXd beta;
    Eigen::VectorXd mu;
    Eigen::MatrixXd gamma;
};

// Validates the record. A gamma with det != 1 is rescaled to unit
// determinant (gamma / s, delta sqrt(s), alpha / sqrt(s) with s = det^{1/n}),
// which leaves the law unchanged; strict = true rejects it instead.
GhNParams make_ghn(double lambda, double alpha, const Eigen::VectorXd &beta, double delta,
                   const Eigen::VectorXd &mu, const Eigen::MatrixXd &gamma, bool strict = false);

// alpha^2 - beta' gamma beta
double gamma_bar_sq(const GhNParams &p);

double gig_density(const GigParams &p, double x);
double log_gig_density(const GigParams &p, double x);
double gh1_density(const Gh1Params &p, double x);
double log_gh1_density(const Gh1Params &p, double x);
double ghn_density(const GhNParams &p, const Eigen::VectorXd &x);

// GIG(delta, sqrt(alpha^2 - beta' gamma beta), lambda).
GigParams subordinator_of(const GhNParams &p);

// GH_N increments mu dt + gamma beta dG + sqrt(dG) chol(gamma) z along a
// subordinator path; one row per time step.
Eigen::MatrixXd subordinate(const GhNParams &p, const PathSkeleton &gig_path, RngStream &normals);

// Law of coordinate i (0-based).
Gh1Params marginal(const GhNParams &p, int i);

// GH_N law with the given marginals and zero cross-covariance.
GhNParams decorrelate(const std::vector<Gh1Params> &marginals);

Eigen::VectorXd gh_mean(const GhNParams &p);
Eigen::MatrixXd gh_cov(const GhNParams &p);

// Law of sum_i c_i X_i. Zero coefficients are dropped first.
Gh1Params point_law(const GhNParams &p, const Eigen::VectorXd &coeffs);

// Sub-vector law for the given coordinate indices.
GhNParams sub_law(const GhNParams &p, const std::vector<int> &idx);

} // namespace levy
