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

#include <complex>

namespace levy {

struct SpecFunResult {
    double value;
    double est_abs_error;
};

// Gamma function for 0 < x <= 171.6 (Lanczos, g = 7).
double gamma_fn(double x);
double log_gamma(double x);

// Modified Bessel function of the second kind. K_{-nu} = K_nu.
// bessel_k throws an overflow error if the value is not representable;
// log_bessel_k covers the full range.
double bessel_k(double nu, double x);
double log_bessel_k(double nu, double x);
SpecFunResult bessel_k_result(double nu, double x);

// Continuous logarithm of K_nu(z) for Re z > 0. The imaginary part is
// the branch obtained by continuation from the positive real axis.
std::complex<double> log_bessel_k(double nu, std::complex<double> z);

// Hurwitz zeta sum_{k>=0} (k+s)^{-z}, z > 1, s > 0.
double hurwitz_zeta(double z, double s);
SpecFunResult hurwitz_zeta_result(double z, double s);

// Inversion error aggregates; kappa in (0, 2/3), eta > 1.
double v1(double kappa, double eta);
double v2(double kappa, double eta);

} // namespace levy
