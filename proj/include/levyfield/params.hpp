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

namespace levy {

// Generalized inverse Gaussian law GIG(a, b, p).
struct GigParams {
    double a;
    double b;
    double p;
};

// One-dimensional generalized hyperbolic law GH(lambda, alpha, beta, delta, mu).
struct Gh1Params {
    double lambda;
    double alpha;
    double beta;
    double delta;
    double mu;
};

// Checked constructors; throw Error(Domain) on inadmissible values.
GigParams make_gig(double a, double b, double p);
Gh1Params make_gh1(double lambda, double alpha, double beta, double delta, double mu);

} // namespace levy
