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

double normal_cdf(double x);
double normal_quantile(double u);
// log Phi(x), accurate far into the lower tail.
double log_normal_cdf(double x);

// Inverse Gaussian IG(a, b): mean a / b, shape a^2.
double ig_cdf(double a, double b, double x);
double ig_quantile(double a, double b, double u);
// Michael-Schucany-Haas transform of a standard normal z and a uniform u.
double ig_from_normal(double a, double b, double z, double u);

} // namespace levy
