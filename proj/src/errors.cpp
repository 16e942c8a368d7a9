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

#include "levyfield/errors.hpp"

#include <sstream>

namespace levy {

const char *to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::UnsupportedMoment: return "unsupported-moment";
    case ErrorKind::NumericFailure: return "numeric-failure";
    case ErrorKind::PlanTooLarge: return "plan-too-large";
    case ErrorKind::InfeasibleOrder: return "infeasible-order";
    case ErrorKind::IncompatibleShape: return "incompatible-shape";
    case ErrorKind::IncompatibleScale: return "incompatible-scale";
    case ErrorKind::InfeasibleDecorrelation: return "infeasible-decorrelation";
    case ErrorKind::DegenerateCombination: return "degenerate-combination";
    case ErrorKind::InvalidSubordinator: return "invalid-subordinator";
    case ErrorKind::DegenerateMode: return "degenerate-mode";
    case ErrorKind::Config: return "config";
    }
    return "unknown";
}

static std::string too_large_message(double M, double cap)
{
    std::ostringstream os;
    os << "plan requires M = " << M << " coefficients, cap is " << cap;
    return os.str();
}

PlanTooLarge::PlanTooLarge(double requested_M, double cap)
    : Error(ErrorKind::PlanTooLarge, too_large_message(requested_M, cap)),
      requested_M_(requested_M)
{
}

void fail(ErrorKind kind, const std::string &what)
{
    throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

} // namespace levy
