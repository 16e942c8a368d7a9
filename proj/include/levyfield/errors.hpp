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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace levy {

enum class ErrorKind {
    Domain,
    UnsupportedMoment,
    NumericFailure,
    PlanTooLarge,
    InfeasibleOrder,
    IncompatibleShape,
    IncompatibleScale,
    InfeasibleDecorrelation,
    DegenerateCombination,
    InvalidSubordinator,
    DegenerateMode,
    Config
};

const char *to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(what), kind_(kind)
    {
    }

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

class PlanTooLarge : public Error {
public:
    PlanTooLarge(double requested_M, double cap);

    double requested_M() const { return requested_M_; }

private:
    double requested_M_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string &what);

} // namespace levy
