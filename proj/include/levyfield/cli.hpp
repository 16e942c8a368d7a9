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
#include "levyfield/errors.hpp"
#include "levyfield/ghmodel.hpp"
#include "levyfield/inversion.hpp"
#include "levyfield/klfield.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace levy::cli {

// GH vector law: explicit marginals, one marginal repeated N times (N = 0
// picks N by truncation_select), or a full parameter record.
struct GhSpec {
    enum class Kind { None, Marginals, Template, Full } kind = Kind::None;
    std::vector<Gh1Params> marginals;
    Gh1Params tmpl{};
    int N = 0;
    std::optional<GhNParams> full;
};

struct RunConfig {
    std::optional<CharFnModel> model;
    GhSpec gh;
    AutoPlanRequest plan; // D, eps, R <= 0 mean "auto"
    int n = 6;            // delta = T 2^-n
    double T = 1.0;
    MaternConfig matern{1.0, 0.1, 1.5};
    int nystrom_m = 256;
    double x_lo = 0.0, x_hi = 1.0;
    int x_points = 101;
    double x_probe = 1.0;
    std::uint64_t stream_index = 0;
    std::vector<int> etas{4, 6, 8, 10};
    std::size_t paths = 1;
    std::size_t fields = 1000;
    int repetitions = 5;
    std::vector<int> levels{4, 5, 6, 7, 8};
    int reference_level = 12;
    bool write_coefficients = false;
    std::uint64_t seed = 2026;
    int threads = 1;
    std::string out = ".";

    double delta() const;
};

// Throws Error(Config) on schema violations.
RunConfig parse_config(const nlohmann::json &j);
RunConfig load_config(const std::string &path);

// 2 for configuration problems, 3 for numeric failures.
int exit_code(const Error &e);

nlohmann::json to_json(const GhNParams &p);
nlohmann::json to_json(const AutoPlan &ap);

// Everything the field commands share for one tail order eta.
struct FieldSetup {
    GhNParams params;
    GigParams gig;
    AutoPlan plan;
    KlBasis basis;
    Truncation trunc;
    double e1 = 0.0;       // L1 subordinator error bound
    double e2 = 0.0;       // squared L2 subordinator error bound
    double c_ell = 0.0;
    double bound_sq = 0.0; // squared field error bound at t = T
    nlohmann::json resolved;
};
FieldSetup field_setup(const RunConfig &cfg, int eta);

struct TableRow {
    int eta = 0;
    FieldSetup setup;
    double ks_gh = -1.0;  // p-value of the field at (x_probe, T); -1 if not run
    double ks_gig = -1.0; // p-value of the subordinator at T
    double seconds = 0.0; // median wall time per field
};
TableRow table_row(const RunConfig &cfg, int eta);

// Each command writes its files under cfg.out and returns a report holding
// every resolved "auto" value.
nlohmann::json cmd_plan(const RunConfig &cfg);
nlohmann::json cmd_sample_process(const RunConfig &cfg);
nlohmann::json cmd_sample_field(const RunConfig &cfg);
nlohmann::json cmd_tables(const RunConfig &cfg);
nlohmann::json cmd_convergence(const RunConfig &cfg);
nlohmann::json cmd_decorrelate(const RunConfig &cfg);

} // namespace levy::cli
