// Copyright 2026 The cvmbqc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cvmbqc/acceptance.hpp"

#ifndef CVMBQC_GOLDENS_DIR
#define CVMBQC_GOLDENS_DIR "goldens"
#endif

int main(int argc, char **argv) {
    CLI::App app{"Acceptance criteria, one line per criterion"};
    cvmbqc::AcceptanceOptions o;
    std::string goldens = CVMBQC_GOLDENS_DIR;
    app.add_flag("--quick", o.quick, "deterministic-only subset");
    app.add_option("--goldens", goldens, "golden table directory");
    app.add_option("--workers", o.workers, "sampling threads");
    app.add_option("--seed", o.seed, "seed for sampled criteria");
    CLI11_PARSE(app, argc, argv);
    o.goldens = goldens;
    auto rs = cvmbqc::run_acceptance(o, [](const cvmbqc::CriterionResult &r) { std::cout << r.line() << std::endl; });
    bool ok = cvmbqc::all_pass(rs);
    std::cout << (ok ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
    return ok ? 0 : 4;
}
