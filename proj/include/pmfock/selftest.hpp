// Copyright 2026 The pmfock Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pmfock {

struct SuiteResult {
    std::string name;
    bool passed = true;
    int checks = 0;
    std::vector<std::string> failures;  // first few only
};

struct SelftestOptions {
    std::uint64_t seed = 20260101;
    /// Build the dSD suites with the mirrored Hadamard sign.
    bool inject_fault = false;
};

struct SelftestResult {
    std::vector<SuiteResult> suites;

    bool passed() const;
};

SelftestResult run_selftest(const SelftestOptions &options = {});

}  // namespace pmfock
