// Copyright 2026 The qfid Authors
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
#include <iosfwd>
#include <string>
#include <vector>

namespace qfid {

struct Check {
    std::string suite;
    std::string name;
    bool pass = false;
    std::string detail;  // measured quantities
};

/// Suite names accepted by run_verify, besides "all".
const std::vector<std::string>& verify_suites();

/// Runs one suite, or every suite for "all". Throws UnknownSuite.
std::vector<Check> run_verify(const std::string& suite, std::uint64_t seed = 2026);

/// One line per check; returns true when all passed.
bool print_checks(const std::vector<Check>& checks, std::ostream& out);

}  // namespace qfid
