// Copyright 2026 The sa3d Authors
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

#include "sa3d/config.hpp"
#include "sa3d/runner.hpp"

int main(int argc, char** argv) {
    if (argc < 2 || std::string_view(argv[1]) == "--help" || std::string_view(argv[1]) == "-h") {
        std::cout << "usage: sa3d <experiment> [--config FILE] [--key value ...] [--check]\n"
                     "experiments: pulses evolve scan-g-omega0 scan-deviations scan-decoherence speedup rb-point "
                     "validate\n";
        return argc < 2 ? sa3d::kExitUsage : sa3d::kExitOk;
    }
    try {
        const sa3d::RunConfig cfg = sa3d::parse_config(argc, argv);
        return sa3d::run(cfg);
    } catch (const sa3d::usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return sa3d::kExitUsage;
    }
}
