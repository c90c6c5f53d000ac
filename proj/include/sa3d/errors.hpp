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

#pragma once

#include <stdexcept>
#include <string>

namespace sa3d {

/// Bad argument: unknown label, negative rate, violated precondition.
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Linear combination collapsed to the zero vector.
class degenerate_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Eigenbasis undefined because the relevant norm (Omega or Omega') vanished.
class frame_degenerate : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class bracket_exhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sa3d
