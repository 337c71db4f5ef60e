// Copyright 2026 The fqdrl Authors.
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

namespace fqdrl {

/// Invalid configuration: bad file, bad field value, inconsistent shapes
/// declared up front. CLI exit code 1.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// API misuse: out-of-range index, wrong vector length, step after done.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Filesystem failure detected before or during a run. CLI exit code 2.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Training produced a non-finite loss; the run aborts with a diagnostic
/// naming the agent and episode. CLI exit code 2.
class DivergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace fqdrl
