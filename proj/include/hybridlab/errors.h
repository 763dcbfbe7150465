// Copyright 2026 The hybridlab Authors
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

#ifndef HYBRIDLAB_ERRORS_H
#define HYBRIDLAB_ERRORS_H

#include <stdexcept>
#include <string>

namespace hybridlab {

/// Operand shapes do not fit the operation.
class DimensionError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical precondition failed (non-PSD beyond tolerance, singular fit, ...).
class NumericalError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Bad argument value (weights, probabilities, labels).
class ArgumentError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace hybridlab

#endif
