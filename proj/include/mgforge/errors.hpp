// Copyright 2026 The mgforge developers
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

namespace mgforge {

/// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input failed validation (non-unitary matrix, non-finite entries,
/// out-of-range parameter, malformed structure).
struct ValidationError : Error {
  using Error::Error;
};

/// A domain constraint was violated (e.g. matchgate determinant mismatch).
struct ConstraintError : Error {
  using Error::Error;
};

/// Unknown gate or symbol name.
struct UnknownNameError : Error {
  using Error::Error;
};

/// Malformed JSON or file content.
struct ParseError : Error {
  using Error::Error;
};

/// Internal numerical assertion failed; indicates a convention bug.
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace mgforge
