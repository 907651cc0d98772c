// Copyright 2026 The qrac Authors
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

namespace qrac {

// Base for every failure raised by the library. Subclasses name the
// protocol-level condition; `kind()` is what the CLI prints.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char *kind() const noexcept { return "Error"; }
};

#define QRAC_DEFINE_ERROR(Name, Base)                                  \
  class Name : public Base {                                           \
   public:                                                             \
    using Base::Base;                                                  \
    const char *kind() const noexcept override { return #Name; }       \
  };

// Numeric and domain failures (CLI exit code 2).
QRAC_DEFINE_ERROR(DomainError, Error)
QRAC_DEFINE_ERROR(NotHermitian, Error)
QRAC_DEFINE_ERROR(NotNormalized, Error)
QRAC_DEFINE_ERROR(OutsideBlochBall, Error)
QRAC_DEFINE_ERROR(InvalidState, Error)
QRAC_DEFINE_ERROR(InvalidChannel, Error)
QRAC_DEFINE_ERROR(NotTracePreserving, Error)
QRAC_DEFINE_ERROR(FilterAnnihilatesState, Error)
QRAC_DEFINE_ERROR(MissingEntry, Error)
QRAC_DEFINE_ERROR(NoSignChange, Error)
QRAC_DEFINE_ERROR(ConvergenceError, Error)
QRAC_DEFINE_ERROR(TooManyDiscards, Error)
QRAC_DEFINE_ERROR(MissingCell, Error)
QRAC_DEFINE_ERROR(DuplicateCell, Error)
QRAC_DEFINE_ERROR(EmptyCell, Error)

// Command-line and file-schema failures (exit code 1).
QRAC_DEFINE_ERROR(UsageError, Error)
QRAC_DEFINE_ERROR(SchemaError, Error)

// Filesystem failures (exit code 3).
QRAC_DEFINE_ERROR(IoError, Error)

#undef QRAC_DEFINE_ERROR

}  // namespace qrac
