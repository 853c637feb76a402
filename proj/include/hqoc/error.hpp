// Copyright 2026 The hqoc Authors
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

namespace hqoc {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: malformed files, inconsistent dimensions, bad options.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside an operation's domain (e.g. t outside [0, T]).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, failed decompositions, diverging integrations.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed circuits: qubit indices out of range, repeated qubits.
class CircuitError : public Error {
 public:
  using Error::Error;
};

/// A simulation would exceed the supported register size.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on an object in the wrong state.
class StateError : public Error {
 public:
  using Error::Error;
};

}  // namespace hqoc
