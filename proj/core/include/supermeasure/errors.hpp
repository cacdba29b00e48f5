// Copyright 2026 The Supermeasure Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUPERMEASURE_ERRORS_HPP_
#define SUPERMEASURE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace supermeasure {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input outside the domain an operation is defined on (mismatched spaces,
// malformed vectors, values out of range).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Density with zero or non-finite total mass, or a density/measure pair
// whose integral is not 1 where a normalized pair is required.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

// Conditioning on an event of probability zero.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

// A sample was requested from an empty space (n = 0).
class EmptySpaceError : public Error {
 public:
  using Error::Error;
};

// Not enough data to run a statistical procedure.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Quantum state vector violates its invariants (wrong norm, non-finite).
class StateError : public Error {
 public:
  using Error::Error;
};

// Model weights violate their invariants.
class ModelError : public Error {
 public:
  using Error::Error;
};

// A hidden-variable draw was asked for the outcome of a measurement
// setting it was never physical for.
class CounterfactualError : public Error {
 public:
  using Error::Error;
};

// The four ensembles handed to a CHSH estimator do not cover the four
// setting pairs exactly once.
class EnsembleSetError : public Error {
 public:
  using Error::Error;
};

// Chi-square cell with expected count below the validity threshold.
class SparseCellError : public Error {
 public:
  using Error::Error;
};

// Numerical integration produced a non-finite state.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Invalid or incomplete experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace supermeasure

#endif  // SUPERMEASURE_ERRORS_HPP_
