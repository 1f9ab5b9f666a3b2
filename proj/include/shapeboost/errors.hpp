// Copyright 2026 The shapeboost Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace shapeboost {

/// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad files, schema violations, inconsistent dimensions.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Geometric failure tied to a particular curve (alignment or domain issues).
class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string& what, std::string curve_id = {})
      : Error(curve_id.empty() ? what : what + " (curve '" + curve_id + "')"),
        curve_id_(std::move(curve_id)) {}

  const std::string& curve_id() const { return curve_id_; }

 private:
  std::string curve_id_;
};

/// |<y, p>| vanishes after centering, so no unique rotation alignment exists.
class DegenerateAlignment : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Transport between antipodal representatives is undefined.
class AntipodalTransport : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// A vector handed in as a tangent vector violates the tangent constraints.
class NotTangent : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Argument outside the domain of a map (e.g. shape Exp beyond the cut locus).
class OutOfDomain : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Non-finite values or failed factorizations during fitting.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace shapeboost
