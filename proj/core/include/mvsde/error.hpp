// Copyright 2026 The mvsde Authors.
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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mvsde {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnequalSupportSize : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class AssignmentTooLarge : public Error {
 public:
  using Error::Error;
};

class NonpositiveParameter : public Error {
 public:
  using Error::Error;
};

class BadClipWindow : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A particle coordinate became NaN or infinite during propagation.
class NonFiniteState : public Error {
 public:
  NonFiniteState(std::size_t particle, std::uint64_t step, double time);

  std::size_t particle() const noexcept { return particle_; }
  std::uint64_t step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t particle_;
  std::uint64_t step_;
  double time_;
};

class EmptyWindow : public Error {
 public:
  using Error::Error;
};

class NonpositiveMoment : public Error {
 public:
  using Error::Error;
};

/// Coupled trajectories never separate, so there is no decay to fit.
class EmptyDecay : public Error {
 public:
  using Error::Error;
};

class UnknownBundle : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace mvsde
