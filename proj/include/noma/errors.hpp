// Copyright 2026 The noma-alloc Authors
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
#include <vector>

namespace noma {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or malformed instance (bad shape, non-positive CNR, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Matrix or assignment dimensions do not satisfy N = 2M.
class ShapeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// The instance admits no SIC-stable / QoS-feasible allocation.
// `channels` lists the offending channel indices (empty when the violation
// is aggregate, e.g. a power budget below the sum of floors).
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, std::vector<int> channels = {},
                  double required = 0.0)
      : Error(what), channels_(std::move(channels)), required_(required) {}

  const std::vector<int>& channels() const { return channels_; }
  // Aggregate power the violated condition needs (sum of floors), or 0.
  double required() const { return required_; }

 private:
  std::vector<int> channels_;
  double required_;
};

}  // namespace noma
