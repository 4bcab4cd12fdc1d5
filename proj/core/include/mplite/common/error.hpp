// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace mplite {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected configuration, missing inputs, malformed input files, or
// mismatched artifacts. The CLI maps these to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed rows in an input table or a corrupt checkpoint.
class DataError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Non-finite values during training or gradient updates.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace mplite
