// Copyright 2026 The kcgame Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace kcg {

// Common base so callers can catch everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LevelTooLow final : Error {
  using Error::Error;
};

struct DepthExceeded final : Error {
  using Error::Error;
};

struct KraftExceeded final : Error {
  using Error::Error;
};

// Game rule violations raised when an enumeration event is rejected.
struct NotAllowed final : Error {
  using Error::Error;
};

struct PrefixConflict final : Error {
  using Error::Error;
};

struct Redefined final : Error {
  using Error::Error;
};

struct AlreadyFired final : Error {
  using Error::Error;
};

struct BudgetExceeded final : Error {
  using Error::Error;
};

struct NotFired final : Error {
  using Error::Error;
};

struct ParseError final : Error {
  using Error::Error;
};

}  // namespace kcg
