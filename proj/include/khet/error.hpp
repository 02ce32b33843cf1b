// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace khet {

enum class ErrorCode {
  invalid_argument = 1,
  dimension,
  cluster_violation,
  invalid_fat_set,
  unsupported,
  no_linkage,
  classification_inconsistency,
  divergence,
  non_convergence,
  wrong_basin,
  ordering_violation,
  unconstructible,
  invalid_vertex,
  io,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// C layer can map it onto a status value without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace khet
