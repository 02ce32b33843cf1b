// Copyright 2026 The khet Authors
// SPDX-License-Identifier: Apache-2.0

#include "khet/error.hpp"

namespace khet {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::dimension: return "dimension";
    case ErrorCode::cluster_violation: return "cluster-violation";
    case ErrorCode::invalid_fat_set: return "invalid-fat-set";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::no_linkage: return "no-linkage";
    case ErrorCode::classification_inconsistency:
      return "classification-inconsistency";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::non_convergence: return "non-convergence";
    case ErrorCode::wrong_basin: return "wrong-basin";
    case ErrorCode::ordering_violation: return "ordering-violation";
    case ErrorCode::unconstructible: return "unconstructible";
    case ErrorCode::invalid_vertex: return "invalid-vertex";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace khet
