// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace tevem {

// Base class for all tevem failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid user input: bad flags, malformed config, inconsistent parameters.
struct ConfigError : Error {
    using Error::Error;
};

// Mesh construction, parsing, or validation failure.
struct MeshError : Error {
    using Error::Error;
};

// Eigensolver failure: factorization breakdown, non-convergence, degenerate pencil.
struct SolverError : Error {
    using Error::Error;
};

} // namespace tevem
