// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace storelens {

/// Base class for all storelens errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid topology or scenario specification.
struct SpecError : Error {
    using Error::Error;
};

/// Data-server count cannot be arranged into HA pairs.
struct PairingError : SpecError {
    using SpecError::SpecError;
};

/// A referenced component does not exist.
struct NotFoundError : Error {
    using Error::Error;
};

/// Inconsistent configuration (mismatched topology, bad window, ...).
struct ConfigError : Error {
    using Error::Error;
};

/// Monitor budget cannot satisfy the identifiability requirement.
struct InfeasibleError : Error {
    using Error::Error;
};

/// Too few points for the requested neighborhood size.
struct InsufficientDataError : Error {
    using Error::Error;
};

/// A report was requested over a window with no records.
struct EmptyWindowError : Error {
    using Error::Error;
};

}  // namespace storelens
