// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace dses {

// A transition map produced a non-finite state (overflow of a diverging
// trajectory, typically).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Every trajectory of an ensemble diverged before the final step.
struct AllDivergedError : std::runtime_error {
  explicit AllDivergedError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent experiment configuration.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dses
