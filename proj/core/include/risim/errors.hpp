// SPDX-License-Identifier: Apache-2.0
//
// risim — RIS-assisted radar and communication coexistence simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace risim {

// Degenerate numerical input (zero vector, empty PDP, coincident points, ...).
class degenerate_input : public std::invalid_argument {
  public:
    explicit degenerate_input(const std::string &msg) : std::invalid_argument(msg) {}
};

// Geometrically impossible request (point behind the aperture, observation on
// an element, target on a phase center).
class geometry_error : public std::invalid_argument {
  public:
    explicit geometry_error(const std::string &msg) : std::invalid_argument(msg) {}
};

// Inconsistent or incomplete configuration (missing CIF parameters, mismatched
// carrier wavelengths, absent codebook).
class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string &msg) : std::runtime_error(msg) {}
};

// An estimator failed to produce a result (rank-deficient regression,
// non-converged nonlinear fit, unidentifiable parameter).
class estimation_error : public std::runtime_error {
  public:
    explicit estimation_error(const std::string &msg) : std::runtime_error(msg) {}
};

// Numerical failure inside an otherwise valid computation (singular FIM,
// covariance losing positive semidefiniteness).
class numerical_error : public std::runtime_error {
  public:
    explicit numerical_error(const std::string &msg) : std::runtime_error(msg) {}
};

// File system / parse failure at the tool boundary.
class io_error : public std::runtime_error {
  public:
    explicit io_error(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace risim
