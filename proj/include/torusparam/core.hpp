// Copyright 2026 The torusparam Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace torusparam {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;

/// Index triple of a triangle, counterclockwise.
using Face = std::array<int, 3>;

/// Integer coefficient pair (m, n) standing for m * v1 + n * v2.
using LatticeCoeff = std::array<std::int64_t, 2>;

/** @brief Base class of every error raised by the library */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/** @brief Malformed input file */
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/** @brief Mesh connectivity or topology is not what an operation requires */
class TopologyError : public Error {
 public:
  using Error::Error;
};

/** @brief Invalid argument combination (marks, permutations, options) */
class ConfigError : public Error {
 public:
  using Error::Error;
};

/** @brief Linear solve failed */
class SolverError : public Error {
 public:
  using Error::Error;
};

inline double cross2(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

inline Mat2 rotation2(double angle) {
  Mat2 r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

inline double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * cross2(b - a, c - a);
}

}  // namespace torusparam
