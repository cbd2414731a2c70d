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

#include <limits>

#include "torusparam/core.hpp"

namespace torusparam {

/** @brief Rank-2 lattice in the plane, generated by v1 and v2 */
class Lattice {
 public:
  Lattice() : Lattice(Vec2(1, 0), Vec2(0, 1)) {}
  Lattice(const Vec2& v1, const Vec2& v2) {
    basis_.col(0) = v1;
    basis_.col(1) = v2;
    if (std::abs(basis_.determinant()) <= 1e-300) {
      throw ConfigError("lattice generators are linearly dependent");
    }
    inverse_ = basis_.inverse();
  }

  static Lattice unit_square() { return {Vec2(1, 0), Vec2(0, 1)}; }
  static Lattice rectangle(double w, double h) {
    return {Vec2(w, 0), Vec2(0, h)};
  }
  /// Rhombus with 60 and 120 degree angles.
  static Lattice rhombic() {
    return {Vec2(1, 0), Vec2(0.5, std::sqrt(3.0) / 2.0)};
  }

  Vec2 v1() const { return basis_.col(0); }
  Vec2 v2() const { return basis_.col(1); }
  const Mat2& basis() const { return basis_; }
  double det() const { return basis_.determinant(); }
  double area() const { return std::abs(det()); }

  Vec2 at(const LatticeCoeff& c) const {
    return static_cast<double>(c[0]) * v1() + static_cast<double>(c[1]) * v2();
  }
  /// Real coefficients of p in the basis.
  Vec2 coords(const Vec2& p) const { return inverse_ * p; }

  /// Nearest integer coefficients of p, and whether p is a lattice point to
  /// within `tol` (in coefficient units).
  LatticeCoeff round(const Vec2& p, bool* exact = nullptr,
                     double tol = 1e-7) const {
    const Vec2 c = coords(p);
    const LatticeCoeff r{std::llround(c.x()), std::llround(c.y())};
    if (exact) {
      *exact = std::abs(c.x() - static_cast<double>(r[0])) < tol &&
               std::abs(c.y() - static_cast<double>(r[1])) < tol;
    }
    return r;
  }

  /// Integer coefficients of the translate taking p into the half-open
  /// fundamental parallelogram [0,1)^2.
  LatticeCoeff floor(const Vec2& p) const {
    const Vec2 c = coords(p);
    return {static_cast<std::int64_t>(std::floor(c.x() + 1e-12)),
            static_cast<std::int64_t>(std::floor(c.y() + 1e-12))};
  }

  Vec2 reduce(const Vec2& p) const { return p - at(floor(p)); }

  /// Distance in the flat torus: nearest of the 9 translates around the
  /// reduced difference.
  double mod_distance(const Vec2& a, const Vec2& b) const {
    const Vec2 c = coords(b - a);
    const Vec2 frac(c.x() - std::round(c.x()), c.y() - std::round(c.y()));
    const Vec2 d = basis_ * frac;
    double best = std::numeric_limits<double>::infinity();
    for (int i = -1; i <= 1; ++i) {
      for (int j = -1; j <= 1; ++j) {
        best = std::min(best, (d + i * v1() + j * v2()).norm());
      }
    }
    return best;
  }

  Lattice scaled(double s) const { return {s * v1(), s * v2()}; }

 private:
  Mat2 basis_;
  Mat2 inverse_;
};

}  // namespace torusparam
