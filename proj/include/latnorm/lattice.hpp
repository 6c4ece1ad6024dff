// Copyright 2026 The latnorm authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LATNORM_LATTICE_HPP
#define LATNORM_LATTICE_HPP

#include <Eigen/Dense>
#include <cstdint>

namespace latnorm {

// Full-rank affine lattice Lambda = basis * Z^d + shift.
class Lattice {
  public:
    // Throws ValidationError if basis is not square/invertible or the
    // shift dimension does not match.
    Lattice(Eigen::MatrixXd basis, Eigen::VectorXd shift);

    // The integer lattice Z^d.
    static Lattice integer(int d);

    int dim() const { return static_cast<int>(basis_.rows()); }
    const Eigen::MatrixXd& basis() const { return basis_; }
    const Eigen::VectorXd& shift() const { return shift_; }
    bool is_integer() const { return is_integer_; }

    // Lattice point for an integer coordinate vector z.
    Eigen::VectorXd point(const Eigen::VectorXd& z) const;

    // Integer coordinates of a lattice point: basis^{-1} (l - shift).
    Eigen::VectorXd coords(const Eigen::VectorXd& l) const;

    // Whether l lies on the lattice within tolerance (coords close to
    // integers). On success z_out (if non-null) receives the rounded
    // integer coordinates.
    bool contains(const Eigen::VectorXd& l, Eigen::VectorXd* z_out = nullptr,
                  double tol = 1e-9) const;

  private:
    Eigen::MatrixXd basis_;
    Eigen::VectorXd shift_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    bool is_integer_ = false;
};

}  // namespace latnorm

#endif  // LATNORM_LATTICE_HPP
