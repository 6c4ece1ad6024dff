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

#include "latnorm/lattice.hpp"

#include <cmath>
#include <string>

#include "latnorm/errors.hpp"

namespace latnorm {

Lattice::Lattice(Eigen::MatrixXd basis, Eigen::VectorXd shift)
    : basis_(std::move(basis)), shift_(std::move(shift)) {
    if (basis_.rows() == 0 || basis_.rows() != basis_.cols()) {
        throw ValidationError("lattice basis must be a nonempty square matrix");
    }
    if (shift_.size() != basis_.rows()) {
        throw ValidationError("lattice shift dimension does not match basis");
    }
    lu_ = Eigen::PartialPivLU<Eigen::MatrixXd>(basis_);
    const double det = std::abs(lu_.determinant());
    if (!(det > 1e-12)) {
        throw ValidationError("lattice basis is singular (|det| = " +
                              std::to_string(det) + ")");
    }
    is_integer_ = basis_.isIdentity(0.0) && shift_.isZero(0.0);
}

Lattice Lattice::integer(int d) {
    return Lattice(Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Zero(d));
}

Eigen::VectorXd Lattice::point(const Eigen::VectorXd& z) const {
    if (is_integer_) return z;
    return basis_ * z + shift_;
}

Eigen::VectorXd Lattice::coords(const Eigen::VectorXd& l) const {
    if (is_integer_) return l;
    return lu_.solve(l - shift_);
}

bool Lattice::contains(const Eigen::VectorXd& l, Eigen::VectorXd* z_out,
                       double tol) const {
    if (l.size() != basis_.rows()) return false;
    Eigen::VectorXd z = coords(l);
    Eigen::VectorXd zr = z.array().round();
    if ((z - zr).lpNorm<Eigen::Infinity>() > tol) return false;
    if (z_out) *z_out = zr;
    return true;
}

}  // namespace latnorm
