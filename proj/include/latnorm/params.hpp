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

#ifndef LATNORM_PARAMS_HPP
#define LATNORM_PARAMS_HPP

#include <Eigen/Dense>

namespace latnorm {

// Natural parameter xi = (xi1, xi2) of a discrete normal. The density on
// the lattice is proportional to exp(2*pi*(-0.5*l'*xi2*l + l'*xi1)),
// so xi1 is a d-vector and xi2 a symmetric positive-definite d x d matrix.
struct NaturalParam {
    Eigen::VectorXd xi1;
    Eigen::MatrixXd xi2;

    int dim() const { return static_cast<int>(xi1.size()); }
};

// Mean/covariance pair (mu, sigma), sigma symmetric positive-definite.
struct OrdinaryParam {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;

    int dim() const { return static_cast<int>(mu.size()); }
};

// Moment (dual/expectation) parameter eta = E[t(x)] with
// t(x) = (2*pi*x, -pi*x*x'), i.e. eta1 = 2*pi*mu, eta2 = -pi*(sigma + mu*mu').
struct MomentParam {
    Eigen::VectorXd eta1;
    Eigen::MatrixXd eta2;

    int dim() const { return static_cast<int>(eta1.size()); }
};

// Sufficient statistic t(x) = (2*pi*x, -pi*x*x').
struct SufficientStat {
    Eigen::VectorXd t1;
    Eigen::MatrixXd t2;
};

SufficientStat sufficient_stat(const Eigen::VectorXd& x);

// Compound inner product <(a1,A2),(b1,B2)> = a1'b1 + tr(A2*B2) for
// symmetric A2, B2. Satisfies <xi, t(x)> = 2*pi*(-0.5*x'*xi2*x + x'*xi1).
double pair_inner(const Eigen::VectorXd& a1, const Eigen::MatrixXd& A2,
                  const Eigen::VectorXd& b1, const Eigen::MatrixXd& B2);

// Throws ValidationError unless xi has matching dims, xi2 symmetric within
// sym_tol and positive definite. Symmetrizes xi2 in place.
void validate_natural(NaturalParam& xi, double sym_tol = 1e-12);

// True if xi2 (assumed symmetric) is positive definite.
bool in_cone(const NaturalParam& xi);

// Throws DomainError when a derived combination leaves the cone.
void require_in_cone(const NaturalParam& xi, const char* what);

MomentParam moment_from_ordinary(const OrdinaryParam& p);

// Inverts eta -> (mu, sigma). Throws DegenerateSample when the recovered
// sigma is not positive definite (the moment point is not attainable).
OrdinaryParam ordinary_from_moment(const MomentParam& eta);

// Natural parameter of the *continuous* N(mu, sigma) written in this
// family's scaling: (sigma^{-1} mu / (2*pi), sigma^{-1} / (2*pi)).
// Used as the Newton initializer.
NaturalParam continuous_natural_from_moments(const OrdinaryParam& p);

// Standard parameter ((0,...,0), kStdXi2 * I).
inline constexpr double kStdXi2 = 0.1591549;
NaturalParam std_natural(int d);

// --- reduced (vectorized) coordinates used by the moment-matching solver.
//
// Layout: [xi1 (d); diag(xi2) (d); xi2_ij for i<j (d(d-1)/2)], total
// D = d(d+3)/2. The matching reduced statistic is
// T(x) = [2*pi*x; -pi*x_i^2; -2*pi*x_i*x_j], so <reduce(xi), T(x)> equals
// pair_inner(xi, t(x)) and E[T] = reduce_dual(eta).
int reduced_dim(int d);
Eigen::VectorXd reduce_natural(const NaturalParam& xi);
NaturalParam unreduce_natural(const Eigen::VectorXd& v, int d);
Eigen::VectorXd reduce_dual(const MomentParam& eta);
MomentParam unreduce_dual(const Eigen::VectorXd& v, int d);
Eigen::VectorXd reduced_stat(const Eigen::VectorXd& x);

// Augmented coordinates (psi0, psi_rest) with psi0 pinned to the
// log-partition value and psi_rest = -reduce_natural(xi); the solver's
// bookkeeping representation.
struct AugmentedNatural {
    double psi0 = 0.0;
    Eigen::VectorXd psi_rest;
    int d = 0;

    static AugmentedNatural from_natural(const NaturalParam& xi, double log_part);
    NaturalParam to_natural() const;
};

}  // namespace latnorm

#endif  // LATNORM_PARAMS_HPP
