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

#ifndef LATNORM_EF_MODEL_HPP
#define LATNORM_EF_MODEL_HPP

#include <optional>

#include "latnorm/lattice.hpp"
#include "latnorm/params.hpp"
#include "latnorm/theta.hpp"

namespace latnorm {

// Exponent of the unnormalized mass at l: 2*pi*(-0.5*l'*xi2*l + l'*xi1).
double log_unnormalized_pmf(const NaturalParam& xi, const Eigen::VectorXd& l);

// Normalized probability of the lattice point l. Throws ValidationError
// when l is not on the lattice.
double pmf(const NaturalParam& xi, const Eigen::VectorXd& l, const Lattice& lat,
           const TruncationSpec& spec = {});
double pmf(const NaturalParam& xi, const Eigen::VectorXd& l,
           const TruncationSpec& spec = {});

// Moment parameter eta(xi) = E[t(x)] by direct weighted summation over the
// truncation window (an independent accumulation from the theta-gradient
// route; the two are asserted equal in tests).
MomentParam moments_from_natural(const NaturalParam& xi, const Lattice& lat,
                                 const TruncationSpec& spec = {});
MomentParam moments_from_natural(const NaturalParam& xi,
                                 const TruncationSpec& spec = {});

// Mean and covariance of the distribution.
OrdinaryParam ordinary_from_natural(const NaturalParam& xi, const Lattice& lat,
                                    const TruncationSpec& spec = {});
OrdinaryParam ordinary_from_natural(const NaturalParam& xi,
                                    const TruncationSpec& spec = {});

// Shannon entropy H = F(xi) - <xi, eta(xi)> (nonnegative: discrete support).
double entropy(const NaturalParam& xi, const Lattice& lat,
               const TruncationSpec& spec = {});
double entropy(const NaturalParam& xi, const TruncationSpec& spec = {});

// Cross entropy H(p_xi : p_xi_to) = F(xi_to) - <xi_to, eta(xi)>.
double cross_entropy(const NaturalParam& xi, const NaturalParam& xi_to,
                     const Lattice& lat, const TruncationSpec& spec = {});
double cross_entropy(const NaturalParam& xi, const NaturalParam& xi_to,
                     const TruncationSpec& spec = {});

// Empirical moment parameter of a sample (columns of x are observations).
// Always returns the raw average of sufficient statistics; degeneracy is
// detected downstream when the moments must be inverted.
MomentParam mle(const Eigen::MatrixXd& x);

// Fisher information of a 1-D model at xi: the 2x2 covariance of
// t(x) = (2*pi*x, -pi*x^2), equal to the Hessian of F.
Eigen::Matrix2d fisher_info_1d(const NaturalParam& xi,
                               const TruncationSpec& spec = {});

struct NewtonOptions {
    double tol = 1e-10;   // infinity-norm tolerance on the moment residual
    int max_iter = 100;
    TruncationSpec trunc;
};

struct NewtonReport {
    int iterations = 0;
    double final_residual = 0.0;
    AugmentedNatural psi;  // final augmented coordinates (psi0 = F)
};

// Inverts the moment map: finds xi with eta(xi) = eta by damped Newton in
// reduced coordinates, Jacobian = Cov[T] (the reduced Fisher information).
// Throws DegenerateSample (eta not in the open moment cone),
// SingularHessian, or NoConvergence.
NaturalParam natural_from_moments(const MomentParam& eta, const Lattice& lat,
                                  const NewtonOptions& opt = {},
                                  NewtonReport* report = nullptr);
NaturalParam natural_from_moments(const MomentParam& eta,
                                  const NewtonOptions& opt = {},
                                  NewtonReport* report = nullptr);

}  // namespace latnorm

#endif  // LATNORM_EF_MODEL_HPP
