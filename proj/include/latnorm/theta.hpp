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

#ifndef LATNORM_THETA_HPP
#define LATNORM_THETA_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "latnorm/lattice.hpp"
#include "latnorm/params.hpp"

namespace latnorm {

// Controls for the truncated summation.
struct TruncationSpec {
    double eps = 1e-12;               // absolute tail mass target
    double max_radius = 200.0;        // cap on the Mahalanobis radius
    std::size_t max_points = 100000000;  // cap on enumerated lattice points
};

// Enumerated window: integer coordinates z (columns) in lexicographic
// order and the corresponding lattice points l = basis*z + shift.
struct PointSet {
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> z;
    Eigen::MatrixXd l;

    std::size_t size() const { return static_cast<std::size_t>(z.cols()); }
};

// Result of a theta evaluation. value = sum over the window of
// exp(2*pi*(-0.5*l'*xi2*l + l'*xi1)); log_value is always finite even when
// value overflows. grad_log_* hold the gradient of log(theta) (the moment
// map), grad_* = value * grad_log_* the raw theta gradient. The true tail
// that the truncation dropped is provably <= tail_bound <= spec.eps.
struct ThetaResult {
    double value = 0.0;
    double log_value = 0.0;
    Eigen::VectorXd grad_xi1;
    Eigen::MatrixXd grad_xi2;
    Eigen::VectorXd grad_log_xi1;
    Eigen::MatrixXd grad_log_xi2;
    double tail_bound = 0.0;
    std::size_t points_used = 0;
    double radius = 0.0;
};

// Joint evaluation of several parameters over the union of their windows.
// rel_tails[i] bounds the relative truncation error of log_values[i].
struct JointTheta {
    std::vector<double> log_values;
    std::vector<double> rel_tails;
    std::size_t points_used = 0;
};

// Mahalanobis radius R such that the mass of terms with
// (l - m)'*xi2*(l - m) > R^2 is below eps (m = xi2^{-1} xi1).
// Throws RadiusCapExceeded when R would exceed spec.max_radius.
double truncation_radius(const NaturalParam& xi, const Lattice& lat,
                         const TruncationSpec& spec);
double truncation_radius(const Eigen::MatrixXd& xi2, const Eigen::VectorXd& xi1,
                         double eps);

// All lattice points with (l - m)'*xi2*(l - m) <= radius^2, columns sorted
// lexicographically by integer coordinates. Throws PointBudgetExceeded.
PointSet enumerate_ellipsoid(const NaturalParam& xi, const Lattice& lat,
                             double radius, std::size_t max_points);

// Truncated theta with gradients; uses the parallel kernel for large
// windows. theta_serial always runs the single-threaded reference kernel.
ThetaResult theta(const NaturalParam& xi, const Lattice& lat,
                  const TruncationSpec& spec = {});
ThetaResult theta(const NaturalParam& xi, const TruncationSpec& spec = {});
ThetaResult theta_serial(const NaturalParam& xi, const Lattice& lat,
                         const TruncationSpec& spec = {});

double log_theta(const NaturalParam& xi, const Lattice& lat,
                 const TruncationSpec& spec = {});
double log_theta(const NaturalParam& xi, const TruncationSpec& spec = {});

// Evaluates log(theta) for each parameter over the shared union window,
// which keeps differences of the results smooth in the parameters (adding
// points only tightens each all-positive sum).
JointTheta log_theta_joint(std::span<const NaturalParam> xis, const Lattice& lat,
                           const TruncationSpec& spec = {});

namespace detail {
// Minimum window size before theta() switches to the OpenMP kernel.
inline constexpr std::size_t kParallelMinPoints = 8192;
}  // namespace detail

}  // namespace latnorm

#endif  // LATNORM_THETA_HPP
