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

#ifndef LATNORM_TESTS_HELPERS_HPP
#define LATNORM_TESTS_HELPERS_HPP

#include <random>

#include "latnorm/latnorm.hpp"

namespace testutil {

inline latnorm::NaturalParam make1(double xi1, double xi2) {
    latnorm::NaturalParam p;
    p.xi1 = Eigen::VectorXd::Constant(1, xi1);
    p.xi2 = Eigen::MatrixXd::Constant(1, 1, xi2);
    return p;
}

inline latnorm::NaturalParam make2(double a, double b, double m00, double m01,
                                   double m11) {
    latnorm::NaturalParam p;
    p.xi1 = Eigen::Vector2d(a, b);
    p.xi2 = Eigen::Matrix2d{{m00, m01}, {m01, m11}};
    return p;
}

// The two fixed parameters used throughout the value tests.
inline latnorm::NaturalParam pair_a() { return make2(0.1, -0.3, 0.5, 0.2, 0.8); }
inline latnorm::NaturalParam pair_b() { return make2(-0.2, 0.1, 0.4, -0.1, 0.6); }

// Random natural parameter with xi2 eigenvalues in [lo, hi] and
// |xi1|_inf <= b1. Deterministic in the caller's generator.
inline latnorm::NaturalParam random_natural(std::mt19937_64& gen, int d,
                                            double lo, double hi, double b1) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = 2.0 * unit(gen) - 1.0;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd lam(d);
    for (int i = 0; i < d; ++i) lam(i) = lo + (hi - lo) * unit(gen);
    latnorm::NaturalParam p;
    p.xi2 = q * lam.asDiagonal() * q.transpose();
    p.xi2 = 0.5 * (p.xi2 + p.xi2.transpose()).eval();
    p.xi1.resize(d);
    for (int i = 0; i < d; ++i) p.xi1(i) = b1 * (2.0 * unit(gen) - 1.0);
    return p;
}

}  // namespace testutil

#endif  // LATNORM_TESTS_HELPERS_HPP
