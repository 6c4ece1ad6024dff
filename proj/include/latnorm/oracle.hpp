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

#ifndef LATNORM_ORACLE_HPP
#define LATNORM_ORACLE_HPP

#include <Eigen/Dense>

#include "latnorm/params.hpp"

// Brute-force reference implementation on the integer lattice. Everything
// here is summed naively over the full box [-half_width, half_width]^d with
// its own loops: no code is shared with the truncated engine (that
// independence is the whole point; see the repo checklist in README.md).
// Practical for d <= 3.

namespace latnorm::oracle {

struct BoxSpec {
    long half_width = 40;
    // Fail if the outermost shell carries more than this fraction of the
    // total mass (the box would be too small to trust).
    double tail_check = 1e-13;
};

// Plain box sum of exp(2*pi*(-0.5*l'*xi2*l + l'*xi1)). Throws TailTooFat.
double oracle_theta(const NaturalParam& xi, const BoxSpec& box = {});
double oracle_log_theta(const NaturalParam& xi, const BoxSpec& box = {});

// Normalized probability at integer point l.
double oracle_pmf(const NaturalParam& xi, const Eigen::VectorXd& l,
                  const BoxSpec& box = {});

// Moment parameter (averages of the sufficient statistic under the box-
// normalized pmf).
MomentParam oracle_moments(const NaturalParam& xi, const BoxSpec& box = {});

double oracle_entropy(const NaturalParam& xi, const BoxSpec& box = {});
double oracle_cross_entropy(const NaturalParam& xi, const NaturalParam& xi_to,
                            const BoxSpec& box = {});

// Divergences computed directly from the two pmf arrays on the box.
double oracle_kl(const NaturalParam& xi, const NaturalParam& xi_to,
                 const BoxSpec& box = {});
double oracle_renyi(const NaturalParam& xi, const NaturalParam& xi_to,
                    double alpha, const BoxSpec& box = {});
double oracle_jensen_skew(const NaturalParam& xi, const NaturalParam& xi_to,
                          double alpha, const BoxSpec& box = {});
double oracle_bhattacharyya(const NaturalParam& xi, const NaturalParam& xi_to,
                            const BoxSpec& box = {});
double oracle_hellinger_squared(const NaturalParam& xi, const NaturalParam& xi_to,
                                const BoxSpec& box = {});
double oracle_amari_alpha(const NaturalParam& xi, const NaturalParam& xi_to,
                          double alpha, const BoxSpec& box = {});
double oracle_sharma_mittal(const NaturalParam& xi, const NaturalParam& xi_to,
                            double alpha, double beta, const BoxSpec& box = {});
double oracle_i_alpha_beta(const NaturalParam& xi, const NaturalParam& xi_to,
                           double alpha, double beta, const BoxSpec& box = {});
double oracle_gamma(const NaturalParam& xi, const NaturalParam& xi_to,
                    double gamma, const BoxSpec& box = {});
double oracle_hoelder(const NaturalParam& xi, const NaturalParam& xi_to,
                      double gamma, double alpha_h, const BoxSpec& box = {});
double oracle_cauchy_schwarz(const NaturalParam& xi, const NaturalParam& xi_to,
                             const BoxSpec& box = {});

}  // namespace latnorm::oracle

#endif  // LATNORM_ORACLE_HPP
