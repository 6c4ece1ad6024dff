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

#ifndef LATNORM_DIVERGENCES_HPP
#define LATNORM_DIVERGENCES_HPP

#include <span>
#include <string>

#include "latnorm/ef_model.hpp"
#include "latnorm/lattice.hpp"
#include "latnorm/params.hpp"
#include "latnorm/theta.hpp"

namespace latnorm {

enum class DivergenceKind {
    KlBregman,
    KlMixed,
    Renyi,
    JensenSkew,
    Bhattacharyya,
    BhattCoefficient,
    SkewedBhattCoefficient,
    Hellinger2,
    AmariAlpha,
    SharmaMittal,
    Gamma,
    Hoelder,
    CauchySchwarz,
    IAlphaBeta,
    Chernoff,
};

const char* divergence_kind_name(DivergenceKind kind);
// Throws ValidationError on an unknown name.
DivergenceKind divergence_kind_from_name(const std::string& name);

struct DivOptions {
    std::optional<Lattice> lattice;  // defaults to Z^d
    TruncationSpec trunc;
};

struct DivergenceResult {
    double value = 0.0;
    DivergenceKind kind = DivergenceKind::KlBregman;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    int theta_evals = 0;
    double est_abs_error = 0.0;  // first-order truncation + roundoff estimate
};

struct ChernoffResult {
    double value = 0.0;
    double alpha_star = 0.0;
    int iterations = 0;
    double bracket_width = 0.0;
    int theta_evals = 0;
};

// Uniform entry point used by the CLI; dispatches on kind (Chernoff included,
// reporting value and filling alpha with alpha_star).
struct DivergenceRequest {
    DivergenceKind kind = DivergenceKind::KlBregman;
    NaturalParam xi;
    NaturalParam xi_to;
    double alpha = 0.5;
    double beta = 0.5;
    double gamma = 1.5;
    double alpha_h = 2.0;
    DivOptions opt;
};
DivergenceResult evaluate_divergence(const DivergenceRequest& req);

// Skewed Jensen gap J_{F,a}(xi:xi') = a F(xi) + (1-a) F(xi') - F(mix_a),
// mix_a = a*xi + (1-a)*xi'. Throws DomainError if mix_a leaves the cone.
DivergenceResult jensen_skew(const NaturalParam& xi, const NaturalParam& xi_to,
                             double alpha, const DivOptions& opt = {});

// Renyi divergence D_a = J_{F,a} / (1 - a), a > 0, a != 1.
DivergenceResult renyi_divergence(const NaturalParam& xi, const NaturalParam& xi_to,
                                  double alpha, const DivOptions& opt = {});

// Bhattacharyya distance J_{F,1/2} and coefficients exp(-J_{F,a}).
DivergenceResult bhattacharyya_distance(const NaturalParam& xi,
                                        const NaturalParam& xi_to,
                                        const DivOptions& opt = {});
DivergenceResult bhattacharyya_coefficient(const NaturalParam& xi,
                                           const NaturalParam& xi_to,
                                           const DivOptions& opt = {});
DivergenceResult skewed_bhattacharyya_coefficient(const NaturalParam& xi,
                                                  const NaturalParam& xi_to,
                                                  double alpha,
                                                  const DivOptions& opt = {});

// Squared Hellinger distance 1 - exp(-J_{F,1/2}), in [0, 1).
DivergenceResult hellinger_squared(const NaturalParam& xi, const NaturalParam& xi_to,
                                   const DivOptions& opt = {});

// Amari alpha-divergence (1/(a(1-a))) * (1 - exp(-J_{F,a})), a not in {0,1}.
DivergenceResult amari_alpha_divergence(const NaturalParam& xi,
                                        const NaturalParam& xi_to, double alpha,
                                        const DivOptions& opt = {});

// Sharma-Mittal divergence, (a, b) with a != 1, b != 1:
// (expm1(-((1-b)/(1-a)) * J_{F,a})) / (b - 1).
DivergenceResult sharma_mittal(const NaturalParam& xi, const NaturalParam& xi_to,
                               double alpha, double beta,
                               const DivOptions& opt = {});

// Affinity I_{a,b} = exp(F(a*xi + b*xi') - a F(xi) - b F(xi')), a, b > 0.
DivergenceResult i_alpha_beta(const NaturalParam& xi, const NaturalParam& xi_to,
                              double alpha, double beta,
                              const DivOptions& opt = {});

// Gamma divergence, g > 0, g != 1:
// (F(g*xi) + (g-1) F(g*xi') - g F(xi + (g-1) xi')) / (g (g-1)).
DivergenceResult gamma_divergence(const NaturalParam& xi, const NaturalParam& xi_to,
                                  double gamma, const DivOptions& opt = {});

// Hoelder pseudo-divergence with exponent alpha_h > 1 (conjugate
// beta_h = alpha_h/(alpha_h - 1)) and scale g:
// |F(g*xi)/alpha_h + F(g*xi')/beta_h - F((g/alpha_h) xi + (g/beta_h) xi')|.
DivergenceResult hoelder_divergence(const NaturalParam& xi, const NaturalParam& xi_to,
                                    double gamma, double alpha_h,
                                    const DivOptions& opt = {});

// Cauchy-Schwarz divergence 0.5 F(2 xi) + 0.5 F(2 xi') - F(xi + xi') >= 0.
DivergenceResult cauchy_schwarz(const NaturalParam& xi, const NaturalParam& xi_to,
                                const DivOptions& opt = {});

// KL divergence KL(p_xi : p_xi') as the Bregman divergence
// B_F(xi' : xi) = F(xi') - F(xi) - <xi' - xi, grad F(xi)>.
DivergenceResult kl_bregman(const NaturalParam& xi, const NaturalParam& xi_to,
                            const DivOptions& opt = {});

// Same quantity through the mixed natural/moment form
// log(theta'/theta) + 2*pi*mu'(xi1 - xi1') - pi*tr((xi2 - xi2')(sigma + mu mu')).
DivergenceResult kl_mixed(const NaturalParam& xi, const NaturalParam& xi_to,
                          const DivOptions& opt = {});

// Chernoff information: bisects g(a) = KL(mix_a : xi) - KL(mix_a : xi') to
// the exact skew a*, value = J_{F,a*} = KL(mix_a* : xi).
ChernoffResult chernoff_information(const NaturalParam& xi, const NaturalParam& xi_to,
                                    double bracket_tol = 1e-12,
                                    const DivOptions& opt = {});

// Left-sided KL centroid argmin_c sum_i KL(p_c : p_{xi_i}): the arithmetic
// mean of the natural parameters.
NaturalParam kl_centroid_left(std::span<const NaturalParam> xis);

}  // namespace latnorm

#endif  // LATNORM_DIVERGENCES_HPP
