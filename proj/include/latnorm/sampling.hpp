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

#ifndef LATNORM_SAMPLING_HPP
#define LATNORM_SAMPLING_HPP

#include <cstdint>
#include <random>
#include <string>

#include "latnorm/ef_model.hpp"
#include "latnorm/lattice.hpp"
#include "latnorm/params.hpp"
#include "latnorm/theta.hpp"

namespace latnorm {

// Seeded RNG wrapper. All draws are mapped to doubles by hand so a seed
// pins the output stream (mt19937_64 is fully specified by the standard).
class RandomState {
  public:
    explicit RandomState(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t raw() { return gen_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (second value cached).
    double normal();

  private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// A batch of lattice samples: integer coordinates z (columns) and the
// corresponding lattice points l = basis*z + shift.
struct SampleBatch {
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> z;
    Eigen::MatrixXd points;
    std::string method;
    std::uint64_t seed = 0;
    double accept_rate = 1.0;     // rejection methods only
    std::size_t n_proposals = 0;  // rejection methods only

    std::size_t size() const { return static_cast<std::size_t>(points.cols()); }
};

struct SampleOptions {
    std::optional<Lattice> lattice;  // defaults to Z^d
    TruncationSpec trunc;
};

// Inverse-CDF sampling of the categorical distribution on the truncation
// window, renormalized; total variation from the exact law is at most
// spec.eps (the window is refined until its relative uncovered mass is
// below eps).
SampleBatch sample_exact_eps(const NaturalParam& xi, std::size_t n,
                             RandomState& rng, const SampleOptions& opt = {});

// Heuristic H1: draw from the continuous N(mu, sigma) and round each
// coordinate to the nearest integer (ties to even). Its law is close to
// the discrete normal with matching moments but not equal to it.
SampleBatch sample_h1(const OrdinaryParam& p, std::size_t n, RandomState& rng);

// Heuristic H2: rejection sampling with uniform proposals on the
// truncation window, acceptance p(l)/p(mode of window): exact on the
// window (i.e. the conditional distribution given the window). Throws
// AcceptanceStall after 1e4 * n proposals.
SampleBatch sample_h2(const NaturalParam& xi, std::size_t n, RandomState& rng,
                      const SampleOptions& opt = {});

// Round half to even, per coordinate (the H1 tie rule).
Eigen::VectorXd round_half_even(const Eigen::VectorXd& x);

// Empirical moment parameter of a batch (averages of t over points).
MomentParam empirical_moments(const SampleBatch& batch);

}  // namespace latnorm

#endif  // LATNORM_SAMPLING_HPP
