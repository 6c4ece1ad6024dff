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

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "doctest.h"
#include "helpers.hpp"

using namespace latnorm;
using testutil::make1;
using testutil::make2;

namespace {

// Chi-square statistic of integer 1-D samples against the model pmf on
// the window [-w, w], pooling cells from the ends until every expected
// count is at least 5. Returns (statistic, degrees of freedom).
std::pair<double, int> chi_square_1d(const std::vector<long>& samples,
                                     const NaturalParam& xi, long w) {
    const double n = static_cast<double>(samples.size());
    std::vector<double> expected;
    std::vector<double> observed;
    for (long l = -w; l <= w; ++l) {
        expected.push_back(n * pmf(xi, Eigen::VectorXd::Constant(1, double(l))));
        observed.push_back(static_cast<double>(
            std::count(samples.begin(), samples.end(), l)));
    }
    // Pool from both ends toward the middle.
    while (expected.size() > 2 && expected.front() < 5.0) {
        expected[1] += expected[0];
        observed[1] += observed[0];
        expected.erase(expected.begin());
        observed.erase(observed.begin());
    }
    while (expected.size() > 2 && expected.back() < 5.0) {
        expected[expected.size() - 2] += expected.back();
        observed[observed.size() - 2] += observed.back();
        expected.pop_back();
        observed.pop_back();
    }
    double stat = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const double diff = observed[i] - expected[i];
        stat += diff * diff / expected[i];
    }
    return {stat, static_cast<int>(expected.size()) - 1};
}

std::vector<long> to_longs(const SampleBatch& batch) {
    std::vector<long> out(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        out[i] = static_cast<long>(batch.z(0, static_cast<Eigen::Index>(i)));
    }
    return out;
}

}  // namespace

TEST_CASE("random state is seed-deterministic and well-scaled") {
    RandomState a(123), b(123), c(124);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    bool any_diff = false;
    for (int i = 0; i < 10; ++i) any_diff |= (a.raw() != c.raw());
    CHECK(any_diff);
    for (int i = 0; i < 100; ++i) CHECK(std::isfinite(a.normal()));
}

TEST_CASE("round half to even") {
    Eigen::VectorXd x(8);
    x << 0.5, 1.5, 2.5, -0.5, -1.5, 3.49, -2.51, 2.0;
    const Eigen::VectorXd r = round_half_even(x);
    CHECK(r(0) == 0.0);
    CHECK(r(1) == 2.0);
    CHECK(r(2) == 2.0);
    CHECK(r(3) == 0.0);
    CHECK(r(4) == -2.0);
    CHECK(r(5) == 3.0);
    CHECK(r(6) == -3.0);
    CHECK(r(7) == 2.0);
}

TEST_CASE("exact sampler matches the standard discrete normal") {
    const NaturalParam xi = std_natural(1);
    RandomState rng(12345);
    const std::size_t n = 100000;
    const SampleBatch batch = sample_exact_eps(xi, n, rng);
    REQUIRE(batch.size() == n);
    CHECK(batch.method == "exact_eps");

    const std::vector<long> s = to_longs(batch);
    double mean = 0.0;
    for (long v : s) mean += static_cast<double>(v);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (long v : s) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n - 1);

    // True moments of this parameter: mean 0, variance 1.000000059523...
    const double se_mean = 1.0 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(mean) <= 3.0 * se_mean);
    const double se_var = std::sqrt(2.0 / (static_cast<double>(n) - 1.0));
    CHECK(std::abs(var - 1.000000059523179563) <= 3.0 * se_var);

    // Goodness of fit on the 21-point window at significance 0.001.
    const auto [stat, dof] = chi_square_1d(s, xi, 10);
    boost::math::chi_squared dist(dof);
    CHECK(stat < boost::math::quantile(dist, 0.999));
}

TEST_CASE("exact sampler is seed-deterministic") {
    const NaturalParam xi = std_natural(1);
    RandomState r1(999), r2(999);
    const SampleBatch b1 = sample_exact_eps(xi, 500, r1);
    const SampleBatch b2 = sample_exact_eps(xi, 500, r2);
    CHECK(b1.z == b2.z);
    CHECK(b1.seed == 999);
}

TEST_CASE("exact sampler respects a general lattice") {
    Eigen::MatrixXd basis = 2.0 * Eigen::MatrixXd::Identity(2, 2);
    const Lattice lat(basis, Eigen::VectorXd::Zero(2));
    SampleOptions opt;
    opt.lattice = lat;
    const NaturalParam xi = make2(0.0, 0.0, 0.1, 0.0, 0.1);
    RandomState rng(7);
    const SampleBatch batch = sample_exact_eps(xi, 200, rng, opt);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        CHECK(batch.points(0, col) == 2.0 * static_cast<double>(batch.z(0, col)));
        CHECK(batch.points(1, col) == 2.0 * static_cast<double>(batch.z(1, col)));
    }
}

TEST_CASE("rounding heuristic concentrates on the rounded mean") {
    OrdinaryParam p;
    p.mu = Eigen::Vector2d(0.2, -0.7);
    p.sigma = 1e-6 * Eigen::Matrix2d::Identity();
    RandomState rng(31);
    const SampleBatch batch = sample_h1(p, 100, rng);
    CHECK(batch.method == "h1");
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        CHECK(batch.points(0, col) == 0.0);
        CHECK(batch.points(1, col) == -1.0);
    }

    RandomState r1(55), r2(55);
    CHECK(sample_h1(p, 64, r1).z == sample_h1(p, 64, r2).z);

    OrdinaryParam bad = p;
    bad.sigma = -Eigen::Matrix2d::Identity();
    RandomState r3(1);
    CHECK_THROWS_AS(sample_h1(bad, 4, r3), ValidationError);
}

TEST_CASE("rejection sampler is window-exact and deterministic") {
    const NaturalParam xi = std_natural(1);
    RandomState rng(2024);
    const std::size_t n = 30000;
    const SampleBatch batch = sample_h2(xi, n, rng);
    REQUIRE(batch.size() == n);
    CHECK(batch.method == "h2");
    CHECK(batch.n_proposals >= n);
    CHECK(batch.accept_rate > 0.0);
    CHECK(batch.accept_rate <= 1.0);
    CHECK(batch.accept_rate ==
          doctest::Approx(static_cast<double>(n) /
                          static_cast<double>(batch.n_proposals)));

    const auto [stat, dof] = chi_square_1d(to_longs(batch), xi, 10);
    boost::math::chi_squared dist(dof);
    CHECK(stat < boost::math::quantile(dist, 0.999));

    RandomState s1(4), s2(4);
    CHECK(sample_h2(xi, 100, s1).z == sample_h2(xi, 100, s2).z);
}

TEST_CASE("rejection sampler stalls on a hopeless acceptance rate") {
    // Uniform proposals accept at roughly 2/R^2 on a radius-R window; a
    // far-off-center mode inflates the certified radius far beyond the
    // distribution's spread, pushing acceptance below the proposal budget.
    SampleOptions opt;
    opt.trunc.max_radius = 1000.0;
    const NaturalParam xi = make2(80.0, 0.0, kStdXi2, 0.0, kStdXi2);
    RandomState rng(8);
    CHECK_THROWS_AS(sample_h2(xi, 50, rng, opt), AcceptanceStall);
}

TEST_CASE("empirical moments agree with the direct average") {
    const NaturalParam xi = testutil::pair_a();
    RandomState rng(99);
    const SampleBatch batch = sample_exact_eps(xi, 2000, rng);
    const MomentParam emp = empirical_moments(batch);
    const MomentParam ref = mle(batch.points);
    CHECK(emp.eta1.isApprox(ref.eta1, 1e-14));
    CHECK(emp.eta2.isApprox(ref.eta2, 1e-14));

    // With 2000 draws the empirical mean is within a few standard errors.
    const OrdinaryParam op = ordinary_from_moment(emp);
    const OrdinaryParam truth = ordinary_from_natural(xi);
    CHECK((op.mu - truth.mu).cwiseAbs().maxCoeff() < 0.06);
}

TEST_CASE("empirical cdf of the exact sampler stays in the DKW band") {
    const NaturalParam xi = std_natural(1);
    RandomState rng(5150);
    const std::size_t n = 100000;
    const SampleBatch batch = sample_exact_eps(xi, n, rng);
    std::vector<long> s = to_longs(batch);
    std::sort(s.begin(), s.end());

    // Model CDF over the 21-point window; window mass is 1 - O(1e-12).
    double cum = 0.0;
    const double band = std::sqrt(std::log(2.0 / 0.001) / (2.0 * static_cast<double>(n)));
    for (long l = -10; l <= 10; ++l) {
        cum += pmf(xi, Eigen::VectorXd::Constant(1, double(l)));
        const auto up = std::upper_bound(s.begin(), s.end(), l);
        const double ecdf = static_cast<double>(up - s.begin()) / static_cast<double>(n);
        CHECK(std::abs(ecdf - cum) <= band);
    }
}
