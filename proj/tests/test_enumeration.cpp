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

#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"

using namespace latnorm;
using testutil::make1;
using testutil::make2;

TEST_CASE("truncation radius grows as eps shrinks") {
    const NaturalParam xi = testutil::pair_a();
    const Lattice lat = Lattice::integer(2);
    TruncationSpec loose, tight;
    loose.eps = 1e-6;
    tight.eps = 1e-14;
    const double r_loose = truncation_radius(xi, lat, loose);
    const double r_tight = truncation_radius(xi, lat, tight);
    CHECK(r_loose > 0.0);
    CHECK(r_tight > r_loose);
}

TEST_CASE("radius cap and point budget are enforced") {
    const NaturalParam xi = make1(0.0, 1e-4);  // wide distribution
    const Lattice lat = Lattice::integer(1);
    TruncationSpec spec;
    spec.max_radius = 0.1;
    CHECK_THROWS_AS(truncation_radius(xi, lat, spec), RadiusCapExceeded);

    TruncationSpec tiny_budget;
    tiny_budget.max_points = 3;
    CHECK_THROWS_AS(theta(make1(0.0, 0.2), lat, tiny_budget), PointBudgetExceeded);
}

TEST_CASE("enumerated window is exactly the ellipsoid, in lexicographic order") {
    const NaturalParam xi = make2(0.15, -0.1, 0.6, 0.25, 0.9);
    const Lattice lat = Lattice::integer(2);
    const double radius = 3.0;
    const PointSet ps = enumerate_ellipsoid(xi, lat, radius, 100000);
    REQUIRE(ps.size() > 0);

    // Mode in integer coordinates.
    const Eigen::VectorXd m = xi.xi2.ldlt().solve(xi.xi1);

    // Reference: brute-force box scan. The enumerator keeps points with
    // quadratic form <= R^2 (with a tiny fuzz), so compare both inclusions
    // with a strict/relaxed threshold pair.
    std::set<std::pair<long, long>> brute;
    for (long z0 = -20; z0 <= 20; ++z0) {
        for (long z1 = -20; z1 <= 20; ++z1) {
            Eigen::Vector2d l(static_cast<double>(z0), static_cast<double>(z1));
            const double q = (l - m).dot(xi.xi2 * (l - m));
            if (q <= radius * radius * (1.0 - 1e-9)) {
                brute.insert({z0, z1});
            }
        }
    }
    std::set<std::pair<long, long>> got;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        got.insert({static_cast<long>(ps.z(0, col)), static_cast<long>(ps.z(1, col))});
        Eigen::Vector2d l = ps.l.col(col);
        const double q = (l - m).dot(xi.xi2 * (l - m));
        CHECK(q <= radius * radius * (1.0 + 1e-6));
    }
    for (const auto& zp : brute) CHECK(got.count(zp) == 1);

    // Lexicographic ordering of integer coordinates.
    for (std::size_t i = 1; i < ps.size(); ++i) {
        const auto a = static_cast<Eigen::Index>(i - 1);
        const auto b = static_cast<Eigen::Index>(i);
        const bool less = ps.z(0, a) < ps.z(0, b) ||
                          (ps.z(0, a) == ps.z(0, b) && ps.z(1, a) < ps.z(1, b));
        CHECK(less);
    }
}

TEST_CASE("window on a scaled lattice holds lattice points") {
    Eigen::MatrixXd basis = 2.0 * Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(2);
    const Lattice lat(basis, shift);
    const NaturalParam xi = make2(0.0, 0.0, 0.3, 0.0, 0.3);
    const PointSet ps = enumerate_ellipsoid(xi, lat, 4.0, 100000);
    REQUIRE(ps.size() > 0);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        CHECK(ps.l(0, col) == 2.0 * static_cast<double>(ps.z(0, col)));
        CHECK(ps.l(1, col) == 2.0 * static_cast<double>(ps.z(1, col)));
        CHECK(lat.contains(ps.l.col(col)));
    }
}

TEST_CASE("window always contains the rounded mode") {
    // Even at absurdly loose eps the window must not be empty.
    const NaturalParam xi = make1(0.37, 0.9);
    const Lattice lat = Lattice::integer(1);
    TruncationSpec spec;
    spec.eps = 0.49;  // nearly all mass allowed to be dropped
    const double r = truncation_radius(xi, lat, spec);
    const PointSet ps = enumerate_ellipsoid(xi, lat, r, 1000);
    CHECK(ps.size() >= 1);
}
