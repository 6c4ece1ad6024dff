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

// Timing comparison of the serial reference kernel against the OpenMP
// kernel, for the partition function and for the moment-map summation.
// Not a correctness test (the test suite asserts kernel agreement); run it
// by hand: build/bench_theta [repeats].

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "latnorm/latnorm.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double best_of(int repeats, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = Clock::now();
        fn();
        const auto t1 = Clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

latnorm::NaturalParam make_case(int d, double lam_min, double lam_max) {
    latnorm::NaturalParam xi;
    xi.xi1 = Eigen::VectorXd::Constant(d, 0.05);
    xi.xi2 = Eigen::MatrixXd::Identity(d, d) * lam_max;
    for (int i = 0; i < d; ++i) {
        const double t = d == 1 ? 0.0 : static_cast<double>(i) / (d - 1);
        xi.xi2(i, i) = lam_min + t * (lam_max - lam_min);
    }
    // A mild rotation so the window is a genuinely skewed ellipsoid.
    for (int i = 0; i + 1 < d; ++i) {
        xi.xi2(i, i + 1) = xi.xi2(i + 1, i) = 0.2 * xi.xi2(i + 1, i + 1);
    }
    return xi;
}

void bench_case(const char* label, const latnorm::NaturalParam& xi, int repeats) {
    using namespace latnorm;
    const Lattice lat = Lattice::integer(xi.dim());
    TruncationSpec spec;

    const ThetaResult serial = theta_serial(xi, lat, spec);
    const ThetaResult parallel = theta(xi, lat, spec);
    const double rel = std::abs(parallel.log_value - serial.log_value) /
                       std::max(1.0, std::abs(serial.log_value));

    const double t_serial =
        best_of(repeats, [&] { (void)theta_serial(xi, lat, spec); });
    const double t_parallel = best_of(repeats, [&] { (void)theta(xi, lat, spec); });
    const double t_moments =
        best_of(repeats, [&] { (void)moments_from_natural(xi, lat, spec); });

    std::printf("%-28s %10zu pts  theta serial %8.3f ms  parallel %8.3f ms  "
                "(x%.2f)  moments %8.3f ms  |dlog| %.2e\n",
                label, serial.points_used, 1e3 * t_serial, 1e3 * t_parallel,
                t_serial / t_parallel, 1e3 * t_moments, rel);
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 5;
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both columns run the serial kernel\n");
#endif
    std::printf("repeats per timing: %d (best-of)\n\n", repeats);

    bench_case("d=2 lam=[2e-3, 4e-3]", make_case(2, 2e-3, 4e-3), repeats);
    bench_case("d=2 lam=[5e-4, 1e-3]", make_case(2, 5e-4, 1e-3), repeats);
    bench_case("d=3 lam=[1e-2, 3e-2]", make_case(3, 1e-2, 3e-2), repeats);
    bench_case("d=3 lam=[4e-3, 8e-3]", make_case(3, 4e-3, 8e-3), repeats);
    return 0;
}
