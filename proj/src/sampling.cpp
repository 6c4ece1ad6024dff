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

#include "latnorm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "latnorm/errors.hpp"

namespace latnorm {

namespace {

constexpr double kPi = std::numbers::pi;

Lattice lattice_or_default(const SampleOptions& opt, int d) {
    return opt.lattice ? *opt.lattice : Lattice::integer(d);
}

Eigen::VectorXd window_exponents(const NaturalParam& xi, const Eigen::MatrixXd& L) {
    Eigen::VectorXd q = (xi.xi2 * L).cwiseProduct(L).colwise().sum().transpose();
    return (-kPi) * q + (2.0 * kPi) * (L.transpose() * xi.xi1);
}

SampleBatch make_batch(const PointSet& ps, const std::vector<Eigen::Index>& picks,
                       const Lattice& lat, const std::string& method,
                       std::uint64_t seed) {
    const int d = static_cast<int>(ps.z.rows());
    SampleBatch b;
    b.z.resize(d, static_cast<Eigen::Index>(picks.size()));
    for (std::size_t k = 0; k < picks.size(); ++k) {
        b.z.col(static_cast<Eigen::Index>(k)) = ps.z.col(picks[k]);
    }
    b.points = lat.basis() * b.z.cast<double>() +
               lat.shift().replicate(1, static_cast<Eigen::Index>(picks.size()));
    b.method = method;
    b.seed = seed;
    return b;
}

}  // namespace

double RandomState::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = (static_cast<double>(raw() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * kPi * u2);
    has_cached_ = true;
    return r * std::cos(2.0 * kPi * u2);
}

Eigen::VectorXd round_half_even(const Eigen::VectorXd& x) {
    Eigen::VectorXd out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        out(i) = std::nearbyint(x(i));  // FE_TONEAREST: ties to even
    }
    return out;
}

SampleBatch sample_exact_eps(const NaturalParam& xi, std::size_t n,
                             RandomState& rng, const SampleOptions& opt) {
    NaturalParam copy = xi;
    validate_natural(copy);
    const Lattice lat = lattice_or_default(opt, copy.dim());

    // Refine until the window's uncovered mass fraction is below eps, so the
    // renormalized categorical is within eps of the exact law in total
    // variation.
    TruncationSpec spec = opt.trunc;
    ThetaResult th = theta(copy, lat, spec);
    for (int pass = 0; pass < 2 && th.tail_bound > opt.trunc.eps * th.value;
         ++pass) {
        spec.eps = std::max(opt.trunc.eps * th.value * 0.5, 1e-290);
        th = theta(copy, lat, spec);
    }

    const PointSet ps = enumerate_ellipsoid(copy, lat, th.radius, spec.max_points);
    const Eigen::VectorXd e = window_exponents(copy, ps.l);
    const double emax = e.maxCoeff();
    std::vector<double> cum(ps.size());
    double running = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        running += std::exp(e(static_cast<Eigen::Index>(i)) - emax);
        cum[i] = running;
    }

    std::vector<Eigen::Index> picks(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = rng.uniform() * running;
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        picks[k] = static_cast<Eigen::Index>(
            std::min<std::ptrdiff_t>(it - cum.begin(),
                                     static_cast<std::ptrdiff_t>(ps.size()) - 1));
    }
    return make_batch(ps, picks, lat, "exact_eps", rng.seed());
}

SampleBatch sample_h1(const OrdinaryParam& p, std::size_t n, RandomState& rng) {
    const int d = p.dim();
    if (p.sigma.rows() != d || p.sigma.cols() != d) {
        throw ValidationError("sigma must be square and match mu");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(p.sigma);
    if (llt.info() != Eigen::Success) {
        throw ValidationError("sigma is not positive definite");
    }
    const Eigen::MatrixXd A = llt.matrixL();

    SampleBatch b;
    b.z.resize(d, static_cast<Eigen::Index>(n));
    Eigen::VectorXd g(d);
    for (std::size_t k = 0; k < n; ++k) {
        for (int i = 0; i < d; ++i) g(i) = rng.normal();
        const Eigen::VectorXd rounded = round_half_even(p.mu + A * g);
        for (int i = 0; i < d; ++i) {
            b.z(i, static_cast<Eigen::Index>(k)) =
                static_cast<std::int64_t>(rounded(i));
        }
    }
    b.points = b.z.cast<double>();
    b.method = "h1";
    b.seed = rng.seed();
    return b;
}

SampleBatch sample_h2(const NaturalParam& xi, std::size_t n, RandomState& rng,
                      const SampleOptions& opt) {
    NaturalParam copy = xi;
    validate_natural(copy);
    const Lattice lat = lattice_or_default(opt, copy.dim());

    const double R = truncation_radius(copy, lat, opt.trunc);
    const PointSet ps = enumerate_ellipsoid(copy, lat, R, opt.trunc.max_points);
    const Eigen::VectorXd e = window_exponents(copy, ps.l);
    const double emax = e.maxCoeff();
    const auto m = static_cast<std::size_t>(ps.size());

    const std::size_t budget = 10000 * std::max<std::size_t>(n, 1);
    std::vector<Eigen::Index> picks;
    picks.reserve(n);
    std::size_t proposals = 0;
    while (picks.size() < n) {
        if (proposals >= budget) {
            throw AcceptanceStall("rejection sampler used " +
                                  std::to_string(proposals) +
                                  " proposals for " + std::to_string(n) +
                                  " samples");
        }
        ++proposals;
        const auto idx = std::min<std::size_t>(
            m - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(m)));
        const double ratio = std::exp(e(static_cast<Eigen::Index>(idx)) - emax);
        if (rng.uniform() < ratio) {
            picks.push_back(static_cast<Eigen::Index>(idx));
        }
    }
    SampleBatch b = make_batch(ps, picks, lat, "h2", rng.seed());
    b.n_proposals = proposals;
    b.accept_rate =
        static_cast<double>(n) / static_cast<double>(std::max<std::size_t>(proposals, 1));
    return b;
}

MomentParam empirical_moments(const SampleBatch& batch) {
    return mle(batch.points);
}

}  // namespace latnorm
