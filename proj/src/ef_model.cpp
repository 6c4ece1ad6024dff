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

#include "latnorm/ef_model.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "accum.hpp"
#include "latnorm/errors.hpp"

namespace latnorm {

namespace {

using detail::Kahan;

constexpr double kPi = std::numbers::pi;

// Normalized sums of the reduced sufficient statistic over the truncation
// window: the direct-summation route to the moment map (the theta-gradient
// route lives in theta.cpp; tests assert the two agree).
struct StatSums {
    double log_part = 0.0;          // F = log theta
    Eigen::VectorXd ET;             // E[T]
    Eigen::MatrixXd ETT;            // E[T T'] (only when with_second)
};

struct StatAccum {
    Kahan s;
    std::vector<Kahan> t;
    std::vector<Kahan> tt;  // lower triangle packed
    StatAccum(int D, bool with_second)
        : t(static_cast<std::size_t>(D)),
          tt(with_second ? static_cast<std::size_t>(D * (D + 1) / 2) : 0) {}
};

void stat_accumulate_range(const Eigen::MatrixXd& L, const Eigen::VectorXd& e,
                           double emax, bool with_second, Eigen::Index begin,
                           Eigen::Index end, StatAccum& acc) {
    const int d = static_cast<int>(L.rows());
    const int D = reduced_dim(d);
    Eigen::VectorXd T(D);
    for (Eigen::Index i = begin; i < end; ++i) {
        const double w = std::exp(e(i) - emax);
        acc.s.add(w);
        T = reduced_stat(L.col(i));
        for (int a = 0; a < D; ++a) {
            acc.t[static_cast<std::size_t>(a)].add(T(a) * w);
        }
        if (with_second) {
            int k = 0;
            for (int a = 0; a < D; ++a) {
                for (int b = 0; b <= a; ++b) {
                    acc.tt[static_cast<std::size_t>(k++)].add(T(a) * T(b) * w);
                }
            }
        }
    }
}

StatSums reduced_sums(const NaturalParam& xi, const Lattice& lat,
                      const TruncationSpec& spec, bool with_second) {
    const double R = truncation_radius(xi, lat, spec);
    const PointSet ps = enumerate_ellipsoid(xi, lat, R, spec.max_points);
    const Eigen::MatrixXd& L = ps.l;
    Eigen::VectorXd q = (xi.xi2 * L).cwiseProduct(L).colwise().sum().transpose();
    Eigen::VectorXd e = (-kPi) * q + (2.0 * kPi) * (L.transpose() * xi.xi1);
    const double emax = e.maxCoeff();

    const int d = xi.dim();
    const int D = reduced_dim(d);
    const Eigen::Index n = e.size();
    StatAccum total(D, with_second);
#ifdef _OPENMP
    if (static_cast<std::size_t>(n) >= detail::kParallelMinPoints) {
        const int nt = omp_get_max_threads();
        std::vector<StatAccum> partial(static_cast<std::size_t>(nt),
                                       StatAccum(D, with_second));
#pragma omp parallel num_threads(nt)
        {
            const int t = omp_get_thread_num();
            const Eigen::Index chunk = (n + nt - 1) / nt;
            const Eigen::Index lo = std::min<Eigen::Index>(n, t * chunk);
            const Eigen::Index hi = std::min<Eigen::Index>(n, lo + chunk);
            stat_accumulate_range(L, e, emax, with_second, lo, hi,
                                  partial[static_cast<std::size_t>(t)]);
        }
        for (const StatAccum& p : partial) {
            total.s.add(p.s.get());
            for (std::size_t j = 0; j < total.t.size(); ++j)
                total.t[j].add(p.t[j].get());
            for (std::size_t j = 0; j < total.tt.size(); ++j)
                total.tt[j].add(p.tt[j].get());
        }
    } else {
        stat_accumulate_range(L, e, emax, with_second, 0, n, total);
    }
#else
    stat_accumulate_range(L, e, emax, with_second, 0, n, total);
#endif

    const double S = total.s.get();
    StatSums out;
    out.log_part = emax + std::log(S);
    out.ET.resize(D);
    for (int a = 0; a < D; ++a) {
        out.ET(a) = total.t[static_cast<std::size_t>(a)].get() / S;
    }
    if (with_second) {
        out.ETT.resize(D, D);
        int k = 0;
        for (int a = 0; a < D; ++a) {
            for (int b = 0; b <= a; ++b) {
                const double v = total.tt[static_cast<std::size_t>(k++)].get() / S;
                out.ETT(a, b) = v;
                out.ETT(b, a) = v;
            }
        }
    }
    return out;
}

}  // namespace

double log_unnormalized_pmf(const NaturalParam& xi, const Eigen::VectorXd& l) {
    return 2.0 * kPi * (-0.5 * l.dot(xi.xi2 * l) + l.dot(xi.xi1));
}

double pmf(const NaturalParam& xi, const Eigen::VectorXd& l, const Lattice& lat,
           const TruncationSpec& spec) {
    if (!lat.contains(l)) {
        throw ValidationError("pmf argument is not a lattice point");
    }
    return std::exp(log_unnormalized_pmf(xi, l) - log_theta(xi, lat, spec));
}

double pmf(const NaturalParam& xi, const Eigen::VectorXd& l,
           const TruncationSpec& spec) {
    return pmf(xi, l, Lattice::integer(xi.dim()), spec);
}

MomentParam moments_from_natural(const NaturalParam& xi, const Lattice& lat,
                                 const TruncationSpec& spec) {
    NaturalParam copy = xi;
    validate_natural(copy);
    const StatSums s = reduced_sums(copy, lat, spec, false);
    return unreduce_dual(s.ET, copy.dim());
}

MomentParam moments_from_natural(const NaturalParam& xi,
                                 const TruncationSpec& spec) {
    return moments_from_natural(xi, Lattice::integer(xi.dim()), spec);
}

OrdinaryParam ordinary_from_natural(const NaturalParam& xi, const Lattice& lat,
                                    const TruncationSpec& spec) {
    const MomentParam eta = moments_from_natural(xi, lat, spec);
    OrdinaryParam p;
    p.mu = eta.eta1 / (2.0 * kPi);
    p.sigma = -eta.eta2 / kPi - p.mu * p.mu.transpose();
    p.sigma = ((p.sigma + p.sigma.transpose()) / 2.0).eval();
    return p;
}

OrdinaryParam ordinary_from_natural(const NaturalParam& xi,
                                    const TruncationSpec& spec) {
    return ordinary_from_natural(xi, Lattice::integer(xi.dim()), spec);
}

double entropy(const NaturalParam& xi, const Lattice& lat,
               const TruncationSpec& spec) {
    NaturalParam copy = xi;
    validate_natural(copy);
    const StatSums s = reduced_sums(copy, lat, spec, false);
    return s.log_part - reduce_natural(copy).dot(s.ET);
}

double entropy(const NaturalParam& xi, const TruncationSpec& spec) {
    return entropy(xi, Lattice::integer(xi.dim()), spec);
}

double cross_entropy(const NaturalParam& xi, const NaturalParam& xi_to,
                     const Lattice& lat, const TruncationSpec& spec) {
    NaturalParam from = xi;
    NaturalParam to = xi_to;
    validate_natural(from);
    validate_natural(to);
    if (from.dim() != to.dim()) {
        throw ValidationError("cross_entropy arguments must share a dimension");
    }
    const StatSums s = reduced_sums(from, lat, spec, false);
    return log_theta(to, lat, spec) - reduce_natural(to).dot(s.ET);
}

double cross_entropy(const NaturalParam& xi, const NaturalParam& xi_to,
                     const TruncationSpec& spec) {
    return cross_entropy(xi, xi_to, Lattice::integer(xi.dim()), spec);
}

MomentParam mle(const Eigen::MatrixXd& x) {
    if (x.cols() == 0 || x.rows() == 0) {
        throw ValidationError("mle needs at least one observation");
    }
    const double n = static_cast<double>(x.cols());
    MomentParam eta;
    eta.eta1 = 2.0 * kPi * x.rowwise().mean();
    eta.eta2 = -kPi * (x * x.transpose()) / n;
    eta.eta2 = ((eta.eta2 + eta.eta2.transpose()) / 2.0).eval();
    return eta;
}

Eigen::Matrix2d fisher_info_1d(const NaturalParam& xi,
                               const TruncationSpec& spec) {
    NaturalParam copy = xi;
    validate_natural(copy);
    if (copy.dim() != 1) {
        throw ValidationError("fisher_info_1d requires a 1-D parameter");
    }
    const StatSums s =
        reduced_sums(copy, Lattice::integer(1), spec, true);
    const Eigen::MatrixXd cov = s.ETT - s.ET * s.ET.transpose();
    return cov;
}

NaturalParam natural_from_moments(const MomentParam& eta, const Lattice& lat,
                                  const NewtonOptions& opt,
                                  NewtonReport* report) {
    if (eta.dim() == 0 || eta.eta2.rows() != eta.dim() ||
        eta.eta2.cols() != eta.dim()) {
        throw ValidationError("moment parameter has inconsistent dimensions");
    }
    if (opt.max_iter < 1) throw ValidationError("max_iter must be at least 1");
    const OrdinaryParam p = ordinary_from_moment(eta);  // DegenerateSample gate
    const int d = eta.dim();

    NaturalParam xi = continuous_natural_from_moments(p);
    const Eigen::VectorXd target = reduce_dual(eta);

    Eigen::VectorXd xi_red = reduce_natural(xi);
    StatSums s = reduced_sums(xi, lat, opt.trunc, true);
    double res = (target - s.ET).lpNorm<Eigen::Infinity>();

    int iterations = 0;
    while (res > opt.tol) {
        if (iterations >= opt.max_iter) {
            throw NoConvergence("moment inversion still at residual " +
                                std::to_string(res) + " after " +
                                std::to_string(iterations) + " iterations");
        }
        Eigen::MatrixXd cov = s.ETT - s.ET * s.ET.transpose();
        if (!cov.allFinite()) {
            throw SingularHessian("covariance of sufficient statistics is not finite");
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
            throw SingularHessian("covariance of sufficient statistics is singular");
        }
        const Eigen::VectorXd delta = ldlt.solve(target - s.ET);
        if (!delta.allFinite()) {
            throw SingularHessian("Newton step is not finite");
        }

        double step = 1.0;
        bool accepted = false;
        for (int h = 0; h <= 30; ++h) {
            Eigen::VectorXd try_red = xi_red + step * delta;
            NaturalParam try_xi = unreduce_natural(try_red, d);
            if (in_cone(try_xi)) {
                StatSums try_s = reduced_sums(try_xi, lat, opt.trunc, true);
                const double try_res =
                    (target - try_s.ET).lpNorm<Eigen::Infinity>();
                if (try_res < res) {
                    xi_red = std::move(try_red);
                    xi = std::move(try_xi);
                    s = std::move(try_s);
                    res = try_res;
                    accepted = true;
                    break;
                }
            }
            step /= 2.0;
        }
        if (!accepted) {
            throw NoConvergence("Newton step damping failed at residual " +
                                std::to_string(res));
        }
        ++iterations;
    }

    if (report) {
        report->iterations = iterations;
        report->final_residual = res;
        report->psi = AugmentedNatural::from_natural(xi, s.log_part);
    }
    return xi;
}

NaturalParam natural_from_moments(const MomentParam& eta,
                                  const NewtonOptions& opt,
                                  NewtonReport* report) {
    return natural_from_moments(eta, Lattice::integer(eta.dim()), opt, report);
}

}  // namespace latnorm
