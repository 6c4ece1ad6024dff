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

#include "latnorm/theta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
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

void validate_spec(const TruncationSpec& spec) {
    if (!(spec.eps > 0.0) || !(spec.eps < 1.0)) {
        throw ValidationError("truncation eps must lie in (0, 1)");
    }
    if (!(spec.max_radius > 0.0)) {
        throw ValidationError("max_radius must be positive");
    }
    if (spec.max_points == 0) {
        throw ValidationError("max_points must be positive");
    }
}

// Window geometry in integer coordinates: each term of the sum equals
// exp(peak_log) * exp(-pi * q(l)) with q(l) = (l-m)'*xi2*(l-m), and
// q(l) = |U (z - z0)|^2 for l = B z + c, M = B'*xi2*B = U'U.
struct Geometry {
    Eigen::MatrixXd M;
    Eigen::VectorXd z0;
    double peak_log = 0.0;
    double lam_min = 0.0;
    double lam_max = 0.0;
    double log_count_factor = 0.0;  // log of the tail counting constant C
};

Geometry make_geometry(const NaturalParam& xi, const Lattice& lat) {
    const int d = xi.dim();
    if (lat.dim() != d) {
        throw ValidationError("lattice dimension does not match parameter");
    }
    Geometry g;
    const Eigen::MatrixXd& B = lat.basis();
    g.M = B.transpose() * xi.xi2 * B;
    g.M = ((g.M + g.M.transpose()) / 2.0).eval();

    Eigen::LLT<Eigen::MatrixXd> llt(xi.xi2);
    if (llt.info() != Eigen::Success) {
        throw ValidationError("xi2 is not positive definite");
    }
    const Eigen::VectorXd m = llt.solve(xi.xi1);
    g.peak_log = kPi * xi.xi1.dot(m);
    g.z0 = lat.coords(m);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.M,
                                                      Eigen::EigenvaluesOnly);
    g.lam_min = es.eigenvalues().minCoeff();
    g.lam_max = es.eigenvalues().maxCoeff();
    if (!(g.lam_min > 0.0)) {
        throw ValidationError("quadratic form is not positive definite on the lattice");
    }
    // Tail of the unit-spaced Gaussian sum, one factor per dimension:
    // sum_k exp(-pi*lam_min*(k-t)^2/2) <= 2 + sqrt(2/lam_min).
    g.log_count_factor = d * std::log(2.0 + std::sqrt(2.0 / g.lam_min));
    return g;
}

struct TruncationInfo {
    double radius = 0.0;
    double tail_bound = 0.0;
};

// Mass of terms outside radius R is <= exp(peak_log + log C - pi R^2 / 2);
// solve for the R that pushes it below eps, then pad R so the window always
// contains the lattice point nearest the mode.
TruncationInfo radius_for(const Geometry& g, const TruncationSpec& spec) {
    const double need = g.peak_log + g.log_count_factor - std::log(spec.eps);
    double R = std::sqrt(std::max(0.0, 2.0 * need / kPi));
    const int d = static_cast<int>(g.z0.size());
    const double r_cover = 0.505 * std::sqrt(static_cast<double>(d) * g.lam_max);
    R = std::max(R, r_cover);
    if (R > spec.max_radius) {
        throw RadiusCapExceeded("required truncation radius " + std::to_string(R) +
                                " exceeds max_radius " +
                                std::to_string(spec.max_radius));
    }
    TruncationInfo info;
    info.radius = R;
    info.tail_bound =
        std::exp(g.peak_log + g.log_count_factor - kPi * R * R / 2.0);
    return info;
}

// Depth-first integer enumeration of |U (z - z0)|^2 <= R^2 (U upper
// triangular), coordinates fixed from the last one down.
class Enumerator {
  public:
    Enumerator(const Eigen::MatrixXd& U, const Eigen::VectorXd& z0, double R,
               std::size_t max_points)
        : U_(U),
          z0_(z0),
          d_(static_cast<int>(z0.size())),
          r2_(R * R),
          fuzz_(1e-9 * (1.0 + R * R)),
          max_points_(max_points),
          z_(z0.size()) {}

    std::vector<std::int64_t> run() {
        descend(d_ - 1, 0.0);
        return std::move(out_);
    }

  private:
    void descend(int i, double partial) {
        if (partial > r2_ + fuzz_) return;
        const double w = std::sqrt(std::max(0.0, r2_ + fuzz_ - partial));
        double s = 0.0;
        for (int j = i + 1; j < d_; ++j) {
            s += U_(i, j) * (static_cast<double>(z_[j]) - z0_(j));
        }
        const double uii = U_(i, i);
        const double lo_r = z0_(i) + (-w - s) / uii;
        const double hi_r = z0_(i) + (w - s) / uii;
        const auto lo = static_cast<std::int64_t>(std::ceil(lo_r - 1e-9));
        const auto hi = static_cast<std::int64_t>(std::floor(hi_r + 1e-9));
        for (std::int64_t zi = lo; zi <= hi; ++zi) {
            z_[i] = zi;
            const double yi = uii * (static_cast<double>(zi) - z0_(i)) + s;
            const double next = partial + yi * yi;
            if (i == 0) {
                if (next <= r2_ + fuzz_) emit();
            } else {
                descend(i - 1, next);
            }
        }
    }

    void emit() {
        if (count_ == max_points_) {
            throw PointBudgetExceeded(
                "enumeration exceeds max_points = " + std::to_string(max_points_));
        }
        ++count_;
        for (int j = 0; j < d_; ++j) out_.push_back(z_[j]);
    }

    const Eigen::MatrixXd& U_;
    const Eigen::VectorXd& z0_;
    int d_;
    double r2_;
    double fuzz_;
    std::size_t max_points_;
    std::vector<std::int64_t> z_;
    std::vector<std::int64_t> out_;
    std::size_t count_ = 0;
};

PointSet pointset_from_flat(std::vector<std::int64_t> flat, int d,
                            const Lattice& lat) {
    const std::size_t n = flat.size() / static_cast<std::size_t>(d);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const std::int64_t* pa = flat.data() + a * d;
        const std::int64_t* pb = flat.data() + b * d;
        return std::lexicographical_compare(pa, pa + d, pb, pb + d);
    });
    PointSet ps;
    ps.z.resize(d, static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        for (int j = 0; j < d; ++j) {
            ps.z(j, static_cast<Eigen::Index>(k)) = flat[idx[k] * d + j];
        }
    }
    ps.l = lat.basis() * ps.z.cast<double>() +
           lat.shift().replicate(1, static_cast<Eigen::Index>(n));
    return ps;
}

// Exponents 2*pi*(-0.5*l'*xi2*l + l'*xi1) for every column of L at once.
Eigen::VectorXd exponents(const NaturalParam& xi, const Eigen::MatrixXd& L) {
    Eigen::VectorXd q =
        (xi.xi2 * L).cwiseProduct(L).colwise().sum().transpose();
    Eigen::VectorXd lin = L.transpose() * xi.xi1;
    return (-kPi) * q + (2.0 * kPi) * lin;
}

struct MomentAccum {
    Kahan s;
    std::vector<Kahan> m1;        // sum of l * w
    std::vector<Kahan> m2;        // sum of l l' * w, lower triangle packed
    explicit MomentAccum(int d)
        : m1(static_cast<std::size_t>(d)),
          m2(static_cast<std::size_t>(d * (d + 1) / 2)) {}
};

void accumulate_range(const Eigen::VectorXd& e, double emax,
                      const Eigen::MatrixXd* L, Eigen::Index begin,
                      Eigen::Index end, MomentAccum& acc) {
    const int d = L ? static_cast<int>(L->rows()) : 0;
    for (Eigen::Index i = begin; i < end; ++i) {
        const double w = std::exp(e(i) - emax);
        acc.s.add(w);
        if (L) {
            int k = 0;
            for (int a = 0; a < d; ++a) {
                const double la = (*L)(a, i);
                acc.m1[static_cast<std::size_t>(a)].add(la * w);
                for (int b = 0; b <= a; ++b) {
                    acc.m2[static_cast<std::size_t>(k++)].add(la * (*L)(b, i) * w);
                }
            }
        }
    }
}

// Scaled sums over the window: S = sum exp(e - emax) and, when L is given,
// the first and second moment sums with the same weights. Parallel path
// merges per-thread partials in thread order.
MomentAccum window_sums(const Eigen::VectorXd& e, double emax,
                        const Eigen::MatrixXd* L, bool parallel) {
    const int d = L ? static_cast<int>(L->rows()) : 0;
    const Eigen::Index n = e.size();
#ifdef _OPENMP
    if (parallel && static_cast<std::size_t>(n) >= detail::kParallelMinPoints) {
        const int nt = omp_get_max_threads();
        std::vector<MomentAccum> partial(static_cast<std::size_t>(nt),
                                         MomentAccum(d));
#pragma omp parallel num_threads(nt)
        {
            const int t = omp_get_thread_num();
            const Eigen::Index chunk = (n + nt - 1) / nt;
            const Eigen::Index lo = std::min<Eigen::Index>(n, t * chunk);
            const Eigen::Index hi = std::min<Eigen::Index>(n, lo + chunk);
            accumulate_range(e, emax, L, lo, hi,
                             partial[static_cast<std::size_t>(t)]);
        }
        MomentAccum total(d);
        for (const MomentAccum& p : partial) {
            total.s.add(p.s.get());
            for (std::size_t j = 0; j < total.m1.size(); ++j)
                total.m1[j].add(p.m1[j].get());
            for (std::size_t j = 0; j < total.m2.size(); ++j)
                total.m2[j].add(p.m2[j].get());
        }
        return total;
    }
#else
    (void)parallel;
#endif
    MomentAccum acc(d);
    accumulate_range(e, emax, L, 0, n, acc);
    return acc;
}

ThetaResult theta_impl(const NaturalParam& xi_in, const Lattice& lat,
                       const TruncationSpec& spec, bool allow_parallel) {
    NaturalParam xi = xi_in;
    validate_natural(xi);
    validate_spec(spec);
    const Geometry g = make_geometry(xi, lat);
    const TruncationInfo tr = radius_for(g, spec);
    const PointSet ps = enumerate_ellipsoid(xi, lat, tr.radius, spec.max_points);

    const Eigen::VectorXd e = exponents(xi, ps.l);
    const double emax = e.maxCoeff();
    const MomentAccum acc = window_sums(e, emax, &ps.l, allow_parallel);

    const int d = xi.dim();
    ThetaResult res;
    const double S = acc.s.get();
    res.log_value = emax + std::log(S);
    res.value = std::exp(res.log_value);
    res.grad_log_xi1.resize(d);
    res.grad_log_xi2.resize(d, d);
    int k = 0;
    for (int a = 0; a < d; ++a) {
        res.grad_log_xi1(a) = 2.0 * kPi * acc.m1[static_cast<std::size_t>(a)].get() / S;
        for (int b = 0; b <= a; ++b) {
            const double v = -kPi * acc.m2[static_cast<std::size_t>(k++)].get() / S;
            res.grad_log_xi2(a, b) = v;
            res.grad_log_xi2(b, a) = v;
        }
    }
    res.grad_xi1 = res.value * res.grad_log_xi1;
    res.grad_xi2 = res.value * res.grad_log_xi2;
    res.tail_bound = tr.tail_bound;
    res.points_used = ps.size();
    res.radius = tr.radius;
    return res;
}

}  // namespace

double truncation_radius(const NaturalParam& xi, const Lattice& lat,
                         const TruncationSpec& spec) {
    NaturalParam copy = xi;
    validate_natural(copy);
    validate_spec(spec);
    return radius_for(make_geometry(copy, lat), spec).radius;
}

double truncation_radius(const Eigen::MatrixXd& xi2, const Eigen::VectorXd& xi1,
                         double eps) {
    NaturalParam xi{xi1, xi2};
    TruncationSpec spec;
    spec.eps = eps;
    return truncation_radius(xi, Lattice::integer(xi.dim()), spec);
}

PointSet enumerate_ellipsoid(const NaturalParam& xi, const Lattice& lat,
                             double radius, std::size_t max_points) {
    NaturalParam copy = xi;
    validate_natural(copy);
    if (!(radius > 0.0)) throw ValidationError("enumeration radius must be positive");
    const Geometry g = make_geometry(copy, lat);
    Eigen::LLT<Eigen::MatrixXd> llt(g.M);
    if (llt.info() != Eigen::Success) {
        throw ValidationError("quadratic form is not positive definite on the lattice");
    }
    const Eigen::MatrixXd U = llt.matrixU();
    Enumerator en(U, g.z0, radius, max_points);
    return pointset_from_flat(en.run(), copy.dim(), lat);
}

ThetaResult theta(const NaturalParam& xi, const Lattice& lat,
                  const TruncationSpec& spec) {
    return theta_impl(xi, lat, spec, true);
}

ThetaResult theta(const NaturalParam& xi, const TruncationSpec& spec) {
    return theta_impl(xi, Lattice::integer(xi.dim()), spec, true);
}

ThetaResult theta_serial(const NaturalParam& xi, const Lattice& lat,
                         const TruncationSpec& spec) {
    return theta_impl(xi, lat, spec, false);
}

double log_theta(const NaturalParam& xi, const Lattice& lat,
                 const TruncationSpec& spec) {
    return theta(xi, lat, spec).log_value;
}

double log_theta(const NaturalParam& xi, const TruncationSpec& spec) {
    return theta(xi, spec).log_value;
}

JointTheta log_theta_joint(std::span<const NaturalParam> xis, const Lattice& lat,
                           const TruncationSpec& spec) {
    if (xis.empty()) throw ValidationError("log_theta_joint needs arguments");
    validate_spec(spec);
    const int d = xis[0].dim();
    std::vector<double> tails;
    std::vector<std::int64_t> flat;
    for (const NaturalParam& xi : xis) {
        NaturalParam copy = xi;
        if (copy.dim() != d) {
            throw ValidationError("joint theta arguments must share a dimension");
        }
        if (!in_cone(copy)) {
            throw DomainError("joint theta argument leaves the positive-definite cone");
        }
        validate_natural(copy);
        const Geometry g = make_geometry(copy, lat);
        const TruncationInfo tr = radius_for(g, spec);
        tails.push_back(tr.tail_bound);
        Eigen::LLT<Eigen::MatrixXd> llt(g.M);
        const Eigen::MatrixXd U = llt.matrixU();
        Enumerator en(U, g.z0, tr.radius, spec.max_points);
        std::vector<std::int64_t> mine = en.run();
        flat.insert(flat.end(), mine.begin(), mine.end());
        if (flat.size() / static_cast<std::size_t>(d) > spec.max_points) {
            throw PointBudgetExceeded("union window exceeds max_points");
        }
    }
    // Dedup the union in lexicographic order.
    const std::size_t n_all = flat.size() / static_cast<std::size_t>(d);
    std::vector<std::size_t> idx(n_all);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto cmp = [&](std::size_t a, std::size_t b) {
        const std::int64_t* pa = flat.data() + a * d;
        const std::int64_t* pb = flat.data() + b * d;
        return std::lexicographical_compare(pa, pa + d, pb, pb + d);
    };
    auto eq = [&](std::size_t a, std::size_t b) {
        return std::equal(flat.data() + a * d, flat.data() + (a + 1) * d,
                          flat.data() + b * d);
    };
    std::sort(idx.begin(), idx.end(), cmp);
    idx.erase(std::unique(idx.begin(), idx.end(), eq), idx.end());

    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> z(
        d, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
        for (int j = 0; j < d; ++j) {
            z(j, static_cast<Eigen::Index>(k)) =
                flat[idx[k] * static_cast<std::size_t>(d) + j];
        }
    }
    const Eigen::MatrixXd L =
        lat.basis() * z.cast<double>() +
        lat.shift().replicate(1, static_cast<Eigen::Index>(idx.size()));

    JointTheta out;
    out.points_used = idx.size();
    for (std::size_t i = 0; i < xis.size(); ++i) {
        const Eigen::VectorXd e = exponents(xis[i], L);
        const double emax = e.maxCoeff();
        const MomentAccum acc = window_sums(e, emax, nullptr, true);
        const double F = emax + std::log(acc.s.get());
        out.log_values.push_back(F);
        out.rel_tails.push_back(tails[i] * std::exp(-F));
    }
    return out;
}

}  // namespace latnorm
