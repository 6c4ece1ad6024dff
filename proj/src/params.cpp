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

#include "latnorm/params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "latnorm/errors.hpp"

namespace latnorm {

namespace {
constexpr double kPi = std::numbers::pi;

bool is_positive_definite(const Eigen::MatrixXd& m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    return llt.info() == Eigen::Success;
}
}  // namespace

SufficientStat sufficient_stat(const Eigen::VectorXd& x) {
    SufficientStat t;
    t.t1 = 2.0 * kPi * x;
    t.t2 = -kPi * (x * x.transpose());
    return t;
}

double pair_inner(const Eigen::VectorXd& a1, const Eigen::MatrixXd& A2,
                  const Eigen::VectorXd& b1, const Eigen::MatrixXd& B2) {
    return a1.dot(b1) + A2.cwiseProduct(B2).sum();
}

void validate_natural(NaturalParam& xi, double sym_tol) {
    const int d = xi.dim();
    if (d == 0) throw ValidationError("natural parameter has dimension 0");
    if (xi.xi2.rows() != d || xi.xi2.cols() != d) {
        throw ValidationError("xi2 must be " + std::to_string(d) + " x " +
                              std::to_string(d));
    }
    if (!xi.xi1.allFinite() || !xi.xi2.allFinite()) {
        throw ValidationError("natural parameter has non-finite entries");
    }
    const double scale = std::max(1.0, xi.xi2.cwiseAbs().maxCoeff());
    const double asym = (xi.xi2 - xi.xi2.transpose()).cwiseAbs().maxCoeff();
    if (asym > sym_tol * scale) {
        throw ValidationError("xi2 is not symmetric (max asymmetry " +
                              std::to_string(asym) + ")");
    }
    xi.xi2 = ((xi.xi2 + xi.xi2.transpose()) / 2.0).eval();
    if (!is_positive_definite(xi.xi2)) {
        throw ValidationError("xi2 is not positive definite");
    }
}

bool in_cone(const NaturalParam& xi) {
    if (!xi.xi1.allFinite() || !xi.xi2.allFinite()) return false;
    return is_positive_definite(xi.xi2);
}

void require_in_cone(const NaturalParam& xi, const char* what) {
    if (!in_cone(xi)) {
        throw DomainError(std::string(what) +
                          " leaves the positive-definite cone");
    }
}

MomentParam moment_from_ordinary(const OrdinaryParam& p) {
    MomentParam eta;
    eta.eta1 = 2.0 * kPi * p.mu;
    eta.eta2 = -kPi * (p.sigma + p.mu * p.mu.transpose());
    return eta;
}

OrdinaryParam ordinary_from_moment(const MomentParam& eta) {
    OrdinaryParam p;
    p.mu = eta.eta1 / (2.0 * kPi);
    p.sigma = -eta.eta2 / kPi - p.mu * p.mu.transpose();
    p.sigma = ((p.sigma + p.sigma.transpose()) / 2.0).eval();
    if (!is_positive_definite(p.sigma)) {
        throw DegenerateSample(
            "moment parameter implies a non-positive-definite covariance");
    }
    return p;
}

NaturalParam continuous_natural_from_moments(const OrdinaryParam& p) {
    Eigen::LLT<Eigen::MatrixXd> llt(p.sigma);
    if (llt.info() != Eigen::Success) {
        throw ValidationError("sigma is not positive definite");
    }
    NaturalParam xi;
    Eigen::MatrixXd prec = llt.solve(Eigen::MatrixXd::Identity(p.dim(), p.dim()));
    xi.xi2 = ((prec + prec.transpose()) / 2.0).eval() / (2.0 * kPi);
    xi.xi1 = llt.solve(p.mu) / (2.0 * kPi);
    return xi;
}

NaturalParam std_natural(int d) {
    NaturalParam xi;
    xi.xi1 = Eigen::VectorXd::Zero(d);
    xi.xi2 = kStdXi2 * Eigen::MatrixXd::Identity(d, d);
    return xi;
}

int reduced_dim(int d) { return d * (d + 3) / 2; }

Eigen::VectorXd reduce_natural(const NaturalParam& xi) {
    const int d = xi.dim();
    Eigen::VectorXd v(reduced_dim(d));
    v.head(d) = xi.xi1;
    for (int i = 0; i < d; ++i) v(d + i) = xi.xi2(i, i);
    int k = 2 * d;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) v(k++) = xi.xi2(i, j);
    return v;
}

NaturalParam unreduce_natural(const Eigen::VectorXd& v, int d) {
    NaturalParam xi;
    xi.xi1 = v.head(d);
    xi.xi2.setZero(d, d);
    for (int i = 0; i < d; ++i) xi.xi2(i, i) = v(d + i);
    int k = 2 * d;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            xi.xi2(i, j) = xi.xi2(j, i) = v(k++);
        }
    return xi;
}

Eigen::VectorXd reduce_dual(const MomentParam& eta) {
    const int d = eta.dim();
    Eigen::VectorXd v(reduced_dim(d));
    v.head(d) = eta.eta1;
    for (int i = 0; i < d; ++i) v(d + i) = eta.eta2(i, i);
    int k = 2 * d;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) v(k++) = 2.0 * eta.eta2(i, j);
    return v;
}

MomentParam unreduce_dual(const Eigen::VectorXd& v, int d) {
    MomentParam eta;
    eta.eta1 = v.head(d);
    eta.eta2.setZero(d, d);
    for (int i = 0; i < d; ++i) eta.eta2(i, i) = v(d + i);
    int k = 2 * d;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            eta.eta2(i, j) = eta.eta2(j, i) = v(k++) / 2.0;
        }
    return eta;
}

Eigen::VectorXd reduced_stat(const Eigen::VectorXd& x) {
    const int d = static_cast<int>(x.size());
    Eigen::VectorXd t(reduced_dim(d));
    t.head(d) = 2.0 * kPi * x;
    for (int i = 0; i < d; ++i) t(d + i) = -kPi * x(i) * x(i);
    int k = 2 * d;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) t(k++) = -2.0 * kPi * x(i) * x(j);
    return t;
}

AugmentedNatural AugmentedNatural::from_natural(const NaturalParam& xi,
                                                double log_part) {
    AugmentedNatural a;
    a.psi0 = log_part;
    a.psi_rest = -reduce_natural(xi);
    a.d = xi.dim();
    return a;
}

NaturalParam AugmentedNatural::to_natural() const {
    return unreduce_natural(-psi_rest, d);
}

}  // namespace latnorm
