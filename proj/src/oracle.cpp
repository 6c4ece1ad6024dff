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

#include "latnorm/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "latnorm/errors.hpp"

namespace latnorm::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

void check(const NaturalParam& xi, const BoxSpec& box) {
    NaturalParam copy = xi;
    validate_natural(copy);
    if (box.half_width < 1) throw ValidationError("box half_width must be >= 1");
}

// Visits every integer point of [-W, W]^d in odometer order; shell marks
// points touching the box boundary.
template <typename F>
void for_each_box(int d, long W, F&& f) {
    std::vector<long> z(static_cast<std::size_t>(d), -W);
    Eigen::VectorXd l(d);
    for (;;) {
        bool shell = false;
        for (int i = 0; i < d; ++i) {
            l(i) = static_cast<double>(z[static_cast<std::size_t>(i)]);
            if (std::abs(z[static_cast<std::size_t>(i)]) == W) shell = true;
        }
        f(l, shell);
        int i = 0;
        while (i < d && ++z[static_cast<std::size_t>(i)] > W) {
            z[static_cast<std::size_t>(i)] = -W;
            ++i;
        }
        if (i == d) break;
    }
}

double exponent_at(const NaturalParam& xi, const Eigen::VectorXd& l) {
    return 2.0 * kPi * (-0.5 * l.dot(xi.xi2 * l) + l.dot(xi.xi1));
}

// Box-normalized pmf as a flat array in odometer order, with the shell-mass
// self-check. log_norm receives log of the box sum of unnormalized masses;
// logp (when non-null) receives log-probabilities, which stay finite where
// the probability itself underflows.
std::vector<double> box_pmf(const NaturalParam& xi, const BoxSpec& box,
                            double* log_norm,
                            std::vector<double>* logp = nullptr) {
    check(xi, box);
    const int d = xi.dim();
    std::vector<double> e;
    double emax = -std::numeric_limits<double>::infinity();
    for_each_box(d, box.half_width, [&](const Eigen::VectorXd& l, bool) {
        e.push_back(exponent_at(xi, l));
        if (e.back() > emax) emax = e.back();
    });
    double total = 0.0;
    double shell = 0.0;
    std::size_t idx = 0;
    for_each_box(d, box.half_width, [&](const Eigen::VectorXd&, bool is_shell) {
        const double w = std::exp(e[idx++] - emax);
        total += w;
        if (is_shell) shell += w;
    });
    if (shell > box.tail_check * total) {
        throw TailTooFat("outermost box shell carries relative mass " +
                         std::to_string(shell / total));
    }
    const double log_total = std::log(total);
    std::vector<double> p(e.size());
    if (logp) logp->resize(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        p[i] = std::exp(e[i] - emax) / total;
        if (logp) (*logp)[i] = e[i] - emax - log_total;
    }
    if (log_norm) *log_norm = emax + log_total;
    return p;
}

void check_pair(const NaturalParam& xi, const NaturalParam& xi_to) {
    if (xi.dim() != xi_to.dim()) {
        throw ValidationError("oracle divergence arguments must share a dimension");
    }
}

// sum_i p_i^a * q_i^b computed through log-probabilities, which keeps
// mixed powers finite where a pmf value alone underflows (e.g. p^2 / q).
double power_sum(const std::vector<double>& logp, const std::vector<double>& logq,
                 double a, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < logp.size(); ++i) {
        s += std::exp(a * logp[i] + b * logq[i]);
    }
    return s;
}

double power_sum(const std::vector<double>& logp, double a) {
    double s = 0.0;
    for (double lp : logp) s += std::exp(a * lp);
    return s;
}

}  // namespace

double oracle_log_theta(const NaturalParam& xi, const BoxSpec& box) {
    double log_norm = 0.0;
    box_pmf(xi, box, &log_norm);
    return log_norm;
}

double oracle_theta(const NaturalParam& xi, const BoxSpec& box) {
    return std::exp(oracle_log_theta(xi, box));
}

double oracle_pmf(const NaturalParam& xi, const Eigen::VectorXd& l,
                  const BoxSpec& box) {
    return std::exp(exponent_at(xi, l) - oracle_log_theta(xi, box));
}

MomentParam oracle_moments(const NaturalParam& xi, const BoxSpec& box) {
    const std::vector<double> p = box_pmf(xi, box, nullptr);
    const int d = xi.dim();
    Eigen::VectorXd m1 = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(d, d);
    std::size_t idx = 0;
    for_each_box(d, box.half_width, [&](const Eigen::VectorXd& l, bool) {
        m1 += p[idx] * l;
        m2 += p[idx] * (l * l.transpose());
        ++idx;
    });
    MomentParam eta;
    eta.eta1 = 2.0 * kPi * m1;
    eta.eta2 = -kPi * m2;
    return eta;
}

double oracle_entropy(const NaturalParam& xi, const BoxSpec& box) {
    const std::vector<double> p = box_pmf(xi, box, nullptr);
    double h = 0.0;
    for (double v : p) {
        if (v > 0.0) h -= v * std::log(v);
    }
    return h;
}

double oracle_cross_entropy(const NaturalParam& xi, const NaturalParam& xi_to,
                            const BoxSpec& box) {
    check_pair(xi, xi_to);
    std::vector<double> logq;
    const std::vector<double> p = box_pmf(xi, box, nullptr);
    box_pmf(xi_to, box, nullptr, &logq);
    double h = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) h -= p[i] * logq[i];
    }
    return h;
}

double oracle_kl(const NaturalParam& xi, const NaturalParam& xi_to,
                 const BoxSpec& box) {
    check_pair(xi, xi_to);
    std::vector<double> logp, logq;
    const std::vector<double> p = box_pmf(xi, box, nullptr, &logp);
    box_pmf(xi_to, box, nullptr, &logq);
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) kl += p[i] * (logp[i] - logq[i]);
    }
    return kl;
}

double oracle_jensen_skew(const NaturalParam& xi, const NaturalParam& xi_to,
                          double alpha, const BoxSpec& box) {
    check_pair(xi, xi_to);
    std::vector<double> logp, logq;
    box_pmf(xi, box, nullptr, &logp);
    box_pmf(xi_to, box, nullptr, &logq);
    return -std::log(power_sum(logp, logq, alpha, 1.0 - alpha));
}

double oracle_renyi(const NaturalParam& xi, const NaturalParam& xi_to,
                    double alpha, const BoxSpec& box) {
    return oracle_jensen_skew(xi, xi_to, alpha, box) / (1.0 - alpha);
}

double oracle_bhattacharyya(const NaturalParam& xi, const NaturalParam& xi_to,
                            const BoxSpec& box) {
    return oracle_jensen_skew(xi, xi_to, 0.5, box);
}

double oracle_hellinger_squared(const NaturalParam& xi, const NaturalParam& xi_to,
                                const BoxSpec& box) {
    return 1.0 - std::exp(-oracle_jensen_skew(xi, xi_to, 0.5, box));
}

double oracle_amari_alpha(const NaturalParam& xi, const NaturalParam& xi_to,
                          double alpha, const BoxSpec& box) {
    const double j = oracle_jensen_skew(xi, xi_to, alpha, box);
    return (1.0 - std::exp(-j)) / (alpha * (1.0 - alpha));
}

double oracle_sharma_mittal(const NaturalParam& xi, const NaturalParam& xi_to,
                            double alpha, double beta, const BoxSpec& box) {
    const double j = oracle_jensen_skew(xi, xi_to, alpha, box);
    const double rho = std::exp(-j);
    return (std::pow(rho, (1.0 - beta) / (1.0 - alpha)) - 1.0) / (beta - 1.0);
}

double oracle_i_alpha_beta(const NaturalParam& xi, const NaturalParam& xi_to,
                           double alpha, double beta, const BoxSpec& box) {
    check_pair(xi, xi_to);
    std::vector<double> logp, logq;
    box_pmf(xi, box, nullptr, &logp);
    box_pmf(xi_to, box, nullptr, &logq);
    return power_sum(logp, logq, alpha, beta);
}

double oracle_gamma(const NaturalParam& xi, const NaturalParam& xi_to,
                    double gamma, const BoxSpec& box) {
    check_pair(xi, xi_to);
    std::vector<double> logp, logq;
    box_pmf(xi, box, nullptr, &logp);
    box_pmf(xi_to, box, nullptr, &logq);
    const double sp = power_sum(logp, gamma);
    const double sq = power_sum(logq, gamma);
    const double spq = power_sum(logp, logq, 1.0, gamma - 1.0);
    return (std::log(sp) + (gamma - 1.0) * std::log(sq) -
            gamma * std::log(spq)) /
           (gamma * (gamma - 1.0));
}

double oracle_hoelder(const NaturalParam& xi, const NaturalParam& xi_to,
                      double gamma, double alpha_h, const BoxSpec& box) {
    check_pair(xi, xi_to);
    const double beta_h = alpha_h / (alpha_h - 1.0);
    std::vector<double> logp, logq;
    box_pmf(xi, box, nullptr, &logp);
    box_pmf(xi_to, box, nullptr, &logq);
    const double sp = power_sum(logp, gamma);
    const double sq = power_sum(logq, gamma);
    const double smix = power_sum(logp, logq, gamma / alpha_h, gamma / beta_h);
    return std::abs(std::log(sp) / alpha_h + std::log(sq) / beta_h -
                    std::log(smix));
}

double oracle_cauchy_schwarz(const NaturalParam& xi, const NaturalParam& xi_to,
                             const BoxSpec& box) {
    check_pair(xi, xi_to);
    std::vector<double> logp, logq;
    box_pmf(xi, box, nullptr, &logp);
    box_pmf(xi_to, box, nullptr, &logq);
    return 0.5 * std::log(power_sum(logp, 2.0)) +
           0.5 * std::log(power_sum(logq, 2.0)) -
           std::log(power_sum(logp, logq, 1.0, 1.0));
}

}  // namespace latnorm::oracle
