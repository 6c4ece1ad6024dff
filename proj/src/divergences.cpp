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

#include "latnorm/divergences.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "latnorm/errors.hpp"

namespace latnorm {

namespace {

constexpr double kEpsMach = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

struct Prepared {
    NaturalParam a;
    NaturalParam b;
    Lattice lat;
    TruncationSpec trunc;
};

Prepared prep(const NaturalParam& xi, const NaturalParam& xi_to,
              const DivOptions& opt) {
    Prepared p{xi, xi_to,
               opt.lattice ? *opt.lattice : Lattice::integer(xi.dim()),
               opt.trunc};
    validate_natural(p.a);
    validate_natural(p.b);
    if (p.a.dim() != p.b.dim()) {
        throw ValidationError("divergence arguments must share a dimension");
    }
    return p;
}

NaturalParam lin_comb(double wa, const NaturalParam& a, double wb,
                      const NaturalParam& b) {
    NaturalParam out;
    out.xi1 = wa * a.xi1 + wb * b.xi1;
    out.xi2 = wa * a.xi2 + wb * b.xi2;
    return out;
}

// First-order error estimate for sum_i w_i F_i evaluated on the shared
// union window: truncation tails largely cancel between nearby arguments
// (kept as 2 * sum of relative tail bounds) plus a float-cancellation term.
double est_error(const std::vector<double>& w, const JointTheta& jt) {
    double tail = 0.0;
    double fp = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        tail += std::abs(w[i]) * jt.rel_tails[i];
        fp += std::abs(w[i] * jt.log_values[i]);
    }
    return 2.0 * tail + 4.0 * kEpsMach * fp;
}

DivergenceResult make_result(DivergenceKind kind, double value, int evals,
                             double est, double alpha = 0.0, double beta = 0.0,
                             double gamma = 0.0) {
    DivergenceResult r;
    r.value = value;
    r.kind = kind;
    r.alpha = alpha;
    r.beta = beta;
    r.gamma = gamma;
    r.theta_evals = evals;
    r.est_abs_error = est;
    return r;
}

// J_{F,alpha} with its error estimate; shared by everything Jensen-shaped.
struct JensenEval {
    double value = 0.0;
    double est = 0.0;
    int evals = 3;
};

JensenEval jensen_core(const Prepared& p, double alpha) {
    const NaturalParam mix = lin_comb(alpha, p.a, 1.0 - alpha, p.b);
    require_in_cone(mix, "interpolated parameter");
    const NaturalParam args[] = {p.a, p.b, mix};
    const JointTheta jt = log_theta_joint(args, p.lat, p.trunc);
    JensenEval je;
    je.value = alpha * jt.log_values[0] + (1.0 - alpha) * jt.log_values[1] -
               jt.log_values[2];
    je.est = est_error({alpha, 1.0 - alpha, 1.0}, jt);
    return je;
}

}  // namespace

const char* divergence_kind_name(DivergenceKind kind) {
    switch (kind) {
        case DivergenceKind::KlBregman: return "kl";
        case DivergenceKind::KlMixed: return "kl_mixed";
        case DivergenceKind::Renyi: return "renyi";
        case DivergenceKind::JensenSkew: return "jensen";
        case DivergenceKind::Bhattacharyya: return "bhattacharyya";
        case DivergenceKind::BhattCoefficient: return "bhatt_coefficient";
        case DivergenceKind::SkewedBhattCoefficient:
            return "skewed_bhatt_coefficient";
        case DivergenceKind::Hellinger2: return "hellinger2";
        case DivergenceKind::AmariAlpha: return "amari";
        case DivergenceKind::SharmaMittal: return "sharma_mittal";
        case DivergenceKind::Gamma: return "gamma";
        case DivergenceKind::Hoelder: return "hoelder";
        case DivergenceKind::CauchySchwarz: return "cauchy_schwarz";
        case DivergenceKind::IAlphaBeta: return "i_alpha_beta";
        case DivergenceKind::Chernoff: return "chernoff";
    }
    return "unknown";
}

DivergenceKind divergence_kind_from_name(const std::string& name) {
    for (int k = 0; k <= static_cast<int>(DivergenceKind::Chernoff); ++k) {
        const auto kind = static_cast<DivergenceKind>(k);
        if (name == divergence_kind_name(kind)) return kind;
    }
    throw ValidationError("unknown divergence kind '" + name + "'");
}

DivergenceResult jensen_skew(const NaturalParam& xi, const NaturalParam& xi_to,
                             double alpha, const DivOptions& opt) {
    const Prepared p = prep(xi, xi_to, opt);
    const JensenEval je = jensen_core(p, alpha);
    return make_result(DivergenceKind::JensenSkew, je.value, je.evals, je.est,
                       alpha);
}

DivergenceResult renyi_divergence(const NaturalParam& xi, const NaturalParam& xi_to,
                                  double alpha, const DivOptions& opt) {
    if (!(alpha > 0.0) || alpha == 1.0) {
        throw ValidationError("renyi alpha must be positive and != 1");
    }
    const Prepared p = prep(xi, xi_to, opt);
    const JensenEval je = jensen_core(p, alpha);
    return make_result(DivergenceKind::Renyi, je.value / (1.0 - alpha), je.evals,
                       je.est / std::abs(1.0 - alpha), alpha);
}

DivergenceResult bhattacharyya_distance(const NaturalParam& xi,
                                        const NaturalParam& xi_to,
                                        const DivOptions& opt) {
    const Prepared p = prep(xi, xi_to, opt);
    const JensenEval je = jensen_core(p, 0.5);
    return make_result(DivergenceKind::Bhattacharyya, je.value, je.evals, je.est,
                       0.5);
}

DivergenceResult bhattacharyya_coefficient(const NaturalParam& xi,
                                           const NaturalParam& xi_to,
                                           const DivOptions& opt) {
    const Prepared p = prep(xi, xi_to, opt);
    const JensenEval je = jensen_core(p, 0.5);
    const double rho = std::exp(-je.value);
    return make_result(DivergenceKind::BhattCoefficient, rho, je.evals,
                       rho * je.est, 0.5);
}

DivergenceResult skewed_bhattacharyya_coefficient(const NaturalParam& xi,
                                                  const NaturalParam& xi_to,
                                                  double alpha,
                                                  const DivOptions& opt) {
    const Prepared p = prep(xi, xi_to, opt);
    const JensenEval je = jensen_core(p, alpha);
    const double rho = std::exp(-je.value);
    return make_result(DivergenceKind::SkewedBhattCoefficient, rho, je.evals,
                       rho * je.est, alpha);
}

DivergenceResult hellinger_squared(const NaturalParam& xi, const NaturalParam& xi_to,
                                   const DivOptions& opt) {
    const Prepared p = prep(xi, xi_to, opt);
    const JensenEval je = jensen_core(p, 0.5);
    return make_result(DivergenceKind::Hellinger2, -std::expm1(-je.value),
                       je.evals, std::exp(-je.value) * je.est, 0.5);
}

DivergenceResult amari_alpha_divergence(const NaturalParam& xi,
                                        const NaturalParam& xi_to, double alpha,
                                        const DivOptions& opt) {
    if (alpha == 0.0 || alpha == 1.0) {
        throw ValidationError("amari alpha must avoid 0 and 1");
    }
    const Prepared p = prep(xi, xi_to, opt);
    const JensenEval je = jensen_core(p, alpha);
    const double denom = alpha * (1.0 - alpha);
    return make_result(DivergenceKind::AmariAlpha, -std::expm1(-je.value) / denom,
                       je.evals, std::exp(-je.value) * je.est / std::abs(denom),
                       alpha);
}

DivergenceResult sharma_mittal(const NaturalParam& xi, const NaturalParam& xi_to,
                               double alpha, double beta, const DivOptions& opt) {
    if (!(alpha > 0.0) || alpha == 1.0 || beta == 1.0) {
        throw ValidationError(
            "sharma_mittal needs alpha > 0, alpha != 1 and beta != 1");
    }
    const Prepared p = prep(xi, xi_to, opt);
    const JensenEval je = jensen_core(p, alpha);
    const double q = (1.0 - beta) / (1.0 - alpha);
    const double value = std::expm1(-q * je.value) / (beta - 1.0);
    const double est =
        std::exp(-q * je.value) * std::abs(q) * je.est / std::abs(beta - 1.0);
    return make_result(DivergenceKind::SharmaMittal, value, je.evals, est, alpha,
                       beta);
}

DivergenceResult i_alpha_beta(const NaturalParam& xi, const NaturalParam& xi_to,
                              double alpha, double beta, const DivOptions& opt) {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw ValidationError("i_alpha_beta needs positive alpha and beta");
    }
    const Prepared p = prep(xi, xi_to, opt);
    const NaturalParam comb = lin_comb(alpha, p.a, beta, p.b);
    require_in_cone(comb, "scaled parameter combination");
    const NaturalParam args[] = {comb, p.a, p.b};
    const JointTheta jt = log_theta_joint(args, p.lat, p.trunc);
    const double expo =
        jt.log_values[0] - alpha * jt.log_values[1] - beta * jt.log_values[2];
    const double value = std::exp(expo);
    const double est = value * est_error({1.0, alpha, beta}, jt);
    return make_result(DivergenceKind::IAlphaBeta, value, 3, est, alpha, beta);
}

DivergenceResult gamma_divergence(const NaturalParam& xi, const NaturalParam& xi_to,
                                  double gamma, const DivOptions& opt) {
    if (!(gamma > 0.0) || gamma == 1.0) {
        throw ValidationError("gamma must be positive and != 1");
    }
    const Prepared p = prep(xi, xi_to, opt);
    const NaturalParam ga = lin_comb(gamma, p.a, 0.0, p.b);
    const NaturalParam gb = lin_comb(0.0, p.a, gamma, p.b);
    const NaturalParam mix = lin_comb(1.0, p.a, gamma - 1.0, p.b);
    require_in_cone(mix, "gamma-mixture parameter");
    const NaturalParam args[] = {ga, gb, mix};
    const JointTheta jt = log_theta_joint(args, p.lat, p.trunc);
    const double denom = gamma * (gamma - 1.0);
    const double value = (jt.log_values[0] + (gamma - 1.0) * jt.log_values[1] -
                          gamma * jt.log_values[2]) /
                         denom;
    const double est =
        est_error({1.0, gamma - 1.0, gamma}, jt) / std::abs(denom);
    return make_result(DivergenceKind::Gamma, value, 3, est, 0.0, 0.0, gamma);
}

DivergenceResult hoelder_divergence(const NaturalParam& xi, const NaturalParam& xi_to,
                                    double gamma, double alpha_h,
                                    const DivOptions& opt) {
    if (!(alpha_h > 1.0)) {
        throw ConjugateExponentError("hoelder exponent must satisfy alpha_h > 1");
    }
    if (!(gamma > 0.0)) throw ValidationError("hoelder gamma must be positive");
    const double beta_h = alpha_h / (alpha_h - 1.0);
    const Prepared p = prep(xi, xi_to, opt);
    const NaturalParam ga = lin_comb(gamma, p.a, 0.0, p.b);
    const NaturalParam gb = lin_comb(0.0, p.a, gamma, p.b);
    const NaturalParam mix = lin_comb(gamma / alpha_h, p.a, gamma / beta_h, p.b);
    const NaturalParam args[] = {ga, gb, mix};
    const JointTheta jt = log_theta_joint(args, p.lat, p.trunc);
    const double inner = jt.log_values[0] / alpha_h + jt.log_values[1] / beta_h -
                         jt.log_values[2];
    const double est = est_error({1.0 / alpha_h, 1.0 / beta_h, 1.0}, jt);
    return make_result(DivergenceKind::Hoelder, std::abs(inner), 3, est, alpha_h,
                       0.0, gamma);
}

DivergenceResult cauchy_schwarz(const NaturalParam& xi, const NaturalParam& xi_to,
                                const DivOptions& opt) {
    const Prepared p = prep(xi, xi_to, opt);
    const NaturalParam da = lin_comb(2.0, p.a, 0.0, p.b);
    const NaturalParam db = lin_comb(0.0, p.a, 2.0, p.b);
    const NaturalParam mix = lin_comb(1.0, p.a, 1.0, p.b);
    const NaturalParam args[] = {da, db, mix};
    const JointTheta jt = log_theta_joint(args, p.lat, p.trunc);
    const double value =
        0.5 * jt.log_values[0] + 0.5 * jt.log_values[1] - jt.log_values[2];
    const double est = est_error({0.5, 0.5, 1.0}, jt);
    return make_result(DivergenceKind::CauchySchwarz, value, 3, est);
}

DivergenceResult kl_bregman(const NaturalParam& xi, const NaturalParam& xi_to,
                            const DivOptions& opt) {
    const Prepared p = prep(xi, xi_to, opt);
    const ThetaResult ta = theta(p.a, p.lat, p.trunc);
    const ThetaResult tb = theta(p.b, p.lat, p.trunc);
    const double ip = pair_inner(p.b.xi1 - p.a.xi1, p.b.xi2 - p.a.xi2,
                                 ta.grad_log_xi1, ta.grad_log_xi2);
    const double value = tb.log_value - ta.log_value - ip;
    const double est =
        2.0 * (ta.tail_bound * std::exp(-ta.log_value) +
               tb.tail_bound * std::exp(-tb.log_value)) +
        4.0 * kEpsMach *
            (std::abs(ta.log_value) + std::abs(tb.log_value) + std::abs(ip));
    return make_result(DivergenceKind::KlBregman, value, 2, est);
}

DivergenceResult kl_mixed(const NaturalParam& xi, const NaturalParam& xi_to,
                          const DivOptions& opt) {
    const Prepared p = prep(xi, xi_to, opt);
    const double fa = log_theta(p.a, p.lat, p.trunc);
    const double fb = log_theta(p.b, p.lat, p.trunc);
    const OrdinaryParam ord = ordinary_from_natural(p.a, p.lat, p.trunc);
    const Eigen::MatrixXd exx = ord.sigma + ord.mu * ord.mu.transpose();
    const double value = fb - fa +
                         2.0 * kPi * ord.mu.dot(p.a.xi1 - p.b.xi1) -
                         kPi * ((p.a.xi2 - p.b.xi2).cwiseProduct(exx)).sum();
    const double est = 4.0 * kEpsMach * (std::abs(fa) + std::abs(fb) + 1.0) +
                       4.0 * p.trunc.eps;
    return make_result(DivergenceKind::KlMixed, value, 3, est);
}

ChernoffResult chernoff_information(const NaturalParam& xi, const NaturalParam& xi_to,
                                    double bracket_tol, const DivOptions& opt) {
    if (!(bracket_tol > 0.0)) {
        throw ValidationError("bracket tolerance must be positive");
    }
    const Prepared p = prep(xi, xi_to, opt);
    const double fa = log_theta(p.a, p.lat, p.trunc);
    const double fb = log_theta(p.b, p.lat, p.trunc);
    int evals = 2;

    // g(a) = KL(mix_a : xi) - KL(mix_a : xi') = F - F' - <xi - xi', grad F(mix_a)>;
    // note g is also dJ_{F,a}/da, so the value is stationary at the root.
    auto g = [&](double a) {
        const NaturalParam mix = lin_comb(a, p.a, 1.0 - a, p.b);
        const ThetaResult tm = theta(mix, p.lat, p.trunc);
        ++evals;
        return fa - fb -
               pair_inner(p.a.xi1 - p.b.xi1, p.a.xi2 - p.b.xi2, tm.grad_log_xi1,
                          tm.grad_log_xi2);
    };

    double lo = 1e-6;
    double hi = 1.0 - 1e-6;
    double glo = g(lo);
    double ghi = g(hi);
    if (!(glo > 0.0) || !(ghi < 0.0)) {
        throw NoSignChange("Chernoff objective does not change sign on the bracket");
    }
    int iters = 0;
    while (hi - lo > bracket_tol && iters < 200) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++iters;
    }
    const double astar = 0.5 * (lo + hi);

    const JensenEval je = jensen_core(p, astar);
    evals += je.evals;
    ChernoffResult out;
    out.value = je.value;
    out.alpha_star = astar;
    out.iterations = iters;
    out.bracket_width = hi - lo;
    out.theta_evals = evals;
    return out;
}

NaturalParam kl_centroid_left(std::span<const NaturalParam> xis) {
    if (xis.empty()) throw ValidationError("centroid of an empty set");
    NaturalParam c = xis[0];
    validate_natural(c);
    for (std::size_t i = 1; i < xis.size(); ++i) {
        NaturalParam x = xis[i];
        validate_natural(x);
        if (x.dim() != c.dim()) {
            throw ValidationError("centroid arguments must share a dimension");
        }
        c.xi1 += x.xi1;
        c.xi2 += x.xi2;
    }
    c.xi1 /= static_cast<double>(xis.size());
    c.xi2 /= static_cast<double>(xis.size());
    return c;
}

DivergenceResult evaluate_divergence(const DivergenceRequest& req) {
    switch (req.kind) {
        case DivergenceKind::KlBregman:
            return kl_bregman(req.xi, req.xi_to, req.opt);
        case DivergenceKind::KlMixed:
            return kl_mixed(req.xi, req.xi_to, req.opt);
        case DivergenceKind::Renyi:
            return renyi_divergence(req.xi, req.xi_to, req.alpha, req.opt);
        case DivergenceKind::JensenSkew:
            return jensen_skew(req.xi, req.xi_to, req.alpha, req.opt);
        case DivergenceKind::Bhattacharyya:
            return bhattacharyya_distance(req.xi, req.xi_to, req.opt);
        case DivergenceKind::BhattCoefficient:
            return bhattacharyya_coefficient(req.xi, req.xi_to, req.opt);
        case DivergenceKind::SkewedBhattCoefficient:
            return skewed_bhattacharyya_coefficient(req.xi, req.xi_to, req.alpha,
                                                    req.opt);
        case DivergenceKind::Hellinger2:
            return hellinger_squared(req.xi, req.xi_to, req.opt);
        case DivergenceKind::AmariAlpha:
            return amari_alpha_divergence(req.xi, req.xi_to, req.alpha, req.opt);
        case DivergenceKind::SharmaMittal:
            return sharma_mittal(req.xi, req.xi_to, req.alpha, req.beta, req.opt);
        case DivergenceKind::Gamma:
            return gamma_divergence(req.xi, req.xi_to, req.gamma, req.opt);
        case DivergenceKind::Hoelder:
            return hoelder_divergence(req.xi, req.xi_to, req.gamma, req.alpha_h,
                                      req.opt);
        case DivergenceKind::CauchySchwarz:
            return cauchy_schwarz(req.xi, req.xi_to, req.opt);
        case DivergenceKind::IAlphaBeta:
            return i_alpha_beta(req.xi, req.xi_to, req.alpha, req.beta, req.opt);
        case DivergenceKind::Chernoff: {
            const ChernoffResult c = chernoff_information(
                req.xi, req.xi_to, 1e-12, req.opt);
            DivergenceResult r = make_result(DivergenceKind::Chernoff, c.value,
                                             c.theta_evals,
                                             c.bracket_width * c.bracket_width,
                                             c.alpha_star);
            return r;
        }
    }
    throw ValidationError("unknown divergence kind");
}

}  // namespace latnorm
