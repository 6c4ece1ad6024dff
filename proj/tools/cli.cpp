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

#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "latnorm/latnorm.hpp"

namespace latnorm_cli {

namespace {

using json = nlohmann::ordered_json;
using namespace latnorm;

// ---------------------------------------------------------------- output

std::string fmt17(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Serializer that prints every double with 17 significant digits so the
// printed JSON re-parses to the same bits. nlohmann handles structure and
// string escaping; numbers are formatted here.
void dump17(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                dump17(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ',';
                first = false;
                dump17(v, out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float:
            out += fmt17(j.get<double>());
            break;
        default:
            out += j.dump();
            break;
    }
}

void emit(const json& j, std::ostream& out) {
    std::string s;
    dump17(j, s);
    out << s << "\n";
}

json vec_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json mat_json(const Eigen::MatrixXd& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        a.push_back(row);
    }
    return a;
}

// ---------------------------------------------------------------- input

Eigen::VectorXd parse_vec(const json& j, const std::string& name) {
    if (!j.is_array() || j.empty()) {
        throw ValidationError("field '" + name + "' must be a nonempty array");
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            throw ValidationError("field '" + name + "' must hold numbers");
        }
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

Eigen::MatrixXd parse_mat(const json& j, const std::string& name) {
    if (!j.is_array() || j.empty()) {
        throw ValidationError("field '" + name +
                              "' must be a nonempty array of rows");
    }
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    Eigen::MatrixXd m;
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array()) {
            throw ValidationError("field '" + name + "' must hold row arrays");
        }
        if (i == 0) {
            cols = j[i].size();
            if (cols == 0) throw ValidationError("field '" + name + "' has an empty row");
            m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        } else if (j[i].size() != cols) {
            throw ValidationError("field '" + name + "' is not rectangular");
        }
        for (std::size_t k = 0; k < cols; ++k) {
            if (!j[i][k].is_number()) {
                throw ValidationError("field '" + name + "' must hold numbers");
            }
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                j[i][k].get<double>();
        }
    }
    return m;
}

// Parsed parameter file: exactly one of the natural block (xi1, xi2) or
// the moment block (mu, sigma), plus an optional lattice.
struct LoadedParam {
    std::optional<NaturalParam> natural;
    std::optional<OrdinaryParam> moment;
    std::optional<Lattice> lattice;
};

LoadedParam load_param_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open parameter file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("parameter file '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw ValidationError("parameter file must be a JSON object");

    LoadedParam p;
    const bool has_nat = j.contains("xi1") || j.contains("xi2");
    const bool has_mom = j.contains("mu") || j.contains("sigma");
    if (has_nat == has_mom) {
        throw ValidationError(
            "parameter file must contain exactly one of {xi1, xi2} or {mu, sigma}");
    }
    int d = 0;
    if (has_nat) {
        if (!j.contains("xi1") || !j.contains("xi2")) {
            throw ValidationError("natural block needs both xi1 and xi2");
        }
        NaturalParam xi;
        xi.xi1 = parse_vec(j["xi1"], "xi1");
        xi.xi2 = parse_mat(j["xi2"], "xi2");
        validate_natural(xi);
        d = xi.dim();
        p.natural = std::move(xi);
    } else {
        if (!j.contains("mu") || !j.contains("sigma")) {
            throw ValidationError("moment block needs both mu and sigma");
        }
        OrdinaryParam op;
        op.mu = parse_vec(j["mu"], "mu");
        op.sigma = parse_mat(j["sigma"], "sigma");
        if (op.sigma.rows() != op.mu.size() || op.sigma.cols() != op.mu.size()) {
            throw ValidationError("sigma must be square with mu's dimension");
        }
        if ((op.sigma - op.sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
            throw ValidationError("sigma must be symmetric");
        }
        op.sigma = 0.5 * (op.sigma + op.sigma.transpose()).eval();
        if (Eigen::LLT<Eigen::MatrixXd>(op.sigma).info() != Eigen::Success) {
            throw ValidationError("sigma must be positive definite");
        }
        d = op.dim();
        p.moment = std::move(op);
    }
    if (j.contains("dim")) {
        if (!j["dim"].is_number_integer() || j["dim"].get<int>() != d) {
            throw ValidationError("declared dim does not match the parameter block");
        }
    }
    if (j.contains("lattice")) {
        const json& lj = j["lattice"];
        if (!lj.is_object() || !lj.contains("basis")) {
            throw ValidationError("lattice block needs a basis matrix");
        }
        Eigen::MatrixXd basis = parse_mat(lj["basis"], "lattice.basis");
        Eigen::VectorXd shift = Eigen::VectorXd::Zero(basis.rows());
        if (lj.contains("shift")) shift = parse_vec(lj["shift"], "lattice.shift");
        if (basis.rows() != d) {
            throw ValidationError("lattice dimension does not match the parameter block");
        }
        p.lattice = Lattice(std::move(basis), std::move(shift));
    }
    return p;
}

Lattice lattice_of(const LoadedParam& p, int d) {
    return p.lattice ? *p.lattice : Lattice::integer(d);
}

// Natural parameter of a loaded file; a moment block is inverted by the
// Newton solver (iterations reported through `iters`).
NaturalParam natural_of(const LoadedParam& p, double tol, int* iters = nullptr) {
    if (iters) *iters = 0;
    if (p.natural) return *p.natural;
    NewtonOptions opt;
    opt.tol = tol;
    NewtonReport rep;
    const MomentParam eta = moment_from_ordinary(*p.moment);
    NaturalParam xi = p.lattice
                          ? natural_from_moments(eta, *p.lattice, opt, &rep)
                          : natural_from_moments(eta, opt, &rep);
    if (iters) *iters = rep.iterations;
    return xi;
}

json param_echo(const NaturalParam& xi, const std::optional<Lattice>& lat) {
    json e;
    e["xi1"] = vec_json(xi.xi1);
    e["xi2"] = mat_json(xi.xi2);
    if (lat) {
        e["lattice"] = {{"basis", mat_json(lat->basis())},
                        {"shift", vec_json(lat->shift())}};
    }
    return e;
}

Eigen::VectorXd parse_point(const std::string& s) {
    std::vector<double> vals;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            vals.push_back(std::stod(tok, &pos));
            while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ValidationError("cannot parse point component '" + tok + "'");
        }
    }
    if (vals.empty()) throw ValidationError("empty point");
    return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

Eigen::MatrixXd load_csv_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open data file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("data file is empty");
    // Header row x1,...,xd fixes the dimension.
    int d = 1;
    for (char c : line) {
        if (c == ',') ++d;
    }
    std::vector<double> flat;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Eigen::VectorXd row = parse_point(line);
        if (row.size() != d) {
            throw ValidationError("data row has " + std::to_string(row.size()) +
                                  " fields, header declares " + std::to_string(d));
        }
        flat.insert(flat.end(), row.data(), row.data() + d);
        ++n;
    }
    if (n == 0) throw ValidationError("data file has no rows");
    Eigen::MatrixXd x(d, static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) {
            x(k, static_cast<Eigen::Index>(i)) = flat[i * static_cast<std::size_t>(d) +
                                                      static_cast<std::size_t>(k)];
        }
    }
    return x;
}

// ---------------------------------------------------------------- commands

struct Ctx {
    std::ostream& out;
    std::ostream& err;
};

int cmd_theta(Ctx& c, const std::string& pfile, double eps) {
    LoadedParam p = load_param_file(pfile);
    NaturalParam xi = natural_of(p, 1e-10);
    TruncationSpec spec;
    spec.eps = eps;
    const Lattice lat = lattice_of(p, xi.dim());
    ThetaResult r = theta(xi, lat, spec);
    json j;
    j["command"] = "theta";
    j["value"] = r.value;
    j["log_value"] = r.log_value;
    j["tail_bound"] = r.tail_bound;
    j["points_used"] = r.points_used;
    j["radius"] = r.radius;
    j["grad_log_xi1"] = vec_json(r.grad_log_xi1);
    j["grad_log_xi2"] = mat_json(r.grad_log_xi2);
    j["config"] = {{"eps", eps}, {"param", param_echo(xi, p.lattice)}};
    emit(j, c.out);
    return 0;
}

int cmd_pmf(Ctx& c, const std::string& pfile, const std::string& point_str,
            double eps) {
    LoadedParam p = load_param_file(pfile);
    NaturalParam xi = natural_of(p, 1e-10);
    Eigen::VectorXd l = parse_point(point_str);
    if (l.size() != xi.dim()) {
        throw ValidationError("point dimension does not match the parameter");
    }
    TruncationSpec spec;
    spec.eps = eps;
    const Lattice lat = lattice_of(p, xi.dim());
    const double mass = pmf(xi, l, lat, spec);
    json j;
    j["command"] = "pmf";
    j["pmf"] = mass;
    j["unnormalized"] = std::exp(log_unnormalized_pmf(xi, l));
    j["log_unnormalized"] = log_unnormalized_pmf(xi, l);
    j["config"] = {{"eps", eps},
                   {"point", vec_json(l)},
                   {"param", param_echo(xi, p.lattice)}};
    emit(j, c.out);
    return 0;
}

int cmd_divergence(Ctx& c, const std::string& pfile, const std::string& qfile,
                   const std::string& kind_name, double alpha, double beta,
                   double gamma, double alpha_h, double eps, bool with_oracle,
                   long oracle_box) {
    LoadedParam pp = load_param_file(pfile);
    LoadedParam qq = load_param_file(qfile);
    DivergenceRequest req;
    req.kind = divergence_kind_from_name(kind_name);
    req.xi = natural_of(pp, 1e-10);
    req.xi_to = natural_of(qq, 1e-10);
    req.alpha = alpha;
    req.beta = beta;
    req.gamma = gamma;
    req.alpha_h = alpha_h;
    req.opt.trunc.eps = eps;
    if (pp.lattice || qq.lattice) {
        // Both sides must live on the same lattice for the divergence to
        // make sense; require identical blocks.
        if (!pp.lattice || !qq.lattice ||
            (pp.lattice->basis() - qq.lattice->basis()).cwiseAbs().maxCoeff() > 0 ||
            (pp.lattice->shift() - qq.lattice->shift()).cwiseAbs().maxCoeff() > 0) {
            throw ValidationError("p and q must declare the same lattice");
        }
        req.opt.lattice = pp.lattice;
    }
    DivergenceResult r = evaluate_divergence(req);
    json j;
    j["command"] = "divergence";
    j["kind"] = divergence_kind_name(r.kind);
    j["value"] = r.value;
    j["est_abs_error"] = r.est_abs_error;
    j["theta_evals"] = r.theta_evals;
    j["alpha"] = r.alpha;
    j["beta"] = r.beta;
    j["gamma"] = r.gamma;
    if (with_oracle) {
        if (req.opt.lattice && !req.opt.lattice->is_integer()) {
            throw ValidationError("--oracle supports the integer lattice only");
        }
        oracle::BoxSpec box;
        box.half_width = oracle_box;
        double ov = 0.0;
        switch (req.kind) {
            case DivergenceKind::KlBregman:
            case DivergenceKind::KlMixed:
                ov = oracle::oracle_kl(req.xi, req.xi_to, box);
                break;
            case DivergenceKind::Renyi:
                ov = oracle::oracle_renyi(req.xi, req.xi_to, alpha, box);
                break;
            case DivergenceKind::JensenSkew:
                ov = oracle::oracle_jensen_skew(req.xi, req.xi_to, alpha, box);
                break;
            case DivergenceKind::Bhattacharyya:
                ov = oracle::oracle_bhattacharyya(req.xi, req.xi_to, box);
                break;
            case DivergenceKind::BhattCoefficient:
                ov = std::exp(-oracle::oracle_bhattacharyya(req.xi, req.xi_to, box));
                break;
            case DivergenceKind::SkewedBhattCoefficient:
                ov = std::exp(-oracle::oracle_jensen_skew(req.xi, req.xi_to, alpha, box));
                break;
            case DivergenceKind::Hellinger2:
                ov = oracle::oracle_hellinger_squared(req.xi, req.xi_to, box);
                break;
            case DivergenceKind::AmariAlpha:
                ov = oracle::oracle_amari_alpha(req.xi, req.xi_to, alpha, box);
                break;
            case DivergenceKind::SharmaMittal:
                ov = oracle::oracle_sharma_mittal(req.xi, req.xi_to, alpha, beta, box);
                break;
            case DivergenceKind::Gamma:
                ov = oracle::oracle_gamma(req.xi, req.xi_to, gamma, box);
                break;
            case DivergenceKind::Hoelder:
                ov = oracle::oracle_hoelder(req.xi, req.xi_to, gamma, alpha_h, box);
                break;
            case DivergenceKind::CauchySchwarz:
                ov = oracle::oracle_cauchy_schwarz(req.xi, req.xi_to, box);
                break;
            case DivergenceKind::IAlphaBeta:
                ov = oracle::oracle_i_alpha_beta(req.xi, req.xi_to, alpha, beta, box);
                break;
            case DivergenceKind::Chernoff:
                // The oracle has no root finder; check the value at the
                // engine's alpha_star instead.
                ov = oracle::oracle_jensen_skew(req.xi, req.xi_to, r.alpha, box);
                break;
        }
        j["oracle_value"] = ov;
        j["oracle_abs_diff"] = std::abs(ov - r.value);
    }
    j["config"] = {{"eps", eps},
                   {"alpha", alpha},
                   {"beta", beta},
                   {"gamma", gamma},
                   {"alpha_h", alpha_h},
                   {"p", param_echo(req.xi, pp.lattice)},
                   {"q", param_echo(req.xi_to, qq.lattice)}};
    emit(j, c.out);
    return 0;
}

int cmd_convert(Ctx& c, const std::string& pfile, const std::string& to,
                double tol) {
    LoadedParam p = load_param_file(pfile);
    json j;
    j["command"] = "convert";
    j["to"] = to;
    int iters = 0;
    if (to == "natural") {
        NaturalParam xi = natural_of(p, tol, &iters);
        j["xi1"] = vec_json(xi.xi1);
        j["xi2"] = mat_json(xi.xi2);
        j["iterations"] = iters;
        if (p.moment) {
            // Echo the residual check: moments of the recovered parameter.
            const Lattice lat = lattice_of(p, xi.dim());
            OrdinaryParam back = ordinary_from_natural(xi, lat);
            j["roundtrip_mu"] = vec_json(back.mu);
            j["roundtrip_sigma"] = mat_json(back.sigma);
        }
    } else if (to == "moment") {
        NaturalParam xi = natural_of(p, tol, &iters);
        const Lattice lat = lattice_of(p, xi.dim());
        OrdinaryParam op = ordinary_from_natural(xi, lat);
        MomentParam eta = moment_from_ordinary(op);
        j["mu"] = vec_json(op.mu);
        j["sigma"] = mat_json(op.sigma);
        j["eta1"] = vec_json(eta.eta1);
        j["eta2"] = mat_json(eta.eta2);
        j["iterations"] = iters;
    } else {
        throw ValidationError("--to must be 'natural' or 'moment'");
    }
    j["config"] = {{"tol", tol}, {"file", pfile}};
    emit(j, c.out);
    return 0;
}

int cmd_sample(Ctx& c, const std::string& pfile, std::size_t n,
               const std::string& method, std::uint64_t seed, double eps,
               bool csv) {
    LoadedParam p = load_param_file(pfile);
    RandomState rng(seed);
    SampleOptions opt;
    opt.lattice = p.lattice;
    opt.trunc.eps = eps;
    SampleBatch batch;
    NaturalParam xi;
    if (method == "h1") {
        if (p.lattice && !p.lattice->is_integer()) {
            throw ValidationError("method h1 supports the integer lattice only");
        }
        OrdinaryParam target;
        if (p.moment) {
            target = *p.moment;
            xi = natural_of(p, 1e-10);
        } else {
            xi = *p.natural;
            target = ordinary_from_natural(xi);
        }
        batch = sample_h1(target, n, rng);
    } else {
        xi = natural_of(p, 1e-10);
        if (method == "exact") {
            batch = sample_exact_eps(xi, n, rng, opt);
        } else if (method == "h2") {
            batch = sample_h2(xi, n, rng, opt);
        } else {
            throw ValidationError("--method must be exact, h1 or h2");
        }
    }
    if (csv) {
        const int d = static_cast<int>(batch.points.rows());
        for (int k = 0; k < d; ++k) c.out << (k ? "," : "") << "x" << (k + 1);
        c.out << "\n";
        for (std::size_t i = 0; i < batch.size(); ++i) {
            for (int k = 0; k < d; ++k) {
                c.out << (k ? "," : "")
                      << fmt17(batch.points(k, static_cast<Eigen::Index>(i)));
            }
            c.out << "\n";
        }
        return 0;
    }
    json j;
    j["command"] = "sample";
    j["method"] = batch.method;
    j["seed"] = batch.seed;
    j["n"] = batch.size();
    json pts = json::array();
    json zs = json::array();
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Eigen::Index col = static_cast<Eigen::Index>(i);
        pts.push_back(vec_json(batch.points.col(col)));
        json zr = json::array();
        for (Eigen::Index k = 0; k < batch.z.rows(); ++k) {
            zr.push_back(batch.z(k, col));
        }
        zs.push_back(zr);
    }
    j["points"] = pts;
    j["z"] = zs;
    if (batch.n_proposals > 0) {
        j["accept_rate"] = batch.accept_rate;
        j["n_proposals"] = batch.n_proposals;
    }
    MomentParam emp = empirical_moments(batch);
    j["empirical"] = {{"eta1", vec_json(emp.eta1)}, {"eta2", mat_json(emp.eta2)}};
    j["config"] = {{"eps", eps},
                   {"seed", seed},
                   {"method", method},
                   {"param", param_echo(xi, p.lattice)}};
    emit(j, c.out);
    return 0;
}

int cmd_mle(Ctx& c, const std::string& data_file, double tol) {
    Eigen::MatrixXd x = load_csv_points(data_file);
    MomentParam eta = mle(x);
    json j;
    j["command"] = "mle";
    j["n"] = static_cast<std::size_t>(x.cols());
    j["moment"] = {{"eta1", vec_json(eta.eta1)}, {"eta2", mat_json(eta.eta2)}};
    OrdinaryParam op = ordinary_from_moment(eta);  // throws DegenerateSample
    j["moment"]["mu"] = vec_json(op.mu);
    j["moment"]["sigma"] = mat_json(op.sigma);
    NewtonOptions nopt;
    nopt.tol = tol;
    NewtonReport rep;
    NaturalParam xi = natural_from_moments(eta, nopt, &rep);
    j["natural"] = {{"xi1", vec_json(xi.xi1)}, {"xi2", mat_json(xi.xi2)}};
    j["iterations"] = rep.iterations;
    j["final_residual"] = rep.final_residual;
    j["config"] = {{"tol", tol}, {"data", data_file}};
    emit(j, c.out);
    return 0;
}

int cmd_chernoff(Ctx& c, const std::string& pfile, const std::string& qfile,
                 double tol) {
    LoadedParam pp = load_param_file(pfile);
    LoadedParam qq = load_param_file(qfile);
    NaturalParam xi = natural_of(pp, 1e-10);
    NaturalParam xi_to = natural_of(qq, 1e-10);
    DivOptions opt;
    if (pp.lattice) opt.lattice = pp.lattice;
    ChernoffResult r = chernoff_information(xi, xi_to, tol, opt);
    json j;
    j["command"] = "chernoff";
    j["value"] = r.value;
    j["alpha_star"] = r.alpha_star;
    j["iterations"] = r.iterations;
    j["bracket_width"] = r.bracket_width;
    j["config"] = {{"tol", tol},
                   {"p", param_echo(xi, pp.lattice)},
                   {"q", param_echo(xi_to, qq.lattice)}};
    emit(j, c.out);
    return 0;
}

int cmd_reproduce(Ctx& c) {
    // The worked two-dimensional example pair shipped with the library.
    NaturalParam xi;
    xi.xi1 = Eigen::Vector2d(-0.2, -0.2);
    xi.xi2 = Eigen::Vector2d(0.1, 0.2).asDiagonal();
    NaturalParam xi_to;
    xi_to.xi1 = Eigen::Vector2d(0.2, 0.2);
    xi_to.xi2 = Eigen::Vector2d(0.15, 0.25).asDiagonal();

    const double bhatt_target = 1.6259948590224578;
    const double kl_target = 7.841371347366552;

    const double bhatt = bhattacharyya_distance(xi, xi_to).value;
    const double ren = renyi_divergence(xi, xi_to, 0.9999999999).value;
    const double klb = kl_bregman(xi, xi_to).value;
    const double klm = kl_mixed(xi, xi_to).value;

    const bool bhatt_ok = std::abs(bhatt - bhatt_target) <= 1e-6;
    const bool renyi_ok = std::abs(ren - kl_target) <= 1e-4;
    const bool kl_ok = std::abs(klb - kl_target) <= 1e-3 &&
                       std::abs(klm - kl_target) <= 1e-3;
    const bool pass = bhatt_ok && renyi_ok && kl_ok;

    json j;
    j["command"] = "reproduce";
    j["bhattacharyya"] = bhatt;
    j["bhattacharyya_target"] = bhatt_target;
    j["bhattacharyya_ok"] = bhatt_ok;
    j["renyi_alpha"] = 0.9999999999;
    j["renyi"] = ren;
    j["renyi_ok"] = renyi_ok;
    j["kl"] = klb;
    j["kl_bregman"] = klb;
    j["kl_mixed"] = klm;
    j["kl_target"] = kl_target;
    j["kl_ok"] = kl_ok;
    j["pass"] = pass;
    j["config"] = {{"p", param_echo(xi, std::nullopt)},
                   {"q", param_echo(xi_to, std::nullopt)}};
    emit(j, c.out);
    return pass ? 0 : 1;
}

json error_json(const char* type, const std::string& message) {
    json j;
    j["error"] = {{"type", type}, {"message", message}};
    return j;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
    Ctx ctx{out, err};

    CLI::App app{"Discrete normal (lattice Gaussian) toolkit"};
    app.require_subcommand(1);

    std::string pfile, qfile, point_str, kind_name = "kl", to = "natural";
    std::string data_file, method = "exact";
    double eps = 1e-12, tol = 1e-10, chern_tol = 1e-12;
    double alpha = 0.5, beta = 0.5, gamma = 1.5, alpha_h = 2.0;
    std::size_t n = 1;
    std::uint64_t seed = 0;
    bool with_oracle = false, csv = false;
    long oracle_box = 40;

    auto* s_theta = app.add_subcommand("theta", "Partition function with gradients");
    s_theta->add_option("-p,--param", pfile, "parameter file")->required();
    s_theta->add_option("--eps", eps, "tail mass target");

    auto* s_pmf = app.add_subcommand("pmf", "Probability of a lattice point");
    s_pmf->add_option("-p,--param", pfile, "parameter file")->required();
    s_pmf->add_option("--point", point_str, "comma-separated coordinates")->required();
    s_pmf->add_option("--eps", eps, "tail mass target");

    auto* s_div = app.add_subcommand("divergence", "Divergence between two parameters");
    s_div->add_option("-p,--param", pfile, "left parameter file")->required();
    s_div->add_option("-q,--param-to", qfile, "right parameter file")->required();
    s_div->add_option("--kind", kind_name, "divergence kind")->required();
    s_div->add_option("--alpha", alpha, "skew / order parameter");
    s_div->add_option("--beta", beta, "second order parameter");
    s_div->add_option("--gamma", gamma, "scale parameter");
    s_div->add_option("--alpha-h", alpha_h, "conjugate exponent (> 1)");
    s_div->add_option("--eps", eps, "tail mass target");
    s_div->add_flag("--oracle", with_oracle, "cross-check against the brute-force oracle");
    s_div->add_option("--oracle-box", oracle_box, "oracle box half width");

    auto* s_conv = app.add_subcommand("convert", "Convert between parameterizations");
    s_conv->add_option("-p,--param", pfile, "parameter file")->required();
    s_conv->add_option("--to", to, "target: natural or moment")->required();
    s_conv->add_option("--tol", tol, "Newton residual tolerance");

    auto* s_samp = app.add_subcommand("sample", "Draw lattice samples");
    s_samp->add_option("-p,--param", pfile, "parameter file")->required();
    s_samp->add_option("-n,--num", n, "number of samples")->required();
    s_samp->add_option("--method", method, "exact, h1 or h2");
    s_samp->add_option("--seed", seed, "RNG seed");
    s_samp->add_option("--eps", eps, "window tail target (exact method)");
    s_samp->add_flag("--csv", csv, "emit CSV instead of JSON");

    auto* s_mle = app.add_subcommand("mle", "Empirical moments and natural parameter");
    s_mle->add_option("--data", data_file, "CSV file with header x1,...,xd")->required();
    s_mle->add_option("--tol", tol, "Newton residual tolerance");

    auto* s_chern = app.add_subcommand("chernoff", "Chernoff information");
    s_chern->add_option("-p,--param", pfile, "left parameter file")->required();
    s_chern->add_option("-q,--param-to", qfile, "right parameter file")->required();
    s_chern->add_option("--tol", chern_tol, "bisection bracket tolerance");

    app.add_subcommand("reproduce", "Recompute the library's worked example pair");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help() << std::flush;
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All) << std::flush;
        return 0;
    } catch (const CLI::ParseError& e) {
        emit(error_json("ParseError", e.what()), out);
        return 2;
    }

    try {
        if (s_theta->parsed()) return cmd_theta(ctx, pfile, eps);
        if (s_pmf->parsed()) return cmd_pmf(ctx, pfile, point_str, eps);
        if (s_div->parsed()) {
            return cmd_divergence(ctx, pfile, qfile, kind_name, alpha, beta, gamma,
                                  alpha_h, eps, with_oracle, oracle_box);
        }
        if (s_conv->parsed()) return cmd_convert(ctx, pfile, to, tol);
        if (s_samp->parsed()) return cmd_sample(ctx, pfile, n, method, seed, eps, csv);
        if (s_mle->parsed()) return cmd_mle(ctx, data_file, tol);
        if (s_chern->parsed()) return cmd_chernoff(ctx, pfile, qfile, chern_tol);
        return cmd_reproduce(ctx);
    } catch (const ValidationError& e) {
        emit(error_json("ValidationError", e.what()), out);
        return 2;
    } catch (const ConjugateExponentError& e) {
        emit(error_json("ConjugateExponentError", e.what()), out);
        return 2;
    } catch (const DomainError& e) {
        emit(error_json("DomainError", e.what()), out);
        return 3;
    } catch (const RadiusCapExceeded& e) {
        emit(error_json("RadiusCapExceeded", e.what()), out);
        return 3;
    } catch (const PointBudgetExceeded& e) {
        emit(error_json("PointBudgetExceeded", e.what()), out);
        return 3;
    } catch (const NoConvergence& e) {
        emit(error_json("NoConvergence", e.what()), out);
        return 3;
    } catch (const SingularHessian& e) {
        emit(error_json("SingularHessian", e.what()), out);
        return 3;
    } catch (const DegenerateSample& e) {
        emit(error_json("DegenerateSample", e.what()), out);
        return 3;
    } catch (const AcceptanceStall& e) {
        emit(error_json("AcceptanceStall", e.what()), out);
        return 3;
    } catch (const NoSignChange& e) {
        emit(error_json("NoSignChange", e.what()), out);
        return 3;
    } catch (const TailTooFat& e) {
        emit(error_json("TailTooFat", e.what()), out);
        return 3;
    } catch (const Error& e) {
        emit(error_json("Error", e.what()), out);
        return 3;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace latnorm_cli
