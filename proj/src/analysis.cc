// Copyright 2026 The sqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sqec/analysis.h"

#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sqec {

RatePoint logical_rate(size_t failures, size_t shots) {
    if (shots < 1) {
        throw std::invalid_argument("shots must be at least 1");
    }
    if (failures > shots) {
        throw std::invalid_argument("more failures than shots");
    }
    constexpr double z = 1.959963984540054;
    double n = (double)shots;
    double ph = (double)failures / n;
    double denom = 1 + z * z / n;
    double center = (ph + z * z / (2 * n)) / denom;
    double half = z * std::sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / denom;
    RatePoint r;
    r.shots = shots;
    r.failures = failures;
    r.p_L = ph;
    r.ci_low = std::max(0.0, std::min(ph, center - half));
    r.ci_high = std::min(1.0, std::max(ph, center + half));
    return r;
}

double per_round_per_qubit(double P_L, size_t k, size_t d) {
    if (!(P_L >= 0 && P_L <= 1) || k < 1 || d < 1) {
        throw std::invalid_argument("need P_L in [0, 1] and k, d >= 1");
    }
    if (P_L == 1) {
        return 1;
    }
    return -std::expm1(std::log1p(-P_L) / (double)(k * d));
}

double FitResult::predict(double d) const {
    return A * std::pow(alpha + beta * d, gamma * d + delta);
}

namespace {

struct FitData {
    std::vector<double> d, logp;
    double d_max = 0;
};

double log_model(const gsl_vector *x, double d) {
    double base = gsl_vector_get(x, 1) + gsl_vector_get(x, 2) * d;
    if (!(base > 0)) {
        return NAN;
    }
    return gsl_vector_get(x, 0) + (gsl_vector_get(x, 3) * d + gsl_vector_get(x, 4)) * std::log(base);
}

double objective(const gsl_vector *x, void *params) {
    const auto *data = static_cast<const FitData *>(params);
    // The base is linear in d, so positivity at both ends covers the domain.
    if (!std::isfinite(log_model(x, data->d_max))) {
        return 1e300;
    }
    double s = 0;
    for (size_t i = 0; i < data->d.size(); i++) {
        double m = log_model(x, data->d[i]);
        if (!std::isfinite(m)) {
            return 1e300;
        }
        double r = m - data->logp[i];
        s += r * r;
    }
    return s;
}

}  // namespace

FitResult fit_trial(const std::vector<std::pair<double, double>> &points, const FitOptions &opts) {
    FitData data;
    std::set<double> distinct;
    for (const auto &[d, p] : points) {
        if (!(p > 0) || !std::isfinite(p) || !(d > 0)) {
            continue;
        }
        data.d.push_back(d);
        data.logp.push_back(std::log(p));
        distinct.insert(d);
    }
    if (data.d.size() < 5 || distinct.size() < 4) {
        throw std::invalid_argument("fit needs at least 5 positive points over 4 distinct distances");
    }
    data.d_max = std::max(opts.domain_max, *distinct.rbegin());
    double mean_logp = 0;
    for (double l : data.logp) {
        mean_logp += l;
    }
    mean_logp /= (double)data.logp.size();

    gsl_multimin_function f{objective, 5, &data};
    const gsl_multimin_fminimizer_type *T = gsl_multimin_fminimizer_nmsimplex2;
    gsl_multimin_fminimizer *s = gsl_multimin_fminimizer_alloc(T, 5);
    gsl_vector *x = gsl_vector_alloc(5);
    gsl_vector *step = gsl_vector_alloc(5);
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> u(0, 1);

    FitResult best;
    best.residual = INFINITY;
    size_t restarts = std::max<size_t>(opts.restarts, 1);
    for (size_t r = 0; r < restarts; r++) {
        // First start: pure exponential decay through the mean.
        double logA = r == 0 ? mean_logp : mean_logp + (u(rng) - 0.5) * 10;
        double alpha = r == 0 ? 0.5 : 0.01 + u(rng);
        double beta = r == 0 ? 0.0 : u(rng) * 0.05;
        double gamma = r == 0 ? 0.5 : (u(rng) - 0.2) * 2;
        double delta = r == 0 ? 0.0 : (u(rng) - 0.5) * 4;
        gsl_vector_set(x, 0, logA);
        gsl_vector_set(x, 1, alpha);
        gsl_vector_set(x, 2, beta);
        gsl_vector_set(x, 3, gamma);
        gsl_vector_set(x, 4, delta);
        if (!std::isfinite(objective(x, &data)) || objective(x, &data) >= 1e300) {
            gsl_vector_set(x, 2, 0.0);
            gsl_vector_set(x, 1, 0.5);
        }
        // Simplex restarts from the current optimum polish the solution.
        for (int polish = 0; polish < 3; polish++) {
            gsl_vector_set(step, 0, 1.0);
            gsl_vector_set(step, 1, 0.1);
            gsl_vector_set(step, 2, 0.01);
            gsl_vector_set(step, 3, 0.2);
            gsl_vector_set(step, 4, 0.5);
            gsl_multimin_fminimizer_set(s, &f, x, step);
            for (size_t it = 0; it < opts.max_iterations; it++) {
                if (gsl_multimin_fminimizer_iterate(s)) {
                    break;
                }
                if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-12) == GSL_SUCCESS) {
                    break;
                }
            }
            gsl_vector_memcpy(x, gsl_multimin_fminimizer_x(s));
        }
        double res = gsl_multimin_fminimizer_minimum(s);
        if (res < best.residual) {
            best.A = std::exp(gsl_vector_get(x, 0));
            best.alpha = gsl_vector_get(x, 1);
            best.beta = gsl_vector_get(x, 2);
            best.gamma = gsl_vector_get(x, 3);
            best.delta = gsl_vector_get(x, 4);
            best.residual = res;
        }
    }
    gsl_vector_free(step);
    gsl_vector_free(x);
    gsl_multimin_fminimizer_free(s);
    best.lo_d = *distinct.begin();
    best.hi_d = *distinct.rbegin();
    if (!std::isfinite(best.residual) || best.residual >= 1e300) {
        throw std::runtime_error("fit failed to find a valid parameter set");
    }
    return best;
}

std::optional<size_t> select_distance(const FitResult &fit, double p_target, size_t cap) {
    for (size_t d = 3; d <= cap; d += 2) {
        double p = fit.predict((double)d);
        if (std::isfinite(p) && p <= p_target) {
            return d;
        }
    }
    return std::nullopt;
}

ResourceConfig default_resource_config(Scenario s) {
    ResourceConfig c;
    if (s == Scenario::NisqBeating) {
        c.logical_qubits = 50;
        c.factory_patches = 15;
        c.distance = 9;
    } else {
        c.logical_qubits = 100;
        c.factory_patches = 44;
        c.distance = 0;
    }
    return c;
}

namespace {

double shuttle_dephasing(const ResourceConfig &cfg, size_t d) {
    if (cfg.p_sh >= 0) {
        return cfg.p_sh;
    }
    double vt = cfg.v * cfg.T2_star;
    return 4.0 * (double)d * 2.0 * cfg.l_c * cfg.l_dd / (vt * vt);
}

std::string sci(double x) {
    std::ostringstream o;
    o.precision(3);
    o << x;
    return o.str();
}

}  // namespace

ResourceReport resource_estimate(Scenario s, const ResourceConfig &cfg, const std::optional<FitResult> &fit) {
    ResourceReport r;
    r.patches = 2 * (cfg.logical_qubits + cfg.factory_patches);
    if (s == Scenario::NisqBeating) {
        r.scenario = "nisq-beating";
        r.distance = cfg.distance;
    } else {
        r.scenario = "hubbard-6x6";
        r.target_p_L = cfg.failure_budget / ((double)r.patches * cfg.cycles_per_state * cfg.t_gates);
        if (cfg.distance > 0) {
            r.distance = cfg.distance;
        } else {
            if (!fit) {
                throw std::invalid_argument("the Hubbard scenario needs a fitted error curve");
            }
            auto d = select_distance(*fit, r.target_p_L);
            if (!d) {
                r.distance_reachable = false;
                r.notes.push_back("fitted curve never reaches the target rate below distance 99");
                return r;
            }
            r.distance = *d;
        }
    }
    double d = (double)r.distance;
    r.p_sh = shuttle_dephasing(cfg, r.distance);
    r.p_mag = cfg.p + r.p_sh;
    r.distilled_15_to_1 = 35 * std::pow(r.p_mag, 3);
    r.distilled_116_to_12 = 41.25 * std::pow(r.p_mag, 4);
    // A wide patch holds d x 2d data qubits and as many ancillas.
    r.data_qubits = (double)r.patches * 2 * d * d;
    r.physical_qubits = (double)r.patches * 4 * d * d;
    if (s == Scenario::Hubbard6x6) {
        r.cycles = cfg.cycles_per_state * d * cfg.t_gates;
        r.seconds = r.cycles * cfg.cycle_time;
    } else {
        r.notes.push_back("15-to-1 output error 35 p_mag^3 = " + sci(r.distilled_15_to_1) + " for p_mag = " +
                          sci(r.p_mag) + "; a printed value of 6e-8 would need p_mag near 1.2e-3");
    }
    return r;
}

}  // namespace sqec
