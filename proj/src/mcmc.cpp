// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include "storelens/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "storelens/errors.hpp"
#include "storelens/rng.hpp"

namespace storelens {

namespace {

constexpr double kAvailFloor = 1e-12;

double factor_ll(const ObservationFactor& f, std::span<const double> x) {
    double a = f.path.availability(x);
    a = std::clamp(a, kAvailFloor, 1.0 - kAvailFloor);
    double ll = 0.0;
    if (f.successes > 0) ll += f.successes * std::log(a);
    if (f.successes < f.probes_sent) ll += (f.probes_sent - f.successes) * std::log1p(-a);
    return ll;
}

double quantile_of(std::vector<float>& scratch, double q) {
    if (scratch.empty()) return 0.0;
    const auto pos = static_cast<std::size_t>(q * (static_cast<double>(scratch.size()) - 1.0));
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(pos), scratch.end());
    return scratch[pos];
}

struct ChainStats {
    std::vector<double> means;  // per half-chain
    std::vector<double> vars;
};

// Split R-hat over half-chains.
double split_rhat(const std::vector<std::vector<float>>& chains) {
    std::vector<double> means, vars;
    std::size_t n = chains.front().size() / 2;
    if (n < 2) return 1.0;
    for (const auto& c : chains) {
        for (int half = 0; half < 2; ++half) {
            double m = 0.0;
            for (std::size_t i = 0; i < n; ++i) m += c[half * n + i];
            m /= static_cast<double>(n);
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = c[half * n + i] - m;
                v += d * d;
            }
            v /= static_cast<double>(n - 1);
            means.push_back(m);
            vars.push_back(v);
        }
    }
    const auto m_count = static_cast<double>(means.size());
    double grand = 0.0;
    for (double m : means) grand += m;
    grand /= m_count;
    double b = 0.0;
    for (double m : means) b += (m - grand) * (m - grand);
    b *= static_cast<double>(n) / (m_count - 1.0);
    double w = 0.0;
    for (double v : vars) w += v;
    w /= m_count;
    if (w <= 1e-300) return 1.0;
    const double var_plus = (static_cast<double>(n) - 1.0) / static_cast<double>(n) * w +
                            b / static_cast<double>(n);
    return std::sqrt(var_plus / w);
}

// Effective sample size via the initial-positive-sequence estimator on
// chain-averaged autocovariances.
long ess_of(const std::vector<std::vector<float>>& chains) {
    const std::size_t n = chains.front().size();
    if (n < 4) return static_cast<long>(n * chains.size());
    std::vector<double> chain_mean(chains.size()), chain_var(chains.size());
    double w = 0.0;
    for (std::size_t c = 0; c < chains.size(); ++c) {
        double m = 0.0;
        for (float v : chains[c]) m += v;
        m /= static_cast<double>(n);
        double var = 0.0;
        for (float v : chains[c]) var += (v - m) * (v - m);
        var /= static_cast<double>(n - 1);
        chain_mean[c] = m;
        chain_var[c] = var;
        w += var;
    }
    w /= static_cast<double>(chains.size());
    if (w <= 1e-300) return static_cast<long>(n * chains.size());

    double grand = 0.0;
    for (double m : chain_mean) grand += m;
    grand /= static_cast<double>(chains.size());
    double b = 0.0;
    for (double m : chain_mean) b += (m - grand) * (m - grand);
    b = chains.size() > 1 ? b * static_cast<double>(n) / (static_cast<double>(chains.size()) - 1.0)
                          : 0.0;
    const double var_plus =
        (static_cast<double>(n) - 1.0) / static_cast<double>(n) * w + b / static_cast<double>(n);

    const std::size_t max_lag = std::min<std::size_t>(n - 1, 200);
    double rho_sum = 0.0;
    double prev_pair = 0.0;
    bool first_pair = true;
    for (std::size_t t = 1; t + 1 <= max_lag; t += 2) {
        double rho_t = 0.0, rho_t1 = 0.0;
        for (std::size_t lag = t; lag <= t + 1; ++lag) {
            double acov = 0.0;
            for (std::size_t c = 0; c < chains.size(); ++c) {
                double s = 0.0;
                for (std::size_t i = 0; i + lag < n; ++i) {
                    s += (chains[c][i] - chain_mean[c]) * (chains[c][i + lag] - chain_mean[c]);
                }
                acov += s / static_cast<double>(n);
            }
            acov /= static_cast<double>(chains.size());
            const double rho = 1.0 - (w - acov) / var_plus;
            if (lag == t) rho_t = rho;
            else rho_t1 = rho;
        }
        double pair = rho_t + rho_t1;
        if (pair < 0.0) break;
        if (!first_pair && pair > prev_pair) pair = prev_pair;  // enforce monotone decrease
        rho_sum += pair;
        prev_pair = pair;
        first_pair = false;
    }
    const double denom = 1.0 + 2.0 * rho_sum;
    const double total = static_cast<double>(n * chains.size());
    return std::max<long>(1, static_cast<long>(total / std::max(denom, 1e-3)));
}

}  // namespace

InferenceResult infer(const FactorGraph& graph, const MCMCConfig& cfg) {
    if (cfg.chains < 1) throw ConfigError("need at least one chain");
    if (cfg.samples < 1000) throw ConfigError("need at least 1000 kept samples per chain");
    for (std::size_t v = 0; v < graph.variables.size(); ++v) {
        if (!(graph.prior_alpha[v] > 0.0) || !(graph.prior_beta[v] > 0.0)) {
            throw ConfigError("prior parameters must be positive for " + graph.variables[v].str());
        }
    }

    const std::size_t V = graph.variables.size();
    std::vector<int> sampled;  // variables with at least one factor
    for (std::size_t v = 0; v < V; ++v) {
        if (graph.observed(static_cast<int>(v))) sampled.push_back(static_cast<int>(v));
    }

    // samples[v][chain][i] for sampled variables only
    std::vector<std::vector<std::vector<float>>> kept(V);
    for (int v : sampled) {
        kept[static_cast<std::size_t>(v)].assign(static_cast<std::size_t>(cfg.chains),
                                                 std::vector<float>());
        for (auto& c : kept[static_cast<std::size_t>(v)]) {
            c.reserve(static_cast<std::size_t>(cfg.samples));
        }
    }

    std::vector<double> x(V), new_lls;
    std::vector<double> cached_ll(graph.factors.size());

    for (int chain = 0; chain < cfg.chains; ++chain) {
        auto rng = substream(cfg.seed, 0xC0ULL, static_cast<std::uint64_t>(chain));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.0, 1.0);

        for (std::size_t v = 0; v < V; ++v) {
            x[v] = std::clamp(draw_beta(rng, graph.prior_alpha[v], graph.prior_beta[v]), 1e-3,
                              1.0 - 1e-3);
        }
        for (std::size_t f = 0; f < graph.factors.size(); ++f) {
            cached_ll[f] = factor_ll(graph.factors[f], x);
        }

        std::vector<double> step(V, 1.0);
        std::vector<int> accepts(V, 0);
        const int total_iters = cfg.burn_in + cfg.samples;
        constexpr int kAdaptEvery = 50;

        for (int iter = 0; iter < total_iters; ++iter) {
            for (int v : sampled) {
                const auto uv = static_cast<std::size_t>(v);
                const double xv = x[uv];
                const double z = std::log(xv) - std::log1p(-xv);
                const double zp = z + step[uv] * gauss(rng);
                // stable logistic
                const double xp = zp >= 0.0 ? 1.0 / (1.0 + std::exp(-zp))
                                            : std::exp(zp) / (1.0 + std::exp(zp));
                if (xp <= 0.0 || xp >= 1.0) continue;

                // Beta prior plus logit-transform Jacobian collapse to
                // a*ln x + b*ln(1-x).
                double delta = graph.prior_alpha[uv] * (std::log(xp) - std::log(xv)) +
                               graph.prior_beta[uv] * (std::log1p(-xp) - std::log1p(-xv));

                const auto& adj = graph.var_factors[uv];
                new_lls.clear();
                x[uv] = xp;
                for (int f : adj) {
                    const double ll = factor_ll(graph.factors[static_cast<std::size_t>(f)], x);
                    new_lls.push_back(ll);
                    delta += ll - cached_ll[static_cast<std::size_t>(f)];
                }
                if (std::log(unif(rng)) < delta) {
                    for (std::size_t k = 0; k < adj.size(); ++k) {
                        cached_ll[static_cast<std::size_t>(adj[k])] = new_lls[k];
                    }
                    accepts[uv]++;
                } else {
                    x[uv] = xv;
                }
            }

            if (iter < cfg.burn_in && (iter + 1) % kAdaptEvery == 0) {
                for (int v : sampled) {
                    const auto uv = static_cast<std::size_t>(v);
                    const double rate = static_cast<double>(accepts[uv]) / kAdaptEvery;
                    step[uv] = std::clamp(step[uv] * std::exp(rate - 0.44), 1e-2, 20.0);
                    accepts[uv] = 0;
                }
            }
            if (iter >= cfg.burn_in) {
                for (int v : sampled) {
                    kept[static_cast<std::size_t>(v)][static_cast<std::size_t>(chain)].push_back(
                        static_cast<float>(x[static_cast<std::size_t>(v)]));
                }
            }
        }
    }

    InferenceResult result;
    std::vector<float> scratch;
    for (std::size_t v = 0; v < V; ++v) {
        HealthPosterior post;
        post.component = graph.variables[v];
        if (kept[v].empty()) {
            // Unobserved this window: the prior is the posterior.
            HealthBelief prior{graph.prior_alpha[v], graph.prior_beta[v]};
            post.mean = prior.mean();
            post.variance = prior.variance();
            post.credible_low = 0.0;
            post.credible_high = 1.0;
            post.effective_samples = 0;
            post.observed = false;
        } else {
            double m = 0.0;
            std::size_t count = 0;
            for (const auto& c : kept[v]) {
                for (float s : c) m += s;
                count += c.size();
            }
            m /= static_cast<double>(count);
            double var = 0.0;
            for (const auto& c : kept[v]) {
                for (float s : c) var += (s - m) * (s - m);
            }
            var /= static_cast<double>(count - 1);

            scratch.clear();
            for (const auto& c : kept[v]) scratch.insert(scratch.end(), c.begin(), c.end());
            post.mean = m;
            post.variance = var;
            post.credible_low = quantile_of(scratch, cfg.credible_low_q);
            post.credible_high = quantile_of(scratch, cfg.credible_high_q);
            post.effective_samples = ess_of(kept[v]);
            post.observed = true;

            if (cfg.chains > 1) {
                const double rhat = split_rhat(kept[v]);
                if (rhat > cfg.rhat_max) {
                    result.converged = false;
                    result.warnings.push_back("R-hat " + std::to_string(rhat) + " for " +
                                              graph.variables[v].str());
                }
            }
        }
        result.posteriors[graph.variables[v]] = post;
    }
    for (const auto& w : graph.warnings) result.warnings.push_back(w);
    return result;
}

}  // namespace storelens
