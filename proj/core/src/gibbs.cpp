#include "nlpca/gibbs.hpp"

#include <cmath>
#include <string>

#include "nlpca/error.hpp"
#include "nlpca/pca.hpp"

namespace nlpca {
namespace {

void require_site(Eigen::Index site, const ModelState& state) {
  if (site < 0 || site >= state.latents.rows()) {
    throw InvalidArgument("site index " + std::to_string(site) + " out of range");
  }
}

double squared_residual(const ModelState& state, const Dataset& data) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const auto& v = state.transformations[static_cast<std::size_t>(i)].matrix();
    total += (data.y.row(i).transpose() - v * state.latents.row(i).transpose()).squaredNorm();
  }
  return total;
}

}  // namespace

void HyperParams::validate() const {
  if (!(a2 > 0.0)) throw InvalidArgument("a2 must be positive or infinite");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be positive");
  if (!(tau2 > 0.0) || !std::isfinite(tau2)) throw InvalidArgument("tau2 must be positive");
  if (!(c_strength > 0.0) || !std::isfinite(c_strength)) {
    throw InvalidArgument("interaction strength c must be positive");
  }
  if (!(bandwidth >= kMinBandwidth) || !std::isfinite(bandwidth)) {
    throw InvalidArgument("kernel bandwidth w must be at least 1e-8");
  }
  if (d < 1) throw InvalidArgument("latent dimension must be >= 1");
  if (sampler.max_attempts < 1) throw InvalidArgument("sampler max_attempts must be >= 1");
  if (sampler.gibbs_sweeps < 1) throw InvalidArgument("sampler gibbs_sweeps must be >= 1");
  if (n_sweeps < 1) throw InvalidArgument("n_sweeps must be >= 1");
  if (burn_in < 0 || burn_in >= n_sweeps) {
    throw InvalidArgument("burn-in must satisfy 0 <= burn_in < n_sweeps");
  }
  if (thin < 1) throw InvalidArgument("thin must be >= 1");
}

HyperParams make_hyperparams(const Dataset& data, Eigen::Index d, const PriorOverrides& overrides) {
  HyperParams hp;
  hp.d = d;
  const PcaFit fit = pca_fit(data, d);
  const double variance = avg_variance(data);

  switch (overrides.a2_mode) {
    case PriorOverrides::A2Mode::kAuto:
      hp.a2 = variance;
      break;
    case PriorOverrides::A2Mode::kInfinite:
      hp.a2 = std::numeric_limits<double>::infinity();
      break;
    case PriorOverrides::A2Mode::kFixed:
      hp.a2 = overrides.a2;
      break;
  }

  if (overrides.tau2) {
    hp.tau2 = *overrides.tau2;
  } else {
    const double residual = (data.y - reconstruct_linear(fit)).squaredNorm() /
                            (static_cast<double>(data.n()) * static_cast<double>(data.p()));
    const double floor = kRelativeTau2Floor * (variance > 0.0 ? variance : 1.0);
    hp.tau2 = std::max(residual, floor);
  }
  hp.c_strength = overrides.c_strength.value_or(default_strength(data.n()));
  hp.bandwidth = overrides.bandwidth ? *overrides.bandwidth : default_bandwidth(fit.latents);
  return hp;
}

Matrix ModelState::reconstruction() const {
  Matrix out(latents.rows(), transformations.front().ambient_dim());
  for (Eigen::Index i = 0; i < latents.rows(); ++i) {
    out.row(i) = (transformations[static_cast<std::size_t>(i)].matrix() *
                  latents.row(i).transpose())
                     .transpose();
  }
  return out;
}

ModelState init_state(const Dataset& data, const HyperParams& hp) {
  hp.validate();
  const PcaFit fit = pca_fit(data, hp.d);
  ModelState state;
  state.transformations.assign(static_cast<std::size_t>(data.n()), fit.loadings);
  state.latents = fit.latents;
  state.sigma2 = hp.tau2;
  state.weights = compute_weights(state.latents, hp.c_strength, hp.bandwidth);
  return state;
}

VmfDraw update_transformation(Eigen::Index site, const ModelState& state, const Dataset& data,
                              const SamplerPolicy& policy, Rng& rng) {
  require_site(site, state);
  const VmfParam prior = conditional_param(site, state.transformations, state.weights);
  const Matrix c = data.y.row(site).transpose() * state.latents.row(site) / state.sigma2 +
                   prior.matrix();
  const StiefelPoint* start =
      policy.warm_start ? &state.transformations[static_cast<std::size_t>(site)] : nullptr;
  return vmf_sample(VmfParam(c), rng, policy, start);
}

Vector update_latent(Eigen::Index site, const ModelState& state, const Dataset& data, double a2,
                     Rng& rng) {
  require_site(site, state);
  const auto& v = state.transformations[static_cast<std::size_t>(site)].matrix();
  const Vector projection = v.transpose() * data.y.row(site).transpose();
  double shrink = 1.0;
  double variance = state.sigma2;
  if (std::isfinite(a2)) {
    shrink = a2 / (a2 + state.sigma2);
    variance = a2 * state.sigma2 / (a2 + state.sigma2);
  }
  const double sd = std::sqrt(variance);
  Vector draw(projection.size());
  for (Eigen::Index k = 0; k < projection.size(); ++k) {
    draw[k] = shrink * projection[k] + sd * rng.normal();
  }
  return draw;
}

double update_noise(const ModelState& state, const Dataset& data, const HyperParams& hp, Rng& rng) {
  const double np = static_cast<double>(data.n()) * static_cast<double>(data.p());
  const double shape = 0.5 * (hp.eta + np);
  const double rate = 0.5 * (hp.eta * hp.tau2 + squared_residual(state, data));
  return 1.0 / rng.gamma(shape, rate);
}

double log_posterior_unnorm(const ModelState& state, const Dataset& data, const HyperParams& hp) {
  const double np = static_cast<double>(data.n()) * static_cast<double>(data.p());
  const double precision = 1.0 / state.sigma2;
  double value = -0.5 * squared_residual(state, data) * precision - 0.5 * np * std::log(state.sigma2);
  value += mrf_log_density_unnorm(state.transformations, state.weights);
  if (std::isfinite(hp.a2)) value -= 0.5 * state.latents.squaredNorm() / hp.a2;
  value += (0.5 * hp.eta - 1.0) * std::log(precision) - 0.5 * hp.eta * hp.tau2 * precision;
  return value;
}

SweepResult sweep(ModelState& state, const Dataset& data, const HyperParams& hp, Rng& rng,
                  SamplerStats* stats) {
  const Eigen::Index n = data.n();
  std::uint64_t fallbacks = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    VmfDraw draw = update_transformation(i, state, data, hp.sampler, rng);
    if (draw.path == SamplerPath::kColumnGibbs) ++fallbacks;
    if (stats) stats->record(draw);
    state.transformations[static_cast<std::size_t>(i)] = std::move(draw.sample);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    state.latents.row(i) = update_latent(i, state, data, hp.a2, rng).transpose();
  }
  state.weights = compute_weights(state.latents, hp.c_strength, hp.bandwidth);
  state.sigma2 = update_noise(state, data, hp, rng);
  return {log_posterior_unnorm(state, data, hp), fallbacks};
}

PosteriorSummary run_chain(ModelState& state, int first_sweep, const Dataset& data,
                           const HyperParams& hp, Rng& rng, const SweepObserver& observer) {
  hp.validate();
  if (first_sweep < 0 || first_sweep >= hp.n_sweeps) {
    throw InvalidArgument("chain already complete: sweep " + std::to_string(first_sweep) +
                          " of " + std::to_string(hp.n_sweeps));
  }
  const std::size_t n = state.transformations.size();
  const Eigen::Index p = data.p();
  std::vector<Matrix> frame_sums(n, Matrix::Zero(p, hp.d));
  Matrix latent_sum = Matrix::Zero(data.n(), hp.d);

  PosteriorSummary summary;
  for (int s = first_sweep; s < hp.n_sweeps; ++s) {
    const SweepResult result = sweep(state, data, hp, rng, &summary.sampler_diagnostics);
    const TraceRow row{s, state.sigma2, result.log_posterior, result.fallbacks};
    summary.trace.push_back(row);
    summary.log_posterior_trace.push_back(result.log_posterior);
    if (s >= hp.burn_in && (s - hp.burn_in) % hp.thin == 0) {
      for (std::size_t i = 0; i < n; ++i) frame_sums[i] += state.transformations[i].matrix();
      latent_sum += state.latents;
      summary.sigma2_trace.push_back(state.sigma2);
      ++summary.kept;
    }
    if (observer) observer(row, state);
  }

  if (summary.kept == 0) {
    // Resumed past the last kept sweep: summarize the final state.
    for (std::size_t i = 0; i < n; ++i) frame_sums[i] = state.transformations[i].matrix();
    latent_sum = state.latents;
    summary.kept = 1;
    summary.sigma2_trace.push_back(state.sigma2);
  }
  const double inv = 1.0 / static_cast<double>(summary.kept);
  summary.mean_latents = latent_sum * inv;
  summary.mean_transformations.reserve(n);
  for (auto& sum : frame_sums) summary.mean_transformations.push_back(polar_project(sum * inv));
  return summary;
}

PosteriorSummary run(const Dataset& data, const HyperParams& hp, Rng& rng) {
  ModelState state = init_state(data, hp);
  return run_chain(state, 0, data, hp, rng);
}

Matrix reconstruct_nonlinear(const PosteriorSummary& summary) {
  const Eigen::Index n = summary.mean_latents.rows();
  if (n == 0) return Matrix(0, 0);
  Matrix out(n, summary.mean_transformations.front().ambient_dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    out.row(i) = (summary.mean_transformations[static_cast<std::size_t>(i)].matrix() *
                  summary.mean_latents.row(i).transpose())
                     .transpose();
  }
  return out;
}

}  // namespace nlpca
