#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/trapezoidal.hpp>
#include <json.hpp>

#include <nlpca/nlpca.hpp>

namespace nlpca::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

void apply_chain_settings(HyperParams& hp, const RunConfig& config) {
  hp.n_sweeps = config.sweeps;
  hp.burn_in = config.burn_in;
  hp.thin = config.thin;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write to " + path.string() + " failed");
}

void write_json(const fs::path& path, const ordered_json& doc) { write_text(path, doc.dump(2) + "\n"); }

std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::string out = "sweep,sigma2,log_posterior,fallbacks\n";
  for (const auto& row : rows) {
    out += std::to_string(row.sweep) + ',' + format_double(row.sigma2) + ',' +
           format_double(row.log_posterior) + ',' + std::to_string(row.fallbacks) + '\n';
  }
  return out;
}

std::string histogram_csv(const HistogramSpec& h) {
  std::string out = "bin_lower,bin_upper,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out += format_double(h.bin_edges[b]) + ',' + format_double(h.bin_edges[b + 1]) + ',' +
           std::to_string(h.counts[b]) + '\n';
  }
  return out;
}

ordered_json hyperparams_json(const HyperParams& hp) {
  return {
      {"d", hp.d},
      {"a2", hp.flat_latent_prior() ? ordered_json("inf") : ordered_json(hp.a2)},
      {"eta", hp.eta},
      {"tau2", hp.tau2},
      {"c", hp.c_strength},
      {"w", hp.bandwidth},
      {"sweeps", hp.n_sweeps},
      {"burn_in", hp.burn_in},
      {"thin", hp.thin},
  };
}

ordered_json diagnostics_json(const PosteriorSummary& summary) {
  const SamplerStats& s = summary.sampler_diagnostics;
  return {
      {"transformation_draws", s.draws},
      {"column_gibbs_fallbacks", s.fallbacks},
      {"rejection_attempts", s.rejection_attempts},
      {"rejection_acceptance_rate", s.acceptance_rate()},
      {"kept_samples", summary.kept},
  };
}

double mean(const Vector& v) { return v.size() ? v.mean() : 0.0; }

void require_readable(const fs::path& path, const char* what) {
  if (path.empty()) throw InvalidArgument(std::string("missing --") + what + " path");
  if (!fs::exists(path)) throw IoError(std::string(what) + " file not found: " + path.string());
}

// E[cos θ] under the circular density ∝ exp(κ cos θ), by the trapezoidal
// rule on the full period.
double circle_mean_resultant(double kappa) {
  using boost::math::quadrature::trapezoidal;
  const double two_pi = boost::math::constants::two_pi<double>();
  const double z = trapezoidal([&](double t) { return std::exp(kappa * (std::cos(t) - 1.0)); }, 0.0, two_pi);
  const double m = trapezoidal(
      [&](double t) { return std::cos(t) * std::exp(kappa * (std::cos(t) - 1.0)); }, 0.0, two_pi);
  return m / z;
}

struct MomentCheck {
  double mean;
  double standard_error;
};

MomentCheck first_coordinate_moment(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mu = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  return {mu, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

void validate(const RunConfig& config) {
  if (config.dim < 1) throw InvalidArgument("--dim must be >= 1");
  if (config.sweeps < 1) throw InvalidArgument("--sweeps must be >= 1");
  if (config.burn_in < 0 || config.burn_in >= config.sweeps) {
    throw InvalidArgument("--burn-in must be in [0, --sweeps)");
  }
  if (config.thin < 1) throw InvalidArgument("--thin must be >= 1");
  if (config.c && !(*config.c > 0.0)) throw InvalidArgument("--c must be positive");
  if (config.w && !(*config.w >= kMinBandwidth)) throw InvalidArgument("--w must be >= 1e-8");
  if (config.bins < 1) throw InvalidArgument("--bins must be >= 1");
  prior_overrides(config);
}

PriorOverrides prior_overrides(const RunConfig& config) {
  PriorOverrides o;
  if (config.a2 == "auto") {
    o.a2_mode = PriorOverrides::A2Mode::kAuto;
  } else if (config.a2 == "inf") {
    o.a2_mode = PriorOverrides::A2Mode::kInfinite;
  } else {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(config.a2, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != config.a2.size() || !(value > 0.0) || !std::isfinite(value)) {
      throw InvalidArgument("--a2 must be auto, inf or a positive number");
    }
    o.a2_mode = PriorOverrides::A2Mode::kFixed;
    o.a2 = value;
  }
  o.c_strength = config.c;
  o.bandwidth = config.w;
  return o;
}

int cmd_sphere_demo(const RunConfig& config, std::ostream& out) {
  validate(config);
  if (config.n < 2) throw InvalidArgument("--n must be >= 2");
  if (!(config.noise >= 0.0)) throw InvalidArgument("--noise must be nonnegative");
  if (config.dim > 3) throw InvalidArgument("--dim must be <= 3 for sphere data");

  Rng rng(config.seed);
  const SphereSample sample = generate_sphere(config.n, config.noise, rng);
  const Dataset& data = sample.data;

  HyperParams hp = make_hyperparams(data, config.dim, prior_overrides(config));
  apply_chain_settings(hp, config);
  hp.validate();

  const PcaFit pca = pca_fit(data, config.dim);
  const Matrix pca_recon = reconstruct_linear(pca);

  ModelState state = init_state(data, hp);
  const PosteriorSummary summary = run_chain(state, 0, data, hp, rng);
  const Matrix model_recon = reconstruct_nonlinear(summary);

  const Vector origin = Vector::Zero(3);
  const Vector data_dist = distance_to_unit_sphere(sample.raw, origin);
  const Vector pca_dist = distance_to_unit_sphere(data.decentered(pca_recon), origin);
  const Vector model_dist = distance_to_unit_sphere(data.decentered(model_recon), origin);
  const Vector pca_err = reconstruction_errors(data.y, pca_recon);
  const Vector model_err = reconstruction_errors(data.y, model_recon);

  fs::create_directories(config.out);
  const std::vector<std::string> xyz = {"x", "y", "z"};
  write_csv(config.out / "sphere_points.csv", sample.raw, xyz);
  write_csv(config.out / "reconstruction_model.csv", data.decentered(model_recon), xyz);
  write_csv(config.out / "reconstruction_pca.csv", data.decentered(pca_recon), xyz);
  write_text(config.out / "hist_data_to_sphere.csv", histogram_csv(histogram(data_dist, config.bins)));
  write_text(config.out / "hist_reconstruction_to_sphere.csv",
             histogram_csv(histogram(model_dist, config.bins)));
  write_text(config.out / "hist_reconstruction_errors.csv",
             histogram_csv(histogram(model_err, config.bins)));
  write_text(config.out / "trace.csv", trace_csv(summary.trace));

  ordered_json doc = {
      {"experiment", "sphere"},
      {"n", config.n},
      {"noise", config.noise},
      {"seed", config.seed},
      {"hyperparams", hyperparams_json(hp)},
      {"data", {{"mean_distance_to_sphere", mean(data_dist)}}},
      {"pca",
       {{"mean_reconstruction_error", mean(pca_err)},
        {"mean_distance_to_sphere", mean(pca_dist)},
        {"singular_values", std::vector<double>(pca.singular_values.begin(), pca.singular_values.end())}}},
      {"model",
       {{"mean_reconstruction_error", mean(model_err)},
        {"mean_distance_to_sphere", mean(model_dist)},
        {"final_sigma2", state.sigma2}}},
      {"sampler", diagnostics_json(summary)},
  };
  write_json(config.out / "summary.json", doc);

  out << "pca   mean reconstruction error " << mean(pca_err) << ", mean distance to sphere "
      << mean(pca_dist) << "\n"
      << "model mean reconstruction error " << mean(model_err) << ", mean distance to sphere "
      << mean(model_dist) << "\n"
      << "wrote " << config.out.string() << "\n";
  return kOk;
}

int cmd_digits_demo(const RunConfig& config, std::ostream& out) {
  validate(config);
  require_readable(config.images, "images");
  require_readable(config.labels, "labels");
  if (config.per_class < 1) throw InvalidArgument("--per-class must be >= 1");

  RawImageSet images = load_idx_images(config.images);
  images.labels = load_idx_labels(config.labels);
  if (images.labels.size() != static_cast<std::size_t>(images.count())) {
    throw IoError("image file has " + std::to_string(images.count()) + " images but label file has " +
                  std::to_string(images.labels.size()) + " labels");
  }
  if (images.rows % 14 != 0 || images.cols % 14 != 0 || images.rows / 14 != images.cols / 14) {
    throw InvalidArgument("images must be square multiples of 14 pixels");
  }

  Rng rng(config.seed);
  const RawImageSet reduced = subsample_images(images, images.rows / 14, config.pool);
  const RawImageSet subset = select_digit_subset(reduced, {1, 2, 3}, config.per_class, rng);
  const Dataset data = to_dataset(subset);

  HyperParams hp = make_hyperparams(data, config.dim, prior_overrides(config));
  apply_chain_settings(hp, config);
  hp.validate();

  const PcaFit pca = pca_fit(data, config.dim);
  ModelState state = init_state(data, hp);
  const PosteriorSummary summary = run_chain(state, 0, data, hp, rng);

  const int pca_mismatch = nn_mismatch_count(pca.latents, subset.labels);
  const int model_mismatch = nn_mismatch_count(summary.mean_latents, subset.labels);

  fs::create_directories(config.out);
  const auto columns = numbered_columns("latent", config.dim);
  write_csv(config.out / "latents_pca.csv", pca.latents, columns, subset.labels);
  write_csv(config.out / "latents_model.csv", summary.mean_latents, columns, subset.labels);
  write_text(config.out / "trace.csv", trace_csv(summary.trace));

  ordered_json doc = {
      {"experiment", "digits"},
      {"n", data.n()},
      {"p", data.p()},
      {"classes", {1, 2, 3}},
      {"per_class", config.per_class},
      {"seed", config.seed},
      {"pooling", config.pool == Pooling::kStride ? "stride" : "mean"},
      {"hyperparams", hyperparams_json(hp)},
      {"pca_nn_mismatch", pca_mismatch},
      {"model_nn_mismatch", model_mismatch},
      {"reference_counts", {{"pca", 53}, {"model", 25}}},
      {"sampler", diagnostics_json(summary)},
  };
  write_json(config.out / "summary.json", doc);

  out << "nearest-neighbour label mismatches: pca " << pca_mismatch << ", model " << model_mismatch
      << " (reference 53 / 25)\n"
      << "wrote " << config.out.string() << "\n";
  return kOk;
}

int cmd_fit(const RunConfig& config, std::ostream& out) {
  validate(config);
  require_readable(config.input, "input");
  const CsvTable table = read_csv(config.input);
  if (table.values.rows() < 2) throw InvalidArgument("input needs at least two rows");
  const Dataset data = center(table.values);
  const Eigen::Index max_dim = std::min(data.n(), data.p());
  if (config.dim > max_dim) {
    throw InvalidArgument("--dim " + std::to_string(config.dim) + " exceeds min(n, p) = " +
                          std::to_string(max_dim));
  }
  if (config.checkpoint_at && (*config.checkpoint_at < 1 || *config.checkpoint_at > config.sweeps)) {
    throw InvalidArgument("--checkpoint-at must be in [1, --sweeps]");
  }

  HyperParams hp;
  ModelState state;
  int first_sweep = 0;
  std::optional<Rng> rng;
  if (config.resume) {
    require_readable(*config.resume, "resume");
    Checkpoint cp = load_checkpoint(*config.resume);
    if (cp.state.latents.rows() != data.n() || cp.state.transformations.front().ambient_dim() != data.p() ||
        cp.hyperparams.d != config.dim) {
      throw InvalidArgument("checkpoint dimensions do not match the input and --dim");
    }
    hp = cp.hyperparams;
    state = std::move(cp.state);
    first_sweep = cp.sweep;
    rng.emplace(Rng::resume(cp.seed, cp.counter));
  } else {
    hp = make_hyperparams(data, config.dim, prior_overrides(config));
    rng.emplace(config.seed);
  }
  apply_chain_settings(hp, config);
  hp.validate();
  if (!config.resume) state = init_state(data, hp);

  fs::create_directories(config.out);
  const SweepObserver observer = [&](const TraceRow& row, const ModelState& current) {
    if (config.checkpoint_at && row.sweep + 1 == *config.checkpoint_at) {
      save_checkpoint(config.out / ("checkpoint_" + std::to_string(row.sweep + 1) + ".json"),
                      {current, hp, rng->seed(), rng->counter(), row.sweep + 1});
    }
  };
  const PosteriorSummary summary = run_chain(state, first_sweep, data, hp, *rng, observer);

  save_checkpoint(config.out / "checkpoint.json", {state, hp, rng->seed(), rng->counter(), hp.n_sweeps});
  const auto columns = numbered_columns("latent", config.dim);
  write_csv(config.out / "latents.csv", summary.mean_latents, columns);
  const Matrix recon = reconstruct_nonlinear(summary);
  write_csv(config.out / "reconstruction.csv", data.decentered(recon), numbered_columns("y", data.p()));
  write_text(config.out / "trace.csv", trace_csv(summary.trace));

  const Vector errors = reconstruction_errors(data.y, recon);
  ordered_json doc = {
      {"n", data.n()},
      {"p", data.p()},
      {"first_sweep", first_sweep},
      {"hyperparams", hyperparams_json(hp)},
      {"mean_reconstruction_error", mean(errors)},
      {"posterior_mean_sigma2",
       std::accumulate(summary.sigma2_trace.begin(), summary.sigma2_trace.end(), 0.0) /
           static_cast<double>(summary.sigma2_trace.size())},
      {"sampler", diagnostics_json(summary)},
  };
  write_json(config.out / "summary.json", doc);
  out << "fitted " << data.n() << "x" << data.p() << " with d=" << config.dim << "; wrote "
      << config.out.string() << "\n";
  return kOk;
}

int cmd_vmf_diag(const RunConfig& config, std::ostream& out) {
  if (config.d_frame < 1 || config.d_frame > config.p) {
    throw InvalidArgument("need 1 <= --d-frame <= --p");
  }
  if (!(config.kappa >= 0.0) || !std::isfinite(config.kappa)) {
    throw InvalidArgument("--kappa must be finite and nonnegative");
  }
  if (config.samples < 2) throw InvalidArgument("--samples must be >= 2");

  const VmfParam c(config.kappa * Matrix::Identity(config.p, config.d_frame));
  const SamplerPolicy policy;
  Rng rng(config.seed);
  SamplerStats stats;
  std::vector<double> first_coord;
  first_coord.reserve(static_cast<std::size_t>(config.samples));
  for (int s = 0; s < config.samples; ++s) {
    const VmfDraw draw = vmf_sample(c, rng, policy);
    stats.record(draw);
    first_coord.push_back(draw.sample.matrix()(0, 0));
  }

  out << "p=" << config.p << " d=" << config.d_frame << " kappa=" << config.kappa
      << " samples=" << config.samples << "\n"
      << "rejection_attempts=" << stats.rejection_attempts << "\n"
      << "acceptance_rate=" << stats.acceptance_rate() << "\n"
      << "fallbacks=" << stats.fallbacks << "\n"
      << "fallback_engaged=" << (stats.fallbacks > 0 ? "yes" : "no") << "\n";

  if (config.p == 2 && config.d_frame == 1) {
    const double oracle = circle_mean_resultant(config.kappa);
    const MomentCheck dispatch = first_coordinate_moment(first_coord);

    std::vector<double> chain;
    StiefelPoint x = vmf_mode(c);
    for (int s = 0; s < config.samples; ++s) {
      x = vmf_sample_column_gibbs(c, x, 1, rng);
      chain.push_back(x.matrix()(0, 0));
    }
    const MomentCheck gibbs = first_coordinate_moment(chain);
    const double z = std::abs(dispatch.mean - oracle) / dispatch.standard_error;
    const double z_joint = std::abs(dispatch.mean - gibbs.mean) /
                           std::hypot(dispatch.standard_error, gibbs.standard_error);
    out << "quadrature_mean_resultant=" << oracle << "\n"
        << "sampler_mean_resultant=" << dispatch.mean << " se=" << dispatch.standard_error << "\n"
        << "column_gibbs_mean_resultant=" << gibbs.mean << " se=" << gibbs.standard_error << "\n"
        << "moment_check=" << (z <= 3.0 ? "pass" : "fail") << " z=" << z << "\n"
        << "cross_sampler_check=" << (z_joint <= 3.0 ? "pass" : "fail") << " z=" << z_joint << "\n";
  }
  return kOk;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonlinear dimension reduction with a Markov random field prior over local frames"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  std::optional<std::uint64_t> seed;
  std::string pool = "stride";
  std::string resume;
  app.add_option("--n", config.n, "Number of sphere points");
  app.add_option("--noise", config.noise, "Sphere noise standard deviation");
  app.add_option("--dim", config.dim, "Latent dimension d");
  app.add_option("--sweeps", config.sweeps, "Total Gibbs sweeps");
  app.add_option("--burn-in", config.burn_in, "Sweeps discarded before averaging");
  app.add_option("--thin", config.thin, "Keep every k-th sweep after burn-in");
  app.add_option("--seed", seed, "Random seed (falls back to $NLPCA_SEED)");
  app.add_option("--a2", config.a2, "Latent prior variance: auto, inf or a value");
  app.add_option("--c", config.c, "MRF interaction strength (default 100/n)");
  app.add_option("--w", config.w, "MRF kernel bandwidth (default mean initial latent distance)");
  app.add_option("--images", config.images, "IDX image file");
  app.add_option("--labels", config.labels, "IDX label file");
  app.add_option("--input", config.input, "CSV data matrix for fit");
  app.add_option("--resume", resume, "Checkpoint JSON to resume from");
  app.add_option("--checkpoint-at", config.checkpoint_at, "Also checkpoint after this many sweeps");
  app.add_option("--out", config.out, "Output directory");
  app.add_option("--pool", pool, "Image reduction: stride or mean")->check(CLI::IsMember({"stride", "mean"}));
  app.add_option("--per-class", config.per_class, "Digits per class");
  app.add_option("--bins", config.bins, "Histogram bins");
  app.add_option("--kappa", config.kappa, "Concentration for vmf-diag");
  app.add_option("--p", config.p, "Ambient dimension for vmf-diag");
  app.add_option("--d-frame", config.d_frame, "Frame dimension for vmf-diag");
  app.add_option("--samples", config.samples, "Draws for vmf-diag");

  auto* sphere = app.add_subcommand("sphere-demo", "Noisy unit-sphere experiment");
  auto* digits = app.add_subcommand("digits-demo", "Handwritten digits 1/2/3 experiment");
  auto* fit = app.add_subcommand("fit", "Fit a CSV data matrix");
  auto* diag = app.add_subcommand("vmf-diag", "von Mises-Fisher sampler diagnostics");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  if (seed) {
    config.seed = *seed;
  } else if (const char* env = std::getenv("NLPCA_SEED")) {
    try {
      config.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: NLPCA_SEED is not an unsigned integer\n";
      return kUsage;
    }
  }
  config.pool = pool == "mean" ? Pooling::kMean : Pooling::kStride;
  if (!resume.empty()) config.resume = resume;

  try {
    if (sphere->parsed()) return cmd_sphere_demo(config, out);
    if (digits->parsed()) return cmd_digits_demo(config, out);
    if (fit->parsed()) return cmd_fit(config, out);
    if (diag->parsed()) return cmd_vmf_diag(config, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}

}  // namespace nlpca::cli
