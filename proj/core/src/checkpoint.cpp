#include "nlpca/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nlpca/error.hpp"

namespace nlpca {

using nlohmann::json;

std::string checkpoint_to_json(const Checkpoint& cp) {
  const ModelState& st = cp.state;
  const auto n = static_cast<Eigen::Index>(st.transformations.size());
  const Eigen::Index p = n > 0 ? st.transformations.front().ambient_dim() : 0;
  const Eigen::Index d = st.latents.cols();

  json frames = json::array();
  for (const auto& frame : st.transformations) {
    json row = json::array();
    for (Eigen::Index r = 0; r < p; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) row.push_back(frame.matrix()(r, c));
    }
    frames.push_back(std::move(row));
  }
  json latents = json::array();
  for (Eigen::Index i = 0; i < st.latents.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < d; ++c) row.push_back(st.latents(i, c));
    latents.push_back(std::move(row));
  }

  const HyperParams& hp = cp.hyperparams;
  json hyper = {
      {"a2", hp.flat_latent_prior() ? json(nullptr) : json(hp.a2)},
      {"eta", hp.eta},
      {"tau2", hp.tau2},
      {"c_strength", hp.c_strength},
      {"bandwidth", hp.bandwidth},
      {"n_sweeps", hp.n_sweeps},
      {"burn_in", hp.burn_in},
      {"thin", hp.thin},
      {"max_attempts", hp.sampler.max_attempts},
      {"gibbs_sweeps", hp.sampler.gibbs_sweeps},
      {"rejection_concentration_limit", hp.sampler.rejection_concentration_limit},
      {"warm_start", hp.sampler.warm_start},
  };

  json doc = {
      {"n", n},
      {"p", p},
      {"d", d},
      {"sigma2", st.sigma2},
      {"seed", cp.seed},
      {"counter", cp.counter},
      {"sweep", cp.sweep},
      {"hyperparams", std::move(hyper)},
      {"transformations", std::move(frames)},
      {"latents", std::move(latents)},
  };
  return doc.dump(1) + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  try {
    Checkpoint cp;
    const auto n = doc.at("n").get<Eigen::Index>();
    const auto p = doc.at("p").get<Eigen::Index>();
    const auto d = doc.at("d").get<Eigen::Index>();
    cp.seed = doc.at("seed").get<std::uint64_t>();
    cp.counter = doc.at("counter").get<std::uint64_t>();
    cp.sweep = doc.value("sweep", 0);

    const json& hyper = doc.at("hyperparams");
    HyperParams& hp = cp.hyperparams;
    hp.a2 = hyper.at("a2").is_null() ? std::numeric_limits<double>::infinity()
                                     : hyper.at("a2").get<double>();
    hp.eta = hyper.at("eta").get<double>();
    hp.tau2 = hyper.at("tau2").get<double>();
    hp.c_strength = hyper.at("c_strength").get<double>();
    hp.bandwidth = hyper.at("bandwidth").get<double>();
    hp.n_sweeps = hyper.at("n_sweeps").get<int>();
    hp.burn_in = hyper.at("burn_in").get<int>();
    hp.thin = hyper.at("thin").get<int>();
    hp.sampler.max_attempts = hyper.at("max_attempts").get<int>();
    hp.sampler.gibbs_sweeps = hyper.at("gibbs_sweeps").get<int>();
    hp.sampler.rejection_concentration_limit =
        hyper.at("rejection_concentration_limit").get<double>();
    hp.sampler.warm_start = hyper.at("warm_start").get<bool>();
    hp.d = d;

    const json& frames = doc.at("transformations");
    const json& latents = doc.at("latents");
    if (frames.size() != static_cast<std::size_t>(n) || latents.size() != static_cast<std::size_t>(n)) {
      throw IoError("checkpoint arrays do not match n = " + std::to_string(n));
    }
    cp.state.latents.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
      const json& f = frames[static_cast<std::size_t>(i)];
      const json& x = latents[static_cast<std::size_t>(i)];
      if (f.size() != static_cast<std::size_t>(p * d) || x.size() != static_cast<std::size_t>(d)) {
        throw IoError("checkpoint row " + std::to_string(i) + " has the wrong length");
      }
      Matrix m(p, d);
      for (Eigen::Index r = 0; r < p; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) m(r, c) = f[static_cast<std::size_t>(r * d + c)].get<double>();
      }
      cp.state.transformations.emplace_back(std::move(m));
      for (Eigen::Index c = 0; c < d; ++c) cp.state.latents(i, c) = x[static_cast<std::size_t>(c)].get<double>();
    }
    cp.state.sigma2 = doc.at("sigma2").get<double>();
    cp.state.weights = compute_weights(cp.state.latents, hp.c_strength, hp.bandwidth);
    return cp;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << checkpoint_to_json(checkpoint);
  if (!out) throw IoError("write to " + path.string() + " failed");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return checkpoint_from_json(buffer.str());
}

}  // namespace nlpca
