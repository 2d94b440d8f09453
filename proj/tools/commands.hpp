#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlpca/dataset.hpp>
#include <nlpca/gibbs.hpp>

namespace nlpca::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kNumerical = 3 };

struct RunConfig {
  std::string command;
  Eigen::Index n = 100;
  double noise = 0.05;
  Eigen::Index dim = 2;
  int sweeps = 2000;
  int burn_in = 1000;
  int thin = 5;
  std::uint64_t seed = 1;
  std::string a2 = "auto";
  std::optional<double> c;
  std::optional<double> w;
  std::filesystem::path images;
  std::filesystem::path labels;
  std::filesystem::path input;
  std::optional<std::filesystem::path> resume;
  std::optional<int> checkpoint_at;
  std::filesystem::path out = "nlpca_out";
  Pooling pool = Pooling::kStride;
  int per_class = 50;
  int bins = 20;
  double kappa = 2.0;
  Eigen::Index p = 2;
  Eigen::Index d_frame = 1;
  int samples = 10000;
};

/// Hyperparameter-level checks that need no data; throws InvalidArgument.
void validate(const RunConfig& config);

PriorOverrides prior_overrides(const RunConfig& config);

int cmd_sphere_demo(const RunConfig& config, std::ostream& out);
int cmd_digits_demo(const RunConfig& config, std::ostream& out);
int cmd_fit(const RunConfig& config, std::ostream& out);
int cmd_vmf_diag(const RunConfig& config, std::ostream& out);

/// Parses argv, dispatches, and maps exceptions to exit codes.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nlpca::cli
