#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "nlpca/csv.hpp"
#include "nlpca/idx.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using nlpca::cli::cli_main;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "nlpca");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nlpca_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines_from(const std::string& text, std::size_t first) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  for (std::size_t i = 0; std::getline(in, line); ++i)
    if (i >= first) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).code == nlpca::cli::kUsage);
  CHECK(run({"bogus"}).code == nlpca::cli::kUsage);
  CHECK(run({"sphere-demo", "--sweeps", "abc"}).code == nlpca::cli::kUsage);
  CHECK(run({"sphere-demo", "--pool", "median"}).code == nlpca::cli::kUsage);
  CHECK(run({"vmf-diag", "--p", "2", "--d-frame", "3"}).code == nlpca::cli::kUsage);
  CHECK(run({"--help"}).code == nlpca::cli::kOk);
}

TEST_CASE("invalid flag combinations create no files") {
  const fs::path dir = scratch("invalid");
  const std::vector<std::vector<std::string>> bad = {
      {"sphere-demo", "--sweeps", "10", "--burn-in", "10"},
      {"sphere-demo", "--thin", "0"},
      {"sphere-demo", "--a2", "-1"},
      {"sphere-demo", "--a2", "banana"},
      {"sphere-demo", "--c", "0"},
      {"sphere-demo", "--dim", "4"},
      {"digits-demo", "--w", "0"},
  };
  for (auto args : bad) {
    args.push_back("--out");
    args.push_back(dir.string());
    CAPTURE(args[0]);
    CHECK(run(args).code == nlpca::cli::kUsage);
    CHECK_FALSE(fs::exists(dir));
  }
}

TEST_CASE("missing inputs are I/O errors") {
  const fs::path dir = scratch("missing");
  const auto r = run({"digits-demo", "--images", "/nonexistent/img", "--labels", "/nonexistent/lbl",
                      "--out", dir.string()});
  CHECK(r.code == nlpca::cli::kIo);
  CHECK_FALSE(fs::exists(dir));
  CHECK(run({"fit", "--input", "/nonexistent/data.csv", "--out", dir.string()}).code ==
        nlpca::cli::kIo);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("corrupt IDX files are I/O errors") {
  const fs::path dir = scratch("corrupt");
  fs::create_directories(dir);
  nlpca::write_bytes(dir / "img", {0, 0, 8, 1, 0, 0, 0, 0});
  nlpca::write_bytes(dir / "lbl", nlpca::encode_idx_labels({}));
  const auto r = run({"digits-demo", "--images", (dir / "img").string(), "--labels",
                      (dir / "lbl").string(), "--out", (dir / "out").string()});
  CHECK(r.code == nlpca::cli::kIo);
  CHECK(r.err.find("magic") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out"));
  fs::remove_all(dir);
}

TEST_CASE("fit validates dimensions before compute") {
  const fs::path dir = scratch("fit_dim");
  fs::create_directories(dir);
  nlpca::write_csv(dir / "data.csv", nlpca::Matrix::Random(4, 3), {"a", "b", "c"});
  const auto r = run({"fit", "--input", (dir / "data.csv").string(), "--dim", "4", "--out",
                      (dir / "out").string()});
  CHECK(r.code == nlpca::cli::kUsage);
  CHECK_FALSE(fs::exists(dir / "out"));

  std::ofstream(dir / "ragged.csv") << "a,b\n1,2\n3\n";
  const auto bad = run({"fit", "--input", (dir / "ragged.csv").string(), "--out",
                        (dir / "out").string()});
  CHECK(bad.code == nlpca::cli::kIo);
  CHECK(bad.err.find("line 3") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("tiny fit runs quickly and resume is bit exact") {
  const fs::path dir = scratch("resume");
  fs::create_directories(dir);
  oracle::Gen gen(1);
  nlpca::write_csv(dir / "data.csv", gen.gaussian(4, 3), {"a", "b", "c"});
  const std::string input = (dir / "data.csv").string();
  const std::vector<std::string> common = {"--input", input, "--dim", "1", "--sweeps", "50",
                                           "--burn-in", "10", "--thin", "1", "--seed", "77"};

  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = {"fit"};
    args.insert(args.end(), common.begin(), common.end());
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  };

  const auto start = std::chrono::steady_clock::now();
  REQUIRE(with({"--out", (dir / "full").string(), "--checkpoint-at", "20"}).code == 0);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(5));
  for (const char* f : {"checkpoint.json", "checkpoint_20.json", "latents.csv",
                        "reconstruction.csv", "trace.csv", "summary.json"})
    CHECK(fs::exists(dir / "full" / f));

  REQUIRE(with({"--out", (dir / "resumed").string(), "--resume",
                (dir / "full" / "checkpoint_20.json").string()})
              .code == 0);
  CHECK(slurp(dir / "resumed" / "checkpoint.json") == slurp(dir / "full" / "checkpoint.json"));
  // Trace rows for sweeps 20..49 coincide.
  CHECK(lines_from(slurp(dir / "resumed" / "trace.csv"), 1) ==
        lines_from(slurp(dir / "full" / "trace.csv"), 21));
  fs::remove_all(dir);
}

TEST_CASE("seed from the environment") {
  const fs::path a = scratch("env_a"), b = scratch("env_b");
  setenv("NLPCA_SEED", "5", 1);
  REQUIRE(run({"sphere-demo", "--n", "20", "--sweeps", "6", "--burn-in", "3", "--out", a.string()})
              .code == 0);
  unsetenv("NLPCA_SEED");
  REQUIRE(run({"sphere-demo", "--n", "20", "--sweeps", "6", "--burn-in", "3", "--seed", "5",
               "--out", b.string()})
              .code == 0);
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
  setenv("NLPCA_SEED", "five", 1);
  CHECK(run({"sphere-demo", "--out", a.string()}).code == nlpca::cli::kUsage);
  unsetenv("NLPCA_SEED");
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("sphere demo writes its artifacts inside the output directory") {
  const fs::path dir = scratch("sphere");
  const auto r = run({"sphere-demo", "--sweeps", "20", "--burn-in", "10", "--out", dir.string()});
  REQUIRE(r.code == 0);
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  CHECK(names == std::vector<std::string>{"hist_data_to_sphere.csv", "hist_reconstruction_errors.csv",
                                          "hist_reconstruction_to_sphere.csv",
                                          "reconstruction_model.csv", "reconstruction_pca.csv",
                                          "sphere_points.csv", "summary.json", "trace.csv"});
  CHECK(nlpca::read_csv(dir / "sphere_points.csv").values.rows() == 100);
  fs::remove_all(dir);
}

TEST_CASE("digits demo on a synthetic IDX pair") {
  const fs::path dir = scratch("digits");
  fs::create_directories(dir);
  oracle::Gen gen(2);
  nlpca::RawImageSet set;
  set.rows = set.cols = 28;
  set.pixels.resize(60, 784);
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) {
    labels.push_back(i % 4);
    for (int k = 0; k < 784; ++k)
      set.pixels(i, k) = static_cast<std::uint8_t>(gen.integer(0, 40) + 60 * (i % 4) * (k % 3 == 0));
  }
  nlpca::write_bytes(dir / "img", nlpca::encode_idx_images(set));
  nlpca::write_bytes(dir / "lbl", nlpca::encode_idx_labels(labels));
  const std::vector<std::string> args = {"digits-demo", "--images", (dir / "img").string(),
                                         "--labels", (dir / "lbl").string(), "--per-class", "10",
                                         "--sweeps", "6", "--burn-in", "3", "--thin", "1"};
  auto first = args, second = args;
  first.insert(first.end(), {"--out", (dir / "a").string()});
  second.insert(second.end(), {"--out", (dir / "b").string()});
  REQUIRE(run(first).code == 0);
  REQUIRE(run(second).code == 0);
  const auto latents = nlpca::read_csv(dir / "a" / "latents_model.csv");
  CHECK(latents.header == std::vector<std::string>{"latent_1", "latent_2", "label"});
  CHECK(latents.values.rows() == 30);
  CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json"));
  CHECK(slurp(dir / "a" / "summary.json").find("pca_nn_mismatch") != std::string::npos);

  // Each class has 15 images.
  auto greedy = args;
  greedy[6] = "16";
  greedy.insert(greedy.end(), {"--out", (dir / "c").string()});
  CHECK(run(greedy).code == nlpca::cli::kUsage);
  CHECK_FALSE(fs::exists(dir / "c"));
  fs::remove_all(dir);
}

TEST_CASE("vmf diagnostics") {
  SUBCASE("kappa 0") {
    const auto r = run({"vmf-diag", "--kappa", "0", "--samples", "2000"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("acceptance_rate=1\n") != std::string::npos);
    CHECK(r.out.find("fallback_engaged=no") != std::string::npos);
  }
  SUBCASE("kappa 2 passes the moment check") {
    const auto r = run({"vmf-diag", "--kappa", "2", "--samples", "10000"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("moment_check=pass") != std::string::npos);
    CHECK(r.out.find("cross_sampler_check=pass") != std::string::npos);
  }
  SUBCASE("kappa 200 engages the fallback") {
    const auto r = run({"vmf-diag", "--kappa", "200", "--samples", "200"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("fallback_engaged=yes") != std::string::npos);
  }
}
