// End-to-end checks of the installed CLI: subcommand output, exit codes
// and the files a run leaves behind.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_command(const std::string& cmd) {
  CommandResult result;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 512> buf{};
  while (std::fgets(buf.data(), int(buf.size()), pipe)) result.output += buf.data();
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

const std::string kCli = SHIFTEST_CLI_PATH;

fs::path write_temp(const std::string& name, const std::string& content) {
  const auto dir = fs::temp_directory_path() / "shiftest_test_cli";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_SUITE("cli_process") {

TEST_CASE("validate and variance succeed on the canonical config") {
  const std::string cfg = SHIFTEST_SOURCE_DIR "/configs/canonical.json";
  const auto validated = run_command(kCli + " validate " + cfg);
  CHECK(validated.exit_code == 0);
  CHECK(validated.output.find("ok") != std::string::npos);
  CHECK(validated.output.find("config_digest") != std::string::npos);

  const auto variance = run_command(kCli + " variance " + cfg);
  CHECK(variance.exit_code == 0);
  double f1 = 0.0, phi = 0.0, xi2 = 0.0;
  CHECK(std::sscanf(variance.output.c_str(), "f1 %lf phi_theta %lf xi2 %lf", &f1, &phi,
                    &xi2) == 3);
  CHECK(f1 == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(phi == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(xi2 == doctest::Approx(0.0473199378).epsilon(1e-6));
}

TEST_CASE("config problems exit with code 2") {
  const auto bad_theta = write_temp(
      "bad_theta.json", R"({"theta_true": 0.4, "n_steps": 10, "n_reps": 2, "seed": 1})");
  const auto r1 = run_command(kCli + " validate " + bad_theta.string());
  CHECK(r1.exit_code == 2);
  CHECK(r1.output.find("admissible") != std::string::npos);

  const auto r2 = run_command(kCli + " validate /nonexistent/config.json");
  CHECK(r2.exit_code == 2);

  // Strictness promotes the alpha warning to an error.
  const auto alpha = write_temp("alpha06.json", R"({
    "theta_true": 0.1, "n_steps": 10, "n_reps": 2, "seed": 1, "kde": {"alpha": 0.6}
  })");
  CHECK(run_command(kCli + " validate " + alpha.string()).exit_code == 0);
  CHECK(run_command(kCli + " validate --strict " + alpha.string()).exit_code == 2);

  // Override that empties the replication budget.
  const std::string cfg = SHIFTEST_SOURCE_DIR "/configs/smoke.json";
  const auto r3 = run_command(kCli + " run " + cfg + " --reps-override 1 --out-dir /tmp/x");
  CHECK(r3.exit_code == 2);
}

TEST_CASE("run writes the documented artifacts") {
  const auto cfg = write_temp("run_small.json", R"({
    "theta_true": 0.1, "n_steps": 200, "n_reps": 4, "seed": 99,
    "record_points": [100, 200]
  })");
  const auto out_dir = fs::temp_directory_path() / "shiftest_test_cli" / "run_out";
  fs::remove_all(out_dir);
  const auto r = run_command(kCli + " run " + cfg.string() + " --out-dir " + out_dir.string() +
                             " --jobs 2");
  CHECK(r.exit_code == 0);
  for (const char* name :
       {"summary.json", "mse.csv", "standardized_errors.csv", "manifest.json",
        "trajectory_0.csv"})
    CHECK(fs::exists(out_dir / name));
  CHECK(r.output.find("mse n=100") != std::string::npos);
  CHECK(r.output.find("outputs ") != std::string::npos);
}

TEST_CASE("plot-script emits gnuplot referencing the csv files") {
  const auto r = run_command(kCli + " plot-script runs/demo");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("runs/demo/mse.csv") != std::string::npos);
  CHECK(r.output.find("logscale") != std::string::npos);
}

}  // TEST_SUITE
