// Acceptance gate: one line per criterion. Criteria 1-9 run in-process;
// criterion 10 shells out to the CLI twice and compares artifact bytes.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bifcurrent/acceptance.hpp"
#include "bifcurrent/parallel.hpp"

namespace fs = std::filesystem;
using namespace bifcurrent;

namespace {

std::map<std::string, std::string> snapshot_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream is(entry.path(), std::ios::binary);
    std::ostringstream buf;
    buf << is.rdbuf();
    files[fs::relative(entry.path(), dir).string()] = buf.str();
  }
  return files;
}

bool run_cli_verify(const std::string& cli, const fs::path& outdir, const fs::path& log) {
  const std::string cmd = "\"" + cli + "\" verify --seed 42 --out \"" + outdir.string() +
                          "\" > \"" + log.string() + "\" 2>&1";
  return std::system(cmd.c_str()) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli_path;
#ifdef BIFCURRENT_CLI_PATH
  cli_path = BIFCURRENT_CLI_PATH;
#endif
  std::string workdir = "acceptance_out";
  for (int i = 1; i + 1 < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli") cli_path = argv[i + 1];
    if (arg == "--out") workdir = argv[i + 1];
  }

  fs::create_directories(workdir);

  AcceptanceOptions options;
  options.seed = 42;
  options.outdir = (fs::path(workdir) / "suite").string();
  const std::vector<CriterionResult> results = run_acceptance_suite(options);

  bool ok = true;
  for (const CriterionResult& r : results) {
    std::printf("%s (%.1f s)\n", format_result_line(r).c_str(), r.seconds);
    ok = ok && r.pass;
  }

  // criterion 10: byte-identical artifacts across two CLI verify runs
  {
    CriterionResult c10{10, "two runs of `verify --seed 42` produce byte-identical artifacts",
                        false, "", 0.0};
    const fs::path verify_dir = fs::path(workdir) / "verify_run";
    fs::remove_all(verify_dir);
    if (cli_path.empty() || !fs::exists(cli_path)) {
      c10.detail = "CLI binary not found: " + cli_path;
    } else if (!run_cli_verify(cli_path, verify_dir, fs::path(workdir) / "verify1.log")) {
      c10.detail = "first verify run exited nonzero";
    } else {
      const auto first = snapshot_tree(verify_dir);
      if (!run_cli_verify(cli_path, verify_dir, fs::path(workdir) / "verify2.log")) {
        c10.detail = "second verify run exited nonzero";
      } else {
        const auto second = snapshot_tree(verify_dir);
        if (first.size() != second.size()) {
          c10.detail = "artifact sets differ in size";
        } else {
          c10.pass = true;
          c10.detail = std::to_string(first.size()) + " artifacts compared";
          for (const auto& [name, bytes] : first) {
            const auto it = second.find(name);
            if (it == second.end() || it->second != bytes) {
              c10.pass = false;
              c10.detail = "mismatch in " + name;
              break;
            }
          }
        }
      }
    }
    std::printf("%s\n", format_result_line(c10).c_str());
    ok = ok && c10.pass;
  }

  std::printf("acceptance: %s\n", ok ? "ALL CRITERIA PASS" : "FAILURES PRESENT");
  return ok ? 0 : 1;
}
