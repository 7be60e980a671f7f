#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "randwidth/run.hpp"

using namespace randwidth;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path temp_prefix(const std::string& tag) {
  return fs::temp_directory_path() / ("randwidth_test_" + tag);
}

int run_cli(const std::string& args, const std::string& env = "") {
  const char* bin = std::getenv("RANDWIDTH_CLI");
  REQUIRE(bin != nullptr);
  const std::string cmd = env + " " + std::string(bin) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("parse_config accepts a full sweep invocation") {
  const RunConfig cfg = parse_config({"sweep", "--law", "gaussian", "--model", "gaussian", "--n",
                                      "8", "--N", "64,256,1024", "--seed", "1"});
  CHECK(cfg.command == Command::sweep);
  CHECK(cfg.law == LawKind::gaussian);
  CHECK(cfg.model == IsotropicFamily::gaussian);
  CHECK(cfg.n == 8);
  CHECK(cfg.N_grid == std::vector<int>{64, 256, 1024});
  CHECK(cfg.seed == 1);
  CHECK(cfg.R == 64);    // defaults
  CHECK(cfg.M == 1024);
}

TEST_CASE("parse_config rejections name the offending key") {
  CHECK_THROWS_WITH_AS(parse_config({"sweep", "--law", "p_stable", "--p", "2.5", "--seed", "1"}),
                       doctest::Contains("'p'"), UsageError);
  CHECK_THROWS_WITH_AS(parse_config({}), doctest::Contains("sweep"), UsageError);
  CHECK_THROWS_WITH_AS(parse_config({"sweep", "--bogus", "3", "--seed", "1"}),
                       doctest::Contains("'bogus'"), UsageError);
  CHECK_THROWS_WITH_AS(parse_config({"sweep", "--n", "eight", "--seed", "1"}),
                       doctest::Contains("'n'"), UsageError);
  CHECK_THROWS_WITH_AS(parse_config({"sweep"}), doctest::Contains("'seed'"), UsageError);
  CHECK_THROWS_WITH_AS(parse_config({"sweep", "--N", "64,32", "--seed", "1"}),
                       doctest::Contains("'N'"), UsageError);
  CHECK_THROWS_WITH_AS(parse_config({"nonsense", "--seed", "1"}),
                       doctest::Contains("unknown command"), UsageError);
  CHECK_THROWS_WITH_AS(parse_config({"sweep", "--model", "triangle", "--seed", "1"}),
                       doctest::Contains("'model'"), UsageError);
}

TEST_CASE("config file values are overridden by flags") {
  const std::string file_text = "command=width\nn=4\nseed=9\nM=16\n";
  const RunConfig cfg = parse_config({"--n", "6"}, file_text);
  CHECK(cfg.command == Command::width);
  CHECK(cfg.n == 6);
  CHECK(cfg.seed == 9);
  CHECK(cfg.M == 16);

  CHECK_THROWS_WITH_AS(parse_config({}, "command=width\nseed=1\nwhat=0\n"),
                       doctest::Contains("'what'"), UsageError);
}

TEST_CASE("config echo round-trips to an equal RunConfig") {
  const RunConfig cfg =
      parse_config({"concentrate", "--law", "bp_ball", "--p", "inf", "--n", "5", "--N", "32,64",
                    "--seed", "42", "--draws", "120", "--t_grid", "0.1,0.25,0.9", "--workers",
                    "3", "--out", "/tmp/xyz", "--c1", "0.3"});
  const RunConfig back = parse_config({}, config_echo_text(cfg));
  CHECK(back == cfg);

  // explicit fixed y round-trips through the 17-digit encoding
  const RunConfig with_y = parse_config(
      {"bound", "--n", "2", "--N", "3", "--y", "0.1,0.30000000000000004,-2", "--seed", "7"});
  const RunConfig back2 = parse_config({}, config_echo_text(with_y));
  CHECK(back2 == with_y);
}

TEST_CASE("execute writes byte-identical CSV across runs and worker counts") {
  const fs::path p1 = temp_prefix("sweep1");
  const fs::path p2 = temp_prefix("sweep2");
  RunConfig cfg = parse_config({"sweep", "--law", "sphere", "--model", "cube", "--n", "4", "--N",
                                "8,16,32", "--R", "4", "--M", "32", "--y_draws", "6", "--seed",
                                "5", "--workers", "1", "--out", p1.string()});
  const ExecResult r1 = execute(cfg);
  CHECK(r1.exit_code == 0);
  REQUIRE(r1.files.size() == 2);

  cfg.workers = 8;
  cfg.out = p2.string();
  const ExecResult r2 = execute(cfg);
  CHECK(r2.exit_code == 0);

  const std::string csv1 = slurp(p1.string() + ".csv");
  const std::string csv2 = slurp(p2.string() + ".csv");
  CHECK(csv1 == csv2);
  CHECK(csv1.starts_with("law,model,n,N,p,R,M,y_draws,seed,estimate,std_error,rate,normalized\n"));

  // manifest: config echo parses back to the executed config
  const auto manifest = nlohmann::json::parse(slurp(p1.string() + ".manifest.json"));
  RunConfig echoed = parse_config({}, manifest["config_echo"].get<std::string>());
  echoed.workers = cfg.workers;  // the only field the two runs differ in
  echoed.out = cfg.out;
  CHECK(echoed == cfg);
  CHECK(manifest["outputs"][0]["path"] == p1.string() + ".csv");
  CHECK(manifest["version"] == "0.1.0");
  CHECK(manifest["regime"]["n_le_N"] == true);
}

TEST_CASE("golden headers at the smallest desk scale, seed 1") {
  struct Case {
    std::string args;
    std::string header;
  };
  const std::vector<Case> cases = {
      {"sample --model gaussian --n 2 --N 4", "kind,draw,index,value"},
      {"width --n 2 --N 8 --R 2 --M 4", "model,n,N,law,p,R,M,seed,draw,estimate,std_error"},
      {"orlicz --n 2 --N 4 --R 2 --M 2 --samples 1000",
       "model,n,N,law,p,R,M,samples,seed,lhs,rhs,ratio"},
      {"sweep --law gaussian --n 2 --N 4,8 --R 2 --M 4 --y_draws 2",
       "law,model,n,N,p,R,M,y_draws,seed,estimate,std_error,rate,normalized"},
      {"concentrate --law gaussian --n 2 --N 8 --draws 100 --R 2 --M 4",
       "law,model,n,N,p,draws,seed,t,empirical_tail"},
      {"lipschitz --n 2 --N 8 --pairs 10 --R 2 --M 4", "model,n,N,pairs,R,M,seed,c_hat"},
      {"tailprobe --n 2 --N 8 --alpha 0.25 --samples 2000",
       "model,n,N,alpha,samples,seed,empirical_tail,reference,ratio"},
      {"inclusion --n 2 --N 8 --trials 2 --M 2 --samples 200",
       "model,n,N,M,samples,seed,trial,c_hat"},
      {"bound --n 2 --N 8 --R 2 --M 4", "model,n,N,c1,c2,k_star,sup_term,f_hat,fitted_c2"},
  };
  int idx = 0;
  for (const auto& c : cases) {
    const fs::path prefix = temp_prefix("golden" + std::to_string(idx++));
    std::istringstream words(c.args + " --seed 1 --out " + prefix.string());
    std::vector<std::string> args;
    std::string w;
    while (words >> w) args.push_back(w);
    const ExecResult r = execute(parse_config(args));
    REQUIRE(r.exit_code == 0);
    const std::string csv = slurp(prefix.string() + ".csv");
    CHECK(csv.substr(0, csv.find('\n')) == c.header);
    CHECK(std::count(csv.begin(), csv.end(), '\n') > 1);  // header plus data
  }
}

TEST_CASE("sample command emits one row per scalar") {
  const fs::path prefix = temp_prefix("sample_rows");
  const ExecResult r = execute(parse_config(
      {"sample", "--model", "laplace", "--n", "3", "--N", "5", "--seed", "2", "--out",
       prefix.string()}));
  REQUIRE(r.exit_code == 0);
  const std::string csv = slurp(prefix.string() + ".csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 5 * 3);
}

TEST_CASE("regime and IO failures exit 3") {
  // inclusion needs N > n^2
  const RunConfig bad = parse_config({"inclusion", "--n", "4", "--N", "16", "--trials", "2",
                                      "--M", "2", "--samples", "200", "--seed", "1", "--out",
                                      temp_prefix("regime").string()});
  CHECK(execute(bad).exit_code == 3);

  const RunConfig unwritable =
      parse_config({"sample", "--n", "2", "--N", "2", "--seed", "1", "--out",
                    "/nonexistent_dir_xyz/run"});
  CHECK(execute(unwritable).exit_code == 3);
}

TEST_CASE("cli binary: exit codes and reproducible bytes end to end") {
  const fs::path a = temp_prefix("cli_a");
  const fs::path b = temp_prefix("cli_b");

  CHECK(run_cli("") == 2);
  CHECK(run_cli("sweep") == 2);  // missing seed
  CHECK(run_cli("inclusion --n 4 --N 16 --trials 2 --M 2 --samples 200 --seed 1 --out " +
                a.string()) == 3);

  const std::string common = "width --model laplace --n 3 --N 16 --R 4 --M 16 --seed 11 ";
  CHECK(run_cli(common + "--workers 1 --out " + a.string()) == 0);
  CHECK(run_cli(common + "--workers 8 --out " + b.string()) == 0);
  CHECK(slurp(a.string() + ".csv") == slurp(b.string() + ".csv"));

  // config via RANDWIDTH_CONFIG, overridden by a flag
  const fs::path cfg_file = temp_prefix("cli_cfg.txt");
  {
    std::ofstream f(cfg_file);
    f << "command=width\nmodel=laplace\nn=3\nN=16\nR=4\nM=16\nseed=11\nworkers=1\nout="
      << a.string() << "\n";
  }
  const fs::path c = temp_prefix("cli_c");
  CHECK(run_cli("--out " + c.string(), "RANDWIDTH_CONFIG=" + cfg_file.string()) == 0);
  CHECK(slurp(c.string() + ".csv") == slurp(a.string() + ".csv"));
}
