#include "randwidth/run.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "randwidth/lawcheck.hpp"
#include "randwidth/orlicz.hpp"
#include "randwidth/parallel.hpp"
#include "randwidth/polytope.hpp"
#include "randwidth/version.hpp"

namespace randwidth {

namespace {

using nlohmann::json;

const char* kCommandNames[] = {"sample",    "width",     "orlicz",  "sweep",    "concentrate",
                               "lipschitz", "tailprobe", "inclusion", "bound"};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += fmt(v[i]);
  }
  return s;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += fmt(v[i]);
  }
  return s;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  if (v == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw UsageError("malformed number for key '" + key + "': " + v);
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw UsageError("malformed integer for key '" + key + "': " + v);
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const std::uint64_t x = std::stoull(v, &pos);
    if (pos != v.size() || v.find('-') != std::string::npos) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw UsageError("malformed unsigned integer for key '" + key + "': " + v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw UsageError("malformed boolean for key '" + key + "': " + v);
}

std::vector<double> default_t_grid() {
  return {0.05, 0.075, 0.1, 0.15, 0.2, 0.3, 0.5, 0.75, 1.0, 1.5,
          2.0,  3.0,   5.0, 7.5,  10.0, 15.0, 20.0, 30.0, 50.0};
}

std::string iso_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

struct Csv {
  std::string text;
  explicit Csv(const std::string& header) { text = header + "\n"; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text += ',';
      text += cells[i];
    }
    text += '\n';
  }
};

Perturbation make_y(const RunConfig& cfg, int N, const RngState& rng) {
  const PerturbationLaw law = cfg.perturbation_law(N);
  return sample_perturbation(law, N, rng);
}

}  // namespace

Command command_from_string(const std::string& s) {
  for (std::size_t i = 0; i < std::size(kCommandNames); ++i)
    if (s == kCommandNames[i]) return static_cast<Command>(i);
  std::string commands;
  for (const char* name : kCommandNames) {
    if (!commands.empty()) commands += ", ";
    commands += name;
  }
  throw UsageError("unknown command '" + s + "'; commands: " + commands);
}

std::string to_string(Command c) { return kCommandNames[static_cast<int>(c)]; }

PerturbationLaw RunConfig::perturbation_law(int N) const {
  PerturbationLaw l;
  l.kind = law;
  l.p = p;
  if (law == LawKind::fixed) {
    l.fixed_vector = y;
    if (!y.empty() && static_cast<int>(y.size()) != N)
      throw std::invalid_argument("fixed y has length " + std::to_string(y.size()) +
                                  " but N = " + std::to_string(N));
  }
  l.validate();
  return l;
}

RunConfig parse_config(const std::vector<std::string>& args, const std::string& config_text) {
  std::map<std::string, std::string> kv;
  bool command_seen = false;
  std::string command_str;

  // config file first, flags override
  std::istringstream file(config_text);
  std::string line;
  while (std::getline(file, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("malformed config line: " + line);
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    if (key == "command") {
      command_str = val;
      command_seen = true;
    } else {
      kv[key] = val;
    }
  }

  std::size_t i = 0;
  if (i < args.size() && !args[i].starts_with("--")) {
    command_str = args[i++];
    command_seen = true;
  }
  for (; i < args.size(); ++i) {
    std::string key = args[i];
    if (!key.starts_with("--")) throw UsageError("expected a --flag, got '" + key + "'");
    key = key.substr(2);
    std::string val;
    const auto eq = key.find('=');
    if (eq != std::string::npos) {
      val = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= args.size()) throw UsageError("missing value for key '" + key + "'");
      val = args[++i];
    }
    if (key == "command") {
      command_str = val;
      command_seen = true;
    } else {
      kv[key] = val;
    }
  }

  if (!command_seen) {
    std::string commands;
    for (const char* name : kCommandNames) {
      if (!commands.empty()) commands += ", ";
      commands += name;
    }
    throw UsageError("missing command; commands: " + commands);
  }

  RunConfig cfg;
  cfg.command = command_from_string(command_str);
  cfg.t_grid = default_t_grid();
  cfg.workers = default_workers();
  bool seed_seen = false;

  for (const auto& [key, val] : kv) {
    if (key == "model") {
      try {
        cfg.model = isotropic_family_from_string(val);
      } catch (const std::invalid_argument&) {
        throw UsageError("invalid value for key 'model': " + val);
      }
    } else if (key == "law") {
      try {
        cfg.law = law_kind_from_string(val);
      } catch (const std::invalid_argument&) {
        throw UsageError("invalid value for key 'law': " + val);
      }
    } else if (key == "p") {
      cfg.p = parse_double(key, val);
    } else if (key == "n") {
      const long long v = parse_int(key, val);
      if (v < 1) throw UsageError("key 'n' must be positive");
      cfg.n = static_cast<int>(v);
    } else if (key == "N") {
      cfg.N_grid.clear();
      for (const auto& part : split_commas(val)) {
        const long long v = parse_int(key, part);
        if (v < 1) throw UsageError("key 'N' entries must be positive");
        cfg.N_grid.push_back(static_cast<int>(v));
      }
      for (std::size_t j = 1; j < cfg.N_grid.size(); ++j)
        if (cfg.N_grid[j] <= cfg.N_grid[j - 1])
          throw UsageError("key 'N': grid must be strictly increasing");
    } else if (key == "R") {
      const long long v = parse_int(key, val);
      if (v < 1) throw UsageError("key 'R' must be positive");
      cfg.R = static_cast<int>(v);
    } else if (key == "M") {
      const long long v = parse_int(key, val);
      if (v < 1) throw UsageError("key 'M' must be positive");
      cfg.M = static_cast<int>(v);
    } else if (key == "y_draws") {
      const long long v = parse_int(key, val);
      if (v < 1) throw UsageError("key 'y_draws' must be positive");
      cfg.y_draws = static_cast<int>(v);
    } else if (key == "draws") {
      const long long v = parse_int(key, val);
      if (v < 1) throw UsageError("key 'draws' must be positive");
      cfg.draws = static_cast<int>(v);
    } else if (key == "samples") {
      const long long v = parse_int(key, val);
      if (v < 1) throw UsageError("key 'samples' must be positive");
      cfg.samples = static_cast<int>(v);
    } else if (key == "trials") {
      const long long v = parse_int(key, val);
      if (v < 1) throw UsageError("key 'trials' must be positive");
      cfg.trials = static_cast<int>(v);
    } else if (key == "pairs") {
      const long long v = parse_int(key, val);
      if (v < 1) throw UsageError("key 'pairs' must be positive");
      cfg.pairs = static_cast<int>(v);
    } else if (key == "alpha") {
      cfg.alpha.clear();
      for (const auto& part : split_commas(val)) cfg.alpha.push_back(parse_double(key, part));
    } else if (key == "t_grid") {
      cfg.t_grid.clear();
      for (const auto& part : split_commas(val)) cfg.t_grid.push_back(parse_double(key, part));
    } else if (key == "y") {
      cfg.y.clear();
      if (val != "ones" && !val.empty())
        for (const auto& part : split_commas(val)) cfg.y.push_back(parse_double(key, part));
    } else if (key == "c1") {
      cfg.c1 = parse_double(key, val);
    } else if (key == "c2") {
      cfg.c2 = parse_double(key, val);
    } else if (key == "strict") {
      cfg.strict = parse_bool(key, val);
    } else if (key == "seed") {
      cfg.seed = parse_u64(key, val);
      seed_seen = true;
    } else if (key == "workers") {
      const long long v = parse_int(key, val);
      if (v < 1) throw UsageError("key 'workers' must be positive");
      cfg.workers = static_cast<unsigned>(v);
    } else if (key == "out") {
      cfg.out = val;
    } else {
      throw UsageError("unknown key '" + key + "'");
    }
  }

  if (!seed_seen) throw UsageError("missing required key 'seed'");
  if (cfg.law == LawKind::p_stable && !(cfg.p > 1.0 && cfg.p < 2.0))
    throw UsageError("key 'p' must be in (1, 2) for law p_stable");
  if (cfg.law == LawKind::bp_ball && !(cfg.p >= 1.0))
    throw UsageError("key 'p' must be in [1, inf] for law bp_ball");
  return cfg;
}

std::string config_echo_text(const RunConfig& cfg) {
  std::ostringstream s;
  s << "command=" << to_string(cfg.command) << "\n";
  s << "model=" << to_string(cfg.model) << "\n";
  s << "law=" << to_string(cfg.law) << "\n";
  s << "p=" << fmt(cfg.p) << "\n";
  s << "n=" << cfg.n << "\n";
  s << "N=" << join_ints(cfg.N_grid) << "\n";
  s << "R=" << cfg.R << "\n";
  s << "M=" << cfg.M << "\n";
  s << "y_draws=" << cfg.y_draws << "\n";
  s << "draws=" << cfg.draws << "\n";
  s << "samples=" << cfg.samples << "\n";
  s << "trials=" << cfg.trials << "\n";
  s << "pairs=" << cfg.pairs << "\n";
  s << "alpha=" << join_doubles(cfg.alpha) << "\n";
  s << "t_grid=" << join_doubles(cfg.t_grid) << "\n";
  s << "y=" << (cfg.y.empty() ? "ones" : join_doubles(cfg.y)) << "\n";
  s << "c1=" << fmt(cfg.c1) << "\n";
  s << "c2=" << fmt(cfg.c2) << "\n";
  s << "strict=" << (cfg.strict ? "1" : "0") << "\n";
  s << "seed=" << cfg.seed << "\n";
  s << "workers=" << cfg.workers << "\n";
  s << "out=" << cfg.out << "\n";
  return s.str();
}

namespace {

json run_command(const RunConfig& cfg, Csv& csv) {
  const RngState root = make_rng(cfg.seed);
  const IsotropicModel model = cfg.isotropic_model();
  json summary;

  switch (cfg.command) {
    case Command::sample: {
      const int N = cfg.N_grid.front();
      if (cfg.law == LawKind::fixed) {
        const PointCloud cloud = sample_isotropic(model, N, root.substream(0));
        for (int i = 0; i < cloud.N; ++i)
          for (int j = 0; j < cloud.n; ++j)
            csv.row({"point", fmt(i), fmt(j), fmt(cloud.row(i)[j])});
      } else {
        for (int d = 0; d < cfg.y_draws; ++d) {
          const Perturbation y = make_y(cfg, N, root.substream(d).substream(0));
          for (int i = 0; i < N; ++i) csv.row({"y", fmt(d), fmt(i), fmt(y.values[i])});
        }
      }
      break;
    }

    case Command::width: {
      for (int N : cfg.N_grid) {
        for (int d = 0; d < cfg.y_draws; ++d) {
          const RngState ds = root.substream(d);
          const Perturbation y = make_y(cfg, N, ds.substream(0));
          const WidthEstimate est = f_estimate(model, N, y, cfg.R, cfg.M, ds);
          csv.row({to_string(cfg.model), fmt(cfg.n), fmt(N), to_string(cfg.law), fmt(cfg.p),
                   fmt(cfg.R), fmt(cfg.M), fmt(cfg.seed), fmt(d), fmt(est.value),
                   fmt(est.std_error)});
        }
      }
      break;
    }

    case Command::orlicz: {
      const DirectionSet dir = sample_directions(cfg.n, 1, root.substream(1));
      const std::span<const double> theta(dir.directions.data(),
                                          static_cast<std::size_t>(cfg.n));
      json ratios = json::array();
      for (std::size_t iN = 0; iN < cfg.N_grid.size(); ++iN) {
        const int N = cfg.N_grid[iN];
        const Perturbation y = make_y(cfg, N, root.substream(2).substream(iN));
        const EquivalenceRecord rec = equivalence_check(model, cfg.n, N, y, theta, cfg.R, cfg.M,
                                                        cfg.samples, root.substream(3).substream(iN));
        csv.row({to_string(cfg.model), fmt(cfg.n), fmt(N), to_string(cfg.law), fmt(cfg.p),
                 fmt(cfg.R), fmt(cfg.M), fmt(cfg.samples), fmt(cfg.seed), fmt(rec.lhs),
                 fmt(rec.rhs), fmt(rec.ratio)});
        ratios.push_back(rec.ratio);
      }
      summary["ratios"] = ratios;
      break;
    }

    case Command::sweep: {
      if (cfg.law == LawKind::fixed && !cfg.y.empty() && cfg.N_grid.size() > 1)
        throw std::invalid_argument("sweep: explicit fixed y needs a single N");
      const PerturbationLaw law = cfg.perturbation_law(cfg.N_grid.front());
      const ScalingReport rep = sweep_rate(law, model, cfg.n, cfg.N_grid, cfg.R, cfg.M,
                                           cfg.y_draws, root, cfg.workers);
      for (std::size_t iN = 0; iN < cfg.N_grid.size(); ++iN) {
        csv.row({to_string(cfg.law), to_string(cfg.model), fmt(cfg.n), fmt(cfg.N_grid[iN]),
                 fmt(cfg.p), fmt(cfg.R), fmt(cfg.M), fmt(cfg.y_draws), fmt(cfg.seed),
                 fmt(rep.estimate[iN]), fmt(rep.std_error[iN]), fmt(rep.rate[iN]),
                 fmt(rep.normalized[iN])});
      }
      summary["fitted_exponent"] = rep.fitted_exponent;
      summary["fitted_intercept"] = rep.fitted_intercept;
      summary["dispersion"] = rep.dispersion;
      summary["raw"] = rep.raw;
      summary["median_of_means"] = rep.mom;
      summary["mom_disagrees_20pct"] = rep.mom_flag;
      break;
    }

    case Command::concentrate: {
      const PerturbationLaw law = cfg.perturbation_law(cfg.N_grid.front());
      json fits = json::array();
      for (std::size_t iN = 0; iN < cfg.N_grid.size(); ++iN) {
        const int N = cfg.N_grid[iN];
        const TailCurve curve = concentration_probe(law, model, cfg.n, N, cfg.draws, cfg.t_grid,
                                                    cfg.R, cfg.M, root.substream(iN), cfg.workers);
        for (std::size_t j = 0; j < curve.t_grid.size(); ++j) {
          csv.row({to_string(cfg.law), to_string(cfg.model), fmt(cfg.n), fmt(N), fmt(cfg.p),
                   fmt(cfg.draws), fmt(cfg.seed), fmt(curve.t_grid[j]),
                   fmt(curve.empirical_tail[j])});
        }
        fits.push_back({{"N", N},
                        {"center", curve.center},
                        {"fitted_c", curve.fitted_c},
                        {"stable_threshold", curve.stable_threshold}});
      }
      summary["fits"] = fits;
      break;
    }

    case Command::lipschitz: {
      json c_hats = json::array();
      for (int N : cfg.N_grid) {
        const double c_hat =
            lipschitz_probe(model, cfg.n, N, cfg.pairs, cfg.R, cfg.M, root, cfg.workers);
        csv.row({to_string(cfg.model), fmt(cfg.n), fmt(N), fmt(cfg.pairs), fmt(cfg.R), fmt(cfg.M),
                 fmt(cfg.seed), fmt(c_hat)});
        c_hats.push_back(c_hat);
      }
      summary["c_hat"] = c_hats;
      break;
    }

    case Command::tailprobe: {
      for (int N : cfg.N_grid) {
        for (double a : cfg.alpha) {
          const auto [emp, ref] = tail_probe(model, cfg.n, N, a, cfg.samples, root);
          csv.row({to_string(cfg.model), fmt(cfg.n), fmt(N), fmt(a), fmt(cfg.samples),
                   fmt(cfg.seed), fmt(emp), fmt(ref), fmt(emp / ref)});
        }
      }
      break;
    }

    case Command::inclusion: {
      json mins = json::array();
      for (int N : cfg.N_grid) {
        const auto trial_vals = inclusion_probe_trials(model, cfg.n, N, cfg.trials, cfg.M,
                                                       cfg.samples, root, cfg.workers);
        for (int t = 0; t < cfg.trials; ++t)
          csv.row({to_string(cfg.model), fmt(cfg.n), fmt(N), fmt(cfg.M), fmt(cfg.samples),
                   fmt(cfg.seed), fmt(t), fmt(trial_vals[t])});
        mins.push_back(*std::min_element(trial_vals.begin(), trial_vals.end()));
      }
      summary["c_hat"] = mins;
      break;
    }

    case Command::bound: {
      json per_n = json::array();
      for (std::size_t iN = 0; iN < cfg.N_grid.size(); ++iN) {
        const int N = cfg.N_grid[iN];
        std::vector<double> y = cfg.y;
        if (y.empty()) y.assign(N, 1.0);
        if (static_cast<int>(y.size()) != N)
          throw std::invalid_argument("bound: y length != N");
        const LowerBoundReport lb = arbitrary_lower_bound(y, cfg.n, cfg.c1, 1.0, cfg.strict);
        const auto [f_hat, fitted_c2] =
            bound_vs_estimate(model, y, cfg.n, N, cfg.c1, cfg.R, cfg.M, root);
        csv.row({to_string(cfg.model), fmt(cfg.n), fmt(N), fmt(cfg.c1), fmt(cfg.c2),
                 fmt(lb.k_star), fmt(lb.bound_value), fmt(f_hat), fmt(fitted_c2)});
        per_n.push_back({{"N", N},
                         {"k_star", lb.k_star},
                         {"sup_term", lb.bound_value},
                         {"admissible_k", lb.I_y},
                         {"fitted_c2", fitted_c2}});
      }
      summary["bounds"] = per_n;
      break;
    }
  }
  return summary;
}

std::string csv_header(Command c) {
  switch (c) {
    case Command::sample:
      return "kind,draw,index,value";
    case Command::width:
      return "model,n,N,law,p,R,M,seed,draw,estimate,std_error";
    case Command::orlicz:
      return "model,n,N,law,p,R,M,samples,seed,lhs,rhs,ratio";
    case Command::sweep:
      return "law,model,n,N,p,R,M,y_draws,seed,estimate,std_error,rate,normalized";
    case Command::concentrate:
      return "law,model,n,N,p,draws,seed,t,empirical_tail";
    case Command::lipschitz:
      return "model,n,N,pairs,R,M,seed,c_hat";
    case Command::tailprobe:
      return "model,n,N,alpha,samples,seed,empirical_tail,reference,ratio";
    case Command::inclusion:
      return "model,n,N,M,samples,seed,trial,c_hat";
    case Command::bound:
      return "model,n,N,c1,c2,k_star,sup_term,f_hat,fitted_c2";
  }
  return "";
}

}  // namespace

ExecResult execute(const RunConfig& cfg) {
  const std::string started = iso_utc_now();
  Csv csv(csv_header(cfg.command));
  json summary;
  try {
    summary = run_command(cfg, csv);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return {3, {}};
  }

  const std::string csv_path = cfg.out + ".csv";
  const std::string manifest_path = cfg.out + ".manifest.json";
  {
    std::ofstream f(csv_path, std::ios::binary);
    f << csv.text;
    if (!f.good()) {
      std::cerr << "error: cannot write " << csv_path << "\n";
      return {3, {}};
    }
  }

  json manifest;
  manifest["version"] = RANDWIDTH_VERSION;
  manifest["command"] = to_string(cfg.command);
  manifest["config_echo"] = config_echo_text(cfg);
  manifest["started_utc"] = started;
  manifest["finished_utc"] = iso_utc_now();
  const int N_max = cfg.N_grid.back();
  manifest["regime"] = {
      {"n_le_N", cfg.n <= cfg.N_grid.front()},
      {"N_le_exp_sqrt_n", static_cast<double>(N_max) <= std::exp(std::sqrt(cfg.n))},
      {"N_gt_n_sq", static_cast<long long>(cfg.N_grid.front()) >
                        static_cast<long long>(cfg.n) * cfg.n}};
  manifest["outputs"] = json::array({{{"path", csv_path}, {"fnv1a64", fnv1a64_hex(csv.text)}}});
  manifest["summary"] = summary;

  {
    std::ofstream f(manifest_path, std::ios::binary);
    f << manifest.dump(2) << "\n";
    if (!f.good()) {
      std::cerr << "error: cannot write " << manifest_path << "\n";
      return {3, {csv_path}};
    }
  }
  return {0, {csv_path, manifest_path}};
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_text;
  if (const char* path = std::getenv("RANDWIDTH_CONFIG")) {
    std::ifstream f(path);
    if (!f) {
      std::cerr << "usage error: cannot read RANDWIDTH_CONFIG file " << path << "\n";
      return 2;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    config_text = ss.str();
  }
  RunConfig cfg;
  try {
    cfg = parse_config(args, config_text);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  try {
    return execute(cfg).exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace randwidth
