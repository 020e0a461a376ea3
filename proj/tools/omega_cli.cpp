#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "omega/oes.hpp"
#include "omega/oracle.hpp"

using json = nlohmann::json;
using namespace omega;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitMismatch = 3;

std::vector<Int> parse_gens(const std::string& text) {
  std::vector<Int> gens;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
    if (pos != tok.size()) throw std::invalid_argument("bad integer: " + tok);
    gens.push_back(v);
  }
  if (gens.empty()) throw std::invalid_argument("empty generator list");
  return gens;
}

struct CommonOpts {
  std::string gens_text;
  std::string format = "text";
  std::string bound_mode = "tight";
  bool apery_cuts = false;
  bool trace = false;
  int jobs = 1;
  std::string generator;  // select a single n_j by value
};

oes::OmegaOptions to_options(const CommonOpts& c) {
  oes::OmegaOptions opt;
  opt.bound_mode = c.bound_mode == "loose" ? oes::BoundMode::Loose
                                           : oes::BoundMode::Tight;
  opt.apery_cuts = c.apery_cuts;
  opt.jobs = c.jobs;
  return opt;
}

json options_json(const oes::OmegaOptions& opt) {
  return json{
      {"bound_mode", opt.bound_mode == oes::BoundMode::Loose ? "loose" : "tight"},
      {"apery_cuts", opt.apery_cuts},
      {"jobs", opt.jobs},
  };
}

struct GeneratorRun {
  oes::OmegaResult result;
  long long millis = 0;
  bool timed_out = false;
};

GeneratorRun run_one(const NumericalSemigroup& S, int j,
                     const oes::OmegaOptions& opt) {
  GeneratorRun run;
  auto t0 = std::chrono::steady_clock::now();
  try {
    run.result = oes::omega_j(S, j, opt);
  } catch (const ilp::SolveTimeout&) {
    run.timed_out = true;
  }
  run.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
  return run;
}

std::vector<GeneratorRun> run_all(const NumericalSemigroup& S,
                                  const oes::OmegaOptions& opt,
                                  const std::vector<int>& indices) {
  std::vector<GeneratorRun> runs(indices.size());
  if (opt.jobs > 1) {
    std::vector<std::future<GeneratorRun>> futs;
    for (int j : indices) {
      futs.push_back(std::async(std::launch::async,
                                [&S, j, &opt] { return run_one(S, j, opt); }));
    }
    for (std::size_t i = 0; i < indices.size(); ++i) runs[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < indices.size(); ++i) {
      runs[i] = run_one(S, indices[i], opt);
    }
  }
  return runs;
}

json result_json(const GeneratorRun& run, Int n) {
  json r{{"n", n}};
  if (run.timed_out) {
    r["status"] = "timeout";
  } else {
    r["omega"] = run.result.omega;
    r["witness"] = run.result.witness.coords;
    r["iterations"] = run.result.iterations;
    r["ek_solves"] = run.result.ek_solves;
    r["nw_solves"] = run.result.nw_solves;
  }
  r["millis"] = run.millis;
  return r;
}

void print_trace(std::ostream& os, const oes::OmegaResult& r) {
  for (const auto& t : r.trace) {
    os << "    l=" << t.index << "  x=" << t.point.to_string()
       << "  ek=" << t.ek_minimal.to_string() << "  nw="
       << (t.nw_point ? t.nw_point->to_string() : std::string("INFEASIBLE"))
       << "  u=" << t.lower_u << "  v=" << t.upper_v << "\n";
  }
}

std::vector<int> select_indices(const NumericalSemigroup& S,
                                const std::string& generator) {
  std::vector<int> indices;
  if (generator.empty()) {
    for (int j = 0; j < S.embedding_dimension(); ++j) indices.push_back(j);
    return indices;
  }
  Int n = std::stoll(generator);
  for (int j = 0; j < S.embedding_dimension(); ++j) {
    if (S.generator(static_cast<std::size_t>(j)) == n) {
      indices.push_back(j);
      return indices;
    }
  }
  throw SemigroupError(ErrorCode::NotAMember,
                       generator + " is not a minimal generator");
}

int cmd_omega(const CommonOpts& c) {
  NumericalSemigroup S(parse_gens(c.gens_text));
  oes::OmegaOptions opt = to_options(c);
  std::vector<int> indices = select_indices(S, c.generator);
  std::vector<GeneratorRun> runs = run_all(S, opt, indices);
  Int w = 0;
  for (const GeneratorRun& r : runs) {
    if (!r.timed_out) w = std::max(w, r.result.omega);
  }
  if (c.format == "json") {
    json out{{"generators", S.generators()}, {"omega", w},
             {"per_generator", json::array()}, {"options", options_json(opt)}};
    for (std::size_t i = 0; i < runs.size(); ++i) {
      out["per_generator"].push_back(result_json(
          runs[i], S.generator(static_cast<std::size_t>(indices[i]))));
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "S = " << S.to_string() << "\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
      Int n = S.generator(static_cast<std::size_t>(indices[i]));
      if (runs[i].timed_out) {
        std::cout << "  omega(S, " << n << ") timed out\n";
        continue;
      }
      const auto& r = runs[i].result;
      std::cout << "  omega(S, " << n << ") = " << r.omega
                << "  witness=" << r.witness.to_string()
                << "  iterations=" << r.iterations << "  ek=" << r.ek_solves
                << "  nw=" << r.nw_solves << "  millis=" << runs[i].millis
                << "\n";
      if (c.trace) print_trace(std::cout, r);
    }
    // the max is only omega(S) when every generator was computed
    if (c.generator.empty()) std::cout << "omega(S) = " << w << "\n";
  }
  return kExitOk;
}

int cmd_invariants(const CommonOpts& c, Int apery_of) {
  NumericalSemigroup S(parse_gens(c.gens_text));
  if (c.format == "json") {
    json out{{"generators", S.generators()},
             {"embedding_dimension", S.embedding_dimension()},
             {"multiplicity", S.multiplicity()},
             {"frobenius", S.frobenius()},
             {"genus", S.genus()}};
    if (apery_of > 0) {
      const AperyTable& t = S.apery(apery_of);
      out["apery"] = json{{"modulus", t.modulus}, {"entries", t.entries}};
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "S = " << S.to_string() << "\n"
              << "  embedding dimension = " << S.embedding_dimension() << "\n"
              << "  multiplicity        = " << S.multiplicity() << "\n"
              << "  Frobenius number    = " << S.frobenius() << "\n"
              << "  genus               = " << S.genus() << "\n";
    if (apery_of > 0) {
      const AperyTable& t = S.apery(apery_of);
      std::cout << "  Apery(S, " << t.modulus << ") =";
      for (Int e : t.entries) std::cout << ' ' << e;
      std::cout << "\n";
    }
  }
  return kExitOk;
}

int cmd_verify(const CommonOpts& c) {
  NumericalSemigroup S(parse_gens(c.gens_text));
  oes::OmegaOptions opt = to_options(c);
  bool all_match = true;
  json rows = json::array();
  for (int j = 0; j < S.embedding_dimension(); ++j) {
    oes::OmegaResult r = oes::omega_j(S, j, opt);
    auto minimals = oracle::minimals_of_Z(S, j);
    Int oracle_omega = 0;
    for (const auto& m : minimals) oracle_omega = std::max(oracle_omega, m.length());
    bool match = r.omega == oracle_omega;
    all_match = all_match && match;
    Int n = S.generator(static_cast<std::size_t>(j));
    if (c.format == "json") {
      rows.push_back(json{{"n", n},
                          {"omega", r.omega},
                          {"oracle_omega", oracle_omega},
                          {"min_count", minimals.size()},
                          {"match", match}});
    } else {
      std::cout << "  n=" << n << "  omega=" << r.omega
                << "  oracle=" << oracle_omega << "  #min=" << minimals.size()
                << "  " << (match ? "MATCH" : "MISMATCH") << "\n";
    }
  }
  if (c.format == "json") {
    std::cout << json{{"generators", S.generators()},
                      {"per_generator", rows},
                      {"match", all_match}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << (all_match ? "MATCH" : "MISMATCH") << "\n";
  }
  return all_match ? kExitOk : kExitMismatch;
}

struct BenchInstance {
  std::vector<Int> gens;
  int line = 0;
};

std::vector<BenchInstance> parse_battery(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::vector<BenchInstance> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
    if (blank) continue;
    try {
      out.push_back({parse_gens(line), lineno});
    } catch (const std::exception& e) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " +
                                  e.what());
    }
  }
  if (out.empty()) throw std::invalid_argument(path + ": no instances");
  return out;
}

int cmd_bench(const std::string& path, const CommonOpts& c, bool with_oracle,
              double timeout_sec) {
  std::vector<BenchInstance> instances = parse_battery(path);
  oes::OmegaOptions opt = to_options(c);
  if (timeout_sec > 0) {
    opt.time_limit = std::chrono::milliseconds(
        static_cast<long long>(timeout_sec * 1000.0));
  }
  json jout = json::array();
  if (c.format != "json") {
    std::cout << "semigroup,n_j,omega,witness,iterations,millis,status"
              << (with_oracle ? ",min_count" : "") << "\n";
  }
  for (const BenchInstance& inst : instances) {
    NumericalSemigroup S(inst.gens);
    std::vector<int> indices = select_indices(S, "");
    std::vector<GeneratorRun> runs = run_all(S, opt, indices);
    Int w = 0;
    long long total_ms = 0;
    json per = json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
      Int n = S.generator(i);
      total_ms += runs[i].millis;
      std::size_t min_count = 0;
      if (with_oracle && !runs[i].timed_out) {
        min_count = oracle::minimals_of_Z(S, static_cast<int>(i)).size();
      }
      if (c.format == "json") {
        json r = result_json(runs[i], n);
        if (with_oracle && !runs[i].timed_out) r["min_count"] = min_count;
        per.push_back(std::move(r));
      }
      if (runs[i].timed_out) {
        if (c.format != "json") {
          std::cout << S.to_string() << "," << n << ",,,," << runs[i].millis
                    << ",timeout" << (with_oracle ? "," : "") << "\n";
        }
        continue;
      }
      w = std::max(w, runs[i].result.omega);
      if (c.format != "json") {
        std::cout << S.to_string() << "," << n << "," << runs[i].result.omega
                  << "," << runs[i].result.witness.to_string() << ","
                  << runs[i].result.iterations << "," << runs[i].millis
                  << ",ok";
        if (with_oracle) std::cout << "," << min_count;
        std::cout << "\n";
      }
    }
    if (c.format == "json") {
      jout.push_back(json{{"generators", S.generators()},
                          {"omega", w},
                          {"per_generator", per},
                          {"millis", total_ms},
                          {"options", options_json(opt)}});
    } else {
      std::cout << S.to_string() << ",summary," << w << ",,," << total_ms
                << ",ok" << (with_oracle ? "," : "") << "\n";
    }
  }
  if (c.format == "json") std::cout << jout.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"omega invariant of a numerical semigroup via optimization "
               "over the efficient set"};
  app.require_subcommand(1);

  CommonOpts c;
  Int apery_of = 0;
  bool with_oracle = false;
  double timeout_sec = 0;
  std::string bench_path;

  auto add_common = [&](CLI::App* sub, bool with_solver_flags) {
    sub->add_option("--gens", c.gens_text, "comma-separated generators")
        ->required();
    sub->add_option("--format", c.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    if (with_solver_flags) {
      sub->add_option("--bound-mode", c.bound_mode, "tight or loose")
          ->check(CLI::IsMember({"tight", "loose"}));
      sub->add_flag("--apery-cuts", c.apery_cuts, "add the Apery inequalities");
      sub->add_option("--jobs", c.jobs, "per-generator parallelism");
    }
  };

  CLI::App* om = app.add_subcommand("omega", "compute omega(S) and omega(S, n_j)");
  add_common(om, true);
  om->add_option("--generator", c.generator, "restrict to one generator n_j");
  om->add_flag("--trace", c.trace, "print the iteration trace");

  CLI::App* inv = app.add_subcommand("invariants", "classical invariants");
  add_common(inv, false);
  inv->add_option("--apery", apery_of, "also print Apery(S, n)");

  CLI::App* ver = app.add_subcommand("verify", "algorithm vs brute-force oracle");
  add_common(ver, true);

  CLI::App* ben = app.add_subcommand("bench", "run a battery file");
  ben->add_option("input", bench_path, "instance file")->required();
  ben->add_option("--format", c.format, "csv (text) or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  ben->add_option("--bound-mode", c.bound_mode, "tight or loose")
      ->check(CLI::IsMember({"tight", "loose"}));
  ben->add_flag("--apery-cuts", c.apery_cuts, "add the Apery inequalities");
  ben->add_option("--jobs", c.jobs, "per-generator parallelism");
  ben->add_flag("--oracle", with_oracle, "add brute-force #min where tractable");
  ben->add_option("--timeout", timeout_sec, "per-generator time limit (s)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (om->parsed()) return cmd_omega(c);
    if (inv->parsed()) return cmd_invariants(c, apery_of);
    if (ver->parsed()) return cmd_verify(c);
    if (ben->parsed()) return cmd_bench(bench_path, c, with_oracle, timeout_sec);
  } catch (const SemigroupError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
