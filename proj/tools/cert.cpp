#include "cert/corpus.hpp"
#include "cert/cost_dist.hpp"
#include "cert/expected_cost.hpp"
#include "cert/harness.hpp"
#include "cert/parse.hpp"
#include "cert/report_json.hpp"
#include "cert/rewrite.hpp"
#include "cert/sampler.hpp"
#include "cert/typecheck.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

using namespace cert;

namespace {

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kUsage = 2;

struct Common {
  std::vector<std::string> args;
  bool json = false;
};

std::uint64_t default_seed() {
  if (const char* s = std::getenv("CERT_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw CertError(std::string("CERT_SEED is not a natural number: ") + s);
    }
  }
  return 1;
}

std::vector<RunValue> parse_args(const std::vector<std::string>& text) {
  std::vector<RunValue> out;
  for (const auto& a : text) {
    auto v = parse_value(a);
    check_value({}, v);
    out.push_back(eval_value(v));
  }
  return out;
}

struct Loaded {
  std::string path;
  CompPtr program;
  std::vector<RunValue> args;
  CompPtr applied;
};

Loaded load(const std::string& path, const std::vector<std::string>& arg_text) {
  Loaded l{path, parse(read_file(path)), parse_args(arg_text), nullptr};
  check_program(l.program);
  l.applied = l.program;
  for (const auto& a : l.args) l.applied = mk::app(l.applied, a);
  check_program(l.applied);
  return l;
}

std::string show(const Rational& q) {
  auto s = to_string(q);
  if (s.size() <= 24) return s;
  std::ostringstream os;
  os << "~" << to_double(q);
  return os.str();
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

void add_common(CLI::App* sub, Common& c, bool with_args = true) {
  if (with_args) sub->add_option("--arg", c.args, "argument value literal, applied in order (repeatable)");
  sub->add_flag("--json", c.json, "machine-readable output");
}

int cmd_typecheck(const std::string& file, const Common& c) {
  auto l = load(file, c.args);
  auto ty = check_program(l.applied);
  if (c.json) {
    emit({{"file", file}, {"type", to_string(ty)}});
  } else {
    std::cout << to_string(ty) << "\n";
  }
  return kOk;
}

int cmd_run(const std::string& file, const Common& c, std::uint64_t fuel, std::uint64_t seed) {
  auto l = load(file, c.args);
  Rng rng(seed);
  auto r = run_once(l.applied, fuel, rng);
  if (c.json) {
    auto j = to_json(r);
    j["seed"] = seed;
    j["fuel"] = fuel;
    emit(j);
  } else if (r.status == RunStatus::Terminated) {
    std::cout << "terminated cost " << r.cost << " result " << pretty_print(r.terminal) << "\n";
  } else {
    std::cout << "fuel exhausted after " << r.steps << " steps, cost so far " << r.cost << "\n";
  }
  return kOk;
}

int cmd_estimate(const std::string& file, const Common& c, std::uint64_t samples, std::uint64_t fuel,
                 std::uint64_t seed, unsigned streams) {
  auto l = load(file, c.args);
  CostEstimate e;
  if (streams <= 1) {
    e = estimate(l.applied, samples, fuel, seed);
  } else {
    std::vector<std::uint64_t> seeds;
    for (unsigned i = 0; i < streams; ++i) seeds.push_back(seed + i);
    e = estimate_parallel(l.applied, samples, fuel, seeds);
  }
  if (c.json) {
    emit(to_json(e));
  } else {
    std::cout << "mean " << e.mean << "\nstddev " << e.stddev << "\nstd_error " << e.std_error() << "\nterminated "
              << e.terminated << "\nexhausted " << e.exhausted << " (" << 100 * e.exhaustion_rate() << "%)\nseed "
              << e.seed << "\nfuel " << e.fuel << "\n";
    if (e.value_mean) std::cout << "value_mean " << *e.value_mean << "\n";
  }
  return kOk;
}

int cmd_dist(const std::string& file, const Common& c, std::uint64_t depth) {
  auto l = load(file, c.args);
  auto d = eval_cost_dist(l.program, depth, l.args);
  if (c.json) {
    auto j = to_json(d);
    j["depth"] = depth;
    emit(j);
    return kOk;
  }
  std::cout << "cost\tvalue\tp\n";
  for (const auto& [o, w] : d.sorted()) std::cout << o.cost << "\t" << pretty_print(o.value) << "\t" << to_string(w) << "\n";
  std::cout << "mass " << to_string(mass(d)) << "\nexpected_cost " << to_string(expected_of_marginal(d)) << "\n";
  return kOk;
}

int cmd_analyze(const std::string& file, const Common& c, double tol, std::uint64_t max_depth,
                std::size_t precision) {
  auto l = load(file, c.args);
  auto r = analyze(l.program, tol, max_depth, l.args, kDefaultMemoEntries, precision);
  if (c.json) {
    emit(to_json(r));
  } else {
    for (const auto& s : r.history) {
      std::cout << "depth " << s.depth << "\tec " << to_double(s.ec) << "\tmass " << to_double(s.mass) << "\n";
    }
    std::cout << "ec " << to_double(r.ec) << "\nmass " << to_double(r.mass) << "\ndepth " << r.depth
              << "\nconverged " << (r.converged ? "true" : "false") << "\n";
  }
  return r.converged ? kOk : kViolated;
}

Reward load_reward(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw CertError(path + ": " + e.what());
  }
  if (!j.is_array()) throw CertError(path + ": reward must be a list of [value, rational] pairs");
  auto table = std::make_shared<std::vector<std::pair<RunValue, Rational>>>();
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string()) {
      throw CertError(path + ": reward entry " + pair.dump() + " is not a [value, rational] pair");
    }
    auto v = parse_value(pair[0].get<std::string>());
    check_value({}, v);
    table->emplace_back(eval_value(v), rational_from_json(pair[1]));
  }
  return [table](const RunValue& v) {
    for (const auto& [k, r] : *table) {
      if (RunValueEq{}(k, v)) return r;
    }
    return Rational(0);
  };
}

int cmd_pre(const std::string& file, const Common& c, const std::string& reward_file, std::uint64_t depth) {
  auto l = load(file, c.args);
  auto reward = load_reward(reward_file);
  auto pre = eval_pre(l.program, reward, depth, l.args);
  auto f = check_factorization(l.program, reward, depth, l.args);
  if (c.json) {
    emit({{"pre", to_json(pre)}, {"depth", depth}, {"factorization_holds", f.equal}, {"factored", to_json(f.factored)}});
  } else {
    std::cout << "pre " << to_string(pre) << " (" << to_double(pre) << ")\nfactorization "
              << (f.equal ? "holds" : "FAILS, discrepancy " + to_string(f.discrepancy)) << "\n";
  }
  return f.equal ? kOk : kViolated;
}

std::vector<Rule> parse_rules(const std::string& text) {
  if (text.empty() || text == "default") return default_rules();
  if (text == "all") return all_rules();
  std::vector<Rule> out;
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    auto r = parse_rule(name);
    if (!r) throw CertError("unknown rule " + name);
    out.push_back(*r);
  }
  return out;
}

int cmd_rewrite(const std::string& file, const Common& c, const std::string& rules, std::uint64_t fuel) {
  auto l = load(file, {});
  auto r = normalize(l.program, parse_rules(rules), fuel);
  if (c.json) {
    emit(to_json(r));
    return kOk;
  }
  auto text = [](const Subterm& s) { return std::visit([](const auto& p) { return pretty_print(p); }, s); };
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    const auto& s = r.steps[i];
    std::cout << i + 1 << ". " << rule_name(s.rule) << " at " << path_to_string(s.path) << ": " << text(s.before)
              << "  ~>  " << text(s.after) << "\n";
  }
  if (r.fuel_exhausted) std::cout << "fuel exhausted\n";
  std::cout << pretty_print(r.term) << "\n";
  return kOk;
}

int cmd_check_eq(const std::string& a, const std::string& b, const Common& c, std::uint64_t depth, bool fix_unfold,
                 double tol, std::uint64_t max_depth) {
  auto la = load(a, c.args);
  auto lb = load(b, c.args);
  PreservationOptions opts;
  opts.fix_unfold = fix_unfold;
  opts.tol = tol;
  opts.max_depth = max_depth;
  opts.args = la.args;
  auto r = check_preservation(la.program, lb.program, depth, opts);
  if (c.json) {
    emit(to_json(r));
  } else {
    std::cout << "cost semantics " << (r.cost_equal ? "equal" : "differ") << "\nexpected cost semantics "
              << (r.ec_equal ? "equal" : "differ") << "\nec " << show(r.ec_left) << " vs "
              << show(r.ec_right) << "\nmass " << show(r.mass_left) << " vs " << show(r.mass_right)
              << "\n";
    if (!r.detail.empty()) std::cout << r.detail << "\n";
  }
  return r.equal ? kOk : kViolated;
}

void print_crosscheck(const CrossCheckReport& r) {
  std::cout << r.name << (r.ok() ? "  ok" : "  FAILED") << "\n";
  if (r.discrete) {
    std::cout << "  depth " << r.depth << ": E(cost) " << show(r.cost_dist_expectation) << " <= ec "
              << show(r.ec_component) << "  " << (r.inequality_holds ? "holds" : "VIOLATED") << "\n";
    std::cout << "  mass cost " << show(r.mass_cost) << ", mass ec " << show(r.mass_ec) << "\n";
    if (r.recursion_free_equality_holds) {
      std::cout << "  recursion-free equality " << (*r.recursion_free_equality_holds ? "holds" : "VIOLATED") << "\n";
    }
    std::cout << "  analyze limit " << to_double(r.analyze_limit) << (r.analyze_converged ? "" : " (not converged)")
              << "\n";
  }
  std::cout << "  sample mean " << r.sample.mean << ", 99% CI [" << r.ci_low << ", " << r.ci_high << "], exhausted "
            << r.sample.exhausted << "/" << r.sample.terminated + r.sample.exhausted << "\n";
  if (r.discrete) {
    std::cout << "  CI " << (r.ci_consistent ? "consistent" : "INCONSISTENT") << ", adequacy "
              << (r.adequacy_consistent ? "consistent" : "INCONSISTENT") << "\n";
    for (const auto& v : r.violations) {
      std::cout << "    event (" << v.event.cost << ", " << pretty_print(v.event.value) << "): exact "
                << to_double(v.exact) << ", observed " << v.observed << "\n";
    }
  }
}

int cmd_crosscheck(const std::string& target, const Common& c, const CrossCheckOptions& opts, bool oracles,
                   std::uint64_t random_walk_depth) {
  std::vector<CorpusEntry> entries;
  const bool is_dir = std::filesystem::is_directory(target);
  if (is_dir) {
    entries = load_corpus(target);
  } else {
    auto l = load(target, c.args);
    CorpusEntry e;
    e.name = std::filesystem::path(target).stem().string();
    e.path = target;
    e.type = check_program(l.program);
    e.arg_text = c.args;
    e.args = l.args;
    e.discrete = is_discrete(l.applied);
    e.program = l.program;
    entries.push_back(std::move(e));
  }

  bool ok = true;
  Json reports = Json::array();
  for (const auto& e : entries) {
    auto r = crosscheck(e, opts);
    ok = ok && r.ok();
    if (c.json) {
      reports.push_back(to_json(r));
    } else {
      print_crosscheck(r);
    }
  }

  Json out{{"entries", reports}};
  if (oracles) {
    if (!is_dir) throw CertError("--oracles needs a corpus directory");
    OracleSuiteOptions o;
    o.tol = opts.tol;
    o.random_walk_max_depth = random_walk_depth;
    auto rep = oracle_suite(entries, o);
    ok = ok && rep.ok();
    if (c.json) {
      out["oracles"] = to_json(rep);
    } else {
      std::cout << "oracles\n";
      for (const auto& k : rep.cases) {
        std::cout << "  " << k.family << "(" << k.argument << "): " << to_double(k.got) << " vs " << k.expected
                  << (k.converged ? "" : " (not converged)") << "  " << (k.ok ? "ok" : "FAILED") << "  "
                  << k.seconds << " s\n";
      }
      std::cout << "  T(n) <= 2 n ln n on 2..64: "
                << (rep.quicksort_bound_holds ? "holds"
                                              : "fails at " + std::to_string(rep.quicksort_bound_first_failure))
                << "\n";
    }
  }
  if (c.json) {
    out["ok"] = ok;
    emit(out);
  }
  return ok ? kOk : kViolated;
}

int cmd_laws(const Common& c, std::uint64_t seed, std::uint64_t instances) {
  auto r = monad_law_suite(seed, instances);
  if (c.json) {
    emit(to_json(r));
  } else {
    for (const auto& l : r.laws) {
      std::cout << l.name << ": " << l.failures << "/" << l.instances
                << (l.expect_equal ? " unequal" : " unequal (some expected)") << "\n";
    }
    std::cout << "counterexample: ec " << to_string(r.counterexample_lhs.ec) << " vs "
              << to_string(r.counterexample_rhs.ec) << "\n"
              << (r.ok() ? "ok" : "FAILED") << "\n";
  }
  return r.ok() ? kOk : kViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost analysis of probabilistic call-by-push-value programs"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common c;
  std::string file, file_b, reward, rules, target;
  std::uint64_t fuel = 10000, samples = 100000, depth = 12, max_depth = 1u << 20, instances = 200, rw_depth = 0;
  std::optional<std::uint64_t> seed_flag;
  std::size_t precision = kDefaultPrecisionBits;
  unsigned streams = 1;
  double tol = 1e-6;
  bool fix_unfold = false, oracles = false;
  CrossCheckOptions xopts;

  auto* typecheck = app.add_subcommand("typecheck", "print the type of a program");
  typecheck->add_option("file", file)->required()->check(CLI::ExistingFile);
  add_common(typecheck, c);

  auto* run = app.add_subcommand("run", "sample one execution");
  run->add_option("file", file)->required()->check(CLI::ExistingFile);
  run->add_option("--fuel", fuel);
  run->add_option("--seed", seed_flag, "default: $CERT_SEED or 1");
  add_common(run, c);

  auto* est = app.add_subcommand("estimate", "Monte Carlo estimate of the expected cost");
  est->add_option("file", file)->required()->check(CLI::ExistingFile);
  est->add_option("--samples", samples);
  est->add_option("--fuel", fuel);
  est->add_option("--seed", seed_flag, "default: $CERT_SEED or 1");
  est->add_option("--streams", streams, "independent streams with seeds seed, seed+1, ...")->check(CLI::Range(1u, 1024u));
  add_common(est, c);

  auto* dist = app.add_subcommand("dist", "exact cost distribution at a depth");
  dist->add_option("file", file)->required()->check(CLI::ExistingFile);
  dist->add_option("--depth", depth);
  add_common(dist, c);

  auto* an = app.add_subcommand("analyze", "expected cost limit by depth doubling");
  an->add_option("file", file)->required()->check(CLI::ExistingFile);
  an->add_option("--tol", tol)->check(CLI::PositiveNumber);
  an->add_option("--max-depth", max_depth);
  an->add_option("--precision-bits", precision, "0 keeps approximants exact");
  add_common(an, c);

  auto* pre = app.add_subcommand("pre", "pre-expectation of a reward at a depth");
  pre->add_option("file", file)->required()->check(CLI::ExistingFile);
  pre->add_option("--reward", reward, "JSON list of [value, rational] pairs")->required()->check(CLI::ExistingFile);
  pre->add_option("--depth", depth);
  add_common(pre, c);

  auto* rw = app.add_subcommand("rewrite", "normalize with the equational rules");
  rw->add_option("file", file)->required()->check(CLI::ExistingFile);
  rw->add_option("--rules", rules, "comma-separated rule names, 'default' or 'all'");
  rw->add_option("--fuel", fuel);
  add_common(rw, c, false);

  auto* eq = app.add_subcommand("check-eq", "compare two programs under both semantics");
  eq->add_option("a", file)->required()->check(CLI::ExistingFile);
  eq->add_option("b", file_b)->required()->check(CLI::ExistingFile);
  eq->add_option("--depth", depth);
  eq->add_flag("--fix-unfold", fix_unfold, "compare analyze limits and the depth sandwich");
  eq->add_option("--tol", tol)->check(CLI::PositiveNumber);
  eq->add_option("--max-depth", max_depth);
  add_common(eq, c);

  auto* xc = app.add_subcommand("crosscheck", "cross-check the semantics on a corpus directory or a file");
  xc->add_option("target", target)->required()->check(CLI::ExistingPath);
  xc->add_option("--depth", xopts.depth);
  xc->add_option("--samples", xopts.samples);
  xc->add_option("--fuel", xopts.fuel);
  xc->add_option("--seed", seed_flag, "default: $CERT_SEED or 1");
  xc->add_option("--tol", xopts.tol)->check(CLI::PositiveNumber);
  xc->add_option("--max-depth", xopts.max_depth, "analyze bound per entry");
  xc->add_flag("--oracles", oracles, "also run the closed-form oracle suite");
  xc->add_option("--random-walk-depth", rw_depth, "analyze bound for the random walk oracle; 0 skips it");
  add_common(xc, c);

  auto* laws = app.add_subcommand("laws", "monad law and counterexample suite");
  laws->add_option("--seed", seed_flag, "default: $CERT_SEED or 1");
  laws->add_option("--instances", instances);
  add_common(laws, c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const std::uint64_t seed = seed_flag ? *seed_flag : default_seed();
    if (*typecheck) return cmd_typecheck(file, c);
    if (*run) return cmd_run(file, c, fuel, seed);
    if (*est) return cmd_estimate(file, c, samples, fuel, seed, streams);
    if (*dist) return cmd_dist(file, c, depth);
    if (*an) return cmd_analyze(file, c, tol, max_depth, precision);
    if (*pre) return cmd_pre(file, c, reward, depth);
    if (*rw) return cmd_rewrite(file, c, rules, fuel);
    if (*eq) return cmd_check_eq(file, file_b, c, depth, fix_unfold, tol, max_depth);
    if (*xc) {
      xopts.seed = seed;
      return cmd_crosscheck(target, c, xopts, oracles, rw_depth);
    }
    if (*laws) return cmd_laws(c, seed, instances);
  } catch (const TypeError& e) {
    std::cerr << e.render(file.empty() ? target : file) << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << (file.empty() ? target : file) << ":" << e.what() << "\n  expected " << e.expected() << "\n";
    return kUsage;
  } catch (const CertError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
