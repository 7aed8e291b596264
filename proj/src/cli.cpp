#include "isorad/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <sstream>

#include "isorad/criterion.hpp"
#include "isorad/curves.hpp"
#include "isorad/galois_sim.hpp"
#include "isorad/kernels.hpp"
#include "isorad/symplectic.hpp"
#include "isorad/tame_inertia.hpp"

namespace isorad::cli {

namespace {

/// Bad user input detected after parsing (exit 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Manifest {
  std::string command;
  u64 seed = 0;
  std::vector<std::pair<std::string, std::string>> config;

  void print(std::ostream& out) const {
    out << "# isogeny-radical " << ISORAD_VERSION << '\n';
    out << "# command " << command << '\n';
    out << "# seed " << seed << '\n';
    out << "# config";
    for (const auto& [k, v] : config) out << ' ' << k << '=' << v;
    out << '\n';
  }
};

std::string join(const std::vector<u64>& xs, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(xs[i]);
  }
  return s;
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string fraction(u64 num, u64 den) {
  if (den == 0) return "0";
  const u64 g = std::gcd(num, den);
  return std::to_string(num / g) + "/" + std::to_string(den / g);
}

std::string format_matrix(const Matrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.dim(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (j) s += ',';
      s += std::to_string(m(i, j));
    }
    s += ']';
  }
  return s + "]";
}

std::vector<PrimeModulus> parse_lambda(const std::string& text) {
  std::vector<PrimeModulus> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), [](unsigned char c) { return std::isspace(c); }), tok.end());
    if (tok.empty()) continue;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (*end != '\0' || !is_prime(v) || v < 3) throw UsageError("--lambda entries must be odd primes: " + tok);
    out.emplace_back(v);
  }
  if (out.empty()) throw UsageError("--lambda is empty");
  return out;
}

PrimeModulus odd_prime(u64 v, const char* flag) {
  if (!is_prime(v) || v < 3) throw UsageError(std::string(flag) + " must be an odd prime");
  return PrimeModulus(v);
}

const CurveOverQ& find_label(const std::vector<CurveOverQ>& curves, const std::string& label) {
  for (const auto& c : curves)
    if (c.label() == label) return c;
  throw UsageError("unknown label " + label);
}

// ---------------------------------------------------------------- count

struct CountArgs {
  std::string curve_file;
  u64 pmax = 1000;
  std::string cache;
};

std::string default_cache_path() {
  const char* dir = std::getenv(kCacheDirEnv);
  std::string base = dir && *dir ? dir : ".";
  return base + "/counts.cache";
}

int cmd_count(const CountArgs& a, std::ostream& out) {
  const auto curves = read_curve_file(a.curve_file);
  const std::string cache_path = a.cache.empty() ? default_cache_path() : a.cache;
  if (a.pmax > kDefaultCountCap) throw CapExceeded("--pmax exceeds the counting cap");
  CountCache cache = CountCache::load(cache_path);
  for (const auto& c : curves) cache.check_curve(c);

  Manifest m{"count", 0, {{"file", a.curve_file}, {"pmax", std::to_string(a.pmax)}, {"cache", cache_path}}};
  m.print(out);

  const std::vector<PrimeModulus> primes = a.pmax >= 5 ? primes_in_range(5, a.pmax) : std::vector<PrimeModulus>{};
  std::vector<CountRecord> fresh;
  u64 total_new = 0;
  for (const auto& c : curves) {
    std::vector<u64> todo;
    u64 bad = 0, have = 0;
    for (PrimeModulus p : primes) {
      if (!reduce(c, p)) {
        ++bad;
        continue;
      }
      if (cache.has(c.label(), p.value()))
        ++have;
      else
        todo.push_back(p.value());
    }
    const auto n = kernels::count_over_primes_parallel(c, todo);
    for (std::size_t k = 0; k < todo.size(); ++k) {
      const u64 p = todo[k];
      fresh.push_back({c.label(), p, n[k], static_cast<i64>(p + 1) - static_cast<i64>(n[k])});
    }
    total_new += todo.size();
    out << "CURVE " << c.label() << " records=" << have + todo.size() << " new=" << todo.size() << " bad=" << bad;
    if (c.known_cm_shape()) out << " warning=known-cm-shape";
    out << '\n';
  }
  cache.append(cache_path, curves, fresh);
  out << "TOTAL curves=" << curves.size() << " new=" << total_new << " cached=" << cache.size() << '\n';
  return kOk;
}

// ------------------------------------------------------------ criterion

struct CriterionArgs {
  std::string curve_file;
  std::vector<std::string> labels;
  u64 pmax = 10'000;
  std::string lambda = "3,5,7,11,13";
  bool all_witnesses = false;
};

int cmd_criterion(const CriterionArgs& a, std::ostream& out) {
  const auto curves = read_curve_file(a.curve_file);
  if (a.labels.size() != 2) throw UsageError("--labels needs exactly two labels");
  const CurveOverQ& e1 = find_label(curves, a.labels[0]);
  const CurveOverQ& e2 = find_label(curves, a.labels[1]);
  CriterionConfig cfg;
  cfg.p_max = a.pmax;
  cfg.lambda_set = parse_lambda(a.lambda);
  if (a.pmax < 5) throw UsageError("--pmax must be at least 5");
  if (a.pmax > kDefaultCountCap) throw CapExceeded("--pmax exceeds the counting cap");

  const Verdict v = run_criterion(e1, e2, cfg);
  Manifest m{"criterion", 0,
             {{"file", a.curve_file},
              {"labels", e1.label() + "," + e2.label()},
              {"pmax", std::to_string(cfg.p_max)},
              {"lambda", join(v.lambda)}}};
  m.print(out);
  for (const auto* c : {&e1, &e2}) {
    out << "CURVE " << (c == &e1 ? 1 : 2) << ' ' << c->label() << " : " << c->a2() << ' ' << c->a4() << ' ' << c->a6()
        << " disc=" << to_string(c->discriminant());
    if (c->known_cm_shape()) out << " warning=known-cm-shape";
    out << '\n';
  }
  out << "SCAN places=" << v.places_scanned << " skipped=" << v.skipped.size() << '\n';
  if (!v.skipped.empty()) out << "SKIPPED " << join(v.skipped) << '\n';
  for (const auto& row : v.summary) {
    out << "TALLY ell=" << row.ell << " both=" << row.both << " neither=" << row.neither
        << " only1=" << row.only_first << " only2=" << row.only_second << '\n';
  }
  if (v.witness) {
    const std::size_t shown = a.all_witnesses ? v.all_witnesses.size() : 1;
    for (std::size_t k = 0; k < shown; ++k) {
      const auto& w = v.all_witnesses[k];
      out << "WITNESS p=" << w.p << " ell=" << w.ell << " side=" << w.side() << '\n';
    }
    out << "VERDICT witness\n";
    return kWitness;
  }
  out << "# consistent up to the scanned bounds; this is not a proof of isogeny\n";
  out << "VERDICT consistent p_max=" << cfg.p_max << " lambda=" << join(v.lambda) << '\n';
  return kOk;
}

// ------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string model = "graph";
  unsigned g = 1;
  u64 ell = 5;
  u64 trials = 0;
  bool exhaustive = false;
  u64 seed = 0;
  std::string epsilon = "uniform";
  u64 kernel_bound = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const GroupSpec spec(a.g, odd_prime(a.ell, "--ell"));
  EpsilonLaw law = EpsilonLaw::Uniform;
  if (a.epsilon == "plus")
    law = EpsilonLaw::AlwaysPlus;
  else if (a.epsilon == "minus")
    law = EpsilonLaw::AlwaysMinus;
  else if (a.epsilon != "uniform")
    throw UsageError("--epsilon must be plus, minus or uniform");

  Rng rng(a.seed);
  const FieldElement u_mult(1 + rng.below(spec.modulus() - 1), spec.ell);
  std::optional<JointImageModel> model;
  if (a.model == "graph")
    model = JointImageModel::graph(random_gsp_element(spec, u_mult, rng));
  else if (a.model == "twist")
    model = JointImageModel::twist(random_gsp_element(spec, u_mult, rng), law);
  else if (a.model == "product")
    model = JointImageModel::product(spec);
  else
    throw UsageError("--model must be graph, twist or product");
  if (a.kernel_bound) model->kernel_bound = a.kernel_bound;

  CoincidenceOptions opts;
  opts.seed = a.seed;
  if (a.exhaustive)
    opts.exhaustive = true;
  else if (a.trials)
    opts.exhaustive = false, opts.trials = a.trials;
  else
    opts.exhaustive = exhaustive_by_default(spec);

  const CoincidenceReport rep = check_det_coincidence(*model, opts);

  Manifest m{"simulate", a.seed,
             {{"model", a.model},
              {"g", std::to_string(a.g)},
              {"ell", std::to_string(a.ell)},
              {"mode", opts.exhaustive ? "exhaustive" : "trials"},
              {"trials", opts.exhaustive ? "-" : std::to_string(opts.trials)},
              {"epsilon", a.model == "twist" ? a.epsilon : "-"}}};
  m.print(out);
  out << "MODEL " << to_string(model->kind()) << " g=" << spec.g << " ell=" << spec.modulus() << '\n';
  if (model->kind() != ModelKind::FullFiberedProduct) {
    out << "CONJUGATOR " << format_matrix(model->conjugator().matrix())
        << " lambda=" << model->conjugator().multiplier().residue() << '\n';
  }
  out << "COINCIDENCE pairs=" << rep.pairs << " violations=" << rep.violations << " rate=" << fixed(rep.rate())
      << " violating_fraction=" << fraction(rep.violations, rep.pairs) << '\n';
  for (const auto& c : rep.classes)
    out << "CLASS lambda=" << c.multiplier << " pairs=" << c.pairs << " violations=" << c.violations << '\n';
  if (rep.counterexample) {
    const auto& [x, y] = *rep.counterexample;
    const Matrix id = Matrix::identity(x.dim(), x.modulus());
    out << "COUNTEREXAMPLE x=" << format_matrix(x) << " y=" << format_matrix(y) << " det(x-I)=" << (x - id).det()
        << " det(y-I)=" << (y - id).det() << '\n';
  } else {
    out << "COUNTEREXAMPLE none\n";
  }
  if (model->kind() == ModelKind::FullFiberedProduct) {
    const Matrix id = Matrix::identity(spec.dim(), spec.modulus());
    const Matrix minus = id.scaled(spec.modulus() - 1);
    const bool member = model->contains(minus, id);
    const bool violates = has_eigenvalue_one(minus) != has_eigenvalue_one(id);
    out << "PROBE x=-I y=I member=" << (member ? "yes" : "no") << " det(x-I)=" << (minus - id).det()
        << " det(y-I)=0 violates=" << (violates ? "yes" : "no") << '\n';
  }

  bool enumerable = true;
  try {
    enumerable = sp_order(spec) <= kDefaultEnumerationCap;
  } catch (const OverflowError&) {
    enumerable = false;
  }
  if (enumerable) {
    const KernelAudit k = projected_kernel_audit(*model);
    out << "KERNEL order=" << k.order << " contains_minus_identity=" << (k.contains_minus_identity ? "yes" : "no")
        << " is_sp_subgroup=" << (k.is_sp_subgroup ? "yes" : "no") << '\n';
    const GoursatReport gr = goursat_degrees(*model);
    out << "GOURSAT ker1=" << gr.ker_pi1_order << " ker2=" << gr.ker_pi2_order
        << " dichotomy=" << to_string(gr.dichotomy);
    if (gr.within_kernel_bound) out << " within_bound=" << (*gr.within_kernel_bound ? "yes" : "no");
    out << '\n';
  } else {
    out << "KERNEL skipped enumeration-cap\n";
    out << "GOURSAT skipped enumeration-cap\n";
  }
  if (model->kind() == ModelKind::QuadraticTwistGraph) {
    const CongruenceCheck c = step3_congruence_experiment(*model);
    out << "STEP3 det(I-y)=" << c.det_value << " expected=" << c.expected
        << " verified=" << (c.verified ? "yes" : "no") << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------- group-audit

int cmd_group_audit(unsigned g, u64 ell, std::ostream& out) {
  const GroupSpec spec(g, odd_prime(ell, "--ell"));
  const u64 order = sp_order(spec);
  const SubgroupEnumeration sp = enumerate_sp(spec);
  const auto classes = conjugacy_classes(sp);
  const auto normals = normal_subgroup_audit(sp);

  Manifest m{"group-audit", 0, {{"g", std::to_string(g)}, {"ell", std::to_string(ell)}}};
  m.print(out);
  out << "GROUP Sp(" << spec.dim() << ",F_" << ell << ")\n";
  out << "ORDER " << order << " enumerated=" << sp.size() << '\n';
  const unsigned v = valuation(order, ell);
  out << "SYLOW exponent=" << v << " expected=" << g * g << ' ' << (v == g * g ? "ok" : "MISMATCH") << '\n';
  out << "CLASSES " << classes.size() << '\n';
  out << "NORMAL_SUBGROUPS " << join(normals) << '\n';
  const bool center_only = normals == std::vector<u64>{1, 2, order};
  out << "CENTER_ONLY " << (center_only ? "yes" : "no") << '\n';
  if (is_excluded_simplicity_case(spec))
    out << "CASE excluded (g=1, l=3: normal subgroups beyond the center are expected)\n";
  else
    out << "CASE included\n";
  return kOk;
}

// -------------------------------------------------------- raynaud-bound

int cmd_raynaud(unsigned g, u64 ell_max, std::ostream& out) {
  if (g == 0) throw UsageError("--g must be at least 1");
  if (ell_max < 3) throw UsageError("--ellmax must be at least 3");
  const u64 threshold = 4 * static_cast<u64>(g) + 1;
  std::ostringstream rows;
  bool any = false, all = true;
  for (PrimeModulus l : primes_in_range(3, ell_max)) {
    const InvariantSet x = enumerate_invariants(g, l);
    const BoundCheck b = bound_check(g, l);
    const bool pairwise = pairwise_differences_below_half(x);
    const ThresholdStatus st = threshold_status(g, l);
    rows << "ROW ell=" << l.value() << " size=" << x.values.size() << " max=" << b.max_value.str()
         << " bound=" << fraction(2 * g, l.value() - 1) << " max_is_1/(l-1)=" << (b.max_is_geometric_sum ? "yes" : "no")
         << " below_bound=" << (b.below_bound ? "yes" : "no") << " pairwise_below_half=" << (pairwise ? "yes" : "no")
         << " status=";
    switch (st) {
      case ThresholdStatus::BelowThreshold: rows << "threshold-not-met"; break;
      case ThresholdStatus::Pass: rows << "pass"; break;
      case ThresholdStatus::Fail: rows << "FAIL"; break;
    }
    rows << '\n';
    if (st != ThresholdStatus::BelowThreshold) {
      any = true;
      all = all && st == ThresholdStatus::Pass;
    }
  }
  Manifest m{"raynaud-bound", 0, {{"g", std::to_string(g)}, {"ellmax", std::to_string(ell_max)}}};
  m.print(out);
  out << "RAYNAUD g=" << g << " ellmax=" << ell_max << " threshold=" << threshold << '\n';
  out << rows.str();
  if (!any)
    out << "SUMMARY threshold-not-met\n";
  else
    out << "SUMMARY " << (all ? "pass" : "FAIL") << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"isogeny-radical: divisibility-of-point-counts isogeny criterion and its group-theoretic checks"};
  app.name("isogeny-radical");
  app.require_subcommand(1);
  unsigned jobs = 0;
  app.add_option("--jobs", jobs, "worker threads (0 = runtime default)");

  CountArgs count;
  auto* c_count = app.add_subcommand("count", "count points over good primes and extend the cache");
  c_count->add_option("curve_file", count.curve_file)->required();
  c_count->add_option("--pmax", count.pmax, "largest prime");
  c_count->add_option("--cache", count.cache, "cache file (default $" + std::string(kCacheDirEnv) + "/counts.cache)");

  CriterionArgs crit;
  auto* c_crit = app.add_subcommand("criterion", "search for a divisibility witness between two curves");
  c_crit->add_option("curve_file", crit.curve_file)->required();
  c_crit->add_option("--labels", crit.labels, "two curve labels")->required()->expected(2);
  c_crit->add_option("--pmax", crit.pmax, "largest place");
  c_crit->add_option("--lambda", crit.lambda, "comma-separated odd test primes");
  c_crit->add_flag("--all-witnesses", crit.all_witnesses, "print every witness cell, not only the first");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "run the joint-image model experiments");
  c_sim->add_option("--model", sim.model, "graph | twist | product");
  c_sim->add_option("--g", sim.g);
  c_sim->add_option("--ell", sim.ell);
  auto* o_trials = c_sim->add_option("--trials", sim.trials, "sampled mode with this many trials");
  auto* o_exh = c_sim->add_flag("--exhaustive", sim.exhaustive, "enumerate every pair");
  o_trials->excludes(o_exh);
  c_sim->add_option("--seed", sim.seed);
  c_sim->add_option("--epsilon", sim.epsilon, "twist character law: uniform | minus | plus");
  c_sim->add_option("--kernel-bound", sim.kernel_bound, "bound c on kernel orders to report against");

  unsigned ga_g = 1;
  u64 ga_ell = 5;
  auto* c_ga = app.add_subcommand("group-audit", "orders and normal subgroups of Sp_{2g}(F_l)");
  c_ga->add_option("--g", ga_g);
  c_ga->add_option("--ell", ga_ell);

  unsigned ry_g = 1;
  u64 ry_max = 100;
  auto* c_ry = app.add_subcommand("raynaud-bound", "tame inertia invariant bounds");
  c_ry->add_option("--g", ry_g);
  c_ry->add_option("--ellmax", ry_max);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  kernels::set_jobs(jobs);
  const auto start = std::chrono::steady_clock::now();
  int code = kOk;
  try {
    if (c_count->parsed())
      code = cmd_count(count, out);
    else if (c_crit->parsed())
      code = cmd_criterion(crit, out);
    else if (c_sim->parsed())
      code = cmd_simulate(sim, out);
    else if (c_ga->parsed())
      code = cmd_group_audit(ga_g, ga_ell, out);
    else if (c_ry->parsed())
      code = cmd_raynaud(ry_g, ry_max, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const SingularCurve& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const CacheConflict& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const EmptyScan& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kResourceCap;
  } catch (const OverflowError& e) {
    err << "error: " << e.what() << '\n';
    return kResourceCap;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  err << "# elapsed_ms " << ms.count() << '\n';
  return code;
}

}  // namespace isorad::cli
