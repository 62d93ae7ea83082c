#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "loxgrow/errors.hpp"
#include "loxgrow/freebasis.hpp"
#include "loxgrow/growth.hpp"
#include "loxgrow/hypcore.hpp"

namespace loxgrow::cli {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write " + path);
  file << text;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
T positive(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw ConfigError(std::string("budget ") + key + " must be a positive integer");
  }
  return v.get<T>();
}

int default_workers() {
  if (const char* env = std::getenv("LOXGROW_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 1;
}

struct Flags {
  std::string config, cert, out;
  std::optional<int> max_radius, max_n, max_k, exact_check_len, max_rounds, workers;
  std::optional<std::size_t> memory_cap, sample_size;
  std::optional<std::uint64_t> seed;
  bool skip_delta_check = false;
};

struct Context {
  RunConfig config;
  Instance instance;
  int workers = 1;
};

Context load(const Flags& flags) {
  if (flags.config.empty()) throw ConfigError("--config is required");
  RunConfig rc = parse_run_config(read_file(flags.config));
  Budgets& b = rc.budgets;
  if (flags.max_radius) b.n_max = *flags.max_radius;
  if (flags.memory_cap) b.memory_cap = *flags.memory_cap;
  if (flags.max_n) b.max_n = *flags.max_n;
  if (flags.max_k) b.max_k = *flags.max_k;
  if (flags.exact_check_len) b.exact_check_len = *flags.exact_check_len;
  if (flags.max_rounds) b.max_rounds = *flags.max_rounds;
  if (flags.seed) rc.seed = *flags.seed;
  if (b.n_max < 1 || b.memory_cap < 1 || b.max_n < 1 || b.max_k < 1 ||
      b.exact_check_len < 1 || b.max_rounds < 1) {
    throw ConfigError("budget overrides must be positive");
  }
  Instance inst = instantiate(rc.problem);
  return {std::move(rc), std::move(inst), flags.workers.value_or(default_workers())};
}

PipelineOptions pipeline_options(const Context& ctx, const Flags& flags) {
  PipelineOptions o;
  const Budgets& b = ctx.config.budgets;
  o.search.max_n = b.max_n;
  o.search.max_k = b.max_k;
  o.search.exact_check_len = b.exact_check_len;
  o.search.memory_cap = b.memory_cap;
  o.max_rounds = b.max_rounds;
  o.seed = ctx.config.seed;
  o.skip_delta_check = flags.skip_delta_check;
  return o;
}

GrowthOptions growth_options(const Context& ctx) {
  GrowthOptions g;
  g.n_max = ctx.config.budgets.n_max;
  g.memory_cap = ctx.config.budgets.memory_cap;
  g.workers = ctx.workers;
  return g;
}

int cmd_growth(const Flags& flags, std::ostream& out, std::ostream& err) {
  Context ctx = load(flags);
  const GrowthTable t = ball_sizes(*ctx.instance.space, ctx.instance.S, growth_options(ctx));
  emit(growth_csv(t), flags.out, out);
  if (t.budget_exceeded) {
    err << "budget exceeded: memory cap " << ctx.config.budgets.memory_cap
        << " reached; last complete radius " << t.last_complete_radius << "\n";
    return kBudget;
  }
  return kOk;
}

int cmd_free_basis(const Flags& flags, std::ostream& out, std::ostream&) {
  Context ctx = load(flags);
  const PipelineOptions opts = pipeline_options(ctx, flags);
  const FreeBasisCertificate cert =
      free_basis_pipeline(*ctx.instance.space, ctx.instance.S, opts);
  emit(certificate_json(ctx.config.problem, opts, cert) + "\n", flags.out, out);
  return kOk;
}

int cmd_verify_bound(const Flags& flags, std::ostream& out, std::ostream& err) {
  Context ctx = load(flags);
  const PipelineOptions opts = pipeline_options(ctx, flags);
  const TheoremReport rep =
      verify_theorem(*ctx.instance.space, ctx.instance.S, ctx.config.budgets.n_max,
                     opts, growth_options(ctx));
  if (rep.elementary) {
    err << "elementary subgroup: " << rep.diagnosis << "\n";
    return kElementary;
  }
  json j{{"version", kVersion},
         {"n_max", rep.table.max_radius()},
         {"budget_exceeded", rep.table.budget_exceeded},
         {"omega_lower", rep.omega_lower},
         {"omega_hat", number_or_null(rep.omega_hat)},
         {"omega_upper", number_or_null(rep.omega_upper)},
         {"log_card_S", rep.log_card_S},
         {"theta_hat", number_or_null(rep.theta_hat)},
         {"ordered", rep.ordered},
         {"certificate",
          json::parse(certificate_json(ctx.config.problem, opts, *rep.certificate))}};
  emit(j.dump(2) + "\n", flags.out, out);
  if (!rep.ordered) {
    err << "omega_lower exceeds omega_upper\n";
    return kUnexpected;
  }
  if (rep.table.budget_exceeded) {
    err << "budget exceeded during ball enumeration; brackets use radius "
        << rep.table.last_complete_radius << "\n";
    return kBudget;
  }
  return kOk;
}

int cmd_delta(const Flags& flags, std::ostream& out, std::ostream&) {
  Context ctx = load(flags);
  const std::size_t sample = flags.sample_size.value_or(500);
  const double est = estimate_delta(*ctx.instance.space, sample, ctx.config.seed);
  const double configured = ctx.instance.space->delta();
  json j{{"version", kVersion},
         {"backend", to_string(ctx.instance.space->kind())},
         {"sample_size", sample},
         {"seed", ctx.config.seed},
         {"estimate", est},
         {"configured_delta", configured},
         {"within_configured", est <= configured}};
  emit(j.dump(2) + "\n", flags.out, out);
  return kOk;
}

int cmd_classify(const Flags& flags, std::ostream& out, std::ostream&) {
  Context ctx = load(flags);
  const Space& space = *ctx.instance.space;
  std::vector<std::string> words = ctx.config.problem.words;
  if (space.kind() == BackendKind::kHalfPlane) {
    words.clear();
    const std::size_t count = ctx.config.problem.int_matrices.size() +
                              ctx.config.problem.real_matrices.size();
    for (std::size_t i = 0; i < count; ++i) words.emplace_back(1, static_cast<char>('a' + i));
  }
  json elements = json::array();
  for (const std::string& w : words) {
    const GroupElement g = space.evaluate(w);
    const Classification c = space.classify(g);
    elements.push_back({{"word", w},
                        {"element", space.describe(g)},
                        {"type", to_string(c.type)},
                        {"boundary", c.boundary},
                        {"translation_length",
                         number_or_null(space.translation_length(g).value_or(NAN))}});
  }
  json j{{"version", kVersion}, {"elements", elements}};
  emit(j.dump(2) + "\n", flags.out, out);
  return kOk;
}

int cmd_check_cert(const Flags& flags, std::ostream& out, std::ostream& err) {
  if (flags.cert.empty()) throw ConfigError("--cert is required");
  const CertificateCheck check = check_certificate(read_file(flags.cert));
  json j{{"version", kVersion}, {"valid", check.valid}, {"failures", check.failures}};
  emit(j.dump(2) + "\n", flags.out, out);
  for (const std::string& f : check.failures) err << "certificate: " << f << "\n";
  return check.valid ? kOk : kInvalidCertificate;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  json problem = json::object();
  RunConfig rc;
  for (const auto& [key, value] : j.items()) {
    if (key == "backend" || key == "generators" || key == "symmetrize") {
      problem[key] = value;
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ConfigError("seed must be a nonnegative integer");
      rc.seed = value.get<std::uint64_t>();
    } else if (key == "budgets") {
      if (!value.is_object()) throw ConfigError("budgets must be an object");
      for (const auto& [bk, bv] : value.items()) {
        static const std::set<std::string> known{"n_max",  "memory_cap",      "max_n",
                                                 "max_k",  "exact_check_len", "max_rounds"};
        if (!known.contains(bk)) throw ConfigError("unknown key '" + bk + "' in budgets");
      }
      Budgets& b = rc.budgets;
      b.n_max = positive(value, "n_max", b.n_max);
      b.memory_cap = positive(value, "memory_cap", b.memory_cap);
      b.max_n = positive(value, "max_n", b.max_n);
      b.max_k = positive(value, "max_k", b.max_k);
      b.exact_check_len = positive(value, "exact_check_len", b.exact_check_len);
      b.max_rounds = positive(value, "max_rounds", b.max_rounds);
    } else {
      throw ConfigError("unknown key '" + key + "' in config");
    }
  }
  if (!problem.contains("backend")) throw ConfigError("config needs a backend");
  if (!problem.contains("generators")) throw ConfigError("config needs generators");
  try {
    rc.problem = problem_from_json(problem.dump());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return rc;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Growth brackets and free-subgroup certificates for groups acting on "
               "hyperbolic spaces"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Flags flags;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "Run configuration JSON")->required();
    sub->add_option("--out", flags.out, "Output file (default: standard output)");
    sub->add_option("--seed", flags.seed, "Override the configured seed");
    sub->add_option("--memory-cap", flags.memory_cap, "Stored element cap");
    sub->add_option("--workers", flags.workers,
                    "Worker threads (default: LOXGROW_WORKERS or 1)");
  };
  auto pipeline = [&](CLI::App* sub) {
    sub->add_option("--max-n", flags.max_n, "Largest amplification power n");
    sub->add_option("--max-k", flags.max_k, "Largest conjugation power k");
    sub->add_option("--exact-check-len", flags.exact_check_len,
                    "Word length of the exact freeness check");
    sub->add_option("--max-rounds", flags.max_rounds, "Escalation rounds");
    sub->add_flag("--skip-delta-check", flags.skip_delta_check,
                  "Run even if the sampled four-point defect exceeds delta");
  };

  CLI::App* growth = app.add_subcommand("growth", "Ball sizes as CSV");
  common(growth);
  growth->add_option("--max-radius", flags.max_radius, "Largest radius");

  CLI::App* free_basis = app.add_subcommand("free-basis", "Free basis certificate JSON");
  common(free_basis);
  pipeline(free_basis);

  CLI::App* verify = app.add_subcommand("verify-bound", "Growth brackets summary JSON");
  common(verify);
  pipeline(verify);
  verify->add_option("--max-radius", flags.max_radius, "Largest radius");

  CLI::App* delta = app.add_subcommand("delta", "Empirical four-point defect JSON");
  common(delta);
  delta->add_option("--sample-size", flags.sample_size, "Random quadruples");

  CLI::App* classify = app.add_subcommand("classify", "Classify the generators");
  common(classify);

  CLI::App* check = app.add_subcommand("check-cert", "Re-verify a certificate");
  check->add_option("--cert", flags.cert, "Certificate JSON")->required();
  check->add_option("--out", flags.out, "Output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kConfig;
  }

  try {
    if (growth->parsed()) return cmd_growth(flags, out, err);
    if (free_basis->parsed()) return cmd_free_basis(flags, out, err);
    if (verify->parsed()) return cmd_verify_bound(flags, out, err);
    if (delta->parsed()) return cmd_delta(flags, out, err);
    if (classify->parsed()) return cmd_classify(flags, out, err);
    if (check->parsed()) return cmd_check_cert(flags, out, err);
  } catch (const ElementaryDetected& e) {
    err << "elementary subgroup: " << e.what() << "\n";
    return kElementary;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const InvalidCertificate& e) {
    err << "invalid certificate: " << e.what() << "\n";
    return kInvalidCertificate;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const NotInGroup& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const EmptyAfterReduction& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const BackendMismatch& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const OutOfRange& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUnexpected;
  }
  return kUnexpected;
}

}  // namespace loxgrow::cli
