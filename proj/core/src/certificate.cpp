#include "loxgrow/certificate.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>

#include "json.hpp"
#include "loxgrow/errors.hpp"
#include "loxgrow/half_plane.hpp"

namespace loxgrow {

using nlohmann::json;

namespace {

BackendKind parse_kind(const std::string& s) {
  if (s == "free_group_tree") return BackendKind::kFreeGroupTree;
  if (s == "free_product_tree") return BackendKind::kFreeProductTree;
  if (s == "half_plane") return BackendKind::kHalfPlane;
  throw ConfigError("unknown backend kind '" + s + "'");
}

Arithmetic parse_arithmetic(const std::string& s) {
  if (s == "exact_integer") return Arithmetic::kExactInteger;
  if (s == "float") return Arithmetic::kFloat;
  throw ConfigError("unknown arithmetic '" + s + "'");
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

json matrix_json(const IntMatrix& m) { return json{{m.a, m.b}, {m.c, m.d}}; }
json matrix_json(const RealMatrix& m) { return json{{m.a, m.b}, {m.c, m.d}}; }

template <class M, class T>
M parse_matrix(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() ||
      j[0].size() != 2 || j[1].size() != 2) {
    throw ConfigError("matrices are written [[a, b], [c, d]]");
  }
  auto entry = [](const json& v) -> T {
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw NotInGroup("integer matrix entry expected");
    } else {
      if (!v.is_number()) throw ConfigError("numeric matrix entry expected");
    }
    return v.get<T>();
  };
  return M{entry(j[0][0]), entry(j[0][1]), entry(j[1][0]), entry(j[1][1])};
}

json element_json(const GroupElement& g) {
  json canon;
  if (const auto* s = std::get_if<std::string>(&g.canonical)) {
    canon = *s;
  } else if (const auto* m = std::get_if<IntMatrix>(&g.canonical)) {
    canon = matrix_json(*m);
  } else {
    canon = matrix_json(std::get<RealMatrix>(g.canonical));
  }
  return json{{"word", g.word}, {"canonical", canon}};
}

GroupElement parse_element(const Space& space, const json& j) {
  reject_unknown(j, {"word", "canonical"}, "element");
  GroupElement g;
  g.word = j.at("word").get<std::string>();
  const json& c = j.at("canonical");
  if (space.kind() != BackendKind::kHalfPlane) {
    g.canonical = c.get<std::string>();
  } else if (space.exact()) {
    g.canonical = parse_matrix<IntMatrix, std::int64_t>(c);
  } else {
    g.canonical = parse_matrix<RealMatrix, double>(c);
  }
  return g;
}

json point_json(const Point& p) {
  if (const auto* v = std::get_if<TreeVertex>(&p)) return json{{"vertex", v->word}};
  if (const auto* c = std::get_if<CosetVertex>(&p)) {
    return json{{"rep", c->rep}, {"factor", c->factor}};
  }
  const PlanePoint z = std::get<PlanePoint>(p);
  return json{z.real(), z.imag()};
}

Point parse_point(const Space& space, const json& j) {
  switch (space.kind()) {
    case BackendKind::kFreeGroupTree:
      reject_unknown(j, {"vertex"}, "basepoint");
      return TreeVertex{j.at("vertex").get<std::string>()};
    case BackendKind::kFreeProductTree:
      reject_unknown(j, {"rep", "factor"}, "basepoint");
      return CosetVertex{j.at("rep").get<std::string>(), j.at("factor").get<int>()};
    case BackendKind::kHalfPlane:
      if (!j.is_array() || j.size() != 2) throw ConfigError("plane points are [x, y]");
      return PlanePoint(j[0].get<double>(), j[1].get<double>());
  }
  throw ConfigError("unknown backend");
}

json backend_json(const BackendConfig& c) {
  json j{{"kind", to_string(c.kind)}};
  switch (c.kind) {
    case BackendKind::kFreeGroupTree: j["rank"] = c.rank; break;
    case BackendKind::kFreeProductTree: j["orders"] = {c.orders[0], c.orders[1]}; break;
    case BackendKind::kHalfPlane: j["arithmetic"] = to_string(c.arithmetic); break;
  }
  j["delta"] = c.delta;
  j["torsion_bound"] = c.torsion_bound;
  return j;
}

BackendConfig parse_backend(const json& j) {
  reject_unknown(j, {"kind", "rank", "orders", "arithmetic", "delta", "torsion_bound"},
                 "backend");
  const BackendKind kind = parse_kind(j.at("kind").get<std::string>());
  BackendConfig c;
  switch (kind) {
    case BackendKind::kFreeGroupTree:
      c = BackendConfig::free_group(j.value("rank", 2));
      break;
    case BackendKind::kFreeProductTree: {
      const auto orders = j.value("orders", std::vector<int>{2, 3});
      if (orders.size() != 2) throw ConfigError("orders must have two entries");
      c = BackendConfig::free_product(orders[0], orders[1]);
      break;
    }
    case BackendKind::kHalfPlane:
      c = BackendConfig::half_plane(
          parse_arithmetic(j.value("arithmetic", std::string("exact_integer"))));
      break;
  }
  if (kind != BackendKind::kFreeGroupTree && j.contains("rank")) {
    throw ConfigError("rank only applies to free_group_tree");
  }
  if (kind != BackendKind::kFreeProductTree && j.contains("orders")) {
    throw ConfigError("orders only apply to free_product_tree");
  }
  if (kind != BackendKind::kHalfPlane && j.contains("arithmetic")) {
    throw ConfigError("arithmetic only applies to half_plane");
  }
  c.delta = j.value("delta", c.delta);
  c.torsion_bound = j.value("torsion_bound", c.torsion_bound);
  c.validate();
  return c;
}

json options_json(const PipelineOptions& o) {
  const SearchOptions& s = o.search;
  return json{{"max_n", s.max_n},
              {"max_k", s.max_k},
              {"exact_check_len", s.exact_check_len},
              {"eps_margin", s.eps_margin},
              {"n_test", s.n_test},
              {"candidate_budget", s.candidate_budget},
              {"exact_word_cap", s.exact_word_cap},
              {"kappa_cap", s.kappa_cap},
              {"memory_cap", s.memory_cap},
              {"max_rounds", o.max_rounds},
              {"threshold_multiple", o.threshold_multiple},
              {"skip_delta_check", o.skip_delta_check},
              {"seed", o.seed},
              {"delta_sample", o.delta_sample}};
}

PipelineOptions parse_options(const json& j) {
  reject_unknown(j, {"max_n", "max_k", "exact_check_len", "eps_margin", "n_test",
                     "candidate_budget", "exact_word_cap", "kappa_cap", "memory_cap",
                     "max_rounds", "threshold_multiple", "skip_delta_check", "seed",
                     "delta_sample"},
                 "options");
  PipelineOptions o;
  SearchOptions& s = o.search;
  s.max_n = j.at("max_n").get<int>();
  s.max_k = j.at("max_k").get<int>();
  s.exact_check_len = j.at("exact_check_len").get<int>();
  s.eps_margin = j.at("eps_margin").get<double>();
  s.n_test = j.at("n_test").get<int>();
  s.candidate_budget = j.at("candidate_budget").get<std::size_t>();
  s.exact_word_cap = j.at("exact_word_cap").get<std::size_t>();
  s.kappa_cap = j.at("kappa_cap").get<int>();
  s.memory_cap = j.at("memory_cap").get<std::size_t>();
  o.max_rounds = j.at("max_rounds").get<int>();
  o.threshold_multiple = j.at("threshold_multiple").get<double>();
  o.skip_delta_check = j.at("skip_delta_check").get<bool>();
  o.seed = j.at("seed").get<std::uint64_t>();
  o.delta_sample = j.at("delta_sample").get<std::size_t>();
  return o;
}

json problem_to_json(const Problem& p) {
  json gens = json::array();
  if (p.backend.kind == BackendKind::kHalfPlane) {
    if (p.backend.arithmetic == Arithmetic::kExactInteger) {
      for (const IntMatrix& m : p.int_matrices) gens.push_back(matrix_json(m));
    } else {
      for (const RealMatrix& m : p.real_matrices) gens.push_back(matrix_json(m));
    }
  } else {
    for (const std::string& w : p.words) gens.push_back(w);
  }
  return json{{"backend", backend_json(p.backend)},
              {"generators", gens},
              {"symmetrize", p.symmetrize}};
}

Problem problem_from(const json& j) {
  reject_unknown(j, {"backend", "generators", "symmetrize"}, "problem");
  Problem p;
  p.backend = parse_backend(j.at("backend"));
  p.symmetrize = j.value("symmetrize", true);
  const json& gens = j.at("generators");
  if (!gens.is_array() || gens.empty()) {
    throw ConfigError("generators must be a nonempty list");
  }
  for (const json& g : gens) {
    if (p.backend.kind != BackendKind::kHalfPlane) {
      if (!g.is_string()) throw ConfigError("tree generators are words");
      p.words.push_back(g.get<std::string>());
    } else if (p.backend.arithmetic == Arithmetic::kExactInteger) {
      p.int_matrices.push_back(parse_matrix<IntMatrix, std::int64_t>(g));
    } else {
      p.real_matrices.push_back(parse_matrix<RealMatrix, double>(g));
    }
  }
  return p;
}

json certificate_to_json(const Problem& problem, const PipelineOptions& options,
                         const FreeBasisCertificate& c) {
  json S0 = json::array(), T = json::array();
  for (const GroupElement& s : c.S0) S0.push_back(element_json(s));
  for (const GroupElement& t : c.T) T.push_back(element_json(t));
  return json{{"version", kCertificateVersion},
              {"config_hash", config_hash(problem)},
              {"problem", problem_to_json(problem)},
              {"options", options_json(options)},
              {"basepoint", point_json(c.x)},
              {"delta", c.delta},
              {"b", element_json(c.b)},
              {"f", element_json(c.f)},
              {"h", element_json(c.h)},
              {"n", c.n},
              {"k", c.k},
              {"S0", S0},
              {"T", T},
              {"r", c.r},
              {"m", c.m},
              {"p_max", c.p_max},
              {"margin", c.margin},
              {"eps_margin", c.eps_margin},
              {"geometric_valid", c.geometric_valid},
              {"exact_check_len", c.exact_check_len},
              {"exact_verified", c.exact_verified ? json(*c.exact_verified) : json(nullptr)},
              {"kappa", c.kappa},
              {"kappa_exact", c.kappa_exact},
              {"omega_lower", c.omega_lower},
              {"escalation_rounds", c.escalation_rounds},
              {"rank_floor", c.rank_floor},
              {"rank_floor_met", c.rank_floor_met}};
}

}  // namespace

Instance instantiate(const Problem& problem) {
  problem.backend.validate();
  std::unique_ptr<Space> space;
  std::vector<std::string> words = problem.words;
  if (problem.backend.kind == BackendKind::kHalfPlane) {
    const std::size_t count = problem.backend.arithmetic == Arithmetic::kExactInteger
                                  ? problem.int_matrices.size()
                                  : problem.real_matrices.size();
    if (count == 0) throw ConfigError("half_plane needs generator matrices");
    if (problem.backend.arithmetic == Arithmetic::kExactInteger) {
      space = make_space(problem.backend, std::span<const IntMatrix>(problem.int_matrices));
    } else {
      space = make_space(problem.backend, std::span<const RealMatrix>(problem.real_matrices));
    }
    words.clear();
    for (std::size_t i = 0; i < count; ++i) words.emplace_back(1, static_cast<char>('a' + i));
  } else {
    if (words.empty()) throw ConfigError("generators must be a nonempty list");
    space = make_space(problem.backend);
    const std::string alphabet = space->alphabet();
    for (const std::string& w : words) {
      for (char c : w) {
        const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (alphabet.find(lower) == std::string::npos) {
          throw ConfigError("symbol '" + std::string(1, c) + "' is not a generator");
        }
      }
    }
  }
  GeneratingSet S = make_generating_set(*space, std::span<const std::string>(words),
                                        problem.symmetrize);
  return {std::move(space), std::move(S)};
}

std::string problem_json(const Problem& problem) {
  return problem_to_json(problem).dump();
}

Problem problem_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return problem_from(j);
}

std::string config_hash(const Problem& problem) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : problem_json(problem)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string certificate_json(const Problem& problem, const PipelineOptions& options,
                             const FreeBasisCertificate& cert) {
  return certificate_to_json(problem, options, cert).dump(2);
}

CertificateCheck check_certificate(const std::string& text) {
  CertificateCheck out;
  auto fail = [&](std::string why) { out.failures.push_back(std::move(why)); };
  try {
    const json j = json::parse(text);
    reject_unknown(j, {"version", "config_hash", "problem", "options", "basepoint",
                       "delta", "b", "f", "h", "n", "k", "S0", "T", "r", "m", "p_max",
                       "margin", "eps_margin", "geometric_valid", "exact_check_len",
                       "exact_verified", "kappa", "kappa_exact", "omega_lower",
                       "escalation_rounds", "rank_floor", "rank_floor_met"},
                   "certificate");
    if (j.at("version") != kCertificateVersion) fail("unsupported version");
    const Problem problem = problem_from(j.at("problem"));
    if (j.at("config_hash") != config_hash(problem)) fail("config_hash mismatch");
    const PipelineOptions options = parse_options(j.at("options"));
    Instance inst = instantiate(problem);
    const Space& space = *inst.space;

    auto element = [&](const json& e, const char* what) {
      GroupElement g = parse_element(space, e);
      if (!space.equal(space.evaluate(g.word), g)) {
        fail(std::string(what) + ": word does not evaluate to the canonical form");
      }
      return g;
    };
    const GroupElement b = element(j.at("b"), "b");
    const GroupElement f = element(j.at("f"), "f");
    const GroupElement h = element(j.at("h"), "h");
    std::vector<GroupElement> S0, T;
    for (const json& e : j.at("S0")) S0.push_back(element(e, "S0"));
    for (const json& e : j.at("T")) T.push_back(element(e, "T"));
    const int n = j.at("n").get<int>();
    const int k = j.at("k").get<int>();
    const int r = j.at("r").get<int>();
    const Point x = parse_point(space, j.at("basepoint"));

    if (n < 1 || k < 1) fail("n and k must be positive");
    if (r != static_cast<int>(T.size()) || T.size() != S0.size()) fail("r must equal #T = #S0");
    if (r < 2) fail("r < 2 gives no growth bound");
    if (j.at("delta").get<double>() != space.delta()) fail("delta differs from the backend");
    if (space.classify(b).type != IsometryType::kLoxodromic) fail("b is not loxodromic");
    if (space.classify(h).type != IsometryType::kLoxodromic) fail("h is not loxodromic");
    if (n >= 1 && !space.equal(h, space.compose(f, space.power(b, n)))) fail("h != f b^n");
    if (k >= 1 && T.size() == S0.size()) {
      const GroupElement hk = space.power(h, k);
      for (std::size_t i = 0; i < T.size(); ++i) {
        if (!space.equal(T[i], space.conjugate(S0[i], hk))) fail("T entry is not s h^k s^-1");
      }
    }
    const int n_test = options.search.n_test;
    if (in_elementary(space, b, f, n_test).member) fail("f lies in E(b)");
    for (std::size_t i = 0; i < S0.size(); ++i) {
      for (std::size_t j2 = i + 1; j2 < S0.size(); ++j2) {
        const GroupElement q = space.compose(space.invert(S0[j2]), S0[i]);
        if (in_elementary(space, h, q, n_test).member) fail("S0 has two elements in one E(h)-coset");
      }
    }

    const double eps = j.at("eps_margin").get<double>();
    const double expected_eps = options.search.eps_margin < 0.0
                                    ? default_eps_margin(space)
                                    : options.search.eps_margin;
    if (eps != expected_eps) fail("eps_margin differs from the options");
    if (!T.empty()) {
      const GeometricCheck g = certify_free_geometric(space, T, x, space.delta(), eps);
      if (g.m != j.at("m").get<double>()) fail("m does not recompute");
      if (g.p_max != j.at("p_max").get<double>()) fail("p_max does not recompute");
      if (g.margin != j.at("margin").get<double>()) fail("margin does not recompute");
      if (g.valid != j.at("geometric_valid").get<bool>()) fail("geometric_valid does not recompute");
    }

    const int L = j.at("exact_check_len").get<int>();
    if (L != options.search.exact_check_len) fail("exact_check_len differs from the options");
    std::optional<bool> exact;
    if (space.exact() && !T.empty() && L >= 1) {
      try {
        exact = certify_free_exact(space, T, L, options.search.exact_word_cap);
      } catch (const BudgetExceeded&) {
        exact.reset();
      }
    }
    const json& stored_exact = j.at("exact_verified");
    if (stored_exact.is_null() != !exact.has_value() ||
        (exact && stored_exact.get<bool>() != *exact)) {
      fail("exact_verified does not recompute");
    }
    const bool geometric = j.at("geometric_valid").get<bool>();
    if (!geometric && !exact.value_or(false)) fail("neither certificate kind holds");

    const int kappa = j.at("kappa").get<int>();
    if (j.at("kappa_exact").get<bool>()) {
      int measured = 0;
      for (const GroupElement& t : T) {
        const std::optional<int> len = word_length_in_S(
            space, inst.S, t, options.search.kappa_cap, options.search.memory_cap);
        if (!len) {
          fail("kappa_exact set but a word length exceeds kappa_cap");
          break;
        }
        measured = std::max(measured, *len);
      }
      if (measured != kappa) fail("kappa does not recompute");
    }
    if (kappa < 1) fail("kappa must be positive");
    if (r >= 2 && kappa >= 1 &&
        j.at("omega_lower").get<double>() != std::log(2.0 * r - 1.0) / kappa) {
      fail("omega_lower does not recompute");
    }
    const double floor = static_cast<double>(inst.S.size()) / (2.0 * space.torsion_bound());
    if (j.at("rank_floor").get<double>() != floor) fail("rank_floor does not recompute");
    if (j.at("rank_floor_met").get<bool>() != (r >= floor)) fail("rank_floor_met does not recompute");

    // Every field is a deterministic function of the problem and options.
    const FreeBasisCertificate replay = free_basis_pipeline(space, inst.S, options);
    if (certificate_to_json(problem, options, replay) != j) {
      fail("certificate differs from the deterministic replay");
    }
  } catch (const std::exception& e) {
    fail(std::string("malformed certificate: ") + e.what());
  }
  out.valid = out.failures.empty();
  return out;
}

}  // namespace loxgrow
