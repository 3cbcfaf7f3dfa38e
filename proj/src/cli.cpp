#include "stateconv/cli.hpp"

#include "stateconv/composition.hpp"
#include "stateconv/errors.hpp"
#include "stateconv/random.hpp"
#include "stateconv/simulation.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace stateconv::cli {

using Json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::pair<int, int> line_col(const std::string& text, std::size_t offset) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

/// Line of the first occurrence of needle, 0 if absent.
int line_of(const std::string& text, const std::string& needle) {
  const std::size_t at = text.find(needle);
  return at == std::string::npos ? 0 : line_col(text, at).first;
}

std::string where(const std::string& source, int line) {
  return line > 0 ? source + ":" + std::to_string(line) : source;
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON parse error: " +
                     e.what());
  }
}

std::string symbol_string(const Json& v, const std::string& ctx) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw InputError(ctx + ": expected a string");
}

Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json ext(const ExtendedReal& v) {
  if (v.infinite) return Json{{"infinite", true}};
  return num(v.value);
}

Json info_json(const SolveInfo& i) {
  return Json{{"iterations", i.iterations}, {"primal", num(i.primal)}, {"dual", num(i.dual)},
              {"gap", num(i.gap)},        {"residual", num(i.residual)}};
}

Json vec_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

Json mat_json(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
  return a;
}

Json gram_json(const CMatrix& g) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) entries.push_back(Json::array({g(i, j).real(), g(i, j).imag()}));
  }
  return Json{{"size", g.rows()}, {"entries", entries}};
}

Json sandwich_json(const SandwichReport& s) {
  return Json{{"adv", num(s.adv)},
              {"qdist", num(s.qdist)},
              {"ratio", num(s.ratio)},
              {"bound", num(s.bound)},
              {"lower_margin", num(s.lower_margin)},
              {"upper_margin", num(s.upper_margin)},
              {"pass", s.pass}};
}

struct Options {
  std::string function;
  std::string inner;
  std::string rho;
  std::string sigma;
  std::string out;
  std::string phases_csv;
  double eps = 0.1;
  double delta = 0.0;
  double lambda = 0.0;
  double tol = 1e-4;
  int trials = 0;
  int copies = 0;
  std::uint64_t seed = 7;
  bool nc = false;
};

struct Outcome {
  Json parameters = Json::object();
  Json results = Json::object();
  Json diagnostics = Json::object();
  std::string inputs;  // concatenated input file contents, hashed into the digest
  bool pass = false;
};

FunctionSpec load_function(const std::string& path, Outcome& o) {
  const std::string text = read_file(path);
  o.inputs += text;
  o.inputs.push_back('\0');
  return parse_function_text(text, path);
}

CMatrix load_gram(const std::string& path, Outcome& o) {
  const std::string text = read_file(path);
  o.inputs += text;
  o.inputs.push_back('\0');
  return parse_gram_text(text, path);
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw InputError(std::string("missing required flag ") + flag);
}

/// rho and sigma default to J and F of the function.
std::pair<CMatrix, CMatrix> load_pair(const Options& opt, const FunctionSpec& f, Outcome& o) {
  CMatrix rho = opt.rho.empty() ? ones(f.size()) : load_gram(opt.rho, o);
  CMatrix sigma = opt.sigma.empty() ? output_gram(f) : load_gram(opt.sigma, o);
  if (rho.rows() != f.size() || sigma.rows() != f.size()) {
    throw InputError("Gram matrices must have size " + std::to_string(f.size()) + " to match the function domain");
  }
  return {rho, sigma};
}

void cmd_adv(const Options& opt, Outcome& o) {
  require(opt.function, "--function");
  const FunctionSpec f = load_function(opt.function, o);
  o.parameters["tol"] = opt.tol;
  const AdvResult r = adv_pm(f);
  const WitnessCheck chk = check_witness(f, r.witness);
  const SandwichReport s = sandwich_check(f, opt.tol);
  const bool witness_ok = chk.support_ok && chk.trace_defect <= 1e-8 && chk.min_eigenvalue >= -1e-8 &&
                          chk.max_negative_omega <= 1e-8;
  o.results = Json{{"value", num(r.value)},
                   {"filtered_value", num(r.filtered_value)},
                   {"certified_lower", num(r.gamma_norm)},
                   {"witness",
                    {{"omega", vec_json(r.witness.omega)},
                     {"w", mat_json(r.witness.w)},
                     {"objective", num(r.witness.objective)}}},
                   {"witness_check",
                    {{"objective", num(chk.objective)},
                     {"trace_defect", num(chk.trace_defect)},
                     {"min_eigenvalue", num(chk.min_eigenvalue)},
                     {"support_ok", chk.support_ok},
                     {"pass", witness_ok}}},
                   {"sandwich", sandwich_json(s)}};
  o.diagnostics["solver"] = info_json(r.info);
  o.pass = witness_ok && s.pass && std::abs(r.gamma_norm - r.value) <= opt.tol * std::max(1.0, r.value);
}

void cmd_qdist(const Options& opt, Outcome& o) {
  require(opt.function, "--function");
  const FunctionSpec f = load_function(opt.function, o);
  const auto [rho, sigma] = load_pair(opt, f, o);
  const FilterSet delta = build_filters(f);
  const Gamma2Result r = query_distance(rho, sigma, delta);
  o.results["value"] = ext(r.value);
  if (r.value.infinite) {
    o.results["certificate"] = nullptr;
    o.pass = true;
    return;
  }
  const FactorizationCheck chk = check_factorization(rho - sigma, delta, r.cert);
  o.results["certificate"] = Json{{"dim", r.cert.dim}, {"objective", num(chk.objective)}, {"residual", num(chk.residual)}};
  o.diagnostics["solver"] = info_json(r.info);
  o.pass = chk.residual <= 1e-6 && chk.objective <= r.value.value + opt.tol * std::max(1.0, r.value.value);
}

void cmd_qdelta(const Options& opt, Outcome& o) {
  require(opt.function, "--function");
  const FunctionSpec f = load_function(opt.function, o);
  const auto [rho, sigma] = load_pair(opt, f, o);
  o.parameters["delta"] = opt.delta;
  o.parameters["nc"] = opt.nc;
  o.parameters["tol"] = opt.tol;
  const FilterSet delta = build_filters(f);
  const Gamma2Result qd = query_distance(rho, sigma, delta);
  const QDeltaResult r = opt.nc ? q_delta_nc(rho, sigma, delta, opt.delta) : q_delta(rho, sigma, delta, opt.delta);
  o.results["value"] = num(r.value);
  o.results["query_distance"] = ext(qd.value);
  o.results["sigma_prime"] = gram_json(r.sigma_prime);
  if (opt.nc && r.s.size() > 0) o.results["garbage_gram"] = gram_json(r.s);
  o.diagnostics["solver"] = info_json(r.info);
  const double upper = qd.value.infinite ? std::numeric_limits<double>::infinity() : qd.value.value;
  o.pass = r.value >= -opt.tol && r.value <= upper + opt.tol * std::max(1.0, r.value);
}

std::string csv_path(const std::string& base, const std::string& point) {
  std::string stem = base;
  if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0) stem.resize(stem.size() - 4);
  return stem + "_" + point + ".csv";
}

void cmd_simulate(const Options& opt, Outcome& o) {
  require(opt.function, "--function");
  const FunctionSpec f = load_function(opt.function, o);
  const auto [rho, sigma] = load_pair(opt, f, o);
  o.parameters["eps"] = opt.eps;
  const AlgorithmInstance inst = build_instance(rho, sigma, f, opt.eps);
  const SimulationReport r = simulate(inst);
  Json entries = Json::array();
  for (const SimulationEntry& e : r.entries) {
    Json hist = Json::array();
    for (const PhaseCount& p : e.histogram) hist.push_back(Json{{"phase", p.phase}, {"multiplicity", p.multiplicity}});
    entries.push_back(Json{{"input", e.point},
                           {"final_error", num(e.error)},
                           {"error_bound", num(e.error_bound)},
                           {"ideal_bound", num(e.ideal_bound)},
                           {"fidelity", num(e.fidelity)},
                           {"tplus", num(e.claims.tplus)},
                           {"tplus_bound", num(e.claims.tplus_bound)},
                           {"tminus", num(e.claims.tminus)},
                           {"tminus_bound", num(e.claims.tminus_bound)},
                           {"unitarity", num(e.unitarity)},
                           {"fixed_residual", num(e.fixed_residual)},
                           {"kernel_residual", num(e.kernel_residual)},
                           {"eigenphases", hist},
                           {"pass", e.pass}});
    if (!opt.phases_csv.empty()) {
      const std::string path = csv_path(opt.phases_csv, e.point);
      std::ofstream out(path);
      if (!out) throw InputError(path + ": cannot write file");
      write_phase_csv(out, e.histogram);
    }
  }
  o.results = Json{{"W", num(r.w)},
                   {"theta", num(r.theta)},
                   {"delta", num(r.delta)},
                   {"dim", r.dim},
                   {"certificate_dim", r.m},
                   {"phase_detect_constant", kPhaseDetectConstant},
                   {"query_estimate", r.query_estimate},
                   {"entries", entries}};
  o.diagnostics["sdp_value"] = num(inst.sdp_value);
  o.pass = r.pass;
}

void cmd_compose(const Options& opt, Outcome& o) {
  require(opt.inner, "--inner");
  const FunctionSpec g = load_function(opt.inner, o);
  o.parameters["tol"] = opt.tol;
  if (opt.function.empty()) {
    const int n = opt.copies > 0 ? opt.copies : 2;
    o.parameters["copies"] = n;
    const DirectSumReport d = direct_sum_check(g, n, opt.tol);
    o.results["direct_sum"] = Json{{"adv_g", num(d.adv_g)},
                                   {"adv_sum", num(d.adv_sum)},
                                   {"expected", num(d.expected)},
                                   {"difference", num(d.difference)},
                                   {"pass", d.pass}};
    o.pass = d.pass;
    return;
  }
  const FunctionSpec f = load_function(opt.function, o);
  const int n = opt.copies > 0 ? opt.copies : f.arity();
  o.parameters["copies"] = n;
  const ComposedSpec c = compose(f, g, n);
  const UpperReport up = check_upper(f, g, n, opt.tol);
  o.results["domain_size"] = c.composed.size();
  o.results["adv_composed"] = num(up.adv_composed);
  o.results["upper"] = Json{{"adv_f", num(up.adv_f)},
                            {"qdist_g", num(up.qdist_g)},
                            {"bound", num(up.bound)},
                            {"margin", num(up.margin)},
                            {"pass", up.pass}};
  bool lower_ok = true;
  bool boolean_inputs = true;
  for (const std::string& a : f.alphabets) boolean_inputs = boolean_inputs && a.size() == 2;
  if (g.num_outputs() == 2 && boolean_inputs) {
    const ComposedWitness w = compose_lower(c);
    const bool below = w.value <= up.adv_composed + opt.tol * std::max(1.0, up.adv_composed);
    o.results["lower"] = Json{{"value", num(w.value)},
                              {"raw_objective", num(w.raw_objective)},
                              {"expected_objective", num(w.expected_objective)},
                              {"raw_trace", num(w.raw_trace)},
                              {"expected_trace", num(w.expected_trace)},
                              {"min_eigenvalue", num(w.min_eigenvalue)},
                              {"support_ok", w.support_ok},
                              {"pass", w.pass && below}};
    lower_ok = w.pass && below;
  } else {
    o.results["lower"] = nullptr;
    o.diagnostics["lower"] = "composed witness needs a two-output inner function and boolean outer inputs";
  }
  o.pass = up.pass && lower_ok;
}

void cmd_props(const Options& opt, Outcome& o) {
  const int trials = opt.trials > 0 ? opt.trials : 50;
  o.parameters["trials"] = trials;
  o.parameters["seed"] = opt.seed;
  o.parameters["tol"] = opt.tol;
  const std::vector<PropertyOutcome> r = property_suite(trials, opt.seed, opt.tol);
  Json props = Json::array();
  bool all = true;
  for (const PropertyOutcome& p : r) {
    Json e{{"id", p.id}, {"name", p.name}, {"trials", p.trials}, {"failures", p.failures},
           {"worst_margin", num(p.worst_margin)}, {"pass", p.passed()}};
    if (!p.first_failure.empty()) e["first_failure"] = p.first_failure;
    props.push_back(e);
    all = all && p.passed();
  }
  o.results["properties"] = props;
  o.pass = all && r.size() == 13;
}

void cmd_one_query(const Options& opt, Outcome& o) {
  const int trials = opt.trials > 0 ? opt.trials : 20;
  o.parameters["trials"] = trials;
  o.parameters["seed"] = opt.seed;
  Rng rng = make_rng(opt.seed);
  Json list = Json::array();
  bool all = true;
  double worst_residual = 0.0;
  double worst_objective = 0.0;
  for (int t = 0; t < trials; ++t) {
    const int arity = uniform_int(rng, 1, 3);
    const int alphabet = uniform_int(rng, 2, 3);
    const int workspace = uniform_int(rng, 1, 3);
    const OneQueryInstance inst = random_one_query(rng, arity, alphabet, workspace);
    const OneQueryCertificate c = one_query_certificate(inst);
    const bool ok = c.check.objective <= 2.0 + 1e-8 && c.check.residual <= 1e-8;
    list.push_back(Json{{"arity", arity},
                        {"alphabet", alphabet},
                        {"workspace", workspace},
                        {"objective", num(c.check.objective)},
                        {"residual", num(c.check.residual)},
                        {"pass", ok}});
    worst_residual = std::max(worst_residual, c.check.residual);
    worst_objective = std::max(worst_objective, c.check.objective);
    all = all && ok;
  }
  o.results = Json{{"worst_objective", num(worst_objective)}, {"worst_residual", num(worst_residual)}, {"instances", list}};
  o.pass = all;
}

void cmd_fractional(const Options& opt, Outcome& o) {
  const int trials = opt.trials > 0 ? opt.trials : 5;
  o.parameters["trials"] = trials;
  o.parameters["seed"] = opt.seed;
  std::vector<double> lambdas;
  if (opt.lambda > 0.0) {
    lambdas.push_back(opt.lambda);
  } else {
    for (int l = 1; l <= 20; ++l) lambdas.push_back(0.05 * l);
  }
  o.parameters["lambda"] = lambdas;
  Rng rng = make_rng(opt.seed);
  Json list = Json::array();
  bool all = true;
  for (int t = 0; t < trials; ++t) {
    const FractionalInstance inst = random_fractional(rng, 2, 2);
    for (double lambda : lambdas) {
      const FractionalCertificate c = fractional_query_certificate(inst, lambda);
      list.push_back(Json{{"instance", t},
                          {"lambda", lambda},
                          {"residual", num(c.residual)},
                          {"min_eigenvalue", num(c.min_eigenvalue)},
                          {"max_diagonal", num(c.max_diagonal)},
                          {"p_lambda", num(c.p_lambda)},
                          {"bound", num(c.bound)},
                          {"pass", c.pass}});
      all = all && c.pass;
    }
  }
  o.results["certificates"] = list;
  o.pass = all;
}

void cmd_output_condition(const Options& opt, Outcome& o) {
  const int trials = opt.trials > 0 ? opt.trials : 50;
  o.parameters["trials"] = trials;
  o.parameters["seed"] = opt.seed;
  Rng rng = make_rng(opt.seed);
  int fwd_fail = 0;
  int rev_fail = 0;
  double fwd_margin = std::numeric_limits<double>::infinity();
  double rev_margin = std::numeric_limits<double>::infinity();
  Json list = Json::array();
  for (int t = 0; t < trials; ++t) {
    const int count = uniform_int(rng, 2, 5);
    const int dim = uniform_int(rng, 2, 5);
    const double eta = uniform(rng, 0.01, 0.3);
    const auto [rho, sigma] = random_ensembles(rng, count, dim, eta);
    const OutputConditionReport r = output_condition(rho, sigma);
    fwd_fail += !r.forward.pass;
    rev_fail += !r.reverse.pass;
    fwd_margin = std::min(fwd_margin, r.forward.bound - r.forward.gamma2);
    rev_margin = std::min(rev_margin, r.reverse.min_fidelity - r.reverse.bound);
    list.push_back(Json{{"states", count},
                        {"dim", dim},
                        {"forward",
                         {{"eps", num(r.forward.eps)},
                          {"gamma2", num(r.forward.gamma2)},
                          {"factorization", num(r.forward.factorization)},
                          {"bound", num(r.forward.bound)},
                          {"pass", r.forward.pass}}},
                        {"reverse",
                         {{"eps", num(r.reverse.eps)},
                          {"min_fidelity", num(r.reverse.min_fidelity)},
                          {"bound", num(r.reverse.bound)},
                          {"unitarity", num(r.reverse.unitarity)},
                          {"pass", r.reverse.pass}}}});
  }
  o.results = Json{{"forward_failures", fwd_fail},
                   {"reverse_failures", rev_fail},
                   {"forward_worst_margin", num(fwd_margin)},
                   {"reverse_worst_margin", num(rev_margin)},
                   {"ensembles", list}};
  o.pass = fwd_fail == 0 && rev_fail == 0;
}

}  // namespace

FunctionSpec parse_function_text(const std::string& text, const std::string& source) {
  const Json j = parse_json(text, source);
  if (!j.is_object()) throw InputError(source + ":1: expected a JSON object");
  const auto field = [&](const char* key) -> const Json& {
    if (!j.contains(key)) throw InputError(source + ": missing field \"" + key + "\"");
    return j.at(key);
  };
  const auto at_line = [&](const std::string& needle) { return where(source, line_of(text, needle)); };

  std::vector<std::string> alphabets;
  int arity = -1;
  if (j.contains("arity")) {
    if (!j.at("arity").is_number_integer() || j.at("arity").get<int>() < 1) {
      throw InputError(at_line("\"arity\"") + ": \"arity\" must be a positive integer");
    }
    arity = j.at("arity").get<int>();
  }
  if (j.contains("alphabet symbols")) {
    const Json& a = j.at("alphabet symbols");
    if (!a.is_array()) throw InputError(at_line("\"alphabet symbols\"") + ": \"alphabet symbols\" must be an array");
    for (const Json& coord : a) {
      if (!coord.is_array()) throw InputError(at_line("\"alphabet symbols\"") + ": each coordinate must list its symbols");
      std::string symbols;
      for (const Json& s : coord) {
        const std::string sym = symbol_string(s, at_line("\"alphabet symbols\""));
        if (sym.size() != 1) throw InputError(at_line("\"alphabet symbols\"") + ": symbol \"" + sym + "\" is not a single character");
        symbols += sym;
      }
      alphabets.push_back(symbols);
    }
    if (arity >= 0 && arity != static_cast<int>(alphabets.size())) {
      throw InputError(at_line("\"arity\"") + ": arity " + std::to_string(arity) + " differs from " +
                       std::to_string(alphabets.size()) + " coordinate alphabets");
    }
  } else {
    const Json& a = field("alphabet");
    if (!a.is_number_integer() || a.get<int>() < 1) {
      throw InputError(at_line("\"alphabet\"") + ": \"alphabet\" must be a positive integer");
    }
    if (arity < 0) throw InputError(source + ": missing field \"arity\"");
    alphabets.assign(static_cast<std::size_t>(arity), uniform_symbols(a.get<int>()));
  }

  const Json& d = field("domain");
  if (!d.is_array()) throw InputError(at_line("\"domain\"") + ": \"domain\" must be an array");
  const Json& outs = field("outputs");
  std::vector<std::string> domain;
  std::vector<std::string> outputs;
  for (const Json& p : d) {
    const std::string point = symbol_string(p, at_line("\"domain\""));
    domain.push_back(point);
    if (outs.is_object()) {
      if (!outs.contains(point)) throw InputError(at_line("\"outputs\"") + ": no output for domain point \"" + point + "\"");
      outputs.push_back(symbol_string(outs.at(point), at_line("\"" + point + "\"")));
    }
  }
  if (outs.is_object()) {
    for (const auto& [key, _] : outs.items()) {
      if (std::find(domain.begin(), domain.end(), key) == domain.end()) {
        throw InputError(at_line("\"" + key + "\"") + ": output given for \"" + key + "\", which is not in the domain");
      }
    }
  } else {
    throw InputError(at_line("\"outputs\"") + ": \"outputs\" must map domain points to labels");
  }
  try {
    return make_function(alphabets, domain, outputs);
  } catch (const InputError& e) {
    throw InputError(at_line("\"domain\"") + ": " + e.what());
  }
}

FunctionSpec parse_function(const std::string& path) { return parse_function_text(read_file(path), path); }

CMatrix parse_gram_text(const std::string& text, const std::string& source) {
  const Json j = parse_json(text, source);
  if (!j.is_object()) throw InputError(source + ":1: expected a JSON object");
  if (!j.contains("size") || !j.at("size").is_number_integer() || j.at("size").get<long long>() < 0) {
    throw InputError(where(source, line_of(text, "\"size\"")) + ": \"size\" must be a nonnegative integer");
  }
  const Eigen::Index d = j.at("size").get<Eigen::Index>();
  if (!j.contains("entries") || !j.at("entries").is_array()) {
    throw InputError(where(source, line_of(text, "\"entries\"")) + ": \"entries\" must be an array");
  }
  const Json& e = j.at("entries");
  if (static_cast<Eigen::Index>(e.size()) != d * d) {
    throw InputError(where(source, line_of(text, "\"entries\"")) + ": expected " + std::to_string(d * d) +
                     " entries, found " + std::to_string(e.size()));
  }
  CMatrix g(d, d);
  for (Eigen::Index k = 0; k < d * d; ++k) {
    const Json& z = e.at(static_cast<std::size_t>(k));
    if (!z.is_array() || z.size() != 2 || !z.at(0).is_number() || !z.at(1).is_number()) {
      throw InputError(where(source, line_of(text, "\"entries\"")) + ": entry " + std::to_string(k) +
                       " is not a [re, im] pair");
    }
    g(k / d, k % d) = Complex(z.at(0).get<double>(), z.at(1).get<double>());
  }
  check_gram(g, where(source, line_of(text, "\"entries\"")));
  return g;
}

CMatrix parse_gram(const std::string& path) { return parse_gram_text(read_file(path), path); }

std::string gram_to_json(const CMatrix& g) { return gram_json(g).dump(); }

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return ss.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"stateconv: query-complexity norms, adversary bounds and state-conversion simulation"};
  app.require_subcommand(1);
  Options opt;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out, "Write the JSON report here instead of stdout");
    sub->add_option("--tol", opt.tol, "Comparison tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "Random seed");
    sub->add_option("--trials", opt.trials, "Number of random trials")->check(CLI::PositiveNumber);
  };
  const auto add_states = [&](CLI::App* sub) {
    sub->add_option("--function", opt.function, "Function JSON file")->required();
    sub->add_option("--rho", opt.rho, "Initial Gram matrix JSON (default J)");
    sub->add_option("--sigma", opt.sigma, "Target Gram matrix JSON (default F)");
  };

  CLI::App* adv = app.add_subcommand("adv", "General adversary bound with witness and sandwich check");
  adv->add_option("--function", opt.function, "Function JSON file")->required();
  CLI::App* qdist = app.add_subcommand("qdist", "Query distance gamma_2(rho - sigma | Delta)");
  add_states(qdist);
  CLI::App* qdelta = app.add_subcommand("qdelta", "Bounded-error query distance q_delta");
  add_states(qdelta);
  qdelta->add_option("--delta", opt.delta, "Allowed distance to the target Gram matrix")->required()->check(CLI::NonNegativeNumber);
  qdelta->add_flag("--nc", opt.nc, "Non-coherent variant");
  CLI::App* sim = app.add_subcommand("simulate", "Build and simulate the state-conversion algorithm");
  add_states(sim);
  sim->add_option("--eps", opt.eps, "Precision parameter")->check(CLI::PositiveNumber);
  sim->add_option("--phases-csv", opt.phases_csv, "Write eigenphase histograms to <path>_<input>.csv");
  CLI::App* comp = app.add_subcommand("compose", "Composition bounds for f o g^n, or the direct sum of g");
  comp->add_option("--function", opt.function, "Outer function JSON (omit for the direct sum)");
  comp->add_option("--inner", opt.inner, "Inner function JSON")->required();
  comp->add_option("--copies", opt.copies, "Number of inner copies")->check(CLI::PositiveNumber);
  CLI::App* props = app.add_subcommand("props", "Randomized gamma_2 property suite");
  CLI::App* one = app.add_subcommand("certify-one-query", "One-query certificates on random instances");
  CLI::App* frac = app.add_subcommand("certify-fractional", "Fractional-query certificates on random 2-bit instances");
  frac->add_option("--lambda", opt.lambda, "Single lambda (default 0.05, 0.10, ..., 1.00)")->check(CLI::Range(0.0, 1.0));
  CLI::App* outc = app.add_subcommand("output-condition", "Both directions of the output condition on random ensembles");
  for (CLI::App* sub : {adv, qdist, qdelta, sim, comp, props, one, frac, outc}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (chosen == adv) cmd_adv(opt, o);
    else if (chosen == qdist) cmd_qdist(opt, o);
    else if (chosen == qdelta) cmd_qdelta(opt, o);
    else if (chosen == sim) cmd_simulate(opt, o);
    else if (chosen == comp) cmd_compose(opt, o);
    else if (chosen == props) cmd_props(opt, o);
    else if (chosen == one) cmd_one_query(opt, o);
    else if (chosen == frac) cmd_fractional(opt, o);
    else cmd_output_condition(opt, o);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << command << " failed: " << e.what() << "\n";
    return 1;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = command;
  report["input_digest"] = sha256_hex(command + '\0' + o.inputs + o.parameters.dump());
  report["parameters"] = o.parameters;
  report["results"] = o.results;
  report["pass"] = o.pass;
  report["diagnostics"] = o.diagnostics;
  report["wall_time_s"] = wall;
  const std::string text = report.dump(2) + "\n";
  if (opt.out.empty()) {
    out << text;
  } else {
    std::ofstream f(opt.out);
    if (!f) {
      err << "input error: cannot write " << opt.out << "\n";
      return 2;
    }
    f << text;
  }
  return o.pass ? 0 : 1;
}

}  // namespace stateconv::cli
