#include "hadams/cli_runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "hadams/corpus.hpp"
#include "hadams/fixtures.hpp"
#include "hadams/norms.hpp"
#include "hadams/orlicz.hpp"
#include "hadams/probes.hpp"
#include "hadams/report.hpp"
#include "hadams/selftest.hpp"

namespace hadams {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct KeySpec {
  std::set<std::string> allowed;
  std::set<std::string> required;
};

void check_keys(const json& obj, const KeySpec& spec, const std::string& where) {
  if (!obj.is_object()) {
    throw ConfigError("config error at " + where + ": expected an object");
  }
  for (const auto& [key, _] : obj.items()) {
    if (!spec.allowed.count(key)) {
      throw ConfigError("config error at " + where + "." + key + ": unknown key");
    }
  }
  for (const auto& key : spec.required) {
    if (!obj.contains(key)) {
      throw ConfigError("config error at " + where + ": missing required key '" +
                        key + "'");
    }
  }
}

const KeySpec kCorpusKeys{{"seed", "count", "min_segments", "max_segments",
                           "s0_min", "s0_max", "min_step", "max_step",
                           "hardy_lo", "hardy_hi", "admissible"},
                          {}};

const KeySpec kExtractionKeys{
    {"theta", "a_rule", "limit_proxy", "argmax_slack_scale", "y_max",
     "y_steps_per_unit", "stop_eps_rel", "stop_eps_abs", "max_levels",
     "orthogonality_bar", "sup_window", "force"},
    {}};

CorpusSpec parse_corpus(const json& j, uint64_t default_seed,
                        const std::string& where) {
  check_keys(j, kCorpusKeys, where);
  CorpusSpec c;
  c.seed = j.value("seed", default_seed);
  c.count = j.value("count", c.count);
  c.min_segments = j.value("min_segments", c.min_segments);
  c.max_segments = j.value("max_segments", c.max_segments);
  c.s0_min = j.value("s0_min", c.s0_min);
  c.s0_max = j.value("s0_max", c.s0_max);
  c.min_step = j.value("min_step", c.min_step);
  c.max_step = j.value("max_step", c.max_step);
  c.hardy_lo = j.value("hardy_lo", c.hardy_lo);
  c.hardy_hi = j.value("hardy_hi", c.hardy_hi);
  c.admissible = j.value("admissible", c.admissible);
  return c;
}

ExtractionConfig parse_extraction(const json& j, int threads,
                                  const std::string& where) {
  check_keys(j, kExtractionKeys, where);
  ExtractionConfig cfg;
  cfg.theta = j.value("theta", cfg.theta);
  const std::string rule = j.value("a_rule", std::string("last_index"));
  if (rule == "last_index") {
    cfg.a_rule = ExtractionConfig::ARule::last_index;
  } else if (rule == "tail_half_max") {
    cfg.a_rule = ExtractionConfig::ARule::tail_half_max;
  } else {
    throw ConfigError("config error at " + where + ".a_rule: expected "
                      "'last_index' or 'tail_half_max'");
  }
  const std::string proxy = j.value("limit_proxy", std::string("extrapolate"));
  if (proxy == "last_index") {
    cfg.limit_proxy = ExtractionConfig::LimitProxy::last_index;
  } else if (proxy == "extrapolate") {
    cfg.limit_proxy = ExtractionConfig::LimitProxy::extrapolate;
  } else {
    throw ConfigError("config error at " + where + ".limit_proxy: expected "
                      "'last_index' or 'extrapolate'");
  }
  cfg.argmax_slack_scale = j.value("argmax_slack_scale", cfg.argmax_slack_scale);
  cfg.y_grid = ExtractionConfig::default_y_grid(
      j.value("y_max", 3.0), j.value("y_steps_per_unit", 10));
  cfg.stop_eps_rel = j.value("stop_eps_rel", cfg.stop_eps_rel);
  cfg.stop_eps_abs = j.value("stop_eps_abs", cfg.stop_eps_abs);
  cfg.max_levels = j.value("max_levels", cfg.max_levels);
  cfg.orthogonality_bar = j.value("orthogonality_bar", cfg.orthogonality_bar);
  cfg.hypotheses_sup_window = j.value("sup_window", cfg.hypotheses_sup_window);
  cfg.force = j.value("force", cfg.force);
  cfg.threads = threads;
  return cfg;
}

std::vector<int> parse_int_list(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError("config error at " + where + ": expected a nonempty array");
  }
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) {
      throw ConfigError("config error at " + where + ": expected integers");
    }
    out.push_back(v.get<int>());
  }
  return out;
}

std::vector<double> parse_num_list(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError("config error at " + where + ": expected a nonempty array");
  }
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw ConfigError("config error at " + where + ": expected numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

void report_header(JsonWriter& w, const std::string& subcommand,
                   const std::string& config_text, const Dimension& dim,
                   const RunContext& ctx) {
  w.field("tool", std::string("hadams"));
  w.field("report_version", static_cast<long long>(1));
  w.field("subcommand", subcommand);
  w.field("config_hash", hex64(fnv1a64(config_text)));
  w.field("seed", static_cast<long long>(ctx.seed));
  write_constant_table(w, dim);
}

void write_probe_rows(JsonWriter& w, const ProbeReport& rep) {
  w.key(rep.name).begin_object();
  w.begin_array("params");
  for (const auto& [k, v] : rep.params) {
    w.begin_object();
    w.field(k, v);
    w.end_object();
  }
  w.end_array();
  w.begin_array("rows");
  for (const auto& row : rep.rows) {
    w.begin_object();
    w.field("label", row.label);
    w.field("measured", row.measured);
    w.field("bound", row.bound);
    w.field("margin", row.margin);
    w.field("pass", row.pass);
    if (!row.note.empty()) w.field("note", row.note);
    w.end_object();
  }
  w.end_array();
  if (std::isfinite(rep.log_slope)) {
    w.field("log_slope", rep.log_slope);
    w.field("slope_target", rep.slope_target);
    w.field("intercept", rep.intercept);
  }
  w.field("pass", rep.pass);
  if (!rep.note.empty()) w.field("note", rep.note);
  w.end_object();
}

void probe_to_csv(CsvWriter& csv, const std::string& probe, double param,
                  const ProbeReport& rep) {
  for (const auto& row : rep.rows) {
    csv.add_row_mixed({probe, fmt17(param), row.label, fmt17(row.measured),
                       fmt17(row.bound), fmt17(row.margin),
                       row.pass ? "1" : "0"});
  }
}

int run_norms(const json& config, const std::string& config_text,
              const RunContext& ctx) {
  QuadratureSpec q;
  CsvWriter csv({"file", "l2", "grad_l2", "hardy_grad", "h_norm", "error_bound"});
  int n_dim = 0;
  for (const auto& entry : config.at("functions")) {
    const std::string path = entry.get<std::string>();
    const LogRadialFunction f = load_logradial(path);
    n_dim = f.dim().n;
    const NormReport r = h_norm(f, q);
    csv.add_row_mixed({path, fmt17(r.l2), fmt17(r.grad_l2), fmt17(r.hardy_grad),
                       fmt17(r.h_norm), fmt17(r.error_bound)});
  }
  write_text_file(ctx.out_dir + "/norms.csv", csv.str());

  JsonWriter w;
  w.begin_object();
  report_header(w, "norms", config_text, Dimension(n_dim ? n_dim : 2), ctx);
  w.field("csv", std::string("norms.csv"));
  w.end_object();
  write_text_file(ctx.out_dir + "/report.json", w.str());
  return 0;
}

int run_moser(const json& config, const std::string& config_text,
              const RunContext& ctx) {
  const Dimension dim(config.value("N", 2));
  const double theta = config.value("theta", 1.0);
  std::vector<int> ks = config.contains("k_list")
                            ? parse_int_list(config.at("k_list"), "moser.k_list")
                            : std::vector<int>{5, 10, 20, 40};
  QuadratureSpec q;
  OrliczSpec ospec;
  ospec.threshold = theta;

  CsvWriter csv({"k", "hardy", "l2", "grad_l2", "h_norm", "orlicz", "lower_bound"});
  for (int k : ks) {
    const LogRadialFunction fk = moser_function(dim, k);
    const NormReport nr = h_norm(fk, q);
    csv.add_row({static_cast<double>(k), nr.hardy_grad, nr.l2, nr.grad_l2,
                 nr.h_norm, orlicz_norm(fk, ospec, q),
                 orlicz_lower_bound_moser(k, dim, theta)});
  }
  write_text_file(ctx.out_dir + "/moser.csv", csv.str());

  JsonWriter w;
  w.begin_object();
  report_header(w, "moser", config_text, dim, ctx);
  w.field("theta", theta);
  w.field("csv", std::string("moser.csv"));
  w.end_object();
  write_text_file(ctx.out_dir + "/report.json", w.str());
  return 0;
}

int run_adams(const json& config, const std::string& config_text,
              const RunContext& ctx) {
  const Dimension dim(config.value("N", 2));
  QuadratureSpec q;
  const CorpusSpec cspec =
      parse_corpus(config.value("corpus", json::object()), ctx.seed, "adams.corpus");
  const auto corpus = make_corpus(dim, cspec);
  std::vector<double> factors =
      config.contains("gamma_factors")
          ? parse_num_list(config.at("gamma_factors"), "adams.gamma_factors")
          : std::vector<double>{0.5, 1.0, 1.2};
  int k_lo = 10, k_hi = 25;
  if (config.contains("moser_k_window")) {
    const auto w = parse_int_list(config.at("moser_k_window"), "adams.moser_k_window");
    if (w.size() != 2) {
      throw ConfigError("config error at adams.moser_k_window: expected [lo, hi]");
    }
    k_lo = w[0];
    k_hi = w[1];
  }

  CsvWriter csv({"probe", "gamma", "label", "measured", "bound", "margin", "pass"});
  JsonWriter w;
  w.begin_object();
  report_header(w, "adams", config_text, dim, ctx);
  w.begin_array("probes");
  bool ok = true;
  for (double fac : factors) {
    const ProbeReport rep =
        adams_sup_probe(corpus, fac * dim.gamma, q, ctx.threads, k_lo, k_hi);
    ok = ok && rep.pass;
    probe_to_csv(csv, "adams_sup", fac * dim.gamma, rep);
    w.begin_object();
    write_probe_rows(w, rep);
    w.end_object();
  }
  w.end_array();
  w.field("pass", ok);
  w.end_object();
  write_text_file(ctx.out_dir + "/adams.csv", csv.str());
  write_text_file(ctx.out_dir + "/report.json", w.str());
  return ok ? 0 : 1;
}

int run_adachi(const json& config, const std::string& config_text,
               const RunContext& ctx) {
  const Dimension dim(config.value("N", 2));
  QuadratureSpec q;
  const CorpusSpec cspec =
      parse_corpus(config.value("corpus", json::object()), ctx.seed, "adachi.corpus");
  const auto corpus = make_corpus(dim, cspec);
  std::vector<double> factors =
      config.contains("gamma_factors")
          ? parse_num_list(config.at("gamma_factors"), "adachi.gamma_factors")
          : std::vector<double>{0.5, 0.9};
  std::vector<int> ks = config.contains("k_list")
                            ? parse_int_list(config.at("k_list"), "adachi.k_list")
                            : std::vector<int>{5, 10, 20};
  const double gamma_check =
      config.value("gamma_check_factor", 0.5) * dim.gamma;
  std::vector<double> betas =
      config.contains("beta_grid")
          ? parse_num_list(config.at("beta_grid"), "adachi.beta_grid")
          : std::vector<double>{0.3, 0.5, 0.7};
  std::vector<double> epss =
      config.contains("eps_grid")
          ? parse_num_list(config.at("eps_grid"), "adachi.eps_grid")
          : std::vector<double>{0.2, 0.5};

  CsvWriter csv({"probe", "param", "label", "measured", "bound", "margin", "pass"});
  JsonWriter w;
  w.begin_object();
  report_header(w, "adachi", config_text, dim, ctx);
  w.begin_array("probes");
  bool ok = true;

  for (double fac : factors) {
    const ProbeReport rep = adachi_ratio_probe(corpus, fac * dim.gamma, q, ctx.threads);
    ok = ok && rep.pass;
    probe_to_csv(csv, "adachi_ratio", fac * dim.gamma, rep);
    w.begin_object();
    write_probe_rows(w, rep);
    w.end_object();
  }
  w.end_array();

  // sharpness witness along the Moser sequence at the critical exponent
  const auto witness = moser_sharpness_series(dim, ks, q);
  for (const auto& row : witness) {
    csv.add_row_mixed({"moser_witness", fmt17(dim.gamma),
                       "k_" + std::to_string(row.k), fmt17(row.full),
                       fmt17(row.envelope), fmt17(row.full - row.envelope),
                       row.full >= row.envelope ? "1" : "0"});
  }
  w.begin_array("moser_witness");
  for (const auto& row : witness) {
    w.begin_object();
    w.field("k", static_cast<long long>(row.k));
    w.field("full", row.full);
    w.field("core", row.core);
    w.field("envelope", row.envelope);
    w.field("l2", row.l2);
    w.field("ratio", row.ratio);
    w.end_object();
  }
  w.end_array();

  // transform identities and the reduced 1D inequality on the corpus
  w.begin_array("transform_checks");
  for (size_t i = 0; i < corpus.size(); ++i) {
    const HalfLogResult hl = half_log_transform(corpus[i], gamma_check, q);
    ok = ok && hl.report.pass;
    probe_to_csv(csv, "w_identities_member_" + std::to_string(i), gamma_check,
                 hl.report);
    for (double beta : betas) {
      for (double eps : epss) {
        if (beta * (1.0 + eps) >= 1.0) continue;
        const ProbeReport oned = one_d_reduced_check(hl.w, dim, beta, eps, q);
        ok = ok && oned.pass;
        probe_to_csv(csv, "one_d_member_" + std::to_string(i), beta, oned);
      }
    }
    if (i == 0) {
      w.begin_object();
      write_probe_rows(w, hl.report);
      w.end_object();
    }
  }
  w.end_array();
  w.field("pass", ok);
  w.end_object();
  write_text_file(ctx.out_dir + "/adachi.csv", csv.str());
  write_text_file(ctx.out_dir + "/report.json", w.str());
  return ok ? 0 : 1;
}

int run_reduce(const json& config, const std::string& config_text,
               const RunContext& ctx) {
  const Dimension dim(config.value("N", 2));
  QuadratureSpec q;
  const double r0 = config.value("r0", 1.0);
  const double gamma = config.value("gamma_factor", 1.0) * dim.gamma;
  const CorpusSpec cspec =
      parse_corpus(config.value("corpus", json::object()), ctx.seed, "reduce.corpus");
  const auto corpus = make_corpus(dim, cspec);

  CsvWriter csv({"probe", "param", "label", "measured", "bound", "margin", "pass"});
  JsonWriter w;
  w.begin_object();
  report_header(w, "reduce", config_text, dim, ctx);
  w.begin_array("members");
  bool ok = true;
  for (size_t i = 0; i < corpus.size(); ++i) {
    const NormReport nr = h_norm(corpus[i], q);
    const LogRadialFunction u =
        nr.h_norm > 1.0 ? corpus[i].scaled(1.0 / nr.h_norm) : corpus[i];

    const ProbeReport ball = ball_to_2d_reduction(u, q);
    const ProbeReport ext = exterior_series_bound(u, r0, gamma, q);
    const AuxTransformResult aux = auxiliary_w_transform(u, r0, q);
    ok = ok && ball.pass && ext.pass && aux.report.pass;
    probe_to_csv(csv, "ball_to_2d_member_" + std::to_string(i), 0.0, ball);
    probe_to_csv(csv, "exterior_member_" + std::to_string(i), r0, ext);
    probe_to_csv(csv, "aux_w_member_" + std::to_string(i), r0, aux.report);
    if (i == 0) {
      w.begin_object();
      write_probe_rows(w, ball);
      write_probe_rows(w, ext);
      write_probe_rows(w, aux.report);
      w.end_object();
    }
  }
  w.end_array();
  w.field("pass", ok);
  w.end_object();
  write_text_file(ctx.out_dir + "/reduce.csv", csv.str());
  write_text_file(ctx.out_dir + "/report.json", w.str());
  return ok ? 0 : 1;
}

int run_decompose(const json& config, const std::string& config_text,
                  const RunContext& ctx) {
  QuadratureSpec q;
  const ExtractionConfig cfg = parse_extraction(
      config.value("extraction", json::object()), ctx.threads,
      "decompose.extraction");

  std::vector<long long> indices = {4, 8, 16, 32, 64};
  if (config.contains("indices")) {
    indices.clear();
    for (int n : parse_int_list(config.at("indices"), "decompose.indices")) {
      indices.push_back(n);
    }
  }

  std::optional<SequenceFamily> fam;
  if (config.contains("manifest")) {
    fam = load_manifest(config.at("manifest").get<std::string>(), q);
  } else {
    const Dimension dim(config.value("N", 2));
    const std::string fixture = config.value("fixture", std::string("two_level"));
    if (fixture == "two_level") {
      fam = make_two_level_fixture(dim, indices, q);
    } else if (fixture == "moser") {
      // single-profile family with a config-named scale law
      const std::string form = config.value("scale_form", std::string("power"));
      ScaleSequence law = [&]() {
        if (form == "power") {
          return ScaleSequence::power_law(indices, config.value("scale_power", 1.0));
        }
        if (form == "linear_log") return ScaleSequence::linear_log(indices);
        throw ConfigError("config error at decompose.scale_form: expected "
                          "'power' or 'linear_log'");
      }();
      const ConcentrationFamily cf{moser_profile(), std::move(law), dim};
      std::vector<LogRadialFunction> members;
      for (long long n : indices) members.push_back(build_concentration(cf, n));
      fam = SequenceFamily(dim, indices, std::move(members), q);
    } else {
      throw ConfigError("config error at decompose.fixture: expected "
                        "'two_level' or 'moser'");
    }
    save_manifest(ctx.out_dir + "/fixture_manifest.json", *fam);
  }

  const DecompositionResult res = decompose(*fam, cfg);
  write_text_file(ctx.out_dir + "/decomposition.txt", res.serialize());
  for (size_t j = 0; j < res.levels.size(); ++j) {
    save_profile(ctx.out_dir + "/level_" + std::to_string(j + 1) + "_profile.txt",
                 res.levels[j].profile);
  }

  JsonWriter w;
  w.begin_object();
  report_header(w, "decompose", config_text, fam->dim, ctx);
  w.field("levels", static_cast<long long>(res.levels.size()));
  w.field("stop_reason", res.stop_reason);
  w.begin_array("A_series");
  for (double a : res.A_series) w.value(a);
  w.end_array();
  w.begin_array("level_energies");
  for (const auto& lvl : res.levels) w.value(lvl.energy);
  w.end_array();
  w.field("ledger_defect_rel_last",
          res.ledger.empty() ? 0.0 : res.ledger.back().defect_rel);
  w.field("a_series_nonincreasing", res.a_series_nonincreasing);
  w.begin_array("diagnostics");
  for (const auto& d : res.diagnostics) w.value(d);
  w.end_array();
  w.end_object();
  write_text_file(ctx.out_dir + "/report.json", w.str());
  return res.a_series_nonincreasing ? 0 : 1;
}

int run_selftest(const json& config, const std::string& config_text,
                 const RunContext& ctx) {
  (void)config;
  const AcceptanceOutcome outcome = run_acceptance(ctx.seed, ctx.threads);
  write_text_file(ctx.out_dir + "/selftest.txt", outcome.report_text);

  JsonWriter w;
  w.begin_object();
  report_header(w, "selftest", config_text, Dimension(2), ctx);
  w.begin_array("criteria");
  for (const auto& c : outcome.criteria) {
    w.begin_object();
    w.field("id", static_cast<long long>(c.id));
    w.field("name", c.name);
    w.field("pass", c.pass);
    w.field("detail", c.detail);
    w.end_object();
  }
  w.end_array();
  w.field("pass", outcome.all_pass);
  w.end_object();
  write_text_file(ctx.out_dir + "/report.json", w.str());
  return outcome.all_pass ? 0 : 1;
}

}  // namespace

void validate_config(const json& config, const std::string& subcommand) {
  if (subcommand == "norms") {
    check_keys(config, {{"functions"}, {"functions"}}, "norms");
    if (!config.at("functions").is_array() || config.at("functions").empty()) {
      throw ConfigError("config error at norms.functions: expected a nonempty array");
    }
  } else if (subcommand == "moser") {
    check_keys(config, {{"N", "k_list", "theta"}, {}}, "moser");
  } else if (subcommand == "adams") {
    check_keys(config, {{"N", "gamma_factors", "corpus", "moser_k_window"}, {}},
               "adams");
    if (config.contains("corpus")) {
      check_keys(config.at("corpus"), kCorpusKeys, "adams.corpus");
    }
  } else if (subcommand == "adachi") {
    check_keys(config,
               {{"N", "gamma_factors", "k_list", "corpus", "beta_grid",
                 "eps_grid", "gamma_check_factor"},
                {}},
               "adachi");
    if (config.contains("corpus")) {
      check_keys(config.at("corpus"), kCorpusKeys, "adachi.corpus");
    }
  } else if (subcommand == "reduce") {
    check_keys(config, {{"N", "r0", "gamma_factor", "corpus"}, {}}, "reduce");
    if (config.contains("corpus")) {
      check_keys(config.at("corpus"), kCorpusKeys, "reduce.corpus");
    }
  } else if (subcommand == "decompose") {
    check_keys(config,
               {{"N", "manifest", "fixture", "indices", "scale_form",
                 "scale_power", "extraction"},
                {}},
               "decompose");
    if (config.contains("extraction")) {
      check_keys(config.at("extraction"), kExtractionKeys, "decompose.extraction");
    }
  } else if (subcommand == "selftest") {
    check_keys(config, {{}, {}}, "selftest");
  } else {
    throw ConfigError("unknown subcommand: " + subcommand);
  }
}

int run_subcommand(const std::string& subcommand, const json& config,
                   const std::string& config_text, const RunContext& ctx) {
  validate_config(config, subcommand);
  fs::create_directories(ctx.out_dir);
  if (subcommand == "norms") return run_norms(config, config_text, ctx);
  if (subcommand == "moser") return run_moser(config, config_text, ctx);
  if (subcommand == "adams") return run_adams(config, config_text, ctx);
  if (subcommand == "adachi") return run_adachi(config, config_text, ctx);
  if (subcommand == "reduce") return run_reduce(config, config_text, ctx);
  if (subcommand == "decompose") return run_decompose(config, config_text, ctx);
  if (subcommand == "selftest") return run_selftest(config, config_text, ctx);
  throw ConfigError("unknown subcommand: " + subcommand);
}

SequenceFamily load_manifest(const std::string& manifest_path,
                             const QuadratureSpec& q) {
  const json m = json::parse(read_text_file(manifest_path));
  check_keys(m, {{"N", "entries"}, {"N", "entries"}}, "manifest");
  const Dimension dim(m.at("N").get<int>());
  const fs::path base = fs::path(manifest_path).parent_path();

  std::vector<long long> indices;
  std::vector<LogRadialFunction> members;
  for (const auto& entry : m.at("entries")) {
    check_keys(entry, {{"n", "path"}, {"n", "path"}}, "manifest.entries");
    indices.push_back(entry.at("n").get<long long>());
    members.push_back(load_logradial((base / entry.at("path").get<std::string>()).string()));
  }
  return SequenceFamily(dim, std::move(indices), std::move(members), q);
}

void save_manifest(const std::string& manifest_path, const SequenceFamily& fam) {
  const fs::path base = fs::path(manifest_path).parent_path();
  JsonWriter w;
  w.begin_object();
  w.field("N", static_cast<long long>(fam.dim.n));
  w.begin_array("entries");
  for (size_t i = 0; i < fam.size(); ++i) {
    const std::string fname = "u_" + std::to_string(fam.indices[i]) + ".txt";
    save_logradial((base / fname).string(), fam.members[i]);
    w.begin_object();
    w.field("n", static_cast<long long>(fam.indices[i]));
    w.field("path", fname);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  write_text_file(manifest_path, w.str());
}

}  // namespace hadams
