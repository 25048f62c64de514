#include "hyperwalk/service.hpp"

#include <cmath>
#include <set>

#include "hyperwalk/coupling.hpp"
#include "hyperwalk/distribution.hpp"
#include "hyperwalk/error.hpp"
#include "hyperwalk/experiments.hpp"
#include "hyperwalk/powers.hpp"
#include "hyperwalk/sampling.hpp"
#include "hyperwalk/spectral.hpp"

namespace hyperwalk {

namespace {

template <typename T>
T opt(const Json& o, const char* key, T fallback) {
  if (o.is_object() && o.contains(key) && !o.at(key).is_null()) {
    try {
      return o.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::Parse, std::string("option \"") + key + "\" has the wrong type", key);
    }
  }
  return fallback;
}

Json verdict_json(Verdict v) { return verdict_name(v); }

Verdict from_scan(const ScanReport& r) { return r.passed() ? Verdict::Pass : Verdict::Fail; }

Json base_config(const ModelPtr& model, const StepMeasure* mu) {
  Json c;
  c["group"] = model->describe();
  if (mu) c["measure"] = mu->describe();
  return c;
}

Json rho_json(const SpectralRadiusEstimate& r) {
  return Json{{"value", r.value},
              {"method", rho_method_name(r.method)},
              {"is_lower_bound", r.is_lower_bound},
              {"parameter", r.parameter},
              {"iterations", r.iterations}};
}

/// Closed form when available, else the Rayleigh lower bound on a ball.
SpectralRadiusEstimate best_rho(const StepMeasure& mu, int radius) {
  if (mu.free_lazy_uniform_alpha()) return rho_closed_form_free(mu);
  return rho_rayleigh_ball(mu, radius);
}

Json fit_json(const RateFit& f) {
  return Json{{"rho_hat", f.rho_hat},
              {"c_hat", f.c_hat},
              {"intercept", f.intercept},
              {"residual", f.residual},
              {"window", Json::array({f.window_low, f.window_high})},
              {"degree", f.degree},
              {"points", f.points}};
}

Json bounds_json(const std::vector<BoundCheck>& bounds) {
  Json a = Json::array();
  for (const auto& b : bounds) {
    a.push_back({{"n", b.n}, {"value", b.q}, {"bound", static_cast<double>(b.bound)}, {"holds", b.holds}});
  }
  return a;
}

// ---------------------------------------------------------------------------

Json check_exactness(const StepMeasure& mu, const Json& o, bool pointwise_only) {
  const int n_max = opt(o, "nmax", 12);
  const int half = opt(o, "supermultiplicativity_max", 10);
  const auto rho = best_rho(mu, opt(o, "rayleigh_radius", 8));
  Json rep;
  rep["config"]["nmax"] = n_max;
  rep["rho"] = rho_json(rho);
  const WalkLaws laws(mu, n_max, Arithmetic::Exact, opt<std::size_t>(o, "guard", kDefaultSupportGuard));
  const Ball& ball = laws.ball();
  const auto& model = mu.model();

  std::uint64_t mass_violations = 0, symmetry_violations = 0, pointwise_violations = 0;
  Json pointwise = Json::array();
  for (int n = 0; n <= n_max; ++n) {
    const auto& law = laws.law(n);
    const auto pw = check_pointwise_bound(law, rho);
    pointwise_violations += pw.violations;
    pointwise.push_back({{"n", n},
                         {"max_probability", to_string(pw.max_probability)},
                         {"argmax", pw.argmax},
                         {"rho_power", static_cast<double>(pw.bound)},
                         {"holds", pw.holds()}});
    if (pointwise_only) continue;
    if (law.total_mass() != 1) ++mass_violations;
    for (std::size_t i = 0; i < law.extent(); ++i) {
      if (law.numerator(i) == 0) continue;
      const auto j = ball.find(model.invert(ball.element(i)));
      if (!j || *j >= law.extent() || law.numerator(*j) != law.numerator(i)) ++symmetry_violations;
    }
  }
  rep["pointwise"] = {{"violations", pointwise_violations}, {"per_n", pointwise}};
  if (!rho.is_lower_bound) rep["pointwise"]["note"] = "rho is exact (closed form)";
  bool ok = pointwise_violations == 0;
  if (!pointwise_only) {
    const auto returns = return_probabilities(mu, half);
    std::uint64_t super_violations = 0, pairs = 0;
    for (int n = 1; n <= half; ++n) {
      for (int m = 1; n + m <= half; ++m) {
        ++pairs;
        if (returns[static_cast<std::size_t>(n + m - 1)] <
            returns[static_cast<std::size_t>(n - 1)] * returns[static_cast<std::size_t>(m - 1)]) {
          ++super_violations;
        }
      }
    }
    rep["mass_conservation"] = {{"violations", mass_violations}, {"laws", n_max + 1}};
    rep["law_symmetry"] = {{"violations", symmetry_violations}};
    rep["supermultiplicativity"] = {{"violations", super_violations}, {"pairs", pairs}, {"max_sum", half}};
    ok = ok && mass_violations == 0 && symmetry_violations == 0 && super_violations == 0;
  }
  rep["verdict"] = verdict_json(ok ? (rho.is_lower_bound ? Verdict::Advisory : Verdict::Pass) : Verdict::Fail);
  return rep;
}

Json check_splitting(const ModelPtr& model, const StepMeasure& mu, const Json& o) {
  const int radius = opt(o, "radius", 3);
  const int n_max = opt(o, "nmax", 8);
  const int K_max = opt(o, "kmax", 2);
  const auto delta = resolve_delta(model, o);
  const auto scan = sweep_splitting_inequality(mu, radius, K_max, n_max, delta.delta,
                                               opt<std::size_t>(o, "guard", kDefaultSupportGuard));
  Json rep;
  rep["config"] = {{"radius", radius}, {"nmax", n_max}, {"kmax", K_max}, {"log", "natural"}};
  rep["delta"] = to_json(delta);
  rep["scan"] = to_json(scan);
  rep["scan"]["max_defect_meaning"] = "largest lhs/rhs ratio";
  rep["verdict"] = verdict_json(from_scan(scan));
  return rep;
}

Json check_conjugate(const ModelPtr& model, const Json& o) {
  const int radius = opt(o, "radius", 6);
  const auto delta = resolve_delta(model, o);
  const auto ball = Ball::enumerate(model, radius);
  const auto scan = sweep_conjugate_decomposition(*ball, delta.delta);
  Json rep;
  rep["config"] = {{"radius", radius}};
  rep["delta"] = to_json(delta);
  rep["scan"] = to_json(scan);
  rep["scan"]["max_defect_meaning"] = "largest |g| + |h| + |g^-1| - |x|";
  bool ok = scan.passed();
  if (model->kind() == BackendKind::FreeGroup) {
    rep["free_group_zero_defect"] = scan.max_defect == 0.0;
    ok = ok && scan.max_defect == 0.0;
  }
  rep["verdict"] = verdict_json(ok ? Verdict::Pass : Verdict::Fail);
  return rep;
}

Json check_power_decomposition(const ModelPtr& model, const Json& o) {
  const auto delta = resolve_delta(model, o);
  Json rep;
  rep["delta"] = to_json(delta);
  if (opt(o, "hypothesis_violating_input", false)) {
    const Element h = model->parse(opt<std::string>(o, "h", "ab"));
    const int d = opt(o, "d", 2);
    const Element g = model->parse(opt<std::string>(o, "g", "e"));
    const auto r = decompose_power(h, d, g, *model, delta.delta);
    rep["config"] = {{"h", model->format(h)}, {"d", d}, {"g", model->format(g)}};
    rep["status"] = decomposition_status_name(r.status);
    rep["class_length"] = r.class_length;
    rep["required_class_length"] = 16.0 * delta.delta;
    rep["ledger34"] = r.ledger34;
    rep["bound34"] = r.bound34;
    rep["ledger8"] = r.ledger8;
    rep["bound8"] = r.bound8;
    rep["verdict"] = verdict_json(r.status == DecompositionStatus::HypothesisNotMet ? Verdict::Advisory
                                  : r.status == DecompositionStatus::Holds        ? Verdict::Pass
                                                                                  : Verdict::Fail);
    return rep;
  }
  const int lo = opt(o, "min_length", 16);
  const int hi = opt(o, "max_length", 20);
  const auto samples = opt<std::uint64_t>(o, "samples", 1000);
  const int g_radius = opt(o, "g_radius", 3);
  const auto seed = opt<std::uint64_t>(o, "seed", 1);
  const auto exponents = opt<std::vector<int>>(o, "exponents", {2, 3});
  const auto scan = sweep_power_decomposition(model, lo, hi, samples, exponents, g_radius, delta.delta, seed);
  rep["config"] = {{"min_length", lo}, {"max_length", hi},     {"samples", samples},
                   {"exponents", exponents}, {"g_radius", g_radius}, {"seed", seed}};
  rep["scan"] = to_json(scan);
  rep["scan"]["max_defect_meaning"] = "largest ledger minus |x| or |h^d|";
  rep["verdict"] = verdict_json(from_scan(scan));
  return rep;
}

Json check_conjclass(const StepMeasure& mu, const Json& o) {
  ConjClassConfig cfg;
  cfg.n_max = opt(o, "nmax", 12);
  cfg.A = opt(o, "A", 3.0);
  const int max_len = opt(o, "max_class_length", 4);
  const auto rho = best_rho(mu, opt(o, "rayleigh_radius", 8));
  const auto results = run_conjclass_sweep(mu, max_len, cfg, rho);
  Json rep;
  rep["config"] = {{"nmax", cfg.n_max}, {"A", cfg.A}, {"max_class_length", max_len}};
  rep["rho"] = rho_json(rho);
  Json classes = Json::array();
  Verdict v = Verdict::Pass;
  std::uint64_t violations = 0;
  for (const auto& r : results) {
    std::uint64_t bad = 0;
    for (const auto& b : r.bounds) bad += b.holds ? 0 : 1;
    violations += bad;
    classes.push_back({{"class", r.representative}, {"length", r.class_length}, {"verdict", verdict_name(r.verdict)},
                       {"violations", bad}});
    if (r.verdict == Verdict::Fail) v = Verdict::Fail;
    if (r.verdict == Verdict::Advisory && v == Verdict::Pass) v = Verdict::Advisory;
  }
  rep["classes_checked"] = results.size();
  rep["violations"] = violations;
  rep["classes"] = classes;
  rep["verdict"] = verdict_json(v);
  return rep;
}

Json check_symmetry(const ModelPtr& model, const StepMeasure& mu, const Json& o) {
  const int k_max = opt(o, "kmax", 6);
  const auto class_words = opt<std::vector<std::string>>(o, "classes", {"ab", "e"});
  const bool control = opt(o, "negative_control", model->kind() == BackendKind::FreeGroup && model->rank() == 2);
  const WalkLaws laws(mu, k_max, Arithmetic::Exact);
  Json rep;
  rep["config"] = {{"kmax", k_max}, {"classes", class_words}, {"negative_control", control}};
  std::uint64_t checked = 0, unequal = 0;
  Json failures = Json::array();
  for (const auto& w : class_words) {
    const Element c = model->parse(w);
    for (int k2 = 0; k2 <= k_max; ++k2) {
      for (int k4 = 0; k4 <= k_max; ++k4) {
        const auto r = verify_symmetry_identity(laws, c, k2, k4);
        ++checked;
        if (!r.equal()) {
          ++unequal;
          if (failures.size() < 10) {
            failures.push_back({{"class", r.class_representative}, {"k2", k2}, {"k4", k4},
                                {"lhs", to_string(r.lhs)}, {"rhs", to_string(r.rhs)}});
          }
        }
      }
    }
  }
  rep["identities_checked"] = checked;
  rep["violations"] = unequal;
  rep["failures"] = failures;
  bool ok = unequal == 0;
  if (control) {
    const auto bad = asymmetric_control_measure(model);
    const WalkLaws bad_laws(bad, k_max, Arithmetic::Exact);
    std::uint64_t control_unequal = 0;
    Json example;
    for (const auto& w : class_words) {
      const Element c = model->parse(w);
      for (int k2 = 0; k2 <= k_max; ++k2) {
        for (int k4 = 0; k4 <= k_max; ++k4) {
          const auto r = verify_symmetry_identity(bad_laws, c, k2, k4);
          if (!r.equal()) {
            if (control_unequal++ == 0) {
              example = {{"class", r.class_representative}, {"k2", k2}, {"k4", k4},
                         {"lhs", to_string(r.lhs)},         {"rhs", to_string(r.rhs)}};
            }
          }
        }
      }
    }
    rep["negative_control"] = {{"measure", bad.describe()},
                               {"identity_failures", control_unequal},
                               {"first_failure", example},
                               {"fails_as_expected", control_unequal > 0}};
    ok = ok && control_unequal > 0;
  }
  rep["verdict"] = verdict_json(ok ? Verdict::Pass : Verdict::Fail);
  return rep;
}

Json check_four_point(const ModelPtr& model, const Json& o) {
  const int radius = opt(o, "radius", 4);
  const auto ball = Ball::enumerate(model, radius);
  const auto scan = scan_four_point(*ball, opt<std::uint64_t>(o, "seed", 0));
  Json rep;
  rep["config"] = {{"radius", radius}};
  rep["scan"] = to_json(scan);
  rep["scan"]["max_defect_meaning"] = "largest min((x,z)_w,(y,z)_w) - (x,y)_w";
  rep["delta_estimate"] = std::max(1.0, scan.max_defect);
  rep["verdict"] = verdict_json(from_scan(scan));
  return rep;
}

Json check_concatenation(const ModelPtr& model, const Json& o) {
  const int radius = opt(o, "radius", 3);
  const auto alphas = opt<std::vector<double>>(o, "alphas", {0.0, 1.0});
  const auto delta = resolve_delta(model, o);
  const auto ball = Ball::enumerate(model, radius);
  const auto scan = scan_concatenation(*ball, alphas, delta);
  Json rep;
  rep["config"] = {{"radius", radius}, {"alphas", alphas}};
  rep["delta"] = to_json(delta);
  rep["scan"] = to_json(scan);
  rep["scan"]["max_defect_meaning"] = "largest lhs - rhs among quadruples meeting the hypotheses";
  rep["verdict"] = verdict_json(from_scan(scan));
  return rep;
}

Json check_geodesic_distance(const ModelPtr& model, const Json& o) {
  const int radius = opt(o, "radius", 3);
  int outer = opt(o, "outer_radius", 3 * radius);
  if (auto limit = model->validated_radius()) outer = std::min(outer, *limit);
  const auto delta = resolve_delta(model, o);
  const auto ball = Ball::enumerate(model, outer);
  const auto scan = scan_geodesic_distance(*ball, radius, delta);
  Json rep;
  rep["config"] = {{"radius", radius}, {"outer_radius", outer}};
  rep["delta"] = to_json(delta);
  rep["scan"] = to_json(scan);
  rep["verdict"] = verdict_json(from_scan(scan));
  return rep;
}

Json check_coupling(const ModelPtr& model, const StepMeasure& mu, const Json& o) {
  const auto samples = opt<std::uint64_t>(o, "samples", 1'000'000);
  const int m = opt(o, "n", 3);
  const int a0 = opt(o, "a0", 1);
  const auto seed = opt<std::uint64_t>(o, "seed", 1);
  const Element h1 = model->parse(opt<std::string>(o, "h1", "ab"));
  const int radius = m * mu.max_step_length();
  const auto law = n_step_distribution(mu, m, Arithmetic::Exact);
  const Ball& ball = law.ball();
  std::vector<double> expected(law.extent());
  for (std::size_t i = 0; i < law.extent(); ++i) expected[i] = law.probability_double(i);
  std::vector<std::uint64_t> observed(law.extent(), 0);
  std::uint64_t invalid = 0, stopped = 0, event_a = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const auto t = simulate_coupled_walk(mu, h1, a0, m, seed, s);
    if (!t.valid_path) ++invalid;
    if (t.T) ++stopped;
    if (t.event_A) ++event_a;
    if (auto i = ball.find(t.spliced.back()); i && *i < law.extent()) ++observed[*i];
  }
  const auto chi = chi_square_test(expected, observed, samples);
  Json rep;
  rep["config"] = {{"samples", samples}, {"n", m}, {"a0", a0}, {"h1", model->format(h1)}, {"seed", seed},
                   {"radius", radius}};
  rep["chi_square"] = {{"statistic", chi.statistic}, {"degrees_of_freedom", chi.degrees_of_freedom},
                       {"p_value", chi.p_value}, {"cells", chi.cells}};
  rep["invalid_paths"] = invalid;
  rep["stopped_paths"] = stopped;
  rep["event_A_paths"] = event_a;
  rep["verdict"] = verdict_json(invalid == 0 && chi.p_value > 0.001 ? Verdict::Pass : Verdict::Fail);
  return rep;
}

Json check_census(const ModelPtr& model, const Json& o) {
  const int radius = opt(o, "radius", 4);
  const int outer = opt(o, "outer_radius", model->is_free_type() ? radius : std::max(radius, 3 * radius));
  const auto delta = resolve_delta(model, o);
  const auto ball = Ball::enumerate(model, outer);
  const auto census = proper_power_census(*ball, radius, delta.delta);
  std::uint64_t powers = 0, incomplete = 0;
  for (const auto& c : census) {
    powers += c.witness ? 1 : 0;
    incomplete += c.complete ? 0 : 1;
    if (c.witness && !(reassemble(*c.witness, *model) == c.element)) {
      throw Error(ErrorCode::BoundViolation, "witness does not reassemble for " + model->format(c.element));
    }
  }
  Json rep;
  rep["config"] = {{"radius", radius}, {"outer_radius", outer}};
  rep["delta"] = to_json(delta);
  rep["elements"] = census.size();
  rep["proper_powers"] = powers;
  rep["incomplete"] = incomplete;
  rep["convention"] = "identity counted as a proper power (e = e^2)";
  rep["artifacts"] = {{"census.csv", census_to_csv(census, *model)}};
  rep["verdict"] = verdict_json(incomplete == 0 ? Verdict::Pass : Verdict::Advisory);
  return rep;
}

Json check_power_growth(const ModelPtr& model, const Json& o) {
  const auto delta = resolve_delta(model, o);
  const Element x = model->parse(opt<std::string>(o, "class", "ab"));
  const int d_max = opt(o, "dmax", 10);
  const auto C = conjugacy_class_of(x, *model, delta.delta);
  const auto g = conjugacy_power_growth(C, d_max, *model, delta.delta);
  Json rep;
  rep["config"] = {{"class", model->format(x)}, {"dmax", d_max}};
  rep["delta"] = to_json(delta);
  rep["class_length"] = C.length;
  rep["representative"] = model->format(C.representative);
  rep["lengths"] = g.lengths;
  rep["hypothesis_met"] = g.hypothesis_met;
  rep["violations"] = g.violations;
  if (!g.note.empty()) rep["note"] = g.note;
  rep["verdict"] = verdict_json(!g.hypothesis_met ? Verdict::Advisory
                                : g.violations == 0 ? Verdict::Pass
                                                    : Verdict::Fail);
  return rep;
}

}  // namespace

Json to_json(const ScanReport& r) {
  return Json{{"check", r.check},
              {"ball_radius", r.ball_radius},
              {"mode", r.mode},
              {"tuples_checked", r.tuples_checked},
              {"hypotheses_met", r.hypotheses_met},
              {"max_defect", r.max_defect},
              {"violation_count", r.violation_count},
              {"violations", r.violations}};
}

Json to_json(const HyperbolicityConstant& d) {
  Json j{{"delta", d.delta}, {"provenance", provenance_name(d.provenance)}};
  if (d.ball_radius >= 0) j["ball_radius"] = d.ball_radius;
  if (!d.mode.empty()) {
    j["mode"] = d.mode;
    j["raw_defect"] = d.raw_defect;
    j["tuples_checked"] = d.tuples_checked;
  }
  return j;
}

HyperbolicityConstant resolve_delta(const ModelPtr& model, const Json& options) {
  if (options.is_object() && options.contains("delta") && !options.at("delta").is_null()) {
    return HyperbolicityConstant::supplied(options.at("delta").get<double>());
  }
  return default_delta(model);
}

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids{
      "exactness",      "pointwise",     "lemma-splitting",   "lemma-conjugate", "lemma-34delta",
      "lemma-conjclass", "symmetry",     "four-point",        "concatenation",   "geodesic-distance",
      "coupling",       "census",        "power-growth"};
  return ids;
}

Json run_check(std::string_view id, const ModelPtr& model, const StepMeasure* mu, const Json& options) {
  std::optional<StepMeasure> fallback;
  if (mu == nullptr) {
    fallback = StepMeasure::lazy_uniform(model, Rational(1, 5));
    mu = &*fallback;
  }
  if (&mu->model() != model.get()) {
    throw Error(ErrorCode::BackendMismatch, "measure was built on another group model", "measure");
  }
  Json rep;
  if (id == "exactness") {
    rep = check_exactness(*mu, options, false);
  } else if (id == "pointwise") {
    rep = check_exactness(*mu, options, true);
  } else if (id == "lemma-splitting") {
    rep = check_splitting(model, *mu, options);
  } else if (id == "lemma-conjugate") {
    rep = check_conjugate(model, options);
  } else if (id == "lemma-34delta") {
    rep = check_power_decomposition(model, options);
  } else if (id == "lemma-conjclass") {
    rep = check_conjclass(*mu, options);
  } else if (id == "symmetry") {
    rep = check_symmetry(model, *mu, options);
  } else if (id == "four-point") {
    rep = check_four_point(model, options);
  } else if (id == "concatenation") {
    rep = check_concatenation(model, options);
  } else if (id == "geodesic-distance") {
    rep = check_geodesic_distance(model, options);
  } else if (id == "coupling") {
    rep = check_coupling(model, *mu, options);
  } else if (id == "census") {
    rep = check_census(model, options);
  } else if (id == "power-growth") {
    rep = check_power_growth(model, options);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown check id \"" + std::string(id) + "\"", "check");
  }
  Json out;
  out["check"] = std::string(id);
  out["verdict"] = rep["verdict"];
  Json cfg = base_config(model, mu);
  if (rep.contains("config")) cfg.update(rep["config"]);
  out["config"] = cfg;
  for (auto it = rep.begin(); it != rep.end(); ++it) {
    if (it.key() != "verdict" && it.key() != "config") out[it.key()] = it.value();
  }
  return out;
}

// ---------------------------------------------------------------------------

ExperimentArtifacts run_experiment_kind(std::string_view kind, const StepMeasure& mu, const Json& o) {
  ExperimentArtifacts a;
  Json& s = a.summary;
  s["experiment"] = std::string(kind);
  s["config"] = base_config(mu.model_ptr(), &mu);
  if (kind == "kesten") {
    KestenConfig cfg;
    cfg.half_max = opt(o, "nmax", 40) / 2;
    cfg.threshold = opt(o, "threshold", 0.80);
    cfg.fit_low = opt(o, "fit_low", 5);
    const auto r = run_kesten(mu, cfg);
    s["config"].update(Json{{"nmax", 2 * cfg.half_max}, {"threshold", cfg.threshold}, {"fit_low", cfg.fit_low}});
    const double rho = r.closed_form ? r.closed_form->value : r.series.points.back().value;
    s["rho"] = r.closed_form ? rho_json(*r.closed_form) : Json(nullptr);
    s["fit"] = fit_json(r.fit);
    s["rho_hat"] = r.fit.rho_hat;
    s["c_hat"] = r.fit.c_hat;
    s["intercept"] = r.fit.intercept;
    s["residual"] = r.fit.residual;
    s["window"] = Json::array({r.fit.window_low, r.fit.window_high});
    s["A_star"] = A_star(r.returns, rho);
    s["final_value"] = r.final_value;
    s["below_closed_form"] = r.below_closed_form;
    s["doubling_monotone"] = r.doubling_monotone;
    s["final_above_threshold"] = r.final_above_threshold;
    Json exact = Json::array();
    for (std::size_t m = 0; m < r.exact_returns.size(); ++m) {
      exact.push_back({{"n", 2 * (m + 1)}, {"return_probability", to_string(r.exact_returns[m])}});
    }
    s["exact_returns"] = exact;
    s["verdict"] = verdict_name(r.verdict);
    a.series_csv = r.series.to_csv();
    a.plot_data = plot_data(r.returns, rho);
    return a;
  }
  if (kind == "theorem1") {
    Theorem1Config cfg;
    cfg.exact_max = opt(o, "exact_max", 12);
    cfg.mc_max = opt(o, "nmax", 40);
    cfg.samples = opt<std::uint64_t>(o, "samples", 10'000'000);
    cfg.seed = opt<std::uint64_t>(o, "seed", 1);
    cfg.threads = opt(o, "threads", 1);
    cfg.A = opt(o, "A", 5.0);
    cfg.tolerance = opt(o, "tolerance", 0.02);
    cfg.fit_low = opt(o, "fit_low", 5);
    cfg.exact_max = std::min(cfg.exact_max, opt(o, "exact_max", cfg.exact_max));
    std::optional<double> delta;
    if (o.is_object() && o.contains("delta") && !o.at("delta").is_null()) delta = o.at("delta").get<double>();
    const auto r = run_theorem1(mu, cfg, delta ? &*delta : nullptr);
    s["config"].update(Json{{"exact_max", cfg.exact_max}, {"nmax", cfg.mc_max},   {"samples", cfg.samples},
                            {"seed", cfg.seed},           {"A", cfg.A},           {"tolerance", cfg.tolerance},
                            {"fit_low", cfg.fit_low}});
    s["convention"] = "identity counted as a proper power (e = e^2)";
    s["rho"] = rho_json(r.rho);
    s["fit"] = fit_json(r.fit);
    s["rho_hat"] = r.fit.rho_hat;
    s["c_hat"] = r.fit.c_hat;
    s["intercept"] = r.fit.intercept;
    s["residual"] = r.fit.residual;
    s["window"] = Json::array({r.fit.window_low, r.fit.window_high});
    s["A_star"] = r.A_star;
    s["rate_within_tolerance"] = r.rate_within_tolerance;
    s["bounds_hold"] = r.bounds_hold;
    s["bounds"] = bounds_json(r.bounds);
    Json overlap = Json::array();
    for (const auto& ov : r.overlap) {
      overlap.push_back({{"n", ov.n}, {"exact", ov.exact}, {"estimate", ov.estimate},
                         {"ci_low", ov.interval.low}, {"ci_high", ov.interval.high}, {"consistent", ov.consistent}});
    }
    s["overlap"] = overlap;
    s["overlap_consistent"] = r.overlap_consistent;
    s["contains_returns"] = r.contains_returns;
    s["census_complete"] = r.census_complete;
    Json exact = Json::array();
    for (std::size_t n = 0; n < r.exact_q.size(); ++n) exact.push_back({{"n", n}, {"q", to_string(r.exact_q[n])}});
    s["exact_q"] = exact;
    s["verdict"] = verdict_name(r.verdict);
    a.series_csv = r.series.to_csv();
    a.plot_data = plot_data(r.series, r.rho.value);
    return a;
  }
  if (kind == "conjclass") {
    ConjClassConfig cfg;
    cfg.n_max = opt(o, "nmax", 12);
    cfg.A = opt(o, "A", 3.0);
    const Element x = mu.model().parse(opt<std::string>(o, "class", "ab"));
    const auto rho = best_rho(mu, opt(o, "rayleigh_radius", 8));
    const auto r = run_conjclass_bound(mu, x, cfg, rho);
    s["config"].update(Json{{"nmax", cfg.n_max}, {"A", cfg.A}, {"class", mu.model().format(x)}});
    s["rho"] = rho_json(rho);
    s["class_representative"] = r.representative;
    s["class_length"] = r.class_length;
    s["bounds"] = bounds_json(r.bounds);
    s["A_star"] = A_star(r.series, rho.value);
    Json exact = Json::array();
    for (std::size_t n = 0; n < r.exact.size(); ++n) exact.push_back({{"n", n}, {"probability", to_string(r.exact[n])}});
    s["exact"] = exact;
    s["verdict"] = verdict_name(r.verdict);
    a.series_csv = r.series.to_csv();
    a.plot_data = plot_data(r.series, rho.value);
    return a;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown experiment \"" + std::string(kind) + "\"", "experiment");
}

WalkArtifacts walk_exact(const StepMeasure& mu, int n, std::string_view mode, std::size_t guard) {
  const auto arith = parse_arithmetic(mode);
  const auto law = n_step_distribution(mu, n, arith, guard);
  WalkArtifacts w;
  w.csv = law.to_csv();
  w.summary = {{"n", n},
               {"mode", arithmetic_name(arith)},
               {"group", mu.model().describe()},
               {"measure", mu.describe()},
               {"support_size", law.support_size()},
               {"ball_radius", law.ball().radius()}};
  if (arith == Arithmetic::Exact) {
    w.summary["total_mass"] = to_string(law.total_mass());
    w.summary["return_probability"] = to_string(law.probability(0));
  } else {
    w.summary["total_mass"] = law.total_mass_double();
    w.summary["return_probability"] = law.probability_double(0);
  }
  return w;
}

WalkArtifacts walk_sample(const StepMeasure& mu, int n, std::uint64_t count, std::uint64_t seed, int threads) {
  const auto& model = mu.model();
  const std::vector<PathEvent> events{{"g_n = e", [](const Element& g) { return g.is_identity(); }}};
  const auto r = sample_paths(mu, n, count, seed, events, threads);
  WalkArtifacts w;
  w.csv = r.to_csv(model);
  const auto& e = r.events.front();
  w.summary = {{"n", n},
               {"count", count},
               {"seed", seed},
               {"group", model.describe()},
               {"measure", mu.describe()},
               {"distinct_endpoints", r.counts.size()},
               {"events",
                Json::array({{{"event", e.label},
                              {"hits", e.hits},
                              {"frequency", e.frequency},
                              {"ci_low", e.interval.low},
                              {"ci_high", e.interval.high},
                              {"confidence", 0.99}}})}};
  return w;
}

}  // namespace hyperwalk
