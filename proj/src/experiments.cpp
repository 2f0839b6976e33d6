#include "emx/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace emx {

namespace {

using nlohmann::json;

CVector real_vector(std::initializer_list<double> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

SpikeSignal unit_weights(CVector locations) {
  const Eigen::Index n = locations.size();
  return {std::move(locations), CVector::Ones(n)};
}

Complex json_complex(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw Error(ErrorCode::ConfigError, "expected a number, \"re+imi\" string or [re, im] pair");
}

CVector json_complex_vector(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ConfigError, "expected an array of complex values");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = json_complex(j[i]);
  return v;
}

bool is_preset_name(const std::string& key) {
  try {
    parse_preset(key);
    return true;
  } catch (const Error&) {
    return false;
  }
}

void apply_object(ExperimentPreset& p, const json& obj) {
  for (const auto& [key, value] : obj.items()) {
    if (is_preset_name(key)) {
      if (parse_preset(key) == p.id) apply_object(p, value);
      continue;
    }
    if (key == "n_s") p.n_s = value.get<int>();
    else if (key == "n_a") p.n_a = value.get<int>();
    else if (key == "beta") p.beta = value.get<double>();
    else if (key == "sigma_list") p.sigma_list = value.get<std::vector<double>>();
    else if (key == "l") p.l = value.get<int>();
    else if (key == "tol_factor") p.tol_factor = value.get<double>();
    else if (key == "gamma") p.gamma = value.get<double>();
    else if (key == "lcurve_grid") p.lcurve_grid = value.get<int>();
    else if (key == "sample_seed") p.sample_seed = value.get<std::uint64_t>();
    else if (key == "chebyshev_kind") {
      if (p.node_law == NodeLaw::UnitCircle) continue;
      const auto kind = value.get<std::string>();
      if (kind == "first") p.node_law = NodeLaw::ChebyshevFirstKind;
      else if (kind == "second") p.node_law = NodeLaw::ChebyshevSecondKind;
      else throw Error(ErrorCode::ConfigError, "chebyshev_kind must be \"first\" or \"second\"");
    } else if (key == "truth") {
      SpikeSignal truth;
      truth.locations = json_complex_vector(value.at("locations"));
      truth.weights = value.contains("weights") ? json_complex_vector(value.at("weights"))
                                                : CVector::Ones(truth.locations.size());
      truth.validate();
      p.truth = std::move(truth);
    } else {
      throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
    }
  }
}

}  // namespace

ExperimentPreset load_preset(PresetId id) {
  constexpr double pi = std::numbers::pi;
  ExperimentPreset p;
  p.id = id;
  p.n_s = default_sample_count(id);
  p.n_a = 32;
  p.sigma_list = {1e-1, 1e-2, 1e-3};
  switch (id) {
    case PresetId::Rational: {
      p.kernel = {KernelKind::Rational, Domain::unit_disk()};
      CVector x(4);
      const double turns[] = {0.2, 0.5, 0.8, 1.0};
      for (int k = 0; k < 4; ++k) x[k] = std::polar(0.9, 2.0 * pi * turns[k]);
      p.truth = unit_weights(x);
      p.sample_law = SampleLaw::RandomAnnulus;
      p.node_law = NodeLaw::UnitCircle;
      break;
    }
    case PresetId::Spectral:
      p.kernel = {KernelKind::SpectralRational, Domain::interval(-1.0, 1.0)};
      p.truth = unit_weights(real_vector({-0.9, -0.2, 0.2, 0.9}));
      p.sample_law = SampleLaw::Matsubara;
      p.node_law = NodeLaw::ChebyshevFirstKind;
      break;
    case PresetId::Fourier:
      p.kernel = {KernelKind::Fourier, Domain::interval(-1.0, 1.0)};
      p.truth = unit_weights(real_vector({-0.9, 0.0, 0.5, 0.9}));
      p.sample_law = SampleLaw::UniformInterval;
      p.node_law = NodeLaw::ChebyshevFirstKind;
      break;
    case PresetId::Laplace:
      p.kernel = {KernelKind::Laplace, Domain::interval(0.1, 2.1)};
      p.truth = unit_weights(real_vector({0.2, 1.1, 1.6, 2.0}));
      p.sample_law = SampleLaw::UniformInterval;
      p.node_law = NodeLaw::ChebyshevFirstKind;
      p.sigma_list = {5e-2, 5e-3, 5e-4};
      break;
    case PresetId::Deconvolution:
      p.kernel = {KernelKind::CauchySquared, Domain::interval(-1.0, 1.0)};
      p.truth = unit_weights(real_vector({-0.9, 0.0, 0.5, 0.9}));
      p.sample_law = SampleLaw::UniformInterval;
      p.node_law = NodeLaw::ChebyshevFirstKind;
      break;
  }
  return p;
}

ExperimentPreset load_preset(std::string_view name) { return load_preset(parse_preset(name)); }

SampleSet ExperimentPreset::samples() const { return generate_samples(id, sample_seed, beta, n_s); }

CollocationNodes ExperimentPreset::nodes() const {
  switch (node_law) {
    case NodeLaw::UnitCircle: return uniform_circle_nodes(n_a);
    case NodeLaw::ChebyshevFirstKind: return chebyshev_nodes(n_a, kernel.domain.lo, kernel.domain.hi);
    case NodeLaw::ChebyshevSecondKind:
      return chebyshev_nodes(n_a, kernel.domain.lo, kernel.domain.hi, ChebyshevKind::Second);
  }
  return {};
}

MethodConfig ExperimentPreset::make_method(MethodVariant variant) const {
  MethodConfig m;
  m.variant = variant;
  m.tol_factor = tol_factor;
  m.gamma = gamma;
  m.l = l;
  m.n_x = static_cast<int>(truth.size());
  m.lcurve_grid = lcurve_grid;
  return m;
}

void apply_config(ExperimentPreset& preset, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
  try {
    apply_object(preset, doc);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad config value: ") + e.what());
  }
}

void apply_config_file(ExperimentPreset& preset, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config(preset, buf.str());
}

bool RunRecord::operator==(const RunRecord& o) const {
  auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
  auto same_vec = [](const CVector& a, const CVector& b) { return a.size() == b.size() && a == b; };
  return preset == o.preset && method == o.method && same(method_parameter, o.method_parameter) &&
         same(sigma, o.sigma) && seed == o.seed && same(errors.location_error, o.errors.location_error) &&
         same(errors.weight_error, o.errors.weight_error) && errors.matching == o.errors.matching &&
         same(gamma_or_tol, o.gamma_or_tol) && same(wall_time_ms, o.wall_time_ms) && ok == o.ok &&
         failed_stage == o.failed_stage && failure == o.failure && same(cond_v_minus, o.cond_v_minus) &&
         same(svd_gap, o.svd_gap) && rank_g_hat == o.rank_g_hat && rank_krylov == o.rank_krylov &&
         flat_curve == o.flat_curve && ill_conditioned_shift == o.ill_conditioned_shift &&
         same_vec(raw_locations, o.raw_locations) && same_vec(locations, o.locations) &&
         same_vec(weights, o.weights);
}

namespace {

double method_parameter(const MethodConfig& m) {
  switch (m.variant) {
    case MethodVariant::OriginalPinv: return m.tol_factor;
    case MethodVariant::RegularizedFixedGamma: return m.gamma;
    case MethodVariant::RegularizedLCurve: return 0.0;
  }
  return 0.0;
}

void mark_failed(RunRecord& rec, const std::string& stage, const std::string& message) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  rec.ok = false;
  rec.failed_stage = stage;
  rec.failure = message;
  rec.errors.location_error = nan;
  rec.errors.weight_error = nan;
  rec.gamma_or_tol = nan;
  rec.cond_v_minus = nan;
  rec.svd_gap = nan;
}

}  // namespace

std::vector<RunRecord> run_sweep(const ExperimentPreset& preset, const std::vector<MethodConfig>& methods,
                                 const std::vector<std::uint64_t>& seeds, const SweepOptions& options) {
  if (methods.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one method");
  if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one seed");
  if (preset.sigma_list.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one sigma");
  preset.truth.validate();

  const std::size_t n_methods = methods.size();
  const std::size_t n_cells = preset.sigma_list.size() * seeds.size();
  std::vector<RunRecord> records(n_cells * n_methods);
  for (std::size_t c = 0; c < n_cells; ++c) {
    for (std::size_t m = 0; m < n_methods; ++m) {
      RunRecord& rec = records[c * n_methods + m];
      rec.preset = preset.id;
      rec.method = methods[m].variant;
      rec.method_parameter = method_parameter(methods[m]);
      rec.sigma = preset.sigma_list[c / seeds.size()];
      rec.seed = seeds[c % seeds.size()];
    }
  }

  PreparedProblem problem;
  CVector exact;
  try {
    problem = prepare_problem(preset.kernel, preset.samples(), preset.nodes());
    exact = synthesize(preset.kernel, preset.truth, problem.samples);
  } catch (const Error& e) {
    for (auto& rec : records) mark_failed(rec, "collocation", e.what());
    return records;
  }

  auto run_cell = [&](std::size_t c) {
    const double sigma = preset.sigma_list[c / seeds.size()];
    const std::uint64_t seed = seeds[c % seeds.size()];
    const Observations obs = add_noise(exact, sigma, seed);
    for (std::size_t m = 0; m < n_methods; ++m) {
      RunRecord& rec = records[c * n_methods + m];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const RecoveryResult res = recover(methods[m], problem, obs);
        rec.errors = match_and_error(preset.truth, res);
        rec.gamma_or_tol = res.gamma_or_tol;
        rec.cond_v_minus = res.diagnostics.cond_v_minus;
        rec.svd_gap = res.diagnostics.svd_gap;
        rec.rank_g_hat = res.diagnostics.rank_g_hat;
        rec.rank_krylov = res.diagnostics.rank_krylov;
        rec.flat_curve = res.diagnostics.flat_curve;
        rec.ill_conditioned_shift = res.diagnostics.ill_conditioned_shift;
        rec.raw_locations = res.diagnostics.raw_locations;
        rec.locations = res.locations;
        rec.weights = res.weights;
      } catch (const Error& e) {
        mark_failed(rec, e.stage().empty() ? "unknown" : e.stage(), e.what());
      } catch (const std::exception& e) {
        mark_failed(rec, "unknown", e.what());
      }
      rec.wall_time_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
  };

  unsigned threads = options.threads > 0 ? static_cast<unsigned>(options.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_cells));
  if (threads <= 1) {
    for (std::size_t c = 0; c < n_cells; ++c) run_cell(c);
    return records;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < n_cells; c = next++) run_cell(c);
    });
  pool.clear();
  return records;
}

namespace {

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
  struct Acc {
    SummaryRow row;
    std::vector<double> loc, w;
  };
  std::vector<Acc> groups;
  for (const auto& r : records) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Acc& a) {
      return a.row.preset == r.preset && a.row.method == r.method &&
             a.row.method_parameter == r.method_parameter && a.row.sigma == r.sigma;
    });
    if (it == groups.end()) {
      groups.push_back({SummaryRow{r.preset, r.method, r.method_parameter, r.sigma}, {}, {}});
      it = std::prev(groups.end());
    }
    ++it->row.runs;
    if (!r.ok) {
      ++it->row.failures;
      continue;
    }
    if (r.flat_curve) ++it->row.flat_curves;
    it->loc.push_back(r.errors.location_error);
    it->w.push_back(r.errors.weight_error);
  }
  std::vector<SummaryRow> out;
  for (auto& g : groups) {
    g.row.median_location_error = quantile(g.loc, 0.5);
    g.row.iqr_location_error = quantile(g.loc, 0.75) - quantile(g.loc, 0.25);
    g.row.median_weight_error = quantile(g.w, 0.5);
    g.row.iqr_weight_error = quantile(g.w, 0.75) - quantile(g.w, 0.25);
    out.push_back(g.row);
  }
  return out;
}

}  // namespace emx
