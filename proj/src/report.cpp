#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "emx/experiments.hpp"
#include "json.hpp"

namespace emx {

namespace {

using nlohmann::ordered_json;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

ordered_json json_number(double x) {
  if (std::isfinite(x)) return x;
  return num(x);
}

double number_from_json(const ordered_json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw Error(ErrorCode::ConfigError, "expected a number, got '" + s + "'");
}

ordered_json complex_array(const CVector& v) {
  auto arr = ordered_json::array();
  for (const auto& z : v) arr.push_back(format_complex(z));
  return arr;
}

CVector complex_from_json(const ordered_json& j) {
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_complex(j[i].get<std::string>());
  return v;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::string method_tag(MethodVariant m, double parameter) {
  switch (m) {
    case MethodVariant::OriginalPinv: return "pinv_tol" + short_num(parameter);
    case MethodVariant::RegularizedFixedGamma: return "fixed-gamma_g" + short_num(parameter);
    case MethodVariant::RegularizedLCurve: return "lcurve";
  }
  return "?";
}

std::vector<std::filesystem::path> write_plotdata(const std::vector<RunRecord>& records,
                                                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  std::vector<PresetId> presets;
  std::map<std::string, std::vector<const RunRecord*>> groups;
  std::vector<std::string> group_order;

  for (const auto& r : records) {
    if (std::find(presets.begin(), presets.end(), r.preset) == presets.end()) presets.push_back(r.preset);
    const std::string name = std::string(to_string(r.preset)) + "_" + method_tag(r.method, r.method_parameter) +
                             "_sigma" + short_num(r.sigma) + ".dat";
    if (!groups.count(name)) group_order.push_back(name);
    groups[name].push_back(&r);
  }

  for (PresetId id : presets) {
    const ExperimentPreset preset = load_preset(id);
    std::ostringstream t;
    t << "# truth spikes for " << to_string(id) << "\n# re im weight_re weight_im\n";
    for (Eigen::Index k = 0; k < preset.truth.size(); ++k)
      t << num(preset.truth.locations[k].real()) << ' ' << num(preset.truth.locations[k].imag()) << ' '
        << num(preset.truth.weights[k].real()) << ' ' << num(preset.truth.weights[k].imag()) << '\n';
    const auto path = dir / ("truth_" + std::string(to_string(id)) + ".dat");
    write_file(path, t.str());
    written.push_back(path);
  }

  std::map<PresetId, std::vector<std::string>> files_per_preset;
  for (const auto& name : group_order) {
    std::ostringstream out;
    const auto& recs = groups[name];
    out << "# " << to_string(recs.front()->preset) << ' ' << to_string(recs.front()->method) << " sigma "
        << num(recs.front()->sigma) << "\n# one block per seed: re im weight_re weight_im\n";
    for (const RunRecord* r : recs) {
      out << "# seed " << r->seed << " location_error " << num(r->errors.location_error) << " weight_error "
          << num(r->errors.weight_error) << (r->ok ? "" : " FAILED") << '\n';
      for (Eigen::Index k = 0; k < r->locations.size(); ++k)
        out << num(r->locations[k].real()) << ' ' << num(r->locations[k].imag()) << ' '
            << num(r->weights[k].real()) << ' ' << num(r->weights[k].imag()) << '\n';
      out << "\n\n";
    }
    const auto path = dir / name;
    write_file(path, out.str());
    written.push_back(path);
    files_per_preset[recs.front()->preset].push_back(name);
  }

  for (PresetId id : presets) {
    const ExperimentPreset preset = load_preset(id);
    const bool plane = !preset.kernel.domain.is_real();
    const std::string truth = "truth_" + std::string(to_string(id)) + ".dat";
    std::ostringstream gp;
    gp << "# gnuplot script: truth solid, recovered (first seed block) dashed\n";
    gp << "set key outside\n";
    for (const auto& f : files_per_preset[id]) {
      gp << "set title '" << f << "'\n";
      if (plane)
        gp << "plot '" << truth << "' using 1:2 with points pt 7 title 'truth', '" << f
           << "' index 0 using 1:2 with points pt 6 title 'recovered'\n";
      else
        gp << "plot '" << truth << "' using 1:3 with impulses lw 2 title 'truth', '" << f
           << "' index 0 using 1:3 with impulses dt 2 title 'recovered'\n";
      gp << "pause -1\n";
    }
    const auto path = dir / ("plot_" + std::string(to_string(id)) + ".gp");
    write_file(path, gp.str());
    written.push_back(path);
  }
  return written;
}

}  // namespace

std::string format_complex(Complex z) {
  std::string im = num(z.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return num(z.real()) + im + "i";
}

Complex parse_complex(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error(ErrorCode::InvalidArgument, "empty complex literal");
  if (s.back() != 'i' || s.size() < 2) {
    char* end = nullptr;
    const double re = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw Error(ErrorCode::InvalidArgument, "bad complex literal '" + s + "'");
    return re;
  }
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size() - 2; i >= 1; --i) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) throw Error(ErrorCode::InvalidArgument, "bad complex literal '" + s + "'");
  const std::string re_s = s.substr(0, split), im_s = s.substr(split, s.size() - 1 - split);
  char* end = nullptr;
  const double re = std::strtod(re_s.c_str(), &end);
  if (end != re_s.c_str() + re_s.size()) throw Error(ErrorCode::InvalidArgument, "bad complex literal '" + s + "'");
  const double im = std::strtod(im_s.c_str(), &end);
  if (end != im_s.c_str() + im_s.size()) throw Error(ErrorCode::InvalidArgument, "bad complex literal '" + s + "'");
  return {re, im};
}

ReportFormat parse_format(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  if (name == "plotdata") return ReportFormat::PlotData;
  throw Error(ErrorCode::InvalidArgument, "unknown report format '" + std::string(name) + "'");
}

std::string to_csv_row(const RunRecord& r, const ReportOptions& options) {
  std::ostringstream out;
  out << to_string(r.preset) << ',' << to_string(r.method) << ',' << num(r.sigma) << ',' << r.seed << ','
      << num(r.errors.location_error) << ',' << num(r.errors.weight_error) << ',' << num(r.gamma_or_tol) << ','
      << num(r.cond_v_minus) << ',' << num(r.svd_gap) << ',' << num(options.include_timing ? r.wall_time_ms : 0.0);
  return out.str();
}

std::string to_json(const std::vector<RunRecord>& records, const ReportOptions& options) {
  auto arr = ordered_json::array();
  for (const auto& r : records) {
    ordered_json o;
    o["preset"] = std::string(to_string(r.preset));
    o["method"] = std::string(to_string(r.method));
    o["method_parameter"] = json_number(r.method_parameter);
    o["sigma"] = json_number(r.sigma);
    o["seed"] = r.seed;
    o["location_error"] = json_number(r.errors.location_error);
    o["weight_error"] = json_number(r.errors.weight_error);
    o["matching"] = r.errors.matching;
    o["gamma_or_tol"] = json_number(r.gamma_or_tol);
    o["wall_time_ms"] = json_number(options.include_timing ? r.wall_time_ms : 0.0);
    o["ok"] = r.ok;
    o["failed_stage"] = r.failed_stage;
    o["failure"] = r.failure;
    o["condV_minus"] = json_number(r.cond_v_minus);
    o["svd_gap"] = json_number(r.svd_gap);
    o["rank_g_hat"] = r.rank_g_hat;
    o["rank_krylov"] = r.rank_krylov;
    o["flat_curve"] = r.flat_curve;
    o["ill_conditioned_shift"] = r.ill_conditioned_shift;
    o["raw_locations"] = complex_array(r.raw_locations);
    o["locations"] = complex_array(r.locations);
    o["weights"] = complex_array(r.weights);
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

std::vector<RunRecord> records_from_json(const std::string& text) {
  std::vector<RunRecord> out;
  try {
    const auto arr = ordered_json::parse(text);
    for (const auto& o : arr) {
      RunRecord r;
      r.preset = parse_preset(o.at("preset").get<std::string>());
      r.method = parse_method(o.at("method").get<std::string>());
      r.method_parameter = number_from_json(o.at("method_parameter"));
      r.sigma = number_from_json(o.at("sigma"));
      r.seed = o.at("seed").get<std::uint64_t>();
      r.errors.location_error = number_from_json(o.at("location_error"));
      r.errors.weight_error = number_from_json(o.at("weight_error"));
      r.errors.matching = o.at("matching").get<std::vector<int>>();
      r.gamma_or_tol = number_from_json(o.at("gamma_or_tol"));
      r.wall_time_ms = number_from_json(o.at("wall_time_ms"));
      r.ok = o.at("ok").get<bool>();
      r.failed_stage = o.at("failed_stage").get<std::string>();
      r.failure = o.at("failure").get<std::string>();
      r.cond_v_minus = number_from_json(o.at("condV_minus"));
      r.svd_gap = number_from_json(o.at("svd_gap"));
      r.rank_g_hat = o.at("rank_g_hat").get<std::int64_t>();
      r.rank_krylov = o.at("rank_krylov").get<std::int64_t>();
      r.flat_curve = o.at("flat_curve").get<bool>();
      r.ill_conditioned_shift = o.at("ill_conditioned_shift").get<bool>();
      r.raw_locations = complex_from_json(o.at("raw_locations"));
      r.locations = complex_from_json(o.at("locations"));
      r.weights = complex_from_json(o.at("weights"));
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed records JSON: ") + e.what());
  }
  return out;
}

std::vector<std::filesystem::path> emit_report(const std::vector<RunRecord>& records, ReportFormat format,
                                               const std::filesystem::path& out_dir, const ReportOptions& options) {
  if (records.empty()) throw Error(ErrorCode::InvalidArgument, "no records to report");
  try {
    std::filesystem::create_directories(out_dir);
    switch (format) {
      case ReportFormat::Csv: {
        std::string text = std::string(kCsvHeader) + "\n";
        for (const auto& r : records) text += to_csv_row(r, options) + "\n";
        const auto path = out_dir / "records.csv";
        write_file(path, text);
        return {path};
      }
      case ReportFormat::Json: {
        const auto path = out_dir / "records.json";
        write_file(path, to_json(records, options));
        return {path};
      }
      case ReportFormat::PlotData:
        return write_plotdata(records, out_dir / "plotdata");
    }
  } catch (const std::filesystem::filesystem_error& e) {
    throw Error(ErrorCode::IoError, std::string(e.what()));
  }
  return {};
}

}  // namespace emx
