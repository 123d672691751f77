#include "kinemark/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <utility>

#include "kinemark/error.hpp"
#include "kinemark/synth.hpp"

namespace kinemark {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string digest_hex(std::uint64_t digest) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(digest));
  return buf;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out)
    throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
}

void require_allowed_keys(const json& obj, const std::set<std::string>& allowed,
                          const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw Error(ErrorCode::InvalidConfig,
                  "unknown key '" + it.key() + "' in " + where);
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  if (!obj.at(key).is_string())
    throw Error(ErrorCode::InvalidConfig,
                std::string(key) + " in " + where + " must be a string");
  return obj.at(key).get<std::string>();
}

double get_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.at(key).is_number())
    throw Error(ErrorCode::InvalidConfig,
                std::string(key) + " in " + where + " must be a number");
  return obj.at(key).get<double>();
}

JointId joint_from_config(const std::string& name) {
  auto id = joint_from_name(name);
  if (!id)
    throw Error(ErrorCode::InvalidConfig, "unknown joint '" + name + "'");
  return *id;
}

Statistic statistic_from_config(const std::string& name) {
  for (Statistic s : {Statistic::Mean, Statistic::Max, Statistic::Min})
    if (name == statistic_name(s)) return s;
  throw Error(ErrorCode::InvalidConfig, "unknown statistic '" + name + "'");
}

std::vector<fs::path> list_input_files(const PipelineConfig& cfg) {
  if (!fs::exists(cfg.input_dir))
    throw Error(ErrorCode::IoFailure,
                "input directory " + cfg.input_dir.string() + " does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(cfg.input_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw Error(ErrorCode::NoRecordings,
                "no .jsonl recordings under " + cfg.input_dir.string());
  return files;
}

}  // namespace

const char* biomarker_name(Biomarker b) {
  return b == Biomarker::Impulse ? "impulse" : "smoothness";
}

std::string PipelineConfig::to_json() const {
  json j;
  j["analysis_source"] = analysis_source;
  json defs = json::array();
  for (const auto& def : angles) {
    json d;
    d["end_a"] = joint_name(def.end_a);
    d["end_b"] = joint_name(def.end_b);
    d["name"] = def.name;
    d["projection"] = def.projection == Projection::Sagittal ? "sagittal" : "none";
    d["vertex"] = joint_name(def.vertex);
    defs.push_back(d);
  }
  j["angles"] = defs;
  j["ba_multiplier"] = ba_multiplier;
  j["dt"] = dt;
  j["emit_svg"] = emit_svg;
  j["gap_tolerance"] = gap_tolerance;
  j["histogram_sessions"] = session_scope_name(histogram_sessions);
  j["impulse_integrand"] = impulse_integrand == ImpulseIntegrand::SecondDerivative
                               ? "second_derivative"
                               : "series";
  j["input_dir"] = input_dir.string();
  j["output_dir"] = output_dir.string();
  j["tails"] = tails_name(tails);
  json w;
  w["length"] = window.length;
  json stats = json::array();
  for (Statistic s : window.statistics) stats.push_back(statistic_name(s));
  w["statistics"] = stats;
  w["stride"] = window.stride;
  j["top_k"] = top_k;
  j["window"] = w;
  return j.dump(2);
}

PipelineConfig PipelineConfig::from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw Error(ErrorCode::InvalidConfig, "config is not a JSON object");
  require_allowed_keys(
      j,
      {"analysis_source", "angles", "ba_multiplier", "dt", "emit_svg",
       "gap_tolerance", "histogram_sessions", "impulse_integrand", "input_dir",
       "output_dir", "tails", "top_k", "window"},
      "config");

  PipelineConfig cfg;
  if (j.contains("input_dir")) cfg.input_dir = get_string(j, "input_dir", "config");
  if (j.contains("output_dir"))
    cfg.output_dir = get_string(j, "output_dir", "config");
  if (j.contains("dt")) cfg.dt = get_number(j, "dt", "config");
  if (j.contains("gap_tolerance"))
    cfg.gap_tolerance = get_number(j, "gap_tolerance", "config");
  if (j.contains("ba_multiplier"))
    cfg.ba_multiplier = get_number(j, "ba_multiplier", "config");
  if (j.contains("top_k")) {
    double k = get_number(j, "top_k", "config");
    if (k < 1 || k != std::floor(k))
      throw Error(ErrorCode::InvalidConfig, "top_k must be a positive integer");
    cfg.top_k = static_cast<std::size_t>(k);
  }
  if (j.contains("emit_svg")) {
    if (!j["emit_svg"].is_boolean())
      throw Error(ErrorCode::InvalidConfig, "emit_svg must be a boolean");
    cfg.emit_svg = j["emit_svg"].get<bool>();
  }
  if (j.contains("analysis_source"))
    cfg.analysis_source = get_string(j, "analysis_source", "config");
  if (j.contains("tails")) {
    std::string t = get_string(j, "tails", "config");
    if (t == "one")
      cfg.tails = Tails::One;
    else if (t == "two")
      cfg.tails = Tails::Two;
    else
      throw Error(ErrorCode::InvalidConfig, "tails must be 'one' or 'two'");
  }
  if (j.contains("histogram_sessions")) {
    std::string s = get_string(j, "histogram_sessions", "config");
    bool found = false;
    for (SessionScope scope :
         {SessionScope::Pre, SessionScope::Post, SessionScope::Pooled})
      if (s == session_scope_name(scope)) {
        cfg.histogram_sessions = scope;
        found = true;
      }
    if (!found)
      throw Error(ErrorCode::InvalidConfig, "unknown session scope '" + s + "'");
  }
  if (j.contains("impulse_integrand")) {
    std::string s = get_string(j, "impulse_integrand", "config");
    if (s == "series")
      cfg.impulse_integrand = ImpulseIntegrand::Series;
    else if (s == "second_derivative")
      cfg.impulse_integrand = ImpulseIntegrand::SecondDerivative;
    else
      throw Error(ErrorCode::InvalidConfig, "unknown impulse integrand '" + s + "'");
  }
  if (j.contains("window")) {
    const json& w = j["window"];
    if (!w.is_object())
      throw Error(ErrorCode::InvalidConfig, "window must be an object");
    require_allowed_keys(w, {"length", "statistics", "stride"}, "window");
    if (w.contains("length")) {
      double len = get_number(w, "length", "window");
      if (len < 1 || len != std::floor(len))
        throw Error(ErrorCode::InvalidConfig, "window length must be a positive integer");
      cfg.window.length = static_cast<std::size_t>(len);
    }
    if (w.contains("stride")) {
      double st = get_number(w, "stride", "window");
      if (st < 1 || st != std::floor(st))
        throw Error(ErrorCode::InvalidConfig, "window stride must be a positive integer");
      cfg.window.stride = static_cast<std::size_t>(st);
    }
    if (w.contains("statistics")) {
      if (!w["statistics"].is_array())
        throw Error(ErrorCode::InvalidConfig, "window statistics must be an array");
      cfg.window.statistics.clear();
      for (const auto& item : w["statistics"]) {
        if (!item.is_string())
          throw Error(ErrorCode::InvalidConfig, "statistic names must be strings");
        cfg.window.statistics.push_back(
            statistic_from_config(item.get<std::string>()));
      }
      if (cfg.window.statistics.empty())
        throw Error(ErrorCode::InvalidConfig, "window statistics must not be empty");
    }
  }
  if (j.contains("angles")) {
    if (!j["angles"].is_array())
      throw Error(ErrorCode::InvalidConfig, "angles must be an array");
    cfg.angles.clear();
    for (const auto& item : j["angles"]) {
      if (!item.is_object())
        throw Error(ErrorCode::InvalidConfig, "each angle must be an object");
      require_allowed_keys(item, {"end_a", "end_b", "name", "projection", "vertex"},
                           "angle");
      for (const char* key : {"end_a", "end_b", "name", "vertex"})
        if (!item.contains(key))
          throw Error(ErrorCode::InvalidConfig,
                      std::string("angle is missing '") + key + "'");
      AngleDefinition def;
      def.name = get_string(item, "name", "angle");
      def.vertex = joint_from_config(get_string(item, "vertex", "angle"));
      def.end_a = joint_from_config(get_string(item, "end_a", "angle"));
      def.end_b = joint_from_config(get_string(item, "end_b", "angle"));
      if (item.contains("projection")) {
        std::string p = get_string(item, "projection", "angle");
        if (p == "none")
          def.projection = Projection::None;
        else if (p == "sagittal")
          def.projection = Projection::Sagittal;
        else
          throw Error(ErrorCode::InvalidConfig, "unknown projection '" + p + "'");
      }
      cfg.angles.push_back(std::move(def));
    }
  }
  if (cfg.dt <= 0.0)
    throw Error(ErrorCode::InvalidConfig, "dt must be positive");
  if (cfg.gap_tolerance <= 0.0)
    throw Error(ErrorCode::InvalidConfig, "gap_tolerance must be positive");
  if (cfg.ba_multiplier <= 0.0)
    throw Error(ErrorCode::InvalidConfig, "ba_multiplier must be positive");
  return cfg;
}

PipelineConfig PipelineConfig::from_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::IoFailure, "cannot open config " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json(text);
}

void PipelineConfig::to_json_file(const fs::path& path) const {
  write_text_file(path, to_json() + "\n");
}

std::uint64_t config_hash(const PipelineConfig& cfg) {
  std::string text = cfg.to_json();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<RawRecording> load_recordings(const PipelineConfig& cfg) {
  std::vector<RawRecording> recs;
  for (const fs::path& file : list_input_files(cfg)) {
    RawRecording rec = parse_recording(file);
    auto findings = validate_series(rec, cfg.gap_tolerance);
    if (!findings.empty()) {
      const Finding& f = findings.front();
      throw Error(ErrorCode::BadArgument,
                  fs::relative(file, cfg.input_dir).string() + ": " +
                      finding_kind_name(f.kind) + " at frame " +
                      std::to_string(f.frame_index) + " (" + f.detail + ")",
                  f.frame_index);
    }
    recs.push_back(std::move(rec));
  }
  return recs;
}

std::vector<CanonicalSeries> canonicalize(const PipelineConfig& cfg,
                                          const std::vector<RawRecording>& recs) {
  std::vector<CanonicalSeries> out;
  out.reserve(recs.size());
  for (const auto& rec : recs)
    out.push_back(resample_uniform(map_to_canonical(rec), cfg.dt));
  return out;
}

FeatureMatrix patient_features(const PipelineConfig& cfg,
                               const std::vector<CanonicalSeries>& series,
                               const std::string& patient_id, Session session,
                               const std::string& source) {
  std::vector<CanonicalSeries> selected;
  for (const auto& s : series)
    if (s.patient_id == patient_id && s.session == session && s.source == source)
      selected.push_back(s);
  if (selected.empty())
    throw Error(ErrorCode::NoRecordings,
                "no recordings for patient " + patient_id + " in the " +
                    session_name(session) + " session (source " + source + ")");
  return assemble_feature_matrix(selected, cfg.angles, cfg.window);
}

namespace {

// Pre/post descriptor scalars in sorted-patient order, or the first error
// met while computing them.
struct DescriptorScalars {
  std::array<std::vector<double>, 2> by_session;
  std::optional<std::string> annotation;
};

std::vector<Eigen::Index> action_rows(const FeatureMatrix& m, Action action) {
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < m.row_actions.size(); ++i)
    if (m.row_actions[i] == action) rows.push_back(static_cast<Eigen::Index>(i));
  return rows;
}

}  // namespace

AnalysisReport run_pipeline(const PipelineConfig& cfg) {
  AnalysisReport report;
  report.config = cfg;
  report.config_digest = config_hash(cfg);

  std::vector<fs::path> files = list_input_files(cfg);
  for (const auto& f : files)
    report.input_files.push_back(fs::relative(f, cfg.input_dir).string());

  std::vector<RawRecording> recs = load_recordings(cfg);
  std::vector<CanonicalSeries> series = canonicalize(cfg, recs);

  std::set<std::string> pid_set;
  std::set<std::string> sources;
  for (const auto& s : series) {
    pid_set.insert(s.patient_id);
    sources.insert(s.source);
  }
  report.patient_ids.assign(pid_set.begin(), pid_set.end());

  const std::string depth = SkeletonConvention::depth_tracker_32().name;
  if (cfg.analysis_source == "auto") {
    report.analysis_source =
        sources.size() == 1 || sources.count(depth) == 0 ? *sources.begin() : depth;
  } else {
    if (!sources.count(cfg.analysis_source))
      throw Error(ErrorCode::BadArgument, "analysis source '" +
                                              cfg.analysis_source +
                                              "' is not present in the input");
    report.analysis_source = cfg.analysis_source;
  }
  const std::string& analysis = report.analysis_source;

  // Every patient needs both sessions, and each action in both sessions.
  for (const auto& pid : report.patient_ids) {
    bool has[2][2] = {{false, false}, {false, false}};
    for (const auto& s : series)
      if (s.source == analysis && s.patient_id == pid)
        has[static_cast<int>(s.session)][static_cast<int>(s.action)] = true;
    bool pre_any = has[0][0] || has[0][1];
    bool post_any = has[1][0] || has[1][1];
    if (!pre_any || !post_any)
      throw Error(ErrorCode::NoPairedSessions,
                  "patient " + pid + " has no " +
                      session_name(pre_any ? Session::Post : Session::Pre) +
                      " session");
    for (Action action : {Action::Squat, Action::SitToStand})
      for (Session session : {Session::Pre, Session::Post})
        if (!has[static_cast<int>(session)][static_cast<int>(action)])
          throw Error(ErrorCode::MissingAction,
                      "patient " + pid + " has no " +
                          std::string(action_name(action)) + " recording in the " +
                          session_name(session) + " session");
  }

  std::map<std::pair<std::string, int>, FeatureMatrix> matrices;
  for (const auto& pid : report.patient_ids)
    for (Session session : {Session::Pre, Session::Post})
      matrices.emplace(
          std::make_pair(pid, static_cast<int>(session)),
          patient_features(cfg, series, pid, session, analysis));

  const std::vector<std::string> columns = matrices.begin()->second.columns;

  // Pooled rankings: both actions together, one fit per patient and session.
  for (const auto& pid : report.patient_ids)
    for (Session session : {Session::Pre, Session::Post}) {
      ImportanceRanking ranking = feature_importance(
          pca_fit(matrices.at({pid, static_cast<int>(session)})));
      ranking.patient_id = pid;
      ranking.sessions =
          session == Session::Pre ? SessionScope::Pre : SessionScope::Post;
      ranking.action.reset();
      report.pooled_rankings.push_back(std::move(ranking));
    }

  // Per-action rankings within the configured session scope feed the
  // cross-patient histograms.
  std::vector<Session> scope;
  if (cfg.histogram_sessions != SessionScope::Post) scope.push_back(Session::Pre);
  if (cfg.histogram_sessions != SessionScope::Pre) scope.push_back(Session::Post);
  for (const auto& pid : report.patient_ids)
    for (Action action : {Action::Squat, Action::SitToStand}) {
      std::vector<CanonicalSeries> selected;
      for (const auto& s : series) {
        if (s.source != analysis || s.patient_id != pid || s.action != action)
          continue;
        if (std::find(scope.begin(), scope.end(), s.session) == scope.end())
          continue;
        selected.push_back(s);
      }
      FeatureMatrix m = assemble_feature_matrix(selected, cfg.angles, cfg.window);
      ImportanceRanking ranking = feature_importance(pca_fit(m));
      ranking.patient_id = pid;
      ranking.sessions = cfg.histogram_sessions;
      ranking.action = action;
      PatientRanking pr;
      pr.patient_id = pid;
      pr.action = action;
      pr.top_features = top_k_features(ranking, cfg.top_k);
      pr.ranking = std::move(ranking);
      report.rankings.push_back(std::move(pr));
    }

  for (Action action : {Action::Squat, Action::SitToStand}) {
    std::vector<std::vector<std::string>> tops;
    for (const auto& pr : report.rankings)
      if (pr.action == action) tops.push_back(pr.top_features);
    report.histograms.emplace(action, aggregate_histogram(tops, action));
  }

  // Temporal descriptors: each windowed feature column, per action, folds
  // into one scalar per patient and session.
  const double dt_w = cfg.dt * static_cast<double>(cfg.window.stride);
  std::vector<DescriptorScalars> scalars(2 * columns.size() * 2);
  auto slot_of = [&columns, &scalars](Action a, std::size_t col,
                                      Biomarker b) -> DescriptorScalars& {
    return scalars[(static_cast<std::size_t>(a) * columns.size() + col) * 2 +
                   static_cast<std::size_t>(b)];
  };
  for (const auto& pid : report.patient_ids)
    for (Session session : {Session::Pre, Session::Post}) {
      const FeatureMatrix& m = matrices.at({pid, static_cast<int>(session)});
      for (Action action : {Action::Squat, Action::SitToStand}) {
        std::vector<Eigen::Index> rows = action_rows(m, action);
        for (std::size_t col = 0; col < columns.size(); ++col) {
          ScalarSeries s;
          s.dt = dt_w;
          s.values.reserve(rows.size());
          for (Eigen::Index r : rows)
            s.values.push_back(m.values(r, static_cast<Eigen::Index>(col)));
          for (Biomarker b : {Biomarker::Impulse, Biomarker::Smoothness}) {
            DescriptorScalars& slot = slot_of(action, col, b);
            if (slot.annotation) continue;
            try {
              double v = b == Biomarker::Impulse
                             ? angular_impulse(s, cfg.impulse_integrand).value
                             : smoothness(s).value;
              slot.by_session[static_cast<int>(session)].push_back(v);
            } catch (const Error& e) {
              slot.annotation = error_code_name(e.code());
            }
          }
        }
      }
    }

  for (Action action : {Action::Squat, Action::SitToStand}) {
    std::vector<DescriptorTest> tests;
    for (std::size_t col = 0; col < columns.size(); ++col)
      for (Biomarker b : {Biomarker::Impulse, Biomarker::Smoothness}) {
        DescriptorScalars& slot = slot_of(action, col, b);
        DescriptorTest t;
        t.key.feature = columns[col];
        t.key.biomarker = b;
        t.n = report.patient_ids.size();
        if (slot.annotation) {
          t.annotation = slot.annotation;
        } else {
          const auto& pre = slot.by_session[static_cast<int>(Session::Pre)];
          const auto& post = slot.by_session[static_cast<int>(Session::Post)];
          try {
            // Arguments swapped so the differences are pre - post and a
            // positive t means the descriptor went down.
            t.result = paired_t_test(post, pre, cfg.tails);
          } catch (const Error& e) {
            t.annotation = error_code_name(e.code());
          }
          try {
            BlandAltmanRow row;
            row.action = action;
            row.key = t.key;
            row.summary = bland_altman(pre, post, cfg.ba_multiplier);
            report.bland_altman.push_back(std::move(row));
          } catch (const Error&) {
            // Too few pairs for limits; the t-test annotation already
            // records the problem.
          }
        }
        tests.push_back(std::move(t));
      }
    report.tests.emplace(action, std::move(tests));
  }

  // With a second pose source, regress the reference windows onto it.
  if (sources.size() > 1) {
    std::string other;
    for (const auto& s : sources)
      if (s != analysis) other = s;
    std::map<std::pair<int, std::size_t>, std::pair<std::vector<double>, std::vector<double>>>
        pairs;
    for (const auto& pid : report.patient_ids)
      for (Session session : {Session::Pre, Session::Post}) {
        const FeatureMatrix& ref = matrices.at({pid, static_cast<int>(session)});
        FeatureMatrix oth = patient_features(cfg, series, pid, session, other);
        for (Action action : {Action::Squat, Action::SitToStand}) {
          std::vector<Eigen::Index> ref_rows = action_rows(ref, action);
          std::vector<Eigen::Index> oth_rows = action_rows(oth, action);
          std::size_t n = std::min(ref_rows.size(), oth_rows.size());
          for (std::size_t col = 0; col < columns.size(); ++col) {
            auto& acc = pairs[{static_cast<int>(action), col}];
            for (std::size_t i = 0; i < n; ++i) {
              acc.first.push_back(
                  oth.values(oth_rows[i], static_cast<Eigen::Index>(col)));
              acc.second.push_back(
                  ref.values(ref_rows[i], static_cast<Eigen::Index>(col)));
            }
          }
        }
      }
    for (Action action : {Action::Squat, Action::SitToStand})
      for (std::size_t col = 0; col < columns.size(); ++col) {
        const auto& acc = pairs.at({static_cast<int>(action), col});
        CalibrationRow row;
        row.action = action;
        row.feature = columns[col];
        row.model = fit_calibration(acc.first, acc.second);
        row.correlation = correlation(acc.first, acc.second);
        row.n = acc.first.size();
        report.calibrations.push_back(std::move(row));
      }
  }

  write_report_bundle(report, cfg.output_dir);
  return report;
}

namespace {

std::vector<std::pair<int, std::string>> ordered_counts(
    const BiomarkerHistogram& hist) {
  std::vector<std::pair<int, std::string>> ordered;
  for (const auto& [name, count] : hist.counts) ordered.push_back({-count, name});
  std::sort(ordered.begin(), ordered.end());
  return ordered;
}

std::string ttest_csv(const std::vector<DescriptorTest>& tests) {
  std::string csv = "biomarker,descriptor,n,t,p_one,p_two,significant,error\n";
  for (const auto& t : tests) {
    csv += biomarker_name(t.key.biomarker);
    csv += "," + t.key.feature + "," + std::to_string(t.n);
    if (t.result) {
      const PairedTestResult& r = *t.result;
      double df = static_cast<double>(r.df);
      double p_one = 1.0 - t_cdf(r.t, df);
      double p_two = 2.0 * (1.0 - t_cdf(std::fabs(r.t), df));
      csv += "," + fmt_g(r.t) + "," + fmt_g(p_one) + "," + fmt_g(p_two);
      csv += r.significant ? ",1" : ",0";
      csv += ",";
    } else {
      csv += ",,,,,";
      csv += t.annotation ? *t.annotation : "";
    }
    csv += "\n";
  }
  return csv;
}

std::string histogram_csv(const BiomarkerHistogram& hist) {
  std::string csv = "feature,count\n";
  for (const auto& [negcount, name] : ordered_counts(hist))
    csv += name + "," + std::to_string(-negcount) + "\n";
  return csv;
}

std::string histogram_svg(const BiomarkerHistogram& hist) {
  auto ordered = ordered_counts(hist);
  int max_count = 1;
  for (const auto& [negcount, name] : ordered)
    max_count = std::max(max_count, -negcount);
  const int bar_h = 18, gap = 6, label_w = 260, bar_max = 320, pad = 10;
  int height = pad * 2 + static_cast<int>(ordered.size()) * (bar_h + gap);
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(label_w + bar_max + 60) + "\" height=\"" +
                    std::to_string(height) + "\">\n";
  int y = pad;
  for (const auto& [negcount, name] : ordered) {
    int w = bar_max * (-negcount) / max_count;
    svg += "  <text x=\"4\" y=\"" + std::to_string(y + bar_h - 5) +
           "\" font-family=\"monospace\" font-size=\"12\">" + name + "</text>\n";
    svg += "  <rect x=\"" + std::to_string(label_w) + "\" y=\"" +
           std::to_string(y) + "\" width=\"" + std::to_string(w) +
           "\" height=\"" + std::to_string(bar_h) + "\" fill=\"#4878a8\"/>\n";
    svg += "  <text x=\"" + std::to_string(label_w + w + 6) + "\" y=\"" +
           std::to_string(y + bar_h - 5) +
           "\" font-family=\"monospace\" font-size=\"12\">" +
           std::to_string(-negcount) + "</text>\n";
    y += bar_h + gap;
  }
  svg += "</svg>\n";
  return svg;
}

std::string rankings_csv(const std::vector<PatientRanking>& rankings) {
  std::string csv = "patient_id,action,rank,feature,score\n";
  for (const auto& pr : rankings) {
    std::size_t rank = 1;
    for (const auto& entry : pr.ranking.entries) {
      csv += pr.patient_id + "," + action_name(pr.action) + "," +
             std::to_string(rank++) + "," + entry.feature + "," +
             fmt_g(entry.score) + "\n";
    }
  }
  return csv;
}

std::string pooled_rankings_csv(const std::vector<ImportanceRanking>& rankings) {
  std::string csv = "patient_id,sessions,rank,feature,score\n";
  for (const auto& r : rankings) {
    std::size_t rank = 1;
    for (const auto& entry : r.entries) {
      csv += r.patient_id + "," + session_scope_name(r.sessions) + "," +
             std::to_string(rank++) + "," + entry.feature + "," +
             fmt_g(entry.score) + "\n";
    }
  }
  return csv;
}

std::string calibration_csv(const AnalysisReport& report, Action action) {
  std::string csv = "feature,slope,intercept,rmse_before,rmse_after,r,p,n\n";
  for (const auto& row : report.calibrations) {
    if (row.action != action) continue;
    csv += row.feature + "," + fmt_g(row.model.slope) + "," +
           fmt_g(row.model.intercept) + "," + fmt_g(row.model.rmse_before) +
           "," + fmt_g(row.model.rmse_after) + "," + fmt_g(row.correlation.r) +
           "," + fmt_g(row.correlation.p) + "," + std::to_string(row.n) + "\n";
  }
  return csv;
}

std::string bland_altman_csv(const BlandAltmanRow& row) {
  const BlandAltmanSummary& s = row.summary;
  std::string csv = "pair_mean,pair_diff\n";
  for (std::size_t i = 0; i < s.pair_means.size(); ++i)
    csv += fmt_g(s.pair_means[i]) + "," + fmt_g(s.pair_diffs[i]) + "\n";
  csv += "mean_diff,sd_diff,lower,upper,multiplier\n";
  csv += fmt_g(s.mean_diff) + "," + fmt_g(s.sd_diff) + "," +
         fmt_g(s.lower_limit) + "," + fmt_g(s.upper_limit) + "," +
         fmt_g(s.multiplier) + "\n";
  csv += "coverage," + fmt_g(s.coverage) + "\n";
  return csv;
}

std::string provenance_json(const AnalysisReport& report) {
  json p;
  p["analysis_source"] = report.analysis_source;
  p["config"] = json::parse(report.config.to_json());
  p["config_digest"] = digest_hex(report.config_digest);
  p["input_files"] = report.input_files;
  p["patient_ids"] = report.patient_ids;
  return p.dump(2) + "\n";
}

}  // namespace

std::string render_report(const AnalysisReport& report) {
  std::string out;
  char line[256];

  out += "kinemark analysis report\n";
  out += "========================\n\n";
  std::snprintf(line, sizeof(line), "patients:    %zu\n",
                report.patient_ids.size());
  out += line;
  std::snprintf(line, sizeof(line), "recordings:  %zu\n",
                report.input_files.size());
  out += line;
  out += "source:      " + report.analysis_source + "\n";
  out += "config:      " + digest_hex(report.config_digest) + "\n";

  for (const auto& [action, tests] : report.tests) {
    out += "\n== ";
    out += action_name(action);
    out += " ==\n\n";
    std::snprintf(line, sizeof(line), "%-34s %-11s %4s %10s %10s\n",
                  "descriptor", "biomarker", "n", "t", "p");
    out += line;
    for (const auto& t : tests) {
      if (t.result) {
        std::snprintf(line, sizeof(line), "%-34s %-11s %4zu %10.4f %10.4f%s\n",
                      t.key.feature.c_str(), biomarker_name(t.key.biomarker),
                      t.n, t.result->t, t.result->p,
                      t.result->significant ? " *" : "");
      } else {
        std::snprintf(line, sizeof(line), "%-34s %-11s %4zu    n/a (%s)\n",
                      t.key.feature.c_str(), biomarker_name(t.key.biomarker),
                      t.n, t.annotation ? t.annotation->c_str() : "");
      }
      out += line;
    }
    auto hist = report.histograms.find(action);
    if (hist != report.histograms.end()) {
      out += "\ntop features (";
      out += session_scope_name(report.config.histogram_sessions);
      out += " scope, top ";
      out += std::to_string(report.config.top_k);
      out += " per patient):\n";
      for (const auto& [negcount, name] : ordered_counts(hist->second)) {
        std::snprintf(line, sizeof(line), "  %-34s %d\n", name.c_str(),
                      -negcount);
        out += line;
      }
    }
  }

  if (!report.calibrations.empty()) {
    out += "\n== calibration onto ";
    out += report.analysis_source;
    out += " ==\n\n";
    for (const auto& row : report.calibrations) {
      std::snprintf(line, sizeof(line),
                    "%-13s %-34s slope %9.6f intercept %10.6f rmse %8.4f -> %8.4g (n %zu)\n",
                    action_name(row.action), row.feature.c_str(),
                    row.model.slope, row.model.intercept, row.model.rmse_before,
                    row.model.rmse_after, row.n);
      out += line;
    }
  }

  out += "\ninput files:\n";
  for (const auto& f : report.input_files) out += "  " + f + "\n";
  return out;
}

void write_report_bundle(const AnalysisReport& report, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  write_text_file(out_dir / "report.txt", render_report(report));
  write_text_file(out_dir / "provenance.json", provenance_json(report));

  for (const auto& [action, tests] : report.tests)
    write_text_file(out_dir / ("ttest_" + std::string(action_name(action)) + ".csv"),
                    ttest_csv(tests));
  for (const auto& [action, hist] : report.histograms) {
    write_text_file(
        out_dir / ("histogram_" + std::string(action_name(action)) + ".csv"),
        histogram_csv(hist));
    if (report.config.emit_svg)
      write_text_file(
          out_dir / ("histogram_" + std::string(action_name(action)) + ".svg"),
          histogram_svg(hist));
  }
  write_text_file(out_dir / "rankings.csv", rankings_csv(report.rankings));
  write_text_file(out_dir / "pooled_rankings.csv",
                  pooled_rankings_csv(report.pooled_rankings));
  if (!report.calibrations.empty())
    for (Action action : {Action::Squat, Action::SitToStand})
      write_text_file(
          out_dir / ("calibration_" + std::string(action_name(action)) + ".csv"),
          calibration_csv(report, action));
  for (const auto& row : report.bland_altman)
    write_text_file(out_dir / ("bland_altman_" +
                               std::string(action_name(row.action)) + "_" +
                               row.key.feature + "_" +
                               biomarker_name(row.key.biomarker) + ".csv"),
                    bland_altman_csv(row));
}

}  // namespace kinemark
