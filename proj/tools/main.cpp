#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "kinemark/error.hpp"
#include "kinemark/pipeline.hpp"
#include "kinemark/synth.hpp"

namespace {

int run_synth(const std::string& cohort, const kinemark::CohortSpec& spec,
              const std::string& out) {
  std::vector<kinemark::RawRecording> recs;
  if (cohort == "pca")
    recs = kinemark::generate_pca_cohort(spec);
  else if (cohort == "ttest")
    recs = kinemark::generate_ttest_cohort(spec);
  else if (cohort == "paired")
    recs = kinemark::generate_paired_source_cohort(spec);
  kinemark::write_cohort(recs, out);
  std::printf("wrote %zu recordings to %s\n", recs.size(), out.c_str());
  return 0;
}

int run_report(const kinemark::PipelineConfig& cfg) {
  kinemark::AnalysisReport report = kinemark::run_pipeline(cfg);
  std::printf("%s", kinemark::render_report(report).c_str());
  std::printf("\nbundle written to %s\n", cfg.output_dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"camera-based motion biomarker toolkit"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "generate a synthetic cohort");
  std::string cohort = "ttest";
  kinemark::CohortSpec spec;
  std::string synth_out;
  synth->add_option("--cohort", cohort, "cohort kind")
      ->check(CLI::IsMember({"pca", "ttest", "paired"}));
  synth->add_option("--patients", spec.patients, "number of patients");
  synth->add_option("--duration", spec.duration_s, "recording length, seconds");
  synth->add_option("--seed", spec.seed, "generator seed");
  synth->add_option("--repeats", spec.repeats,
                    "recordings per patient, session and action");
  synth->add_option("--out", synth_out, "output directory")->required();

  auto* report = app.add_subcommand("report", "run the analysis pipeline");
  std::string input_dir;
  std::string output_dir;
  std::string config_path;
  std::string source;
  bool emit_svg = false;
  report->add_option("--input", input_dir, "directory of .jsonl recordings")
      ->required();
  report->add_option("--out", output_dir, "report bundle directory")->required();
  report->add_option("--config", config_path, "pipeline config JSON file");
  report->add_option("--source", source, "analysis source override");
  report->add_flag("--emit-svg", emit_svg, "also write histogram SVGs");

  auto* config = app.add_subcommand("config", "print the default config JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (synth->parsed()) return run_synth(cohort, spec, synth_out);
    if (report->parsed()) {
      kinemark::PipelineConfig cfg;
      if (!config_path.empty())
        cfg = kinemark::PipelineConfig::from_json_file(config_path);
      cfg.input_dir = input_dir;
      cfg.output_dir = output_dir;
      if (!source.empty()) cfg.analysis_source = source;
      if (emit_svg) cfg.emit_svg = true;
      return run_report(cfg);
    }
    if (config->parsed()) {
      std::printf("%s\n", kinemark::PipelineConfig().to_json().c_str());
      return 0;
    }
  } catch (const kinemark::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.is_io() ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
