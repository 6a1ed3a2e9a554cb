// Command-line interface: repair a PNG against a grayscale mask, compare
// both algorithm variants on the same inputs, or score two images.
//
// Exit codes: 0 success, 1 bad input (unreadable file, dimension
// mismatch, invalid flag value), 2 unprocessable job (mask marks every
// pixel Missing).

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "inpaint/inpaint.hpp"

namespace {

struct JobSpec {
  std::string input;
  std::string mask;
  std::string output;
  std::string reference;
  std::string report;
  std::string variant = "improved";
  int patch_side = 9;
  double m = 0.0095;
  int search_radius = 60;
  std::string fill_mode = "patch";
  std::string normalize_confidence;  // empty = per-variant default
  double epsilon = 0.001;
};

inpaint::InpaintConfig make_config(const JobSpec& spec, const std::string& variant) {
  inpaint::InpaintConfig cfg;
  cfg.variant = variant == "classic" ? inpaint::Variant::Classic : inpaint::Variant::Improved;
  cfg.patch_side = spec.patch_side;
  cfg.fill_mode =
      spec.fill_mode == "center" ? inpaint::FillMode::CenterPixel : inpaint::FillMode::Patch;
  cfg.match.m = spec.m;
  cfg.match.search_radius = spec.search_radius;
  cfg.epsilon = spec.epsilon;
  if (!spec.normalize_confidence.empty())
    cfg.normalize_confidence = spec.normalize_confidence == "on";
  cfg.validate();
  return cfg;
}

std::string format_psnr(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

constexpr const char* kCsvHeader =
    "input,variant,patch_side,m,search_radius,fill_mode,normalize_confidence,"
    "iterations,duration_ms,psnr_db,ssim";

std::string csv_row(const JobSpec& spec, const std::string& variant,
                    const inpaint::InpaintConfig& cfg, const inpaint::RepairTrace& trace,
                    const inpaint::MetricReport& report) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%s,%s,%d,%s,%d,%s,%s,%zu,%" PRId64 ",%s,%.6f",
                spec.input.c_str(), variant.c_str(), cfg.patch_side,
                format_double(cfg.match.m).c_str(), cfg.match.search_radius,
                cfg.fill_mode == inpaint::FillMode::Patch ? "patch" : "center",
                cfg.resolved_normalize() ? "on" : "off", trace.iterations,
                static_cast<std::int64_t>(std::llround(trace.duration_ms)),
                format_psnr(report.psnr_db).c_str(), report.ssim);
  return buf;
}

void append_report_row(const std::string& path, const std::string& row) {
  namespace fs = std::filesystem;
  const bool need_header = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open report file '" + path + "'");
  if (need_header) out << kCsvHeader << "\n";
  out << row << "\n";
}

std::string variant_output_path(const std::string& output, const std::string& variant) {
  namespace fs = std::filesystem;
  fs::path p(output);
  fs::path stem = p.stem();
  stem += "-" + variant;
  stem += p.extension();
  return (p.parent_path() / stem).string();
}

// Runs one variant end to end; returns the metric report when a reference
// was supplied.
std::optional<inpaint::MetricReport> run_variant(const JobSpec& spec, const std::string& variant,
                                                 const std::string& output_path,
                                                 const inpaint::Image& input,
                                                 const inpaint::Mask& mask,
                                                 const std::optional<inpaint::Image>& reference) {
  const inpaint::InpaintConfig cfg = make_config(spec, variant);
  const inpaint::InpaintResult result = inpaint::inpaint(input, mask, cfg);
  inpaint::write_image_png(output_path, result.image);
  std::printf("%s: variant=%s iterations=%zu duration_ms=%" PRId64 "\n", output_path.c_str(),
              variant.c_str(), result.trace.iterations,
              static_cast<std::int64_t>(std::llround(result.trace.duration_ms)));

  if (!reference) return std::nullopt;
  const inpaint::MetricReport report = inpaint::measure(result.image, *reference);
  std::printf("%s: psnr_db=%s ssim=%.6f\n", output_path.c_str(),
              format_psnr(report.psnr_db).c_str(), report.ssim);
  if (!spec.report.empty())
    append_report_row(spec.report, csv_row(spec, variant, cfg, result.trace, report));
  return report;
}

int cmd_inpaint(const JobSpec& spec) {
  const inpaint::Image input = inpaint::read_image_png(spec.input);
  const inpaint::Mask mask = inpaint::read_mask_png(spec.mask);
  std::optional<inpaint::Image> reference;
  if (!spec.reference.empty()) reference = inpaint::read_image_png(spec.reference);
  run_variant(spec, spec.variant, spec.output, input, mask, reference);
  return 0;
}

int cmd_compare(const JobSpec& spec) {
  const inpaint::Image input = inpaint::read_image_png(spec.input);
  const inpaint::Mask mask = inpaint::read_mask_png(spec.mask);
  const inpaint::Image reference = inpaint::read_image_png(spec.reference);
  for (const std::string variant : {"classic", "improved"})
    run_variant(spec, variant, variant_output_path(spec.output, variant), input, mask, reference);
  return 0;
}

int cmd_metrics(const std::string& a_path, const std::string& b_path) {
  const inpaint::Image a = inpaint::read_image_png(a_path);
  const inpaint::Image b = inpaint::read_image_png(b_path);
  const inpaint::MetricReport report = inpaint::measure(a, b);
  std::printf("%s,%.6f\n", format_psnr(report.psnr_db).c_str(), report.ssim);
  return 0;
}

void add_knob_flags(CLI::App* cmd, JobSpec& spec) {
  cmd->add_option("--variant", spec.variant, "Algorithm variant")
      ->check(CLI::IsMember({"classic", "improved"}));
  cmd->add_option("--patch-size", spec.patch_side, "Patch side in pixels (odd, >= 3)");
  cmd->add_option("--m", spec.m, "SSD weight of the distance-augmented match score");
  cmd->add_option("--search-radius", spec.search_radius,
                  "Candidate search radius in pixels (0 = global)");
  cmd->add_option("--fill-mode", spec.fill_mode, "Pixels copied per iteration")
      ->check(CLI::IsMember({"patch", "center"}));
  cmd->add_option("--normalize-confidence", spec.normalize_confidence,
                  "Divide confidence sums by the patch area")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--epsilon", spec.epsilon, "Additive data-term floor");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exemplar-based image inpainting"};
  app.require_subcommand(1);
  JobSpec spec;

  CLI::App* repair = app.add_subcommand("inpaint", "Repair the masked region of an image");
  repair->add_option("input", spec.input, "Input PNG (8-bit RGB)")->required();
  repair->add_option("mask", spec.mask, "Mask PNG (8-bit grayscale; >= 128 marks Missing)")
      ->required();
  repair->add_option("output", spec.output, "Output PNG path")->required();
  add_knob_flags(repair, spec);
  repair->add_option("--reference", spec.reference, "Ground-truth PNG for PSNR/SSIM");
  repair->add_option("--report", spec.report, "CSV report to append to");

  CLI::App* compare =
      app.add_subcommand("compare", "Run both variants on the same inputs and score them");
  compare->add_option("input", spec.input, "Input PNG (8-bit RGB)")->required();
  compare->add_option("mask", spec.mask, "Mask PNG (8-bit grayscale)")->required();
  compare->add_option("output", spec.output,
                      "Output PNG path; '-classic'/'-improved' is inserted before the extension")
      ->required();
  add_knob_flags(compare, spec);
  compare->add_option("--reference", spec.reference, "Ground-truth PNG for PSNR/SSIM")->required();
  compare->add_option("--report", spec.report, "CSV report to append to");

  std::string metrics_a, metrics_b;
  CLI::App* metrics = app.add_subcommand("metrics", "Print PSNR and SSIM of two images");
  metrics->add_option("a", metrics_a, "First PNG")->required();
  metrics->add_option("b", metrics_b, "Second PNG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (repair->parsed()) return cmd_inpaint(spec);
    if (compare->parsed()) return cmd_compare(spec);
    return cmd_metrics(metrics_a, metrics_b);
  } catch (const inpaint::UnprocessableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
