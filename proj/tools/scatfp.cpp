// scatfp: scattering-feature fingerprint identification pipeline.
//
//   scatfp extract  --manifest data/manifest.tsv --out run/
//   scatfp fit      --out run/
//   scatfp evaluate --out run/
//   scatfp sweep-k  --out run/ --k-grid 5,10,20,50
//   scatfp eer      --out run/
//   scatfp synth    --out data/            (synthetic ridge dataset)

#include <charconv>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "scatfp/errors.hpp"
#include "scatfp/pipeline.hpp"
#include "scatfp/synthetic.hpp"

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kIo = 2, kNumerical = 3 };

bool parse_resize(const std::string& text, int& width, int& height) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) return false;
  const char* b = text.data();
  const char* e = b + text.size();
  auto r1 = std::from_chars(b, b + x, width);
  auto r2 = std::from_chars(b + x + 1, e, height);
  return r1.ec == std::errc{} && r1.ptr == b + x && r2.ec == std::errc{} && r2.ptr == e && width > 0 &&
         height > 0;
}

}  // namespace

int main(int argc, char** argv) {
  scatfp::PipelineConfig config;
  std::string resize = "80x60";
  std::string format;
  int synth_subjects = 10;
  int synth_per_subject = 10;

  CLI::App app{"Scattering-transform fingerprint identification: extract, fit, evaluate"};
  app.set_config("--config", "", "Read options from a TOML/INI file (command-line flags take precedence)");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--manifest", config.manifest, "Dataset manifest: <path>\\t<subject>[\\t<train|test>] per line");
  app.add_option("--out", config.out_dir, "Working directory for features, models and reports")
      ->capture_default_str();
  app.add_option("--resize", resize, "Input geometry WxH")->capture_default_str();
  app.add_option("--scales", config.scales, "Number of wavelet scales J")->capture_default_str()->check(CLI::Range(1, 12));
  app.add_option("--orients", config.orientations, "Number of orientations L")
      ->capture_default_str()
      ->check(CLI::Range(1, 64));
  app.add_option("--layers", config.layers, "Scattering depth m")->capture_default_str()->check(CLI::Range(0, 12));
  app.add_option("--pca-k", config.pca_k, "Retained PCA components K (default 200, capped at the data rank)")
      ->check(CLI::PositiveNumber);
  app.add_option("--epsilon", config.epsilon, "Pick the smallest K retaining this variance fraction (overrides --pca-k)")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--svm-c", config.svm_c, "SVM penalty C")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", config.seed, "Seed for the half/half split and synthetic data")->capture_default_str();
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "svg", "both"}));
  app.add_flag("--standardize", config.standardize, "Z-score PCA projections before the SVM");
  app.add_option("--holdout", config.holdout, "Exclude the first N subjects (validation subjects)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--raw-distance", config.raw_distance, "Verification distances on raw features instead of PCA projections");
  app.add_option("--k-grid", config.k_grid, "Component counts for sweep-k")->delimiter(',');
  app.add_option("--dump-filters", config.dump_filters, "Write filter magnitudes as PGM into DIR during extract");
  app.add_option("--threads", config.threads, "Worker threads for extract (0 = all cores)")->capture_default_str();
  app.add_option("--subjects", synth_subjects, "synth: number of subjects")->capture_default_str();
  app.add_option("--per-subject", synth_per_subject, "synth: images per subject")->capture_default_str();

  auto* extract = app.add_subcommand("extract", "Scatter every manifest image and cache the features");
  auto* fit = app.add_subcommand("fit", "Fit PCA and the one-vs-all SVM on the training features");
  auto* evaluate = app.add_subcommand("evaluate", "Accuracy, FAR/FRR and EER on the test split");
  auto* sweep = app.add_subcommand("sweep-k", "Accuracy as a function of the number of PCA components");
  auto* eer = app.add_subcommand("eer", "Minimum-distance FAR/FRR curve and EER");
  auto* synth = app.add_subcommand("synth", "Generate a synthetic ridge-texture dataset into --out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  if (!parse_resize(resize, config.width, config.height)) {
    std::cerr << "error: --resize expects WxH, got '" << resize << "'\n";
    return kValidation;
  }
  if (format == "csv") config.format = scatfp::OutputFormat::kCsv;
  else if (format == "svg") config.format = scatfp::OutputFormat::kSvg;
  else if (format == "both") config.format = scatfp::OutputFormat::kBoth;

  try {
    if (extract->parsed()) {
      scatfp::cmd_extract(config, std::cout);
    } else if (fit->parsed()) {
      scatfp::cmd_fit(config, std::cout);
    } else if (evaluate->parsed()) {
      scatfp::cmd_evaluate(config, std::cout);
    } else if (sweep->parsed()) {
      scatfp::cmd_sweep_k(config, std::cout);
    } else if (eer->parsed()) {
      scatfp::cmd_eer(config, std::cout);
    } else if (synth->parsed()) {
      const auto manifest = scatfp::write_synthetic_dataset(config.out_dir, synth_subjects, synth_per_subject,
                                                            config.width, config.height, config.seed);
      std::cout << "wrote " << synth_subjects * synth_per_subject << " images and " << manifest.string() << '\n';
    }
  } catch (const scatfp::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const scatfp::TrainingError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const scatfp::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const scatfp::ArgumentError& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
