// Command-line front end: `cluster run`, `cluster elbow`, `cluster synth`.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ies/report.hpp"
#include "ies/synthetic.hpp"

namespace {

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ies::InvalidDataError("cannot write '" + path + "'");
  out << text;
}

struct InputOptions {
  std::string input;
  std::string label_col;
  std::vector<std::string> ignore_cols;
  bool no_header = false;

  ies::Dataset load() const {
    ies::CsvOptions csv;
    if (!label_col.empty()) csv.label_column = label_col;
    csv.has_header = !no_header;
    csv.ignore_columns = ignore_cols;
    return ies::load_dataset(input, csv);
  }
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--input", in.input, "CSV file, one observation per row")->required();
  cmd->add_option("--label-col", in.label_col, "ground-truth label column (name or 0-based index)");
  cmd->add_option("--ignore-col", in.ignore_cols, "column to drop before clustering (repeatable)");
  cmd->add_flag("--no-header", in.no_header, "first line is data, not column names");
}

void add_model_options(CLI::App* cmd, ies::RunConfig& cfg) {
  cmd->add_option("--sigma", cfg.sigma_override, "fixed global sigma^2 (skips PCA estimation)");
  cmd->add_option("--variance-threshold", cfg.variance_threshold,
                  "explained-variance fraction for PCA axis selection")
      ->capture_default_str();
  cmd->add_option("--distance-exponent", cfg.distance_exponent,
                  "power of the distance in the Gaussian kernel (1 or 2)")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.master_seed, "master seed")->capture_default_str();
  cmd->add_flag("--parallel", cfg.parallel, "use several threads; output is unchanged");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterative eigengap spectral clustering"};
  app.require_subcommand(1);

  ies::RunConfig cfg;
  InputOptions in;
  std::string output = "-";
  std::string elbow_space = "embedding";

  auto* run = app.add_subcommand("run", "cluster a dataset and write a JSON report");
  add_input_options(run, in);
  add_model_options(run, cfg);
  run->add_option("--mode", cfg.mode,
                  "ies-global | ies-local | els | njw | legacy-eigengap | elbow")
      ->capture_default_str();
  run->add_option("--k", cfg.k_override, "cluster count (njw) or largest k (elbow)");
  run->add_option("--knn", cfg.knn_k, "neighbour rank for local scaling")->capture_default_str();
  run->add_option("--search-fraction", cfg.search_fraction,
                  "fraction of the spectrum searched for the eigengap")
      ->capture_default_str();
  run->add_option("--min-node-size", cfg.min_node_size, "smallest node that may be split")
      ->capture_default_str();
  run->add_option("--depth-cap", cfg.depth_cap, "maximum tree depth")->capture_default_str();
  run->add_option("--k-min", cfg.k_min, "smallest k for elbow mode");
  run->add_option("--k-max", cfg.k_max, "largest k for elbow mode");
  run->add_option("--elbow-space", elbow_space, "embedding | raw")->capture_default_str();
  run->add_option("--output", output, "output path, '-' for stdout")->capture_default_str();

  auto* elbow = app.add_subcommand("elbow", "SSE curve over a range of k, written as CSV");
  add_input_options(elbow, in);
  add_model_options(elbow, cfg);
  elbow->add_option("--k-min", cfg.k_min, "smallest k")->required();
  elbow->add_option("--k-max", cfg.k_max, "largest k")->required();
  elbow->add_option("--elbow-space", elbow_space, "embedding | raw")->capture_default_str();
  elbow->add_option("--output", output, "output path, '-' for stdout")->capture_default_str();

  std::string spec_path;
  auto* synth = app.add_subcommand("synth", "sample a labelled synthetic dataset");
  synth->add_option("--spec", spec_path, "JSON generator spec")->required();
  synth->add_option("--output", output, "output path, '-' for stdout")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (elbow_space == "embedding") {
      cfg.elbow_space = ies::ElbowSpace::kEmbedding;
    } else if (elbow_space == "raw") {
      cfg.elbow_space = ies::ElbowSpace::kRaw;
    } else {
      throw ies::ConfigError("--elbow-space must be 'embedding' or 'raw'");
    }

    if (*synth) {
      std::ifstream spec_in(spec_path);
      if (!spec_in) throw ies::InvalidDataError("cannot open spec '" + spec_path + "'");
      nlohmann::json spec_json;
      try {
        spec_in >> spec_json;
      } catch (const nlohmann::json::exception& e) {
        throw ies::ConfigError(std::string("invalid spec: ") + e.what());
      }
      ies::SyntheticSpec spec;
      try {
        spec = spec_json.get<ies::SyntheticSpec>();
      } catch (const nlohmann::json::exception& e) {
        throw ies::ConfigError(std::string("invalid spec: ") + e.what());
      }
      std::ostringstream csv;
      ies::write_dataset(csv, ies::generate_synthetic(spec));
      write_text(output, csv.str());
      return 0;
    }

    if (*elbow) cfg.mode = "elbow";
    cfg.validate();
    const ies::Dataset dataset = in.load();
    if (cfg.mode == "elbow") {
      write_text(output, ies::elbow_csv(ies::run_elbow(cfg, dataset)));
      return 0;
    }
    const ies::Report report = ies::run(cfg, dataset);
    write_text(output, nlohmann::json(report).dump(2) + "\n");
    return 0;
  } catch (const ies::Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << '\n';
    return ies::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
