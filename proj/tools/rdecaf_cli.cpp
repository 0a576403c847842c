// rdecaf command-line front end.

#include "rdecaf/classify/svm.hpp"
#include "rdecaf/error.hpp"
#include "rdecaf/pipeline/experiment.hpp"
#include "rdecaf/pipeline/report.hpp"
#include "rdecaf/pipeline/synthetic.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace rdecaf;

std::vector<double> parse_targets(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw ConfigError("bad CEV target '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

// "none", "balanced" or "w0,w1".
void apply_class_weights(const std::string& text, TrainOptions& options, const Labels& labels) {
  if (text.empty() || text == "none") return;
  if (text == "balanced") {
    options.class_weights = balanced_class_weights(labels);
    return;
  }
  const auto values = parse_targets(text);
  if (values.size() != 2) throw ConfigError("--class-weights expects none, balanced or w0,w1");
  options.class_weights = {values[0], values[1]};
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return 2;
    case ErrorKind::kData: return 3;
    case ErrorKind::kNumerical: return 4;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimensionality reduction and SVM classification of deep activation features"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string report_path;
  std::string targets_text;

  auto* cev = app.add_subcommand("cev", "Write the CEV curve (k,cev) of the configured reduction");
  cev->add_option("--config", config_path, "Experiment config (JSON)")->required();
  cev->add_option("--out", out_path, "Output CSV (stdout when omitted)");

  auto* experiment = app.add_subcommand("experiment", "Run an experiment and write its report");
  experiment->add_option("--config", config_path, "Experiment config (JSON)")->required();
  experiment->add_option("--report", report_path, "Report path (overrides output.report)");

  auto* sweep = app.add_subcommand("sweep-cev", "Paired sweep over CEV targets");
  sweep->add_option("--config", config_path, "Experiment config (JSON)")->required();
  sweep->add_option("--targets", targets_text, "Comma-separated targets, e.g. 0.15,0.5,1.0")
      ->required();
  sweep->add_option("--out", out_path, "Output CSV (stdout when omitted)");

  std::string out_format = "rdcf";
  auto* reduce = app.add_subcommand("reduce", "Write the reduced feature file");
  reduce->add_option("--config", config_path, "Experiment config (JSON)")->required();
  reduce->add_option("--out", out_path, "Output feature file")->required();
  reduce->add_option("--format", out_format, "csv or rdcf");

  std::string input_path;
  std::string input_format = "rdcf";
  std::string model_path;
  double c = 5.0;
  std::string kernel_name = "rbf";
  std::string gamma_text = "scale";
  std::string weights_text = "none";
  auto* train = app.add_subcommand("train", "Train an SVM on a feature file");
  train->add_option("--input", input_path, "Feature file")->required();
  train->add_option("--format", input_format, "csv or rdcf");
  train->add_option("--model", model_path, "Output model file")->required();
  train->add_option("--C", c, "Penalty C");
  train->add_option("--kernel", kernel_name, "rbf or linear");
  train->add_option("--gamma", gamma_text, "RBF gamma or 'scale'");
  train->add_option("--class-weights", weights_text, "none, balanced or w0,w1");

  auto* predict = app.add_subcommand("predict", "Predict labels with a saved SVM");
  predict->add_option("--input", input_path, "Feature file")->required();
  predict->add_option("--format", input_format, "csv or rdcf");
  predict->add_option("--model", model_path, "Model file")->required();
  predict->add_option("--out", out_path, "Output CSV (stdout when omitted)");

  SyntheticSpec synth_spec;
  auto* synth = app.add_subcommand("synth", "Write the synthetic fixture");
  synth->add_option("--seed", synth_spec.seed, "Random seed");
  synth->add_option("--n", synth_spec.n, "Samples");
  synth->add_option("--d-total", synth_spec.d_total, "Total dimensions");
  synth->add_option("--d-informative", synth_spec.d_informative, "Informative dimensions");
  synth->add_option("--noise-scale", synth_spec.noise_scale, "Noise scale");
  synth->add_option("--out", out_path, "Output feature file")->required();
  synth->add_option("--format", out_format, "csv or rdcf");

  CLI11_PARSE(app, argc, argv);

  auto emit = [&](const std::string& text) {
    if (out_path.empty()) {
      std::cout << text;
    } else {
      write_text_file(out_path, text);
    }
  };

  try {
    if (cev->parsed()) {
      emit(cev_csv(emit_cev_curve(load_config(config_path))));
    } else if (experiment->parsed()) {
      const ExperimentConfig config = load_config(config_path);
      const ExperimentReport report = run_experiment(config);
      const std::string path = report_path.empty() ? config.output.report : report_path;
      if (path.empty()) {
        std::cout << report_text(report);
      } else {
        write_report(report, path, config.output.tables_prefix);
      }
      std::cerr << "accuracy " << percent_string(report.summary.mean.accuracy) << "±"
                << percent_string(report.summary.stddev.accuracy) << " over "
                << report.summary.count << " splits\n";
    } else if (sweep->parsed()) {
      emit(sweep_csv(sweep_cev(load_config(config_path), parse_targets(targets_text))));
    } else if (reduce->parsed()) {
      const ExperimentConfig config = load_config(config_path);
      const LabeledFeatureSet reduced = reduce_dataset(config, load_experiment_data(config));
      save_feature_file(reduced, out_path, parse_file_format(out_format));
    } else if (train->parsed()) {
      const LabeledFeatureSet data = load_feature_file(input_path, parse_file_format(input_format));
      KernelParams kernel;
      kernel.kind = parse_kernel_kind(kernel_name);
      if (gamma_text != "scale") kernel.gamma = parse_targets(gamma_text).at(0);
      TrainOptions options;
      options.c = c;
      apply_class_weights(weights_text, options, data.labels);
      const SvmModel model = svm_train(data.features, data.labels, kernel, options);
      save_svm_model(model, model_path);
      std::cerr << model.support_indices.size() << " support vectors, gamma "
                << model.kernel.gamma << (model.stats.converged ? "" : " (not converged)") << '\n';
    } else if (predict->parsed()) {
      const LabeledFeatureSet data = load_feature_file(input_path, parse_file_format(input_format));
      const SvmModel model = load_svm_model(model_path);
      const Vector decision = svm_decision(model, data.features);
      std::ostringstream out;
      out.precision(17);
      out << "sample_id,label,predicted,decision\n";
      for (std::size_t i = 0; i < data.size(); ++i) {
        const double f = decision(static_cast<Eigen::Index>(i));
        out << data.sample_ids[i] << ',' << data.labels[i] << ','
            << (f >= 0.0 ? kMalignant : kBenign) << ',' << f << '\n';
      }
      emit(out.str());
    } else if (synth->parsed()) {
      save_feature_file(make_synthetic_fixture(synth_spec), out_path,
                        parse_file_format(out_format));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
