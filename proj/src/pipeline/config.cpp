#include "rdecaf/pipeline/config.hpp"

#include "rdecaf/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string_view>

namespace rdecaf {
namespace {

using json = nlohmann::json;

void expect_keys(const json& obj, std::string_view where,
                 std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ConfigError("unknown key '" + item.key() + "' in " + std::string(where));
    }
  }
}

template <typename T>
T get_as(const json& obj, const char* key, std::string_view where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(where) + "." + key + " has the wrong type");
  }
}

template <typename T>
void read_opt(const json& obj, const char* key, std::string_view where, T& out) {
  if (obj.contains(key) && !obj.at(key).is_null()) out = get_as<T>(obj, key, where);
}

// "scale" / null -> nullopt, number -> gamma.
std::optional<double> parse_gamma(const json& value, std::string_view where) {
  if (value.is_null() || (value.is_string() && value.get<std::string>() == "scale")) {
    return std::nullopt;
  }
  if (value.is_number()) return value.get<double>();
  throw ConfigError(std::string(where) + ": gamma must be \"scale\" or a number");
}

json gamma_to_json(const std::optional<double>& gamma) {
  return gamma ? json(*gamma) : json("scale");
}

ReductionMethod parse_method(const std::string& name) {
  if (name == "none") return ReductionMethod::kNone;
  if (name == "pca") return ReductionMethod::kPca;
  if (name == "svd") return ReductionMethod::kSvd;
  if (name == "lda") return ReductionMethod::kLda;
  if (name == "kpca") return ReductionMethod::kKpca;
  if (name == "pca_tsne") return ReductionMethod::kPcaTsne;
  throw ConfigError("unknown reduction method '" + name + "'");
}

FitScope parse_scope(const std::string& name) {
  if (name == "train_only") return FitScope::kTrainOnly;
  if (name == "all_data") return FitScope::kAllData;
  throw ConfigError("unknown fit_scope '" + name + "'");
}

TsneConfig parse_tsne(const json& obj) {
  expect_keys(obj, "reduction.tsne",
              {"output_dims", "perplexity", "iterations", "early_exaggeration",
               "exaggeration_iterations", "learning_rate", "initial_momentum", "final_momentum",
               "momentum_switch_iteration", "seed"});
  TsneConfig t;
  read_opt(obj, "output_dims", "reduction.tsne", t.output_dims);
  read_opt(obj, "perplexity", "reduction.tsne", t.perplexity);
  read_opt(obj, "iterations", "reduction.tsne", t.iterations);
  read_opt(obj, "early_exaggeration", "reduction.tsne", t.early_exaggeration);
  read_opt(obj, "exaggeration_iterations", "reduction.tsne", t.exaggeration_iterations);
  read_opt(obj, "learning_rate", "reduction.tsne", t.learning_rate);
  read_opt(obj, "initial_momentum", "reduction.tsne", t.initial_momentum);
  read_opt(obj, "final_momentum", "reduction.tsne", t.final_momentum);
  read_opt(obj, "momentum_switch_iteration", "reduction.tsne", t.momentum_switch_iteration);
  read_opt(obj, "seed", "reduction.tsne", t.seed);
  return t;
}

KernelParams parse_kernel_object(const json& obj, std::string_view where) {
  expect_keys(obj, where, {"kind", "gamma"});
  KernelParams k;
  if (obj.contains("kind")) k.kind = parse_kernel_kind(get_as<std::string>(obj, "kind", where));
  if (obj.contains("gamma")) k.gamma = parse_gamma(obj.at("gamma"), where);
  return k;
}

GridSearchSpec parse_grid(const json& obj) {
  constexpr std::string_view where = "classifier.grid_search";
  expect_keys(obj, where, {"kernels", "C", "gamma", "folds", "seed"});
  GridSearchSpec g;
  if (obj.contains("kernels")) {
    g.kernels.clear();
    for (const auto& name : get_as<std::vector<std::string>>(obj, "kernels", where)) {
      g.kernels.push_back(parse_kernel_kind(name));
    }
  }
  read_opt(obj, "C", where, g.c_values);
  if (obj.contains("gamma")) {
    if (!obj.at("gamma").is_array()) throw ConfigError("classifier.grid_search.gamma must be a list");
    g.gammas.clear();
    for (const auto& v : obj.at("gamma")) g.gammas.push_back(parse_gamma(v, where));
  }
  read_opt(obj, "folds", where, g.folds);
  read_opt(obj, "seed", where, g.seed);
  return g;
}

}  // namespace

const char* to_string(ReductionMethod method) noexcept {
  switch (method) {
    case ReductionMethod::kNone: return "none";
    case ReductionMethod::kPca: return "pca";
    case ReductionMethod::kSvd: return "svd";
    case ReductionMethod::kLda: return "lda";
    case ReductionMethod::kKpca: return "kpca";
    case ReductionMethod::kPcaTsne: return "pca_tsne";
  }
  return "none";
}

const char* to_string(FitScope scope) noexcept {
  return scope == FitScope::kTrainOnly ? "train_only" : "all_data";
}

void validate_config(const ExperimentConfig& config) {
  for (auto mag : config.magnifications) {
    if (!is_valid_magnification(mag)) {
      throw ConfigError("magnification filter contains " + std::to_string(mag));
    }
  }
  const ReductionConfig& r = config.reduction;
  if (r.method != ReductionMethod::kNone) {
    if (r.cev_target.has_value() == r.k.has_value()) {
      throw ConfigError("reduction needs exactly one of cev_target and k");
    }
    if (r.cev_target && !(*r.cev_target > 0.0 && *r.cev_target <= 1.0)) {
      throw ConfigError("cev_target must lie in (0, 1]");
    }
    if (r.k && *r.k < 1) throw ConfigError("reduction k must be at least 1");
    if (r.method == ReductionMethod::kLda && r.k && *r.k != 1) {
      throw ConfigError("binary LDA yields exactly one component (k = 1)");
    }
  }
  if (r.method == ReductionMethod::kPcaTsne &&
      r.tsne.output_dims != 2 && r.tsne.output_dims != 3) {
    throw ConfigError("t-SNE output_dims must be 2 or 3");
  }
  const ClassifierConfig& c = config.classifier;
  if (!(c.c > 0.0) || !std::isfinite(c.c)) throw ConfigError("classifier C must be positive");
  if (c.kernel.gamma && !(*c.kernel.gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (c.weight_mode == ClassWeightMode::kExplicit &&
      !(c.explicit_weights[0] > 0.0 && c.explicit_weights[1] > 0.0)) {
    throw ConfigError("class weights must be positive");
  }
  if (!(c.tolerance > 0.0)) throw ConfigError("classifier tolerance must be positive");
  if (c.grid_search) {
    const GridSearchSpec& g = *c.grid_search;
    if (g.kernels.empty() || g.c_values.empty() || g.gammas.empty()) {
      throw ConfigError("grid search needs non-empty kernel, C and gamma grids");
    }
    if (g.folds < 2) throw ConfigError("grid search needs at least 2 folds");
  }
  const SplitConfig& s = config.split;
  if (s.protocol == SplitProtocol::kRepeatedRandom) {
    if (!(s.ratio > 0.0 && s.ratio < 1.0)) throw ConfigError("split ratio must lie in (0, 1)");
    if (s.repeats < 1) throw ConfigError("split repeats must be at least 1");
  } else if (s.folds < 2) {
    throw ConfigError("stratified k-fold needs k >= 2");
  }
  if (config.threads < 1) throw ConfigError("threads must be at least 1");
}

ExperimentConfig config_from_json(const json& doc) {
  expect_keys(doc, "config",
              {"input", "magnifications", "scale", "reduction", "classifier", "split", "balance",
               "threads", "output"});
  ExperimentConfig cfg;

  if (doc.contains("input")) {
    const json& in = doc.at("input");
    expect_keys(in, "input", {"path", "format"});
    read_opt(in, "path", "input", cfg.input_path);
    if (in.contains("format")) {
      cfg.input_format = parse_file_format(get_as<std::string>(in, "format", "input"));
    }
  }
  read_opt(doc, "magnifications", "config", cfg.magnifications);
  read_opt(doc, "scale", "config", cfg.scale);
  read_opt(doc, "balance", "config", cfg.balance);
  read_opt(doc, "threads", "config", cfg.threads);

  if (doc.contains("reduction")) {
    const json& r = doc.at("reduction");
    expect_keys(r, "reduction",
                {"method", "cev_target", "k", "fit_scope", "rescale_reduced", "kernel", "tsne"});
    if (r.contains("method")) {
      cfg.reduction.method = parse_method(get_as<std::string>(r, "method", "reduction"));
    }
    if (r.contains("cev_target") && !r.at("cev_target").is_null()) {
      cfg.reduction.cev_target = get_as<double>(r, "cev_target", "reduction");
    }
    if (r.contains("k") && !r.at("k").is_null()) {
      cfg.reduction.k = get_as<std::size_t>(r, "k", "reduction");
    }
    if (r.contains("fit_scope")) {
      cfg.reduction.fit_scope = parse_scope(get_as<std::string>(r, "fit_scope", "reduction"));
    }
    read_opt(r, "rescale_reduced", "reduction", cfg.reduction.rescale_reduced);
    if (r.contains("kernel")) cfg.reduction.kpca_kernel = parse_kernel_object(r.at("kernel"), "reduction.kernel");
    if (r.contains("tsne")) cfg.reduction.tsne = parse_tsne(r.at("tsne"));
  }

  if (doc.contains("classifier")) {
    const json& c = doc.at("classifier");
    constexpr std::string_view where = "classifier";
    expect_keys(c, where,
                {"C", "kernel", "gamma", "class_weights", "tolerance", "max_iterations",
                 "grid_search"});
    read_opt(c, "C", where, cfg.classifier.c);
    if (c.contains("kernel")) {
      cfg.classifier.kernel.kind = parse_kernel_kind(get_as<std::string>(c, "kernel", where));
    }
    if (c.contains("gamma")) cfg.classifier.kernel.gamma = parse_gamma(c.at("gamma"), where);
    if (c.contains("class_weights")) {
      const json& w = c.at("class_weights");
      if (w.is_string() && w.get<std::string>() == "none") {
        cfg.classifier.weight_mode = ClassWeightMode::kNone;
      } else if (w.is_string() && w.get<std::string>() == "balanced") {
        cfg.classifier.weight_mode = ClassWeightMode::kBalanced;
      } else if (w.is_array() && w.size() == 2 && w[0].is_number() && w[1].is_number()) {
        cfg.classifier.weight_mode = ClassWeightMode::kExplicit;
        cfg.classifier.explicit_weights = {w[0].get<double>(), w[1].get<double>()};
      } else {
        throw ConfigError("classifier.class_weights must be \"none\", \"balanced\" or [w0, w1]");
      }
    }
    read_opt(c, "tolerance", where, cfg.classifier.tolerance);
    read_opt(c, "max_iterations", where, cfg.classifier.max_iterations);
    if (c.contains("grid_search") && !c.at("grid_search").is_null()) {
      cfg.classifier.grid_search = parse_grid(c.at("grid_search"));
    }
  }

  if (doc.contains("split")) {
    const json& s = doc.at("split");
    constexpr std::string_view where = "split";
    expect_keys(s, where, {"protocol", "ratio", "repeats", "stratified", "k", "seed"});
    if (s.contains("protocol")) {
      const auto name = get_as<std::string>(s, "protocol", where);
      if (name == "repeated_random") {
        cfg.split.protocol = SplitProtocol::kRepeatedRandom;
      } else if (name == "stratified_kfold") {
        cfg.split.protocol = SplitProtocol::kStratifiedKfold;
      } else {
        throw ConfigError("unknown split protocol '" + name + "'");
      }
    }
    read_opt(s, "ratio", where, cfg.split.ratio);
    read_opt(s, "repeats", where, cfg.split.repeats);
    read_opt(s, "stratified", where, cfg.split.stratified);
    read_opt(s, "k", where, cfg.split.folds);
    read_opt(s, "seed", where, cfg.split.seed);
  }

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    expect_keys(o, "output", {"report", "tables_prefix", "include_timing"});
    read_opt(o, "report", "output", cfg.output.report);
    read_opt(o, "tables_prefix", "output", cfg.output.tables_prefix);
    read_opt(o, "include_timing", "output", cfg.output.include_timing);
  }

  validate_config(cfg);
  return cfg;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  doc["input"] = {{"path", cfg.input_path}, {"format", to_string(cfg.input_format)}};
  doc["magnifications"] = cfg.magnifications;
  doc["scale"] = cfg.scale;
  doc["balance"] = cfg.balance;

  const ReductionConfig& r = cfg.reduction;
  ojson red;
  red["method"] = to_string(r.method);
  red["cev_target"] = r.cev_target ? ojson(*r.cev_target) : ojson(nullptr);
  red["k"] = r.k ? ojson(*r.k) : ojson(nullptr);
  red["fit_scope"] = to_string(r.fit_scope);
  red["rescale_reduced"] = r.rescale_reduced;
  if (r.method == ReductionMethod::kKpca) {
    red["kernel"] = {{"kind", to_string(r.kpca_kernel.kind)},
                     {"gamma", gamma_to_json(r.kpca_kernel.gamma)}};
  }
  if (r.method == ReductionMethod::kPcaTsne) {
    const TsneConfig& t = r.tsne;
    red["tsne"] = {{"output_dims", t.output_dims},
                   {"perplexity", t.perplexity},
                   {"iterations", t.iterations},
                   {"early_exaggeration", t.early_exaggeration},
                   {"exaggeration_iterations", t.exaggeration_iterations},
                   {"learning_rate", t.learning_rate},
                   {"initial_momentum", t.initial_momentum},
                   {"final_momentum", t.final_momentum},
                   {"momentum_switch_iteration", t.momentum_switch_iteration},
                   {"seed", t.seed}};
  }
  doc["reduction"] = red;

  const ClassifierConfig& c = cfg.classifier;
  ojson cls;
  cls["C"] = c.c;
  cls["kernel"] = to_string(c.kernel.kind);
  cls["gamma"] = gamma_to_json(c.kernel.gamma);
  switch (c.weight_mode) {
    case ClassWeightMode::kNone: cls["class_weights"] = "none"; break;
    case ClassWeightMode::kBalanced: cls["class_weights"] = "balanced"; break;
    case ClassWeightMode::kExplicit:
      cls["class_weights"] = {c.explicit_weights[0], c.explicit_weights[1]};
      break;
  }
  cls["tolerance"] = c.tolerance;
  cls["max_iterations"] = c.max_iterations;
  if (c.grid_search) {
    const GridSearchSpec& g = *c.grid_search;
    ojson kernels = ojson::array();
    for (KernelKind k : g.kernels) kernels.push_back(to_string(k));
    ojson gammas = ojson::array();
    for (const auto& v : g.gammas) gammas.push_back(v ? ojson(*v) : ojson("scale"));
    cls["grid_search"] = {{"kernels", kernels}, {"C", g.c_values}, {"gamma", gammas},
                          {"folds", g.folds}, {"seed", g.seed}};
  }
  doc["classifier"] = cls;

  const SplitConfig& s = cfg.split;
  if (s.protocol == SplitProtocol::kRepeatedRandom) {
    doc["split"] = {{"protocol", "repeated_random"}, {"ratio", s.ratio}, {"repeats", s.repeats},
                    {"stratified", s.stratified}, {"seed", s.seed}};
  } else {
    doc["split"] = {{"protocol", "stratified_kfold"}, {"k", s.folds}, {"seed", s.seed}};
  }
  doc["threads"] = cfg.threads;
  doc["output"] = {{"report", cfg.output.report},
                   {"tables_prefix", cfg.output.tables_prefix},
                   {"include_timing", cfg.output.include_timing}};
  return doc;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

}  // namespace rdecaf
