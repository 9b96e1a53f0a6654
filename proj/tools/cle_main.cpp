/*
 * Copyright 2026 The CLE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: explain one instance, run an evaluation experiment,
// or estimate the cost of an explanation run.
//
// Exit codes: 0 success, 2 configuration error, 3 model failure,
// 4 degenerate explanation, 1 anything else.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cle/corpus.hpp"
#include "cle/error.hpp"
#include "cle/eval.hpp"
#include "cle/explainer.hpp"
#include "cle/explanation_json.hpp"
#include "cle/external.hpp"
#include "cle/image.hpp"
#include "cle/models.hpp"
#include "cle/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitModel = 3;
constexpr int kExitDegenerate = 4;

struct FlagSpec {
  const char* name;
  const char* help;
  bool boolean = false;
};

// Flags shared by every subcommand; each may also be given as a key of the
// --config JSON document.
const FlagSpec kFlags[] = {
    {"method", "explanation method: cle, lime, greedy or random"},
    {"methods", "comma-separated methods for eval (default all four)"},
    {"samples", "perturbation samples N"},
    {"k", "maximum number of terms K"},
    {"spans", "combination sizes, e.g. \"2,3\""},
    {"focus", "feature indices eligible for combinations, e.g. \"0,3,5\" (empty string: none)"},
    {"sigma", "kernel width"},
    {"seed", "random seed"},
    {"class", "explained class index (default: predicted class)"},
    {"batch-size", "instances per model call"},
    {"model", "built-in model: toy-sentiment, logreg, tree, forest or knn"},
    {"model-cmd", "external model command speaking the line protocol"},
    {"model-url", "external model HTTP endpoint"},
    {"classes", "class labels of an external model, comma-separated"},
    {"modality", "modality of an external model: text, tabular or image"},
    {"timeout-ms", "external model timeout per batch"},
    {"data", "dataset: .tsv text corpus or .csv table"},
    {"label-column", "class column of a CSV dataset"},
    {"schema", "tabular schema JSON"},
    {"n-train", "rows tagged train (default 80%, 60% for model-choice)"},
    {"n-validation", "rows tagged validation after the train rows"},
    {"l2", "logistic regression L2 penalty"},
    {"max-features", "logistic regression feature cap"},
    {"max-depth", "tree depth limit"},
    {"max-distinct-features", "tree distinct-feature budget"},
    {"n-trees", "forest size"},
    {"knn-k", "neighbours for knn"},
    {"text", "text instance to explain"},
    {"row", "CSV cells of a tabular instance to explain"},
    {"instance", "index of the test instance to explain"},
    {"image", "PPM image to explain"},
    {"segments", "PGM segment map for --image"},
    {"grid", "grid segmentation ROWSxCOLS for --image (default 4x4)"},
    {"instances", "number of test instances evaluated (0 = all)"},
    {"trials", "trials for trust and model-choice"},
    {"unrelated-fraction", "share of features marked unrelated in trust"},
    {"budgets", "explanation budgets P for model-choice, e.g. \"5,10\""},
    {"max-attempts", "forests trained per model-choice trial before giving up"},
    {"dry-run", "samples in the estimate calibration run"},
    {"unit-times", "fixed unit times \"perturb,predict,extend,fit\" in seconds"},
    {"out", "output directory"},
    {"report", "also write report.html", true},
    {"timings", "include wall-clock timings in explanation.json", true},
};

class Settings {
 public:
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string str(const std::string& key, const std::string& fallback = {}) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }
  long long integer(const std::string& key, long long fallback) const {
    if (!has(key)) return fallback;
    try {
      std::size_t used = 0;
      const long long v = std::stoll(str(key), &used);
      if (used == str(key).size()) return v;
    } catch (const std::exception&) {
    }
    throw cle::Error(cle::ErrorCode::kConfigError, "--" + key + " expects an integer");
  }
  double real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(str(key), &used);
      if (used == str(key).size()) return v;
    } catch (const std::exception&) {
    }
    throw cle::Error(cle::ErrorCode::kConfigError, "--" + key + " expects a number");
  }
  bool flag(const std::string& key) const {
    const std::string v = str(key, "false");
    return v == "true" || v == "1";
  }

 private:
  std::map<std::string, std::string> values_;
};

std::vector<std::string> split_list(std::string text) {
  std::erase_if(text, [](char c) { return c == '[' || c == ']' || c == '"' || c == ' '; });
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> int_list(const std::string& text, const std::string& key) {
  std::vector<int> out;
  for (const std::string& item : split_list(text)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw cle::Error(cle::ErrorCode::kConfigError, "--" + key + " expects integers, got '" + item + "'");
    }
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cle::Error(cle::ErrorCode::kIoError, "cannot write " + path.string());
  out << content;
}

fs::path output_dir(const Settings& s) {
  const fs::path dir = s.str("out", ".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw cle::Error(cle::ErrorCode::kIoError, "cannot create " + dir.string());
  return dir;
}

cle::Modality parse_modality(const std::string& name) {
  if (name == "text") return cle::Modality::kText;
  if (name == "tabular") return cle::Modality::kTabular;
  if (name == "image") return cle::Modality::kImage;
  throw cle::Error(cle::ErrorCode::kConfigError, "unknown modality '" + name + "'");
}

cle::ExplainConfig explain_config(const Settings& s) {
  cle::ExplainConfig cfg;
  cfg.n_samples = static_cast<int>(s.integer("samples", cfg.n_samples));
  cfg.k = static_cast<int>(s.integer("k", cfg.k));
  cfg.seed = static_cast<std::uint64_t>(s.integer("seed", 0));
  cfg.batch_size = static_cast<int>(s.integer("batch-size", cfg.batch_size));
  cfg.max_threads = 1;
  if (s.has("spans")) cfg.combination.spans = int_list(s.str("spans"), "spans");
  if (s.has("focus")) cfg.combination.focus = int_list(s.str("focus"), "focus");
  if (s.has("class")) cfg.explained_class = static_cast<int>(s.integer("class", 0));
  cfg.validate();
  return cfg;
}

// Applies the modality default metric when only sigma is overridden.
void apply_sigma(const Settings& s, cle::ExplainConfig& cfg, cle::Modality modality) {
  if (!s.has("sigma")) return;
  cle::KernelConfig kernel = cle::KernelConfig::for_modality(modality);
  kernel.sigma = s.real("sigma", kernel.sigma);
  cfg.kernel = kernel;
  cfg.validate();
}

// ---------------------------------------------------------------------------
// Data and models
// ---------------------------------------------------------------------------

std::optional<cle::SparseDataset> load_dataset(const Settings& s, bool model_choice) {
  if (!s.has("data")) return std::nullopt;
  const fs::path path = s.str("data");
  if (!fs::exists(path)) throw cle::Error(cle::ErrorCode::kConfigError, "no such file " + path.string());
  cle::SparseDataset data;
  if (path.extension() == ".csv") {
    std::optional<cle::TabularSchema> schema;
    if (s.has("schema")) schema = cle::read_schema(s.str("schema"));
    data = cle::load_tabular_csv(path, s.str("label-column", "label"), schema);
  } else {
    data = cle::load_text_tsv(path);
  }
  const auto n = static_cast<long long>(data.size());
  const long long n_train = s.integer("n-train", model_choice ? n * 6 / 10 : n * 8 / 10);
  const long long n_val = s.integer("n-validation", model_choice ? n * 2 / 10 : 0);
  if (n_train < 1 || n_val < 0 || n_train + n_val > n) {
    throw cle::Error(cle::ErrorCode::kConfigError, "split sizes do not fit the dataset");
  }
  cle::assign_splits(data, static_cast<std::size_t>(n_train), static_cast<std::size_t>(n_val));
  return data;
}

std::shared_ptr<cle::BlackBoxModel> build_model(const Settings& s,
                                                const std::optional<cle::SparseDataset>& data,
                                                std::optional<cle::Modality> instance_modality) {
  const int specs = static_cast<int>(s.has("model")) + static_cast<int>(s.has("model-cmd")) +
                    static_cast<int>(s.has("model-url"));
  if (specs != 1) {
    throw cle::Error(cle::ErrorCode::kConfigError,
                     "give exactly one of --model, --model-cmd and --model-url");
  }
  if (s.has("model-cmd") || s.has("model-url")) {
    cle::ExternalOptions options;
    options.classes = split_list(s.str("classes"));
    if (options.classes.empty() && data) options.classes = data->classes;
    if (options.classes.empty()) {
      throw cle::Error(cle::ErrorCode::kConfigError, "external models need --classes");
    }
    if (s.has("modality")) {
      options.modality = parse_modality(s.str("modality"));
    } else if (instance_modality) {
      options.modality = *instance_modality;
    } else if (data) {
      options.modality = data->modality;
    }
    options.timeout = std::chrono::milliseconds(s.integer("timeout-ms", 60000));
    options.batch_size = static_cast<int>(s.integer("batch-size", 256));
    if (s.has("model-cmd")) return cle::external_subprocess_model(s.str("model-cmd"), options);
    return cle::external_http_model(s.str("model-url"), options);
  }
  const std::string name = s.str("model");
  if (name == "toy-sentiment") return cle::toy_sentiment_model();
  if (!data) throw cle::Error(cle::ErrorCode::kConfigError, "--model " + name + " needs --data");
  const auto seed = static_cast<std::uint64_t>(s.integer("seed", 0));
  if (name == "logreg") {
    cle::LogregOptions options;
    options.l2 = s.real("l2", options.l2);
    if (s.has("max-features")) options.max_features = static_cast<int>(s.integer("max-features", 10));
    return cle::train_logreg(*data, options);
  }
  if (name == "tree") {
    cle::TreeOptions options;
    if (s.has("max-depth")) options.max_depth = static_cast<int>(s.integer("max-depth", 0));
    if (s.has("max-distinct-features")) {
      options.max_distinct_features = static_cast<int>(s.integer("max-distinct-features", 10));
    }
    options.seed = seed;
    return cle::train_tree(*data, options);
  }
  if (name == "forest") {
    cle::ForestOptions options;
    options.n_trees = static_cast<int>(s.integer("n-trees", 30));
    if (s.has("max-depth")) options.max_depth = static_cast<int>(s.integer("max-depth", 0));
    options.seed = seed;
    return cle::train_forest(*data, options);
  }
  if (name == "knn") return cle::train_knn(*data, static_cast<int>(s.integer("knn-k", 5)));
  throw cle::Error(cle::ErrorCode::kConfigError, "unknown model '" + name + "'");
}

std::pair<int, int> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw cle::Error(cle::ErrorCode::kConfigError, "--grid expects ROWSxCOLS");
  try {
    return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
  } catch (const std::exception&) {
    throw cle::Error(cle::ErrorCode::kConfigError, "--grid expects ROWSxCOLS");
  }
}

cle::InterpretableInstance load_instance(const Settings& s, const std::optional<cle::SparseDataset>& data) {
  const int given = static_cast<int>(s.has("text")) + static_cast<int>(s.has("row")) +
                    static_cast<int>(s.has("image")) + static_cast<int>(s.has("instance"));
  if (given != 1) {
    throw cle::Error(cle::ErrorCode::kConfigError, "give exactly one of --text, --row, --image and --instance");
  }
  if (s.has("text")) return cle::InterpretableInstance::from_text(s.str("text"), "text");
  if (s.has("image")) {
    const cle::Image image = cle::read_ppm(s.str("image"));
    cle::SegmentMap segments;
    if (s.has("segments")) {
      segments = cle::read_pgm_segments(s.str("segments"));
    } else {
      const auto [rows, cols] = parse_grid(s.str("grid", "4x4"));
      segments = cle::grid_segments(image.width, image.height, rows, cols);
    }
    return cle::InterpretableInstance::from_image(image, std::move(segments), fs::path(s.str("image")).filename().string());
  }
  if (!data) throw cle::Error(cle::ErrorCode::kConfigError, "--row and --instance need --data");
  if (s.has("row")) {
    if (data->modality != cle::Modality::kTabular) {
      throw cle::Error(cle::ErrorCode::kConfigError, "--row needs a tabular dataset");
    }
    const cle::CsvTable cells = cle::parse_csv(s.str("row") + "\n");
    if (cells.header.size() != data->column_names.size()) {
      throw cle::Error(cle::ErrorCode::kSchemaMismatch, "--row has the wrong number of cells");
    }
    return cle::InterpretableInstance::from_tabular(
        cle::typed_row(*data->schema, data->column_names, cells.header), cle::training_context(*data), "row");
  }
  const auto index = static_cast<std::size_t>(s.integer("instance", 0));
  auto instances = cle::interpretable_instances(*data, cle::Split::kTest, cle::training_context(*data), index + 1);
  if (index >= instances.size()) throw cle::Error(cle::ErrorCode::kConfigError, "--instance out of range");
  return instances[index];
}

std::vector<cle::Method> methods_of(const Settings& s) {
  std::vector<cle::Method> out;
  for (const std::string& name : split_list(s.str("methods", "cle,lime,greedy,random"))) {
    out.push_back(cle::parse_method(name));
  }
  if (out.empty()) throw cle::Error(cle::ErrorCode::kConfigError, "no methods given");
  return out;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_explain(const Settings& s) {
  const auto data = load_dataset(s, false);
  const cle::InterpretableInstance instance = load_instance(s, data);
  cle::ExplainConfig cfg = explain_config(s);
  apply_sigma(s, cfg, instance.modality());
  const auto model = build_model(s, data, instance.modality());
  const cle::Method method = cle::parse_method(s.str("method", "cle"));
  const cle::Explanation e = cle::explain(method, instance, *model, cfg);

  const fs::path dir = output_dir(s);
  write_file(dir / "explanation.json", cle::explanation_to_json(e, s.flag("timings")).dump(2) + "\n");
  if (s.flag("report")) write_file(dir / "report.html", cle::render_report_html(e, instance));

  std::cout << cle::method_name(e.method) << " explanation of " << e.instance_ref << " for class '"
            << e.explained_class_name << "'\n";
  for (const cle::Term& t : e.terms) {
    std::cout << "  " << t.label;
    if (t.coefficient) std::cout << "  " << *t.coefficient;
    std::cout << '\n';
  }
  if (e.fidelity_error) std::cout << "fidelity error " << *e.fidelity_error << '\n';
  if (e.degenerate) {
    std::cerr << "degenerate explanation: no design column varies\n";
    return kExitDegenerate;
  }
  return kExitOk;
}

int cmd_eval(const Settings& s, const std::string& experiment) {
  const bool model_choice = experiment == "model-choice";
  if (!model_choice && experiment != "faithfulness" && experiment != "trust") {
    throw cle::Error(cle::ErrorCode::kConfigError, "unknown experiment '" + experiment + "'");
  }
  const auto data = load_dataset(s, model_choice);
  if (!data) throw cle::Error(cle::ErrorCode::kConfigError, "eval needs --data");
  cle::ExplainConfig cfg = explain_config(s);
  apply_sigma(s, cfg, data->modality);
  const std::vector<cle::Method> methods = methods_of(s);
  json doc;
  std::string csv, table;

  if (model_choice) {
    cle::ModelChoiceOptions options;
    options.trials = static_cast<int>(s.integer("trials", options.trials));
    if (s.has("budgets")) options.budgets = int_list(s.str("budgets"), "budgets");
    options.max_attempts = static_cast<int>(s.integer("max-attempts", options.max_attempts));
    options.forest.n_trees = static_cast<int>(s.integer("n-trees", 30));
    options.seed = cfg.seed;
    const cle::ModelChoiceResult r = cle::eval_model_choice(*data, methods, cfg, options);
    doc = cle::to_json(r);
    csv = cle::to_csv(r);
    table = cle::to_table(r);
  } else {
    const auto model = build_model(s, data, data->modality);
    const auto limit = static_cast<std::size_t>(s.integer("instances", 0));
    const auto instances =
        cle::interpretable_instances(*data, cle::Split::kTest, cle::training_context(*data), limit);
    if (experiment == "faithfulness") {
      std::optional<std::set<std::string>> gold;
      if (const auto* source = dynamic_cast<const cle::GoldFeatureSource*>(model.get())) {
        const auto keys = source->gold_features();
        gold.emplace(keys.begin(), keys.end());
      }
      const cle::FaithfulnessResult r = cle::eval_faithfulness(*model, instances, methods, cfg, gold);
      doc = cle::to_json(r);
      csv = cle::to_csv(r);
      table = cle::to_table(r);
    } else {
      cle::TrustOptions options;
      if (s.has("unrelated-fraction")) options.unrelated_fraction = s.real("unrelated-fraction", 0.25);
      options.trials = static_cast<int>(s.integer("trials", options.trials));
      options.seed = cfg.seed;
      const cle::TrustResult r = cle::eval_trust(*model, instances, methods, cfg, options);
      doc = cle::to_json(r);
      csv = cle::to_csv(r);
      table = cle::to_table(r);
    }
  }
  doc["config"] = cle::config_to_json(cfg);
  const fs::path dir = output_dir(s);
  write_file(dir / "results.json", doc.dump(2) + "\n");
  write_file(dir / "results.csv", csv);
  std::cout << table;
  return kExitOk;
}

int cmd_estimate(const Settings& s) {
  const auto data = load_dataset(s, false);
  const cle::InterpretableInstance instance = load_instance(s, data);
  cle::ExplainConfig cfg = explain_config(s);
  apply_sigma(s, cfg, instance.modality());

  cle::UnitTimes unit;
  std::optional<std::shared_ptr<cle::BlackBoxModel>> model;
  if (s.has("unit-times")) {
    std::vector<double> t;
    for (const std::string& item : split_list(s.str("unit-times"))) t.push_back(std::stod(item));
    if (t.size() != 4) throw cle::Error(cle::ErrorCode::kConfigError, "--unit-times needs four values");
    unit = {t[0], t[1], t[2], t[3]};
  } else {
    model = build_model(s, data, instance.modality());
    unit = cle::calibrate(instance, **model, cfg, static_cast<int>(s.integer("dry-run", 100)));
  }
  // Focus size: explicit, or the K features CLE would pick by default.
  const int focus = cfg.combination.focus ? static_cast<int>(cfg.combination.focus->size())
                                          : std::min(cfg.k, instance.dim());
  const cle::CostReport r = cle::estimate_cost(instance.dim(), cfg.n_samples, focus, cfg.combination.spans, unit);

  const json doc{{"n_samples", r.n_samples},
                 {"dim", r.dim},
                 {"focus_size", r.focus_size},
                 {"spans", r.spans},
                 {"extension_length", r.extension_length},
                 {"unit_times", {{"t_perturb", unit.perturb}, {"t_predict", unit.predict}, {"t_extend", unit.extend}, {"t_fit", unit.fit}}},
                 {"totals", {{"perturb", r.perturb_total}, {"predict", r.predict_total}, {"extend", r.extend_total}, {"fit", r.fit_total}}},
                 {"per_sample_total", r.per_sample_total},
                 {"total", r.total},
                 {"dominant", r.dominant}};
  const fs::path dir = output_dir(s);
  write_file(dir / "results.json", doc.dump(2) + "\n");
  std::ostringstream csv;
  csv << "stage,unit_seconds,total_seconds\n"
      << "t_perturb," << unit.perturb << ',' << r.perturb_total << '\n'
      << "t_predict," << unit.predict << ',' << r.predict_total << '\n'
      << "t_extend," << unit.extend << ',' << r.extend_total << '\n'
      << "t_fit," << unit.fit << ',' << r.fit_total << '\n';
  write_file(dir / "results.csv", csv.str());

  std::cout << "T = N*(t_perturb + t_predict + t_extend) + t_fit with N=" << r.n_samples << ", d=" << r.dim
            << ", l=" << r.extension_length << "\n"
            << "  t_perturb  " << r.perturb_total << " s\n"
            << "  t_predict  " << r.predict_total << " s\n"
            << "  t_extend   " << r.extend_total << " s\n"
            << "  t_fit      " << r.fit_total << " s\n"
            << "  total      " << r.total << " s (dominant: " << r.dominant << ")\n";
  if (r.total > 600) std::cerr << "warning: predicted run time exceeds ten minutes\n";
  return kExitOk;
}

Settings resolve(const std::map<std::string, std::string>& cli, const std::map<std::string, bool>& flags,
                 const std::map<std::string, CLI::Option*>& options) {
  Settings s;
  const auto config = cli.find("config");
  if (config != cli.end() && !config->second.empty()) {
    std::ifstream in(config->second);
    if (!in) throw cle::Error(cle::ErrorCode::kConfigError, "cannot read config " + config->second);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw cle::Error(cle::ErrorCode::kConfigError, std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw cle::Error(cle::ErrorCode::kConfigError, "config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      if (options.count(key) == 0) throw cle::Error(cle::ErrorCode::kConfigError, "unknown config key '" + key + "'");
      s.set(key, value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  // Flags given on the command line win over the config document.
  for (const auto& [key, opt] : options) {
    if (opt->count() == 0) continue;
    if (flags.count(key) != 0) {
      s.set(key, flags.at(key) ? "true" : "false");
    } else {
      s.set(key, cli.at(key));
    }
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local explanations over combination-extended binary representations"};
  app.require_subcommand(1);
  CLI::App* explain = app.add_subcommand("explain", "explain one instance");
  CLI::App* eval = app.add_subcommand("eval", "run faithfulness, trust or model-choice");
  CLI::App* estimate = app.add_subcommand("estimate", "predict run time from a calibration run");
  std::string experiment;
  eval->add_option("experiment", experiment, "faithfulness, trust or model-choice")->required();

  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::map<CLI::App*, std::map<std::string, CLI::Option*>> registered;
  for (CLI::App* sub : {explain, eval, estimate}) {
    registered[sub]["config"] = sub->add_option("--config", values["config"], "JSON document of flag values");
    for (const FlagSpec& spec : kFlags) {
      const std::string name = spec.name;
      registered[sub][name] = spec.boolean ? sub->add_flag("--" + name, flags[name], spec.help)
                                           : sub->add_option("--" + name, values[name], spec.help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    CLI::App* sub = explain->parsed() ? explain : eval->parsed() ? eval : estimate;
    std::map<std::string, CLI::Option*> options = registered[sub];
    options.erase("config");
    const Settings s = resolve(values, flags, options);
    if (sub == explain) return cmd_explain(s);
    if (sub == eval) return cmd_eval(s, experiment);
    return cmd_estimate(s);
  } catch (const cle::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.is_model_failure()) return kExitModel;
    if (e.code() == cle::ErrorCode::kDegenerate) return kExitDegenerate;
    switch (e.code()) {
      case cle::ErrorCode::kNotConverged:
      case cle::ErrorCode::kPairGenerationFailed:
        return kExitOther;
      default:
        return kExitConfig;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
}
