// Command-line front end: dataset generation, classifier benchmarking,
// Monte-Carlo error trials, metric recomputation, and the control server,
// client and interactive console.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "myofuse/classify.hpp"
#include "myofuse/config.hpp"
#include "myofuse/errors.hpp"
#include "myofuse/net.hpp"
#include "myofuse/speech.hpp"
#include "myofuse/synth.hpp"
#include "myofuse/trials.hpp"

namespace {

using namespace myofuse;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + out_path);
  out << text << "\n";
}

std::vector<long> parse_counts(const std::string& text) {
  std::vector<long> counts;
  std::stringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      counts.push_back(std::stol(cell));
    } catch (const std::exception&) {
      throw Error("bad count '" + cell + "'");
    }
  }
  return counts;
}

GestureLabel gesture_arg(const std::string& name) {
  const auto label = parse_gesture(name);
  if (!label) throw UnknownLabel("unknown gesture '" + name + "'");
  return *label;
}

int run_gen_data(int per_class, std::uint64_t seed, const std::string& out) {
  const synth::LabeledDataset data = synth::generate_dataset(per_class, seed);
  synth::save_csv(data, out.empty() ? "dataset.csv" : out);
  return 0;
}

int run_train_eval(const std::string& data_path, std::uint64_t seed,
                   int per_class, const std::string& out) {
  const synth::LabeledDataset data = data_path.empty()
                                         ? synth::generate_dataset(per_class, seed)
                                         : synth::load_csv(data_path);
  static constexpr ml::ModelKind kKinds[] = {
      ml::ModelKind::KNN,          ml::ModelKind::GaussianNB,
      ml::ModelKind::DecisionTree, ml::ModelKind::LDA,
      ml::ModelKind::LogisticRegression, ml::ModelKind::LinearSVM,
  };
  std::string json = "[\n";
  bool first = true;
  for (ml::ModelKind kind : kKinds) {
    const ml::EvalReport report = ml::cross_validate_10fold(kind, data, seed);
    if (!first) json += ",\n";
    json += ml::report_to_json(report);
    first = false;
  }
  json += "\n]";
  emit(json, out);
  return 0;
}

int run_sim_unimodal(const HarnessConfig& config, const std::string& modality,
                     const std::string& key, int blocks, long block_size,
                     std::uint64_t seed, const std::string& out) {
  trials::TrialReport report;
  if (modality == "gesture") {
    report = trials::run_unimodal_trial(gesture_arg(key), config.rates, blocks,
                                        block_size, seed);
  } else if (modality == "speech") {
    const auto command = speech::parse_command(key);
    if (!command) throw Error("unknown command '" + key + "'");
    report = trials::run_unimodal_trial(*command, config.rates, blocks,
                                        block_size, seed);
  } else {
    throw Error("modality must be 'gesture' or 'speech'");
  }
  emit(report.to_json(), out);
  return 0;
}

int run_sim_fusion(const HarnessConfig& config, const std::string& gesture,
                   bool all_pairs, int blocks, long block_size,
                   std::uint64_t seed, const std::string& out) {
  if (!all_pairs) {
    const trials::TrialReport report = trials::run_fusion_trial(
        gesture_arg(gesture), config.rates, blocks, block_size, seed,
        config.fusion.correspondence);
    emit(report.to_json(), out);
    return 0;
  }
  std::string json = "[\n";
  std::vector<double> errors;
  for (GestureLabel label : kAllGestures) {
    const trials::TrialReport report = trials::run_fusion_trial(
        label, config.rates, blocks, block_size, seed,
        config.fusion.correspondence);
    if (!errors.empty()) json += ",\n";
    json += report.to_json();
    errors.push_back(report.error_percent);
  }
  json += "\n]";
  emit(json, out);
  std::cerr << "mean fused error %: " << trials::mean_error(errors) << "\n";
  return 0;
}

int run_metrics(const std::string& counts_text, long block_size,
                const std::string& out) {
  const std::vector<long> counts = parse_counts(counts_text);
  nlohmann::ordered_json j;
  j["counts"] = counts;
  j["block_size"] = block_size;
  j["error_percent"] = trials::error_percent(counts, block_size);
  j["sample_variance"] = trials::sample_variance(counts);
  emit(j.dump(2), out);
  return 0;
}

int run_serve(const HarnessConfig& config, const std::string& bind,
              std::uint16_t port) {
  net::TcpServer server(bind, port, config);
  std::cerr << "listening on " << bind << ":" << server.port() << "\n";
  server.run();
  return 0;
}

int run_client(const std::string& host, std::uint16_t port) {
  std::vector<std::string> requests;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    requests.push_back(line);
  }
  for (const std::string& reply : net::client_send(host, port, requests)) {
    std::cout << reply << "\n";
  }
  return 0;
}

int run_repl(const HarnessConfig& config) {
  net::SessionEngine engine(config);
  std::uint64_t clock_ms = 0;  // logical time, +100 per input line
  std::cout << "commands: gesture <label> <conf> | say <text> | state | quit\n";

  std::string line;
  while (!engine.quit_requested() && std::getline(std::cin, line)) {
    std::istringstream in(line);
    std::string verb;
    in >> verb;
    clock_ms += 100;

    std::string request;
    if (verb == "gesture") {
      std::string label, conf;
      if (!(in >> label >> conf)) {
        std::cout << "usage: gesture <label> <conf>\n";
        continue;
      }
      request = "EVT GESTURE " + std::to_string(clock_ms) + " " + label + " " + conf;
    } else if (verb == "say") {
      std::string text;
      std::getline(in, text);
      request = "EVT SPEECH " + std::to_string(clock_ms) + text;
    } else if (verb == "state") {
      request = "STATE";
    } else if (verb == "quit") {
      request = "QUIT";
    } else if (verb.empty()) {
      continue;
    } else {
      std::cout << "unknown command '" << verb << "'\n";
      continue;
    }

    std::cout << engine.handle_line(request) << "\n";
    if (verb == "gesture" || verb == "say") {
      std::cout << arm::state_line(engine.arm_state()) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EMG + speech fusion control stack"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  std::uint64_t seed = 0;
  std::string config_path, out_path;
  std::uint16_t port = 7070;
  double threshold = -1.0;
  std::int64_t window_ms = -1;
  app.add_option("--seed", seed, "master seed for all stochastic paths");
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_path, "write output here instead of stdout");
  app.add_option("--port", port, "TCP port for serve/client");
  app.add_option("--threshold", threshold, "gesture confidence threshold override");
  app.add_option("--window-ms", window_ms, "speech suppression window override");

  auto* gen = app.add_subcommand("gen-data", "generate a labeled feature CSV");
  int per_class = 180;
  gen->add_option("--per-class", per_class, "rows per gesture class");

  auto* train = app.add_subcommand("train-eval",
                                   "tenfold cross-validation of all six classifiers");
  std::string data_path;
  train->add_option("--data", data_path, "feature CSV (default: generate)");
  train->add_option("--per-class", per_class, "rows per class when generating");

  auto* uni = app.add_subcommand("sim-unimodal", "single-modality error trial");
  std::string modality = "gesture", label = "Fist", command_key;
  int blocks = 10;
  long block_size = 100;
  uni->add_option("--modality", modality, "gesture or speech");
  uni->add_option("--label", label, "gesture label");
  uni->add_option("--command", command_key, "speech command (canonical form)");
  uni->add_option("--blocks", blocks, "number of blocks");
  uni->add_option("--block-size", block_size, "attempts per block");

  auto* fus = app.add_subcommand("sim-fusion", "priority-fusion error trial");
  std::string fusion_gesture = "Fist";
  bool all_pairs = false;
  int fusion_blocks = 4;
  long fusion_block_size = 50;
  fus->add_option("--gesture", fusion_gesture, "gesture side of the pair");
  fus->add_flag("--all", all_pairs, "run all five pairs");
  fus->add_option("--blocks", fusion_blocks, "number of blocks");
  fus->add_option("--block-size", fusion_block_size, "attempts per block");

  auto* met = app.add_subcommand("metrics", "error %% and variance from counts");
  std::string counts_text;
  long metrics_block = 50;
  met->add_option("--counts", counts_text, "comma-separated block error counts")
      ->required();
  met->add_option("--block", metrics_block, "attempts per block");

  auto* srv = app.add_subcommand("serve", "run the control server");
  std::string bind = "127.0.0.1";
  srv->add_option("--bind", bind, "bind address");

  auto* cli = app.add_subcommand("client", "send stdin lines to a server");
  std::string host = "127.0.0.1";
  cli->add_option("--host", host, "server address");

  auto* repl = app.add_subcommand("repl", "interactive console");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    HarnessConfig config = config_path.empty() ? HarnessConfig{}
                                               : HarnessConfig::load(config_path);
    if (threshold >= 0.0) config.fusion.threshold = threshold;
    if (window_ms >= 0) config.fusion.window_ms = static_cast<std::uint64_t>(window_ms);

    if (gen->parsed()) return run_gen_data(per_class, seed, out_path);
    if (train->parsed()) return run_train_eval(data_path, seed, per_class, out_path);
    if (uni->parsed()) {
      const std::string key = modality == "speech" && !command_key.empty()
                                  ? command_key
                                  : (modality == "speech" ? "move right" : label);
      return run_sim_unimodal(config, modality, key, blocks, block_size, seed,
                              out_path);
    }
    if (fus->parsed()) {
      return run_sim_fusion(config, fusion_gesture, all_pairs, fusion_blocks,
                            fusion_block_size, seed, out_path);
    }
    if (met->parsed()) return run_metrics(counts_text, metrics_block, out_path);
    if (srv->parsed()) return run_serve(config, bind, port);
    if (cli->parsed()) return run_client(host, port);
    if (repl->parsed()) return run_repl(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
