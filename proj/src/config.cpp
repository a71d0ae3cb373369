#include "myofuse/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "myofuse/errors.hpp"

namespace myofuse {

HarnessConfig HarnessConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open config file: " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

HarnessConfig HarnessConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }

  HarnessConfig config;
  if (j.contains("fusion")) {
    const auto& f = j.at("fusion");
    if (f.contains("threshold")) {
      config.fusion.threshold = f.at("threshold").get<double>();
      if (config.fusion.threshold < 0.0 || config.fusion.threshold > 1.0) {
        throw Error("fusion.threshold must lie in [0, 1]");
      }
    }
    if (f.contains("window_ms")) {
      config.fusion.window_ms = f.at("window_ms").get<std::uint64_t>();
    }
    if (f.contains("correspondence")) {
      std::map<GestureLabel, speech::SpeechCommand> pairs;
      for (const auto& [gesture_text, command_value] :
           f.at("correspondence").items()) {
        const auto label = parse_gesture(gesture_text);
        if (!label) {
          throw UnknownLabel("unknown gesture in correspondence: " +
                             gesture_text);
        }
        const auto command =
            speech::parse_command(command_value.get<std::string>());
        if (!command) {
          throw Error("unknown command in correspondence: " +
                      command_value.get<std::string>());
        }
        pairs[*label] = *command;
      }
      config.fusion.correspondence = fusion::CorrespondenceTable::from_pairs(pairs);
    }
  }
  if (j.contains("rates")) {
    const auto& r = j.at("rates");
    if (r.contains("gesture")) {
      for (const auto& [name, value] : r.at("gesture").items()) {
        const auto label = parse_gesture(name);
        if (!label) throw UnknownLabel("unknown gesture in rates: " + name);
        config.rates.gesture_error[*label] = value.get<double>();
      }
    }
    if (r.contains("speech")) {
      for (const auto& [name, value] : r.at("speech").items()) {
        const auto command = speech::parse_command(name);
        if (!command) throw Error("unknown command in rates: " + name);
        config.rates.speech_error[*command] = value.get<double>();
      }
    }
    config.rates.validate();
  }
  if (j.contains("arm")) {
    const auto& a = j.at("arm");
    if (a.contains("step_degrees")) {
      config.arm_config.step_degrees = a.at("step_degrees").get<double>();
    }
  }
  if (j.contains("aliases_path")) {
    config.aliases_path = j.at("aliases_path").get<std::string>();
  }
  return config;
}

speech::AliasTable HarnessConfig::aliases() const {
  return aliases_path.empty() ? speech::AliasTable::defaults()
                              : speech::AliasTable::load(aliases_path);
}

std::string HarnessConfig::to_json_text() const {
  nlohmann::ordered_json j;
  j["fusion"]["threshold"] = fusion.threshold;
  j["fusion"]["window_ms"] = fusion.window_ms;
  for (GestureLabel g : kAllGestures) {
    j["fusion"]["correspondence"][std::string(gesture_name(g))] =
        std::string(speech::command_name(fusion.correspondence.command_for(g)));
  }
  for (const auto& [label, p] : rates.gesture_error) {
    j["rates"]["gesture"][std::string(gesture_name(label))] = p;
  }
  for (const auto& [command, p] : rates.speech_error) {
    j["rates"]["speech"][std::string(speech::command_name(command))] = p;
  }
  j["arm"]["step_degrees"] = arm_config.step_degrees;
  j["aliases_path"] = aliases_path;
  return j.dump(2);
}

}  // namespace myofuse
