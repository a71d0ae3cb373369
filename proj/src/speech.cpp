#include "myofuse/speech.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "myofuse/errors.hpp"

namespace myofuse::speech {

namespace {
constexpr std::string_view kCommandNames[kCommandCount] = {
    "move right", "move left", "move up", "move down", "move gripper"};
}

std::string_view command_name(SpeechCommand c) {
  return kCommandNames[static_cast<int>(c)];
}

std::optional<SpeechCommand> parse_command(std::string_view canonical) {
  for (int i = 0; i < kCommandCount; ++i) {
    if (canonical == kCommandNames[i]) {
      return static_cast<SpeechCommand>(i);
    }
  }
  return std::nullopt;
}

std::string normalize_text(std::string_view raw) {
  std::string folded;
  folded.reserve(raw.size());
  for (unsigned char byte : raw) {
    if (std::isalnum(byte)) {
      folded.push_back(static_cast<char>(std::tolower(byte)));
    } else {
      folded.push_back(' ');
    }
  }

  std::vector<std::string> tokens = tokenize(folded);

  // Reduce exact full-sequence repetition until stable, so normalization is
  // idempotent ("move right move right move right move right" -> "move right").
  auto is_doubling = [](const std::vector<std::string>& t) {
    if (t.size() < 2 || t.size() % 2 != 0) return false;
    const std::size_t half = t.size() / 2;
    return std::equal(t.begin(), t.begin() + half, t.begin() + half);
  };
  while (is_doubling(tokens)) {
    tokens.resize(tokens.size() / 2);
  }

  std::string out;
  for (const std::string& token : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view normalized) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : normalized) {
    if (c == ' ') {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

AliasTable AliasTable::defaults() {
  AliasTable table;
  for (SpeechCommand c : kAllCommands) {
    table.add(command_name(c), c);
  }
  // "move right" is known to come back as "override" from the recognizer.
  table.add("override", SpeechCommand::MoveRight);
  return table;
}

AliasTable AliasTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open alias file: " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

AliasTable AliasTable::parse(std::string_view text) {
  AliasTable table;
  for (SpeechCommand c : kAllCommands) {
    table.add(command_name(c), c);
  }

  long line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_number;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    const std::size_t arrow = line.find("=>");
    if (arrow == std::string_view::npos) {
      throw ParseError("alias line missing '=>'", line_number);
    }
    const std::string alias = normalize_text(line.substr(0, arrow));
    const std::string command_text = normalize_text(line.substr(arrow + 2));
    const std::optional<SpeechCommand> command = parse_command(command_text);
    if (!command) {
      throw UnknownCommand("unknown command name: " + command_text,
                           line_number);
    }
    if (alias.empty()) {
      throw ParseError("empty alias", line_number);
    }
    table.add(alias, *command, line_number);
  }
  return table;
}

void AliasTable::add(std::string_view alias, SpeechCommand command,
                     long line) {
  const std::string key = normalize_text(alias);
  const auto [it, inserted] = entries_.emplace(key, command);
  if (!inserted && it->second != command) {
    throw ConflictingAlias("alias '" + key + "' already maps to '" +
                               std::string(command_name(it->second)) + "'",
                           line);
  }
}

ResolveResult resolve(std::string_view raw, const AliasTable& table) {
  const std::string normalized = normalize_text(raw);

  const auto exact = table.entries().find(normalized);
  if (exact != table.entries().end()) {
    return {ResolveStatus::Match, exact->second};
  }

  // Keyword containment: an alias matches when all of its tokens appear in
  // order as a subsequence of the utterance tokens.
  const std::vector<std::string> utterance = tokenize(normalized);
  auto subsequence = [&utterance](const std::vector<std::string>& needle) {
    std::size_t i = 0;
    for (const std::string& token : utterance) {
      if (i < needle.size() && token == needle[i]) ++i;
    }
    return i == needle.size();
  };

  std::set<SpeechCommand> candidates;
  for (const auto& [alias, command] : table.entries()) {
    const std::vector<std::string> alias_tokens = tokenize(alias);
    if (!alias_tokens.empty() && subsequence(alias_tokens)) {
      candidates.insert(command);
    }
  }

  if (candidates.empty()) return {ResolveStatus::NoMatch, {}};
  if (candidates.size() > 1) return {ResolveStatus::Ambiguous, {}};
  return {ResolveStatus::Match, *candidates.begin()};
}

}  // namespace myofuse::speech
