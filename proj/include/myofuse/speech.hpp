#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace myofuse::speech {

/// The five canonical voice commands.
enum class SpeechCommand : int {
  MoveRight = 0,
  MoveLeft = 1,
  MoveUp = 2,
  MoveDown = 3,
  MoveGripper = 4,
};

inline constexpr int kCommandCount = 5;

inline constexpr std::array<SpeechCommand, kCommandCount> kAllCommands = {
    SpeechCommand::MoveRight, SpeechCommand::MoveLeft, SpeechCommand::MoveUp,
    SpeechCommand::MoveDown, SpeechCommand::MoveGripper,
};

/// Canonical string form: "move right", "move left", ...
std::string_view command_name(SpeechCommand c);

std::optional<SpeechCommand> parse_command(std::string_view canonical);

/// Folds a raw recognized utterance into a comparable form: ASCII lowercase,
/// non-alphanumeric bytes become spaces, whitespace collapses to single
/// spaces, and a token sequence that is an exact doubling (w1..wn w1..wn) is
/// reduced until it no longer doubles.  Idempotent.
std::string normalize_text(std::string_view raw);

std::vector<std::string> tokenize(std::string_view normalized);

/// Many-to-one alias table from normalized utterance strings to commands.
/// The five canonical strings are always present as self-aliases.
class AliasTable {
 public:
  /// Canonical self-aliases plus the known recognizer confusions.
  static AliasTable defaults();

  /// Parses `alias => command` lines; '#' comments and blank lines ignored.
  /// Aliases are normalized on load.  Throws UnknownCommand or
  /// ConflictingAlias with the offending line number.
  static AliasTable load(const std::string& path);
  static AliasTable parse(std::string_view text);

  /// Throws ConflictingAlias when the normalized alias already maps elsewhere.
  void add(std::string_view alias, SpeechCommand command, long line = 0);

  const std::map<std::string, SpeechCommand>& entries() const {
    return entries_;
  }

 private:
  AliasTable() = default;
  std::map<std::string, SpeechCommand> entries_;
};

enum class ResolveStatus { Match, NoMatch, Ambiguous };

struct ResolveResult {
  ResolveStatus status = ResolveStatus::NoMatch;
  SpeechCommand command = SpeechCommand::MoveRight;  // valid only on Match

  bool matched() const { return status == ResolveStatus::Match; }
};

/// Maps a raw utterance to a command: exact alias lookup on the normalized
/// text first, then keyword containment (all tokens of some alias appearing
/// in order as a subsequence of the utterance tokens).  Containment must be
/// unique across commands; two distinct candidates yield Ambiguous.
ResolveResult resolve(std::string_view raw, const AliasTable& table);

}  // namespace myofuse::speech
