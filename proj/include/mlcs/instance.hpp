#pragma once

// LCS problem instance: the alphabet, the input strings, and the dense
// next-occurrence / suffix-count tables the search reads on every expansion.

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mlcs {

/// Index of a symbol within its alphabet.
using Symbol = std::uint8_t;

inline constexpr std::uint32_t kNoOccurrence = static_cast<std::uint32_t>(-1);

class InstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ordered set of distinct byte symbols with a reverse lookup.
class Alphabet {
 public:
  Alphabet() { index_.fill(-1); }
  explicit Alphabet(std::string_view symbols);

  std::size_t size() const noexcept { return symbols_.size(); }
  char symbol(Symbol s) const { return symbols_.at(s); }
  std::optional<Symbol> index_of(char c) const noexcept {
    const int idx = index_[static_cast<unsigned char>(c)];
    if (idx < 0) return std::nullopt;
    return static_cast<Symbol>(idx);
  }
  bool contains(char c) const noexcept { return index_of(c).has_value(); }
  const std::string& symbols() const noexcept { return symbols_; }

  /// "ABC..." for sizes up to 62 (upper case, lower case, digits).
  static Alphabet first_letters(std::size_t size);

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

 private:
  std::string symbols_;
  std::array<std::int16_t, 256> index_{};
};

class Instance {
 public:
  /// Throws InstanceError for fewer than two strings or foreign symbols.
  static Instance build(Alphabet alphabet, std::vector<std::string> strings);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t sigma() const noexcept { return alphabet_.size(); }
  std::size_t num_strings() const noexcept { return texts_.size(); }
  const std::string& text(std::size_t i) const { return texts_.at(i); }
  const std::vector<std::string>& texts() const noexcept { return texts_; }
  std::uint32_t length(std::size_t i) const noexcept { return lengths_[i]; }
  std::span<const std::uint32_t> lengths() const noexcept { return lengths_; }
  std::uint32_t min_length() const noexcept { return min_length_; }
  std::uint32_t max_length() const noexcept { return max_length_; }

  /// First j >= pos with strings[i][j] == s, or kNoOccurrence. pos may equal |s_i|.
  std::uint32_t next_occurrence(std::size_t i, std::uint32_t pos, Symbol s) const noexcept {
    return next_occ_[row(i, pos) + s];
  }
  /// Occurrences of s in strings[i][pos..].
  std::uint32_t suffix_count(std::size_t i, std::uint32_t pos, Symbol s) const noexcept {
    return suffix_count_[row(i, pos) + s];
  }

 private:
  Instance() = default;

  std::size_t row(std::size_t i, std::uint32_t pos) const noexcept {
    return (row_offset_[i] + pos) * alphabet_.size();
  }

  Alphabet alphabet_;
  std::vector<std::string> texts_;
  std::vector<std::uint32_t> lengths_;
  std::vector<std::size_t> row_offset_;
  std::vector<std::uint32_t> next_occ_;
  std::vector<std::uint32_t> suffix_count_;
  std::uint32_t min_length_ = 0;
  std::uint32_t max_length_ = 0;
};

// Cursor-level primitives. A cursor vector holds, per string, the index of
// the first character of the remainder.

/// Writes the child cursors for `s` into `out`; false if some remainder lacks s.
bool advance_cursors(const Instance& inst, std::span<const std::uint32_t> from, Symbol s,
                     std::span<std::uint32_t> out) noexcept;
std::uint32_t upper_bound(const Instance& inst, std::span<const std::uint32_t> cursors) noexcept;
std::uint32_t min_remaining(const Instance& inst, std::span<const std::uint32_t> cursors) noexcept;
std::uint32_t max_remaining(const Instance& inst, std::span<const std::uint32_t> cursors) noexcept;

struct RemainderStats {
  double mean = 0.0;
  double variance = 0.0;  // sample variance, N − 1 denominator
};
RemainderStats remainder_stats(const Instance& inst, std::span<const std::uint32_t> cursors);

/// Persistent parent chain; sharing a prefix costs nothing.
struct PathLink {
  Symbol symbol;
  std::shared_ptr<const PathLink> parent;
};

struct NodeState {
  std::vector<std::uint32_t> cursors;
  std::uint32_t depth = 0;
  std::optional<Symbol> last_symbol;
  std::shared_ptr<const PathLink> path;
};

NodeState root_state(const Instance& inst);
std::optional<NodeState> successor(const Instance& inst, const NodeState& state, Symbol s);
std::vector<std::uint32_t> remaining_lengths(const Instance& inst, const NodeState& state);
std::uint32_t upper_bound(const Instance& inst, const NodeState& state);
RemainderStats stats(const Instance& inst, const NodeState& state);
std::string reconstruct_solution(const Instance& inst, const NodeState& state);

/// Arena of (parent, symbol) records used by the search to spell solutions
/// without copying prefixes into every node.
class PathArena {
 public:
  using Id = std::int32_t;
  static constexpr Id kRoot = -1;

  Id push(Id parent, Symbol s) {
    records_.push_back({parent, s});
    return static_cast<Id>(records_.size() - 1);
  }
  std::string spell(Id id, const Alphabet& alphabet) const;
  std::size_t size() const noexcept { return records_.size(); }

 private:
  struct Record {
    Id parent;
    Symbol symbol;
  };
  std::vector<Record> records_;
};

}  // namespace mlcs
