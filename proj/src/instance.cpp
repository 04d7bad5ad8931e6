#include "mlcs/instance.hpp"

#include <algorithm>
#include <limits>

namespace mlcs {

Alphabet::Alphabet(std::string_view symbols) {
  index_.fill(-1);
  if (symbols.size() > 256) throw InstanceError("alphabet larger than 256 symbols");
  for (char c : symbols) {
    auto& slot = index_[static_cast<unsigned char>(c)];
    if (slot >= 0) {
      throw InstanceError(std::string("duplicate alphabet symbol '") + c + "'");
    }
    slot = static_cast<std::int16_t>(symbols_.size());
    symbols_.push_back(c);
  }
}

Alphabet Alphabet::first_letters(std::size_t size) {
  static constexpr std::string_view kPool =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
  if (size == 0 || size > kPool.size()) {
    throw InstanceError("generated alphabets hold 1 to " + std::to_string(kPool.size()) +
                        " symbols");
  }
  return Alphabet(kPool.substr(0, size));
}

Instance Instance::build(Alphabet alphabet, std::vector<std::string> strings) {
  if (alphabet.size() == 0) throw InstanceError("alphabet is empty");
  if (strings.size() < 2) {
    throw InstanceError("an instance needs at least two strings, got " +
                        std::to_string(strings.size()));
  }

  Instance inst;
  inst.alphabet_ = std::move(alphabet);
  inst.texts_ = std::move(strings);
  const std::size_t sigma = inst.alphabet_.size();
  const std::size_t n = inst.texts_.size();

  inst.lengths_.resize(n);
  inst.row_offset_.resize(n);
  std::size_t rows = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& text = inst.texts_[i];
    if (text.size() >= std::numeric_limits<std::uint32_t>::max()) {
      throw InstanceError("string " + std::to_string(i + 1) + " is too long");
    }
    for (std::size_t j = 0; j < text.size(); ++j) {
      if (!inst.alphabet_.contains(text[j])) {
        throw InstanceError("string " + std::to_string(i + 1) + " position " + std::to_string(j) +
                            ": symbol '" + text[j] + "' is not in the alphabet");
      }
    }
    inst.lengths_[i] = static_cast<std::uint32_t>(text.size());
    inst.row_offset_[i] = rows;
    rows += text.size() + 1;
  }
  inst.min_length_ = *std::min_element(inst.lengths_.begin(), inst.lengths_.end());
  inst.max_length_ = *std::max_element(inst.lengths_.begin(), inst.lengths_.end());

  inst.next_occ_.assign(rows * sigma, kNoOccurrence);
  inst.suffix_count_.assign(rows * sigma, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& text = inst.texts_[i];
    // The row at pos = |s_i| stays at (none, 0); fill backwards from there.
    for (std::size_t pos = text.size(); pos-- > 0;) {
      const std::size_t here = inst.row(i, static_cast<std::uint32_t>(pos));
      const std::size_t next = here + sigma;
      std::copy_n(inst.next_occ_.begin() + next, sigma, inst.next_occ_.begin() + here);
      std::copy_n(inst.suffix_count_.begin() + next, sigma, inst.suffix_count_.begin() + here);
      const Symbol s = *inst.alphabet_.index_of(text[pos]);
      inst.next_occ_[here + s] = static_cast<std::uint32_t>(pos);
      ++inst.suffix_count_[here + s];
    }
  }
  return inst;
}

bool advance_cursors(const Instance& inst, std::span<const std::uint32_t> from, Symbol s,
                     std::span<std::uint32_t> out) noexcept {
  for (std::size_t i = 0; i < from.size(); ++i) {
    const std::uint32_t hit = inst.next_occurrence(i, from[i], s);
    if (hit == kNoOccurrence) return false;
    out[i] = hit + 1;
  }
  return true;
}

std::uint32_t upper_bound(const Instance& inst, std::span<const std::uint32_t> cursors) noexcept {
  std::uint32_t total = 0;
  for (std::size_t s = 0; s < inst.sigma(); ++s) {
    std::uint32_t least = std::numeric_limits<std::uint32_t>::max();
    for (std::size_t i = 0; i < cursors.size() && least > 0; ++i) {
      least = std::min(least, inst.suffix_count(i, cursors[i], static_cast<Symbol>(s)));
    }
    total += least;
  }
  return total;
}

std::uint32_t min_remaining(const Instance& inst, std::span<const std::uint32_t> cursors) noexcept {
  std::uint32_t least = std::numeric_limits<std::uint32_t>::max();
  for (std::size_t i = 0; i < cursors.size(); ++i) {
    least = std::min(least, inst.length(i) - cursors[i]);
  }
  return cursors.empty() ? 0 : least;
}

std::uint32_t max_remaining(const Instance& inst, std::span<const std::uint32_t> cursors) noexcept {
  std::uint32_t most = 0;
  for (std::size_t i = 0; i < cursors.size(); ++i) {
    most = std::max(most, inst.length(i) - cursors[i]);
  }
  return most;
}

RemainderStats remainder_stats(const Instance& inst, std::span<const std::uint32_t> cursors) {
  const std::size_t n = cursors.size();
  if (n < 2) throw InstanceError("sample variance needs at least two strings");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += inst.length(i) - cursors[i];
  RemainderStats out;
  out.mean = sum / static_cast<double>(n);
  double squares = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(inst.length(i) - cursors[i]) - out.mean;
    squares += d * d;
  }
  out.variance = squares / static_cast<double>(n - 1);
  return out;
}

NodeState root_state(const Instance& inst) {
  NodeState root;
  root.cursors.assign(inst.num_strings(), 0);
  return root;
}

std::optional<NodeState> successor(const Instance& inst, const NodeState& state, Symbol s) {
  if (s >= inst.sigma()) return std::nullopt;
  NodeState child;
  child.cursors.resize(state.cursors.size());
  if (!advance_cursors(inst, state.cursors, s, child.cursors)) return std::nullopt;
  child.depth = state.depth + 1;
  child.last_symbol = s;
  child.path = std::make_shared<const PathLink>(PathLink{s, state.path});
  return child;
}

std::vector<std::uint32_t> remaining_lengths(const Instance& inst, const NodeState& state) {
  std::vector<std::uint32_t> out(state.cursors.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = inst.length(i) - state.cursors[i];
  return out;
}

std::uint32_t upper_bound(const Instance& inst, const NodeState& state) {
  return upper_bound(inst, std::span<const std::uint32_t>(state.cursors));
}

RemainderStats stats(const Instance& inst, const NodeState& state) {
  return remainder_stats(inst, state.cursors);
}

std::string reconstruct_solution(const Instance& inst, const NodeState& state) {
  std::string out;
  out.reserve(state.depth);
  for (const PathLink* link = state.path.get(); link != nullptr; link = link->parent.get()) {
    out.push_back(inst.alphabet().symbol(link->symbol));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string PathArena::spell(Id id, const Alphabet& alphabet) const {
  std::string out;
  while (id != kRoot) {
    const Record& r = records_.at(static_cast<std::size_t>(id));
    out.push_back(alphabet.symbol(r.symbol));
    id = r.parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace mlcs
