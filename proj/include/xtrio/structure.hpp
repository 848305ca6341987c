#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "xtrio/error.hpp"
#include "xtrio/formula.hpp"
#include "xtrio/lasso.hpp"
#include "xtrio/nstime.hpp"
#include "xtrio/rng.hpp"

namespace xtrio {

using Label = std::set<std::string>;

/// One element of a history: the atoms holding from σ_i up to σ_{i+1} and the
/// kind of step that leads to σ_{i+1}.
struct HistoryStep {
  StepKind kind = StepKind::macro;
  Label label;

  friend bool operator==(const HistoryStep&, const HistoryStep&) = default;
};

/// Ultimately periodic history `prefix . loop^omega` with σ_0 = 0 and
/// σ_{i+1} = step(σ_i, kind_i). Equality compares the step sequences only.
class Structure {
 public:
  Structure() = default;
  Structure(std::vector<HistoryStep> prefix, std::vector<HistoryStep> loop, std::vector<std::string> atoms = {})
      : prefix_(std::move(prefix)), loop_(std::move(loop)), atoms_(std::move(atoms)) {
    if (loop_.empty()) throw ValidationError("structure loop must be non-empty");
    std::set<std::string> all(atoms_.begin(), atoms_.end());
    for (const auto* part : {&prefix_, &loop_})
      for (const auto& s : *part) all.insert(s.label.begin(), s.label.end());
    atoms_.assign(all.begin(), all.end());
  }

  const std::vector<HistoryStep>& prefix() const { return prefix_; }
  const std::vector<HistoryStep>& loop() const { return loop_; }
  /// Declared atoms together with every atom used in a label, sorted.
  const std::vector<std::string>& atoms() const { return atoms_; }

  std::size_t prefix_size() const { return prefix_.size(); }
  std::size_t loop_size() const { return loop_.size(); }

  const HistoryStep& step_at(std::size_t i) const { return lasso_at(prefix_, loop_, i); }
  StepKind kind(std::size_t i) const { return step_at(i).kind; }
  const Label& label(std::size_t i) const { return step_at(i).label; }

  /// A Zeno history has an all-micro loop and accumulates at a finite instant.
  bool zeno() const {
    return std::none_of(loop_.begin(), loop_.end(), [](const HistoryStep& s) { return s.kind == StepKind::macro; });
  }

  bool is_standard(std::size_t i) const { return i == 0 || kind(i - 1) == StepKind::macro; }

  /// σ_i, computed in closed form from the step kinds.
  NsInstant instant(std::size_t i) const {
    NsInstant t{};
    const std::size_t upto = std::min(i, prefix_.size());
    for (std::size_t j = 0; j < upto; ++j) t = step(t, prefix_[j].kind);
    if (i <= prefix_.size()) return t;
    const std::size_t rest = i - prefix_.size();
    const std::size_t rounds = rest / loop_.size();
    if (rounds > 0) {
      std::uint64_t macros = 0, trailing_micro = 0;
      for (const auto& s : loop_) {
        if (s.kind == StepKind::macro) {
          ++macros;
          trailing_micro = 0;
        } else {
          ++trailing_micro;
        }
      }
      if (macros == 0) t.inf_part += rounds * loop_.size();
      else t = {t.std_part + rounds * macros, trailing_micro};
    }
    for (std::size_t j = 0; j < rest % loop_.size(); ++j) t = step(t, loop_[j].kind);
    return t;
  }

  /// Standard part of the Zeno accumulation point, if any.
  std::optional<std::uint64_t> accumulation_point() const {
    if (!zeno()) return std::nullopt;
    return instant(prefix_.size()).std_part + 1;
  }

  friend bool operator==(const Structure& a, const Structure& b) {
    return a.prefix_ == b.prefix_ && a.loop_ == b.loop_;
  }

 private:
  std::vector<HistoryStep> prefix_;
  std::vector<HistoryStep> loop_;
  std::vector<std::string> atoms_;
};

/// Shortest representation of the same step sequence.
inline Structure canonicalize(const Structure& s) {
  auto prefix = s.prefix();
  auto loop = s.loop();
  canonicalize_lasso(prefix, loop);
  return Structure(std::move(prefix), std::move(loop), s.atoms());
}

struct StructureSpec {
  std::vector<std::string> atoms;
  std::vector<HistoryStep> prefix;
  std::vector<HistoryStep> loop;
};

/// Validated construction: the loop must be non-empty and every label atom
/// declared.
inline Structure build_structure(const StructureSpec& spec) {
  if (spec.loop.empty()) throw ValidationError("structure loop must be non-empty");
  const std::set<std::string> declared(spec.atoms.begin(), spec.atoms.end());
  for (const auto& a : declared)
    if (!is_atom_name(a)) throw ValidationError("invalid atom name '" + a + "'");
  for (const auto* part : {&spec.prefix, &spec.loop})
    for (const auto& s : *part)
      for (const auto& a : s.label)
        if (!declared.count(a)) throw ValidationError("undeclared atom '" + a + "'");
  return Structure(spec.prefix, spec.loop, spec.atoms);
}

/// Deterministic pseudo-random structure with prefix + loop <= max_steps.
/// A quarter of the draws get an all-micro (Zeno) loop.
inline Structure random_structure(std::uint64_t seed, std::size_t max_steps, const std::vector<std::string>& atoms) {
  if (max_steps < 1) throw ValidationError("max_steps must be at least 1");
  Rng rng(seed);
  const std::size_t total = rng.between(1, max_steps);
  const std::size_t loop_len = rng.between(1, total);
  const bool force_zeno = rng.chance(1, 4);
  auto draw = [&](bool in_loop) {
    HistoryStep s;
    s.kind = (in_loop && force_zeno) || rng.chance(1, 2) ? StepKind::micro : StepKind::macro;
    for (const auto& a : atoms)
      if (rng.chance(1, 2)) s.label.insert(a);
    return s;
  };
  std::vector<HistoryStep> prefix, loop;
  for (std::size_t i = 0; i + loop_len < total; ++i) prefix.push_back(draw(false));
  for (std::size_t i = 0; i < loop_len; ++i) loop.push_back(draw(true));
  if (!force_zeno && std::none_of(loop.begin(), loop.end(), [](auto& s) { return s.kind == StepKind::macro; }))
    loop[rng.below(loop.size())].kind = StepKind::macro;
  return Structure(std::move(prefix), std::move(loop), atoms);
}

namespace detail {

/// Splits `text` into lines with comments removed and whitespace-separated
/// words, keeping the 1-based line number.
struct WordLine {
  int line;
  std::vector<std::string> words;
};

inline std::vector<WordLine> word_lines(std::string_view text) {
  std::vector<WordLine> out;
  int line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    ++line;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view l = text.substr(pos, end - pos);
    if (auto h = l.find('#'); h != std::string_view::npos) l = l.substr(0, h);
    std::istringstream is{std::string(l)};
    WordLine wl{line, {}};
    for (std::string w; is >> w;) wl.words.push_back(w);
    if (!wl.words.empty()) out.push_back(std::move(wl));
    pos = end + 1;
  }
  return out;
}

inline std::size_t parse_count(const std::string& w, int line) {
  if (w.empty() || !std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw ParseError("expected a natural number, found '" + w + "'", line, 1);
  try {
    return std::stoul(w);
  } catch (const std::exception&) {
    throw ParseError("number out of range '" + w + "'", line, 1);
  }
}

/// Shared reader for the "prefix N / loop M / INDEX: TAG atoms" formats.
/// `tags` lists the accepted tag words; the callback receives the tag and
/// the remaining words of each indexed line in order.
template <class OnEntry>
std::pair<std::size_t, std::size_t> read_indexed(std::string_view text, std::vector<std::string>* atoms,
                                                 std::initializer_list<std::string_view> tags, OnEntry on_entry) {
  std::optional<std::size_t> prefix, loop;
  std::size_t next_index = 0;
  for (const auto& wl : word_lines(text)) {
    const auto& w = wl.words;
    if (w[0] == "prefix" || w[0] == "loop") {
      if (w.size() != 2) throw ParseError("expected '" + w[0] + " N'", wl.line, 1);
      (w[0] == "prefix" ? prefix : loop) = parse_count(w[1], wl.line);
      continue;
    }
    if (w[0] == "atoms") {
      if (!atoms) throw ParseError("unexpected 'atoms' line", wl.line, 1);
      atoms->insert(atoms->end(), w.begin() + 1, w.end());
      continue;
    }
    if (w[0].back() != ':') throw ParseError("expected 'INDEX:' or a header line", wl.line, 1);
    const std::size_t index = parse_count(w[0].substr(0, w[0].size() - 1), wl.line);
    if (index != next_index)
      throw ParseError("expected index " + std::to_string(next_index) + ", found " + std::to_string(index), wl.line,
                       1);
    if (w.size() < 2 || std::find(tags.begin(), tags.end(), w[1]) == tags.end())
      throw ParseError("missing or unknown tag on entry " + std::to_string(index), wl.line, 1);
    ++next_index;
    on_entry(w[1], std::vector<std::string>(w.begin() + 2, w.end()), wl.line);
  }
  if (!prefix || !loop) throw ParseError("missing 'prefix' or 'loop' header", 1, 1);
  if (*loop == 0) throw ValidationError("loop must be non-empty");
  if (*prefix + *loop != next_index)
    throw ParseError("expected " + std::to_string(*prefix + *loop) + " entries, found " + std::to_string(next_index),
                     1, 1);
  return {*prefix, *loop};
}

}  // namespace detail

/// Reads the ".xtr" structure format:
///   prefix N
///   loop M
///   atoms p q        (optional; atoms used in labels are always declared)
///   0: micro p
///   1: macro
inline Structure parse_structure(std::string_view text) {
  std::vector<std::string> atoms;
  std::vector<HistoryStep> steps;
  const auto [p, l] = detail::read_indexed(text, &atoms, {"micro", "macro"},
                                           [&](const std::string& tag, std::vector<std::string> words, int line) {
                                             HistoryStep s;
                                             s.kind = tag == "micro" ? StepKind::micro : StepKind::macro;
                                             for (auto& a : words) {
                                               if (!is_atom_name(a))
                                                 throw ParseError("invalid atom name '" + a + "'", line, 1);
                                               s.label.insert(std::move(a));
                                             }
                                             steps.push_back(std::move(s));
                                           });
  for (const auto& s : steps) atoms.insert(atoms.end(), s.label.begin(), s.label.end());
  std::vector<HistoryStep> prefix(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(p));
  std::vector<HistoryStep> loop(steps.begin() + static_cast<std::ptrdiff_t>(p), steps.end());
  return build_structure({atoms, std::move(prefix), std::move(loop)});
}

inline std::string render_structure(const Structure& s) {
  std::ostringstream os;
  os << "prefix " << s.prefix_size() << "\nloop " << s.loop_size() << "\n";
  if (!s.atoms().empty()) {
    os << "atoms";
    for (const auto& a : s.atoms()) os << ' ' << a;
    os << "\n";
  }
  for (std::size_t i = 0; i < s.prefix_size() + s.loop_size(); ++i) {
    os << i << ": " << to_string(s.kind(i));
    for (const auto& a : s.label(i)) os << ' ' << a;
    os << "\n";
  }
  return os.str();
}

}  // namespace xtrio
