#include "snipfit/corpus/keywords.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <set>

#include "snipfit/corpus/porter.hpp"
#include "snipfit/error.hpp"

namespace snipfit::data {
extern const std::string_view stopwords_en;
extern const std::string_view lemma_exceptions;
extern const std::string_view task_suggestions;
}  // namespace snipfit::data

namespace snipfit::corpus {

std::string_view to_string(KeywordMode mode) noexcept {
  switch (mode) {
    case KeywordMode::none: return "none";
    case KeywordMode::stem: return "stem";
    case KeywordMode::lemma: return "lemma";
  }
  return "none";
}

KeywordMode parse_keyword_mode(std::string_view name) {
  if (name == "none") return KeywordMode::none;
  if (name == "stem") return KeywordMode::stem;
  if (name == "lemma") return KeywordMode::lemma;
  throw Error(ErrorKind::invalid_argument, "unknown keyword mode '" + std::string(name) + "'");
}

namespace {

bool is_token_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80;
}

bool is_alpha_word(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    std::string_view v(cur);
    while (!v.empty() && v.front() == '\'') v.remove_prefix(1);
    while (!v.empty() && v.back() == '\'') v.remove_suffix(1);
    if (!v.empty()) out.emplace_back(v);
    cur.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_token_char(c)) {
      cur.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

std::string stem_fixed(std::string_view word) {
  std::string cur(word);
  while (true) {
    std::string next = porter_stem(cur);
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

std::vector<std::string> parse_word_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line =
        trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    if (!line.empty() && line.front() != '#') out.emplace_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_pair_list(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& line : parse_word_list(text)) {
    const auto sep = line.find_first_of(" \t");
    if (sep == std::string::npos) continue;
    const auto rest = trim(std::string_view(line).substr(sep));
    if (rest.empty()) continue;
    out.emplace_back(line.substr(0, sep), std::string(rest));
  }
  return out;
}

std::vector<std::string> bundled_stop_words() { return parse_word_list(data::stopwords_en); }

std::vector<std::pair<std::string, std::string>> bundled_lemma_pairs() {
  return parse_pair_list(data::lemma_exceptions);
}

std::vector<std::string> bundled_task_suggestions() {
  return parse_word_list(data::task_suggestions);
}

KeywordProcessor::KeywordProcessor(KeywordOptions options)
    : KeywordProcessor(options, bundled_stop_words(), bundled_lemma_pairs()) {}

KeywordProcessor::KeywordProcessor(KeywordOptions options, const std::vector<std::string>& stop_words,
                                   const std::vector<std::pair<std::string, std::string>>& lemma_pairs)
    : options_(options) {
  if (options_.mode == KeywordMode::lemma) {
    std::map<std::string, std::string> raw;
    for (const auto& [form, base] : lemma_pairs) {
      if (!is_alpha_word(form) || !is_alpha_word(base)) continue;
      auto key = stem_fixed(form);
      auto val = stem_fixed(base);
      if (key != val) raw.emplace(std::move(key), std::move(val));
    }
    // Collapse chains so every value is terminal; drop anything caught in a cycle.
    for (const auto& [key, val] : raw) {
      std::set<std::string> seen{key};
      std::string cur = val;
      bool cyclic = false;
      while (true) {
        auto it = raw.find(cur);
        if (it == raw.end()) break;
        if (!seen.insert(cur).second) {
          cyclic = true;
          break;
        }
        cur = it->second;
      }
      if (!cyclic && cur != key) lemma_.emplace(key, cur);
    }
  }
  if (options_.omit_stop) {
    for (const auto& w : stop_words) {
      for (const auto& tok : tokenize(w)) filtered_.insert(normalize(tok));
    }
    filtered_.insert(normalize("java"));
  }
}

std::string KeywordProcessor::normalize(std::string_view token) const {
  if (options_.mode == KeywordMode::none || !is_alpha_word(token)) return std::string(token);
  std::string s = stem_fixed(token);
  if (options_.mode == KeywordMode::lemma) {
    if (auto it = lemma_.find(s); it != lemma_.end()) return it->second;
  }
  return s;
}

bool KeywordProcessor::is_filtered(std::string_view processed) const {
  return filtered_.find(std::string(processed)) != filtered_.end();
}

std::vector<Keyword> KeywordProcessor::process(std::string_view text) const {
  std::vector<Keyword> out;
  std::set<std::string> seen;
  for (auto& tok : tokenize(text)) {
    std::string processed = normalize(tok);
    if (options_.omit_stop && is_filtered(processed)) continue;
    if (!seen.insert(processed).second) continue;
    out.push_back(Keyword{std::move(tok), std::move(processed)});
  }
  return out;
}

const KeywordProcessor& KeywordProcessor::shared(KeywordOptions options) {
  static std::once_flag once;
  static std::array<std::unique_ptr<KeywordProcessor>, 6> cache;
  std::call_once(once, [] {
    for (int m = 0; m < 3; ++m) {
      for (int s = 0; s < 2; ++s) {
        cache[static_cast<std::size_t>(m * 2 + s)] = std::make_unique<KeywordProcessor>(
            KeywordOptions{static_cast<KeywordMode>(m), s == 1});
      }
    }
  });
  return *cache[static_cast<std::size_t>(static_cast<int>(options.mode) * 2 + (options.omit_stop ? 1 : 0))];
}

std::vector<Keyword> process_keywords(std::string_view text, KeywordMode mode, bool omit_stop) {
  return KeywordProcessor::shared({mode, omit_stop}).process(text);
}

}  // namespace snipfit::corpus
