/*
 * Copyright 2026 The topicgraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace topicgraph {

enum class TokenKind { word, compound_word, number, emoji, url, hashtag, mention };

std::string_view to_string(TokenKind kind);

struct Token {
  std::string surface;
  TokenKind kind = TokenKind::word;

  bool operator==(const Token&) const = default;
};

/// Normalized word and number tokens of a post, in order, duplicates kept.
struct ProcessedPost {
  std::vector<std::string> words;

  bool operator==(const ProcessedPost&) const = default;
};

using StopwordSet = std::unordered_set<std::string>;

/// Splits UTF-8 text into typed tokens. At each position the kinds are tried
/// in the order url, mention, hashtag, emoji, number, word; anything that
/// starts none of them is a separator. Invalid UTF-8 bytes are separators.
std::vector<Token> tokenize(std::string_view text);

/// NFC, Arabic Yeh/Alef Maksura -> Persian Yeh, Arabic Kaf -> Persian Kaf,
/// Arabic-Indic and Persian digits -> ASCII, Latin letters case-folded,
/// tatweel removed, ZWNJ trimmed from the ends and collapsed inside.
std::string normalize(std::string_view word);

/// Keeps word, compound-word and number tokens whose normalized form is not a
/// stopword.
ProcessedPost filter_tokens(std::span<const Token> tokens, const StopwordSet& stopwords);

inline ProcessedPost preprocess(std::string_view text, const StopwordSet& stopwords) {
  return filter_tokens(tokenize(text), stopwords);
}

/// One entry per line; blank lines and text after `#` are ignored. Entries are
/// normalized on load.
StopwordSet parse_stopwords(std::istream& in);
StopwordSet load_stopwords(const std::filesystem::path& path);

}  // namespace topicgraph
