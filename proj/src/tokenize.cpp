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


#include "topicgraph/tokenize.hpp"

#include <fstream>
#include <istream>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "topicgraph/errors.hpp"

namespace topicgraph {

namespace {

constexpr UChar32 kZwnj = 0x200C;
constexpr UChar32 kZwj = 0x200D;
constexpr UChar32 kVs16 = 0xFE0F;
constexpr UChar32 kKeycap = 0x20E3;
constexpr UChar32 kTatweel = 0x0640;

struct CodePoint {
  UChar32 cp;
  std::size_t begin;  // byte offsets into the source text
  std::size_t end;
};

std::vector<CodePoint> decode(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back({c, static_cast<std::size_t>(start), static_cast<std::size_t>(i)});
  }
  return out;
}

bool is_mark(UChar32 c) {
  const auto type = u_charType(c);
  return type == U_NON_SPACING_MARK || type == U_COMBINING_SPACING_MARK || type == U_ENCLOSING_MARK;
}

bool is_letter(UChar32 c) { return c >= 0 && u_isalpha(c) && c != kTatweel; }
bool is_digit(UChar32 c) { return c >= 0 && u_isdigit(c); }

bool is_emoji(UChar32 c) {
  return c >= 0 && (u_hasBinaryProperty(c, UCHAR_EXTENDED_PICTOGRAPHIC) ||
                    u_hasBinaryProperty(c, UCHAR_REGIONAL_INDICATOR));
}

bool is_emoji_continuation(UChar32 c) {
  return c == kVs16 || c == kKeycap || u_hasBinaryProperty(c, UCHAR_EMOJI_MODIFIER);
}

bool is_name_char(UChar32 c) { return is_letter(c) || is_digit(c) || is_mark(c) || c == '_'; }

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text), cps_(decode(text)) {}

  std::vector<Token> run() {
    while (pos_ < cps_.size()) {
      if (!(try_url() || try_prefixed('@', TokenKind::mention) || try_prefixed('#', TokenKind::hashtag) ||
            try_emoji() || try_number() || try_word())) {
        ++pos_;
      }
    }
    return std::move(tokens_);
  }

 private:
  UChar32 at(std::size_t i) const { return i < cps_.size() ? cps_[i].cp : -1; }

  void emit(std::size_t first, std::size_t last, TokenKind kind) {
    tokens_.push_back({std::string(text_.substr(cps_[first].begin, cps_[last - 1].end - cps_[first].begin)), kind});
    pos_ = last;
  }

  bool starts_with_ascii_ci(std::size_t i, std::string_view prefix) const {
    for (char ch : prefix) {
      const UChar32 c = at(i++);
      if (c < 0 || c > 0x7f || std::tolower(static_cast<int>(c)) != ch) return false;
    }
    return true;
  }

  bool try_url() {
    if (!(starts_with_ascii_ci(pos_, "http://") || starts_with_ascii_ci(pos_, "https://") ||
          starts_with_ascii_ci(pos_, "www."))) {
      return false;
    }
    std::size_t end = pos_;
    while (end < cps_.size() && !u_isUWhiteSpace(at(end))) ++end;
    // Sentence punctuation glued to the end of a link is not part of it.
    static constexpr std::u32string_view kTrailing = U".,;:!?)]}'\"،؛؟۔";
    while (end > pos_ + 1 && kTrailing.find(static_cast<char32_t>(at(end - 1))) != std::u32string_view::npos) --end;
    emit(pos_, end, TokenKind::url);
    return true;
  }

  bool try_prefixed(UChar32 sigil, TokenKind kind) {
    if (at(pos_) != sigil || !is_name_char(at(pos_ + 1)) || is_mark(at(pos_ + 1))) return false;
    std::size_t end = pos_ + 1;
    while (is_name_char(at(end)) || (at(end) == kZwnj && is_name_char(at(end + 1)))) ++end;
    emit(pos_, end, kind);
    return true;
  }

  bool try_emoji() {
    std::size_t end = pos_;
    const UChar32 c = at(pos_);
    if ((c == '#' || c == '*' || (c >= '0' && c <= '9')) &&
        (at(pos_ + 1) == kKeycap || (at(pos_ + 1) == kVs16 && at(pos_ + 2) == kKeycap))) {
      end = pos_ + (at(pos_ + 1) == kKeycap ? 2 : 3);
      emit(pos_, end, TokenKind::emoji);
      return true;
    }
    if (!is_emoji(c)) return false;
    const bool regional = u_hasBinaryProperty(c, UCHAR_REGIONAL_INDICATOR);
    ++end;
    if (regional && u_hasBinaryProperty(at(end), UCHAR_REGIONAL_INDICATOR)) ++end;
    for (;;) {
      while (is_emoji_continuation(at(end))) ++end;
      if (at(end) == kZwj && is_emoji(at(end + 1))) {
        end += 2;
        continue;
      }
      break;
    }
    emit(pos_, end, TokenKind::emoji);
    return true;
  }

  bool try_number() {
    if (!is_digit(at(pos_))) return false;
    std::size_t end = pos_ + 1;
    for (;;) {
      const UChar32 c = at(end);
      if (is_digit(c)) {
        ++end;
      } else if ((c == '.' || c == ',' || c == 0x066B || c == 0x066C || c == '/') && is_digit(at(end + 1))) {
        end += 2;
      } else {
        break;
      }
    }
    emit(pos_, end, TokenKind::number);
    return true;
  }

  bool try_word() {
    if (!is_letter(at(pos_))) return false;
    std::size_t end = pos_ + 1;
    bool compound = false;
    for (;;) {
      const UChar32 c = at(end);
      if (is_letter(c) || is_mark(c) || is_digit(c) || c == kTatweel) {
        ++end;
      } else if (c == kZwnj && is_letter(at(end + 1))) {
        compound = true;
        end += 2;
      } else {
        break;
      }
    }
    emit(pos_, end, compound ? TokenKind::compound_word : TokenKind::word);
    return true;
  }

  std::string_view text_;
  std::vector<CodePoint> cps_;
  std::size_t pos_ = 0;
  std::vector<Token> tokens_;
};

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) throw Error("ICU NFC normalizer unavailable");
  return *n;
}

icu::UnicodeString to_nfc(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(s, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  return out;
}

UChar32 map_char(UChar32 c) {
  switch (c) {
    case 0x064A:  // Arabic Yeh
    case 0x0649:  // Alef Maksura
      return 0x06CC;
    case 0x0643:  // Arabic Kaf
      return 0x06A9;
    default:
      break;
  }
  if (c >= 0x0660 && c <= 0x0669) return '0' + (c - 0x0660);
  if (c >= 0x06F0 && c <= 0x06F9) return '0' + (c - 0x06F0);
  UErrorCode status = U_ZERO_ERROR;
  if (uscript_getScript(c, &status) == USCRIPT_LATIN && U_SUCCESS(status)) return u_foldCase(c, U_FOLD_CASE_DEFAULT);
  return c;
}

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::word: return "word";
    case TokenKind::compound_word: return "compound-word";
    case TokenKind::number: return "number";
    case TokenKind::emoji: return "emoji";
    case TokenKind::url: return "url";
    case TokenKind::hashtag: return "hashtag";
    case TokenKind::mention: return "mention";
  }
  return "unknown";
}

std::vector<Token> tokenize(std::string_view text) { return Scanner(text).run(); }

std::string normalize(std::string_view word) {
  const icu::UnicodeString composed =
      to_nfc(icu::UnicodeString::fromUTF8(icu::StringPiece(word.data(), static_cast<int32_t>(word.size()))));

  icu::UnicodeString mapped;
  bool pending_zwnj = false;
  for (int32_t i = 0; i < composed.length();) {
    const UChar32 c = composed.char32At(i);
    i += U16_LENGTH(c);
    if (c == kTatweel) continue;
    if (c == kZwnj) {
      pending_zwnj = !mapped.isEmpty();
      continue;
    }
    if (pending_zwnj) {
      mapped.append(kZwnj);
      pending_zwnj = false;
    }
    mapped.append(map_char(c));
  }

  std::string out;
  to_nfc(mapped).toUTF8String(out);
  return out;
}

ProcessedPost filter_tokens(std::span<const Token> tokens, const StopwordSet& stopwords) {
  ProcessedPost post;
  for (const Token& t : tokens) {
    if (t.kind != TokenKind::word && t.kind != TokenKind::compound_word && t.kind != TokenKind::number) continue;
    std::string w = normalize(t.surface);
    if (w.empty() || stopwords.contains(w)) continue;
    post.words.push_back(std::move(w));
  }
  return post;
}

StopwordSet parse_stopwords(std::istream& in) {
  StopwordSet set;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r\n");
    std::string entry = normalize(std::string_view(line).substr(first, last - first + 1));
    if (!entry.empty()) set.insert(std::move(entry));
  }
  return set;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_stopwords(in);
}

}  // namespace topicgraph
