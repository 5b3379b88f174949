#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace delex {

using TokenId = std::uint32_t;

// Normalization knobs. The splitting rules themselves are fixed: whitespace
// separates tokens, and , ; . ? ! always become standalone tokens. Context
// boundaries are drawn only at , and ; (see context.hpp).
struct TokenizerConfig {
  bool lowercase = true;  // Latin-script case folding; diacritics preserved

  // Stable description string; part of the index cache key and run manifest.
  std::string describe() const;

  bool operator==(const TokenizerConfig&) const = default;
};

// Lowercases one codepoint. Covers ASCII, Latin-1 and the Latin Extended
// blocks (enough for Romanian comma-below letters); anything else is
// returned unchanged.
char32_t fold_codepoint(char32_t cp);

// Splits a line into normalized tokens. Throws ParseError on malformed
// UTF-8. An empty or whitespace-only line yields an empty sequence.
std::vector<std::string> tokenize(std::string_view line, const TokenizerConfig& config = {});

// A token made only of punctuation (no letter, digit or non-ASCII byte).
// Such tokens are never candidates.
bool is_punctuation_token(std::string_view token);

// Context boundary tokens: "," and ";".
bool is_context_delimiter(std::string_view token);

// FNV-1a 64 over raw bytes, rendered as "fnv1a64:<16 hex digits>".
std::string digest_bytes(std::string_view bytes);

// Insertion-ordered token table; ids are dense and 0-based.
class Vocabulary {
 public:
  TokenId intern(std::string_view token);
  std::optional<TokenId> find(std::string_view token) const;
  const std::string& text(TokenId id) const { return tokens_[id]; }
  std::size_t size() const { return tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

// Tokenized sentences plus the vocabulary they are encoded against.
// Built by ingest(); immutable afterwards and safe for concurrent
// read-only use. A default-constructed Corpus is empty and unusable.
class Corpus {
 public:
  Corpus() = default;

  std::size_t sentence_count() const { return sentences_.size(); }
  std::span<const TokenId> sentence(std::uint32_t id) const {
    return sentences_[id];
  }
  std::vector<std::string> sentence_text(std::uint32_t id) const;

  const Vocabulary& vocab() const { return vocab_; }
  const std::string& token_text(TokenId id) const { return vocab_.text(id); }
  const std::string& source_digest() const { return source_digest_; }
  const TokenizerConfig& tokenizer() const { return tokenizer_; }

  friend Corpus ingest(std::istream& in, const TokenizerConfig& config, const std::string& source_name);

 private:
  Vocabulary vocab_;
  std::vector<std::vector<TokenId>> sentences_;
  std::string source_digest_;
  TokenizerConfig tokenizer_;
};

// Reads one sentence per non-empty line; sentence ids follow input order.
// The digest is computed over the raw bytes of the whole stream. Throws
// ParseError (bad UTF-8, with line number), ConfigError (no usable line),
// IoError (unreadable stream).
Corpus ingest(std::istream& in, const TokenizerConfig& config = {}, const std::string& source_name = "<stream>");
Corpus ingest_file(const std::string& path, const TokenizerConfig& config = {});

}  // namespace delex
