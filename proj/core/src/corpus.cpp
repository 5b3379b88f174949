#include "delex/corpus.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "delex/errors.hpp"

namespace delex {

namespace {

constexpr std::string_view kSplitPunct = ",;.?!";

bool is_split_punct(char32_t cp) {
  return cp < 0x80 && kSplitPunct.find(static_cast<char>(cp)) != std::string_view::npos;
}

bool is_ascii_space(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\r' || cp == '\v' || cp == '\f';
}

// Decodes one UTF-8 codepoint at `i`, advancing it. Returns nullopt on a
// malformed sequence.
std::optional<char32_t> decode_utf8(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  unsigned char b0 = byte(i);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len;
  char32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return std::nullopt;  // stray continuation or invalid lead byte
  }
  if (i + len > s.size()) return std::nullopt;
  for (int k = 1; k < len; ++k) {
    unsigned char b = byte(i + k);
    if ((b & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (b & 0x3F);
  }
  // Reject overlong encodings and out-of-range values.
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
      cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return std::nullopt;
  }
  i += len;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace

char32_t fold_codepoint(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  // Latin-1 supplement: À..Þ except the multiplication sign.
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  // Latin Extended-A pairs (upper even / lower odd, with two odd runs).
  if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) {
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) {
    return (cp % 2 == 1) ? cp + 1 : cp;
  }
  if (cp == 0x178) return 0xFF;                   // Y with diaeresis
  if (cp == 0x218 || cp == 0x21A) return cp + 1;  // Romanian S/T with comma below
  return cp;
}

std::string TokenizerConfig::describe() const {
  std::string d = "v1;split=,;.?!;delims=,;";
  d += lowercase ? ";fold=latin" : ";fold=off";
  return d;
}

std::vector<std::string> tokenize(std::string_view line, const TokenizerConfig& config) {
  std::vector<std::string> tokens;
  std::string current;
  const auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  };
  std::size_t i = 0;
  while (i < line.size()) {
    std::size_t at = i;
    auto cp = decode_utf8(line, i);
    if (!cp) {
      throw ParseError("<line>", 0, "malformed UTF-8 at byte " + std::to_string(at));
    }
    if (is_ascii_space(*cp)) {
      flush();
    } else if (is_split_punct(*cp)) {
      flush();
      tokens.push_back(std::string(1, static_cast<char>(*cp)));
    } else {
      encode_utf8(config.lowercase ? fold_codepoint(*cp) : *cp, current);
    }
  }
  flush();
  return tokens;
}

bool is_punctuation_token(std::string_view token) {
  if (token.empty()) return false;
  for (unsigned char c : token) {
    if (c >= 0x80) return false;  // non-ASCII counts as word material
    if (std::isalnum(c)) return false;
  }
  return true;
}

bool is_context_delimiter(std::string_view token) { return token == "," || token == ";"; }

std::string digest_bytes(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TokenId Vocabulary::intern(std::string_view token) {
  auto it = ids_.find(std::string(token));
  if (it != ids_.end()) return it->second;
  TokenId id = static_cast<TokenId>(tokens_.size());
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), id);
  return id;
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Corpus::sentence_text(std::uint32_t id) const {
  std::vector<std::string> out;
  out.reserve(sentences_[id].size());
  for (TokenId t : sentences_[id]) out.push_back(vocab_.text(t));
  return out;
}

Corpus ingest(std::istream& in, const TokenizerConfig& config, const std::string& source_name) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed to read " + source_name);
  const std::string raw = buffer.str();

  Corpus corpus;
  corpus.tokenizer_ = config;
  corpus.source_digest_ = digest_bytes(raw);

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    std::size_t nl = raw.find('\n', pos);
    std::string_view line;
    if (nl == std::string::npos) {
      if (pos == raw.size()) break;
      line = std::string_view(raw).substr(pos);
      pos = raw.size() + 1;
    } else {
      line = std::string_view(raw).substr(pos, nl - pos);
      pos = nl + 1;
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> tokens;
    try {
      tokens = tokenize(line, config);
    } catch (const ParseError&) {
      throw ParseError(source_name, line_no, "malformed UTF-8");
    }
    if (tokens.empty()) continue;
    std::vector<TokenId> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(corpus.vocab_.intern(t));
    corpus.sentences_.push_back(std::move(ids));
  }

  if (corpus.sentences_.empty()) {
    throw ConfigError(source_name + ": corpus has no non-empty lines");
  }
  return corpus;
}

Corpus ingest_file(const std::string& path, const TokenizerConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file: " + path);
  return ingest(in, config, path);
}

}  // namespace delex
