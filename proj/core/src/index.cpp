#include "delex/index.hpp"

#include <cstring>
#include <fstream>

#include "delex/errors.hpp"

namespace delex {

CorpusIndex CorpusIndex::build(const Corpus& corpus) {
  CorpusIndex index;
  const std::size_t vocab = corpus.vocab().size();
  index.sentence_count_ = corpus.sentence_count();
  index.containment_.assign(vocab, 0);
  index.occurrences_.assign(vocab, 0);

  for (std::uint32_t sid = 0; sid < corpus.sentence_count(); ++sid) {
    for (TokenId t : corpus.sentence(sid)) {
      ++index.occurrences_[t];
      ++index.token_total_;
    }
  }

  index.offsets_.assign(vocab + 1, 0);
  for (std::size_t t = 0; t < vocab; ++t) {
    index.offsets_[t + 1] = index.offsets_[t] + index.occurrences_[t];
  }
  index.postings_.resize(index.token_total_);

  // Fill in sentence order so postings come out sorted by (sentence, position).
  std::vector<std::uint64_t> cursor(index.offsets_.begin(), index.offsets_.end() - 1);
  std::vector<std::uint32_t> last_sentence(vocab, UINT32_MAX);
  for (std::uint32_t sid = 0; sid < corpus.sentence_count(); ++sid) {
    auto sentence = corpus.sentence(sid);
    for (std::uint32_t pos = 0; pos < sentence.size(); ++pos) {
      TokenId t = sentence[pos];
      index.postings_[cursor[t]++] = Posting{sid, pos};
      if (last_sentence[t] != sid) {
        last_sentence[t] = sid;
        ++index.containment_[t];
      }
    }
  }
  return index;
}

namespace {

constexpr char kMagic[8] = {'D', 'E', 'L', 'E', 'X', 'I', 'X', '1'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

struct Reader {
  const std::string& data;
  std::size_t pos = 0;
  bool ok = true;

  std::uint64_t u64() {
    if (pos + 8 > data.size()) {
      ok = false;
      return 0;
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  std::uint32_t u32() {
    if (pos + 4 > data.size()) {
      ok = false;
      return 0;
    }
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  std::string_view bytes(std::size_t n) {
    if (pos + n > data.size()) {
      ok = false;
      return {};
    }
    std::string_view v(data.data() + pos, n);
    pos += n;
    return v;
  }
};

std::uint64_t fnv64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

void CorpusIndex::save_cache(const std::string& path, const Corpus& corpus) const {
  std::string payload;
  payload.reserve(64 + postings_.size() * 8);

  const std::string& digest = corpus.source_digest();
  const std::string tokcfg = corpus.tokenizer().describe();
  put_u32(payload, static_cast<std::uint32_t>(digest.size()));
  payload += digest;
  put_u32(payload, static_cast<std::uint32_t>(tokcfg.size()));
  payload += tokcfg;
  put_u64(payload, sentence_count_);
  put_u64(payload, token_total_);
  put_u64(payload, vocab_size());

  for (TokenId t = 0; t < vocab_size(); ++t) {
    const std::string& text = corpus.token_text(t);
    put_u32(payload, static_cast<std::uint32_t>(text.size()));
    payload += text;
    put_u32(payload, containment_[t]);
    put_u32(payload, occurrences_[t]);
    for (const Posting& p : postings(t)) {
      put_u32(payload, p.sentence);
      put_u32(payload, p.position);
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write index cache: " + path);
  out.write(kMagic, sizeof kMagic);
  std::string checksum;
  put_u64(checksum, fnv64(payload));
  out.write(checksum.data(), checksum.size());
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError("failed while writing index cache: " + path);
}

std::optional<CorpusIndex> CorpusIndex::load_cache(const std::string& path, const Corpus& corpus,
                                                   std::string* why_miss) {
  const auto miss = [&](const std::string& why) -> std::optional<CorpusIndex> {
    if (why_miss) *why_miss = why;
    return std::nullopt;
  };

  std::ifstream in(path, std::ios::binary);
  if (!in) return miss("no cache file");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() < sizeof kMagic + 8) return miss("cache file truncated");
  if (std::memcmp(data.data(), kMagic, sizeof kMagic) != 0) return miss("bad cache magic");

  Reader r{data, sizeof kMagic};
  std::uint64_t checksum = r.u64();
  if (fnv64(std::string_view(data).substr(r.pos)) != checksum) return miss("cache checksum mismatch");

  std::uint32_t digest_len = r.u32();
  std::string_view digest = r.bytes(digest_len);
  std::uint32_t tokcfg_len = r.u32();
  std::string_view tokcfg = r.bytes(tokcfg_len);
  if (!r.ok) return miss("cache file truncated");
  if (digest != corpus.source_digest()) return miss("cache is for a different corpus (digest mismatch)");
  if (tokcfg != corpus.tokenizer().describe()) return miss("cache is for a different tokenizer config");

  CorpusIndex index;
  index.sentence_count_ = r.u64();
  std::uint64_t token_total = r.u64();
  std::uint64_t vocab = r.u64();
  if (!r.ok || vocab != corpus.vocab().size() || index.sentence_count_ != corpus.sentence_count()) {
    return miss("cache does not match corpus shape");
  }
  index.token_total_ = token_total;
  index.containment_.resize(vocab);
  index.occurrences_.resize(vocab);
  index.offsets_.assign(vocab + 1, 0);
  index.postings_.resize(token_total);

  std::uint64_t cursor = 0;
  for (TokenId t = 0; t < vocab; ++t) {
    std::uint32_t text_len = r.u32();
    std::string_view text = r.bytes(text_len);
    if (!r.ok || text != corpus.token_text(t)) return miss("cache vocabulary mismatch");
    index.containment_[t] = r.u32();
    index.occurrences_[t] = r.u32();
    if (cursor + index.occurrences_[t] > token_total) return miss("cache postings overflow");
    index.offsets_[t] = cursor;
    for (std::uint32_t i = 0; i < index.occurrences_[t]; ++i) {
      index.postings_[cursor].sentence = r.u32();
      index.postings_[cursor].position = r.u32();
      ++cursor;
    }
  }
  index.offsets_[vocab] = cursor;
  if (!r.ok || cursor != token_total || r.pos != data.size()) return miss("cache file truncated");
  return index;
}

}  // namespace delex
